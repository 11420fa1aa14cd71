#pragma once

#include <cstdint>
#include <vector>

#include "qcorr/matrix.hpp"

namespace qcorr {

// A unital *-subalgebra of the n x n matrices, held as an HS-orthonormal
// basis of its linear span.
struct AlgebraBasis {
    int ambient_dim = 0;
    std::vector<Matrix> basis;
    bool contains_identity = true;

    int dim() const { return static_cast<int>(basis.size()); }
};

// Smallest unital *-subalgebra containing the generators: seed with
// {1} u generators u adjoints, orthonormalize, then adjoin pairwise
// products until the dimension stabilizes.
AlgebraBasis generate_star_algebra(const std::vector<Matrix>& generators, int n,
                                   Tolerance tol = Tolerance{});

// {Z : [Z, B] = 0 for every basis element B}, computed as the null space of
// the PSD operator sum_a K_a' K_a with K_a : Z -> Z B_a - B_a Z acting on
// vectorized matrices.
AlgebraBasis commutant(const AlgebraBasis& a, Tolerance tol = Tolerance{});

// a n commutant(a), via the null space of (1 - P_a) + (1 - P_a') on
// Hilbert-Schmidt space.
AlgebraBasis center(const AlgebraBasis& a, Tolerance tol = Tolerance{});

// Mutually orthogonal minimal projections of a commutative algebra,
// summing to the identity. block_dims[k] = rank(projections[k]).
struct CentralDecomposition {
    std::vector<Matrix> projections;
    std::vector<int> block_dims;
};

// Spectral projections of a generic Hermitian element of the center;
// minimality of every projection is verified, and degenerate draws are
// retried up to 8 times before giving up.
CentralDecomposition minimal_central_projections(const AlgebraBasis& z, std::uint64_t seed,
                                                 Tolerance tol = Tolerance{});

// Max residual over basis pairs of products/adjoints against span(basis),
// plus the identity membership residual. Zero for a genuine *-algebra.
double algebra_closure_residual(const AlgebraBasis& a);

// True if all basis elements commute pairwise within tol.
bool is_commutative(const AlgebraBasis& a, double tol);

} // namespace qcorr
