#pragma once

#include <cstdint>
#include <vector>

#include "qcorr/algebra.hpp"
#include "qcorr/scenario.hpp"

namespace qcorr {

// One central block: the compressed algebra acts as (d x d matrices) (x) 1_m
// on the rank-(d*m) range of the block projection.
struct BlockFactorization {
    int block_index = 0;
    int d = 0; // factor dimension seen by Alice
    int m = 0; // multiplicity, the dimension seen by Bob
    Matrix block_isometry; // ambient_dim x (d*m), orthonormal columns spanning the block
    Matrix unitary;        // (d*m) x (d*m), block coordinates -> C^d (x) C^m

    // verification residuals recorded during construction
    double unitarity_residual = 0.0;
    double alice_tensor_residual = 0.0; // off-tensor part of mapped Alice generators
    double bob_tensor_residual = 0.0;   // off-tensor part of mapped Bob generators
};

// Explicit tensor realization of a commuting model: an isometry V into
// C^{dim_a} (x) C^{dim_b} and a tensor model reproducing its correlations.
struct TensorRealization {
    std::vector<BlockFactorization> blocks;
    int dim_a = 0; // sum of block d's
    int dim_b = 0; // sum of block m's
    Matrix isometry; // (dim_a*dim_b) x original_dim, V'V = 1
    TensorModel tensor_model;
    double max_deviation = 0.0; // entrywise table deviation recorded at build time
};

// Factorizes the restriction of `ambient` to the range of a minimal central
// projection. The compressed algebra must be a factor; matrix units are
// built from a generic element's spectral clusters, with partial isometries
// q_i b q_1 joining them.
BlockFactorization factor_block(const AlgebraBasis& ambient, const Matrix& block_projection,
                                std::uint64_t seed, Tolerance tol = Tolerance{});

// Full pipeline: generate Alice's algebra, decompose its center, factorize
// every block, and assemble the isometry, mapped POVMs and state.
TensorRealization doubling_the_center(const CommutingModel& m, std::uint64_t seed,
                                      Tolerance tol = Tolerance{});

// Largest entrywise difference between the commuting model's table and the
// realization's tensor table.
double verify_realization(const CommutingModel& m, const TensorRealization& r,
                          Tolerance tol = Tolerance{});

} // namespace qcorr
