#pragma once

#include <Eigen/Dense>

#include <complex>
#include <utility>
#include <vector>

#include "qcorr/errors.hpp"

namespace qcorr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Two knobs drive every numerical decision in the library:
// rank_tol is relative (scaled by the largest magnitude present),
// residual_tol is an absolute budget for verification residuals.
struct Tolerance {
    double rank_tol;
    double residual_tol;

    explicit Tolerance(double rank = 1e-9, double residual = 1e-8)
        : rank_tol(rank), residual_tol(residual) {
        if (!(rank > 0.0) || !(residual > 0.0))
            throw ValidationError("Tolerance: rank_tol and residual_tol must be strictly positive");
    }
};

// ---- predicates (all residual-based) ------------------------------------

double hermiticity_residual(const Matrix& m);

bool is_hermitian(const Matrix& m, double tol);
bool is_psd(const Matrix& m, double tol);        // hermitian and min eigenvalue >= -tol
bool is_projection(const Matrix& m, double tol); // hermitian and ||M^2 - M|| <= tol
bool is_isometry(const Matrix& v, double tol);   // ||V'V - 1|| <= tol

// ---- Hermitian eigendecomposition ----------------------------------------

struct Eig {
    RealVector values; // ascending
    Matrix vectors;    // orthonormal columns, one per eigenvalue
};

// Throws ValidationError (with the offending residual) on non-Hermitian input.
Eig hermitian_eig(const Matrix& m, Tolerance tol = Tolerance{});

// ---- Hilbert-Schmidt geometry --------------------------------------------

// <A,B> = tr(A' B)
Complex hs_inner(const Matrix& a, const Matrix& b);
double hs_norm(const Matrix& a);

// Gram-Schmidt in the HS inner product. `existing` must already be
// orthonormal; candidates whose residual after projection falls below
// rank_tol * (largest candidate norm) are dropped.
std::vector<Matrix> hs_orthonormalize(const std::vector<Matrix>& candidates,
                                      std::vector<Matrix> existing,
                                      Tolerance tol = Tolerance{});

// Residual of m against span(basis); basis must be HS-orthonormal.
double span_residual(const std::vector<Matrix>& basis, const Matrix& m);

// ---- polar / Kronecker / partial trace ------------------------------------

// Singular decomposition with every nonzero singular value replaced by 1.
// Zero matrix maps to zero matrix.
Matrix polar_partial_isometry(const Matrix& m, Tolerance tol = Tolerance{});

Matrix kron(const Matrix& a, const Matrix& b);

enum class Side { A, B };

// Traces out the named factor of a (dim_a*dim_b) square matrix.
Matrix partial_trace(const Matrix& m, int dim_a, int dim_b, Side traced_out);

// ---- eigenvalue clustering -------------------------------------------------

// Splits an ascending eigenvalue list into clusters: a new cluster starts
// when consecutive values differ by more than gap_factor * spectral range.
// A spectrum whose range is negligible against its magnitude collapses to
// one cluster. Returns [begin,end) index ranges.
std::vector<std::pair<int, int>> cluster_eigenvalues(const RealVector& ascending,
                                                     double gap_factor = 1e-6);

// Orthonormal columns spanning the range of a projection (eigenvalue ~ 1).
Matrix range_isometry(const Matrix& projection, Tolerance tol = Tolerance{});

} // namespace qcorr
