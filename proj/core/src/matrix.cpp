#include "qcorr/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace qcorr {

double hermiticity_residual(const Matrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    return (m - m.adjoint()).norm();
}

bool is_hermitian(const Matrix& m, double tol) {
    return m.rows() == m.cols() && hermiticity_residual(m) <= tol;
}

bool is_psd(const Matrix& m, double tol) {
    if (!is_hermitian(m, tol)) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

bool is_projection(const Matrix& m, double tol) {
    if (!is_hermitian(m, tol)) return false;
    return (m * m - m).norm() <= tol;
}

bool is_isometry(const Matrix& v, double tol) {
    Matrix g = v.adjoint() * v;
    return (g - Matrix::Identity(g.rows(), g.cols())).norm() <= tol;
}

Eig hermitian_eig(const Matrix& m, Tolerance tol) {
    if (m.rows() != m.cols())
        throw DimensionError("hermitian_eig: matrix is not square");
    const double res = hermiticity_residual(m);
    if (res > tol.residual_tol)
        throw ValidationError("hermitian_eig: input not Hermitian, residual " + std::to_string(res));
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
    if (es.info() != Eigen::Success)
        throw DegeneracyError("hermitian_eig: eigensolver failed to converge");
    return Eig{es.eigenvalues(), es.eigenvectors()};
}

Complex hs_inner(const Matrix& a, const Matrix& b) {
    return (a.array().conjugate() * b.array()).sum();
}

double hs_norm(const Matrix& a) { return a.norm(); }

std::vector<Matrix> hs_orthonormalize(const std::vector<Matrix>& candidates,
                                      std::vector<Matrix> existing,
                                      Tolerance tol) {
    Eigen::Index rows = -1, cols = -1;
    auto check_shape = [&](const Matrix& m) {
        if (rows < 0) { rows = m.rows(); cols = m.cols(); }
        else if (m.rows() != rows || m.cols() != cols)
            throw DimensionError("hs_orthonormalize: matrices do not share one shape");
    };
    for (const auto& m : existing) check_shape(m);
    for (const auto& m : candidates) check_shape(m);

    double max_norm = 0.0;
    for (const auto& c : candidates) max_norm = std::max(max_norm, hs_norm(c));
    const double drop = tol.rank_tol * max_norm;

    for (const auto& c : candidates) {
        Matrix v = c;
        // two passes of modified Gram-Schmidt keep the Gram matrix at identity
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& e : existing) v -= hs_inner(e, v) * e;
        const double n = hs_norm(v);
        if (n <= drop) continue;
        existing.push_back(v / n);
    }
    return existing;
}

double span_residual(const std::vector<Matrix>& basis, const Matrix& m) {
    Matrix v = m;
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& e : basis) v -= hs_inner(e, v) * e;
    return hs_norm(v);
}

Matrix polar_partial_isometry(const Matrix& m, Tolerance tol) {
    if (m.size() == 0) return m;
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) <= 0.0) return Matrix::Zero(m.rows(), m.cols());
    const double cut = tol.rank_tol * s(0);
    Eigen::Index r = 0;
    while (r < s.size() && s(r) > cut) ++r;
    if (r == 0) return Matrix::Zero(m.rows(), m.cols());
    return svd.matrixU().leftCols(r) * svd.matrixV().leftCols(r).adjoint();
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix partial_trace(const Matrix& m, int dim_a, int dim_b, Side traced_out) {
    const Eigen::Index n = static_cast<Eigen::Index>(dim_a) * dim_b;
    if (dim_a < 1 || dim_b < 1 || m.rows() != n || m.cols() != n)
        throw DimensionError("partial_trace: matrix is not (dim_a*dim_b) square");
    if (traced_out == Side::B) {
        Matrix out = Matrix::Zero(dim_a, dim_a);
        for (int i = 0; i < dim_a; ++i)
            for (int j = 0; j < dim_a; ++j)
                for (int k = 0; k < dim_b; ++k)
                    out(i, j) += m(i * dim_b + k, j * dim_b + k);
        return out;
    }
    Matrix out = Matrix::Zero(dim_b, dim_b);
    for (int i = 0; i < dim_b; ++i)
        for (int j = 0; j < dim_b; ++j)
            for (int k = 0; k < dim_a; ++k)
                out(i, j) += m(k * dim_b + i, k * dim_b + j);
    return out;
}

std::vector<std::pair<int, int>> cluster_eigenvalues(const RealVector& ascending,
                                                     double gap_factor) {
    std::vector<std::pair<int, int>> clusters;
    const int n = static_cast<int>(ascending.size());
    if (n == 0) return clusters;
    const double range = ascending(n - 1) - ascending(0);
    const double scale = std::max({std::abs(ascending(0)), std::abs(ascending(n - 1)), 1.0});
    if (range <= 1e-12 * scale) {
        clusters.emplace_back(0, n);
        return clusters;
    }
    const double gap = gap_factor * range;
    int begin = 0;
    for (int i = 1; i < n; ++i) {
        if (ascending(i) - ascending(i - 1) > gap) {
            clusters.emplace_back(begin, i);
            begin = i;
        }
    }
    clusters.emplace_back(begin, n);
    return clusters;
}

Matrix range_isometry(const Matrix& projection, Tolerance tol) {
    Eig e = hermitian_eig(projection, tol);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < e.values.size(); ++i)
        if (e.values(i) > 0.5) keep.push_back(i);
    Matrix iso(projection.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) iso.col(c) = e.vectors.col(keep[c]);
    return iso;
}

} // namespace qcorr
