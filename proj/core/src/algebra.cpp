#include "qcorr/algebra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "qcorr/random.hpp"

namespace qcorr {

namespace {

Vector vec(const Matrix& m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, int n) {
    return Eigen::Map<const Matrix>(v.data(), n, n);
}

// Eigenvectors of a PSD operator on HS space whose eigenvalue is numerically
// zero, returned as HS-orthonormal matrices.
std::vector<Matrix> null_space_matrices(const Matrix& psd_op, int n, Tolerance tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (psd_op + psd_op.adjoint()));
    const RealVector& ev = es.eigenvalues();
    const double lmax = std::max(ev(ev.size() - 1), 0.0);
    const double cut = tol.rank_tol * std::max(lmax, 1.0);
    std::vector<Matrix> out;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) <= cut) out.push_back(unvec(es.eigenvectors().col(i), n));
    return out;
}

} // namespace

AlgebraBasis generate_star_algebra(const std::vector<Matrix>& generators, int n, Tolerance tol) {
    for (const auto& g : generators)
        if (g.rows() != n || g.cols() != n)
            throw DimensionError("generate_star_algebra: generator is not n x n");

    std::vector<Matrix> seed;
    seed.push_back(Matrix::Identity(n, n));
    for (const auto& g : generators) {
        seed.push_back(g);
        seed.push_back(g.adjoint());
    }
    std::vector<Matrix> basis = hs_orthonormalize(seed, {}, tol);

    // Worklist closure: every new basis element is multiplied against the
    // whole current basis from both sides exactly once.
    std::size_t fresh_begin = 0;
    const std::size_t max_dim = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    while (fresh_begin < basis.size() && basis.size() < max_dim) {
        const std::size_t old_size = basis.size();
        std::vector<Matrix> products;
        for (std::size_t i = 0; i < old_size; ++i)
            for (std::size_t j = 0; j < old_size; ++j) {
                if (i < fresh_begin && j < fresh_begin) continue; // both seen already
                products.push_back(basis[i] * basis[j]);
            }
        basis = hs_orthonormalize(products, std::move(basis), tol);
        fresh_begin = old_size;
    }
    return AlgebraBasis{n, std::move(basis), true};
}

AlgebraBasis commutant(const AlgebraBasis& a, Tolerance tol) {
    const int n = a.ambient_dim;
    const int nn = n * n;
    const Matrix id = Matrix::Identity(n, n);
    Matrix s = Matrix::Zero(nn, nn);
    for (const auto& b : a.basis) {
        // vec(Z B - B Z) = (B^T (x) 1 - 1 (x) B) vec(Z), column-major vec
        Matrix k = kron(b.transpose(), id) - kron(id, b);
        s += k.adjoint() * k;
    }
    std::vector<Matrix> basis = null_space_matrices(s, n, tol);
    return AlgebraBasis{n, std::move(basis), true};
}

AlgebraBasis center(const AlgebraBasis& a, Tolerance tol) {
    const int n = a.ambient_dim;
    const int nn = n * n;
    AlgebraBasis comm = commutant(a, tol);

    auto span_projector = [&](const std::vector<Matrix>& basis) {
        Matrix v(nn, static_cast<Eigen::Index>(basis.size()));
        for (std::size_t i = 0; i < basis.size(); ++i) v.col(static_cast<Eigen::Index>(i)) = vec(basis[i]);
        return Matrix(v * v.adjoint());
    };
    const Matrix id = Matrix::Identity(nn, nn);
    Matrix gram = (id - span_projector(a.basis)) + (id - span_projector(comm.basis));
    std::vector<Matrix> basis = null_space_matrices(gram, n, tol);
    return AlgebraBasis{n, std::move(basis), true};
}

bool is_commutative(const AlgebraBasis& a, double tol) {
    for (std::size_t i = 0; i < a.basis.size(); ++i)
        for (std::size_t j = i + 1; j < a.basis.size(); ++j)
            if ((a.basis[i] * a.basis[j] - a.basis[j] * a.basis[i]).norm() > tol) return false;
    return true;
}

namespace {

// A generic Hermitian element of a *-closed span: Herm of a complex
// Gaussian combination of the basis.
Matrix generic_hermitian_element(const std::vector<Matrix>& basis, int n, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix h = Matrix::Zero(n, n);
    for (const auto& b : basis) h += Complex(gauss(rng), gauss(rng)) * b;
    return 0.5 * (h + h.adjoint());
}

} // namespace

CentralDecomposition minimal_central_projections(const AlgebraBasis& z, std::uint64_t seed,
                                                 Tolerance tol) {
    const int n = z.ambient_dim;
    if (!is_commutative(z, tol.residual_tol))
        throw ValidationError("minimal_central_projections: input algebra is not commutative");

    Rng rng(seed);
    std::string last_failure = "no attempt made";
    for (int attempt = 0; attempt < 8; ++attempt) {
        Matrix h = generic_hermitian_element(z.basis, n, rng);
        Eig e = hermitian_eig(h, Tolerance(tol.rank_tol, 1e-6));
        auto clusters = cluster_eigenvalues(e.values);

        if (static_cast<int>(clusters.size()) != z.dim()) {
            last_failure = "found " + std::to_string(clusters.size()) + " clusters, center has dimension " +
                           std::to_string(z.dim());
            continue;
        }

        CentralDecomposition out;
        bool ok = true;
        for (const auto& [begin, end] : clusters) {
            const int rank = end - begin;
            Matrix p = Matrix::Zero(n, n);
            for (int k = begin; k < end; ++k) {
                Vector v = e.vectors.col(k);
                p += v * v.adjoint();
            }
            if (span_residual(z.basis, p) > tol.residual_tol) {
                last_failure = "cluster projection is not in the center span";
                ok = false;
                break;
            }
            // minimality: the center compressed by p must be the scalars
            Matrix w = range_isometry(p, tol);
            std::vector<Matrix> compressed;
            compressed.reserve(z.basis.size());
            for (const auto& b : z.basis) compressed.push_back(w.adjoint() * b * w);
            if (hs_orthonormalize(compressed, {}, tol).size() != 1) {
                last_failure = "cluster projection is not minimal";
                ok = false;
                break;
            }
            out.projections.push_back(std::move(p));
            out.block_dims.push_back(rank);
        }
        if (!ok) continue;

        Matrix sum = Matrix::Zero(n, n);
        for (const auto& p : out.projections) sum += p;
        if ((sum - Matrix::Identity(n, n)).norm() > tol.residual_tol) {
            last_failure = "projections do not sum to the identity";
            continue;
        }
        return out;
    }
    throw DegeneracyError("minimal_central_projections: 8 generic draws failed (" + last_failure + ")");
}

double algebra_closure_residual(const AlgebraBasis& a) {
    double res = span_residual(a.basis, Matrix::Identity(a.ambient_dim, a.ambient_dim));
    for (const auto& x : a.basis) {
        res = std::max(res, span_residual(a.basis, x.adjoint()));
        for (const auto& y : a.basis) res = std::max(res, span_residual(a.basis, x * y));
    }
    return res;
}

} // namespace qcorr
