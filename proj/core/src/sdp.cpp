#include "qcorr/sdp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>

#include "qcorr/random.hpp"

namespace qcorr {

namespace {

constexpr double kRelaxation = 1.6;

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvec(const Vector& v, int n) { return Eigen::Map<const Matrix>(v.data(), n, n); }

Vector psd_project(const Vector& v, int n) {
    Matrix m = unvec(v, n);
    m = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    RealVector lam = es.eigenvalues().cwiseMax(0.0);
    Matrix out = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
    return vec(out);
}

} // namespace

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opts) {
    const int n = p.n;
    if (n < 1) throw DimensionError("solve_sdp: matrix size must be >= 1");
    if (p.constraints.empty())
        throw ValidationError("solve_sdp: constraint list must be nonempty");
    if (p.objective.rows() != n || p.objective.cols() != n)
        throw DimensionError("solve_sdp: objective has wrong shape");
    if (hermiticity_residual(p.objective) > 1e-10 * std::max(1.0, p.objective.norm()))
        throw ValidationError("solve_sdp: objective is not Hermitian");

    const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;

    // keep only constraints with substance; rescale by Frobenius norm
    std::vector<const Matrix*> mats;
    std::vector<double> scales, b_scaled;
    for (const auto& [a, b] : p.constraints) {
        if (a.rows() != n || a.cols() != n)
            throw DimensionError("solve_sdp: constraint matrix has wrong shape");
        if (hermiticity_residual(a) > 1e-10 * std::max(1.0, a.norm()))
            throw ValidationError("solve_sdp: constraint matrix is not Hermitian");
        const double s = a.norm();
        if (s <= 0.0) {
            if (std::abs(b) > 1e-12) {
                SdpSolution sol;
                sol.status = SdpStatus::infeasible_suspected;
                sol.gamma = Matrix::Zero(n, n);
                return sol;
            }
            continue;
        }
        mats.push_back(&a);
        scales.push_back(s);
        b_scaled.push_back(b / s);
    }
    const int mcount = static_cast<int>(mats.size());
    if (mcount == 0) throw ValidationError("solve_sdp: constraint list must be nonempty");

    Matrix amat(mcount, nn); // row m = vec(A_m / ||A_m||)
    for (int m = 0; m < mcount; ++m) amat.row(m) = vec(*mats[m]).transpose() / scales[static_cast<std::size_t>(m)];
    const Matrix aconj = amat.conjugate();
    const Eigen::Map<const RealVector> bs(b_scaled.data(), mcount);

    const RealMatrix gram = (aconj * amat.transpose()).real();
    Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(gram);

    SdpSolution sol;
    sol.gamma = Matrix::Zero(n, n);

    // consistency of the affine system: b must lie in the range of the Gram map
    {
        RealVector probe = cod.solve(bs);
        if ((gram * probe - bs).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, bs.cwiseAbs().maxCoeff())) {
            sol.status = SdpStatus::infeasible_suspected;
            return sol;
        }
    }

    const double obj_scale = std::max(1.0, p.objective.norm());
    const Vector c_scaled = vec(p.objective) / obj_scale;

    Rng rng(opts.seed);
    Vector z = vec(random_hermitian(n, rng)) / std::sqrt(static_cast<double>(n));
    Vector u = Vector::Zero(nn);
    RealVector lambda = RealVector::Zero(mcount);

    auto affine_project = [&](const Vector& v) {
        RealVector r = (aconj * v).real() - bs;
        lambda = cod.solve(r);
        return Vector(v - amat.transpose() * lambda.cast<Complex>());
    };

    sol.residual_history.reserve(static_cast<std::size_t>(opts.max_iters));
    for (int it = 1; it <= opts.max_iters; ++it) {
        Vector x = affine_project(z - u + c_scaled);
        Vector x_relaxed = kRelaxation * x + (1.0 - kRelaxation) * z;
        Vector z_new = psd_project(x_relaxed + u, n);
        u += x_relaxed - z_new;
        z = std::move(z_new);

        // residuals on the original scale
        RealVector feas = (aconj * z).real() - bs;
        double primal = 0.0;
        for (int m = 0; m < mcount; ++m)
            primal = std::max(primal, scales[static_cast<std::size_t>(m)] * std::abs(feas(m)));
        const double dual = (x - z).norm() / (1.0 + x.norm());
        const double pobj = obj_scale * c_scaled.dot(z).real(); // dot conjugates the left factor
        const double dobj = obj_scale * bs.dot(lambda);
        const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

        sol.residuals = SdpResiduals{primal, dual, gap};
        sol.residual_history.push_back(std::max({primal, dual, gap}));
        sol.iterations = it;
        if (primal < opts.eps && dual < opts.eps && gap < opts.eps) {
            sol.status = SdpStatus::converged;
            break;
        }
    }

    Matrix gamma = unvec(z, n);
    sol.gamma = 0.5 * (gamma + gamma.adjoint());
    sol.value = (sol.gamma * p.objective).trace().real();
    if (sol.status != SdpStatus::converged) sol.status = SdpStatus::max_iters;
    return sol;
}

} // namespace qcorr
