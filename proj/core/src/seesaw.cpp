#include "qcorr/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcorr/random.hpp"

namespace qcorr {

namespace {

Matrix bell_operator(const BellFunctional& f, const std::vector<std::vector<Matrix>>& xs,
                     const std::vector<std::vector<Matrix>>& ys, int dim_a, int dim_b) {
    Matrix g = Matrix::Zero(dim_a * dim_b, dim_a * dim_b);
    const auto& L = f.layout;
    for (int i = 0; i < L.alice_settings(); ++i)
        for (int a = 0; a < L.alice[i]; ++a)
            for (int j = 0; j < L.bob_settings(); ++j)
                for (int b = 0; b < L.bob[j]; ++b) {
                    const double c = f.at(i, j, a, b);
                    if (c != 0.0) g += c * kron(xs[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)],
                                                ys[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)]);
                }
    return g;
}

double objective_value(const BellFunctional& f, const Matrix& rho,
                       const std::vector<std::vector<Matrix>>& xs,
                       const std::vector<std::vector<Matrix>>& ys, int dim_a, int dim_b) {
    return (rho * bell_operator(f, xs, ys, dim_a, dim_b)).trace().real();
}

// projector onto the nonnegative eigenspace
Matrix nonneg_eigenspace_projector(const Matrix& h) {
    Eig e = hermitian_eig(0.5 * (h + h.adjoint()), Tolerance(1e-9, 1.0));
    Matrix p = Matrix::Zero(h.rows(), h.cols());
    for (Eigen::Index k = 0; k < e.values.size(); ++k)
        if (e.values(k) >= 0.0) {
            Vector v = e.vectors.col(k);
            p += v * v.adjoint();
        }
    return p;
}

// optimal POVM for max sum_a tr(X_a R_a) with more than two outcomes:
// block-diagonal SDP, then a congruence with S^{-1/2} restores exact
// completeness
std::vector<Matrix> povm_update_sdp(const std::vector<Matrix>& effective, int d,
                                    const SdpOptions& opts) {
    const int outcomes = static_cast<int>(effective.size());
    const int n = outcomes * d;
    auto e = [&](int r, int c) {
        Matrix m = Matrix::Zero(n, n);
        m(r, c) = Complex(1.0, 0.0);
        return m;
    };

    SdpProblem prob;
    prob.n = n;
    prob.objective = Matrix::Zero(n, n);
    for (int a = 0; a < outcomes; ++a) {
        Matrix r = 0.5 * (effective[static_cast<std::size_t>(a)] +
                          effective[static_cast<std::size_t>(a)].adjoint());
        prob.objective.block(a * d, a * d, d, d) = r;
    }

    // completeness: sum of diagonal blocks equals the identity
    for (int r = 0; r < d; ++r)
        for (int c = r; c < d; ++c) {
            Matrix re = Matrix::Zero(n, n), im = Matrix::Zero(n, n);
            for (int a = 0; a < outcomes; ++a) {
                re += e(a * d + r, a * d + c) + e(a * d + c, a * d + r);
                im += Complex(0.0, 1.0) * (e(a * d + r, a * d + c) - e(a * d + c, a * d + r));
            }
            prob.constraints.emplace_back(std::move(re), r == c ? 2.0 : 0.0);
            if (r != c) prob.constraints.emplace_back(std::move(im), 0.0);
        }
    // off-diagonal blocks vanish
    for (int a = 0; a < outcomes; ++a)
        for (int a2 = a + 1; a2 < outcomes; ++a2)
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) {
                    prob.constraints.emplace_back(e(a * d + r, a2 * d + c) + e(a2 * d + c, a * d + r), 0.0);
                    prob.constraints.emplace_back(
                        Complex(0.0, 1.0) * (e(a * d + r, a2 * d + c) - e(a2 * d + c, a * d + r)), 0.0);
                }

    SdpSolution sol = solve_sdp(prob, opts);

    std::vector<Matrix> povm;
    povm.reserve(static_cast<std::size_t>(outcomes));
    Matrix total = Matrix::Zero(d, d);
    for (int a = 0; a < outcomes; ++a) {
        Matrix q = sol.gamma.block(a * d, a * d, d, d);
        q = 0.5 * (q + q.adjoint());
        povm.push_back(q);
        total += q;
    }
    Eig et = hermitian_eig(total, Tolerance(1e-9, 1.0));
    RealVector inv_sqrt = et.values.cwiseMax(1e-12).cwiseInverse().cwiseSqrt();
    Matrix s = et.vectors * inv_sqrt.asDiagonal() * et.vectors.adjoint();
    for (auto& q : povm) q = s * q * s;
    return povm;
}

} // namespace

Strategy seesaw_lower_bound(const BellFunctional& f, int dim_a, int dim_b, int restarts,
                            std::uint64_t seed, const SeesawOptions& opts) {
    require_valid(f.layout);
    if (dim_a < 1 || dim_b < 1) throw DimensionError("seesaw_lower_bound: dims must be >= 1");
    if (restarts < 1) throw DimensionError("seesaw_lower_bound: restarts must be >= 1");

    const auto& L = f.layout;
    Strategy best;
    bool have_best = false;

    for (int restart = 0; restart < restarts; ++restart) {
        Rng rng(seed + static_cast<std::uint64_t>(restart));
        std::vector<std::vector<Matrix>> xs(static_cast<std::size_t>(L.alice_settings()));
        std::vector<std::vector<Matrix>> ys(static_cast<std::size_t>(L.bob_settings()));
        for (int i = 0; i < L.alice_settings(); ++i)
            xs[static_cast<std::size_t>(i)] = random_povm(dim_a, L.alice[i], rng);
        for (int j = 0; j < L.bob_settings(); ++j)
            ys[static_cast<std::size_t>(j)] = random_povm(dim_b, L.bob[j], rng);

        Matrix rho = Matrix::Zero(dim_a * dim_b, dim_a * dim_b);
        double value = -std::numeric_limits<double>::infinity();

        for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
            // state: top eigenvector of the Bell operator
            Eig eg = hermitian_eig(bell_operator(f, xs, ys, dim_a, dim_b), Tolerance(1e-9, 1.0));
            Vector top = eg.vectors.col(eg.vectors.cols() - 1);
            rho = top * top.adjoint();
            double current = eg.values(eg.values.size() - 1);

            // Alice settings against fixed state and Bob POVMs
            std::vector<std::vector<Matrix>> mb(static_cast<std::size_t>(L.bob_settings()));
            for (int j = 0; j < L.bob_settings(); ++j)
                for (int b = 0; b < L.bob[j]; ++b)
                    mb[static_cast<std::size_t>(j)].push_back(partial_trace(
                        kron(Matrix::Identity(dim_a, dim_a), ys[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)]) * rho,
                        dim_a, dim_b, Side::B));
            for (int i = 0; i < L.alice_settings(); ++i) {
                std::vector<Matrix> effective(static_cast<std::size_t>(L.alice[i]),
                                              Matrix::Zero(dim_a, dim_a));
                for (int a = 0; a < L.alice[i]; ++a)
                    for (int j = 0; j < L.bob_settings(); ++j)
                        for (int b = 0; b < L.bob[j]; ++b) {
                            const double c = f.at(i, j, a, b);
                            if (c != 0.0)
                                effective[static_cast<std::size_t>(a)] +=
                                    c * mb[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)];
                        }
                std::vector<Matrix> candidate;
                if (L.alice[i] == 2) {
                    Matrix p = nonneg_eigenspace_projector(effective[0] - effective[1]);
                    candidate = {p, Matrix::Identity(dim_a, dim_a) - p};
                } else {
                    candidate = povm_update_sdp(effective, dim_a, opts.povm_sdp);
                }
                auto saved = xs[static_cast<std::size_t>(i)];
                xs[static_cast<std::size_t>(i)] = candidate;
                const double vnew = objective_value(f, rho, xs, ys, dim_a, dim_b);
                if (vnew >= current)
                    current = vnew;
                else
                    xs[static_cast<std::size_t>(i)] = std::move(saved); // keep the monotone iterate
            }

            // Bob settings against fixed state and updated Alice POVMs
            std::vector<std::vector<Matrix>> ma(static_cast<std::size_t>(L.alice_settings()));
            for (int i = 0; i < L.alice_settings(); ++i)
                for (int a = 0; a < L.alice[i]; ++a)
                    ma[static_cast<std::size_t>(i)].push_back(partial_trace(
                        kron(xs[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)], Matrix::Identity(dim_b, dim_b)) * rho,
                        dim_a, dim_b, Side::A));
            for (int j = 0; j < L.bob_settings(); ++j) {
                std::vector<Matrix> effective(static_cast<std::size_t>(L.bob[j]),
                                              Matrix::Zero(dim_b, dim_b));
                for (int b = 0; b < L.bob[j]; ++b)
                    for (int i = 0; i < L.alice_settings(); ++i)
                        for (int a = 0; a < L.alice[i]; ++a) {
                            const double c = f.at(i, j, a, b);
                            if (c != 0.0)
                                effective[static_cast<std::size_t>(b)] +=
                                    c * ma[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)];
                        }
                std::vector<Matrix> candidate;
                if (L.bob[j] == 2) {
                    Matrix p = nonneg_eigenspace_projector(effective[0] - effective[1]);
                    candidate = {p, Matrix::Identity(dim_b, dim_b) - p};
                } else {
                    candidate = povm_update_sdp(effective, dim_b, opts.povm_sdp);
                }
                auto saved = ys[static_cast<std::size_t>(j)];
                ys[static_cast<std::size_t>(j)] = candidate;
                const double vnew = objective_value(f, rho, xs, ys, dim_a, dim_b);
                if (vnew >= current)
                    current = vnew;
                else
                    ys[static_cast<std::size_t>(j)] = std::move(saved);
            }

            const double gain = current - value;
            value = current;
            if (gain < opts.gain_tol && sweep > 0) break;
        }

        TensorModel model;
        model.dim_a = dim_a;
        model.dim_b = dim_b;
        model.layout = L;
        model.alice_povms = xs;
        model.bob_povms = ys;
        model.state = 0.5 * (rho + rho.adjoint());

        // stored value goes through the scenario path, not the internal one
        const double recomputed = bell_value(correlations_tensor(model), f);
        if (!have_best || recomputed > best.value) {
            best = Strategy{std::move(model), recomputed};
            have_best = true;
        }
    }
    return best;
}

BracketResult bracket(const BellFunctional& f, int dim_a, int dim_b, NpaLevel level, int restarts,
                      std::uint64_t seed, const SeesawOptions& seesaw_opts,
                      const SdpOptions& npa_opts) {
    BracketResult out;
    out.lower = seesaw_lower_bound(f, dim_a, dim_b, restarts, seed, seesaw_opts);
    out.upper = npa_upper_bound(f, level, npa_opts);
    out.gap = out.upper.value - out.lower.value;
    if (out.upper.certified && out.lower.value > out.upper.value + 1e-5)
        throw Error("bracket: ordering violated, see-saw value " + std::to_string(out.lower.value) +
                    " exceeds certified bound " + std::to_string(out.upper.value));
    return out;
}

} // namespace qcorr
