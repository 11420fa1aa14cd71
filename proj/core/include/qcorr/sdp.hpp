#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qcorr/matrix.hpp"

namespace qcorr {

// maximize <C, Gamma>  s.t.  <A_m, Gamma> = b_m,  Gamma >= 0,
// with <A, B> = tr(A B) on Hermitian matrices.
struct SdpProblem {
    int n = 0;
    Matrix objective;                                  // Hermitian C
    std::vector<std::pair<Matrix, double>> constraints; // (A_m, b_m), A_m Hermitian
};

enum class SdpStatus { converged, max_iters, infeasible_suspected };

struct SdpResiduals {
    double primal = 0.0; // max_m |<A_m, Gamma> - b_m|
    double dual = 0.0;   // consensus between the affine and PSD copies
    double gap = 0.0;    // normalized |primal objective - dual objective|
};

struct SdpOptions {
    int max_iters = 50000;
    double eps = 1e-7;
    std::uint64_t seed = 0; // used only for the initial iterate
};

struct SdpSolution {
    double value = 0.0;
    Matrix gamma; // PSD by construction
    SdpStatus status = SdpStatus::max_iters;
    SdpResiduals residuals;
    int iterations = 0;
    std::vector<double> residual_history; // max residual, one entry per iteration
};

// Alternating-direction scheme: one affine projection (precomputed
// least-squares factorization of the constraint Gram matrix), one PSD cone
// projection (eigenvalue clipping) and a dual update per iteration, with
// over-relaxation 1.6. Constraints are rescaled by their Frobenius norms
// once up front.
SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opts = SdpOptions{});

} // namespace qcorr
