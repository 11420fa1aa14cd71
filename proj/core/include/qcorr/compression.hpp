#pragma once

#include <utility>

#include "qcorr/scenario.hpp"

namespace qcorr {

struct CompressionResult {
    TensorModel compressed;  // lives on (rank P, rank Q)
    double error = 0.0;      // max entrywise correlation deviation
    double state_weight = 0.0; // tr(rho (P (x) Q))
};

// P projects onto the `rank_a` dominant eigenvectors of the reduced state
// tr_B(rho), Q symmetrically. Throws if the state is orthogonal to the
// chosen subspace.
std::pair<Matrix, Matrix> choose_subspaces(const TensorModel& m, int rank_a, int rank_b,
                                           Tolerance tol = Tolerance{});

// POVMs are cut down to P X P on range(P) (completeness survives exactly);
// the state is cut down and renormalized by its weight.
CompressionResult compress(const TensorModel& m, const Matrix& p, const Matrix& q,
                           Tolerance tol = Tolerance{});

} // namespace qcorr
