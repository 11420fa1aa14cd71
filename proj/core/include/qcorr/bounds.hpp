#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "qcorr/scenario.hpp"
#include "qcorr/sdp.hpp"

namespace qcorr {

// ---- moment-matrix upper bounds ------------------------------------------

// One projector in a word: party 0 is Alice, 1 is Bob. Per setting the last
// outcome is eliminated through completeness before words are built.
struct Letter {
    int party;
    int setting;
    int outcome;
    auto operator<=>(const Letter&) const = default;
};

// Canonical form: Alice letters precede Bob letters (cross-party letters
// commute); adjacent same-setting projectors collapse or annihilate.
using Word = std::vector<Letter>;

// nullopt means the word annihilated.
std::optional<Word> reduce_word(const Word& w);

// Adjoint of a canonical word: each party segment reversed in place.
Word adjoint_word(const Word& w);

enum class NpaLevel { one, one_ab };

struct MomentProblem {
    NpaLevel level = NpaLevel::one;
    std::vector<Word> words; // moment matrix row/column labels
    // canonical word class -> representative (row, col) position
    std::map<Word, std::pair<int, int>> index;
    SdpProblem sdp;
};

MomentProblem build_moment_problem(const BellFunctional& f, NpaLevel level);

struct NpaBound {
    double value = 0.0;
    bool certified = false; // solver reached its convergence criterion
    SdpSolution solution;
};

// Upper bound on the commuting-model supremum of the functional.
NpaBound npa_upper_bound(const BellFunctional& f, NpaLevel level,
                         const SdpOptions& opts = SdpOptions{});

// ---- see-saw lower bounds ---------------------------------------------------

// A feasible tensor model together with its functional value.
struct Strategy {
    TensorModel model;
    double value = 0.0;
};

struct SeesawOptions {
    int max_sweeps = 500;
    double gain_tol = 1e-9;
    SdpOptions povm_sdp; // inner solver for settings with more than two outcomes
};

// Alternating maximization over the state (top eigenvector of the Bell
// operator) and the per-setting POVMs, best of `restarts` random starts.
// Restart r uses seed + r.
Strategy seesaw_lower_bound(const BellFunctional& f, int dim_a, int dim_b, int restarts,
                            std::uint64_t seed, const SeesawOptions& opts = SeesawOptions{});

// ---- bracketing -----------------------------------------------------------

struct BracketResult {
    Strategy lower;
    NpaBound upper;
    double gap = 0.0; // upper.value - lower.value
};

// Runs both bounds and enforces the ordering lower <= upper + 1e-5 whenever
// the upper bound is certified.
BracketResult bracket(const BellFunctional& f, int dim_a, int dim_b, NpaLevel level, int restarts,
                      std::uint64_t seed, const SeesawOptions& seesaw_opts = SeesawOptions{},
                      const SdpOptions& npa_opts = SdpOptions{});

} // namespace qcorr
