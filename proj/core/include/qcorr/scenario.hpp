#pragma once

#include <string>
#include <vector>

#include "qcorr/matrix.hpp"

namespace qcorr {

// Outcome counts per measurement setting, one list per party.
struct MeasurementLayout {
    std::vector<int> alice;
    std::vector<int> bob;

    bool operator==(const MeasurementLayout&) const = default;
    int alice_settings() const { return static_cast<int>(alice.size()); }
    int bob_settings() const { return static_cast<int>(bob.size()); }
};

// Throws ValidationError unless every party has at least one setting and
// every setting at least two outcomes.
void require_valid(const MeasurementLayout& layout);

// Both parties' POVMs act on one space of dimension `dim`; all cross-party
// commutators are required to vanish.
struct CommutingModel {
    int dim = 0;
    MeasurementLayout layout;
    std::vector<std::vector<Matrix>> alice_povms; // [setting][outcome]
    std::vector<std::vector<Matrix>> bob_povms;
    Matrix state; // density matrix
};

// Each party acts on its own factor of a dim_a x dim_b tensor product.
struct TensorModel {
    int dim_a = 0;
    int dim_b = 0;
    MeasurementLayout layout;
    std::vector<std::vector<Matrix>> alice_povms; // on dim_a
    std::vector<std::vector<Matrix>> bob_povms;   // on dim_b
    Matrix state; // density matrix on dim_a*dim_b
};

// ---- validation -----------------------------------------------------------

struct Check {
    std::string name;
    double residual = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<Check> checks;

    bool passed() const;
    double max_residual() const;
    const Check* first_failure() const;
};

ValidationReport validate(const CommutingModel& m, Tolerance tol = Tolerance{});
ValidationReport validate(const TensorModel& m, Tolerance tol = Tolerance{});

// Throws ValidationError naming the first failing check.
void require_valid(const CommutingModel& m, Tolerance tol = Tolerance{});
void require_valid(const TensorModel& m, Tolerance tol = Tolerance{});

// ---- correlation tables -----------------------------------------------------

// p(i,j|alpha,beta) stored dense over the layout.
struct CorrelationTable {
    MeasurementLayout layout;
    std::vector<double> values;

    static CorrelationTable zeros(const MeasurementLayout& layout);
    int index(int i, int j, int alpha, int beta) const;
    double& at(int i, int j, int alpha, int beta);
    double at(int i, int j, int alpha, int beta) const;
};

// Range, per-setting-pair normalization and both no-signaling marginals.
ValidationReport validate_table(const CorrelationTable& t, Tolerance tol = Tolerance{});

// p = tr(rho X_{i,alpha} Y_{j,beta}); the model must validate.
CorrelationTable correlations_commuting(const CommutingModel& m, Tolerance tol = Tolerance{});

// p = tr(rho (X_{i,alpha} (x) Y_{j,beta})); the model must validate.
CorrelationTable correlations_tensor(const TensorModel& m, Tolerance tol = Tolerance{});

// Largest entrywise difference; layouts must match.
double max_table_deviation(const CorrelationTable& a, const CorrelationTable& b);

// Embeds a tensor model as a commuting model via X (x) 1 and 1 (x) Y.
CommutingModel lift(const TensorModel& m);

// ---- Bell functionals ---------------------------------------------------------

// Linear form sum c_{ij,alpha,beta} p(i,j|alpha,beta), stored dense in
// full-probability coefficients.
struct BellFunctional {
    MeasurementLayout layout;
    std::vector<double> coefficients;

    static BellFunctional zeros(const MeasurementLayout& layout);
    double& at(int i, int j, int alpha, int beta);
    double at(int i, int j, int alpha, int beta) const;
};

// Correlator form (two-outcome settings only): coefficient c on the pair
// (i,j) contributes c*(-1)^{alpha+beta} to every outcome cell.
void add_correlator(BellFunctional& f, int i, int j, double c);

double bell_value(const CorrelationTable& t, const BellFunctional& f);

} // namespace qcorr
