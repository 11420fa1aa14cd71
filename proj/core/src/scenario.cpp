#include "qcorr/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcorr {

void require_valid(const MeasurementLayout& layout) {
    if (layout.alice.empty() || layout.bob.empty())
        throw ValidationError("layout: each party needs at least one setting");
    for (int n : layout.alice)
        if (n < 2) throw ValidationError("layout: every Alice setting needs >= 2 outcomes");
    for (int n : layout.bob)
        if (n < 2) throw ValidationError("layout: every Bob setting needs >= 2 outcomes");
}

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

double ValidationReport::max_residual() const {
    double r = 0.0;
    for (const auto& c : checks) r = std::max(r, c.residual);
    return r;
}

const Check* ValidationReport::first_failure() const {
    for (const auto& c : checks)
        if (!c.pass) return &c;
    return nullptr;
}

namespace {

double min_eigenvalue(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void check_povm_family(ValidationReport& rep, const std::string& party,
                       const std::vector<std::vector<Matrix>>& povms,
                       const std::vector<int>& outcome_counts, int dim, Tolerance tol) {
    if (static_cast<int>(povms.size()) != static_cast<int>(outcome_counts.size()))
        throw DimensionError(party + " POVM family does not match layout");
    const Matrix id = Matrix::Identity(dim, dim);
    for (std::size_t i = 0; i < povms.size(); ++i) {
        if (static_cast<int>(povms[i].size()) != outcome_counts[i])
            throw DimensionError(party + " setting " + std::to_string(i) +
                                 " does not match layout outcome count");
        Matrix sum = Matrix::Zero(dim, dim);
        for (std::size_t a = 0; a < povms[i].size(); ++a) {
            const Matrix& x = povms[i][a];
            if (x.rows() != dim || x.cols() != dim)
                throw DimensionError(party + " POVM " + std::to_string(i) + "/" +
                                     std::to_string(a) + " has wrong shape");
            const double herm = hermiticity_residual(x);
            const double neg = std::max(0.0, -min_eigenvalue(x));
            const double res = std::max(herm, neg);
            rep.checks.push_back({party + "_povm_psd " + std::to_string(i) + "/" + std::to_string(a),
                                  res, res <= tol.residual_tol});
            sum += x;
        }
        const double comp = (sum - id).norm();
        rep.checks.push_back({party + "_povm_completeness " + std::to_string(i), comp,
                              comp <= tol.residual_tol});
    }
}

void check_state(ValidationReport& rep, const Matrix& state, int dim, Tolerance tol) {
    if (state.rows() != dim || state.cols() != dim)
        throw DimensionError("state has wrong shape");
    const double herm = hermiticity_residual(state);
    const double neg = std::max(0.0, -min_eigenvalue(state));
    const double res = std::max(herm, neg);
    rep.checks.push_back({"state_psd", res, res <= tol.residual_tol});
    const double tr = std::abs(state.trace() - Complex(1.0, 0.0));
    rep.checks.push_back({"state_trace", tr, tr <= tol.residual_tol});
}

} // namespace

ValidationReport validate(const CommutingModel& m, Tolerance tol) {
    require_valid(m.layout);
    if (m.dim < 1) throw DimensionError("commuting model: dim must be >= 1");
    ValidationReport rep;
    check_povm_family(rep, "alice", m.alice_povms, m.layout.alice, m.dim, tol);
    check_povm_family(rep, "bob", m.bob_povms, m.layout.bob, m.dim, tol);
    for (std::size_t i = 0; i < m.alice_povms.size(); ++i)
        for (std::size_t a = 0; a < m.alice_povms[i].size(); ++a)
            for (std::size_t j = 0; j < m.bob_povms.size(); ++j)
                for (std::size_t b = 0; b < m.bob_povms[j].size(); ++b) {
                    const Matrix& x = m.alice_povms[i][a];
                    const Matrix& y = m.bob_povms[j][b];
                    const double res = (x * y - y * x).norm();
                    rep.checks.push_back({"commutation " + std::to_string(i) + "." +
                                              std::to_string(a) + "/" + std::to_string(j) + "." +
                                              std::to_string(b),
                                          res, res <= tol.residual_tol});
                }
    check_state(rep, m.state, m.dim, tol);
    return rep;
}

ValidationReport validate(const TensorModel& m, Tolerance tol) {
    require_valid(m.layout);
    if (m.dim_a < 1 || m.dim_b < 1) throw DimensionError("tensor model: dims must be >= 1");
    ValidationReport rep;
    check_povm_family(rep, "alice", m.alice_povms, m.layout.alice, m.dim_a, tol);
    check_povm_family(rep, "bob", m.bob_povms, m.layout.bob, m.dim_b, tol);
    check_state(rep, m.state, m.dim_a * m.dim_b, tol);
    return rep;
}

namespace {

template <class Model>
void require_valid_impl(const Model& m, Tolerance tol) {
    ValidationReport rep = validate(m, tol);
    if (const Check* f = rep.first_failure())
        throw ValidationError("model validation failed at check '" + f->name +
                              "' with residual " + std::to_string(f->residual));
}

} // namespace

void require_valid(const CommutingModel& m, Tolerance tol) { require_valid_impl(m, tol); }
void require_valid(const TensorModel& m, Tolerance tol) { require_valid_impl(m, tol); }

// ---- correlation tables -----------------------------------------------------

CorrelationTable CorrelationTable::zeros(const MeasurementLayout& layout) {
    require_valid(layout);
    int total = 0;
    for (int na : layout.alice)
        for (int nb : layout.bob) total += na * nb;
    return CorrelationTable{layout, std::vector<double>(static_cast<std::size_t>(total), 0.0)};
}

int CorrelationTable::index(int i, int j, int alpha, int beta) const {
    int base = 0;
    for (int ii = 0; ii < static_cast<int>(layout.alice.size()); ++ii)
        for (int jj = 0; jj < static_cast<int>(layout.bob.size()); ++jj) {
            if (ii == i && jj == j)
                return base + alpha * layout.bob[j] + beta;
            base += layout.alice[ii] * layout.bob[jj];
        }
    throw DimensionError("correlation table index out of range");
}

double& CorrelationTable::at(int i, int j, int alpha, int beta) {
    return values[static_cast<std::size_t>(index(i, j, alpha, beta))];
}

double CorrelationTable::at(int i, int j, int alpha, int beta) const {
    return values[static_cast<std::size_t>(index(i, j, alpha, beta))];
}

ValidationReport validate_table(const CorrelationTable& t, Tolerance tol) {
    ValidationReport rep;
    const auto& L = t.layout;
    double range_res = 0.0;
    for (double p : t.values) range_res = std::max(range_res, std::max(-p, p - 1.0));
    range_res = std::max(range_res, 0.0);
    rep.checks.push_back({"range", range_res, range_res <= tol.residual_tol});

    for (int i = 0; i < L.alice_settings(); ++i)
        for (int j = 0; j < L.bob_settings(); ++j) {
            double s = 0.0;
            for (int a = 0; a < L.alice[i]; ++a)
                for (int b = 0; b < L.bob[j]; ++b) s += t.at(i, j, a, b);
            const double res = std::abs(s - 1.0);
            rep.checks.push_back({"normalization " + std::to_string(i) + "/" + std::to_string(j),
                                  res, res <= tol.residual_tol});
        }

    // Alice marginal must not depend on Bob's setting choice
    for (int i = 0; i < L.alice_settings(); ++i) {
        double res = 0.0;
        for (int a = 0; a < L.alice[i]; ++a) {
            for (int j = 1; j < L.bob_settings(); ++j) {
                double m0 = 0.0, mj = 0.0;
                for (int b = 0; b < L.bob[0]; ++b) m0 += t.at(i, 0, a, b);
                for (int b = 0; b < L.bob[j]; ++b) mj += t.at(i, j, a, b);
                res = std::max(res, std::abs(m0 - mj));
            }
        }
        rep.checks.push_back({"no_signaling_alice " + std::to_string(i), res,
                              res <= tol.residual_tol});
    }
    for (int j = 0; j < L.bob_settings(); ++j) {
        double res = 0.0;
        for (int b = 0; b < L.bob[j]; ++b) {
            for (int i = 1; i < L.alice_settings(); ++i) {
                double m0 = 0.0, mi = 0.0;
                for (int a = 0; a < L.alice[0]; ++a) m0 += t.at(0, j, a, b);
                for (int a = 0; a < L.alice[i]; ++a) mi += t.at(i, j, a, b);
                res = std::max(res, std::abs(m0 - mi));
            }
        }
        rep.checks.push_back({"no_signaling_bob " + std::to_string(j), res,
                              res <= tol.residual_tol});
    }
    return rep;
}

CorrelationTable correlations_commuting(const CommutingModel& m, Tolerance tol) {
    require_valid(m, tol);
    CorrelationTable t = CorrelationTable::zeros(m.layout);
    for (int i = 0; i < m.layout.alice_settings(); ++i)
        for (int a = 0; a < m.layout.alice[i]; ++a) {
            const Matrix rx = m.state * m.alice_povms[i][a];
            for (int j = 0; j < m.layout.bob_settings(); ++j)
                for (int b = 0; b < m.layout.bob[j]; ++b)
                    t.at(i, j, a, b) = (rx * m.bob_povms[j][b]).trace().real();
        }
    return t;
}

CorrelationTable correlations_tensor(const TensorModel& m, Tolerance tol) {
    require_valid(m, tol);
    CorrelationTable t = CorrelationTable::zeros(m.layout);
    for (int i = 0; i < m.layout.alice_settings(); ++i)
        for (int a = 0; a < m.layout.alice[i]; ++a)
            for (int j = 0; j < m.layout.bob_settings(); ++j)
                for (int b = 0; b < m.layout.bob[j]; ++b)
                    t.at(i, j, a, b) =
                        (m.state * kron(m.alice_povms[i][a], m.bob_povms[j][b])).trace().real();
    return t;
}

double max_table_deviation(const CorrelationTable& a, const CorrelationTable& b) {
    if (!(a.layout == b.layout))
        throw DimensionError("max_table_deviation: layouts differ");
    double d = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k)
        d = std::max(d, std::abs(a.values[k] - b.values[k]));
    return d;
}

CommutingModel lift(const TensorModel& m) {
    CommutingModel out;
    out.dim = m.dim_a * m.dim_b;
    out.layout = m.layout;
    const Matrix id_a = Matrix::Identity(m.dim_a, m.dim_a);
    const Matrix id_b = Matrix::Identity(m.dim_b, m.dim_b);
    out.alice_povms.resize(m.alice_povms.size());
    for (std::size_t i = 0; i < m.alice_povms.size(); ++i)
        for (const auto& x : m.alice_povms[i]) out.alice_povms[i].push_back(kron(x, id_b));
    out.bob_povms.resize(m.bob_povms.size());
    for (std::size_t j = 0; j < m.bob_povms.size(); ++j)
        for (const auto& y : m.bob_povms[j]) out.bob_povms[j].push_back(kron(id_a, y));
    out.state = m.state;
    return out;
}

// ---- Bell functionals ---------------------------------------------------------

BellFunctional BellFunctional::zeros(const MeasurementLayout& layout) {
    CorrelationTable t = CorrelationTable::zeros(layout);
    return BellFunctional{layout, std::vector<double>(t.values.size(), 0.0)};
}

namespace {
int functional_index(const MeasurementLayout& layout, int i, int j, int alpha, int beta) {
    CorrelationTable probe{layout, {}};
    return probe.index(i, j, alpha, beta);
}
} // namespace

double& BellFunctional::at(int i, int j, int alpha, int beta) {
    return coefficients[static_cast<std::size_t>(functional_index(layout, i, j, alpha, beta))];
}

double BellFunctional::at(int i, int j, int alpha, int beta) const {
    return coefficients[static_cast<std::size_t>(functional_index(layout, i, j, alpha, beta))];
}

void add_correlator(BellFunctional& f, int i, int j, double c) {
    if (i < 0 || i >= f.layout.alice_settings() || j < 0 || j >= f.layout.bob_settings())
        throw DimensionError("add_correlator: setting index out of range");
    if (f.layout.alice[i] != 2 || f.layout.bob[j] != 2)
        throw ValidationError("add_correlator: correlator form requires two-outcome settings");
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            f.at(i, j, a, b) += c * ((a + b) % 2 == 0 ? 1.0 : -1.0);
}

double bell_value(const CorrelationTable& t, const BellFunctional& f) {
    if (!(t.layout == f.layout))
        throw DimensionError("bell_value: functional layout does not match table layout");
    double v = 0.0;
    for (std::size_t k = 0; k < t.values.size(); ++k) v += f.coefficients[k] * t.values[k];
    return v;
}

} // namespace qcorr
