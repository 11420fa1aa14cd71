#pragma once

// Shared fixtures and independent oracles. Everything here is test-side
// machinery: closed-form tables, enumeration oracles and model builders
// that do not route through the code paths they are meant to check.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qcorr/random.hpp"
#include "qcorr/scenario.hpp"

namespace fixtures {

using qcorr::Complex;
using qcorr::Matrix;
using qcorr::Rng;

inline Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix pauli_y() {
    Matrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

inline Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

// ---- CHSH ------------------------------------------------------------------

inline qcorr::MeasurementLayout chsh_layout() { return {{2, 2}, {2, 2}}; }

// E_00 + E_01 + E_10 - E_11 in full-probability coefficients
inline qcorr::BellFunctional chsh_functional() {
    qcorr::BellFunctional f = qcorr::BellFunctional::zeros(chsh_layout());
    qcorr::add_correlator(f, 0, 0, 1.0);
    qcorr::add_correlator(f, 0, 1, 1.0);
    qcorr::add_correlator(f, 1, 0, 1.0);
    qcorr::add_correlator(f, 1, 1, -1.0);
    return f;
}

inline std::array<double, 2> chsh_alice_angles() { return {0.0, M_PI / 2}; }
inline std::array<double, 2> chsh_bob_angles() { return {-3 * M_PI / 4, 3 * M_PI / 4}; }

// projector onto the +/- eigenspace of cos(t) Z + sin(t) X
inline Matrix spin_projector(double theta, int outcome) {
    const double sign = outcome == 0 ? 1.0 : -1.0;
    Matrix obs = std::cos(theta) * pauli_z() + std::sin(theta) * pauli_x();
    return 0.5 * (Matrix::Identity(2, 2) + sign * obs);
}

// singlet state measured at the standard optimal angles
inline qcorr::TensorModel chsh_tensor_model() {
    qcorr::TensorModel m;
    m.dim_a = m.dim_b = 2;
    m.layout = chsh_layout();
    for (double t : chsh_alice_angles())
        m.alice_povms.push_back({spin_projector(t, 0), spin_projector(t, 1)});
    for (double t : chsh_bob_angles())
        m.bob_povms.push_back({spin_projector(t, 0), spin_projector(t, 1)});
    Eigen::Vector4cd singlet;
    singlet << 0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0;
    m.state = singlet * singlet.adjoint();
    return m;
}

// Independent oracle: singlet correlations are E(a,b) = -cos(a-b), so
// p = (1 + (-1)^{alpha+beta} E)/4. No operators involved.
inline qcorr::CorrelationTable chsh_expected_table() {
    qcorr::CorrelationTable t = qcorr::CorrelationTable::zeros(chsh_layout());
    const auto aa = chsh_alice_angles();
    const auto bb = chsh_bob_angles();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double corr = -std::cos(aa[i] - bb[j]);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    t.at(i, j, a, b) = 0.25 * (1.0 + ((a + b) % 2 == 0 ? 1.0 : -1.0) * corr);
        }
    return t;
}

// ---- classical oracles -----------------------------------------------------

// table of the deterministic strategy that answers out_a[i] and out_b[j]
inline qcorr::CorrelationTable deterministic_table(const qcorr::MeasurementLayout& layout,
                                                   const std::vector<int>& out_a,
                                                   const std::vector<int>& out_b) {
    qcorr::CorrelationTable t = qcorr::CorrelationTable::zeros(layout);
    for (int i = 0; i < layout.alice_settings(); ++i)
        for (int j = 0; j < layout.bob_settings(); ++j)
            t.at(i, j, out_a[static_cast<std::size_t>(i)], out_b[static_cast<std::size_t>(j)]) = 1.0;
    return t;
}

// brute force over every deterministic strategy
inline double classical_max(const qcorr::BellFunctional& f) {
    const auto& L = f.layout;
    std::vector<int> out_a(static_cast<std::size_t>(L.alice_settings()), 0);
    std::vector<int> out_b(static_cast<std::size_t>(L.bob_settings()), 0);
    double best = -std::numeric_limits<double>::infinity();
    auto loop = [&](auto&& self, int pos) -> void {
        const int na = L.alice_settings(), nb = L.bob_settings();
        if (pos == na + nb) {
            best = std::max(best, qcorr::bell_value(deterministic_table(L, out_a, out_b), f));
            return;
        }
        const int count = pos < na ? L.alice[pos] : L.bob[pos - na];
        for (int o = 0; o < count; ++o) {
            (pos < na ? out_a[static_cast<std::size_t>(pos)]
                      : out_b[static_cast<std::size_t>(pos - na)]) = o;
            self(self, pos + 1);
        }
    };
    loop(loop, 0);
    return best;
}

// ---- model surgery ------------------------------------------------------------

// conjugate every operator and the state by one unitary
inline qcorr::CommutingModel scramble(const qcorr::CommutingModel& m, const Matrix& u) {
    qcorr::CommutingModel out = m;
    auto conj = [&](const Matrix& x) { return Matrix(u * x * u.adjoint()); };
    for (auto& setting : out.alice_povms)
        for (auto& x : setting) x = conj(x);
    for (auto& setting : out.bob_povms)
        for (auto& y : setting) y = conj(y);
    out.state = conj(out.state);
    return out;
}

inline qcorr::CommutingModel scrambled_chsh(std::uint64_t seed) {
    Rng rng(seed);
    return scramble(qcorr::lift(chsh_tensor_model()), qcorr::random_unitary(4, rng));
}

// Direct sum of tensor blocks (d_k, m_k): Alice acts as X_k (x) 1 on block k,
// Bob as 1 (x) Y_k, the state mixes blocks with the given weights; the whole
// model is then conjugated by one random unitary.
inline qcorr::CommutingModel block_commuting_model(const qcorr::MeasurementLayout& layout,
                                                   const std::vector<std::pair<int, int>>& blocks,
                                                   Rng& rng) {
    int dim = 0;
    for (auto [d, m] : blocks) dim += d * m;

    qcorr::CommutingModel out;
    out.dim = dim;
    out.layout = layout;
    out.alice_povms.resize(layout.alice.size());
    out.bob_povms.resize(layout.bob.size());

    for (std::size_t i = 0; i < layout.alice.size(); ++i)
        out.alice_povms[i].assign(static_cast<std::size_t>(layout.alice[i]), Matrix::Zero(dim, dim));
    for (std::size_t j = 0; j < layout.bob.size(); ++j)
        out.bob_povms[j].assign(static_cast<std::size_t>(layout.bob[j]), Matrix::Zero(dim, dim));
    out.state = Matrix::Zero(dim, dim);

    std::vector<double> weights;
    double wsum = 0.0;
    std::uniform_real_distribution<double> uni(0.2, 1.0);
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        weights.push_back(uni(rng));
        wsum += weights.back();
    }

    int offset = 0;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        const auto [d, m] = blocks[k];
        const int r = d * m;
        const Matrix id_d = Matrix::Identity(d, d);
        const Matrix id_m = Matrix::Identity(m, m);
        for (std::size_t i = 0; i < layout.alice.size(); ++i) {
            auto povm = qcorr::random_povm(d, layout.alice[i], rng);
            for (std::size_t a = 0; a < povm.size(); ++a)
                out.alice_povms[i][a].block(offset, offset, r, r) = qcorr::kron(povm[a], id_m);
        }
        for (std::size_t j = 0; j < layout.bob.size(); ++j) {
            auto povm = qcorr::random_povm(m, layout.bob[j], rng);
            for (std::size_t b = 0; b < povm.size(); ++b)
                out.bob_povms[j][b].block(offset, offset, r, r) = qcorr::kron(id_d, povm[b]);
        }
        out.state.block(offset, offset, r, r) = (weights[k] / wsum) * qcorr::random_density(r, rng);
        offset += r;
    }
    return scramble(out, qcorr::random_unitary(dim, rng));
}

// randomized instance for the round-trip suite: dims <= 12, settings <= 3,
// outcomes <= 3
inline qcorr::CommutingModel random_block_commuting_model(std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_int_distribution<int> nblocks(1, 3);
    std::uniform_int_distribution<int> factor(1, 3);
    std::uniform_int_distribution<int> settings(1, 3);
    std::uniform_int_distribution<int> outcomes(2, 3);

    std::vector<std::pair<int, int>> blocks;
    int total = 0;
    const int want = nblocks(rng);
    while (static_cast<int>(blocks.size()) < want) {
        const int d = factor(rng), m = factor(rng);
        if (total + d * m > 12) break;
        blocks.push_back({d, m});
        total += d * m;
    }
    if (blocks.empty()) blocks.push_back({2, 1});

    qcorr::MeasurementLayout layout;
    const int na = settings(rng), nb = settings(rng);
    for (int i = 0; i < na; ++i) layout.alice.push_back(outcomes(rng));
    for (int j = 0; j < nb; ++j) layout.bob.push_back(outcomes(rng));
    return block_commuting_model(layout, blocks, rng);
}

// ---- spin chain -------------------------------------------------------------

// Four qubits in a row; Alice holds the left pair, Bob the right pair, and
// both measure only their outer qubit. The state is the ground state of an
// XY chain in a transverse field.
inline qcorr::TensorModel four_qubit_chain_model() {
    const int n = 16;
    auto site = [&](const Matrix& op, int pos) {
        Matrix out = Matrix::Identity(1, 1);
        for (int q = 0; q < 4; ++q)
            out = qcorr::kron(out, q == pos ? op : Matrix::Identity(2, 2));
        return out;
    };
    Matrix h = Matrix::Zero(n, n);
    for (int q = 0; q < 3; ++q) {
        h += site(pauli_x(), q) * site(pauli_x(), q + 1);
        h += site(pauli_y(), q) * site(pauli_y(), q + 1);
    }
    for (int q = 0; q < 4; ++q) h += 0.5 * site(pauli_z(), q);

    qcorr::Eig eh = qcorr::hermitian_eig(h);
    qcorr::Vector ground = eh.vectors.col(0);

    qcorr::TensorModel m;
    m.dim_a = m.dim_b = 4;
    m.layout = {{2, 2}, {2, 2}};
    auto local_proj = [](const Matrix& op, bool outer_is_first) {
        // measured qubit (x) spectator, or spectator (x) measured qubit
        qcorr::Eig e = qcorr::hermitian_eig(op);
        std::vector<Matrix> povm;
        for (int out = 0; out < 2; ++out) {
            qcorr::Vector v = e.vectors.col(out == 0 ? 1 : 0); // outcome 0 = +1 eigenvector
            Matrix p = v * v.adjoint();
            povm.push_back(outer_is_first ? qcorr::kron(p, Matrix::Identity(2, 2))
                                          : qcorr::kron(Matrix::Identity(2, 2), p));
        }
        return povm;
    };
    m.alice_povms = {local_proj(pauli_z(), true), local_proj(pauli_x(), true)};
    m.bob_povms = {local_proj(pauli_z(), false), local_proj(pauli_x(), false)};
    m.state = ground * ground.adjoint();
    return m;
}

// ---- random functionals --------------------------------------------------------

inline qcorr::BellFunctional random_functional(const qcorr::MeasurementLayout& layout, Rng& rng) {
    qcorr::BellFunctional f = qcorr::BellFunctional::zeros(layout);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (auto& c : f.coefficients) c = uni(rng);
    return f;
}

} // namespace fixtures
