#include "qcorr/bounds.hpp"

#include <algorithm>
#include <string>

namespace qcorr {

std::optional<Word> reduce_word(const Word& w) {
    Word out;
    for (int party = 0; party < 2; ++party) {
        std::vector<Letter> stack;
        for (const Letter& l : w) {
            if (l.party != party) continue;
            if (!stack.empty() && stack.back().setting == l.setting) {
                if (stack.back().outcome == l.outcome) continue; // projector idempotence
                return std::nullopt;                             // orthogonal outcomes annihilate
            }
            stack.push_back(l);
        }
        out.insert(out.end(), stack.begin(), stack.end());
    }
    return out;
}

Word adjoint_word(const Word& w) {
    Word out = w;
    auto bob_begin = std::find_if(out.begin(), out.end(),
                                  [](const Letter& l) { return l.party == 1; });
    std::reverse(out.begin(), bob_begin);
    std::reverse(bob_begin, out.end());
    return out;
}

namespace {

struct Position {
    int row, col;
    bool flipped; // true if the entry carries the conjugate of the class value
};

Matrix basis_e(int n, int r, int c) {
    Matrix m = Matrix::Zero(n, n);
    m(r, c) = Complex(1.0, 0.0);
    return m;
}

// <A, Gamma> = 2 Re Gamma_{rc} for r != c
Matrix real_part_matrix(int n, int r, int c) {
    return basis_e(n, r, c) + basis_e(n, c, r);
}

// <A, Gamma> = -2 Im Gamma_{rc}
Matrix imag_part_matrix(int n, int r, int c) {
    return Complex(0.0, 1.0) * (basis_e(n, r, c) - basis_e(n, c, r));
}

} // namespace

MomentProblem build_moment_problem(const BellFunctional& f, NpaLevel level) {
    const MeasurementLayout& L = f.layout;
    require_valid(L);

    std::vector<Letter> alice_letters, bob_letters;
    for (int i = 0; i < L.alice_settings(); ++i)
        for (int a = 0; a + 1 < L.alice[i]; ++a) alice_letters.push_back({0, i, a});
    for (int j = 0; j < L.bob_settings(); ++j)
        for (int b = 0; b + 1 < L.bob[j]; ++b) bob_letters.push_back({1, j, b});

    MomentProblem mp;
    mp.level = level;
    mp.words.push_back({});
    for (const Letter& l : alice_letters) mp.words.push_back({l});
    for (const Letter& l : bob_letters) mp.words.push_back({l});
    if (level == NpaLevel::one_ab)
        for (const Letter& a : alice_letters)
            for (const Letter& b : bob_letters) mp.words.push_back({a, b});

    const int n = static_cast<int>(mp.words.size());

    std::map<Word, std::vector<Position>> classes;
    std::vector<std::pair<int, int>> zero_positions;
    for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) {
            Word prod = adjoint_word(mp.words[static_cast<std::size_t>(r)]);
            prod.insert(prod.end(), mp.words[static_cast<std::size_t>(c)].begin(),
                        mp.words[static_cast<std::size_t>(c)].end());
            std::optional<Word> reduced = reduce_word(prod);
            if (!reduced) {
                zero_positions.emplace_back(r, c);
                continue;
            }
            Word adj = adjoint_word(*reduced);
            const bool flipped = adj < *reduced;
            const Word key = flipped ? adj : *reduced;
            classes[key].push_back({r, c, flipped});
        }

    SdpProblem sdp;
    sdp.n = n;
    sdp.objective = Matrix::Zero(n, n);

    // normalization
    sdp.constraints.emplace_back(basis_e(n, 0, 0), 1.0);

    for (auto& [key, positions] : classes) {
        const Position& rep = positions.front();
        mp.index[key] = {rep.row, rep.col};
        const bool hermitian_class = (key == adjoint_word(key));
        if (hermitian_class && rep.row != rep.col)
            sdp.constraints.emplace_back(imag_part_matrix(n, rep.row, rep.col), 0.0);
        for (std::size_t k = 1; k < positions.size(); ++k) {
            const Position& p = positions[k];
            // Re Gamma_p = Re Gamma_rep always
            Matrix re = real_part_matrix(n, p.row, p.col) - real_part_matrix(n, rep.row, rep.col);
            if (re.norm() > 0.0) sdp.constraints.emplace_back(std::move(re), 0.0);
            // Im Gamma_p = +/- Im Gamma_rep depending on relative orientation
            const double sign = (p.flipped == rep.flipped) ? 1.0 : -1.0;
            Matrix im = imag_part_matrix(n, p.row, p.col) - sign * imag_part_matrix(n, rep.row, rep.col);
            if (im.norm() > 0.0) sdp.constraints.emplace_back(std::move(im), 0.0);
        }
    }
    for (const auto& [r, c] : zero_positions) {
        sdp.constraints.emplace_back(real_part_matrix(n, r, c), 0.0);
        sdp.constraints.emplace_back(imag_part_matrix(n, r, c), 0.0);
    }

    // objective: expand dropped outcomes through completeness, collect
    // class coefficients
    std::map<Word, double> coeff;
    for (int i = 0; i < L.alice_settings(); ++i)
        for (int j = 0; j < L.bob_settings(); ++j)
            for (int a = 0; a < L.alice[i]; ++a)
                for (int b = 0; b < L.bob[j]; ++b) {
                    const double c = f.at(i, j, a, b);
                    if (c == 0.0) continue;
                    std::vector<std::pair<Word, double>> ta, tb;
                    if (a + 1 < L.alice[i]) {
                        ta.push_back({{Letter{0, i, a}}, 1.0});
                    } else {
                        ta.push_back({{}, 1.0});
                        for (int a2 = 0; a2 + 1 < L.alice[i]; ++a2)
                            ta.push_back({{Letter{0, i, a2}}, -1.0});
                    }
                    if (b + 1 < L.bob[j]) {
                        tb.push_back({{Letter{1, j, b}}, 1.0});
                    } else {
                        tb.push_back({{}, 1.0});
                        for (int b2 = 0; b2 + 1 < L.bob[j]; ++b2)
                            tb.push_back({{Letter{1, j, b2}}, -1.0});
                    }
                    for (const auto& [wa, sa] : ta)
                        for (const auto& [wb, sb] : tb) {
                            Word w = wa;
                            w.insert(w.end(), wb.begin(), wb.end());
                            coeff[w] += c * sa * sb;
                        }
                }

    for (const auto& [w, t] : coeff) {
        if (t == 0.0) continue;
        auto it = mp.index.find(w);
        if (it == mp.index.end())
            throw Error("build_moment_problem: objective word missing from the moment matrix");
        const auto [r, c] = it->second;
        if (r == c)
            sdp.objective(r, c) += t;
        else {
            sdp.objective(r, c) += 0.5 * t;
            sdp.objective(c, r) += 0.5 * t;
        }
    }

    mp.sdp = std::move(sdp);
    return mp;
}

NpaBound npa_upper_bound(const BellFunctional& f, NpaLevel level, const SdpOptions& opts) {
    MomentProblem mp = build_moment_problem(f, level);
    NpaBound out;
    out.solution = solve_sdp(mp.sdp, opts);
    out.value = out.solution.value;
    out.certified = out.solution.status == SdpStatus::converged;
    return out;
}

} // namespace qcorr
