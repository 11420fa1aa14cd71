// qcorr: validate, correlate, factorize, compress and bound bipartite
// correlation scenarios. Every command reads scenario / functional
// documents, prints a report document to stdout and exits 0 only if all
// requested checks pass (2 on usage errors, 3 on numerical degeneracy).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "qcorr/algebra.hpp"
#include "qcorr/bounds.hpp"
#include "qcorr/compression.hpp"
#include "qcorr/factorization.hpp"
#include "qcorr/scenario_io.hpp"

namespace {

using qcorr::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qcorr::ParseError("cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw qcorr::Error("cannot open output file '" + path + "'");
    out << text;
}

struct CommonArgs {
    std::string input;
    std::string output;
    std::uint64_t seed = 0;
    double rank_tol = 1e-9;
    double residual_tol = 1e-8;
    bool verbose = false;

    qcorr::Tolerance tolerance() const { return qcorr::Tolerance(rank_tol, residual_tol); }
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_seed = true) {
    cmd->add_option("--input", args.input, "input document")->required()->check(CLI::ExistingFile);
    cmd->add_option("--output", args.output, "write the produced artifact here");
    if (needs_seed) cmd->add_option("--seed", args.seed, "seed for all generic-element draws");
    cmd->add_option("--rank-tol", args.rank_tol, "relative rank threshold")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--residual-tol", args.residual_tol, "absolute verification budget")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--verbose", args.verbose, "add per-entry detail to reports");
}

void emit(const json& report) { std::cout << report.dump(2) << "\n"; }

// artifact goes to --output when given, otherwise it is embedded into the
// report under `key`
void attach(json& report, const std::string& key, const json& artifact,
            const std::string& output_path) {
    if (output_path.empty())
        report[key] = artifact;
    else
        write_file(output_path, artifact.dump(2) + "\n");
}

qcorr::CommutingModel expect_commuting(const qcorr::Scenario& s, const std::string& command) {
    if (const auto* m = std::get_if<qcorr::CommutingModel>(&s)) return *m;
    throw qcorr::ValidationError(command + " expects a commuting scenario document");
}

qcorr::TensorModel expect_tensor(const qcorr::Scenario& s, const std::string& command) {
    if (const auto* m = std::get_if<qcorr::TensorModel>(&s)) return *m;
    throw qcorr::ValidationError(command + " expects a tensor scenario document");
}

int run_validate(const CommonArgs& args) {
    qcorr::Scenario s = qcorr::parse_scenario(read_file(args.input));
    qcorr::ValidationReport rep =
        std::visit([&](const auto& m) { return qcorr::validate(m, args.tolerance()); }, s);
    json doc = qcorr::to_json(rep);
    doc["command"] = "validate";
    doc["pass"] = rep.passed();
    emit(doc);
    return rep.passed() ? 0 : 1;
}

int run_correlate(const CommonArgs& args) {
    qcorr::Scenario s = qcorr::parse_scenario(read_file(args.input));
    const qcorr::Tolerance tol = args.tolerance();
    qcorr::CorrelationTable table = std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, qcorr::CommutingModel>)
                return qcorr::correlations_commuting(m, tol);
            else
                return qcorr::correlations_tensor(m, tol);
        },
        s);
    qcorr::ValidationReport rep = qcorr::validate_table(table, tol);
    json doc = qcorr::to_json(rep);
    doc["command"] = "correlate";
    doc["pass"] = rep.passed();
    attach(doc, "table", qcorr::to_json(table), args.output);
    emit(doc);
    return rep.passed() ? 0 : 1;
}

int run_factorize(const CommonArgs& args, bool dump_algebra) {
    qcorr::CommutingModel m =
        expect_commuting(qcorr::parse_scenario(read_file(args.input)), "factorize");
    const qcorr::Tolerance tol = args.tolerance();
    qcorr::TensorRealization r = qcorr::doubling_the_center(m, args.seed, tol);

    json blocks = json::array();
    for (const auto& b : r.blocks)
        blocks.push_back(json{{"k", b.block_index},
                              {"d", b.d},
                              {"m", b.m},
                              {"rank", b.d * b.m},
                              {"unitarity_residual", qcorr::round_sig(b.unitarity_residual)},
                              {"alice_residual", qcorr::round_sig(b.alice_tensor_residual)},
                              {"bob_residual", qcorr::round_sig(b.bob_tensor_residual)}});
    json doc{{"command", "factorize"},
             {"blocks", std::move(blocks)},
             {"dims", json::array({r.dim_a, r.dim_b})},
             {"max_deviation", qcorr::round_sig(r.max_deviation)}};
    doc["checks"] = json::array({json{{"name", "correlation_preservation"},
                                      {"residual", qcorr::round_sig(r.max_deviation)},
                                      {"pass", r.max_deviation <= tol.residual_tol}}});

    if (dump_algebra) {
        std::vector<qcorr::Matrix> gens;
        for (const auto& setting : m.alice_povms)
            for (const auto& x : setting) gens.push_back(x);
        qcorr::AlgebraBasis alg = qcorr::generate_star_algebra(gens, m.dim, tol);
        qcorr::AlgebraBasis comm = qcorr::commutant(alg, tol);
        qcorr::AlgebraBasis z = qcorr::center(alg, tol);
        json block_dims = json::array();
        for (const auto& b : r.blocks) block_dims.push_back(b.d * b.m);
        doc["algebra"] = json{{"algebra_dim", alg.dim()},
                              {"commutant_dim", comm.dim()},
                              {"center_dim", z.dim()},
                              {"block_dims", std::move(block_dims)}};
    }

    attach(doc, "scenario", qcorr::to_json(r.tensor_model), args.output);
    emit(doc);
    return 0;
}

int run_compress(const CommonArgs& args, int rank_a, int rank_b) {
    qcorr::TensorModel m = expect_tensor(qcorr::parse_scenario(read_file(args.input)), "compress");
    const qcorr::Tolerance tol = args.tolerance();
    auto [p, q] = qcorr::choose_subspaces(m, rank_a, rank_b, tol);
    qcorr::CompressionResult res = qcorr::compress(m, p, q, tol);

    json doc{{"command", "compress"},
             {"dims", json::array({res.compressed.dim_a, res.compressed.dim_b})},
             {"state_weight", qcorr::round_sig(res.state_weight)},
             {"error", qcorr::round_sig(res.error)}};
    qcorr::ValidationReport rep = qcorr::validate(res.compressed, tol);
    doc["checks"] = qcorr::to_json(rep)["checks"];
    if (args.verbose) {
        qcorr::CorrelationTable before = qcorr::correlations_tensor(m, tol);
        qcorr::CorrelationTable after = qcorr::correlations_tensor(res.compressed, tol);
        json dev = json::array();
        const auto& L = m.layout;
        for (int i = 0; i < L.alice_settings(); ++i)
            for (int j = 0; j < L.bob_settings(); ++j)
                for (int a = 0; a < L.alice[i]; ++a)
                    for (int b = 0; b < L.bob[j]; ++b)
                        dev.push_back(json{{"i", i}, {"j", j}, {"alpha", a}, {"beta", b},
                                           {"deviation", qcorr::round_sig(std::abs(
                                                             before.at(i, j, a, b) -
                                                             after.at(i, j, a, b)))}});
        doc["deviations"] = std::move(dev);
    }
    attach(doc, "scenario", qcorr::to_json(res.compressed), args.output);
    emit(doc);
    return rep.passed() ? 0 : 1;
}

qcorr::NpaLevel parse_level(const std::string& level) {
    if (level == "1") return qcorr::NpaLevel::one;
    if (level == "1ab") return qcorr::NpaLevel::one_ab;
    throw qcorr::ParseError("unknown level '" + level + "', expected 1 or 1ab");
}

json solver_json(const qcorr::SdpSolution& sol) {
    return json{{"iterations", sol.iterations},
                {"residuals", json{{"primal", qcorr::round_sig(sol.residuals.primal)},
                                   {"dual", qcorr::round_sig(sol.residuals.dual)},
                                   {"gap", qcorr::round_sig(sol.residuals.gap)}}}};
}

int run_npa(const CommonArgs& args, const std::string& level) {
    qcorr::BellFunctional f = qcorr::parse_functional(read_file(args.input));
    qcorr::NpaBound bound = qcorr::npa_upper_bound(f, parse_level(level), {.seed = args.seed});
    json doc{{"command", "npa"},
             {"level", level},
             {"upper", qcorr::round_sig(bound.value)},
             {"certified", bound.certified},
             {"solver", solver_json(bound.solution)}};
    doc["checks"] = json::array({json{{"name", "solver_converged"},
                                      {"residual", qcorr::round_sig(std::max(
                                                       {bound.solution.residuals.primal,
                                                        bound.solution.residuals.dual,
                                                        bound.solution.residuals.gap}))},
                                      {"pass", true}}});
    emit(doc);
    return 0;
}

std::pair<int, int> parse_dims(const std::string& dims) {
    const auto comma = dims.find(',');
    if (comma == std::string::npos)
        throw qcorr::ParseError("--dims expects the form a,b");
    try {
        return {std::stoi(dims.substr(0, comma)), std::stoi(dims.substr(comma + 1))};
    } catch (const std::exception&) {
        throw qcorr::ParseError("--dims expects the form a,b");
    }
}

int run_seesaw(const CommonArgs& args, const std::string& dims, int restarts) {
    qcorr::BellFunctional f = qcorr::parse_functional(read_file(args.input));
    auto [da, db] = parse_dims(dims);
    qcorr::Strategy s = qcorr::seesaw_lower_bound(f, da, db, restarts, args.seed);
    json doc{{"command", "seesaw"},
             {"dims", json::array({da, db})},
             {"restarts", restarts},
             {"lower", qcorr::round_sig(s.value)}};
    qcorr::ValidationReport rep = qcorr::validate(s.model, args.tolerance());
    doc["checks"] = qcorr::to_json(rep)["checks"];
    attach(doc, "scenario", qcorr::to_json(s.model), args.output);
    emit(doc);
    return rep.passed() ? 0 : 1;
}

int run_bracket(const CommonArgs& args, const std::string& dims, int restarts,
                const std::string& level) {
    qcorr::BellFunctional f = qcorr::parse_functional(read_file(args.input));
    auto [da, db] = parse_dims(dims);
    qcorr::BracketResult r = qcorr::bracket(f, da, db, parse_level(level), restarts, args.seed,
                                            {}, {.seed = args.seed});
    json doc{{"command", "bracket"},
             {"dims", json::array({da, db})},
             {"level", level},
             {"lower", qcorr::round_sig(r.lower.value)},
             {"upper", qcorr::round_sig(r.upper.value)},
             {"gap", qcorr::round_sig(r.gap)},
             {"certified", r.upper.certified},
             {"solver", solver_json(r.upper.solution)}};
    doc["checks"] = json::array({json{{"name", "ordering"},
                                      {"residual", qcorr::round_sig(std::max(0.0, -r.gap))},
                                      {"pass", true}}});
    emit(doc);
    return 0;
}

int run_equiv_check(const CommonArgs& args) {
    qcorr::CommutingModel m =
        expect_commuting(qcorr::parse_scenario(read_file(args.input)), "equiv-check");
    const qcorr::Tolerance tol = args.tolerance();
    qcorr::CorrelationTable source = qcorr::correlations_commuting(m, tol);
    qcorr::TensorRealization r = qcorr::doubling_the_center(m, args.seed, tol);
    qcorr::CorrelationTable realized = qcorr::correlations_tensor(r.tensor_model, tol);
    const double deviation = qcorr::max_table_deviation(source, realized);
    const bool pass = deviation < 1e-8;
    json doc{{"command", "equiv-check"},
             {"dims", json::array({r.dim_a, r.dim_b})},
             {"max_deviation", qcorr::round_sig(deviation)},
             {"pass", pass}};
    doc["checks"] = json::array({json{{"name", "correlation_preservation"},
                                      {"residual", qcorr::round_sig(deviation)},
                                      {"pass", pass}}});
    emit(doc);
    return pass ? 0 : 1;
}

json error_report(const std::string& kind, const std::string& message) {
    return json{{"error", json{{"kind", kind}, {"message", message}}}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bipartite quantum correlation toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    bool dump_algebra = false;
    int rank_a = 1, rank_b = 1, restarts = 8;
    std::string level = "1", dims = "2,2";

    auto* c_validate = app.add_subcommand("validate", "check a scenario document");
    add_common(c_validate, args, false);

    auto* c_correlate = app.add_subcommand("correlate", "emit the correlation table of a scenario");
    add_common(c_correlate, args, false);

    auto* c_factorize =
        app.add_subcommand("factorize", "turn a commuting scenario into an explicit tensor one");
    add_common(c_factorize, args);
    c_factorize->add_flag("--dump-algebra", dump_algebra, "include algebra dimensions in the report");

    auto* c_compress = app.add_subcommand("compress", "project a tensor scenario to smaller dims");
    add_common(c_compress, args);
    c_compress->add_option("--rank-a", rank_a, "target rank on Alice's side")->required();
    c_compress->add_option("--rank-b", rank_b, "target rank on Bob's side")->required();

    auto* c_npa = app.add_subcommand("npa", "moment-matrix upper bound for a Bell functional");
    add_common(c_npa, args);
    c_npa->add_option("--level", level, "relaxation level")->check(CLI::IsMember({"1", "1ab"}));

    auto* c_seesaw = app.add_subcommand("seesaw", "tensor-model lower bound for a Bell functional");
    add_common(c_seesaw, args);
    c_seesaw->add_option("--dims", dims, "local dimensions a,b");
    c_seesaw->add_option("--restarts", restarts, "random restarts")->check(CLI::PositiveNumber);

    auto* c_bracket = app.add_subcommand("bracket", "run both bounds and report the gap");
    add_common(c_bracket, args);
    c_bracket->add_option("--dims", dims, "local dimensions a,b");
    c_bracket->add_option("--restarts", restarts, "random restarts")->check(CLI::PositiveNumber);
    c_bracket->add_option("--level", level, "relaxation level")->check(CLI::IsMember({"1", "1ab"}));

    auto* c_equiv = app.add_subcommand("equiv-check",
                                       "factorize, re-correlate and compare at 1e-8");
    add_common(c_equiv, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_validate->parsed()) return run_validate(args);
        if (c_correlate->parsed()) return run_correlate(args);
        if (c_factorize->parsed()) return run_factorize(args, dump_algebra);
        if (c_compress->parsed()) return run_compress(args, rank_a, rank_b);
        if (c_npa->parsed()) return run_npa(args, level);
        if (c_seesaw->parsed()) return run_seesaw(args, dims, restarts);
        if (c_bracket->parsed()) return run_bracket(args, dims, restarts, level);
        if (c_equiv->parsed()) return run_equiv_check(args);
    } catch (const qcorr::ParseError& e) {
        emit(error_report("parse", e.what()));
        return 1;
    } catch (const qcorr::ValidationError& e) {
        emit(error_report("validation", e.what()));
        return 1;
    } catch (const qcorr::DimensionError& e) {
        emit(error_report("dimension", e.what()));
        return 1;
    } catch (const qcorr::DegeneracyError& e) {
        emit(error_report("degeneracy", e.what()));
        return 3;
    } catch (const qcorr::Error& e) {
        emit(error_report("internal", e.what()));
        return 3;
    }
    return 2;
}
