#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <string>

#include "cli_util.hpp"
#include "fixtures.hpp"
#include "qcorr/scenario_io.hpp"

using namespace qcorr;
using cli_util::CliResult;
using cli_util::run_cli;
using cli_util::slurp;
using cli_util::spit;
using cli_util::temp_dir;
namespace fs = std::filesystem;

namespace {

const char* kMinimalCommuting = R"({
  "kind": "commuting",
  "dim": 2,
  "layout": {"alice": [2], "bob": [2]},
  "state": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]],
  "alice_povms": {
    "0/0": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]],
    "0/1": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]
  },
  "bob_povms": {
    "0/0": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]],
    "0/1": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]
  }
})";

} // namespace

TEST_CASE("parse_scenario: minimal maximally mixed document") {
    Scenario s = parse_scenario(kMinimalCommuting);
    const auto* m = std::get_if<CommutingModel>(&s);
    REQUIRE(m != nullptr);
    CHECK(m->dim == 2);
    CorrelationTable t = correlations_commuting(*m);
    for (double p : t.values) CHECK(p == doctest::Approx(0.25));
}

TEST_CASE("parse_scenario: wrong matrix shape names the field") {
    json doc = json::parse(kMinimalCommuting);
    doc["alice_povms"]["0/0"] = json::parse("[[[1,0],[0,0]],[[0,0],[0,0]],[[0,0],[0,0]]]"); // 3x2
    CHECK_THROWS_WITH_AS(scenario_from_json(doc), doctest::Contains("alice_povms/0/0"),
                         ParseError);
}

TEST_CASE("parse_scenario: syntax errors are parse errors") {
    CHECK_THROWS_AS(parse_scenario("{ not json"), ParseError);
    CHECK_THROWS_AS(parse_scenario("{}"), ParseError);
}

TEST_CASE("scenario round trip: tensor CHSH") {
    TensorModel m = fixtures::chsh_tensor_model();
    Scenario back = parse_scenario(write_scenario(m));
    const auto* t = std::get_if<TensorModel>(&back);
    REQUIRE(t != nullptr);
    CHECK(t->dim_a == 2);
    CHECK(t->layout == m.layout);
    CHECK((t->state - m.state).norm() < 1e-11);
    CHECK(max_table_deviation(correlations_tensor(*t), correlations_tensor(m)) < 1e-10);
}

TEST_CASE("functional documents: correlator form converts to full coefficients") {
    const char* doc = R"({
      "layout": {"alice": [2, 2], "bob": [2, 2]},
      "correlators": [
        {"i": 0, "j": 0, "c": 1.0}, {"i": 0, "j": 1, "c": 1.0},
        {"i": 1, "j": 0, "c": 1.0}, {"i": 1, "j": 1, "c": -1.0}
      ]
    })";
    BellFunctional f = parse_functional(doc);
    BellFunctional expect = fixtures::chsh_functional();
    for (std::size_t k = 0; k < f.coefficients.size(); ++k)
        CHECK(f.coefficients[k] == doctest::Approx(expect.coefficients[k]));

    // full-coefficient round trip
    BellFunctional back = parse_functional(to_json(f).dump());
    for (std::size_t k = 0; k < f.coefficients.size(); ++k)
        CHECK(back.coefficients[k] == doctest::Approx(f.coefficients[k]));
}

TEST_CASE("table documents round trip") {
    CorrelationTable t = fixtures::chsh_expected_table();
    CorrelationTable back = parse_table(to_json(t).dump());
    CHECK(max_table_deviation(t, back) < 1e-11);
}

TEST_CASE("report documents stay inside the same format family") {
    ValidationReport rep = validate(fixtures::chsh_tensor_model());
    json doc = to_json(rep);
    json parsed = json::parse(doc.dump(2));
    REQUIRE(parsed.contains("checks"));
    for (const auto& c : parsed["checks"]) {
        CHECK(c.contains("name"));
        CHECK(c.contains("residual"));
        CHECK(c.contains("pass"));
    }
}

TEST_CASE("round_sig keeps 12 significant digits") {
    CHECK(round_sig(2.0 * std::sqrt(2.0)) == doctest::Approx(2.82842712475).epsilon(1e-12));
    CHECK(round_sig(0.0) == 0.0);
    CHECK(round_sig(-1.23456789012345e-7) == doctest::Approx(-1.23456789012e-7));
}

// ---- CLI ---------------------------------------------------------------

TEST_CASE("cli: validate accepts the CHSH fixture and rejects a broken one") {
    const fs::path good = temp_dir() / "chsh.json";
    spit(good, write_scenario(fixtures::chsh_tensor_model()));
    CliResult ok = run_cli("validate --input " + good.string());
    CHECK(ok.exit_code == 0);
    json rep = json::parse(ok.stdout_text);
    CHECK(rep["pass"] == true);

    TensorModel bad = fixtures::chsh_tensor_model();
    bad.alice_povms[0][0] *= 1.5; // completeness broken
    const fs::path badf = temp_dir() / "bad.json";
    spit(badf, write_scenario(bad));
    CliResult fail = run_cli("validate --input " + badf.string());
    CHECK(fail.exit_code == 1);
    json frep = json::parse(fail.stdout_text);
    CHECK(frep["pass"] == false);
}

TEST_CASE("cli: correlate emits the closed-form CHSH table") {
    const fs::path input = temp_dir() / "chsh.json";
    spit(input, write_scenario(fixtures::chsh_tensor_model()));
    const fs::path table = temp_dir() / "table.json";
    CliResult r = run_cli("correlate --input " + input.string() + " --output " + table.string());
    REQUIRE(r.exit_code == 0);
    CorrelationTable t = parse_table(slurp(table));
    CHECK(max_table_deviation(t, fixtures::chsh_expected_table()) < 1e-10);

    // same through the commuting route
    const fs::path cinput = temp_dir() / "chsh_commuting.json";
    spit(cinput, write_scenario(fixtures::scrambled_chsh(3)));
    CliResult rc = run_cli("correlate --input " + cinput.string());
    REQUIRE(rc.exit_code == 0);
    json rep = json::parse(rc.stdout_text);
    CorrelationTable tc = table_from_json(rep["table"]);
    CHECK(max_table_deviation(tc, fixtures::chsh_expected_table()) < 1e-10);
}

TEST_CASE("cli: equiv-check on the scrambled CHSH fixture") {
    const fs::path input = temp_dir() / "scrambled.json";
    spit(input, write_scenario(fixtures::scrambled_chsh(7)));
    CliResult r = run_cli("equiv-check --input " + input.string() + " --seed 1");
    REQUIRE(r.exit_code == 0);
    json rep = json::parse(r.stdout_text);
    CHECK(rep["pass"] == true);
    CHECK(rep["max_deviation"].get<double>() < 1e-10);
}

TEST_CASE("cli: factorize round-trips through the emitted scenario") {
    const fs::path input = temp_dir() / "scrambled.json";
    spit(input, write_scenario(fixtures::scrambled_chsh(21)));
    const fs::path out = temp_dir() / "tensor.json";
    CliResult r = run_cli("factorize --input " + input.string() + " --output " + out.string() +
                          " --dump-algebra --seed 2");
    REQUIRE(r.exit_code == 0);
    json rep = json::parse(r.stdout_text);
    CHECK(rep["dims"] == json::array({2, 2}));
    CHECK(rep["algebra"]["algebra_dim"] == 4);
    CHECK(rep["algebra"]["center_dim"] == 1);

    Scenario s = parse_scenario(slurp(out));
    const auto* tm = std::get_if<TensorModel>(&s);
    REQUIRE(tm != nullptr);
    CHECK(max_table_deviation(correlations_tensor(*tm), fixtures::chsh_expected_table()) < 1e-9);

    // the emitted scenario re-validates through the CLI
    CliResult v = run_cli("validate --input " + out.string());
    CHECK(v.exit_code == 0);
}

TEST_CASE("cli: compress reports weight and error") {
    const fs::path input = temp_dir() / "chain.json";
    spit(input, write_scenario(fixtures::four_qubit_chain_model()));
    CliResult r = run_cli("compress --input " + input.string() + " --rank-a 3 --rank-b 3");
    REQUIRE(r.exit_code == 0);
    json rep = json::parse(r.stdout_text);
    CHECK(rep["dims"] == json::array({3, 3}));
    CHECK(rep["state_weight"].get<double>() > 0.5);
    CHECK(rep["error"].get<double>() >= 0.0);
    CHECK(rep.contains("scenario"));

    CliResult v = run_cli("compress --input " + input.string() +
                          " --rank-a 3 --rank-b 3 --verbose");
    REQUIRE(v.exit_code == 0);
    json vrep = json::parse(v.stdout_text);
    REQUIRE(vrep.contains("deviations"));
    CHECK(vrep["deviations"].size() == 16);
}

TEST_CASE("cli: npa / seesaw / bracket on CHSH") {
    const fs::path input = temp_dir() / "chsh_functional.json";
    spit(input, to_json(fixtures::chsh_functional()).dump(2));

    CliResult npa = run_cli("npa --input " + input.string() + " --level 1");
    REQUIRE(npa.exit_code == 0);
    json nrep = json::parse(npa.stdout_text);
    CHECK(nrep["certified"] == true);
    CHECK(std::abs(nrep["upper"].get<double>() - 2.0 * std::sqrt(2.0)) < 1e-3);

    const fs::path strategy = temp_dir() / "strategy.json";
    CliResult ss = run_cli("seesaw --input " + input.string() +
                           " --dims 2,2 --restarts 4 --seed 0 --output " + strategy.string());
    REQUIRE(ss.exit_code == 0);
    json srep = json::parse(ss.stdout_text);
    CHECK(srep["lower"].get<double>() > 2.8);
    // the emitted strategy reproduces the reported value
    Scenario em = parse_scenario(slurp(strategy));
    const auto* emt = std::get_if<TensorModel>(&em);
    REQUIRE(emt != nullptr);
    CHECK(bell_value(correlations_tensor(*emt), fixtures::chsh_functional()) ==
          doctest::Approx(srep["lower"].get<double>()).epsilon(1e-9));

    CliResult br = run_cli("bracket --input " + input.string() +
                           " --dims 2,2 --restarts 4 --seed 0 --level 1");
    REQUIRE(br.exit_code == 0);
    json brep = json::parse(br.stdout_text);
    CHECK(brep["gap"].get<double>() < 2e-3);
}

TEST_CASE("cli: reports are byte-identical across repeated runs") {
    const fs::path input = temp_dir() / "scrambled2.json";
    spit(input, write_scenario(fixtures::scrambled_chsh(99)));
    CliResult a = run_cli("factorize --input " + input.string() + " --seed 5");
    CliResult b = run_cli("factorize --input " + input.string() + " --seed 5");
    CHECK(a.exit_code == 0);
    CHECK(a.stdout_text == b.stdout_text);
}

TEST_CASE("cli: exit codes for usage and missing files") {
    CliResult usage = run_cli("no-such-command");
    CHECK(usage.exit_code == 2);
    CliResult missing = run_cli("validate --input /nonexistent/file.json");
    CHECK(missing.exit_code == 2); // flag validation rejects the path
    CliResult badflag = run_cli("npa --input /dev/null --level 3");
    CHECK(badflag.exit_code == 2);
}

TEST_CASE("cli: malformed input exits 1 with a structured error") {
    const fs::path input = temp_dir() / "broken.json";
    spit(input, "{ this is not json");
    CliResult r = run_cli("validate --input " + input.string());
    CHECK(r.exit_code == 1);
    json rep = json::parse(r.stdout_text);
    CHECK(rep.contains("error"));
    CHECK(rep["error"]["kind"] == "parse");
}
