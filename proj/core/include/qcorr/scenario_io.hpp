#pragma once

#include <string>
#include <variant>

#include "json.hpp"

#include "qcorr/scenario.hpp"

namespace qcorr {

using json = nlohmann::json;

// Every number emitted by the writers is rounded to 12 significant digits,
// so serialized documents double as regression fixtures.
double round_sig(double x, int digits = 12);

// ---- scenario documents -----------------------------------------------------
//
// {
//   "kind": "commuting" | "tensor",
//   "dim": n            (commuting)     or   "dims": [da, db]  (tensor),
//   "layout": {"alice": [..outcome counts..], "bob": [..]},
//   "state": matrix,
//   "alice_povms": {"i/alpha": matrix, ...},
//   "bob_povms":   {"j/beta":  matrix, ...}
// }
//
// A matrix is a row-major array of rows; a complex scalar is [re, im].
// All indices are 0-based.

using Scenario = std::variant<CommutingModel, TensorModel>;

Scenario scenario_from_json(const json& doc);
Scenario parse_scenario(const std::string& text);

json to_json(const CommutingModel& m);
json to_json(const TensorModel& m);
std::string write_scenario(const Scenario& s);

// ---- Bell functional documents -------------------------------------------------
//
// {"layout": {...},
//  "coefficients": [{"i":..,"j":..,"alpha":..,"beta":..,"c":..}, ...],
//  "correlators":  [{"i":..,"j":..,"c":..}, ...]}        (optional, converted)

BellFunctional functional_from_json(const json& doc);
BellFunctional parse_functional(const std::string& text);
json to_json(const BellFunctional& f);

// ---- correlation table documents ----------------------------------------------
//
// {"layout": {...}, "values": [{"i":..,"j":..,"alpha":..,"beta":..,"p":..}, ...]}

CorrelationTable table_from_json(const json& doc);
CorrelationTable parse_table(const std::string& text);
json to_json(const CorrelationTable& t);

// ---- reports -----------------------------------------------------------------

json to_json(const ValidationReport& rep);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, const std::string& field);

} // namespace qcorr
