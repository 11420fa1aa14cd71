#include "qcorr/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace qcorr {

double round_sig(double x, int digits) {
    if (x == 0.0 || !std::isfinite(x)) return x == 0.0 ? 0.0 : x;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
    return std::strtod(buf, nullptr);
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ParseError("scenario document: field '" + field + "': " + what);
}

const json& member(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) fail(path + key, "missing");
    return j.at(key);
}

int int_member(const json& j, const std::string& key, const std::string& path) {
    const json& v = member(j, key, path);
    if (!v.is_number_integer()) fail(path + key, "expected an integer");
    return v.get<int>();
}

double number_in(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

Complex complex_from_json(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) fail(path, "complex scalar must be [re, im]");
    return Complex(number_in(v[0], path + "[0]"), number_in(v[1], path + "[1]"));
}

std::vector<int> int_list(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array");
    std::vector<int> out;
    for (const auto& e : v) {
        if (!e.is_number_integer()) fail(path, "expected integers");
        out.push_back(e.get<int>());
    }
    return out;
}

MeasurementLayout layout_from_json(const json& doc, const std::string& path) {
    const json& l = member(doc, "layout", path);
    MeasurementLayout layout;
    layout.alice = int_list(member(l, "alice", path + "layout/"), path + "layout/alice");
    layout.bob = int_list(member(l, "bob", path + "layout/"), path + "layout/bob");
    require_valid(layout);
    return layout;
}

std::vector<std::vector<Matrix>> povms_from_json(const json& doc, const std::string& key,
                                                 const std::vector<int>& counts, int dim) {
    const json& p = member(doc, key, "");
    if (!p.is_object()) fail(key, "expected an object keyed by \"setting/outcome\"");
    std::vector<std::vector<Matrix>> povms(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        povms[i].resize(static_cast<std::size_t>(counts[i]));
    std::vector<std::vector<bool>> seen(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        seen[i].assign(static_cast<std::size_t>(counts[i]), false);

    for (auto it = p.begin(); it != p.end(); ++it) {
        const std::string& k = it.key();
        const std::string path = key + "/" + k;
        const auto slash = k.find('/');
        if (slash == std::string::npos) fail(path, "key must look like \"setting/outcome\"");
        int setting = 0, outcome = 0;
        try {
            setting = std::stoi(k.substr(0, slash));
            outcome = std::stoi(k.substr(slash + 1));
        } catch (const std::exception&) {
            fail(path, "key must look like \"setting/outcome\"");
        }
        if (setting < 0 || setting >= static_cast<int>(counts.size()))
            fail(path, "setting index out of range");
        if (outcome < 0 || outcome >= counts[static_cast<std::size_t>(setting)])
            fail(path, "outcome index out of range");
        Matrix m = matrix_from_json(it.value(), path);
        if (m.rows() != dim || m.cols() != dim)
            fail(path, "expected a " + std::to_string(dim) + "x" + std::to_string(dim) +
                           " matrix, got " + std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols()));
        povms[static_cast<std::size_t>(setting)][static_cast<std::size_t>(outcome)] = std::move(m);
        seen[static_cast<std::size_t>(setting)][static_cast<std::size_t>(outcome)] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        for (std::size_t a = 0; a < seen[i].size(); ++a)
            if (!seen[i][a])
                fail(key + "/" + std::to_string(i) + "/" + std::to_string(a), "missing element");
    return povms;
}

json layout_to_json(const MeasurementLayout& layout) {
    return json{{"alice", layout.alice}, {"bob", layout.bob}};
}

json povms_to_json(const std::vector<std::vector<Matrix>>& povms) {
    json out = json::object();
    for (std::size_t i = 0; i < povms.size(); ++i)
        for (std::size_t a = 0; a < povms[i].size(); ++a)
            out[std::to_string(i) + "/" + std::to_string(a)] = matrix_to_json(povms[i][a]);
    return out;
}

} // namespace

Matrix matrix_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) fail(field, "matrix must be a nonempty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty()) fail(field, "matrix rows must be nonempty arrays");
    const std::size_t cols = j[0].size();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            fail(field, "matrix rows have inconsistent lengths");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(
                j[r][c], field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
    return m;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(json::array({round_sig(m(r, c).real()), round_sig(m(r, c).imag())}));
        rows.push_back(std::move(row));
    }
    return rows;
}

Scenario scenario_from_json(const json& doc) {
    const json& kind = member(doc, "kind", "");
    if (!kind.is_string()) fail("kind", "expected \"commuting\" or \"tensor\"");
    const std::string k = kind.get<std::string>();
    MeasurementLayout layout = layout_from_json(doc, "");

    if (k == "commuting") {
        CommutingModel m;
        m.dim = int_member(doc, "dim", "");
        if (m.dim < 1) fail("dim", "must be >= 1");
        m.layout = layout;
        m.alice_povms = povms_from_json(doc, "alice_povms", layout.alice, m.dim);
        m.bob_povms = povms_from_json(doc, "bob_povms", layout.bob, m.dim);
        m.state = matrix_from_json(member(doc, "state", ""), "state");
        if (m.state.rows() != m.dim || m.state.cols() != m.dim)
            fail("state", "expected a " + std::to_string(m.dim) + "x" + std::to_string(m.dim) +
                              " matrix");
        return m;
    }
    if (k == "tensor") {
        TensorModel m;
        std::vector<int> dims = int_list(member(doc, "dims", ""), "dims");
        if (dims.size() != 2 || dims[0] < 1 || dims[1] < 1)
            fail("dims", "expected [dim_a, dim_b] with both >= 1");
        m.dim_a = dims[0];
        m.dim_b = dims[1];
        m.layout = layout;
        m.alice_povms = povms_from_json(doc, "alice_povms", layout.alice, m.dim_a);
        m.bob_povms = povms_from_json(doc, "bob_povms", layout.bob, m.dim_b);
        m.state = matrix_from_json(member(doc, "state", ""), "state");
        const int n = m.dim_a * m.dim_b;
        if (m.state.rows() != n || m.state.cols() != n)
            fail("state", "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
        return m;
    }
    fail("kind", "unknown kind '" + k + "'");
}

Scenario parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario document: ") + e.what());
    }
    return scenario_from_json(doc);
}

json to_json(const CommutingModel& m) {
    return json{{"kind", "commuting"},
                {"dim", m.dim},
                {"layout", layout_to_json(m.layout)},
                {"state", matrix_to_json(m.state)},
                {"alice_povms", povms_to_json(m.alice_povms)},
                {"bob_povms", povms_to_json(m.bob_povms)}};
}

json to_json(const TensorModel& m) {
    return json{{"kind", "tensor"},
                {"dims", json::array({m.dim_a, m.dim_b})},
                {"layout", layout_to_json(m.layout)},
                {"state", matrix_to_json(m.state)},
                {"alice_povms", povms_to_json(m.alice_povms)},
                {"bob_povms", povms_to_json(m.bob_povms)}};
}

std::string write_scenario(const Scenario& s) {
    json doc = std::visit([](const auto& m) { return to_json(m); }, s);
    return doc.dump(2) + "\n";
}

BellFunctional functional_from_json(const json& doc) {
    MeasurementLayout layout = layout_from_json(doc, "");
    BellFunctional f = BellFunctional::zeros(layout);
    bool any = false;
    if (doc.contains("coefficients")) {
        const json& cs = doc.at("coefficients");
        if (!cs.is_array()) fail("coefficients", "expected an array of records");
        for (std::size_t k = 0; k < cs.size(); ++k) {
            const std::string path = "coefficients[" + std::to_string(k) + "]/";
            const json& rec = cs[k];
            const int i = int_member(rec, "i", path);
            const int j = int_member(rec, "j", path);
            const int a = int_member(rec, "alpha", path);
            const int b = int_member(rec, "beta", path);
            if (i < 0 || i >= layout.alice_settings() || j < 0 || j >= layout.bob_settings() ||
                a < 0 || a >= layout.alice[i] || b < 0 || b >= layout.bob[j])
                fail(path, "index outside layout");
            f.at(i, j, a, b) += number_in(member(rec, "c", path), path + "c");
            any = true;
        }
    }
    if (doc.contains("correlators")) {
        const json& cs = doc.at("correlators");
        if (!cs.is_array()) fail("correlators", "expected an array of records");
        for (std::size_t k = 0; k < cs.size(); ++k) {
            const std::string path = "correlators[" + std::to_string(k) + "]/";
            const json& rec = cs[k];
            add_correlator(f, int_member(rec, "i", path), int_member(rec, "j", path),
                           number_in(member(rec, "c", path), path + "c"));
            any = true;
        }
    }
    if (!any) fail("coefficients", "functional document has neither coefficients nor correlators");
    return f;
}

BellFunctional parse_functional(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("functional document: ") + e.what());
    }
    return functional_from_json(doc);
}

json to_json(const BellFunctional& f) {
    json records = json::array();
    const auto& L = f.layout;
    for (int i = 0; i < L.alice_settings(); ++i)
        for (int j = 0; j < L.bob_settings(); ++j)
            for (int a = 0; a < L.alice[i]; ++a)
                for (int b = 0; b < L.bob[j]; ++b) {
                    const double c = f.at(i, j, a, b);
                    if (c == 0.0) continue;
                    records.push_back(json{{"i", i}, {"j", j}, {"alpha", a}, {"beta", b},
                                           {"c", round_sig(c)}});
                }
    return json{{"layout", layout_to_json(f.layout)}, {"coefficients", std::move(records)}};
}

CorrelationTable table_from_json(const json& doc) {
    MeasurementLayout layout = layout_from_json(doc, "");
    CorrelationTable t = CorrelationTable::zeros(layout);
    const json& vs = member(doc, "values", "");
    if (!vs.is_array()) fail("values", "expected an array of records");
    for (std::size_t k = 0; k < vs.size(); ++k) {
        const std::string path = "values[" + std::to_string(k) + "]/";
        const json& rec = vs[k];
        const int i = int_member(rec, "i", path);
        const int j = int_member(rec, "j", path);
        const int a = int_member(rec, "alpha", path);
        const int b = int_member(rec, "beta", path);
        if (i < 0 || i >= layout.alice_settings() || j < 0 || j >= layout.bob_settings() ||
            a < 0 || a >= layout.alice[i] || b < 0 || b >= layout.bob[j])
            fail(path, "index outside layout");
        t.at(i, j, a, b) = number_in(member(rec, "p", path), path + "p");
    }
    return t;
}

CorrelationTable parse_table(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("table document: ") + e.what());
    }
    return table_from_json(doc);
}

json to_json(const CorrelationTable& t) {
    json records = json::array();
    const auto& L = t.layout;
    for (int i = 0; i < L.alice_settings(); ++i)
        for (int j = 0; j < L.bob_settings(); ++j)
            for (int a = 0; a < L.alice[i]; ++a)
                for (int b = 0; b < L.bob[j]; ++b)
                    records.push_back(json{{"i", i}, {"j", j}, {"alpha", a}, {"beta", b},
                                           {"p", round_sig(t.at(i, j, a, b))}});
    return json{{"layout", layout_to_json(t.layout)}, {"values", std::move(records)}};
}

json to_json(const ValidationReport& rep) {
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back(json{{"name", c.name}, {"residual", round_sig(c.residual)},
                              {"pass", c.pass}});
    return json{{"checks", std::move(checks)}};
}

} // namespace qcorr
