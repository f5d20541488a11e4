#pragma once

// JSON and CSV rendering. JSON is the source of truth; CSV flattens one table of a report.
//
// CSV schema v1: the first line is "# cayley-csv v1", the second the column names.
// Tabular reports emit one line per table entry with the entry's scalar fields as
// columns; other reports emit "path,value" lines with dotted JSON paths.

#include <cayley/cascade.hpp>
#include <cayley/rational.hpp>
#include <cayley/subset.hpp>

#include <json.hpp>

#include <cmath>
#include <sstream>
#include <string>

namespace cayley {

using Json = nlohmann::ordered_json;

inline constexpr const char* kCsvVersionLine = "# cayley-csv v1";

/// Finite values as numbers; non-finite as the strings "inf", "-inf", "nan".
inline Json jnum(long double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return static_cast<double>(v);
}

inline Json to_json(const Rational& r) { return Json{{"exact", r.str()}, {"value", r.to_double()}}; }

inline Json to_json(const GroupSubset& s) { return Json(s.indices()); }

inline Json to_json(const CascadeRow& r) {
    return Json{{"name", r.name},         {"anchor", r.anchor}, {"lhs", jnum(r.lhs)},
                {"rhs", jnum(r.rhs)},     {"relation", r.relation}, {"pass", r.pass},
                {"scale", r.scale},       {"gating", r.gating}, {"constants", r.constants}};
}

inline Json to_json(const CascadeLedger& led) {
    const auto& in = led.inputs;
    Json inputs{{"mode", to_string(in.mode)},
                {"log_n", in.log_n ? jnum(*in.log_n) : Json(nullptr)},
                {"loglog_n", jnum(in.loglog_n)},
                {"w", jnum(in.w)},
                {"epsilon", in.epsilon ? jnum(*in.epsilon) : Json(nullptr)},
                {"constants",
                 {{"C", jnum(in.constants.C)},
                  {"C_prop8", jnum(in.constants.C_prop8)},
                  {"C_prime", jnum(in.constants.C_prime)},
                  {"C1", jnum(in.constants.C1)},
                  {"C2", jnum(in.constants.C2)}}}};
    Json params = Json::object();
    for (const auto& p : led.params) params[p.name] = jnum(p.value);
    auto arr = [](const std::vector<long double>& v) {
        Json a = Json::array();
        for (long double x : v) a.push_back(jnum(x));
        return a;
    };
    Json rows = Json::array();
    for (const auto& r : led.rows) rows.push_back(to_json(r));
    Json findings = Json::array();
    for (const auto& r : led.findings) findings.push_back(to_json(r));
    return Json{{"inputs", inputs},
                {"params", params},
                {"log_n_nu", arr(led.log_n_nu)},
                {"log_k_prime_j0", arr(led.log_k_prime_j0)},
                {"log_k_prime_jlast", arr(led.log_k_prime_jlast)},
                {"rows", rows},
                {"findings", findings},
                {"all_pass", led.passes()}};
}

namespace detail {

inline std::string csv_cell(const Json& v) {
    std::string s;
    if (v.is_string()) s = v.get<std::string>();
    else if (v.is_null()) s = "";
    else s = v.dump();
    if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    return s;
}

inline void flatten(const Json& j, const std::string& path, std::ostream& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
    } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "." + std::to_string(i), out);
    } else {
        out << csv_cell(path) << ',' << csv_cell(j) << '\n';
    }
}

} // namespace detail

/// CSV for `report`. When `table` names an array of objects, it becomes the table;
/// otherwise the whole report is flattened to path,value lines.
inline std::string to_csv(const Json& report, const std::string& table = "") {
    std::ostringstream out;
    out << kCsvVersionLine << '\n';
    const Json* t = nullptr;
    if (!table.empty()) {
        Json::json_pointer ptr("/" + table);
        if (report.contains(ptr) && report.at(ptr).is_array()) t = &report.at(ptr);
    }
    if (t && !t->empty() && t->front().is_object()) {
        std::vector<std::string> cols;
        for (auto it = t->front().begin(); it != t->front().end(); ++it) {
            if (!it.value().is_structured()) cols.push_back(it.key());
        }
        for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
        out << '\n';
        for (const auto& row : *t) {
            for (std::size_t i = 0; i < cols.size(); ++i) {
                out << (i ? "," : "") << (row.contains(cols[i]) ? detail::csv_cell(row[cols[i]]) : "");
            }
            out << '\n';
        }
    } else {
        out << "path,value\n";
        detail::flatten(report, "", out);
    }
    return out.str();
}

} // namespace cayley
