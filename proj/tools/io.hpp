#pragma once

// JSON config ingestion and report serialization for the command-line tool.

#include "gorms/cohomology.hpp"
#include "gorms/integrate.hpp"
#include "gorms/parse.hpp"
#include "gorms/rep_theory.hpp"
#include "gorms/verify/suites.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gorms::io {

using Json = nlohmann::ordered_json;

/// Malformed input; the message starts with the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& msg) : std::runtime_error(field + ": " + msg) {}
};

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open file");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path, std::string("invalid JSON (") + e.what() + ")");
    }
}

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path.empty() ? "config" : path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(path.empty() ? key : path + "." + key, "missing");
    return *it;
}

inline double number(const nlohmann::json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError(field, "expected a number");
    return j.get<double>();
}

inline std::vector<double> numbers(const nlohmann::json& j, const std::string& field, std::size_t size) {
    if (!j.is_array() || j.size() != size) throw ConfigError(field, "expected an array of " + std::to_string(size) + " numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < size; ++i) out.push_back(number(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

}  // namespace detail

/// {"kind": "plane"} | {"kind": "rectangle", "lo": [...], "hi": [...]} | {"kind": "disk", "radius": r}
inline Domain parse_domain(const nlohmann::json& j, std::size_t dim, const std::string& field = "domain") {
    if (j.is_string()) return parse_domain(nlohmann::json{{"kind", j}}, dim, field);
    const auto& kind = detail::require(j, "kind", field);
    if (!kind.is_string()) throw ConfigError(field + ".kind", "expected a string");
    const std::string k = kind.get<std::string>();
    if (k == "plane") return Domain::plane();
    if (k == "gaussian") return Domain::gaussian();
    if (k == "rectangle") {
        std::vector<double> lo = detail::numbers(detail::require(j, "lo", field), field + ".lo", dim);
        std::vector<double> hi = detail::numbers(detail::require(j, "hi", field), field + ".hi", dim);
        for (std::size_t i = 0; i < dim; ++i)
            if (!(lo[i] < hi[i])) throw ConfigError(field + ".hi", "must exceed lo in every coordinate");
        return Domain::rectangle(std::move(lo), std::move(hi));
    }
    if (k == "disk") {
        if (dim != 2) throw ConfigError(field + ".kind", "disk requires dim = 2");
        const double r = detail::number(detail::require(j, "radius", field), field + ".radius");
        if (!(r > 0)) throw ConfigError(field + ".radius", "must be positive");
        return Domain::disk(r);
    }
    throw ConfigError(field + ".kind", "unknown domain '" + k + "' (plane, rectangle, disk, gaussian)");
}

/// {"dim", "coords", "metric": [[coef strings]], "domain", "euler_char"}
inline MetricSpec parse_metric(const nlohmann::json& j) {
    MetricSpec g;
    const auto& dim = detail::require(j, "dim", "");
    if (!dim.is_number_integer() || dim.get<int>() < 1) throw ConfigError("dim", "expected a positive integer");
    g.dim = dim.get<int>();
    const auto m = static_cast<std::size_t>(g.dim);

    if (j.contains("coords")) {
        const auto& c = j["coords"];
        if (!c.is_array() || c.size() != m) throw ConfigError("coords", "expected an array of " + std::to_string(m) + " names");
        for (std::size_t i = 0; i < m; ++i) {
            if (!c[i].is_string()) throw ConfigError("coords[" + std::to_string(i) + "]", "expected a string");
            g.coords.push_back(c[i].get<std::string>());
        }
    } else {
        for (std::size_t i = 0; i < m; ++i) g.coords.push_back("x" + std::to_string(i + 1));
    }

    const auto& rows = detail::require(j, "metric", "");
    if (!rows.is_array() || rows.size() != m) throw ConfigError("metric", "expected " + std::to_string(m) + " rows");
    for (std::size_t i = 0; i < m; ++i) {
        const std::string rf = "metric[" + std::to_string(i) + "]";
        if (!rows[i].is_array() || rows[i].size() != m) throw ConfigError(rf, "expected " + std::to_string(m) + " entries");
        g.metric.emplace_back();
        for (std::size_t k = 0; k < m; ++k) {
            const std::string ef = rf + "[" + std::to_string(k) + "]";
            const auto& e = rows[i][k];
            std::string text;
            if (e.is_string()) text = e.get<std::string>();
            else if (e.is_number_integer()) text = std::to_string(e.get<long long>());
            else throw ConfigError(ef, "expected a coefficient string or an integer");
            try {
                g.metric.back().push_back(parse_coef(text, g.coords));
            } catch (const std::exception& ex) {
                throw ConfigError(ef, ex.what());
            }
        }
    }
    g.domain = j.contains("domain") ? parse_domain(j["domain"], m) : Domain::plane();
    if (j.contains("euler_char")) {
        if (!j["euler_char"].is_number_integer()) throw ConfigError("euler_char", "expected an integer");
        g.euler_char = j["euler_char"].get<int>();
    }
    try {
        validate_metric(g);
    } catch (const std::invalid_argument& ex) {
        throw ConfigError("metric", ex.what());
    }
    return g;
}

inline Json to_json(const EulerReport& r) {
    Json j;
    j["value"] = r.value;
    j["error_estimate"] = r.error_estimate;
    j["symbolic_zero"] = r.symbolic_zero;
    j["predicted"] = r.predicted ? Json(*r.predicted) : Json(nullptr);
    j["relative_error"] = r.relative_error ? Json(*r.relative_error) : Json(nullptr);
    j["quadrature"] = Json{{"domain", r.domain}, {"nodes_per_axis", r.nodes_per_axis}, {"evaluations", r.evaluations}};
    j["sign_note"] = r.sign_note;
    j["warnings"] = r.warnings;
    return j;
}

inline Json to_json(const DecomposeReport& r) {
    Json j;
    j["m"] = r.m;
    j["max_degree"] = r.max_degree;
    j["convention"] = convention_name(r.convention);
    j["consistent"] = r.consistent();
    Json rows = Json::array();
    for (const auto& e : r.entries)
        rows.push_back(Json{{"p", e.p},
                            {"q", e.q},
                            {"total", e.total},
                            {"generic", e.generic.get_str()},
                            {"remainder", e.remainder.get_str()},
                            {"in_support", e.in_support},
                            {"mat2_hw_dim", e.mat2_hw_dim},
                            {"hw_dim", e.hw_dim}});
    j["entries"] = rows;
    return j;
}

inline std::string text_table(const DecomposeReport& r) {
    std::ostringstream os;
    os << "m = " << r.m << ", degrees <= " << r.max_degree << ", raising operator " << convention_name(r.convention) << "\n";
    os << "  (p,q)   total  generic  remainder  support  mat2_hw  hw\n";
    for (const auto& e : r.entries) {
        std::ostringstream pq;
        pq << "(" << e.p << "," << e.q << ")";
        char line[160];
        std::snprintf(line, sizeof line, "  %-7s %6zu %8s %10s %8s %8zu %3zu\n", pq.str().c_str(), e.total, e.generic.get_str().c_str(),
                      e.remainder.get_str().c_str(), e.in_support ? "yes" : "no", e.mat2_hw_dim, e.hw_dim);
        os << line;
    }
    os << (r.consistent() ? "consistent: all remainders nonnegative\n" : "INCONSISTENT: negative remainder\n");
    return os.str();
}

inline Json to_json(const BettiReport& r) {
    Json j;
    j["differential"] = r.differential;
    j["max_weight"] = r.trunc.max_weight;
    j["coefficients"] = r.trunc.constant_coefficients ? "constant" : "polynomial";
    j["all_stable"] = r.all_stable();
    Json rows = Json::array();
    for (const auto& e : r.entries)
        rows.push_back(Json{{"multidegree", e.multidegree}, {"betti", e.betti}, {"betti_next", e.betti_next}, {"stable", e.stable}});
    j["entries"] = rows;
    Json total = Json::object();
    for (const auto& [deg, b] : r.by_total_degree()) total[std::to_string(deg)] = b;
    j["by_total_degree"] = total;
    return j;
}

inline Json to_json(const PairingReport& r) {
    return Json{{"direction", r.direction},
                {"chain_map", r.chain_map},
                {"quasi_isomorphism", r.quasi_isomorphism},
                {"source_betti", r.source_betti},
                {"target_betti", r.target_betti},
                {"induced_rank", r.induced_rank}};
}

inline Json to_json(const verify::SuiteResult& s) {
    Json checks = Json::array();
    for (const auto& c : s.checks) {
        Json x{{"label", c.label}, {"ok", c.ok}};
        if (!c.detail.empty()) x["detail"] = c.detail;
        checks.push_back(std::move(x));
    }
    return Json{{"suite", s.name}, {"ok", s.ok()}, {"checks", checks}};
}

}  // namespace gorms::io
