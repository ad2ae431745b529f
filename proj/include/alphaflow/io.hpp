#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "alphaflow/dynamics.hpp"
#include "alphaflow/errors.hpp"
#include "alphaflow/solve.hpp"

// Serialization of metrics, trajectories and summaries. Doubles are written
// in shortest round-trip form; NaN becomes null.

namespace alphaflow
{

using ojson = nlohmann::ordered_json;

inline ojson to_json(const Eigen::VectorXd& v)
{
    ojson a = ojson::array();
    for (int i = 0; i < v.size(); ++i) {
        a.push_back(v[i]);
    }
    return a;
}

inline Eigen::VectorXd vector_from_json(const nlohmann::json& a, const std::string& what)
{
    if (!a.is_array()) {
        throw SchemaError(what + " must be an array of numbers");
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_number()) {
            throw SchemaError(what + "[" + std::to_string(i) + "] is not a number");
        }
        v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    }
    return v;
}

/// FNV-1a 64-bit digest of a string, as 16 hex digits
inline std::string fnv1a_hex(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Hash of a configuration object in its canonical (sorted-key) dump
inline std::string config_hash(const nlohmann::json& config)
{
    return fnv1a_hex(config.dump());
}

// ---- metric files: {"geometry": ..., "r": [...], "u": [...]} ----

inline ojson metric_json(const PackingMetric& m)
{
    ojson j;
    j["geometry"] = to_string(m.geom);
    j["r"] = to_json(m.r);
    j["u"] = to_json(to_u(m));
    return j;
}

/**
 * @brief Read a metric document; "r" takes precedence over "u"
 * @throws SchemaError on missing or malformed fields
 */
inline PackingMetric metric_from_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("geometry")) {
        throw SchemaError("metric document needs \"geometry\"");
    }
    const Geometry g = parse_geometry(j.at("geometry").get<std::string>());
    if (j.contains("r")) {
        return {g, vector_from_json(j.at("r"), "r")};
    }
    if (j.contains("u")) {
        return from_u(g, vector_from_json(j.at("u"), "u"));
    }
    throw SchemaError("metric document needs \"r\" or \"u\"");
}

inline nlohmann::json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    try {
        return nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

inline PackingMetric load_metric_file(const std::string& path)
{
    return metric_from_json(read_json_file(path));
}

// ---- trajectory stream ----

/// One record line; G columns are named by geometry
inline ojson record_json(const FlowRecord& r, Geometry g, const std::string& status)
{
    ojson j;
    j["t"] = r.t;
    j["u"] = to_json(r.u);
    j["r"] = to_json(r.r);
    j["K"] = to_json(r.K);
    j["B"] = to_json(r.B);
    j["s_alpha"] = r.s_alpha;
    j["omega_inf"] = r.omega_inf;
    j["omega_sum"] = r.omega_sum;
    j["potential"] = r.potential;
    if (g == Geometry::euclidean) {
        j["G_v"] = r.G_max;
        j["G_w"] = r.G_min;
    }
    else {
        j["G_p"] = r.G_max;
        j["G_q"] = r.G_min;
    }
    j["status"] = status;
    return j;
}

/**
 * @brief Write records (one JSON object per line) and a final summary line
 *
 * Every record carries status "running" except the last, which carries the
 * terminal status. The summary line is {"summary": {...}}.
 */
inline void write_trajectory(std::ostream& out, const Trajectory& traj, const ojson& summary)
{
    for (std::size_t k = 0; k < traj.records.size(); ++k) {
        const bool last = k + 1 == traj.records.size();
        out << record_json(traj.records[k], traj.geom, last ? to_string(traj.status) : "running")
                   .dump()
            << '\n';
    }
    ojson s;
    s["summary"] = summary;
    out << s.dump() << '\n';
}

/** @brief A parsed trajectory stream */
struct TrajectoryFile {
    std::vector<nlohmann::json> records;
    nlohmann::json summary;  ///< null when absent
    Geometry geom{Geometry::euclidean};
};

/**
 * @brief Parse a trajectory stream
 * @throws SchemaError naming the offending line
 */
inline TrajectoryFile read_trajectory(std::istream& in)
{
    TrajectoryFile f;
    std::string line;
    int lineno = 0;
    std::size_t n = 0;
    bool geom_known = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        }
        catch (const nlohmann::json::parse_error&) {
            throw SchemaError("line " + std::to_string(lineno) + ": not valid JSON");
        }
        if (!j.is_object()) {
            throw SchemaError("line " + std::to_string(lineno) + ": expected an object");
        }
        if (j.contains("summary")) {
            if (!f.summary.is_null()) {
                throw SchemaError("line " + std::to_string(lineno) + ": second summary");
            }
            f.summary = j.at("summary");
            continue;
        }
        if (!f.summary.is_null()) {
            throw SchemaError("line " + std::to_string(lineno) + ": record after summary");
        }
        for (const char* key : {"t", "u", "r", "K", "B", "omega_inf", "status"}) {
            if (!j.contains(key)) {
                throw SchemaError("line " + std::to_string(lineno) + ": missing \"" + key + "\"");
            }
        }
        if (!j.at("t").is_number() || !j.at("r").is_array()) {
            throw SchemaError("line " + std::to_string(lineno) + ": malformed record");
        }
        const bool euclid = j.contains("G_v") && j.contains("G_w");
        const bool hyper = j.contains("G_p") && j.contains("G_q");
        if (euclid == hyper) {
            throw SchemaError("line " + std::to_string(lineno) + ": expected G_v/G_w or G_p/G_q");
        }
        const Geometry g = euclid ? Geometry::euclidean : Geometry::hyperbolic;
        if (geom_known && g != f.geom) {
            throw SchemaError("line " + std::to_string(lineno) + ": geometry changes mid-stream");
        }
        f.geom = g;
        geom_known = true;
        if (f.records.empty()) {
            n = j.at("r").size();
        }
        for (const char* key : {"u", "r", "K", "B"}) {
            if (!j.at(key).is_array() || j.at(key).size() != n) {
                throw SchemaError("line " + std::to_string(lineno) + ": \"" + key + "\" has " +
                                  "the wrong length");
            }
        }
        if (!f.records.empty() && !(j.at("t").get<double>() > f.records.back().at("t").get<double>())) {
            throw SchemaError("line " + std::to_string(lineno) + ": time does not increase");
        }
        f.records.push_back(std::move(j));
    }
    if (f.records.empty()) {
        throw SchemaError("trajectory stream has no records");
    }
    return f;
}

namespace detail
{

inline std::string csv_number(const nlohmann::json& v)
{
    if (v.is_null()) {
        return "nan";
    }
    return nlohmann::json(v.get<double>()).dump();
}

}  // namespace detail

/**
 * @brief Plot-ready table: t, r_i, K_i, B_i, omega_inf, potential, G columns, status
 */
inline void export_csv(const TrajectoryFile& f, std::ostream& out)
{
    const std::size_t n = f.records.front().at("r").size();
    const char* g1 = f.geom == Geometry::euclidean ? "G_v" : "G_p";
    const char* g2 = f.geom == Geometry::euclidean ? "G_w" : "G_q";
    out << "t";
    for (const char* p : {"r", "K", "B"}) {
        for (std::size_t i = 0; i < n; ++i) {
            out << ',' << p << '_' << i;
        }
    }
    out << ",omega_inf,potential," << g1 << ',' << g2 << ",status\n";
    for (const auto& r : f.records) {
        out << detail::csv_number(r.at("t"));
        for (const char* p : {"r", "K", "B"}) {
            for (const auto& v : r.at(p)) {
                out << ',' << detail::csv_number(v);
            }
        }
        out << ',' << detail::csv_number(r.at("omega_inf")) << ','
            << detail::csv_number(r.value("potential", nlohmann::json())) << ','
            << detail::csv_number(r.at(g1)) << ',' << detail::csv_number(r.at(g2)) << ','
            << r.at("status").get<std::string>() << '\n';
    }
}

// ---- summaries ----

inline ojson rate_json(const Trajectory& traj)
{
    ojson j;
    try {
        const auto est = estimate_rate(traj);
        j["lambda"] = est.lambda;
        j["r_squared"] = est.r_squared;
        j["records_used"] = est.records_used;
    }
    catch (const ConvergenceError& e) {
        j["error"] = e.what();
    }
    return j;
}

inline ojson probe_json(const NormalizationProbe& p)
{
    ojson j;
    j["normalization"] = p.normalization;
    j["min_sum"] = p.min_sum;
    j["max_sum"] = p.max_sum;
    j["first_sum"] = p.first_sum;
    j["last_sum"] = p.last_sum;
    j["euclidean_constant"] = p.expected_euclidean;
    j["strictly_positive"] = p.strictly_positive;
    j["obstructs_convergence"] = p.obstructs_convergence;
    j["max_identity_residual"] = p.max_identity_residual;
    return j;
}

inline ojson diagnostics_json(const DiagnosticsReport& d)
{
    ojson j;
    j["max_curvature_identity_residual"] = d.max_curvature_identity_residual;
    j["max_omega_identity_residual"] = d.max_omega_identity_residual;
    j["envelope_checked"] = d.envelope_checked;
    j["min_envelope_margin"] = d.min_envelope_margin;
    j["G_max_nonincreasing"] = d.G_max_nonincreasing;
    j["G_min_nondecreasing"] = d.G_min_nondecreasing;
    j["G_ordered"] = d.G_ordered;
    return j;
}

inline ojson stationary_json(const StationaryResult& r)
{
    ojson j;
    j["status"] = to_string(r.status);
    j["residual"] = r.residual;
    j["certificate"] = r.certificate;
    j["obstruction"] = r.obstruction;
    j["gradient_sum"] = r.gradient_sum;
    j["iterations"] = r.iterations;
    j["gradient_steps"] = r.gradient_steps;
    j["message"] = r.message;
    j["warnings"] = r.warnings;
    j["metric"] = metric_json(PackingMetric{r.geom, r.r});
    return j;
}

}  // namespace alphaflow
