#pragma once

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "alphaflow/errors.hpp"
#include "alphaflow/surface.hpp"

namespace alphaflow
{

/** @brief A triangulation document: surface, uniform weight, and branch orders */
struct TriangulationDocument {
    WeightedTriangulation triangulation;
    BranchAssignment branch;
    double default_weight{0.0};
};

namespace detail
{

inline int parse_index(const std::string& s, const std::string& what)
{
    int v = 0;
    const auto* end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end) {
        throw SchemaError("malformed " + what + " '" + s + "'");
    }
    return v;
}

inline EdgeKey parse_edge_key(const std::string& key)
{
    const auto dash = key.find('-');
    if (dash == std::string::npos || dash == 0) {
        throw SchemaError("malformed edge key '" + key + "' (expected \"i-j\")");
    }
    const int a = parse_index(key.substr(0, dash), "edge key");
    const int b = parse_index(key.substr(dash + 1), "edge key");
    if (a == b) {
        throw SchemaError("edge key '" + key + "' is a self-loop");
    }
    return EdgeKey{a, b};
}

}  // namespace detail

/**
 * @brief Parse a triangulation document
 *
 * Layout: {"vertices": N, "faces": [[i,j,k],...], "default_weight": w,
 * "weights": {"i-j": w,...}, "branch": {"i": order,...}}. Only "vertices"
 * and "faces" are required.
 *
 * @throws SchemaError, TopologyError or DomainError naming the offending item
 */
inline TriangulationDocument load_document(const nlohmann::json& doc)
{
    if (!doc.is_object()) {
        throw SchemaError("document must be a JSON object");
    }
    for (const auto& [key, value] : doc.items()) {
        if (key != "vertices" && key != "faces" && key != "default_weight" &&
            key != "weights" && key != "branch") {
            throw SchemaError("unknown key '" + key + "'");
        }
    }
    if (!doc.contains("vertices") || !doc["vertices"].is_number_integer()) {
        throw SchemaError("\"vertices\" must be an integer");
    }
    if (!doc.contains("faces") || !doc["faces"].is_array()) {
        throw SchemaError("\"faces\" must be an array of vertex triples");
    }
    const int n = doc["vertices"].get<int>();

    std::vector<Face> faces;
    for (std::size_t f = 0; f < doc["faces"].size(); ++f) {
        const auto& t = doc["faces"][f];
        if (!t.is_array() || t.size() != 3) {
            throw SchemaError("face " + std::to_string(f) + " is not a triple");
        }
        Face face{};
        for (int k = 0; k < 3; ++k) {
            if (!t[k].is_number_integer()) {
                throw SchemaError("face " + std::to_string(f) + " has a non-integer entry");
            }
            face[k] = t[k].get<int>();
        }
        faces.push_back(face);
    }

    double default_weight = 0.0;
    if (doc.contains("default_weight")) {
        if (!doc["default_weight"].is_number()) {
            throw SchemaError("\"default_weight\" must be a number");
        }
        default_weight = doc["default_weight"].get<double>();
    }

    std::map<EdgeKey, double> weights;
    if (doc.contains("weights")) {
        if (!doc["weights"].is_object()) {
            throw SchemaError("\"weights\" must be an object keyed by \"i-j\"");
        }
        for (const auto& [key, value] : doc["weights"].items()) {
            if (!value.is_number()) {
                throw SchemaError("weight for edge '" + key + "' is not a number");
            }
            const auto e = detail::parse_edge_key(key);
            if (!weights.emplace(e, value.get<double>()).second) {
                throw SchemaError("edge " + e.str() + " given twice in \"weights\"");
            }
        }
    }

    auto wt = WeightedTriangulation::build(n, std::move(faces), default_weight, weights);

    std::vector<int> orders(n, 0);
    if (doc.contains("branch")) {
        if (!doc["branch"].is_object()) {
            throw SchemaError("\"branch\" must be an object keyed by vertex index");
        }
        for (const auto& [key, value] : doc["branch"].items()) {
            const int v = detail::parse_index(key, "branch vertex");
            if (v < 0 || v >= n) {
                throw SchemaError("branch vertex " + key + " out of range");
            }
            if (!value.is_number_integer() || value.get<int>() < 0) {
                throw SchemaError("branch order at vertex " + key +
                                  " must be a non-negative integer");
            }
            orders[v] = value.get<int>();
        }
    }
    return {std::move(wt), BranchAssignment(std::move(orders)), default_weight};
}

/** @brief Parse a document from text */
inline TriangulationDocument load_document(const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
    return load_document(doc);
}

/** @brief Parse a document and return only the surface */
inline WeightedTriangulation load_triangulation(const std::string& text)
{
    return load_document(text).triangulation;
}

/** @brief Read a document from a file */
inline TriangulationDocument load_document_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return load_document(ss.str());
}

/**
 * @brief Canonical document form
 *
 * Keys in fixed order; weights listed only where they differ from the
 * default, in increasing edge order; branch lists only nonzero orders.
 */
inline nlohmann::ordered_json save_document(const WeightedTriangulation& wt,
                                            const BranchAssignment& beta,
                                            double default_weight)
{
    nlohmann::ordered_json doc;
    doc["vertices"] = wt.vertex_count();
    auto faces = nlohmann::ordered_json::array();
    for (const auto& f : wt.faces()) {
        faces.push_back({f[0], f[1], f[2]});
    }
    doc["faces"] = std::move(faces);
    doc["default_weight"] = default_weight;
    auto weights = nlohmann::ordered_json::object();
    for (int e = 0; e < wt.edge_count(); ++e) {
        if (wt.weights()[e] != default_weight) {
            weights[wt.edges()[e].str()] = wt.weights()[e];
        }
    }
    doc["weights"] = std::move(weights);
    auto branch = nlohmann::ordered_json::object();
    for (int v = 0; v < beta.size(); ++v) {
        if (beta[v] != 0) {
            branch[std::to_string(v)] = beta[v];
        }
    }
    doc["branch"] = std::move(branch);
    return doc;
}

inline nlohmann::ordered_json save_document(const TriangulationDocument& d)
{
    return save_document(d.triangulation, d.branch, d.default_weight);
}

}  // namespace alphaflow
