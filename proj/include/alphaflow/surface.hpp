#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "alphaflow/errors.hpp"

namespace alphaflow
{

/** @brief Ordered vertex triple of a triangular face */
using Face = std::array<int, 3>;

/** @brief Canonical undirected edge key: (min, max) vertex indices */
struct EdgeKey {
    int lo{0};
    int hi{0};

    EdgeKey() = default;
    EdgeKey(int a, int b) : lo{std::min(a, b)}, hi{std::max(a, b)} {}

    auto operator<=>(const EdgeKey&) const = default;

    /** @brief Serialized form "lo-hi" */
    [[nodiscard]] std::string str() const
    {
        return std::to_string(lo) + "-" + std::to_string(hi);
    }
};

/** @brief Largest admissible intersection-angle weight */
inline constexpr double kMaxWeight = std::numbers::pi / 2.0;

/** @brief One named structural check and its outcome */
struct InvariantCheck {
    std::string name;
    bool passed{true};
    std::string detail;
};

/**
 * @brief Outcome of validating a face list and weight assignment
 *
 * Counts are only meaningful when the index and distinctness checks pass.
 */
struct ValidationReport {
    std::vector<InvariantCheck> checks;
    int vertex_count{0};
    int edge_count{0};
    int face_count{0};
    int euler_characteristic{0};
    std::vector<int> degrees;

    [[nodiscard]] bool valid() const
    {
        return std::all_of(checks.begin(), checks.end(),
                           [](const auto& c) { return c.passed; });
    }

    /** @brief First failing check, or nullptr */
    [[nodiscard]] const InvariantCheck* first_failure() const
    {
        for (const auto& c : checks) {
            if (!c.passed) {
                return &c;
            }
        }
        return nullptr;
    }
};

namespace detail
{

inline std::uint64_t pack_edge(int a, int b)
{
    const EdgeKey k{a, b};
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.lo)) << 32U) |
           static_cast<std::uint32_t>(k.hi);
}

inline std::string face_str(const Face& f)
{
    return "[" + std::to_string(f[0]) + "," + std::to_string(f[1]) + "," +
           std::to_string(f[2]) + "]";
}

/// Is the set of link edges around one vertex a single closed cycle?
inline bool link_is_cycle(const std::vector<std::pair<int, int>>& link)
{
    if (link.empty()) {
        return false;
    }
    std::map<int, std::vector<int>> adj;
    for (auto [a, b] : link) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (const auto& [v, nb] : adj) {
        if (nb.size() != 2) {
            return false;
        }
    }
    // walk the cycle from any vertex and check it covers the link
    const int start = adj.begin()->first;
    int prev = start;
    int cur = adj[start][0];
    std::size_t steps = 1;
    while (cur != start) {
        const auto& nb = adj[cur];
        const int next = nb[0] == prev ? nb[1] : nb[0];
        prev = cur;
        cur = next;
        ++steps;
        if (steps > adj.size()) {
            return false;
        }
    }
    return steps == adj.size();
}

}  // namespace detail

/**
 * @brief Validate a closed triangulated surface description
 *
 * Never throws; each structural requirement becomes one InvariantCheck.
 * Weight keys that are not edges of the face list fail "weight_keys".
 */
inline ValidationReport validate_surface(int vertex_count, const std::vector<Face>& faces,
                                         double default_weight,
                                         const std::map<EdgeKey, double>& weights)
{
    ValidationReport rep;
    rep.vertex_count = vertex_count;
    rep.face_count = static_cast<int>(faces.size());

    auto add = [&rep](std::string name, bool ok, std::string detail) {
        rep.checks.push_back({std::move(name), ok, std::move(detail)});
        return ok;
    };

    if (!add("vertex_count_positive", vertex_count > 0,
             vertex_count > 0 ? "" : "vertex count must be positive")) {
        return rep;
    }

    // index range
    for (std::size_t f = 0; f < faces.size(); ++f) {
        for (int v : faces[f]) {
            if (v < 0 || v >= vertex_count) {
                add("vertex_indices", false,
                    "face " + std::to_string(f) + " " + detail::face_str(faces[f]) +
                        " references vertex " + std::to_string(v) + " outside [0," +
                        std::to_string(vertex_count) + ")");
                return rep;
            }
        }
    }
    add("vertex_indices", true, "");

    for (std::size_t f = 0; f < faces.size(); ++f) {
        const auto& t = faces[f];
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
            add("distinct_face_vertices", false,
                "degenerate face " + std::to_string(f) + " " + detail::face_str(t));
            return rep;
        }
    }
    add("distinct_face_vertices", true, "");

    {
        std::map<std::array<int, 3>, std::size_t> seen;
        bool ok = true;
        std::string msg;
        for (std::size_t f = 0; f < faces.size() && ok; ++f) {
            auto key = faces[f];
            std::sort(key.begin(), key.end());
            auto [it, inserted] = seen.emplace(key, f);
            if (!inserted) {
                ok = false;
                msg = "face " + std::to_string(f) + " " + detail::face_str(faces[f]) +
                      " duplicates face " + std::to_string(it->second);
            }
        }
        if (!add("no_duplicate_faces", ok, msg)) {
            return rep;
        }
    }

    // edge-face incidence
    std::map<EdgeKey, int> edge_faces;
    for (const auto& t : faces) {
        for (int k = 0; k < 3; ++k) {
            ++edge_faces[EdgeKey{t[k], t[(k + 1) % 3]}];
        }
    }
    rep.edge_count = static_cast<int>(edge_faces.size());
    {
        std::string msg;
        for (const auto& [e, n] : edge_faces) {
            if (n != 2) {
                msg = "non-manifold edge " + e.str() + " belongs to " + std::to_string(n) +
                      " face(s); a closed surface needs exactly 2";
                break;
            }
        }
        add("edge_in_two_faces", msg.empty(), msg);
    }
    add("edge_face_count_identity", 2 * rep.edge_count == 3 * rep.face_count,
        "2|E| = " + std::to_string(2 * rep.edge_count) +
            ", 3|F| = " + std::to_string(3 * rep.face_count));

    // vertex links
    {
        std::vector<std::vector<std::pair<int, int>>> links(vertex_count);
        for (const auto& t : faces) {
            for (int k = 0; k < 3; ++k) {
                links[t[k]].emplace_back(t[(k + 1) % 3], t[(k + 2) % 3]);
            }
        }
        std::string msg;
        for (int v = 0; v < vertex_count && msg.empty(); ++v) {
            if (links[v].empty()) {
                msg = "vertex " + std::to_string(v) + " is not used by any face";
            }
            else if (!detail::link_is_cycle(links[v])) {
                msg = "non-manifold vertex " + std::to_string(v) +
                      ": its link is not a single cycle";
            }
        }
        add("vertex_links_are_cycles", msg.empty(), msg);
    }

    // connectivity of the face-adjacency graph
    {
        std::map<EdgeKey, std::vector<int>> by_edge;
        for (std::size_t f = 0; f < faces.size(); ++f) {
            for (int k = 0; k < 3; ++k) {
                by_edge[EdgeKey{faces[f][k], faces[f][(k + 1) % 3]}].push_back(
                    static_cast<int>(f));
            }
        }
        std::vector<char> seen(faces.size(), 0);
        std::queue<int> q;
        if (!faces.empty()) {
            q.push(0);
            seen[0] = 1;
        }
        std::size_t reached = faces.empty() ? 0 : 1;
        while (!q.empty()) {
            const int f = q.front();
            q.pop();
            for (int k = 0; k < 3; ++k) {
                for (int g : by_edge[EdgeKey{faces[f][k], faces[f][(k + 1) % 3]}]) {
                    if (!seen[g]) {
                        seen[g] = 1;
                        ++reached;
                        q.push(g);
                    }
                }
            }
        }
        std::string msg;
        if (faces.empty()) {
            msg = "no faces";
        }
        else if (reached != faces.size()) {
            const auto it = std::find(seen.begin(), seen.end(), 0);
            msg = "disconnected complex: face " +
                  std::to_string(std::distance(seen.begin(), it)) +
                  " is not reachable from face 0";
        }
        add("connected", msg.empty(), msg);
    }

    // weights
    {
        std::string msg;
        if (!(default_weight >= 0.0 && default_weight <= kMaxWeight)) {
            msg = "weight out of range: default_weight " + std::to_string(default_weight) +
                  " not in [0, pi/2]";
        }
        for (const auto& [e, w] : weights) {
            if (!msg.empty()) {
                break;
            }
            if (!(w >= 0.0 && w <= kMaxWeight)) {
                msg = "weight out of range on edge " + e.str() + ": " + std::to_string(w) +
                      " not in [0, pi/2]";
            }
        }
        add("weights_in_range", msg.empty(), msg);

        std::string kmsg;
        for (const auto& [e, w] : weights) {
            if (!edge_faces.contains(e)) {
                kmsg = "weight given for " + e.str() + ", which is not an edge";
                break;
            }
        }
        add("weight_keys", kmsg.empty(), kmsg);
    }

    rep.euler_characteristic = vertex_count - rep.edge_count + rep.face_count;
    rep.degrees.assign(vertex_count, 0);
    for (const auto& [e, n] : edge_faces) {
        ++rep.degrees[e.lo];
        ++rep.degrees[e.hi];
    }
    return rep;
}

/**
 * @brief Combinatorial closed surface with per-edge intersection angles
 *
 * Immutable once built. Edges are indexed in increasing (lo, hi) order and
 * weights are stored per edge index.
 */
class WeightedTriangulation
{
public:
    /**
     * @brief Validate and build
     * @throws TopologyError for structural failures, DomainError for weights
     */
    static WeightedTriangulation build(int vertex_count, std::vector<Face> faces,
                                       double default_weight = 0.0,
                                       const std::map<EdgeKey, double>& weights = {})
    {
        const auto rep = validate_surface(vertex_count, faces, default_weight, weights);
        if (const auto* bad = rep.first_failure()) {
            if (bad->name == "weights_in_range") {
                throw DomainError(bad->detail);
            }
            throw TopologyError(bad->detail);
        }
        WeightedTriangulation wt;
        wt.n_ = vertex_count;
        wt.faces_ = std::move(faces);

        std::map<EdgeKey, int> index;
        for (const auto& t : wt.faces_) {
            for (int k = 0; k < 3; ++k) {
                index.emplace(EdgeKey{t[k], t[(k + 1) % 3]}, 0);
            }
        }
        int next = 0;
        for (auto& [e, idx] : index) {
            idx = next++;
            wt.edges_.push_back(e);
            const auto w = weights.find(e);
            wt.weights_.push_back(w == weights.end() ? default_weight : w->second);
            wt.edge_lookup_.emplace(detail::pack_edge(e.lo, e.hi), idx);
        }

        wt.neighbors_.assign(vertex_count, {});
        for (const auto& e : wt.edges_) {
            wt.neighbors_[e.lo].push_back(e.hi);
            wt.neighbors_[e.hi].push_back(e.lo);
        }
        for (auto& nb : wt.neighbors_) {
            std::sort(nb.begin(), nb.end());
        }
        wt.vertex_faces_.assign(vertex_count, {});
        wt.face_edges_.reserve(wt.faces_.size());
        for (std::size_t f = 0; f < wt.faces_.size(); ++f) {
            const auto& t = wt.faces_[f];
            std::array<int, 3> fe{};
            for (int k = 0; k < 3; ++k) {
                wt.vertex_faces_[t[k]].push_back(static_cast<int>(f));
                fe[k] = wt.edge_index(t[k], t[(k + 1) % 3]);
            }
            wt.face_edges_.push_back(fe);
        }
        return wt;
    }

    [[nodiscard]] int vertex_count() const noexcept { return n_; }
    [[nodiscard]] int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
    [[nodiscard]] int face_count() const noexcept { return static_cast<int>(faces_.size()); }

    [[nodiscard]] const std::vector<Face>& faces() const noexcept { return faces_; }
    [[nodiscard]] const std::vector<EdgeKey>& edges() const noexcept { return edges_; }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }

    /** @brief Edge indices of (v0v1, v1v2, v2v0) for face f */
    [[nodiscard]] const std::array<int, 3>& face_edges(int f) const { return face_edges_[f]; }

    /** @brief Index of edge {a, b}, or -1 when a and b are not adjacent */
    [[nodiscard]] int edge_index(int a, int b) const
    {
        const auto it = edge_lookup_.find(detail::pack_edge(a, b));
        return it == edge_lookup_.end() ? -1 : it->second;
    }

    [[nodiscard]] bool adjacent(int a, int b) const { return edge_index(a, b) >= 0; }

    /** @throws DomainError when {a, b} is not an edge */
    [[nodiscard]] double weight(int a, int b) const
    {
        const int e = edge_index(a, b);
        if (e < 0) {
            throw DomainError("no edge " + EdgeKey{a, b}.str());
        }
        return weights_[e];
    }

    [[nodiscard]] const std::vector<int>& neighbors(int v) const { return neighbors_[v]; }
    [[nodiscard]] const std::vector<int>& incident_faces(int v) const
    {
        return vertex_faces_[v];
    }
    [[nodiscard]] int degree(int v) const { return static_cast<int>(neighbors_[v].size()); }

    [[nodiscard]] int max_degree() const
    {
        int d = 0;
        for (const auto& nb : neighbors_) {
            d = std::max(d, static_cast<int>(nb.size()));
        }
        return d;
    }

    /** @brief Copy with every edge weight replaced by phi */
    [[nodiscard]] WeightedTriangulation with_uniform_weight(double phi) const
    {
        if (!(phi >= 0.0 && phi <= kMaxWeight)) {
            throw DomainError("weight out of range: " + std::to_string(phi));
        }
        auto copy = *this;
        std::fill(copy.weights_.begin(), copy.weights_.end(), phi);
        return copy;
    }

    /** @brief Copy with per-edge weights (indexed like edges()) */
    [[nodiscard]] WeightedTriangulation with_weights(std::span<const double> w) const
    {
        if (w.size() != weights_.size()) {
            throw DomainError("weight vector has wrong length");
        }
        for (std::size_t e = 0; e < w.size(); ++e) {
            if (!(w[e] >= 0.0 && w[e] <= kMaxWeight)) {
                throw DomainError("weight out of range on edge " + edges_[e].str());
            }
        }
        auto copy = *this;
        copy.weights_.assign(w.begin(), w.end());
        return copy;
    }

private:
    WeightedTriangulation() = default;

    int n_{0};
    std::vector<Face> faces_;
    std::vector<EdgeKey> edges_;
    std::vector<double> weights_;
    std::unordered_map<std::uint64_t, int> edge_lookup_;
    std::vector<std::vector<int>> neighbors_;
    std::vector<std::vector<int>> vertex_faces_;
    std::vector<std::array<int, 3>> face_edges_;
};

/** @brief chi = N - |E| + |F| */
inline int euler_characteristic(const WeightedTriangulation& wt)
{
    return wt.vertex_count() - wt.edge_count() + wt.face_count();
}

/** @brief Per-vertex branch orders (0 for ordinary vertices) */
struct BranchAssignment {
    std::vector<int> orders;

    BranchAssignment() = default;
    explicit BranchAssignment(std::vector<int> o) : orders{std::move(o)}
    {
        for (std::size_t i = 0; i < orders.size(); ++i) {
            if (orders[i] < 0) {
                throw DomainError("negative branch order at vertex " + std::to_string(i));
            }
        }
    }

    /** @brief All-zero assignment on n vertices */
    static BranchAssignment none(int n) { return BranchAssignment(std::vector<int>(n, 0)); }

    [[nodiscard]] int total_order() const
    {
        return std::accumulate(orders.begin(), orders.end(), 0);
    }
    [[nodiscard]] int size() const { return static_cast<int>(orders.size()); }
    [[nodiscard]] int operator[](int i) const { return orders[i]; }
};

/** @brief Throws DomainError unless beta covers every vertex of wt */
inline void check_branch_size(const WeightedTriangulation& wt, const BranchAssignment& beta)
{
    if (beta.size() != wt.vertex_count()) {
        throw DomainError("branch assignment has " + std::to_string(beta.size()) +
                          " entries for " + std::to_string(wt.vertex_count()) + " vertices");
    }
}

}  // namespace alphaflow
