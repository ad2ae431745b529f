#pragma once

#include <cmath>
#include <numbers>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "alphaflow/surface.hpp"

namespace alphaflow
{

enum class BranchStatus { verified, partially_verified, violated };

inline std::string to_string(BranchStatus s)
{
    switch (s) {
        case BranchStatus::verified:
            return "verified";
        case BranchStatus::partially_verified:
            return "partially_verified";
        case BranchStatus::violated:
            return "violated";
    }
    return "?";
}

/**
 * @brief Result of checking the cycle inequality over short disc-bounding cycles
 *
 * A qualifying cycle is a simple cycle of the 1-skeleton that separates the
 * face set with at least one side a disc containing a vertex in its interior.
 * For that side: sum over cycle edges of (pi - Phi(e)) must exceed
 * 2 (l + 1) pi, l being the total branch order of the interior vertices.
 */
struct BranchCheckReport {
    BranchStatus status{BranchStatus::verified};
    std::vector<int> violating_cycle;     ///< closed vertex sequence, first vertex not repeated
    std::vector<int> enclosed_vertices;   ///< interior of the offending disc
    double cycle_sum{0.0};                ///< sum of (pi - Phi) along the offending cycle
    double required_bound{0.0};           ///< 2 (l + 1) pi for the offending disc
    long cycles_examined{0};
    long skipped_nonseparating{0};
    long skipped_non_disc{0};  ///< separating, but neither side is a disc
    int length_bound{12};
    bool length_truncated{false};  ///< the bound is below the vertex count
    bool count_truncated{false};   ///< stopped at max_cycles
};

namespace detail
{

class CycleChecker
{
public:
    CycleChecker(const WeightedTriangulation& wt, const BranchAssignment& beta, int bound,
                 long max_cycles)
        : wt_{wt}, beta_{beta}, bound_{bound}, max_cycles_{max_cycles}
    {
        const int n = wt.vertex_count();
        dist_.assign(n, std::vector<int>(n, n + 1));
        for (int s = 0; s < n; ++s) {
            std::queue<int> q;
            dist_[s][s] = 0;
            q.push(s);
            while (!q.empty()) {
                const int v = q.front();
                q.pop();
                for (int w : wt.neighbors(v)) {
                    if (dist_[s][w] > dist_[s][v] + 1) {
                        dist_[s][w] = dist_[s][v] + 1;
                        q.push(w);
                    }
                }
            }
        }
        edge_to_faces_.assign(wt.edge_count(), {});
        for (int f = 0; f < wt.face_count(); ++f) {
            for (int e : wt.face_edges(f)) {
                edge_to_faces_[e].push_back(f);
            }
        }
    }

    BranchCheckReport run()
    {
        rep_.length_bound = bound_;
        rep_.length_truncated = bound_ < wt_.vertex_count();
        const int n = wt_.vertex_count();
        on_path_.assign(n, 0);
        for (int len = 3; len <= bound_ && !done_; ++len) {
            for (int s = 0; s < n && !done_; ++s) {
                path_.assign(1, s);
                on_path_[s] = 1;
                extend(s, len);
                on_path_[s] = 0;
            }
        }
        if (rep_.status != BranchStatus::violated) {
            const bool partial = rep_.length_truncated || rep_.count_truncated ||
                                 rep_.skipped_nonseparating > 0 || rep_.skipped_non_disc > 0;
            rep_.status = partial ? BranchStatus::partially_verified : BranchStatus::verified;
        }
        return rep_;
    }

private:
    // paths start at the smallest vertex of the cycle; direction fixed by path_[1] < last
    void extend(int start, int len)
    {
        if (done_) {
            return;
        }
        const int cur = path_.back();
        const int depth = static_cast<int>(path_.size());
        if (depth == len) {
            if (wt_.adjacent(cur, start) && path_[1] < cur) {
                examine();
            }
            return;
        }
        for (int w : wt_.neighbors(cur)) {
            if (w <= start || on_path_[w]) {
                continue;
            }
            // remaining edges after stepping to w: len - depth, must reach start
            if (dist_[w][start] > len - depth) {
                continue;
            }
            on_path_[w] = 1;
            path_.push_back(w);
            extend(start, len);
            path_.pop_back();
            on_path_[w] = 0;
            if (done_) {
                return;
            }
        }
    }

    void examine()
    {
        if (rep_.cycles_examined >= max_cycles_) {
            rep_.count_truncated = true;
            done_ = true;
            return;
        }
        ++rep_.cycles_examined;

        const int m = static_cast<int>(path_.size());
        std::vector<char> cut(wt_.edge_count(), 0);
        double sum = 0.0;
        for (int k = 0; k < m; ++k) {
            const int e = wt_.edge_index(path_[k], path_[(k + 1) % m]);
            cut[e] = 1;
            sum += std::numbers::pi - wt_.weights()[e];
        }

        // components of the face graph with the cycle's edges removed
        std::vector<int> comp(wt_.face_count(), -1);
        int ncomp = 0;
        for (int f0 = 0; f0 < wt_.face_count(); ++f0) {
            if (comp[f0] >= 0) {
                continue;
            }
            std::queue<int> q;
            q.push(f0);
            comp[f0] = ncomp;
            while (!q.empty()) {
                const int f = q.front();
                q.pop();
                for (int e : wt_.face_edges(f)) {
                    if (cut[e]) {
                        continue;
                    }
                    for (int g : edge_to_faces_[e]) {
                        if (comp[g] < 0) {
                            comp[g] = ncomp;
                            q.push(g);
                        }
                    }
                }
            }
            ++ncomp;
        }
        if (ncomp < 2) {
            ++rep_.skipped_nonseparating;
            return;
        }

        std::vector<char> on_cycle(wt_.vertex_count(), 0);
        for (int v : path_) {
            on_cycle[v] = 1;
        }
        bool any_disc = false;
        for (int c = 0; c < ncomp; ++c) {
            std::set<int> verts;
            std::set<int> edges;
            int faces = 0;
            for (int f = 0; f < wt_.face_count(); ++f) {
                if (comp[f] != c) {
                    continue;
                }
                ++faces;
                for (int v : wt_.faces()[f]) {
                    verts.insert(v);
                }
                for (int e : wt_.face_edges(f)) {
                    edges.insert(e);
                }
            }
            const int chi = static_cast<int>(verts.size()) - static_cast<int>(edges.size()) +
                            faces;
            if (chi != 1) {
                continue;
            }
            any_disc = true;
            std::vector<int> interior;
            int order = 0;
            for (int v : verts) {
                if (!on_cycle[v]) {
                    interior.push_back(v);
                    order += beta_[v];
                }
            }
            if (interior.empty()) {
                continue;
            }
            const double rhs = 2.0 * (order + 1) * std::numbers::pi;
            // equality counts as a violation; the inequality is strict
            if (sum <= rhs + 1e-12 * rhs) {
                rep_.status = BranchStatus::violated;
                rep_.violating_cycle = path_;
                rep_.enclosed_vertices = interior;
                rep_.cycle_sum = sum;
                rep_.required_bound = rhs;
                done_ = true;
                return;
            }
        }
        if (!any_disc) {
            ++rep_.skipped_non_disc;
        }
    }

    const WeightedTriangulation& wt_;
    const BranchAssignment& beta_;
    int bound_;
    long max_cycles_;
    std::vector<std::vector<int>> dist_;
    std::vector<std::vector<int>> edge_to_faces_;
    std::vector<int> path_;
    std::vector<char> on_path_;
    BranchCheckReport rep_;
    bool done_{false};
};

}  // namespace detail

/**
 * @brief Check the branch-structure cycle inequality on cycles up to length_bound
 *
 * Cycles are enumerated shortest first; enumeration stops at the first
 * violation or after max_cycles cycles. Limits are reported, never thrown.
 */
inline BranchCheckReport check_branch_structure(const WeightedTriangulation& wt,
                                                const BranchAssignment& beta,
                                                int length_bound = 12,
                                                long max_cycles = 200000)
{
    check_branch_size(wt, beta);
    if (length_bound < 3) {
        throw DomainError("length_bound must be at least 3");
    }
    detail::CycleChecker checker(wt, beta, length_bound, max_cycles);
    return checker.run();
}

}  // namespace alphaflow
