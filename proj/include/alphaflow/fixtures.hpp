#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "alphaflow/errors.hpp"
#include "alphaflow/surface.hpp"

namespace alphaflow
{

/** @brief Names accepted by builtin() */
inline const std::vector<std::string>& builtin_names()
{
    static const std::vector<std::string> names{"octahedron", "icosahedron", "moebius_torus_7",
                                                "klein_quartic_24"};
    return names;
}

namespace detail
{

inline std::vector<Face> octahedron_faces()
{
    // 0 and 5 are the poles, 1..4 the equator
    return {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1},
            {5, 2, 1}, {5, 3, 2}, {5, 4, 3}, {5, 1, 4}};
}

inline std::vector<Face> icosahedron_faces()
{
    // 0 top, 1..5 upper ring, 6..10 lower ring, 11 bottom;
    // lower vertex 6+i sits between upper vertices 1+i and 1+(i+1)%5
    std::vector<Face> f;
    for (int i = 0; i < 5; ++i) {
        const int u0 = 1 + i;
        const int u1 = 1 + (i + 1) % 5;
        const int l0 = 6 + i;
        const int l1 = 6 + (i + 1) % 5;
        f.push_back({0, u0, u1});
        f.push_back({u0, l0, u1});
        f.push_back({u1, l0, l1});
        f.push_back({11, l1, l0});
    }
    return f;
}

/// 7-vertex torus: faces {i, i+1, i+3} and {i, i+2, i+3} mod 7 (1-skeleton is K7)
inline std::vector<Face> moebius_torus_faces()
{
    std::vector<Face> f;
    for (int i = 0; i < 7; ++i) {
        f.push_back({i, (i + 1) % 7, (i + 3) % 7});
        f.push_back({i, (i + 2) % 7, (i + 3) % 7});
    }
    return f;
}

/// Klein quartic as the {3,7} map of PSL(2,7): vertices are cosets of an
/// order-7 rotation, faces cosets of an order-3 rotation. Consistently oriented.
inline std::vector<Face> klein_quartic_faces()
{
    return {
        {0, 21, 1}, {1, 21, 2}, {2, 21, 3}, {3, 21, 4},
        {4, 21, 5}, {5, 21, 6}, {6, 21, 0}, {7, 2, 3},
        {7, 3, 17}, {7, 22, 11}, {8, 0, 15}, {8, 6, 0},
        {8, 22, 12}, {9, 3, 4}, {9, 4, 20}, {9, 22, 13},
        {10, 0, 1}, {10, 1, 18}, {10, 22, 7}, {11, 4, 5},
        {11, 5, 16}, {11, 22, 8}, {12, 1, 2}, {12, 2, 14},
        {12, 22, 9}, {13, 5, 6}, {13, 6, 19}, {13, 22, 10},
        {14, 2, 16}, {14, 6, 8}, {14, 8, 12}, {14, 23, 19},
        {15, 0, 17}, {15, 4, 11}, {15, 11, 8}, {15, 23, 20},
        {16, 2, 7}, {16, 5, 18}, {16, 7, 11}, {16, 23, 14},
        {17, 0, 10}, {17, 3, 19}, {17, 10, 7}, {17, 23, 15},
        {18, 1, 20}, {18, 5, 13}, {18, 13, 10}, {18, 23, 16},
        {19, 3, 9}, {19, 6, 14}, {19, 9, 13}, {19, 23, 17},
        {20, 1, 12}, {20, 4, 15}, {20, 12, 9}, {20, 23, 18},
    };
}

}  // namespace detail

/**
 * @brief Named fixture with a uniform edge weight
 * @throws DomainError for an unknown name or out-of-range weight
 */
inline WeightedTriangulation builtin(std::string_view name, double weight = 0.0)
{
    if (name == "octahedron") {
        return WeightedTriangulation::build(6, detail::octahedron_faces(), weight);
    }
    if (name == "icosahedron") {
        return WeightedTriangulation::build(12, detail::icosahedron_faces(), weight);
    }
    if (name == "moebius_torus_7") {
        return WeightedTriangulation::build(7, detail::moebius_torus_faces(), weight);
    }
    if (name == "klein_quartic_24") {
        return WeightedTriangulation::build(24, detail::klein_quartic_faces(), weight);
    }
    throw DomainError("unknown fixture '" + std::string(name) + "'");
}

}  // namespace alphaflow
