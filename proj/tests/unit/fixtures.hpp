#pragma once

#include "toricnef/verifier.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace fixtures {

using toric::Point;

inline Point P(std::initializer_list<long> v) {
    Point p;
    for (long x : v) p.emplace_back(x);
    return p;
}

// Vertices of the dual polytope and the two interior points of each 2-face, as tabulated.
inline const std::map<std::string, Point>& labelled_rays() {
    static const std::map<std::string, Point> t = {
        {"D0", P({-1, -2, -1, -1})}, {"D1", P({4, 1, -1, -1})}, {"D2", P({-1, -1, -1, -1})},
        {"D3", P({-1, 2, 4, -1})},   {"D4", P({-1, 0, -1, 4})},
        {"P1", P({2, 0, -1, -1})},   {"Q1", P({0, -1, -1, -1})},
        {"P2", P({0, 1, 2, -1})},    {"Q2", P({1, 0, 0, -1})},
        {"P3", P({0, -1, -1, 0})},   {"Q3", P({1, 0, -1, 1})},
        {"P4", P({-1, -1, 0, -1})},  {"Q4", P({-1, 0, 1, -1})},
        {"P5", P({-1, -1, -1, 0})},  {"Q5", P({-1, -1, -1, 1})},
        {"P6", P({-1, 0, 0, 2})},    {"Q6", P({-1, 0, 1, 0})},
        {"P7", P({0, 0, 0, -1})},    {"Q7", P({1, 1, 1, -1})},
        {"P8", P({0, 0, -1, 2})},    {"Q8", P({1, 0, -1, 0})},
        {"P9", P({2, 1, 0, 0})},     {"Q9", P({0, 1, 1, 1})},
        {"P10", P({-1, 1, 2, 0})},   {"Q10", P({-1, 0, 0, 1})},
    };
    return t;
}

inline const std::vector<std::vector<std::string>>& table_faces() {
    static const std::vector<std::vector<std::string>> f = {
        {"D0", "D1", "D2"}, {"D0", "D1", "D3"}, {"D0", "D1", "D4"}, {"D0", "D2", "D3"}, {"D0", "D2", "D4"},
        {"D0", "D3", "D4"}, {"D1", "D2", "D3"}, {"D1", "D2", "D4"}, {"D1", "D3", "D4"}, {"D2", "D3", "D4"},
    };
    return f;
}

inline std::vector<Point> delta_vertices() {
    return {P({1, 0, 0, 0}), P({-3, 5, -4, -2}), P({0, 0, 1, 0}), P({0, 0, 0, 1}), P({2, -5, 3, 1})};
}

inline std::vector<Point> quotient_basis() {
    return {P({4, -1, -1, -1}), P({1, -1, 2, 0}), P({-1, -1, 4, -1}), P({-1, -1, -1, 4})};
}

inline std::vector<std::vector<std::string>> six_tetrahedra() {
    return {{"D2", "P10", "Q10", "P6"}, {"D2", "D4", "Q10", "P6"}, {"D4", "P10", "Q10", "P6"},
            {"D2", "P10", "Q10", "P7"}, {"D2", "D4", "Q10", "P7"}, {"D4", "P10", "Q10", "P7"}};
}

template <class T>
std::set<T> as_set(const std::vector<T>& v) {
    return {v.begin(), v.end()};
}

// Big P^4 simplex as the dual, with two points of one 2-face forming a convex
// trapezoid with two vertices; flopping its diagonal changes strata that meet Z.
inline toric::Instance trapezoid_instance() {
    toric::Instance inst;
    inst.name = "trapezoid";
    auto big = toric::projective_newton_polytope(4);
    inst.newton = toric::polar_dual(big);
    const auto& V = big.vertices();
    auto comb = [&](long a, long b, long c) {
        Point p(4);
        for (std::size_t j = 0; j < 4; ++j) p[j] = (a * V[0][j] + b * V[1][j] + c * V[2][j]) / 5;
        return p;
    };
    inst.rays.points = {V[0], V[1], V[2], V[3], V[4], comb(3, 1, 1), comb(1, 3, 1)};
    inst.rays.labels = {"A", "B", "C", "D", "E", "X", "Y"};
    return inst;
}

}  // namespace fixtures
