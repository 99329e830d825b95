#include "fixtures.hpp"

#include <doctest.h>

using namespace toric;
using fixtures::P;

TEST_SUITE("hypersurface") {
TEST_CASE("quintic in P4") {
    auto big = projective_newton_polytope(4);
    auto small = polar_dual(big);
    Hypersurface Z(big, small);
    Fan f = face_fan(small);
    for (const auto& c : f.cones_of_dim(3)) {
        auto v = Z.stratum_meets(f, c);
        CHECK(v.meets);
        REQUIRE(v.intersection_count);
        CHECK(*v.intersection_count == 5);
    }
    for (const auto& c : f.cones_of_dim(4)) CHECK(!Z.stratum_meets(f, c).meets);
    for (const auto& c : f.cones_of_dim(1)) CHECK(Z.stratum_meets(f, c).meets);
}

TEST_CASE("singular curves and exceptional divisors of the quotient") {
    auto delta = LatticePolytope::hull(fixtures::delta_vertices());
    auto dual = polar_dual(delta);
    Hypersurface Z(delta, dual);
    const auto& t = fixtures::labelled_rays();
    for (const auto& face : fixtures::table_faces()) {
        // dual edge: vertices of delta pairing to -1 with the three corners
        std::vector<Point> edge;
        for (const auto& m : delta.vertices())
            if (std::all_of(face.begin(), face.end(), [&](const std::string& l) { return dot(m, t.at(l)) == -1; }))
                edge.push_back(m);
        REQUIRE(edge.size() == 2);
        Point d(4);
        for (std::size_t j = 0; j < 4; ++j) d[j] = edge[1][j] - edge[0][j];
        Int oracle = content(d);
        auto v = Z.stratum_meets({t.at(face[0]), t.at(face[1]), t.at(face[2])});
        REQUIRE(v.intersection_count);
        CHECK(*v.intersection_count == oracle);
        CHECK(oracle == 1);
    }
    std::size_t rays = 0;
    for (const auto& [k, v] : t) {
        if (k[0] == 'D') continue;
        ++rays;
        CHECK(Z.component_count_on_Z(v) == 1);
        CHECK(Z.stratum_meets({v}).meets);
    }
    CHECK(rays == 20);
}

TEST_CASE("strata interior to a facet miss Z") {
    auto delta = LatticePolytope::hull(fixtures::delta_vertices());
    Hypersurface Z(delta, polar_dual(delta));
    const auto& t = fixtures::labelled_rays();
    // P6 on D0D3D4 and P7 on D1D2D3 together only lie in the whole polytope
    CHECK(!Z.stratum_meets({t.at("P6"), t.at("P7")}).meets);
    // Q10 with P6 spans a cone interior to the facet D0D2D3D4
    auto v = Z.stratum_meets({t.at("Q10"), t.at("P6")});
    CHECK(!v.meets);
    CHECK(v.dual_face.dim == 0);
    CHECK(Z.stratum_meets({t.at("D2"), t.at("Q10")}).meets);
}

TEST_CASE("exceptional cones of a flop") {
    Fan a({P({1, 0, 0}), P({0, 1, 0}), P({0, 0, 1}), P({1, 1, -1})}, {{0, 1, 2}, {0, 1, 3}});
    Fan b({P({1, 0, 0}), P({0, 1, 0}), P({0, 0, 1}), P({1, 1, -1})}, {{0, 2, 3}, {1, 2, 3}});
    auto ex = exceptional_cones(a, b);
    std::set<std::vector<Point>> got(ex.begin(), ex.end());
    CHECK(got.count({P({0, 1, 0}), P({1, 0, 0})}) == 1);
    CHECK(got.count({P({0, 0, 1}), P({1, 1, -1})}) == 1);
    CHECK(got.size() == 6);
}
}
