#include "fixtures.hpp"

#include <doctest.h>

using namespace toric;
using fixtures::P;

namespace {

// Blow-up of P2 at a torus fixed point.
Fan blown_up_p2() {
    return Fan({P({1, 0}), P({0, 1}), P({-1, -1}), P({1, 1})}, {{0, 3}, {1, 3}, {1, 2}, {0, 2}});
}

// Two tetrahedra over the square e1, e2 | e3, e1+e2-e3.
Fan flop_side() {
    return Fan({P({1, 0, 0}), P({0, 1, 0}), P({0, 0, 1}), P({1, 1, -1})}, {{0, 1, 2}, {0, 1, 3}});
}

std::set<Cone> cones_of(const Fan& f) {
    std::set<Cone> s;
    for (const auto& c : f.max_cones()) {
        std::vector<Point> g;
        Cone k;
        for (int i : c) k.push_back(i);
        s.insert(k);
    }
    return s;
}

std::set<std::vector<Point>> geometric(const Fan& f) {
    std::set<std::vector<Point>> s;
    for (const auto& c : f.max_cones()) {
        std::vector<Point> g;
        for (int i : c) g.push_back(f.rays()[static_cast<std::size_t>(i)]);
        std::sort(g.begin(), g.end());
        s.insert(g);
    }
    return s;
}

}  // namespace

TEST_SUITE("circuits") {
TEST_CASE("the two anchor relations") {
    const auto& t = fixtures::labelled_rays();
    std::vector<Point> rays = {t.at("D2"), t.at("D4"), t.at("P10"), t.at("Q10"), t.at("P6"), t.at("P7")};
    auto s1 = circuit_of(rays, {0, 1, 2, 3});
    auto s2 = circuit_of(rays, {3, 4, 5});
    REQUIRE(s1);
    REQUIRE(s2);
    auto fix = [](Circuit c, int q) { return c.coeff(q) < 0 ? c : c.reversed(); };
    CHECK(fix(*s1, 3).coeffs == std::vector<Int>{1, 1, 1, -3});
    CHECK(fix(*s2, 3).coeffs == std::vector<Int>{-1, 1, 1});
    // direct check of the relations
    for (std::size_t j = 0; j < 4; ++j) {
        CHECK(rays[0][j] + rays[1][j] + rays[2][j] - 3 * rays[3][j] == 0);
        CHECK(rays[4][j] + rays[5][j] - rays[3][j] == 0);
    }
    CHECK(!circuit_of(rays, {0, 1, 2}));
    CHECK(!circuit_of(rays, {0, 1, 2, 3, 4}));
}

TEST_CASE("canonical orientation") {
    Circuit c{{0, 1, 2}, {1, 1, -1}};
    CHECK(canonical_orientation(c) == c);
    CHECK(canonical_orientation(c.reversed()) == c);
    CHECK(c.plus() == std::vector<int>{0, 1});
    CHECK(c.minus() == std::vector<int>{2});
}

TEST_CASE("blow-down of the exceptional ray") {
    Fan f = blown_up_p2();
    auto cs = find_circuits(f, 3);
    Circuit S{{0, 1, 3}, {1, 1, -1}};
    CHECK(std::find(cs.begin(), cs.end(), canonical_orientation(S)) != cs.end());
    auto sup = is_supported(S, f);
    REQUIRE(sup.supported);
    CHECK(sup.plus_cones.size() == 2);
    auto r = flip(f, S);
    CHECK(r.kind == FlipKind::DivisorialContraction);
    CHECK(r.removed_ray == 3);
    CHECK(geometric(r.fan) == geometric(p2_fan()));
    CHECK(!is_supported(S.reversed(), f).supported);
    // pulled back classes are trivial on the contracted curve
    auto W = class_space(f);
    auto Wp = class_space(r.fan);
    auto pb = pullback_classes(f, r, S, W, Wp);
    RatVector coeffs(4, Rat(0));
    for (std::size_t k = 0; k < S.rays.size(); ++k) coeffs[static_cast<std::size_t>(S.rays[k])] = Rat(S.coeffs[k]);
    for (std::size_t i = 0; i < Wp.dim(); ++i) {
        RatVector e(Wp.dim(), Rat(0));
        e[i] = 1;
        CHECK(dot(coeffs, W.lift(pb.apply(e))) == 0);
    }
}

TEST_CASE("a flop and its inverse") {
    Fan f = flop_side();
    Circuit S{{0, 1, 2, 3}, {-1, -1, 1, 1}};
    auto sup = is_supported(S, f);
    REQUIRE(sup.supported);
    auto r = flip(f, S);
    CHECK(r.kind == FlipKind::GeneralizedFlop);
    CHECK(cones_of(r.fan) == std::set<Cone>{{0, 2, 3}, {1, 2, 3}});
    auto back = flip(r.fan, S.reversed());
    CHECK(geometric(back.fan) == geometric(f));
    CHECK(!is_supported(S.reversed(), f).supported);
}

TEST_CASE("circuits of P2") {
    auto cs = find_circuits(p2_fan(), 3);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].coeffs == std::vector<Int>{1, 1, 1});
}
}
