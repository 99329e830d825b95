#include "fixtures.hpp"

#include "toricnef/lattice_quotient.hpp"

#include <doctest.h>

using namespace toric;
using fixtures::P;

namespace {

std::vector<Point> table_vertices() {
    const auto& t = fixtures::labelled_rays();
    return {t.at("D0"), t.at("D1"), t.at("D2"), t.at("D3"), t.at("D4")};
}

// Barycentric coordinates of p in the triangle abc (which spans a 3-space of Z^4).
std::optional<RatVector> barycentric(const Point& p, const Point& a, const Point& b, const Point& c) {
    RatMatrix A;
    RatVector rhs;
    for (std::size_t j = 0; j < 4; ++j) {
        A.push_back({Rat(a[j]), Rat(b[j]), Rat(c[j])});
        rhs.emplace_back(p[j]);
    }
    A.push_back({1, 1, 1});
    rhs.emplace_back(1);
    return solve(A, rhs);
}

}  // namespace

TEST_SUITE("quotient") {
TEST_CASE("invariant lattice of the order-25 group") {
    auto act = DiagonalAction::from_projective(5, {P({0, 1, 2, 3, 4}), P({0, 1, 3, 1, 0})});
    auto L = invariant_sublattice(act, 4);
    CHECK(L.index == 25);
    CHECK(character_image_order(act, 4) == 25);
    for (const auto& b : fixtures::quotient_basis()) {
        CHECK(is_invariant(act, b));
        CHECK(L.contains(b));
    }
    CHECK(abs(determinant(LatticeMatrix(fixtures::quotient_basis()))) == 25);
    CHECK(!is_invariant(act, P({1, 0, 0, 0})));
}

TEST_CASE("full quintic group has index 125") {
    auto full = quintic_full_group();
    CHECK(invariant_sublattice(full, 4).index == 125);
    CHECK(character_image_order(full, 4) == 125);
}

TEST_CASE("trivial action") {
    auto act = DiagonalAction::from_projective(5, {P({0, 0, 0, 0, 0})});
    CHECK(invariant_sublattice(act, 4).index == 1);
}

TEST_CASE("rebased Newton polytope has the five listed vertices") {
    auto inst = quintic_quotient();
    auto delta = instance_delta(inst);
    CHECK(fixtures::as_set(delta.vertices()) == fixtures::as_set(fixtures::delta_vertices()));
    // independently: rebase the invariant vertices of the big simplex by hand
    LatticeMatrix B(fixtures::quotient_basis());
    std::vector<Point> rebased;
    const auto simplex = projective_newton_polytope(4);
    for (const auto& v : simplex.vertices()) rebased.push_back(rebase_point(v, B));
    auto hull = LatticePolytope::hull(rebased);
    CHECK(fixtures::as_set(hull.vertices()) == fixtures::as_set(fixtures::delta_vertices()));
    CHECK(fixtures::as_set(rebase_polytope(projective_newton_polytope(4), B).vertices()) ==
          fixtures::as_set(rebased));
}

TEST_CASE("rebasing round trip") {
    LatticeMatrix B{{2, 1}, {1, 1}};
    Point x = P({3, -7});
    CHECK(rebase_point(unbase_point(x, B), B) == x);
}
}

TEST_SUITE("polytope") {
TEST_CASE("dual of the rebased polytope matches the tabulated vertices") {
    LatticePolytope delta = LatticePolytope::hull(fixtures::delta_vertices());
    LatticePolytope dual = polar_dual(delta);
    CHECK(fixtures::as_set(dual.vertices()) == fixtures::as_set(table_vertices()));
    CHECK(is_reflexive(delta));
    CHECK(is_reflexive(dual));
    CHECK(polar_dual(dual) == delta);
    for (const auto& v : dual.vertices())
        for (const auto& m : delta.vertices()) CHECK(dot(v, m) >= -1);
}

TEST_CASE("census and carrier faces match the table cell for cell") {
    LatticePolytope dual = LatticePolytope::hull(table_vertices());
    auto cls = classify_lattice_points(dual);
    CHECK(cls.count_by_dim == std::vector<std::size_t>{5, 0, 20, 0, 1});
    CHECK(cls.points.size() == 26);
    const auto& t = fixtures::labelled_rays();
    const auto& faces = fixtures::table_faces();
    for (std::size_t i = 0; i < faces.size(); ++i) {
        const auto& f = faces[i];
        for (const char* pq : {"P", "Q"}) {
            std::string label = pq + std::to_string(i + 1);
            const Point& p = t.at(label);
            auto bc = barycentric(p, t.at(f[0]), t.at(f[1]), t.at(f[2]));
            REQUIRE(bc);
            for (const auto& x : *bc) CHECK(x > 0);
            Face c = dual.carrier(p);
            CHECK(c.dim == 2);
            std::set<Point> got;
            for (int v : c.vertices) got.insert(dual.vertices()[static_cast<std::size_t>(v)]);
            CHECK(got == std::set<Point>{t.at(f[0]), t.at(f[1]), t.at(f[2])});
        }
    }
    std::set<Point> listed;
    for (const auto& [k, v] : t) listed.insert(v);
    listed.insert(P({0, 0, 0, 0}));
    CHECK(fixtures::as_set(dual.lattice_points()) == listed);
}

TEST_CASE("face duality dimension law") {
    for (const auto& P0 : {LatticePolytope::hull(fixtures::delta_vertices()), projective_newton_polytope(4),
                           p1xp3_instance().newton.value()}) {
        auto Q = polar_dual(P0);
        for (const auto& F : P0.faces()) {
            if (F.dim < 0 || F.dim == static_cast<int>(P0.rank())) continue;
            Face G = dual_face(P0, Q, F);
            CHECK(F.dim + G.dim == static_cast<int>(P0.rank()) - 1);
            CHECK(dual_face(Q, P0, G) == F);
        }
    }
}

TEST_CASE("lattice points of the projective simplex") {
    auto S = projective_newton_polytope(4);
    CHECK(S.lattice_points().size() == 126);
    auto D = polar_dual(S);
    CHECK(D.lattice_points().size() == 6);
    for (const auto& e : S.faces_of_dim(1)) CHECK(S.edge_length(e) == 5);
}

TEST_CASE("edges of the quotient polytope have lattice length one") {
    auto delta = LatticePolytope::hull(fixtures::delta_vertices());
    auto edges = delta.faces_of_dim(1);
    CHECK(edges.size() == 10);
    for (const auto& e : edges) {
        const auto& a = delta.vertices()[static_cast<std::size_t>(e.vertices[0])];
        const auto& b = delta.vertices()[static_cast<std::size_t>(e.vertices[1])];
        Point d(4);
        for (std::size_t j = 0; j < 4; ++j) d[j] = b[j] - a[j];
        CHECK(content(d) == 1);
        CHECK(delta.edge_length(e) == 1);
    }
}

TEST_CASE("malformed polytopes are rejected") {
    CHECK_THROWS_AS(LatticePolytope::hull({P({0, 0}), P({1, 1})}), InputError);
    CHECK_THROWS_AS(polytope_from_json(json::parse(R"({"rank": 2, "vertices": [[0, 0], [1]]})")), InputError);
}
}
