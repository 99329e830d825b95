#include "toricnef/instances.hpp"

#include <algorithm>

namespace toric {

LatticePolytope projective_newton_polytope(std::size_t k) {
    std::vector<Point> v;
    v.push_back(Point(k, Int(-1)));
    for (std::size_t i = 0; i < k; ++i) {
        Point p(k, Int(-1));
        p[i] = Int(static_cast<long>(k));
        v.push_back(p);
    }
    return LatticePolytope::hull(v);
}

namespace {

Point pt(std::initializer_list<long> xs) {
    Point p;
    for (long x : xs) p.push_back(Int(x));
    return p;
}

}  // namespace

Instance quintic_quotient() {
    Instance inst;
    inst.name = "quintic-quotient";
    inst.action = DiagonalAction::from_projective(5, {pt({0, 1, 2, 3, 4}), pt({0, 1, 3, 1, 0})});
    inst.basis = LatticeMatrix{{4, -1, -1, -1}, {1, -1, 2, 0}, {-1, -1, 4, -1}, {-1, -1, -1, 4}};
    inst.expected_index = 25;
    inst.expected_delta_vertices = {pt({1, 0, 0, 0}), pt({-3, 5, -4, -2}), pt({0, 0, 1, 0}), pt({0, 0, 0, 1}),
                                    pt({2, -5, 3, 1})};
    auto add = [&](const std::string& l, Point p) {
        inst.rays.labels.push_back(l);
        inst.rays.points.push_back(std::move(p));
    };
    add("D0", pt({-1, -2, -1, -1}));
    add("D1", pt({4, 1, -1, -1}));
    add("D2", pt({-1, -1, -1, -1}));
    add("D3", pt({-1, 2, 4, -1}));
    add("D4", pt({-1, 0, -1, 4}));
    struct Row {
        Point p, q;
        std::vector<std::string> face;
    };
    const std::vector<Row> table = {
        {pt({2, 0, -1, -1}), pt({0, -1, -1, -1}), {"D0", "D1", "D2"}},
        {pt({0, 1, 2, -1}), pt({1, 0, 0, -1}), {"D0", "D1", "D3"}},
        {pt({0, -1, -1, 0}), pt({1, 0, -1, 1}), {"D0", "D1", "D4"}},
        {pt({-1, -1, 0, -1}), pt({-1, 0, 1, -1}), {"D0", "D2", "D3"}},
        {pt({-1, -1, -1, 0}), pt({-1, -1, -1, 1}), {"D0", "D2", "D4"}},
        {pt({-1, 0, 0, 2}), pt({-1, 0, 1, 0}), {"D0", "D3", "D4"}},
        {pt({0, 0, 0, -1}), pt({1, 1, 1, -1}), {"D1", "D2", "D3"}},
        {pt({0, 0, -1, 2}), pt({1, 0, -1, 0}), {"D1", "D2", "D4"}},
        {pt({2, 1, 0, 0}), pt({0, 1, 1, 1}), {"D1", "D3", "D4"}},
        {pt({-1, 1, 2, 0}), pt({-1, 0, 0, 1}), {"D2", "D3", "D4"}},
    };
    for (std::size_t i = 0; i < table.size(); ++i) {
        std::string k = std::to_string(i + 1);
        add("P" + k, table[i].p);
        add("Q" + k, table[i].q);
        inst.carriers["P" + k] = table[i].face;
        inst.carriers["Q" + k] = table[i].face;
    }
    inst.required_cones = {{"D2", "P10", "Q10", "P6"}, {"D2", "D4", "Q10", "P6"}, {"D4", "P10", "Q10", "P6"},
                           {"D2", "P10", "Q10", "P7"}, {"D2", "D4", "Q10", "P7"}, {"D4", "P10", "Q10", "P7"}};
    inst.circuits = {{{"D2", "D4", "P10", "Q10"}, {Int(1), Int(1), Int(1), Int(-3)}},
                     {{"P6", "P7", "Q10"}, {Int(1), Int(1), Int(-1)}}};
    inst.contracted = "Q10";
    inst.expected_singular_3cones = 10;
    inst.expected_singular_type = std::vector<Int>{Int(5), Int(1), Int(1), Int(3)};
    inst.expected_census = std::vector<std::size_t>{5, 0, 20, 0, 1};
    return inst;
}

Instance p4_instance() {
    Instance inst;
    inst.name = "p4";
    inst.newton = projective_newton_polytope(4);
    inst.expected_delta_vertices = inst.newton->vertices();
    return inst;
}

Instance p1xp3_instance() {
    Instance inst;
    inst.name = "p1xp3";
    // product of the P^1 segment [-1, 1] and the P^3 simplex
    std::vector<Point> v;
    for (long a : {-1L, 1L}) {
        v.push_back(pt({a, -1, -1, -1}));
        v.push_back(pt({a, 3, -1, -1}));
        v.push_back(pt({a, -1, 3, -1}));
        v.push_back(pt({a, -1, -1, 3}));
    }
    inst.newton = LatticePolytope::hull(v);
    inst.expected_delta_vertices = inst.newton->vertices();
    return inst;
}

std::vector<std::string> instance_names() { return {"quintic-quotient", "p4", "p1xp3"}; }

Instance instance_by_name(const std::string& name) {
    if (name == "quintic-quotient") return quintic_quotient();
    if (name == "p4") return p4_instance();
    if (name == "p1xp3") return p1xp3_instance();
    throw InputError("unknown instance " + name);
}

DiagonalAction quintic_full_group() {
    return DiagonalAction::from_projective(
        5, {pt({1, 4, 0, 0, 0}), pt({1, 0, 4, 0, 0}), pt({1, 0, 0, 4, 0}), pt({1, 0, 0, 0, 4})});
}

LatticePolytope instance_delta(const Instance& inst) {
    if (inst.newton) return *inst.newton;
    if (!inst.action) throw InputError("instance has neither a polytope nor an action");
    LatticePolytope tilde = projective_newton_polytope(inst.action->rank());
    LatticeMatrix B = inst.basis ? *inst.basis : invariant_sublattice(*inst.action, inst.action->rank()).basis;
    Sublattice L = invariant_sublattice(*inst.action, inst.action->rank());
    for (const auto& row : B.to_rows())
        if (!L.contains(row)) throw InputError("basis vector " + to_string(row) + " is not invariant");
    if (abs(determinant(B)) != L.index) throw InputError("basis does not span the invariant lattice");
    std::vector<Point> pts;
    for (const auto& p : tilde.lattice_points())
        if (L.contains(p)) pts.push_back(rebase_point(p, B));
    return LatticePolytope::hull(pts);
}

RayTable generic_ray_table(const LatticePolytope& delta_star) {
    RayTable t;
    std::size_t v = 0, x = 0;
    for (const auto& p : delta_star.vertices()) {
        t.points.push_back(p);
        t.labels.push_back("V" + std::to_string(v++));
    }
    for (const auto& p : delta_star.lattice_points()) {
        if (!delta_star.on_boundary(p)) continue;
        if (std::find(t.points.begin(), t.points.end(), p) != t.points.end()) continue;
        t.points.push_back(p);
        t.labels.push_back("X" + std::to_string(x++));
    }
    return t;
}

}  // namespace toric
