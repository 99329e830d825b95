#pragma once

#include "toricnef/arith.hpp"
#include "toricnef/goodfans.hpp"
#include "toricnef/lattice_quotient.hpp"
#include "toricnef/polytope.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace toric {

struct LabelledCircuit {
    std::vector<std::string> labels;
    std::vector<Int> coeffs;
};

struct Instance {
    std::string name;
    // Either a quotient of P^n by a diagonal action (with an optional chosen basis
    // of the invariant lattice) or an explicit Newton polytope.
    std::optional<DiagonalAction> action;
    std::optional<LatticeMatrix> basis;
    std::optional<LatticePolytope> newton;
    Int expected_index = 1;
    std::vector<Point> expected_delta_vertices;
    RayTable rays;                                   // labelled boundary points of the dual
    std::map<std::string, std::vector<std::string>> carriers;  // non-vertex ray -> vertex labels of its face
    std::vector<std::vector<std::string>> required_cones;
    std::vector<LabelledCircuit> circuits;
    std::string contracted;  // label of the ray contracted by both circuits
    std::optional<std::size_t> expected_singular_3cones;
    std::optional<std::vector<Int>> expected_singular_type;  // r followed by weights
    std::optional<std::vector<std::size_t>> expected_census;
};

// Simplex {sum m_i <= 1, m_i >= -1} of P^k.
LatticePolytope projective_newton_polytope(std::size_t k);

Instance quintic_quotient();
Instance p4_instance();
Instance p1xp3_instance();
Instance instance_by_name(const std::string& name);
std::vector<std::string> instance_names();

// Order-125 group D of all diagonal fifth-root actions with trivial product.
DiagonalAction quintic_full_group();

// Newton polytope of the instance (rebased when a basis is given).
LatticePolytope instance_delta(const Instance& inst);
// Fills in generic labels (V0.., X0..) for every nonzero lattice point of the dual.
RayTable generic_ray_table(const LatticePolytope& delta_star);

}  // namespace toric
