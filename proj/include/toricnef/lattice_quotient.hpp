#pragma once

#include "toricnef/arith.hpp"
#include "toricnef/polytope.hpp"

namespace toric {

// Diagonal action of a finite abelian group of exponent dividing `order` on the
// torus of projective space; weights are taken in the affine chart z0 = 1.
struct DiagonalAction {
    Int order;
    std::vector<Point> generators;

    DiagonalAction(Int n, std::vector<Point> gens);
    // Builds the chart weights from projective weights (w0, ..., wk) by subtracting w0.
    static DiagonalAction from_projective(Int n, const std::vector<Point>& projective_weights);
    std::size_t rank() const { return rank_; }

private:
    std::size_t rank_ = 0;
};

struct Sublattice {
    std::size_t ambient_rank = 0;
    LatticeMatrix basis;  // rows
    Int index;

    bool contains(const Point& p) const;
};

Sublattice invariant_sublattice(const DiagonalAction& action, std::size_t ambient_rank);
// Elementary divisors of the lattice spanned by the character images and n Z^g.
std::vector<Int> character_divisors(const DiagonalAction& action, std::size_t ambient_rank);
// Order of the image of Z^k -> (Z/n)^g; equals the index of the invariant sublattice.
Int character_image_order(const DiagonalAction& action, std::size_t ambient_rank);
bool is_invariant(const DiagonalAction& action, const Point& m);

// Expresses every vertex in the coordinates of `basis` (rows of B).
LatticePolytope rebase_polytope(const LatticePolytope& P, const LatticeMatrix& B);
Point rebase_point(const Point& v, const LatticeMatrix& B);
Point unbase_point(const Point& x, const LatticeMatrix& B);

}  // namespace toric
