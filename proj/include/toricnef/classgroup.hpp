#pragma once

#include "toricnef/arith.hpp"
#include "toricnef/fan.hpp"
#include "toricnef/lp.hpp"

#include <optional>
#include <vector>

namespace toric {

// W = Q^R / image of M. Coordinates are the ray divisors outside a pivot set of
// n linearly independent rays (the first such rays in ray order).
class ClassSpace {
public:
    ClassSpace() = default;
    explicit ClassSpace(const std::vector<Point>& rays);

    std::size_t ray_count() const { return ray_count_; }
    std::size_t rank() const { return rank_; }
    std::size_t dim() const { return ray_count_ - rank_; }
    const std::vector<int>& pivots() const { return pivots_; }
    const std::vector<int>& coordinates() const { return coords_; }
    const std::vector<Int>& torsion() const { return torsion_; }

    RatVector project(const RatVector& a) const;
    // Representative vanishing on the pivot rays.
    RatVector lift(const RatVector& w) const;
    // Restricts a functional on Q^R that vanishes on M to W coordinates.
    RatVector functional(const RatVector& coeffs) const;
    // Class of the divisor of a single ray.
    RatVector ray_class(int ray) const;

private:
    std::size_t ray_count_ = 0;
    std::size_t rank_ = 0;
    std::vector<int> pivots_;
    std::vector<int> coords_;
    std::vector<int> coord_pos_;  // ray -> coordinate position or -1
    RatMatrix G_;                 // per coordinate ray: coefficients on pivots
    std::vector<Int> torsion_;
};

ClassSpace class_space(const Fan& fan);

struct DivisorClass {
    RatVector w;
    std::optional<RatVector> representative;
};

struct CurveFunctional {
    Cone wall;
    RatVector coeffs;  // one per ray; zero off the two adjacent cones

    Rat evaluate_rays(const RatVector& a) const { return dot(coeffs, a); }
    Rat evaluate(const ClassSpace& W, const RatVector& w) const { return dot(coeffs, W.lift(w)); }
    // Primitive integer version used for deduplication and sign tests.
    Point direction() const { return primitive(coeffs); }
};

// The relation on the rays of sigma and sigma', scaled so that the apex of sigma
// has coefficient mult(tau) / mult(sigma).
CurveFunctional wall_curve_class(const Fan& fan, const Wall& wall);
Rat anticanonical_degree(const CurveFunctional& c);
// Sum of coeff * ray; zero for a valid relation.
Point relation_residual(const Fan& fan, const CurveFunctional& c);

struct PolyCone {
    std::size_t dim = 0;
    RatMatrix inequalities;  // f . w >= 0
    bool has_generators = false;
    std::vector<Point> rays;
    std::vector<Point> lineality;

    bool contains(const RatVector& w) const;
    bool strictly_inside(const RatVector& w) const;
    // Dimension of the cone (requires generators).
    std::size_t cone_dim() const;
};

PolyCone make_cone(RatMatrix inequalities, std::size_t dim, bool with_generators);
// K intersected with {f = 0}; f must be nonnegative on K.
PolyCone cone_face(const PolyCone& K, const RatVector& f);
// Sum of extreme rays.
RatVector relative_interior_point(const PolyCone& K);

struct CplCone {
    PolyCone cone;
    std::vector<Wall> walls;
    std::vector<CurveFunctional> functionals;  // one per wall
    std::vector<int> inequality_of_wall;        // wall -> row of cone.inequalities
    bool full_dimensional = false;
    Rat margin;
    RatVector interior_point;  // f . w >= margin for every wall when full dimensional
};

CplCone cpl_cone(const Fan& fan, const ClassSpace& W, bool with_generators = false);

}  // namespace toric
