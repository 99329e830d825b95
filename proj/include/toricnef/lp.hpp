#pragma once

#include "toricnef/arith.hpp"

namespace toric {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Rat value;
    RatVector x;
};

// maximize c.x subject to A x <= b, x free. Exact two-phase simplex.
LpResult lp_maximize(const RatVector& c, const RatMatrix& A, const RatVector& b);

// Whether {y >= 0 : B y = b} is non-empty (phase one of the simplex method).
bool standard_feasible(const RatMatrix& B, const RatVector& b);
// Whether some x has A x > 0 componentwise (Gordan alternative).
bool strictly_feasible(const std::vector<Point>& A, std::size_t dim);

// A point w with f.w >= 1 for every row f, if one exists.
std::optional<RatVector> strict_point(const RatMatrix& F, std::size_t dim);

// max t subject to F w >= t, t <= 1. Returns (t, w).
std::pair<Rat, RatVector> max_margin(const RatMatrix& F, std::size_t dim);

// Homogeneous extreme rays and lineality of {x : F x >= 0} (double description).
struct ConeGenerators {
    std::vector<Point> lineality;
    std::vector<Point> rays;
};
ConeGenerators extreme_rays(const std::vector<Point>& F, std::size_t dim);
ConeGenerators extreme_rays(const RatMatrix& F, std::size_t dim);

}  // namespace toric
