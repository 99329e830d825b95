#pragma once

#include "toricnef/circuits.hpp"
#include "toricnef/fan.hpp"
#include "toricnef/polytope.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <vector>

namespace toric {

struct StratumVerdict {
    std::vector<Point> generators;
    Face dual_face;  // face of the Newton polytope
    bool meets = false;
    std::optional<Int> intersection_count;  // when the dual face is an edge
};

// Generic anticanonical hypersurface with Newton polytope `delta`; rays live on
// the boundary of `delta_star`.
class Hypersurface {
public:
    Hypersurface(LatticePolytope delta, LatticePolytope delta_star);

    const LatticePolytope& delta() const { return delta_; }
    const LatticePolytope& delta_star() const { return delta_star_; }

    StratumVerdict stratum_meets(const std::vector<Point>& generators) const;
    StratumVerdict stratum_meets(const Fan& fan, const Cone& c) const;
    // 1 + interior lattice points of the dual edge of the carrier 2-face.
    Int component_count_on_Z(const Point& ray) const;

private:
    LatticePolytope delta_;
    LatticePolytope delta_star_;
    mutable std::mutex mutex_;
    mutable std::map<std::vector<Point>, StratumVerdict> cache_;
};

struct TrivialFlipCheck {
    bool trivial = false;
    bool flop = false;
    std::vector<StratumVerdict> evidence;  // verdicts of all exceptional cones
    std::optional<std::vector<Point>> offending;
};

// Faces present in exactly one of the two fans, as generator lists.
std::vector<std::vector<Point>> exceptional_cones(const Fan& before, const Fan& after);
TrivialFlipCheck is_trivial_flip(const Fan& fan, const Circuit& S, const Hypersurface& Z);

}  // namespace toric
