#pragma once

#include "toricnef/arith.hpp"
#include "toricnef/polytope.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace toric {

using Cone = std::vector<int>;  // sorted ray indices
using RaySet = std::uint64_t;   // bitmask of ray indices (fans with at most 64 rays)

RaySet to_mask(const Cone& c);
Cone to_cone(RaySet s);
inline int popcount(RaySet s) { return __builtin_popcountll(s); }

class Fan {
public:
    Fan() = default;
    Fan(std::vector<Point> rays, std::vector<Cone> max_cones);

    std::size_t rank() const { return rank_; }
    const std::vector<Point>& rays() const { return rays_; }
    const std::vector<Cone>& max_cones() const { return max_cones_; }
    int ray_index(const Point& p) const;

    bool is_simplicial() const;
    bool has_cone(const Cone& c) const;
    // All cones (faces of max cones) of the given dimension; simplicial fans only.
    std::vector<Cone> cones_of_dim(int d) const;
    std::vector<Cone> all_cones() const;
    // Rank of the ray matrix of a cone.
    int cone_dim(const Cone& c) const;

    bool operator==(const Fan& o) const { return rays_ == o.rays_ && max_cones_ == o.max_cones_; }

private:
    std::size_t rank_ = 0;
    std::vector<Point> rays_;
    std::vector<Cone> max_cones_;
};

LatticeMatrix ray_matrix(const Fan& fan, const Cone& c);
// Index of the sublattice spanned by the rays in its saturation.
Int multiplicity(const Fan& fan, const Cone& c);
bool is_gorenstein(const Fan& fan, const Cone& c);

// Cones over facets. If `order` is given the rays appear in that order.
Fan face_fan(const LatticePolytope& P, const std::vector<Point>* order = nullptr);
Fan stellar_subdivide(const Fan& fan, const Point& r);
// Moves rays into the given order (a permutation of the existing rays).
Fan reorder_rays(const Fan& fan, const std::vector<Point>& order);

struct ConeSingularity {
    Cone cone;
    int dim = 0;
    Int multiplicity;
    bool smooth = true;
    bool gorenstein = true;
    bool simplicial = true;
    std::vector<Int> quotient_type;  // canonical weights of 1/r(a,...), empty if unavailable
};

struct SingularityReport {
    std::vector<ConeSingularity> cones;
    std::vector<Cone> singular_cones(int dim) const;
    bool smooth_up_to_dim(int d) const;
};

SingularityReport classify_singularities(const Fan& fan);
// Canonical weights of the cyclic quotient 1/r(w): min over units k of sorted k*w mod r.
std::vector<Int> canonical_quotient_type(const Int& r, const std::vector<Int>& weights);
// Cyclic quotient weights of a simplicial cone, or empty if the quotient group is not cyclic.
std::vector<Int> cyclic_quotient_type(const Fan& fan, const Cone& c);

// Basis of the sublattice of M annihilating the cone.
LatticeMatrix cone_annihilator(const Fan& fan, const Cone& c);
Fan star_fan(const Fan& fan, const Cone& sigma);

// A unimodular A with A * u in rays(B) for every ray u of A, mapping max cones to max cones.
std::optional<LatticeMatrix> fans_unimodular_isomorphic(const Fan& a, const Fan& b);
// The ray bijection realised by A, as indices of b for each ray of a.
std::vector<int> ray_map(const Fan& a, const Fan& b, const LatticeMatrix& A);

struct Wall {
    Cone tau;
    int sigma = -1;        // index into max_cones
    int sigma_prime = -1;  // index into max_cones
    int y = -1;            // ray of sigma not in tau
    int z = -1;            // ray of sigma_prime not in tau
};

// Codimension-one cones with their two adjacent maximal cones. With
// allow_boundary, cones lying in a single maximal cone are skipped.
std::vector<Wall> walls(const Fan& fan, bool allow_boundary = false);

bool is_complete_simplicial(const Fan& fan, std::string* why = nullptr);
// Pairwise intersections of maximal cones are common faces (exact LP separation).
bool intersections_are_faces(const Fan& fan, std::string* why = nullptr);

// Whether the rational point lies in the cone; simplicial cones only.
bool cone_contains(const Fan& fan, const Cone& c, const RatVector& p);

Fan p2_fan();
Fan p4_fan();
Fan p1xp2_fan();
Fan p1xp3_fan();

}  // namespace toric
