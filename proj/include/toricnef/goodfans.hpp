#pragma once

#include "toricnef/circuits.hpp"
#include "toricnef/classgroup.hpp"
#include "toricnef/fan.hpp"
#include "toricnef/hypersurface.hpp"
#include "toricnef/polytope.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace toric {

// A triangulated region stored as sorted bitmasks of its maximal cones.
using Tri = std::vector<RaySet>;

struct RayTable {
    std::vector<Point> points;
    std::vector<std::string> labels;
};

struct SparseFunctional {
    std::vector<std::pair<int, Rat>> terms;
    Rat evaluate(const RatVector& a) const;
};

// Shared geometry for fans whose rays are boundary points of a simplicial reflexive polytope.
class GoodFanContext {
public:
    GoodFanContext(LatticePolytope delta, LatticePolytope delta_star, RayTable table);

    std::size_t rank() const { return rank_; }
    const std::vector<Point>& rays() const { return table_.points; }
    const std::vector<std::string>& labels() const { return table_.labels; }
    int label_index(const std::string& label) const;
    const Hypersurface& hypersurface() const { return *Z_; }
    const ClassSpace& class_space() const { return W_; }
    const LatticePolytope& delta() const { return delta_; }
    const LatticePolytope& delta_star() const { return delta_star_; }

    const std::vector<RaySet>& facet_masks() const { return facet_masks_; }
    const std::vector<RaySet>& facet_vertices() const { return facet_vertices_; }
    // Rays inserted by stellar subdivision (carrier dimension between 1 and rank - 2).
    const std::vector<int>& insert_points() const { return insert_points_; }
    // Facet index containing every ray of the mask, or -1.
    int facet_of(RaySet s) const;

    // Face fan of delta_star on the full ray table.
    Tri base() const;
    Fan to_fan(const Tri& t) const;
    Tri from_fan(const Fan& f) const;

    Tri stellar(const Tri& t, int r) const;
    // Barycentric coordinates of ray r in the simplicial full-dimensional cone s.
    RatVector coords(RaySet s, int r) const;
    // Wall relation of the cones tau+y and tau+z, normalised as wall_curve_class.
    const SparseFunctional& wall(RaySet tau, int y, int z) const;
    int dual_face_dim(RaySet cone) const;

private:
    std::size_t rank_ = 0;
    LatticePolytope delta_;
    LatticePolytope delta_star_;
    RayTable table_;
    std::unique_ptr<Hypersurface> Z_;
    ClassSpace W_;
    std::vector<RaySet> facet_masks_;
    std::vector<RaySet> facet_vertices_;
    std::vector<int> insert_points_;

    mutable std::mutex mutex_;
    mutable std::map<std::pair<RaySet, int>, RatVector> coords_cache_;
    mutable std::map<std::tuple<RaySet, int, int>, SparseFunctional> wall_cache_;
    mutable std::unordered_map<RaySet, int> dual_cache_;
};

struct InternalWall {
    RaySet tau;
    int y;
    int z;
};

std::vector<InternalWall> internal_walls(const Tri& t, std::size_t rank);
std::vector<RaySet> all_faces(const Tri& t);

struct LocalFlip {
    Circuit circuit;
    Tri result;
    bool flop = false;
    bool trivial = false;
    std::vector<RaySet> exceptional;
    std::optional<RaySet> offending;
};

// Supported flips of t along the given circuit in either orientation.
std::vector<LocalFlip> local_flips(const GoodFanContext& ctx, const Tri& t, const std::vector<RaySet>& faces,
                                   const Circuit& c);
// Applies the flip given by an oriented circuit, if supported.
std::optional<LocalFlip> apply_local_flip(const GoodFanContext& ctx, const Tri& t, const Circuit& oriented);
bool locally_regular(const GoodFanContext& ctx, const Tri& t, RaySet vertices);

struct FlipEdge {
    int from = -1;
    int to = -1;
    Circuit circuit;  // oriented as applied
};

struct FacetFactor {
    int facet = -1;
    RaySet mask = 0;
    RaySet vertices = 0;
    std::vector<int> insert_points;
    std::vector<Tri> nodes;
    std::vector<bool> seed;
    std::map<Tri, int> index;
    std::vector<FlipEdge> edges;
    std::size_t seed_count = 0;
    std::size_t seed_states = 0;
    std::size_t circuit_count = 0;
    std::map<std::string, std::size_t> flip_stats;
};

struct GoodFanConfig {
    std::size_t budget = 1000000;
    unsigned jobs = 1;
};

struct GoodFanGraph {
    bool factorized = false;
    std::vector<FacetFactor> factors;
    // Flat mode: one choice of node per factor for each materialised good fan.
    std::vector<std::vector<int>> flat_nodes;
    std::size_t flat_nonprojective = 0;
    std::size_t flat_incompatible = 0;
    std::size_t product_count() const;  // saturates at SIZE_MAX
};

// Seeds and trivial-flip closure of one facet.
FacetFactor explore_facet(const GoodFanContext& ctx, int facet, std::size_t budget);
GoodFanGraph build_good_fan_graph(const GoodFanContext& ctx, const GoodFanConfig& cfg);

Tri assemble(const GoodFanGraph& g, const std::vector<int>& choice);
// Facet nodes glue to a fan only if they cut the same cones out of every shared face.
bool compatible(const GoodFanGraph& g, const std::vector<int>& choice);
// Every node of every factor cuts the same cones out of each shared face, so all choices are compatible.
bool shared_faces_agree(const GoodFanGraph& g);
bool connected(const FacetFactor& F);
std::optional<std::vector<int>> decompose(const GoodFanContext& ctx, const GoodFanGraph& g, const Tri& t);

struct Projectivity {
    bool projective = false;
    Rat margin;
    RatVector interior_point;  // in W coordinates
};
Projectivity check_projective(const GoodFanContext& ctx, const Tri& t);

// Positive weights on walls whose curve classes sum to zero, so no class is positive on all of them.
// Exists exactly when the fan is not projective.
struct WallWeight {
    RaySet tau = 0;
    Rat weight;
};
std::optional<std::vector<WallWeight>> nonprojectivity_certificate(const GoodFanContext& ctx, const Tri& t);

// Re-verifies every edge of the graph: flop, supported, exceptional strata with vertex dual faces.
struct EdgeAudit {
    bool ok = true;
    std::size_t edges = 0;
    std::string failure;
    std::optional<std::vector<Point>> offending_stratum;
};
EdgeAudit audit_edges(const GoodFanContext& ctx, const GoodFanGraph& g);

struct SeedSearch {
    bool found = false;
    std::vector<int> order;  // insertion order of the inserted rays
    Tri fan;
    std::size_t states = 0;
    std::string reason;
};

// A stellar insertion order whose fan contains every required maximal cone.
SeedSearch find_seed_containing(const GoodFanContext& ctx, const std::vector<Cone>& required, std::size_t budget);
Tri replay_order(const GoodFanContext& ctx, const std::vector<int>& order);

struct Membership {
    bool member = false;
    std::vector<std::vector<int>> carriers;  // per factor: nodes whose internal walls accept w
    std::optional<std::vector<int>> witness;  // a good fan whose cpl contains w
    bool undecided = false;                    // witness search stopped at its cap
    std::string reason;
};

class NZero {
public:
    NZero(const GoodFanContext& ctx, const GoodFanGraph& g);
    Membership contains(const RatVector& w, const std::vector<int>* hint = nullptr,
                        std::size_t max_steps = std::size_t(1) << 20) const;
    std::size_t cone_count() const;

private:
    const GoodFanContext& ctx_;
    const GoodFanGraph& g_;
    std::vector<std::vector<SparseFunctional>> functionals_;  // per factor, distinct internal walls
    std::vector<std::vector<std::vector<int>>> node_walls_;   // per factor, per node
    std::vector<std::vector<std::vector<int>>> shared_;       // per factor, per node, per other factor
    bool cross_convex(std::size_t f, int nf, std::size_t h, int nh, const RatVector& a) const;
};

bool boundary_convex(const GoodFanContext& ctx, const Tri& t, const RatVector& a);

}  // namespace toric
