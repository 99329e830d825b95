#include "toricnef/hypersurface.hpp"

#include <algorithm>
#include <set>

namespace toric {

Hypersurface::Hypersurface(LatticePolytope delta, LatticePolytope delta_star)
    : delta_(std::move(delta)), delta_star_(std::move(delta_star)) {}

StratumVerdict Hypersurface::stratum_meets(const std::vector<Point>& generators) const {
    std::vector<Point> key = generators;
    std::sort(key.begin(), key.end());
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    for (const auto& g : key)
        if (!delta_star_.on_boundary(g)) throw Error("generator " + to_string(g) + " is not on the boundary");
    StratumVerdict v;
    v.generators = key;
    v.dual_face = dual_face_of_points(delta_, key);
    v.meets = v.dual_face.dim >= 1;
    if (v.dual_face.dim == 1) v.intersection_count = delta_.edge_length(v.dual_face);
    std::lock_guard<std::mutex> lock(mutex_);
    cache_.emplace(key, v);
    return v;
}

StratumVerdict Hypersurface::stratum_meets(const Fan& fan, const Cone& c) const {
    std::vector<Point> gens;
    for (int i : c) gens.push_back(fan.rays()[static_cast<std::size_t>(i)]);
    return stratum_meets(gens);
}

Int Hypersurface::component_count_on_Z(const Point& ray) const {
    if (!delta_star_.on_boundary(ray)) throw Error("point is not on the boundary");
    Face carrier = delta_star_.carrier(ray);
    if (carrier.dim != 2) throw Error("carrier of " + to_string(ray) + " is not two-dimensional");
    Face edge = dual_face(delta_star_, delta_, carrier);
    return delta_.edge_length(edge);
}

std::vector<std::vector<Point>> exceptional_cones(const Fan& before, const Fan& after) {
    auto faces = [](const Fan& f) {
        std::set<std::vector<Point>> out;
        for (const auto& c : f.all_cones()) {
            std::vector<Point> g;
            for (int i : c) g.push_back(f.rays()[static_cast<std::size_t>(i)]);
            std::sort(g.begin(), g.end());
            out.insert(g);
        }
        return out;
    };
    auto a = faces(before), b = faces(after);
    std::vector<std::vector<Point>> out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

TrivialFlipCheck is_trivial_flip(const Fan& fan, const Circuit& S, const Hypersurface& Z) {
    Support sup = is_supported(S, fan);
    if (!sup.supported) throw Error("circuit is not supported: " + sup.reason);
    TrivialFlipCheck out;
    out.flop = S.plus().size() >= 2 && S.minus().size() >= 2;
    FlipResult r = flip(fan, S);
    bool all_miss = true;
    for (const auto& g : exceptional_cones(fan, r.fan)) {
        auto v = Z.stratum_meets(g);
        if (v.meets && all_miss) {
            all_miss = false;
            out.offending = g;
        }
        out.evidence.push_back(std::move(v));
    }
    out.trivial = out.flop && all_miss;
    return out;
}

}  // namespace toric
