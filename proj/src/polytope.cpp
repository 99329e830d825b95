#include "toricnef/polytope.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace toric {

int affine_dimension(const std::vector<Point>& pts) {
    if (pts.empty()) return -1;
    RatMatrix diffs;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        RatVector d(pts[0].size());
        for (std::size_t j = 0; j < d.size(); ++j) d[j] = Rat(pts[i][j] - pts[0][j]);
        diffs.push_back(std::move(d));
    }
    return static_cast<int>(rank(std::move(diffs)));
}

namespace {

void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    if (k > n) return;
    for (;;) {
        f(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

LatticePolytope LatticePolytope::hull(const std::vector<Point>& input) {
    if (input.empty()) throw InputError("convex hull of an empty point set");
    const std::size_t d = input[0].size();
    for (const auto& p : input)
        if (p.size() != d) throw InputError("points of mixed dimension");
    std::vector<Point> pts = input;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const int adim = affine_dimension(pts);
    if (adim != static_cast<int>(d))
        throw InputError("points are not full-dimensional: affine hull has rank " + std::to_string(adim) +
                         " in dimension " + std::to_string(d));

    std::map<Point, Int> normals;  // normal -> value h with <n,x> >= h
    for_each_subset(pts.size(), d, [&](const std::vector<std::size_t>& idx) {
        RatMatrix diffs;
        for (std::size_t i = 1; i < d; ++i) {
            RatVector v(d);
            for (std::size_t j = 0; j < d; ++j) v[j] = Rat(pts[idx[i]][j] - pts[idx[0]][j]);
            diffs.push_back(std::move(v));
        }
        auto ns = nullspace(diffs, d);
        if (ns.size() != 1) return;
        Point n = primitive(ns[0]);
        Int h = dot(n, pts[idx[0]]);
        bool above = false, below = false;
        for (const auto& p : pts) {
            Int v = dot(n, p);
            if (v > h) above = true;
            if (v < h) below = true;
            if (above && below) return;
        }
        if (below) {
            for (auto& x : n) x = -x;
            h = -h;
        }
        normals.emplace(n, h);
    });

    LatticePolytope P;
    P.rank_ = d;
    for (const auto& p : pts) {
        RatMatrix tight;
        for (const auto& [n, h] : normals)
            if (dot(n, p) == h) tight.push_back(to_rat(n));
        if (toric::rank(std::move(tight)) == d) P.vertices_.push_back(p);
    }
    for (const auto& [n, h] : normals) P.facets_.push_back({n, Int(-h)});
    for (const auto& f : P.facets_) {
        std::vector<int> vs;
        for (std::size_t i = 0; i < P.vertices_.size(); ++i)
            if (dot(f.normal, P.vertices_[i]) == -f.offset) vs.push_back(static_cast<int>(i));
        P.facet_vertices_.push_back(vs);
    }

    std::set<std::vector<int>> sets;
    std::vector<std::vector<int>> frontier;
    for (const auto& fv : P.facet_vertices_)
        if (sets.insert(fv).second) frontier.push_back(fv);
    while (!frontier.empty()) {
        std::vector<std::vector<int>> next;
        for (const auto& a : frontier)
            for (const auto& fv : P.facet_vertices_) {
                std::vector<int> c;
                std::set_intersection(a.begin(), a.end(), fv.begin(), fv.end(), std::back_inserter(c));
                if (sets.insert(c).second) next.push_back(c);
            }
        frontier = std::move(next);
    }
    std::vector<int> all(P.vertices_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    sets.insert(all);
    sets.insert({});
    for (const auto& s : sets) {
        std::vector<Point> vs;
        for (int i : s) vs.push_back(P.vertices_[i]);
        P.faces_.push_back({s, affine_dimension(vs)});
    }
    std::sort(P.faces_.begin(), P.faces_.end(), [](const Face& a, const Face& b) {
        return a.dim != b.dim ? a.dim < b.dim : a.vertices < b.vertices;
    });
    return P;
}

std::vector<Face> LatticePolytope::faces_of_dim(int d) const {
    std::vector<Face> out;
    for (const auto& f : faces_)
        if (f.dim == d) out.push_back(f);
    return out;
}

bool LatticePolytope::contains(const Point& p) const {
    for (const auto& f : facets_)
        if (dot(f.normal, p) < -f.offset) return false;
    return true;
}

bool LatticePolytope::contains_in_interior(const Point& p) const {
    for (const auto& f : facets_)
        if (dot(f.normal, p) <= -f.offset) return false;
    return true;
}

Face LatticePolytope::carrier(const Point& p) const { return carrier(std::vector<Point>{p}); }

Face LatticePolytope::carrier(const std::vector<Point>& pts) const {
    std::vector<int> vs(vertices_.size());
    for (std::size_t i = 0; i < vs.size(); ++i) vs[i] = static_cast<int>(i);
    for (std::size_t k = 0; k < facets_.size(); ++k) {
        const auto& f = facets_[k];
        bool tight = true;
        for (const auto& p : pts) {
            Int v = dot(f.normal, p);
            if (v < -f.offset) throw Error("point outside polytope: " + to_string(p));
            if (v != -f.offset) tight = false;
        }
        if (!tight) continue;
        std::vector<int> c;
        std::set_intersection(vs.begin(), vs.end(), facet_vertices_[k].begin(), facet_vertices_[k].end(),
                              std::back_inserter(c));
        vs = std::move(c);
    }
    int idx = face_index(vs);
    return faces_[static_cast<std::size_t>(idx)];
}

int LatticePolytope::face_index(const std::vector<int>& vertex_set) const {
    for (std::size_t i = 0; i < faces_.size(); ++i)
        if (faces_[i].vertices == vertex_set) return static_cast<int>(i);
    return -1;
}

int LatticePolytope::vertex_index(const Point& p) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), p);
    if (it == vertices_.end() || *it != p) return -1;
    return static_cast<int>(it - vertices_.begin());
}

std::vector<Point> LatticePolytope::lattice_points() const {
    const std::size_t d = rank_;
    Point lo = vertices_[0], hi = vertices_[0];
    for (const auto& v : vertices_)
        for (std::size_t j = 0; j < d; ++j) {
            lo[j] = std::min(lo[j], v[j]);
            hi[j] = std::max(hi[j], v[j]);
        }
    std::vector<Point> out;
    Point cur = lo;
    for (;;) {
        if (contains(cur)) out.push_back(cur);
        bool advanced = false;
        for (std::size_t j = d; j-- > 0;) {
            if (cur[j] < hi[j]) {
                cur[j] += 1;
                for (std::size_t k = j + 1; k < d; ++k) cur[k] = lo[k];
                advanced = true;
                break;
            }
        }
        if (!advanced) return out;
    }
}

Int LatticePolytope::edge_length(const Face& edge) const {
    if (edge.dim != 1 || edge.vertices.size() != 2) throw Error("edge_length: face is not an edge");
    const auto& a = vertices_[static_cast<std::size_t>(edge.vertices[0])];
    const auto& b = vertices_[static_cast<std::size_t>(edge.vertices[1])];
    Point diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = b[i] - a[i];
    return content(diff);
}

LatticePolytope polar_dual(const LatticePolytope& P) {
    std::vector<Point> verts;
    for (const auto& f : P.facets()) {
        if (f.offset <= 0)
            throw Error("origin is not interior; separating facet normal " + to_string(f.normal) + " offset " +
                        to_string(f.offset));
        Point v;
        for (const auto& x : f.normal) {
            if (x % f.offset != 0) throw Error("polar dual is not a lattice polytope");
            v.push_back(x / f.offset);
        }
        verts.push_back(v);
    }
    return LatticePolytope::hull(verts);
}

bool is_reflexive(const LatticePolytope& P) {
    for (const auto& f : P.facets())
        if (f.offset != 1) return false;
    return true;
}

ClassifiedPoints classify_lattice_points(const LatticePolytope& P) {
    ClassifiedPoints out;
    out.count_by_dim.assign(P.rank() + 1, 0);
    for (const auto& p : P.lattice_points()) {
        Face c = P.carrier(p);
        out.count_by_dim[static_cast<std::size_t>(c.dim)] += 1;
        out.points.push_back({p, c});
    }
    return out;
}

Face dual_face_of_points(const LatticePolytope& dual, const std::vector<Point>& pts) {
    std::vector<int> vs;
    std::vector<Point> coords;
    for (std::size_t i = 0; i < dual.vertices().size(); ++i) {
        bool tight = true;
        for (const auto& p : pts)
            if (dot(dual.vertices()[i], p) != -1) {
                tight = false;
                break;
            }
        if (tight) {
            vs.push_back(static_cast<int>(i));
            coords.push_back(dual.vertices()[i]);
        }
    }
    return {vs, affine_dimension(coords)};
}

Face dual_face(const LatticePolytope& P, const LatticePolytope& dual, const Face& F) {
    if (P.face_index(F.vertices) < 0) throw Error("dual_face: not a face of the polytope");
    std::vector<Point> pts;
    for (int i : F.vertices) pts.push_back(P.vertices()[static_cast<std::size_t>(i)]);
    return dual_face_of_points(dual, pts);
}

}  // namespace toric
