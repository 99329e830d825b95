#include "toricnef/classgroup.hpp"

#include <algorithm>
#include <map>

namespace toric {

ClassSpace::ClassSpace(const std::vector<Point>& rays) {
    if (rays.empty()) throw InputError("class space of an empty ray set");
    ray_count_ = rays.size();
    rank_ = rays[0].size();
    RatMatrix chosen;
    for (std::size_t i = 0; i < rays.size() && pivots_.size() < rank_; ++i) {
        RatMatrix trial = chosen;
        trial.push_back(to_rat(rays[i]));
        if (toric::rank(trial) == trial.size()) {
            chosen = std::move(trial);
            pivots_.push_back(static_cast<int>(i));
        }
    }
    if (pivots_.size() != rank_) throw InputError("rays do not span the lattice");
    // Columns of the pivot matrix are the pivot rays; express every ray in them.
    RatMatrix B(rank_, RatVector(rank_));
    for (std::size_t k = 0; k < rank_; ++k)
        for (std::size_t j = 0; j < rank_; ++j) B[j][k] = chosen[k][j];
    auto Binv = inverse(B);
    coord_pos_.assign(ray_count_, -1);
    for (std::size_t i = 0; i < ray_count_; ++i) {
        if (std::find(pivots_.begin(), pivots_.end(), static_cast<int>(i)) != pivots_.end()) continue;
        coord_pos_[i] = static_cast<int>(coords_.size());
        coords_.push_back(static_cast<int>(i));
        RatVector g(rank_, Rat(0));
        RatVector u = to_rat(rays[i]);
        for (std::size_t k = 0; k < rank_; ++k)
            for (std::size_t j = 0; j < rank_; ++j) g[k] += (*Binv)[k][j] * u[j];
        G_.push_back(g);
    }
    for (const auto& d : elementary_divisors(LatticeMatrix(rays)))
        if (d != 1) torsion_.push_back(d);
}

RatVector ClassSpace::project(const RatVector& a) const {
    // Subtract the linear function m with <m, u_b> = a_b on pivots; u_rho = sum g_k u_{b_k}.
    RatVector w(coords_.size());
    for (std::size_t c = 0; c < coords_.size(); ++c) {
        Rat v = a[static_cast<std::size_t>(coords_[c])];
        for (std::size_t k = 0; k < rank_; ++k)
            if (G_[c][k] != 0) v -= G_[c][k] * a[static_cast<std::size_t>(pivots_[k])];
        w[c] = v;
    }
    return w;
}

RatVector ClassSpace::lift(const RatVector& w) const {
    RatVector a(ray_count_, Rat(0));
    for (std::size_t c = 0; c < coords_.size(); ++c) a[static_cast<std::size_t>(coords_[c])] = w[c];
    return a;
}

RatVector ClassSpace::functional(const RatVector& coeffs) const {
    RatVector f(coords_.size());
    for (std::size_t c = 0; c < coords_.size(); ++c) f[c] = coeffs[static_cast<std::size_t>(coords_[c])];
    return f;
}

RatVector ClassSpace::ray_class(int ray) const {
    RatVector a(ray_count_, Rat(0));
    a[static_cast<std::size_t>(ray)] = 1;
    return project(a);
}

ClassSpace class_space(const Fan& fan) { return ClassSpace(fan.rays()); }

CurveFunctional wall_curve_class(const Fan& fan, const Wall& wall) {
    const auto& sigma = fan.max_cones()[static_cast<std::size_t>(wall.sigma)];
    const auto& sigma_p = fan.max_cones()[static_cast<std::size_t>(wall.sigma_prime)];
    Cone all = wall.tau;
    all.push_back(wall.y);
    all.push_back(wall.z);
    const std::size_t n = fan.rank();
    RatMatrix A(n, RatVector(all.size()));
    for (std::size_t k = 0; k < all.size(); ++k)
        for (std::size_t j = 0; j < n; ++j) A[j][k] = Rat(fan.rays()[static_cast<std::size_t>(all[k])][j]);
    auto ns = nullspace(A, all.size());
    if (ns.size() != 1) throw Error("degenerate wall");
    const RatVector& rel = ns[0];
    const Rat ycoef = rel[n - 1];
    if (ycoef == 0 || rel[n] == 0) throw Error("degenerate wall");
    Rat target = Rat(multiplicity(fan, wall.tau)) / Rat(multiplicity(fan, sigma));
    (void)sigma_p;
    Rat scale = target / ycoef;
    CurveFunctional c;
    c.wall = wall.tau;
    c.coeffs.assign(fan.rays().size(), Rat(0));
    for (std::size_t k = 0; k < all.size(); ++k) c.coeffs[static_cast<std::size_t>(all[k])] = rel[k] * scale;
    return c;
}

Rat anticanonical_degree(const CurveFunctional& c) {
    Rat s = 0;
    for (const auto& x : c.coeffs) s += x;
    return s;
}

Point relation_residual(const Fan& fan, const CurveFunctional& c) {
    RatVector v(fan.rank(), Rat(0));
    for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
        if (c.coeffs[i] == 0) continue;
        for (std::size_t j = 0; j < fan.rank(); ++j) v[j] += c.coeffs[i] * Rat(fan.rays()[i][j]);
    }
    Point out;
    for (const auto& x : v) {
        if (boost::multiprecision::denominator(x) != 1) return Point(fan.rank(), Int(1));
        out.push_back(boost::multiprecision::numerator(x));
    }
    return out;
}

bool PolyCone::contains(const RatVector& w) const {
    for (const auto& f : inequalities)
        if (dot(f, w) < 0) return false;
    return true;
}

bool PolyCone::strictly_inside(const RatVector& w) const {
    for (const auto& f : inequalities)
        if (dot(f, w) <= 0) return false;
    return true;
}

std::size_t PolyCone::cone_dim() const {
    if (!has_generators) throw Error("cone dimension needs generators");
    RatMatrix m;
    for (const auto& r : rays) m.push_back(to_rat(r));
    for (const auto& l : lineality) m.push_back(to_rat(l));
    return toric::rank(std::move(m));
}

PolyCone make_cone(RatMatrix inequalities, std::size_t dim, bool with_generators) {
    PolyCone K;
    K.dim = dim;
    std::vector<Point> seen;
    for (auto& f : inequalities) {
        Point p = primitive(f);
        if (std::all_of(p.begin(), p.end(), [](const Int& x) { return x == 0; })) continue;
        if (std::find(seen.begin(), seen.end(), p) != seen.end()) continue;
        seen.push_back(p);
        K.inequalities.push_back(to_rat(p));
    }
    if (with_generators) {
        auto g = extreme_rays(seen, dim);
        K.rays = std::move(g.rays);
        K.lineality = std::move(g.lineality);
        K.has_generators = true;
    }
    return K;
}

PolyCone cone_face(const PolyCone& K, const RatVector& f) {
    if (!K.has_generators) throw Error("cone_face needs generators");
    for (const auto& l : K.lineality)
        if (dot(f, to_rat(l)) != 0) throw Error("functional is not valid on the cone");
    PolyCone F;
    F.dim = K.dim;
    F.has_generators = true;
    F.lineality = K.lineality;
    for (const auto& r : K.rays) {
        Rat v = dot(f, to_rat(r));
        if (v < 0) throw Error("functional is not valid on the cone");
        if (v == 0) F.rays.push_back(r);
    }
    F.inequalities = K.inequalities;
    RatVector neg = f;
    for (auto& x : neg) x = -x;
    F.inequalities.push_back(f);
    F.inequalities.push_back(neg);
    return F;
}

RatVector relative_interior_point(const PolyCone& K) {
    if (!K.has_generators) throw Error("relative interior point needs generators");
    RatVector p(K.dim, Rat(0));
    for (const auto& r : K.rays)
        for (std::size_t j = 0; j < K.dim; ++j) p[j] += Rat(r[j]);
    return p;
}

CplCone cpl_cone(const Fan& fan, const ClassSpace& W, bool with_generators) {
    CplCone out;
    out.walls = walls(fan, false);
    RatMatrix rows;
    std::map<Point, int> row_of;
    for (const auto& w : out.walls) {
        auto c = wall_curve_class(fan, w);
        RatVector f = W.functional(c.coeffs);
        Point p = primitive(f);
        auto it = row_of.find(p);
        if (it == row_of.end()) {
            it = row_of.emplace(p, static_cast<int>(rows.size())).first;
            rows.push_back(to_rat(p));
        }
        out.inequality_of_wall.push_back(it->second);
        out.functionals.push_back(std::move(c));
    }
    out.cone.dim = W.dim();
    out.cone.inequalities = rows;
    if (with_generators) {
        std::vector<Point> ints;
        for (const auto& r : rows) ints.push_back(primitive(r));
        auto g = extreme_rays(ints, W.dim());
        out.cone.rays = std::move(g.rays);
        out.cone.lineality = std::move(g.lineality);
        out.cone.has_generators = true;
    }
    auto [t, w] = max_margin(rows, W.dim());
    out.margin = t;
    out.full_dimensional = t > 0;
    out.interior_point = w;
    return out;
}

}  // namespace toric
