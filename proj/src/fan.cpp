#include "toricnef/fan.hpp"

#include "toricnef/lp.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace toric {

RaySet to_mask(const Cone& c) {
    RaySet s = 0;
    for (int i : c) s |= RaySet(1) << i;
    return s;
}

Cone to_cone(RaySet s) {
    Cone c;
    while (s) {
        int i = __builtin_ctzll(s);
        c.push_back(i);
        s &= s - 1;
    }
    return c;
}

Fan::Fan(std::vector<Point> rays, std::vector<Cone> max_cones) : rays_(std::move(rays)), max_cones_(std::move(max_cones)) {
    if (rays_.empty()) throw InputError("fan without rays");
    if (rays_.size() > 64) throw InputError("fans with more than 64 rays are not supported");
    rank_ = rays_[0].size();
    for (std::size_t i = 0; i < rays_.size(); ++i) {
        if (rays_[i].size() != rank_) throw InputError("rays of mixed dimension");
        if (!is_primitive(rays_[i])) throw InputError("ray " + to_string(rays_[i]) + " is not primitive");
        for (std::size_t j = 0; j < i; ++j)
            if (rays_[i] == rays_[j]) throw InputError("duplicate ray " + to_string(rays_[i]));
    }
    for (auto& c : max_cones_) {
        std::sort(c.begin(), c.end());
        if (std::adjacent_find(c.begin(), c.end()) != c.end()) throw InputError("cone with repeated ray");
        for (int i : c)
            if (i < 0 || static_cast<std::size_t>(i) >= rays_.size()) throw InputError("cone references unknown ray");
    }
    std::sort(max_cones_.begin(), max_cones_.end());
    max_cones_.erase(std::unique(max_cones_.begin(), max_cones_.end()), max_cones_.end());
}

int Fan::ray_index(const Point& p) const {
    for (std::size_t i = 0; i < rays_.size(); ++i)
        if (rays_[i] == p) return static_cast<int>(i);
    return -1;
}

int Fan::cone_dim(const Cone& c) const {
    RatMatrix m;
    for (int i : c) m.push_back(to_rat(rays_[static_cast<std::size_t>(i)]));
    return static_cast<int>(toric::rank(std::move(m)));
}

bool Fan::is_simplicial() const {
    for (const auto& c : max_cones_)
        if (cone_dim(c) != static_cast<int>(c.size())) return false;
    return true;
}

bool Fan::has_cone(const Cone& c) const {
    for (const auto& m : max_cones_)
        if (std::includes(m.begin(), m.end(), c.begin(), c.end())) return true;
    return false;
}

std::vector<Cone> Fan::cones_of_dim(int d) const {
    std::set<RaySet> seen;
    for (const auto& m : max_cones_) {
        const RaySet full = to_mask(m);
        for (RaySet s = full;; s = (s - 1) & full) {
            if (popcount(s) == d) seen.insert(s);
            if (s == 0) break;
        }
    }
    std::vector<Cone> out;
    for (auto s : seen) out.push_back(to_cone(s));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Cone> Fan::all_cones() const {
    std::vector<Cone> out;
    for (int d = 1; d <= static_cast<int>(rank_); ++d) {
        auto c = cones_of_dim(d);
        out.insert(out.end(), c.begin(), c.end());
    }
    return out;
}

LatticeMatrix ray_matrix(const Fan& fan, const Cone& c) {
    std::vector<Point> rows;
    for (int i : c) rows.push_back(fan.rays()[static_cast<std::size_t>(i)]);
    return LatticeMatrix(rows, fan.rank());
}

Int multiplicity(const Fan& fan, const Cone& c) {
    Int m = 1;
    for (const auto& d : elementary_divisors(ray_matrix(fan, c))) m *= d;
    return m;
}

namespace {

std::optional<Point> solve_integer(const LatticeMatrix& A, const Point& b) {
    auto [D, U, V] = snf(A);
    Point ub(A.rows(), Int(0));
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.rows(); ++j) ub[i] += U.at(i, j) * b[j];
    Point y(A.cols(), Int(0));
    for (std::size_t i = 0; i < A.rows(); ++i) {
        Int d = i < A.cols() ? D.at(i, i) : Int(0);
        if (d == 0) {
            if (ub[i] != 0) return std::nullopt;
        } else {
            if (ub[i] % d != 0) return std::nullopt;
            y[i] = ub[i] / d;
        }
    }
    Point x(A.cols(), Int(0));
    for (std::size_t i = 0; i < A.cols(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) x[i] += V.at(i, j) * y[j];
    return x;
}

}  // namespace

bool is_gorenstein(const Fan& fan, const Cone& c) {
    return solve_integer(ray_matrix(fan, c), Point(c.size(), Int(1))).has_value();
}

Fan face_fan(const LatticePolytope& P, const std::vector<Point>* order) {
    std::vector<Point> rays = order ? *order : P.vertices();
    std::vector<int> pos(P.vertices().size(), -1);
    for (std::size_t i = 0; i < P.vertices().size(); ++i) {
        auto it = std::find(rays.begin(), rays.end(), P.vertices()[i]);
        if (it == rays.end()) throw InputError("ray order misses vertex " + to_string(P.vertices()[i]));
        pos[i] = static_cast<int>(it - rays.begin());
    }
    if (rays.size() != P.vertices().size()) throw InputError("ray order is not a permutation of the vertices");
    std::vector<Cone> cones;
    for (const auto& f : P.faces_of_dim(static_cast<int>(P.rank()) - 1)) {
        Cone c;
        for (int v : f.vertices) c.push_back(pos[static_cast<std::size_t>(v)]);
        cones.push_back(c);
    }
    return Fan(rays, cones);
}

bool cone_contains(const Fan& fan, const Cone& c, const RatVector& p) {
    RatMatrix A(fan.rank(), RatVector(c.size()));
    for (std::size_t k = 0; k < c.size(); ++k)
        for (std::size_t j = 0; j < fan.rank(); ++j) A[j][k] = Rat(fan.rays()[static_cast<std::size_t>(c[k])][j]);
    auto lam = solve(A, p);
    if (!lam) return false;
    for (const auto& x : *lam)
        if (x < 0) return false;
    return true;
}

Fan stellar_subdivide(const Fan& fan, const Point& r) {
    if (r.size() != fan.rank()) throw InputError("point dimension does not match fan rank");
    if (!is_primitive(r)) throw InputError("point " + to_string(r) + " is not primitive");
    if (fan.ray_index(r) >= 0) throw InputError("point " + to_string(r) + " is already a ray");
    std::vector<Point> rays = fan.rays();
    rays.push_back(r);
    const int ri = static_cast<int>(rays.size()) - 1;
    const RatVector rp = to_rat(r);
    std::vector<Cone> cones;
    bool inside = false;
    for (const auto& c : fan.max_cones()) {
        RatMatrix A(fan.rank(), RatVector(c.size()));
        for (std::size_t k = 0; k < c.size(); ++k)
            for (std::size_t j = 0; j < fan.rank(); ++j) A[j][k] = Rat(fan.rays()[static_cast<std::size_t>(c[k])][j]);
        auto lam = solve(A, rp);
        bool contains = lam.has_value();
        if (contains)
            for (const auto& x : *lam)
                if (x < 0) contains = false;
        if (!contains) {
            cones.push_back(c);
            continue;
        }
        inside = true;
        for (std::size_t k = 0; k < c.size(); ++k) {
            if ((*lam)[k] == 0) continue;
            Cone n;
            for (std::size_t j = 0; j < c.size(); ++j)
                if (j != k) n.push_back(c[j]);
            n.push_back(ri);
            cones.push_back(n);
        }
    }
    if (!inside) throw InputError("point " + to_string(r) + " is outside the support of the fan");
    return Fan(rays, cones);
}

Fan reorder_rays(const Fan& fan, const std::vector<Point>& order) {
    if (order.size() != fan.rays().size()) throw InputError("ray order has the wrong length");
    std::vector<int> pos(fan.rays().size(), -1);
    for (std::size_t i = 0; i < fan.rays().size(); ++i) {
        auto it = std::find(order.begin(), order.end(), fan.rays()[i]);
        if (it == order.end()) throw InputError("ray order misses " + to_string(fan.rays()[i]));
        pos[i] = static_cast<int>(it - order.begin());
    }
    std::vector<Cone> cones;
    for (const auto& c : fan.max_cones()) {
        Cone n;
        for (int i : c) n.push_back(pos[static_cast<std::size_t>(i)]);
        cones.push_back(n);
    }
    return Fan(order, cones);
}

std::vector<Cone> SingularityReport::singular_cones(int dim) const {
    std::vector<Cone> out;
    for (const auto& c : cones)
        if (c.dim == dim && !c.smooth) out.push_back(c.cone);
    return out;
}

bool SingularityReport::smooth_up_to_dim(int d) const {
    for (const auto& c : cones)
        if (c.dim <= d && !c.smooth) return false;
    return true;
}

std::vector<Int> canonical_quotient_type(const Int& r, const std::vector<Int>& weights) {
    std::vector<Int> best;
    for (Int k = 1; k < r || (r == 1 && k == 1); ++k) {
        if (gcd(k, r) != 1) continue;
        std::vector<Int> w;
        for (const auto& a : weights) {
            Int v = (k * a) % r;
            if (v < 0) v += r;
            w.push_back(v);
        }
        std::sort(w.begin(), w.end());
        if (best.empty() || w < best) best = w;
        if (r == 1) break;
    }
    return best;
}

LatticeMatrix cone_annihilator(const Fan& fan, const Cone& c) {
    if (c.empty()) return LatticeMatrix::identity(fan.rank());
    return integer_kernel(ray_matrix(fan, c));
}

std::vector<Int> cyclic_quotient_type(const Fan& fan, const Cone& c) {
    const std::size_t k = c.size();
    if (fan.cone_dim(c) != static_cast<int>(k)) return {};
    // Coordinates of the rays in a basis of the saturated span.
    LatticeMatrix U = ray_matrix(fan, c);
    LatticeMatrix ker = integer_kernel(U);  // rows: annihilator in M
    LatticeMatrix span_basis = integer_kernel(ker.rows() ? ker : LatticeMatrix(0, fan.rank()));
    RatMatrix bt;
    for (std::size_t j = 0; j < fan.rank(); ++j) {
        RatVector row;
        for (std::size_t i = 0; i < span_basis.rows(); ++i) row.emplace_back(span_basis.at(i, j));
        bt.push_back(row);
    }
    RatMatrix local;
    for (int i : c) {
        auto x = solve(bt, to_rat(fan.rays()[static_cast<std::size_t>(i)]));
        if (!x) return {};
        local.push_back(*x);
    }
    const Int r = abs(boost::multiprecision::numerator(determinant(local)));
    if (r == 1) return canonical_quotient_type(Int(1), std::vector<Int>(k, Int(0)));
    auto inv = inverse(local);
    if (!inv) return {};
    // Group N_sigma / <rays> is generated by the standard basis images e_j * U^{-1} mod 1.
    std::vector<std::vector<Int>> gens;
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<Int> g;
        for (std::size_t i = 0; i < k; ++i) {
            Rat v = (*inv)[j][i] * Rat(r);
            Int n = boost::multiprecision::numerator(v);
            Int m = n % r;
            if (m < 0) m += r;
            g.push_back(m);
        }
        gens.push_back(g);
    }
    // Search for an element of order r among small combinations of generators.
    const long limit = r > 64 ? 1 : static_cast<long>(r);
    std::vector<long> idx(k, 0);
    for (;;) {
        std::vector<Int> e(k, Int(0));
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i < k; ++i) e[i] += Int(idx[j]) * gens[j][i];
        Int g = r;
        for (auto& x : e) {
            x %= r;
            g = gcd(g, x);
        }
        if (g == 1) return canonical_quotient_type(r, e);
        std::size_t p = 0;
        while (p < k && ++idx[p] >= limit) idx[p++] = 0;
        if (p == k) break;
    }
    return {};
}

SingularityReport classify_singularities(const Fan& fan) {
    SingularityReport rep;
    for (const auto& c : fan.all_cones()) {
        ConeSingularity s;
        s.cone = c;
        s.dim = static_cast<int>(c.size());
        s.simplicial = fan.cone_dim(c) == s.dim;
        s.multiplicity = multiplicity(fan, c);
        s.smooth = s.simplicial && s.multiplicity == 1;
        s.gorenstein = is_gorenstein(fan, c);
        if (s.simplicial && !s.smooth) s.quotient_type = cyclic_quotient_type(fan, c);
        rep.cones.push_back(std::move(s));
    }
    return rep;
}

Fan star_fan(const Fan& fan, const Cone& sigma) {
    if (!fan.has_cone(sigma)) throw InputError("cone is not in the fan");
    LatticeMatrix ann = cone_annihilator(fan, sigma);
    auto project = [&](const Point& v) {
        Point img;
        for (std::size_t i = 0; i < ann.rows(); ++i) img.push_back(dot(ann.row(i), v));
        return primitive(img);
    };
    std::vector<Point> rays;
    std::vector<Cone> cones;
    std::map<int, int> index;
    std::vector<Cone> links;
    for (const auto& m : fan.max_cones()) {
        if (!std::includes(m.begin(), m.end(), sigma.begin(), sigma.end())) continue;
        Cone link;
        std::set_difference(m.begin(), m.end(), sigma.begin(), sigma.end(), std::back_inserter(link));
        links.push_back(link);
        for (int i : link) index.emplace(i, -1);
    }
    for (auto& [i, pos] : index) {
        Point img = project(fan.rays()[static_cast<std::size_t>(i)]);
        auto it = std::find(rays.begin(), rays.end(), img);
        if (it == rays.end()) {
            pos = static_cast<int>(rays.size());
            rays.push_back(img);
        } else {
            pos = static_cast<int>(it - rays.begin());
        }
    }
    for (const auto& l : links) {
        Cone c;
        for (int i : l) c.push_back(index[i]);
        cones.push_back(c);
    }
    return Fan(rays, cones);
}

std::vector<int> ray_map(const Fan& a, const Fan& b, const LatticeMatrix& A) {
    std::vector<int> out;
    for (const auto& u : a.rays()) {
        Point img(A.rows(), Int(0));
        for (std::size_t i = 0; i < A.rows(); ++i)
            for (std::size_t j = 0; j < A.cols(); ++j) img[i] += A.at(i, j) * u[j];
        out.push_back(b.ray_index(img));
    }
    return out;
}

std::optional<LatticeMatrix> fans_unimodular_isomorphic(const Fan& a, const Fan& b) {
    if (a.rank() != b.rank()) return std::nullopt;
    if (a.rank() > 6) throw Error("isomorphism search supports rank at most 6");
    if (a.rays().size() != b.rays().size() || a.max_cones().size() != b.max_cones().size()) return std::nullopt;
    const std::size_t n = a.rank();
    const Cone* base = nullptr;
    for (const auto& c : a.max_cones())
        if (c.size() == n && a.cone_dim(c) == static_cast<int>(n)) {
            base = &c;
            break;
        }
    if (!base) throw Error("isomorphism search needs a full-dimensional simplicial cone");
    RatMatrix R1(n, RatVector(n));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) R1[j][k] = Rat(a.rays()[static_cast<std::size_t>((*base)[k])][j]);
    auto R1inv = inverse(R1);
    std::set<Cone> target(b.max_cones().begin(), b.max_cones().end());
    for (const auto& c : b.max_cones()) {
        if (c.size() != n) continue;
        Cone perm = c;
        std::sort(perm.begin(), perm.end());
        do {
            std::vector<Point> rows(n, Point(n, Int(0)));
            bool integral = true;
            for (std::size_t i = 0; i < n && integral; ++i)
                for (std::size_t j = 0; j < n && integral; ++j) {
                    Rat s = 0;
                    for (std::size_t k = 0; k < n; ++k)
                        s += Rat(b.rays()[static_cast<std::size_t>(perm[k])][i]) * (*R1inv)[k][j];
                    if (boost::multiprecision::denominator(s) != 1) integral = false;
                    else rows[i][j] = boost::multiprecision::numerator(s);
                }
            if (!integral) continue;
            LatticeMatrix M(rows);
            if (abs(determinant(M)) != 1) continue;
            auto map = ray_map(a, b, M);
            if (std::find(map.begin(), map.end(), -1) != map.end()) continue;
            std::set<Cone> imgs;
            for (const auto& mc : a.max_cones()) {
                Cone ic;
                for (int i : mc) ic.push_back(map[static_cast<std::size_t>(i)]);
                std::sort(ic.begin(), ic.end());
                imgs.insert(ic);
            }
            if (imgs == target) return M;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return std::nullopt;
}

std::vector<Wall> walls(const Fan& fan, bool allow_boundary) {
    std::map<Cone, std::vector<std::pair<int, int>>> adj;  // tau -> (max cone index, apex ray)
    for (std::size_t m = 0; m < fan.max_cones().size(); ++m) {
        const auto& c = fan.max_cones()[m];
        if (c.size() != fan.rank()) {
            if (allow_boundary) continue;
            throw Error("walls: maximal cone of wrong dimension");
        }
        for (std::size_t k = 0; k < c.size(); ++k) {
            Cone tau;
            for (std::size_t j = 0; j < c.size(); ++j)
                if (j != k) tau.push_back(c[j]);
            adj[tau].emplace_back(static_cast<int>(m), c[k]);
        }
    }
    std::vector<Wall> out;
    for (const auto& [tau, list] : adj) {
        if (list.size() == 2) {
            out.push_back({tau, list[0].first, list[1].first, list[0].second, list[1].second});
        } else if (list.size() > 2 || !allow_boundary) {
            throw Error("codimension-one cone " + to_string(Point(tau.begin(), tau.end())) + " lies in " +
                        std::to_string(list.size()) + " maximal cones");
        }
    }
    return out;
}

bool is_complete_simplicial(const Fan& fan, std::string* why) {
    if (!fan.is_simplicial()) {
        if (why) *why = "not simplicial";
        return false;
    }
    for (const auto& c : fan.max_cones())
        if (c.size() != fan.rank()) {
            if (why) *why = "maximal cone of lower dimension";
            return false;
        }
    try {
        walls(fan, false);
    } catch (const Error& e) {
        if (why) *why = e.what();
        return false;
    }
    return intersections_are_faces(fan, why);
}

bool intersections_are_faces(const Fan& fan, std::string* why) {
    const auto& mc = fan.max_cones();
    const std::size_t n = fan.rank();
    for (std::size_t a = 0; a < mc.size(); ++a)
        for (std::size_t b = a + 1; b < mc.size(); ++b) {
            Cone common;
            std::set_intersection(mc[a].begin(), mc[a].end(), mc[b].begin(), mc[b].end(), std::back_inserter(common));
            // h >= 0 on a, <= 0 on b, = 0 on the common face; strictness on non-common rays.
            RatMatrix A;
            RatVector rhs;
            for (int i : mc[a]) {
                RatVector u = to_rat(fan.rays()[static_cast<std::size_t>(i)]);
                if (std::binary_search(common.begin(), common.end(), i)) {
                    A.push_back(u);
                    rhs.emplace_back(0);
                    for (auto& x : u) x = -x;
                    A.push_back(u);
                    rhs.emplace_back(0);
                } else {
                    for (auto& x : u) x = -x;
                    A.push_back(u);
                    rhs.emplace_back(-1);
                }
            }
            for (int i : mc[b]) {
                if (std::binary_search(common.begin(), common.end(), i)) continue;
                A.push_back(to_rat(fan.rays()[static_cast<std::size_t>(i)]));
                rhs.emplace_back(-1);
            }
            auto r = lp_maximize(RatVector(n, Rat(0)), A, rhs);
            if (r.status == LpStatus::Infeasible) {
                if (why)
                    *why = "cones " + std::to_string(a) + " and " + std::to_string(b) +
                           " do not meet along a common face";
                return false;
            }
        }
    return true;
}

namespace {

Point pt(std::initializer_list<long> v) {
    Point p;
    for (long x : v) p.emplace_back(x);
    return p;
}

}  // namespace

Fan p2_fan() { return Fan({pt({1, 0}), pt({0, 1}), pt({-1, -1})}, {{0, 1}, {1, 2}, {0, 2}}); }

Fan p4_fan() {
    std::vector<Point> rays = {pt({1, 0, 0, 0}), pt({0, 1, 0, 0}), pt({0, 0, 1, 0}), pt({0, 0, 0, 1}),
                               pt({-1, -1, -1, -1})};
    std::vector<Cone> cones;
    for (int i = 0; i < 5; ++i) {
        Cone c;
        for (int j = 0; j < 5; ++j)
            if (j != i) c.push_back(j);
        cones.push_back(c);
    }
    return Fan(rays, cones);
}

Fan p1xp2_fan() {
    std::vector<Point> rays = {pt({1, 0, 0}), pt({-1, 0, 0}), pt({0, 1, 0}), pt({0, 0, 1}), pt({0, -1, -1})};
    std::vector<Cone> cones;
    for (int a = 0; a < 2; ++a)
        for (int i = 0; i < 3; ++i) {
            Cone c{a};
            for (int j = 0; j < 3; ++j)
                if (j != i) c.push_back(2 + j);
            cones.push_back(c);
        }
    return Fan(rays, cones);
}

Fan p1xp3_fan() {
    std::vector<Point> rays = {pt({1, 0, 0, 0}), pt({-1, 0, 0, 0}), pt({0, 1, 0, 0}), pt({0, 0, 1, 0}),
                               pt({0, 0, 0, 1}), pt({0, -1, -1, -1})};
    std::vector<Cone> cones;
    for (int a = 0; a < 2; ++a)
        for (int i = 0; i < 4; ++i) {
            Cone c{a};
            for (int j = 0; j < 4; ++j)
                if (j != i) c.push_back(2 + j);
            cones.push_back(c);
        }
    return Fan(rays, cones);
}

}  // namespace toric
