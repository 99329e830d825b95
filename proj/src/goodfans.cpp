#include "toricnef/goodfans.hpp"

#include "toricnef/lp.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <limits>
#include <set>
#include <thread>
#include <unordered_set>

namespace toric {

namespace {

RaySet bit(int i) { return RaySet(1) << i; }

std::vector<int> bits_of(RaySet s) {
    std::vector<int> out;
    for (int i = 0; s; ++i, s >>= 1)
        if (s & 1) out.push_back(i);
    return out;
}

std::string tri_key(const Tri& t, RaySet extra) {
    std::string k(reinterpret_cast<const char*>(t.data()), t.size() * sizeof(RaySet));
    k.append(reinterpret_cast<const char*>(&extra), sizeof(extra));
    return k;
}

Int cone_mult(const std::vector<Point>& rays, RaySet s) {
    std::vector<Point> rows;
    for (int i : bits_of(s)) rows.push_back(rays[static_cast<std::size_t>(i)]);
    Int m = 1;
    for (const auto& d : elementary_divisors(LatticeMatrix(rows, rays.empty() ? 0 : rays[0].size()))) m *= d;
    return m;
}

}  // namespace

Rat SparseFunctional::evaluate(const RatVector& a) const {
    Rat s = 0;
    for (const auto& [i, c] : terms) s += c * a[static_cast<std::size_t>(i)];
    return s;
}

GoodFanContext::GoodFanContext(LatticePolytope delta, LatticePolytope delta_star, RayTable table)
    : rank_(delta_star.rank()), delta_(std::move(delta)), delta_star_(std::move(delta_star)), table_(std::move(table)) {
    if (table_.points.size() > 64) throw Error("at most 64 rays are supported");
    if (table_.labels.size() != table_.points.size()) throw Error("ray table labels do not match points");
    for (const auto& p : table_.points)
        if (!delta_star_.on_boundary(p)) throw Error("ray " + to_string(p) + " is not a boundary point");
    Z_ = std::make_unique<Hypersurface>(delta_, delta_star_);
    W_ = ClassSpace(table_.points);
    RaySet verts = 0;
    for (const auto& v : delta_star_.vertices()) {
        auto it = std::find(table_.points.begin(), table_.points.end(), v);
        if (it == table_.points.end()) throw Error("vertex " + to_string(v) + " missing from the ray table");
        verts |= bit(static_cast<int>(it - table_.points.begin()));
    }
    for (const auto& f : delta_star_.facets()) {
        RaySet m = 0;
        for (std::size_t i = 0; i < table_.points.size(); ++i) {
            Int s = 0;
            for (std::size_t j = 0; j < rank_; ++j) s += f.normal[j] * table_.points[i][j];
            if (s == -f.offset) m |= bit(static_cast<int>(i));
        }
        if (popcount(m & verts) != static_cast<int>(rank_)) throw Error("the polytope is not simplicial");
        facet_masks_.push_back(m);
        facet_vertices_.push_back(m & verts);
    }
    for (std::size_t i = 0; i < table_.points.size(); ++i)
        if (!(verts & bit(static_cast<int>(i)))) insert_points_.push_back(static_cast<int>(i));
}

int GoodFanContext::label_index(const std::string& label) const {
    for (std::size_t i = 0; i < table_.labels.size(); ++i)
        if (table_.labels[i] == label) return static_cast<int>(i);
    throw InputError("unknown ray label " + label);
}

int GoodFanContext::facet_of(RaySet s) const {
    for (std::size_t f = 0; f < facet_masks_.size(); ++f)
        if ((s & ~facet_masks_[f]) == 0) return static_cast<int>(f);
    return -1;
}

Tri GoodFanContext::base() const {
    Tri t = facet_vertices_;
    std::sort(t.begin(), t.end());
    return t;
}

Fan GoodFanContext::to_fan(const Tri& t) const {
    std::vector<Cone> cones;
    for (RaySet s : t) cones.push_back(to_cone(s));
    return Fan(table_.points, cones);
}

Tri GoodFanContext::from_fan(const Fan& f) const {
    std::vector<int> map;
    for (const auto& r : f.rays()) {
        auto it = std::find(table_.points.begin(), table_.points.end(), r);
        if (it == table_.points.end()) throw Error("fan ray " + to_string(r) + " is not in the ray table");
        map.push_back(static_cast<int>(it - table_.points.begin()));
    }
    Tri t;
    for (const auto& c : f.max_cones()) {
        RaySet s = 0;
        for (int i : c) s |= bit(map[static_cast<std::size_t>(i)]);
        t.push_back(s);
    }
    std::sort(t.begin(), t.end());
    return t;
}

RatVector GoodFanContext::coords(RaySet s, int r) const {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = coords_cache_.find({s, r});
        if (it != coords_cache_.end()) return it->second;
    }
    auto idx = bits_of(s);
    RatMatrix A(rank_, RatVector(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k)
        for (std::size_t j = 0; j < rank_; ++j) A[j][k] = Rat(table_.points[static_cast<std::size_t>(idx[k])][j]);
    auto x = solve(A, to_rat(table_.points[static_cast<std::size_t>(r)]));
    if (!x) throw Error("cone is not full-dimensional");
    std::lock_guard<std::mutex> lock(mutex_);
    return coords_cache_.emplace(std::make_pair(s, r), *x).first->second;
}

Tri GoodFanContext::stellar(const Tri& t, int r) const {
    Tri out;
    for (RaySet s : t) {
        int f = facet_of(s);
        if (s & bit(r)) throw Error("ray already present");
        if (f < 0 || !(facet_masks_[static_cast<std::size_t>(f)] & bit(r))) {
            out.push_back(s);
            continue;
        }
        auto x = coords(s, r);
        if (std::any_of(x.begin(), x.end(), [](const Rat& v) { return v < 0; })) {
            out.push_back(s);
            continue;
        }
        auto idx = bits_of(s);
        for (std::size_t k = 0; k < idx.size(); ++k)
            if (x[k] > 0) out.push_back((s & ~bit(idx[k])) | bit(r));
    }
    std::sort(out.begin(), out.end());
    return out;
}

const SparseFunctional& GoodFanContext::wall(RaySet tau, int y, int z) const {
    auto key = std::make_tuple(tau, y, z);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = wall_cache_.find(key);
        if (it != wall_cache_.end()) return it->second;
    }
    std::vector<int> all = bits_of(tau);
    all.push_back(y);
    all.push_back(z);
    RatMatrix A(rank_, RatVector(all.size()));
    for (std::size_t k = 0; k < all.size(); ++k)
        for (std::size_t j = 0; j < rank_; ++j) A[j][k] = Rat(table_.points[static_cast<std::size_t>(all[k])][j]);
    auto ns = nullspace(A, all.size());
    if (ns.size() != 1 || ns[0][all.size() - 2] == 0) throw Error("degenerate wall");
    Rat target = Rat(cone_mult(table_.points, tau)) / Rat(cone_mult(table_.points, tau | bit(y)));
    Rat scale = target / ns[0][all.size() - 2];
    SparseFunctional f;
    for (std::size_t k = 0; k < all.size(); ++k)
        if (ns[0][k] != 0) f.terms.emplace_back(all[k], ns[0][k] * scale);
    std::sort(f.terms.begin(), f.terms.end());
    std::lock_guard<std::mutex> lock(mutex_);
    return wall_cache_.emplace(key, std::move(f)).first->second;
}

int GoodFanContext::dual_face_dim(RaySet cone) const {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = dual_cache_.find(cone);
        if (it != dual_cache_.end()) return it->second;
    }
    std::vector<Point> pts;
    for (int i : bits_of(cone)) pts.push_back(table_.points[static_cast<std::size_t>(i)]);
    int d = dual_face_of_points(delta_, pts).dim;
    std::lock_guard<std::mutex> lock(mutex_);
    dual_cache_.emplace(cone, d);
    return d;
}

std::vector<InternalWall> internal_walls(const Tri& t, std::size_t rank) {
    std::vector<InternalWall> out;
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i + 1; j < t.size(); ++j) {
            RaySet tau = t[i] & t[j];
            if (popcount(tau) + 1 != static_cast<int>(rank)) continue;
            out.push_back({tau, bits_of(t[i] & ~tau)[0], bits_of(t[j] & ~tau)[0]});
        }
    return out;
}

std::vector<RaySet> all_faces(const Tri& t) {
    std::vector<RaySet> out;
    for (RaySet s : t)
        for (RaySet sub = s; sub; sub = (sub - 1) & s) out.push_back(sub);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

std::optional<LocalFlip> flip_oriented(const GoodFanContext& ctx, const Tri& t, const std::vector<RaySet>& faces,
                                       const Circuit& S) {
    RaySet all = 0;
    for (int r : S.rays) all |= bit(r);
    auto plus = S.plus(), minus = S.minus();
    std::vector<RaySet> link;
    bool first = true;
    for (int n : plus) {
        RaySet c = all & ~bit(n);
        if (!std::binary_search(faces.begin(), faces.end(), c)) return std::nullopt;
        std::vector<RaySet> l;
        for (RaySet m : t)
            if ((m & c) == c) l.push_back(m & ~c);
        if (first) link = std::move(l);
        else if (l != link) return std::nullopt;
        first = false;
    }
    if (link.empty()) return std::nullopt;
    std::vector<RaySet> removed, inserted;
    for (int n : plus)
        for (RaySet e : link) removed.push_back((all & ~bit(n)) | e);
    for (int m : minus)
        for (RaySet e : link) inserted.push_back((all & ~bit(m)) | e);
    std::sort(removed.begin(), removed.end());
    LocalFlip out;
    out.circuit = S;
    for (RaySet m : t)
        if (!std::binary_search(removed.begin(), removed.end(), m)) out.result.push_back(m);
    out.result.insert(out.result.end(), inserted.begin(), inserted.end());
    std::sort(out.result.begin(), out.result.end());
    out.flop = plus.size() >= 2 && minus.size() >= 2;

    auto new_faces = all_faces(out.result);
    std::vector<RaySet> cand;
    for (const auto* group : {&removed, &inserted})
        for (RaySet s : *group)
            for (RaySet sub = s; sub; sub = (sub - 1) & s) cand.push_back(sub);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    for (RaySet s : cand) {
        bool a = std::binary_search(faces.begin(), faces.end(), s);
        bool b = std::binary_search(new_faces.begin(), new_faces.end(), s);
        if (a != b) out.exceptional.push_back(s);
    }
    bool miss = true;
    for (RaySet s : out.exceptional)
        if (ctx.dual_face_dim(s) >= 1) {
            miss = false;
            out.offending = s;
            break;
        }
    out.trivial = out.flop && miss;
    return out;
}

}  // namespace

std::vector<LocalFlip> local_flips(const GoodFanContext& ctx, const Tri& t, const std::vector<RaySet>& faces,
                                   const Circuit& c) {
    std::vector<LocalFlip> out;
    for (const auto& S : {c, c.reversed()})
        if (auto f = flip_oriented(ctx, t, faces, S)) out.push_back(std::move(*f));
    return out;
}

std::optional<LocalFlip> apply_local_flip(const GoodFanContext& ctx, const Tri& t, const Circuit& oriented) {
    return flip_oriented(ctx, t, all_faces(t), oriented);
}

bool locally_regular(const GoodFanContext& ctx, const Tri& t, RaySet vertices) {
    RaySet used = 0;
    for (RaySet s : t) used |= s;
    auto free = bits_of(used & ~vertices);
    std::vector<int> pos(ctx.rays().size(), -1);
    for (std::size_t k = 0; k < free.size(); ++k) pos[static_cast<std::size_t>(free[k])] = static_cast<int>(k);
    std::set<Point> rows;
    for (const auto& w : internal_walls(t, ctx.rank())) {
        RatVector row(free.size(), Rat(0));
        for (const auto& [i, c] : ctx.wall(w.tau, w.y, w.z).terms)
            if (pos[static_cast<std::size_t>(i)] >= 0) row[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])] = c;
        if (std::all_of(row.begin(), row.end(), [](const Rat& v) { return v == 0; })) return false;
        rows.insert(primitive(row));
    }
    if (rows.empty()) return true;
    return strictly_feasible(std::vector<Point>(rows.begin(), rows.end()), free.size());
}

std::size_t GoodFanGraph::product_count() const {
    std::size_t p = 1;
    for (const auto& f : factors) {
        std::size_t n = f.nodes.size();
        if (n != 0 && p > std::numeric_limits<std::size_t>::max() / n) return std::numeric_limits<std::size_t>::max();
        p *= n;
    }
    return p;
}

FacetFactor explore_facet(const GoodFanContext& ctx, int facet, std::size_t budget) {
    FacetFactor F;
    F.facet = facet;
    F.mask = ctx.facet_masks()[static_cast<std::size_t>(facet)];
    F.vertices = ctx.facet_vertices()[static_cast<std::size_t>(facet)];
    for (int r : ctx.insert_points())
        if (F.mask & bit(r)) F.insert_points.push_back(r);

    std::set<Tri> seeds;
    std::unordered_set<std::string> seen;
    std::function<void(const Tri&, RaySet)> dfs = [&](const Tri& t, RaySet remaining) {
        if (!seen.insert(tri_key(t, remaining)).second) return;
        if (seen.size() > budget) throw BudgetExhausted("stellar seed search exceeded the budget");
        if (!remaining) {
            seeds.insert(t);
            return;
        }
        for (int r : bits_of(remaining)) dfs(ctx.stellar(t, r), remaining & ~bit(r));
    };
    RaySet rem = 0;
    for (int r : F.insert_points) rem |= bit(r);
    dfs(Tri{F.vertices}, rem);
    F.seed_count = seeds.size();
    F.seed_states = seen.size();

    std::vector<Circuit> circuits;
    std::vector<int> pool = bits_of(F.mask);
    for (const auto& c : find_circuits(ctx.rays(), ctx.rank() + 1, &pool)) {
        if (c.minus().size() < 2 || c.plus().size() < 2) continue;
        std::vector<Point> pts;
        for (int r : c.rays) pts.push_back(ctx.rays()[static_cast<std::size_t>(r)]);
        // circuits inside a proper face change cones over faces of dimension < rank - 1
        if (ctx.delta_star().carrier(pts).dim + 1 != static_cast<int>(ctx.rank())) continue;
        circuits.push_back(c);
    }
    F.circuit_count = circuits.size();

    auto add = [&](const Tri& t, bool is_seed) {
        F.index.emplace(t, static_cast<int>(F.nodes.size()));
        F.nodes.push_back(t);
        F.seed.push_back(is_seed);
        if (F.nodes.size() > budget) throw BudgetExhausted("trivial-flip closure exceeded the budget");
    };
    for (const auto& s : seeds) {
        if (!locally_regular(ctx, s, F.vertices)) throw Error("stellar seed is not regular");
        add(s, true);
    }
    for (std::size_t head = 0; head < F.nodes.size(); ++head) {
        const Tri t = F.nodes[head];
        auto faces = all_faces(t);
        for (const auto& c : circuits)
            for (auto& lf : local_flips(ctx, t, faces, c)) {
                ++F.flip_stats[lf.trivial ? "trivial-flop" : (lf.flop ? "nontrivial-flop" : "not-a-flop")];
                if (!lf.trivial) continue;
                auto it = F.index.find(lf.result);
                if (it == F.index.end()) {
                    add(lf.result, false);
                    it = F.index.find(lf.result);
                }
                F.edges.push_back({static_cast<int>(head), it->second, lf.circuit});
            }
    }
    return F;
}

Tri assemble(const GoodFanGraph& g, const std::vector<int>& choice) {
    Tri t;
    for (std::size_t f = 0; f < g.factors.size(); ++f) {
        const auto& n = g.factors[f].nodes[static_cast<std::size_t>(choice[f])];
        t.insert(t.end(), n.begin(), n.end());
    }
    std::sort(t.begin(), t.end());
    return t;
}

namespace {

std::vector<RaySet> faces_inside(const Tri& t, RaySet common) {
    std::vector<RaySet> out;
    for (RaySet c : t) {
        RaySet s = c & common;
        for (RaySet sub = s; sub; sub = (sub - 1) & s) out.push_back(sub);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

bool compatible(const GoodFanGraph& g, const std::vector<int>& choice) {
    for (std::size_t f = 0; f < g.factors.size(); ++f)
        for (std::size_t h = f + 1; h < g.factors.size(); ++h) {
            RaySet common = g.factors[f].mask & g.factors[h].mask;
            if (!common) continue;
            if (faces_inside(g.factors[f].nodes[static_cast<std::size_t>(choice[f])], common) !=
                faces_inside(g.factors[h].nodes[static_cast<std::size_t>(choice[h])], common))
                return false;
        }
    return true;
}

bool shared_faces_agree(const GoodFanGraph& g) {
    for (std::size_t f = 0; f < g.factors.size(); ++f)
        for (std::size_t h = 0; h < g.factors.size(); ++h) {
            RaySet common = g.factors[f].mask & g.factors[h].mask;
            if (h == f || !common) continue;
            const auto& nodes = g.factors[f].nodes;
            if (nodes.empty()) continue;
            auto first = faces_inside(nodes[0], common);
            for (const auto& n : nodes)
                if (faces_inside(n, common) != first) return false;
            if (h < f && !g.factors[h].nodes.empty() && faces_inside(g.factors[h].nodes[0], common) != first)
                return false;
        }
    return true;
}

bool connected(const FacetFactor& F) {
    if (F.nodes.empty()) return true;
    std::vector<std::vector<int>> adj(F.nodes.size());
    for (const auto& e : F.edges) {
        adj[static_cast<std::size_t>(e.from)].push_back(e.to);
        adj[static_cast<std::size_t>(e.to)].push_back(e.from);
    }
    std::vector<bool> seen(F.nodes.size(), false);
    std::vector<int> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y : adj[static_cast<std::size_t>(x)])
            if (!seen[static_cast<std::size_t>(y)]) {
                seen[static_cast<std::size_t>(y)] = true;
                ++count;
                stack.push_back(y);
            }
    }
    return count == F.nodes.size();
}

std::optional<std::vector<int>> decompose(const GoodFanContext& ctx, const GoodFanGraph& g, const Tri& t) {
    std::vector<Tri> parts(g.factors.size());
    for (RaySet s : t) {
        int f = ctx.facet_of(s);
        if (f < 0) return std::nullopt;
        parts[static_cast<std::size_t>(f)].push_back(s);
    }
    std::vector<int> choice;
    for (std::size_t f = 0; f < g.factors.size(); ++f) {
        std::sort(parts[f].begin(), parts[f].end());
        auto it = g.factors[f].index.find(parts[f]);
        if (it == g.factors[f].index.end()) return std::nullopt;
        choice.push_back(it->second);
    }
    return choice;
}

Projectivity check_projective(const GoodFanContext& ctx, const Tri& t) {
    std::set<Point> rows;
    for (const auto& w : internal_walls(t, ctx.rank())) {
        RatVector coeffs(ctx.rays().size(), Rat(0));
        for (const auto& [i, c] : ctx.wall(w.tau, w.y, w.z).terms) coeffs[static_cast<std::size_t>(i)] = c;
        rows.insert(primitive(ctx.class_space().functional(coeffs)));
    }
    RatMatrix F;
    for (const auto& r : rows) F.push_back(to_rat(r));
    Projectivity p;
    auto [m, w] = max_margin(F, ctx.class_space().dim());
    p.margin = m;
    p.projective = m > 0;
    p.interior_point = w;
    return p;
}

std::optional<std::vector<WallWeight>> nonprojectivity_certificate(const GoodFanContext& ctx, const Tri& t) {
    const std::size_t dim = ctx.class_space().dim();
    std::map<RatVector, RaySet> rows;
    for (const auto& w : internal_walls(t, ctx.rank())) {
        RatVector coeffs(ctx.rays().size(), Rat(0));
        for (const auto& [i, c] : ctx.wall(w.tau, w.y, w.z).terms) coeffs[static_cast<std::size_t>(i)] = c;
        rows.emplace(ctx.class_space().functional(coeffs), w.tau);
    }
    const std::size_t n = rows.size();
    RatMatrix A;
    RatVector b;
    for (std::size_t k = 0; k < n; ++k) {
        RatVector r(n, Rat(0));
        r[k] = -1;
        A.push_back(r);
        b.emplace_back(0);
    }
    A.emplace_back(n, Rat(1));
    b.emplace_back(1);
    A.emplace_back(n, Rat(-1));
    b.emplace_back(-1);
    for (std::size_t j = 0; j < dim; ++j) {
        RatVector r;
        for (const auto& [f, tau] : rows) r.push_back(f[j]);
        RatVector neg = r;
        for (auto& x : neg) x = -x;
        A.push_back(std::move(r));
        b.emplace_back(0);
        A.push_back(std::move(neg));
        b.emplace_back(0);
    }
    auto res = lp_maximize(RatVector(n, Rat(0)), A, b);
    if (res.status != LpStatus::Optimal) return std::nullopt;
    std::vector<WallWeight> out;
    std::size_t k = 0;
    for (const auto& [f, tau] : rows) {
        if (res.x[k] != 0) out.push_back({tau, res.x[k]});
        ++k;
    }
    return out;
}

GoodFanGraph build_good_fan_graph(const GoodFanContext& ctx, const GoodFanConfig& cfg) {
    GoodFanGraph g;
    const std::size_t nf = ctx.facet_masks().size();
    g.factors.resize(nf);
    std::vector<std::exception_ptr> errors(nf);
    unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(nf)));
    auto work = [&](std::size_t start) {
        for (std::size_t f = start; f < nf; f += jobs) {
            try {
                g.factors[f] = explore_facet(ctx, static_cast<int>(f), cfg.budget);
            } catch (...) {
                errors[f] = std::current_exception();
            }
        }
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work, j);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::size_t total = g.product_count();
    if (total > cfg.budget) {
        g.factorized = true;
        return g;
    }
    std::vector<int> choice(nf, 0);
    while (true) {
        if (!compatible(g, choice)) {
            ++g.flat_incompatible;
        } else {
            g.flat_nodes.push_back(choice);
            if (!check_projective(ctx, assemble(g, choice)).projective) ++g.flat_nonprojective;
        }
        std::size_t f = 0;
        for (; f < nf; ++f) {
            if (++choice[f] < static_cast<int>(g.factors[f].nodes.size())) break;
            choice[f] = 0;
        }
        if (f == nf) break;
    }
    return g;
}

EdgeAudit audit_edges(const GoodFanContext& ctx, const GoodFanGraph& g) {
    EdgeAudit a;
    auto points_of = [&](RaySet s) {
        std::vector<Point> pts;
        for (int i : bits_of(s)) pts.push_back(ctx.rays()[static_cast<std::size_t>(i)]);
        return pts;
    };
    for (const auto& F : g.factors)
        for (const auto& e : F.edges) {
            ++a.edges;
            const Tri& from = F.nodes[static_cast<std::size_t>(e.from)];
            const Tri& to = F.nodes[static_cast<std::size_t>(e.to)];
            std::string where = "facet " + std::to_string(F.facet) + " edge " + std::to_string(e.from) + "->" +
                                std::to_string(e.to);
            auto lf = apply_local_flip(ctx, from, e.circuit);
            if (!lf) {
                a.ok = false;
                a.failure = where + ": circuit not supported";
                return a;
            }
            if (lf->result != to) {
                a.ok = false;
                a.failure = where + ": flip result differs from the recorded target";
                return a;
            }
            if (!lf->flop) {
                a.ok = false;
                a.failure = where + ": not a flop";
                return a;
            }
            for (RaySet s : lf->exceptional) {
                if (ctx.dual_face_dim(s) != 0) {
                    a.ok = false;
                    a.failure = where + ": exceptional stratum meets the hypersurface";
                    a.offending_stratum = points_of(s);
                    return a;
                }
                if (ctx.delta_star().carrier(points_of(s)).dim + 1 != static_cast<int>(ctx.rank())) {
                    a.ok = false;
                    a.failure = where + ": exceptional cone not interior to a facet cone";
                    a.offending_stratum = points_of(s);
                    return a;
                }
            }
            auto back = apply_local_flip(ctx, to, e.circuit.reversed());
            if (!back || back->result != from) {
                a.ok = false;
                a.failure = where + ": reversed flip does not return";
                return a;
            }
        }
    return a;
}

Tri replay_order(const GoodFanContext& ctx, const std::vector<int>& order) {
    Tri t = ctx.base();
    for (int r : order) t = ctx.stellar(t, r);
    return t;
}

SeedSearch find_seed_containing(const GoodFanContext& ctx, const std::vector<Cone>& required, std::size_t budget) {
    SeedSearch out;
    std::vector<RaySet> req;
    for (const auto& c : required) req.push_back(to_mask(c));
    RaySet inserts = 0;
    for (int r : ctx.insert_points()) inserts |= bit(r);
    for (RaySet c : req) {
        if (popcount(c) != static_cast<int>(ctx.rank()) || ctx.facet_of(c) < 0) {
            out.reason = "required cone is not a full-dimensional cone inside a facet cone";
            return out;
        }
        for (int r : ctx.insert_points()) {
            if (c & bit(r)) continue;
            auto x = ctx.coords(c, r);
            if (std::all_of(x.begin(), x.end(), [](const Rat& v) { return v >= 0; })) {
                out.reason = "a required cone contains another ray";
                return out;
            }
        }
    }
    // rays of required cones first, rarest first
    std::vector<int> order = ctx.insert_points();
    auto freq = [&](int r) {
        int n = 0;
        for (RaySet c : req) n += (c & bit(r)) ? 1 : 0;
        return n;
    };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        int fa = freq(a), fb = freq(b);
        if ((fa > 0) != (fb > 0)) return fa > 0;
        if (fa > 0 && fa != fb) return fa < fb;
        return a < b;
    });
    std::unordered_set<std::string> dead;
    std::vector<int> path;
    std::function<bool(const Tri&, RaySet, RaySet)> dfs = [&](const Tri& t, RaySet remaining, RaySet present) {
        for (RaySet c : req)
            if ((c & present) == c && !std::binary_search(t.begin(), t.end(), c)) return false;
        if (!remaining) {
            out.fan = t;
            return true;
        }
        std::string key = tri_key(t, remaining);
        if (dead.count(key)) return false;
        if (++out.states > budget) throw BudgetExhausted("seed selector search exceeded the budget");
        for (int r : order) {
            if (!(remaining & bit(r))) continue;
            path.push_back(r);
            if (dfs(ctx.stellar(t, r), remaining & ~bit(r), present | bit(r))) return true;
            path.pop_back();
        }
        dead.insert(key);
        return false;
    };
    RaySet present = 0;
    for (std::size_t i = 0; i < ctx.rays().size(); ++i) present |= bit(static_cast<int>(i));
    present &= ~inserts;
    out.found = dfs(ctx.base(), inserts, present);
    if (out.found) out.order = path;
    else out.reason = "no stellar insertion order yields the required cones";
    return out;
}

bool boundary_convex(const GoodFanContext& ctx, const Tri& t, const RatVector& a) {
    for (const auto& w : internal_walls(t, ctx.rank())) {
        if (ctx.facet_of(w.tau | bit(w.y)) == ctx.facet_of(w.tau | bit(w.z))) continue;
        if (ctx.wall(w.tau, w.y, w.z).evaluate(a) < 0) return false;
    }
    return true;
}

NZero::NZero(const GoodFanContext& ctx, const GoodFanGraph& g) : ctx_(ctx), g_(g) {
    std::map<std::vector<RaySet>, int> face_ids;
    for (const auto& F : g.factors) {
        std::map<std::vector<std::pair<int, Rat>>, int> ids;
        std::vector<SparseFunctional> fs;
        std::vector<std::vector<int>> per_node, shared;
        for (const auto& t : F.nodes) {
            std::vector<int> w_ids;
            for (const auto& w : internal_walls(t, ctx.rank())) {
                const auto& f = ctx.wall(w.tau, w.y, w.z);
                auto it = ids.find(f.terms);
                if (it == ids.end()) {
                    it = ids.emplace(f.terms, static_cast<int>(fs.size())).first;
                    fs.push_back(f);
                }
                w_ids.push_back(it->second);
            }
            per_node.push_back(std::move(w_ids));
            std::vector<int> sig;
            for (const auto& H : g.factors) {
                RaySet common = F.mask & H.mask;
                if (!common || H.mask == F.mask) {
                    sig.push_back(-1);
                    continue;
                }
                auto faces = faces_inside(t, common);
                sig.push_back(face_ids.emplace(faces, static_cast<int>(face_ids.size())).first->second);
            }
            shared.push_back(std::move(sig));
        }
        functionals_.push_back(std::move(fs));
        node_walls_.push_back(std::move(per_node));
        shared_.push_back(std::move(shared));
    }
}

bool NZero::cross_convex(std::size_t f, int nf, std::size_t h, int nh, const RatVector& a) const {
    RaySet common = g_.factors[f].mask & g_.factors[h].mask;
    const auto& A = g_.factors[f].nodes[static_cast<std::size_t>(nf)];
    const auto& B = g_.factors[h].nodes[static_cast<std::size_t>(nh)];
    for (RaySet c : A) {
        RaySet tau = c & common;
        if (popcount(tau) + 1 != static_cast<int>(ctx_.rank())) continue;
        for (RaySet d : B)
            if ((d & common) == tau) {
                if (ctx_.wall(tau, bits_of(c & ~tau)[0], bits_of(d & ~tau)[0]).evaluate(a) < 0) return false;
                break;
            }
    }
    return true;
}

std::size_t NZero::cone_count() const { return g_.factorized ? g_.product_count() : g_.flat_nodes.size(); }

Membership NZero::contains(const RatVector& w, const std::vector<int>* hint, std::size_t max_steps) const {
    Membership m;
    const RatVector a = ctx_.class_space().lift(w);
    for (std::size_t f = 0; f < g_.factors.size(); ++f) {
        std::vector<bool> ok;
        for (const auto& fn : functionals_[f]) ok.push_back(fn.evaluate(a) >= 0);
        std::vector<int> carriers;
        for (std::size_t n = 0; n < node_walls_[f].size(); ++n)
            if (std::all_of(node_walls_[f][n].begin(), node_walls_[f][n].end(),
                            [&](int i) { return ok[static_cast<std::size_t>(i)]; }))
                carriers.push_back(static_cast<int>(n));
        m.carriers.push_back(std::move(carriers));
    }
    for (std::size_t f = 0; f < m.carriers.size(); ++f)
        if (m.carriers[f].empty()) {
            m.reason = "no carrier in facet " + std::to_string(f);
            return m;
        }
    const std::size_t nf = m.carriers.size();
    auto fits = [&](const std::vector<int>& c, std::size_t d) {
        for (std::size_t e = 0; e < d; ++e) {
            int id = shared_[d][static_cast<std::size_t>(c[d])][e];
            if (id < 0) continue;
            if (id != shared_[e][static_cast<std::size_t>(c[e])][d]) return false;
            if (!cross_convex(e, c[e], d, c[d], a)) return false;
        }
        return true;
    };
    auto is_carrier = [&](const std::vector<int>& c) {
        for (std::size_t f = 0; f < nf; ++f)
            if (!std::binary_search(m.carriers[f].begin(), m.carriers[f].end(), c[f]) || !fits(c, f)) return false;
        return true;
    };
    auto accept = [&](const std::vector<int>& c) {
        m.member = true;
        m.witness = c;
        m.reason = "carried by a good fan";
        return m;
    };
    if (!g_.factorized) {
        for (const auto& c : g_.flat_nodes)
            if (is_carrier(c)) return accept(c);
        m.reason = "a wall between facet cones is violated";
        return m;
    }
    if (hint && hint->size() == nf && is_carrier(*hint)) return accept(*hint);
    std::size_t steps = 0;
    // depth-first over facets, gluing only nodes that agree on shared faces
    std::vector<int> c(nf, -1);
    std::vector<std::size_t> pos(nf, 0);
    std::size_t d = 0;
    while (true) {
        if (pos[d] == m.carriers[d].size()) {
            pos[d] = 0;
            if (d == 0) break;
            --d;
            ++pos[d];
            continue;
        }
        if (++steps > max_steps) {
            m.undecided = true;
            m.reason = "projective witness search cap reached";
            return m;
        }
        c[d] = m.carriers[d][pos[d]];
        if (!fits(c, d)) {
            ++pos[d];
            continue;
        }
        if (d + 1 < nf) {
            ++d;
            continue;
        }
        return accept(c);
    }
    m.reason = "a wall between facet cones is violated";
    return m;
}

}  // namespace toric
