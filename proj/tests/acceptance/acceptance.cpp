// One PASS/FAIL line per acceptance criterion; exit status 1 if any line fails.
#include "fixtures.hpp"

#include "toricnef/lattice_quotient.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace toric;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        notes.push_back(std::string(ok ? "ok: " : "FAILED: ") + what);
    }
};

bool all_passed = true;

void report(int n, const std::string& title, double limit, const std::function<void(Outcome&)>& body) {
    Outcome o;
    auto t = Clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    double s = std::chrono::duration<double>(Clock::now() - t).count();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f s (limit %g s)", s, limit);
    o.require(s < limit, buf);
    all_passed = all_passed && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << ": " << title << "\n";
    for (const auto& note : o.notes) std::cout << "    " << note << "\n";
    std::cout.flush();
}

std::string num(std::size_t x) { return std::to_string(x); }

const Point& at(const std::string& label) { return fixtures::labelled_rays().at(label); }

std::vector<Point> table_vertices() { return {at("D0"), at("D1"), at("D2"), at("D3"), at("D4")}; }

// gcd of the k x k minors of k generators in Z^4
Int multiplicity(const std::vector<Point>& gens) {
    const std::size_t k = gens.size();
    Int g = 0;
    std::vector<std::size_t> cols;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (cols.size() == k) {
            RatMatrix m;
            for (const auto& v : gens) {
                RatVector row;
                for (auto c : cols) row.emplace_back(v[c]);
                m.push_back(row);
            }
            g = gcd(g, numerator(determinant(m)));
            return;
        }
        for (std::size_t c = from; c < 4; ++c) {
            cols.push_back(c);
            rec(c + 1);
            cols.pop_back();
        }
    };
    rec(0);
    return g;
}

std::vector<Point> gens_of(const GoodFanContext& ctx, RaySet s) {
    std::vector<Point> out;
    for (int b : to_cone(s)) out.push_back(ctx.rays()[static_cast<std::size_t>(b)]);
    return out;
}

LatticeMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
    std::uniform_int_distribution<long> d(-1000000, 1000000);
    std::vector<Point> rows(r, Point(c));
    for (auto& row : rows)
        for (auto& x : row) x = d(rng);
    return LatticeMatrix(rows, c);
}

bool is_hnf(const LatticeMatrix& H) {
    std::size_t lead = 0;
    for (std::size_t i = 0; i < H.rows(); ++i) {
        std::size_t j = 0;
        while (j < H.cols() && H.at(i, j) == 0) ++j;
        if (j == H.cols()) {
            for (std::size_t k = i; k < H.rows(); ++k)
                for (std::size_t l = 0; l < H.cols(); ++l)
                    if (H.at(k, l) != 0) return false;
            return true;
        }
        if ((i > 0 && j < lead) || H.at(i, j) <= 0) return false;
        for (std::size_t k = 0; k < i; ++k)
            if (H.at(k, j) < 0 || H.at(k, j) >= H.at(i, j)) return false;
        lead = j + 1;
    }
    return true;
}

const Check& check_named(const Report& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return c;
    throw std::runtime_error("report has no check " + name);
}

}  // namespace

int main() {
    PipelineState st = prepare_instance(quintic_quotient());
    const GoodFanContext& ctx = *st.ctx;

    report(1, "quotient lattice of index 25 and the five vertices of the Newton polytope", 1, [&](Outcome& o) {
        auto act = DiagonalAction::from_projective(5, {fixtures::P({0, 1, 2, 3, 4}), fixtures::P({0, 1, 3, 1, 0})});
        auto L = invariant_sublattice(act, 4);
        o.require(L.index == 25, "invariant sublattice index " + to_string(L.index));
        auto delta = instance_delta(quintic_quotient());
        o.require(fixtures::as_set(delta.vertices()) == fixtures::as_set(fixtures::delta_vertices()),
                  "vertices equal the listed five");
    });

    report(2, "dual polytope, reflexivity, census and carrier faces", 1, [&](Outcome& o) {
        auto delta = LatticePolytope::hull(fixtures::delta_vertices());
        auto dual = polar_dual(delta);
        o.require(fixtures::as_set(dual.vertices()) == fixtures::as_set(table_vertices()), "vertices D0..D4");
        o.require(is_reflexive(delta) && is_reflexive(dual), "both polytopes reflexive");
        auto cls = classify_lattice_points(dual);
        o.require(cls.count_by_dim == std::vector<std::size_t>{5, 0, 20, 0, 1}, "census (5,0,20,0,1)");
        std::set<Point> listed{fixtures::P({0, 0, 0, 0})};
        for (const auto& [k, v] : fixtures::labelled_rays()) listed.insert(v);
        o.require(fixtures::as_set(dual.lattice_points()) == listed, "lattice points equal the 25 labelled points and 0");
        bool cells = true;
        const auto& faces = fixtures::table_faces();
        for (std::size_t i = 0; i < faces.size(); ++i)
            for (const char* pq : {"P", "Q"}) {
                Face c = dual.carrier(at(pq + std::to_string(i + 1)));
                std::set<Point> got;
                for (int v : c.vertices) got.insert(dual.vertices()[static_cast<std::size_t>(v)]);
                cells = cells && c.dim == 2 && got == std::set<Point>{at(faces[i][0]), at(faces[i][1]), at(faces[i][2])};
            }
        o.require(cells, "all 20 carriers match cell for cell");
    });

    report(3, "ten singular 3-cones of type 1/5(1,1,3); every stellar fan smooth up to dimension 3", 10, [&](Outcome& o) {
        auto sr = classify_singularities(face_fan(ctx.delta_star()));
        auto sing = sr.singular_cones(3);
        o.require(sing.size() == 10, num(sing.size()) + " singular 3-cones");
        o.require(sr.singular_cones(2).empty(), "no singular 2-cones");
        const auto want = canonical_quotient_type(5, {1, 1, 3});
        bool types = true;
        for (const auto& cs : sr.cones)
            if (cs.dim == 3 && !cs.smooth) types = types && cs.multiplicity == 5 && cs.quotient_type == want;
        o.require(types, "each of type 1/5(1,1,3)");
        // every cone of a stellar fan lies over one facet and depends only on the order of that facet's points
        std::size_t leaves_total = 0;
        bool smooth = true;
        for (std::size_t f = 0; f < ctx.facet_masks().size(); ++f) {
            const RaySet mask = ctx.facet_masks()[f];
            Tri start;
            for (RaySet c : ctx.base())
                if ((c & ~mask) == 0) start.push_back(c);
            std::vector<int> pts;
            for (int r : ctx.insert_points())
                if (mask >> r & 1) pts.push_back(r);
            std::set<std::pair<RaySet, Tri>> seen;
            std::set<Tri> leaves;
            std::function<void(RaySet, const Tri&)> dfs = [&](RaySet done, const Tri& t) {
                if (!seen.insert({done, t}).second) return;
                if (popcount(done) == static_cast<int>(pts.size())) {
                    leaves.insert(t);
                    return;
                }
                for (int p : pts)
                    if (!(done >> p & 1)) dfs(done | (RaySet(1) << p), ctx.stellar(t, p));
            };
            dfs(0, start);
            for (const auto& t : leaves)
                for (RaySet s : all_faces(t))
                    if (popcount(s) <= 3 && multiplicity(gens_of(ctx, s)) != 1) smooth = false;
            leaves_total += leaves.size();
        }
        o.require(smooth, "all cones of dimension <= 3 unimodular in all " + num(leaves_total) +
                              " per-facet stellar subdivisions (every insertion order)");
    });

    std::vector<int> base_choice;
    report(4, "dim W = 21 and full-dimensional cpl for every good fan", 60, [&](Outcome& o) {
        auto t = Clock::now();
        st.graph = build_good_fan_graph(ctx, GoodFanConfig{});
        const auto& g = st.graph;
        char buf[96];
        std::snprintf(buf, sizeof buf, "closure built in %.1f s",
                      std::chrono::duration<double>(Clock::now() - t).count());
        o.notes.push_back(buf);
        std::size_t nodes = 1;
        bool all_rays = true;
        for (const auto& F : g.factors) {
            nodes *= F.nodes.size();
            for (const auto& n : F.nodes) {
                RaySet used = 0;
                for (RaySet s : n) used |= s;
                all_rays = all_rays && used == F.mask;
            }
        }
        bool reach = shared_faces_agree(g) &&
                     std::all_of(g.factors.begin(), g.factors.end(), [](const FacetFactor& F) { return connected(F); });
        o.require(reach, "facet graphs connected and shared faces uniform: the good fans are all " +
                             num(nodes) + " choices of one node per facet");
        o.require(all_rays, "every good fan has all 25 rays");
        Tri s = replay_order(ctx, ctx.insert_points());
        Fan sigma = ctx.to_fan(s);
        auto W = class_space(sigma);
        o.require(W.dim() == 21 && ctx.class_space().dim() == 21, "dim W = 21");
        o.require(cpl_cone(sigma, W, false).full_dimensional, "cpl of a stellar fan is full-dimensional");
        base_choice = *decompose(ctx, g, s);
        // a single trivial flip of the stellar fan, redone on the whole fan by the circuit module
        bool found = false;
        for (std::size_t f = 0; f < g.factors.size() && !found; ++f)
            for (const auto& e : g.factors[f].edges) {
                if (e.from != base_choice[static_cast<std::size_t>(f)]) continue;
                auto c = base_choice;
                c[f] = e.to;
                Tri t1 = assemble(g, c);
                if (check_projective(ctx, t1).projective) continue;
                found = true;
                std::ostringstream circ;
                for (std::size_t k = 0; k < e.circuit.rays.size(); ++k)
                    circ << (k ? " " : "") << e.circuit.coeffs[k] << "*" << ctx.labels()[static_cast<std::size_t>(e.circuit.rays[k])];
                o.notes.push_back("counterexample: flip of a stellar fan along " + circ.str());
                bool sup = is_supported(e.circuit, sigma).supported;
                auto r = flip(sigma, e.circuit);
                auto tf = is_trivial_flip(sigma, e.circuit, ctx.hypersurface());
                o.notes.push_back(std::string("  supported ") + (sup ? "yes" : "no") + ", trivial flop " +
                                  (tf.trivial ? "yes" : "no") + ", equals the graph node " +
                                  (r.fan == ctx.to_fan(t1) ? "yes" : "no") + ", complete " +
                                  (is_complete_simplicial(r.fan) ? "yes" : "no"));
                bool good = sup && tf.trivial && r.fan == ctx.to_fan(t1) && is_complete_simplicial(r.fan);
                auto K = cpl_cone(r.fan, class_space(r.fan), false);
                auto cert = nonprojectivity_certificate(ctx, t1);
                bool farkas = false;
                if (cert) {
                    RatVector sum(ctx.rays().size(), Rat(0));
                    auto ws = walls(r.fan);
                    farkas = true;
                    for (const auto& [tau, wt] : *cert) {
                        auto it = std::find_if(ws.begin(), ws.end(), [&](const Wall& w) { return w.tau == to_cone(tau); });
                        if (it == ws.end() || wt <= 0) {
                            farkas = false;
                            break;
                        }
                        auto cc = wall_curve_class(r.fan, *it);
                        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += wt * cc.coeffs[i];
                    }
                    farkas = farkas && std::all_of(sum.begin(), sum.end(), [](const Rat& x) { return x == 0; });
                }
                o.notes.push_back(std::string("  cpl full-dimensional ") + (K.full_dimensional ? "yes" : "no") +
                                  ", positive wall weights with zero curve sum " + (farkas ? "verified" : "not verified") +
                                  (cert ? " (" + num(cert->size()) + " walls)" : ""));
                o.require(!(good && !K.full_dimensional && farkas),
                          "cpl full-dimensional for every good fan (the good fan above is not projective)");
                break;
            }
        if (!found) o.notes.push_back("no non-projective good fan one flip from the stellar fan");
    });

    report(5, "circuits (1,1,1,-3) and (1,1,-1)", 1, [&](Outcome& o) {
        std::vector<Point> rays = {at("D2"), at("D4"), at("P10"), at("Q10"), at("P6"), at("P7")};
        auto s1 = circuit_of(rays, {0, 1, 2, 3});
        auto s2 = circuit_of(rays, {4, 5, 3});
        auto fix = [](Circuit c, int q) { return c.coeff(q) < 0 ? c : c.reversed(); };
        o.require(s1 && fix(*s1, 3).coeffs == std::vector<Int>{1, 1, 1, -3}, "D2 + D4 + P10 = 3 Q10");
        o.require(s2 && fix(*s2, 3).coeff(4) == 1 && fix(*s2, 3).coeff(5) == 1 && fix(*s2, 3).coeff(3) == -1,
                  "P6 + P7 = Q10");
    });

    report(6, "trivial flops, singular curves and exceptional divisors", 60, [&](Outcome& o) {
        auto audit = audit_edges(ctx, st.graph);
        o.require(audit.ok, num(audit.edges) + " flip edges are flops whose exceptional strata have vertex dual faces" +
                                (audit.ok ? "" : ": " + audit.failure));
        const auto& Z = ctx.hypersurface();
        bool once = true;
        std::size_t curves = 0;
        for (const auto& f : fixtures::table_faces()) {
            auto v = Z.stratum_meets({at(f[0]), at(f[1]), at(f[2])});
            once = once && v.intersection_count && *v.intersection_count == 1;
            ++curves;
        }
        o.require(once && curves == 10, "each of the 10 singular curves meets Z in one point");
        bool irreducible = true;
        std::size_t rays = 0;
        for (const auto& [k, v] : fixtures::labelled_rays())
            if (k[0] != 'D') {
                ++rays;
                irreducible = irreducible && Z.component_count_on_Z(v) == 1;
            }
        o.require(irreducible && rays == 20, "component count 1 for all 20 exceptional rays");
    });

    json certificate;
    report(7, "certificate of the strict inclusion", 600, [&](Outcome& o) {
        auto out = counterexample_certificate(st, 1000000);
        o.require(out.pass, out.pass ? "certificate verified" : "certificate failed: " + out.failure);
        if (out.certificate.is_null()) return;
        certificate = out.certificate;
        for (const auto& [k, v] : certificate["checks"].items()) o.require(v == "pass", k);
        o.require(certificate["verdict"] == kStrictVerdict, "verdict " + certificate["verdict"].get<std::string>());
    });

    report(8, "control instances", 10, [&](Outcome& o) {
        PipelineConfig cfg;
        cfg.instance = "p4";
        auto r = verify_pipeline(cfg);
        o.require(r.passed(), "P4 run passes");
        o.require(check_named(r, "good-fan-closure").detail["good_fans"] == 1, "P4 has a single good fan");
        o.require(check_named(r, "certificate").detail["verdict"] == kNoWitness && !r.certificate, "P4 has no witness");
        cfg.instance = "p1xp3";
        r = verify_pipeline(cfg);
        o.require(r.passed(), "P1 x P3 run passes");
        const auto& nef = check_named(r, "nef-cone").detail["good_fans"];
        o.require(nef.size() == 1 && nef[0]["facets"] == 2, "P1 x P3 nef cone has 2 facets");
        o.require(nef.size() == 1 && nef[0]["wall_degrees"] == json::array({"2", "4"}), "wall degrees {2, 4}");
        o.require(check_named(r, "trivial-flops").detail["edges_checked"] == 0, "no trivial flips");
        o.require(check_named(r, "certificate").detail["verdict"] == kNoWitness, "no witness");
    });

    report(9, "property suites", 600, [&](Outcome& o) {
        std::mt19937_64 rng(20240601);
        bool normal_forms = true;
        for (int n = 0; n < 1000; ++n) {
            auto A = random_matrix(rng, 1 + rng() % 5, 1 + rng() % 5);
            auto h = hnf(A);
            normal_forms = normal_forms && h.U * A == h.H && abs(determinant(h.U)) == 1 && is_hnf(h.H);
            auto s = snf(A);
            normal_forms = normal_forms && s.U * A * s.V == s.D && abs(determinant(s.U)) == 1 && abs(determinant(s.V)) == 1;
            for (std::size_t i = 0; i < s.D.rows(); ++i)
                for (std::size_t j = 0; j < s.D.cols(); ++j)
                    if (i != j && s.D.at(i, j) != 0) normal_forms = false;
            for (std::size_t i = 0; i + 1 < std::min(s.D.rows(), s.D.cols()); ++i)
                if (s.D.at(i + 1, i + 1) != 0 && (s.D.at(i, i) == 0 || s.D.at(i + 1, i + 1) % s.D.at(i, i) != 0))
                    normal_forms = false;
        }
        o.require(normal_forms, "HNF and SNF identities on 1000 random matrices with entries up to 10^6");

        bool polar = true;
        for (const auto& P0 : {LatticePolytope::hull(fixtures::delta_vertices()), projective_newton_polytope(4),
                               p1xp3_instance().newton.value()})
            for (const auto& A : {P0, polar_dual(P0)}) {
                auto B = polar_dual(A);
                polar = polar && polar_dual(B) == A;
                for (const auto& F : A.faces()) {
                    if (F.dim < 0 || F.dim == static_cast<int>(A.rank())) continue;
                    Face G = dual_face(A, B, F);
                    polar = polar && F.dim + G.dim == static_cast<int>(A.rank()) - 1 && dual_face(B, A, G) == F;
                }
            }
        o.require(polar, "polar involution and face duality dimension law on six polytopes");

        // locate points by barycentric coordinates in every cone of a stellar fan and of the face fan
        Tri s = replay_order(ctx, ctx.insert_points());
        auto inverses = [&](const Tri& t) {
            std::vector<RatMatrix> out;
            for (RaySet c : t) {
                RatMatrix M(4, RatVector(4));
                auto gens = gens_of(ctx, c);
                for (std::size_t i = 0; i < 4; ++i)
                    for (std::size_t j = 0; j < 4; ++j) M[j][i] = Rat(gens[i][j]);
                out.push_back(*inverse(M));
            }
            return out;
        };
        auto fine = inverses(s);
        const Tri base = ctx.base();
        auto coarse = inverses(base);
        auto inside = [](const RatMatrix& inv, const RatVector& p) {
            for (const auto& row : inv)
                if (dot(row, p) < 0) return false;
            return true;
        };
        bool support = true;
        std::uniform_int_distribution<long> d(-1000000, 1000000);
        for (int n = 0; n < 10000; ++n) {
            RatVector p;
            for (int j = 0; j < 4; ++j) p.emplace_back(d(rng));
            std::size_t hits = 0;
            for (std::size_t k = 0; k < s.size(); ++k) {
                if (!inside(fine[k], p)) continue;
                ++hits;
                int f = ctx.facet_of(s[k]);
                auto c = std::find(base.begin(), base.end(), f < 0 ? 0 : ctx.facet_vertices()[static_cast<std::size_t>(f)]);
                support = support && c != base.end() && inside(coarse[static_cast<std::size_t>(c - base.begin())], p);
            }
            bool in_coarse = std::any_of(coarse.begin(), coarse.end(), [&](const RatMatrix& m) { return inside(m, p); });
            support = support && hits >= 1 && in_coarse;
        }
        o.require(support, "stellar subdivision preserves the support on 10^4 random points");

        bool involution = true;
        std::size_t edges = 0;
        for (const auto& F : st.graph.factors)
            for (const auto& e : F.edges) {
                ++edges;
                auto back = apply_local_flip(ctx, F.nodes[static_cast<std::size_t>(e.to)], e.circuit.reversed());
                involution = involution && back && back->result == F.nodes[static_cast<std::size_t>(e.from)] && back->trivial;
            }
        o.require(involution, "flip involution on all " + num(edges) + " flop edges");

        if (certificate.is_null()) {
            o.require(false, "no certificate to re-check");
            return;
        }
        auto a = verify_certificate(certificate);
        auto b = verify_certificate(a.certificate);
        o.require(a.pass && b.pass, "check mode passes twice");
        o.require(canonical_dump(a.certificate) == canonical_dump(certificate) &&
                      canonical_dump(b.certificate) == canonical_dump(a.certificate),
                  "check mode is idempotent and byte-stable");
    });

    std::cout << (all_passed ? "all criteria passed" : "some criteria failed") << "\n";
    return all_passed ? 0 : 1;
}
