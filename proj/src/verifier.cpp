#include "toricnef/verifier.hpp"

#include "toricnef/lattice_quotient.hpp"
#include "toricnef/lp.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <set>

namespace toric {

const char* const kStrictVerdict = "𝒩₀ ⊊ 𝒩(Z) witnessed";
const char* const kNoWitness = "no strict-inclusion witness found";

std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        default: return "n/a";
    }
}

bool Report::passed() const {
    return std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == CheckStatus::Fail; });
}

json Report::to_json(bool with_timing) const {
    json j;
    j["version"] = "1";
    j["instance"] = instance;
    j["overall"] = passed() ? "pass" : "fail";
    json cs = json::array();
    for (const auto& c : checks) {
        json e;
        e["name"] = c.name;
        e["status"] = toric::to_string(c.status);
        e["detail"] = c.detail;
        if (with_timing) e["seconds"] = c.seconds;
        cs.push_back(e);
    }
    j["checks"] = cs;
    if (certificate) j["certificate"] = *certificate;
    return j;
}

namespace {

RaySet bit(int i) { return RaySet(1) << i; }

json labels_of(const GoodFanContext& ctx, RaySet s) {
    json a = json::array();
    for (int i : to_cone(s)) a.push_back(ctx.labels()[static_cast<std::size_t>(i)]);
    return a;
}

json labels_of(const GoodFanContext& ctx, const Cone& c) {
    json a = json::array();
    for (int i : c) a.push_back(ctx.labels()[static_cast<std::size_t>(i)]);
    return a;
}

RaySet mask_of(const GoodFanContext& ctx, const json& labels) {
    RaySet m = 0;
    for (const auto& l : labels) m |= bit(ctx.label_index(l.get<std::string>()));
    return m;
}

std::set<Point> as_set(const std::vector<Point>& v) { return {v.begin(), v.end()}; }

json points_json(const std::vector<Point>& v) {
    json a = json::array();
    for (const auto& p : v) a.push_back(to_json(p));
    return a;
}

Int mask_multiplicity(const GoodFanContext& ctx, RaySet s) {
    std::vector<Point> rows;
    for (int i : to_cone(s)) rows.push_back(ctx.rays()[static_cast<std::size_t>(i)]);
    Int m = 1;
    for (const auto& d : elementary_divisors(LatticeMatrix(rows, ctx.rank()))) m *= d;
    return m;
}

json rays_table_json(const GoodFanContext& ctx) {
    json r = json::array();
    for (std::size_t i = 0; i < ctx.rays().size(); ++i) {
        json e;
        e["label"] = ctx.labels()[i];
        e["point"] = to_json(ctx.rays()[i]);
        r.push_back(e);
    }
    return r;
}

Circuit labelled_circuit(const GoodFanContext& ctx, const LabelledCircuit& lc) {
    std::vector<std::pair<int, Int>> terms;
    for (std::size_t k = 0; k < lc.labels.size(); ++k) terms.emplace_back(ctx.label_index(lc.labels[k]), lc.coeffs[k]);
    std::sort(terms.begin(), terms.end());
    Circuit c;
    for (auto& [i, x] : terms) {
        c.rays.push_back(i);
        c.coeffs.push_back(x);
    }
    return c;
}

json circuit_labels_json(const GoodFanContext& ctx, const Circuit& c) {
    json j;
    j["rays"] = labels_of(ctx, c.rays);
    json k = json::array();
    for (const auto& x : c.coeffs) k.push_back(to_json(x));
    j["coeffs"] = k;
    return j;
}

Circuit circuit_from_labels(const GoodFanContext& ctx, const json& j) {
    LabelledCircuit lc;
    for (const auto& l : j.at("rays")) lc.labels.push_back(l.get<std::string>());
    for (std::size_t i = 0; i < j.at("coeffs").size(); ++i) lc.coeffs.push_back(int_from_json(j["coeffs"][i], "coeffs"));
    if (lc.labels.size() != lc.coeffs.size()) throw InputError("circuit: rays and coeffs differ in length");
    return labelled_circuit(ctx, lc);
}

// Relative interior point of K ∩ {f = 0} when that face is a facet of K.
std::optional<RatVector> facet_interior_point(const RatMatrix& rows, const Point& f, std::size_t dim) {
    RatMatrix A;
    RatVector b;
    const Point fp = primitive(f);
    for (const auto& r : rows) {
        if (primitive(r) == fp) continue;
        RatVector row(dim + 1);
        for (std::size_t j = 0; j < dim; ++j) row[j] = -r[j];
        row[dim] = 1;
        A.push_back(row);
        b.emplace_back(0);
    }
    for (int s : {1, -1}) {
        RatVector row(dim + 1, Rat(0));
        for (std::size_t j = 0; j < dim; ++j) row[j] = Rat(f[j] * s);
        A.push_back(row);
        b.emplace_back(0);
    }
    RatVector cap(dim + 1, Rat(0));
    cap[dim] = 1;
    A.push_back(cap);
    b.emplace_back(1);
    auto r = lp_maximize(cap, A, b);
    if (r.status != LpStatus::Optimal || r.value <= 0) return std::nullopt;
    RatVector w(r.x.begin(), r.x.begin() + static_cast<long>(dim));
    Point p = primitive(w);
    return to_rat(p);
}

struct Sigma0Choice {
    bool found = false;
    std::string reason;
    std::vector<int> eta;
    std::vector<Circuit> flips;
    Tri tri;
};

// Flip paths inside one factor from a seed to every node (breadth first over recorded edges).
std::vector<int> parents(const FacetFactor& F, std::vector<int>& via) {
    std::vector<int> par(F.nodes.size(), -2);
    via.assign(F.nodes.size(), -1);
    std::vector<std::vector<int>> out(F.nodes.size());
    for (std::size_t e = 0; e < F.edges.size(); ++e) out[static_cast<std::size_t>(F.edges[e].from)].push_back(static_cast<int>(e));
    std::vector<int> queue;
    for (std::size_t n = 0; n < F.nodes.size(); ++n)
        if (F.seed[n]) {
            par[n] = -1;
            queue.push_back(static_cast<int>(n));
        }
    for (std::size_t h = 0; h < queue.size(); ++h)
        for (int e : out[static_cast<std::size_t>(queue[h])]) {
            int to = F.edges[static_cast<std::size_t>(e)].to;
            if (par[static_cast<std::size_t>(to)] != -2) continue;
            par[static_cast<std::size_t>(to)] = queue[h];
            via[static_cast<std::size_t>(to)] = e;
            queue.push_back(to);
        }
    return par;
}

Sigma0Choice select_sigma0(const PipelineState& st, const std::vector<Cone>& required, std::size_t budget) {
    const auto& ctx = *st.ctx;
    Sigma0Choice out;
    auto ss = find_seed_containing(ctx, required, budget);
    if (ss.found) {
        out.found = true;
        out.eta = ss.order;
        out.tri = ss.fan;
        return out;
    }
    // Fall back to flipped nodes of the closure.
    const auto& g = st.graph;
    std::vector<std::vector<RaySet>> req(g.factors.size());
    for (const auto& c : required) {
        int f = ctx.facet_of(to_mask(c));
        if (f < 0 || static_cast<std::size_t>(f) >= g.factors.size()) {
            out.reason = "selector matches no fan";
            return out;
        }
        req[static_cast<std::size_t>(f)].push_back(to_mask(c));
    }
    std::vector<std::vector<int>> cand(g.factors.size());
    for (std::size_t f = 0; f < g.factors.size(); ++f) {
        for (std::size_t n = 0; n < g.factors[f].nodes.size(); ++n) {
            const auto& t = g.factors[f].nodes[n];
            if (std::all_of(req[f].begin(), req[f].end(), [&](RaySet c) { return std::binary_search(t.begin(), t.end(), c); }))
                cand[f].push_back(static_cast<int>(n));
        }
        if (cand[f].empty()) {
            out.reason = "selector matches no fan";
            return out;
        }
    }
    std::vector<std::vector<int>> par(g.factors.size()), via(g.factors.size());
    for (std::size_t f = 0; f < g.factors.size(); ++f) par[f] = parents(g.factors[f], via[f]);
    std::vector<std::size_t> pos(g.factors.size(), 0);
    std::size_t tried = 0;
    while (tried++ < budget) {
        std::vector<int> choice;
        for (std::size_t f = 0; f < pos.size(); ++f) choice.push_back(cand[f][pos[f]]);
        Tri t = assemble(g, choice);
        if (compatible(g, choice) && check_projective(ctx, t).projective) {
            std::vector<Cone> seed_cones;
            std::vector<Circuit> flips;
            for (std::size_t f = 0; f < choice.size(); ++f) {
                std::vector<Circuit> path;
                int n = choice[f];
                while (par[f][static_cast<std::size_t>(n)] >= 0) {
                    path.push_back(g.factors[f].edges[static_cast<std::size_t>(via[f][static_cast<std::size_t>(n)])].circuit);
                    n = par[f][static_cast<std::size_t>(n)];
                }
                for (RaySet s : g.factors[f].nodes[static_cast<std::size_t>(n)]) seed_cones.push_back(to_cone(s));
                flips.insert(flips.end(), path.rbegin(), path.rend());
            }
            auto seed = find_seed_containing(ctx, seed_cones, budget);
            if (seed.found) {
                out.found = true;
                out.eta = seed.order;
                out.flips = flips;
                out.tri = t;
                return out;
            }
        }
        std::size_t f = 0;
        for (; f < pos.size(); ++f) {
            if (++pos[f] < cand[f].size()) break;
            pos[f] = 0;
        }
        if (f == pos.size()) break;
    }
    out.reason = "selector matches no fan";
    return out;
}

}  // namespace

Instance instance_from_json(const json& j) {
    if (!j.is_object()) throw InputError("instance: expected an object");
    Instance inst;
    inst.name = j.value("name", "custom");
    if (j.contains("newton")) {
        inst.newton = polytope_from_json(j["newton"]);
        return inst;
    }
    if (!j.contains("order") || !j.contains("weights")) throw InputError("instance: needs \"newton\" or \"order\" and \"weights\"");
    std::vector<Point> w;
    for (std::size_t i = 0; i < j["weights"].size(); ++i)
        w.push_back(point_from_json(j["weights"][i], "weights[" + std::to_string(i) + "]"));
    inst.action = DiagonalAction::from_projective(int_from_json(j["order"], "order"), w);
    if (j.contains("basis")) inst.basis = matrix_from_json(j["basis"], "basis");
    inst.expected_index = j.contains("index") ? int_from_json(j["index"], "index")
                                              : invariant_sublattice(*inst.action, inst.action->rank()).index;
    return inst;
}

PipelineState prepare_instance(const Instance& inst) {
    PipelineState st;
    st.inst = inst;
    st.delta = instance_delta(inst);
    st.delta_star = polar_dual(st.delta);
    RayTable table = inst.rays.points.empty() ? generic_ray_table(st.delta_star) : inst.rays;
    try {
        st.ctx = std::make_unique<GoodFanContext>(st.delta, st.delta_star, table);
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError(e.what());
    }
    return st;
}

json scan_for_witnesses(const PipelineState& st) {
    const auto& ctx = *st.ctx;
    json j;
    if (st.graph.factorized) {
        j["scanned"] = false;
        j["candidates"] = json::array();
        return j;
    }
    json cands = json::array();
    for (const auto& choice : st.graph.flat_nodes) {
        Fan f = ctx.to_fan(assemble(st.graph, choice));
        for (const auto& c : find_circuits(f, ctx.rank() + 1))
            for (const auto& S : {c, c.reversed()}) {
                if (S.minus().size() != 1 || S.plus().empty()) continue;
                if (!is_supported(S, f).supported) continue;
                json e = circuit_labels_json(ctx, S);
                e["contracted"] = ctx.labels()[static_cast<std::size_t>(S.minus()[0])];
                cands.push_back(e);
            }
    }
    j["scanned"] = true;
    j["candidates"] = cands;
    return j;
}

CertificateOutcome counterexample_certificate(const PipelineState& st, std::size_t budget) {
    const auto& ctx = *st.ctx;
    const auto& inst = st.inst;
    CertificateOutcome out;
    std::vector<Cone> required;
    for (const auto& c : inst.required_cones) {
        Cone k;
        for (const auto& l : c) k.push_back(ctx.label_index(l));
        std::sort(k.begin(), k.end());
        required.push_back(k);
    }
    auto sel = select_sigma0(st, required, budget);
    if (!sel.found) {
        out.failure = sel.reason;
        return out;
    }
    json cert;
    cert["version"] = "1";
    cert["kind"] = "certificate";
    cert["instance"] = inst.name;
    cert["rays"] = rays_table_json(ctx);
    cert["delta"] = to_json(st.delta);
    json req = json::array();
    for (const auto& c : required) req.push_back(labels_of(ctx, c));
    cert["required_cones"] = req;
    json s0;
    json eta = json::array();
    for (int r : sel.eta) eta.push_back(ctx.labels()[static_cast<std::size_t>(r)]);
    s0["eta"] = eta;
    json flips = json::array();
    for (const auto& c : sel.flips) flips.push_back(circuit_labels_json(ctx, c));
    s0["flips"] = flips;
    json cones = json::array();
    for (RaySet s : sel.tri) cones.push_back(labels_of(ctx, s));
    s0["max_cones"] = cones;
    cert["sigma0"] = s0;
    json circs = json::array();
    for (std::size_t i = 0; i < inst.circuits.size(); ++i) {
        json c;
        c["name"] = "S" + std::to_string(i + 1);
        c["rays"] = inst.circuits[i].labels;
        json k = json::array();
        for (const auto& x : inst.circuits[i].coeffs) k.push_back(to_json(x));
        c["coeffs"] = k;
        circs.push_back(c);
    }
    cert["circuits"] = circs;
    cert["contracted"] = inst.contracted;

    Fan sigma0 = ctx.to_fan(sel.tri);
    const int q = ctx.label_index(inst.contracted);
    Fan star = star_fan(sigma0, Cone{q});
    auto iso = fans_unimodular_isomorphic(star, p1xp2_fan());
    cert["star_isomorphism"] = iso ? to_json(*iso) : json(nullptr);

    // relative interior point of the face cut out by the last circuit
    if (inst.circuits.size() < 2) throw InputError("instance needs two circuits for the certificate");
    Circuit s2 = labelled_circuit(ctx, inst.circuits[1]);
    const auto& W = ctx.class_space();
    auto K = cpl_cone(sigma0, W, false);
    RatVector coeffs(ctx.rays().size(), Rat(0));
    for (std::size_t k = 0; k < s2.rays.size(); ++k) coeffs[static_cast<std::size_t>(s2.rays[k])] = Rat(s2.coeffs[k]);
    Point fS2 = primitive(W.functional(coeffs));
    if (s2.coeff(q) > 0) fS2 = primitive(W.functional(RatVector(coeffs.size(), Rat(0))));
    auto D = facet_interior_point(K.cone.inequalities, fS2, W.dim());
    json face;
    face["D"] = D ? to_json(*D) : json(nullptr);
    cert["face"] = face;

    json pert;
    pert["direction"] = inst.contracted;
    json sweep = json::array();
    if (D) {
        NZero nz(ctx, st.graph);
        auto hint = decompose(ctx, st.graph, sel.tri);
        const RatVector E = W.ray_class(q);
        auto probe = [&](const Rat& t) {
            RatVector Dp = *D;
            for (std::size_t i = 0; i < Dp.size(); ++i) Dp[i] += t * E[i];
            auto m = nz.contains(Dp, hint ? &*hint : nullptr);
            json e;
            e["t"] = to_string(t);
            e["member"] = m.member;
            e["undecided"] = m.undecided;
            e["reason"] = m.member ? "carried by a good fan" : m.reason;
            return std::make_pair(m.member || m.undecided, e);
        };
        auto base = probe(Rat(0));
        pert["D_membership"] = base.second;
        const Rat floor = Rat(1) / Rat(Int(1) << 64);
        for (Rat t = 1; t >= floor; t /= 2) {
            auto [in, e] = probe(t);
            sweep.push_back(e);
            if (!in) break;
        }
        pert["t_min_probe"] = probe(floor).second;
    }
    pert["sweep"] = sweep;
    cert["perturbation"] = pert;
    return verify_certificate(cert);
}

CertificateOutcome verify_certificate(const json& input) {
    CertificateOutcome out;
    if (!input.is_object() || input.value("kind", "") != "certificate") throw InputError("not a certificate");
    if (input.value("version", "") != "1") throw InputError("unsupported certificate version");
    static const char* const kInputs[] = {"version", "kind", "instance", "rays", "delta", "required_cones", "sigma0",
                                          "circuits", "contracted", "star_isomorphism", "face", "perturbation"};
    json cert;
    for (const char* k : kInputs) {
        if (!input.contains(k)) throw InputError(std::string("certificate: missing \"") + k + "\"");
        cert[k] = input[k];
    }
    RayTable table;
    for (const auto& r : cert["rays"]) {
        table.labels.push_back(r.at("label").get<std::string>());
        table.points.push_back(point_from_json(r.at("point"), "rays.point"));
    }
    LatticePolytope delta = polytope_from_json(cert["delta"]);
    LatticePolytope delta_star = polar_dual(delta);
    GoodFanContext ctx(delta, delta_star, table);
    const auto& W = ctx.class_space();
    const auto& Z = ctx.hypersurface();
    json derived;
    json checks;
    auto mark = [&](const char* name, bool ok) { checks[name] = ok ? "pass" : "fail"; };

    // Σ0 is a Σ_η followed by recorded trivial flips
    std::vector<int> eta;
    for (const auto& l : cert["sigma0"].at("eta")) eta.push_back(ctx.label_index(l.get<std::string>()));
    bool good = true;
    std::string why;
    std::vector<int> sorted_eta = eta;
    std::sort(sorted_eta.begin(), sorted_eta.end());
    if (sorted_eta != ctx.insert_points()) {
        good = false;
        why = "eta is not an ordering of the inserted rays";
    }
    Tri tri = good ? replay_order(ctx, eta) : Tri{};
    for (const auto& fj : cert["sigma0"].at("flips")) {
        if (!good) break;
        Circuit c = circuit_from_labels(ctx, fj);
        auto lf = apply_local_flip(ctx, tri, c);
        if (!lf || !lf->trivial) {
            good = false;
            why = "recorded flip is not a supported trivial flip";
            break;
        }
        tri = lf->result;
    }
    Tri recorded;
    for (const auto& c : cert["sigma0"].at("max_cones")) recorded.push_back(mask_of(ctx, c));
    std::sort(recorded.begin(), recorded.end());
    if (good && tri != recorded) {
        good = false;
        why = "replayed fan differs from the recorded cones";
    }
    bool has_required = true;
    for (const auto& c : cert["required_cones"])
        if (!std::binary_search(recorded.begin(), recorded.end(), mask_of(ctx, c))) has_required = false;
    json s0;
    s0["good"] = good;
    if (!why.empty()) s0["reason"] = why;
    s0["cone_count"] = recorded.size();
    s0["contains_required_cones"] = has_required;
    Fan sigma0 = ctx.to_fan(recorded);
    std::string cwhy;
    bool complete = is_complete_simplicial(sigma0, &cwhy);
    s0["complete_simplicial"] = complete;
    auto proj = check_projective(ctx, recorded);
    s0["projective"] = proj.projective;
    s0["cpl_interior_point"] = to_json(proj.interior_point);
    derived["sigma0"] = s0;
    mark("sigma0_good", good && has_required && complete);
    mark("sigma0_projective", proj.projective);

    // (a) circuits, supports and flips
    const int q = ctx.label_index(cert["contracted"].get<std::string>());
    std::vector<Circuit> circuits;
    std::vector<FlipResult> flips;
    bool a_ok = true;
    json cj = json::array();
    for (const auto& c : cert["circuits"]) {
        Circuit expected = circuit_from_labels(ctx, c);
        json e;
        e["name"] = c.at("name");
        auto rel = circuit_of(ctx.rays(), expected.rays);
        bool match = rel && (rel->coeffs == expected.coeffs || rel->reversed().coeffs == expected.coeffs);
        e["relation_matches"] = match;
        e["contracted_negative"] = expected.coeff(q) < 0;
        Support sup = is_supported(expected, sigma0);
        e["supported"] = sup.supported;
        bool ok = match && expected.coeff(q) < 0 && sup.supported;
        if (sup.supported) {
            json pc = json::array(), ex = json::array();
            for (const auto& k : sup.plus_cones) pc.push_back(labels_of(ctx, k));
            for (const auto& k : sup.extension_sets) ex.push_back(labels_of(ctx, k));
            e["plus_cones"] = pc;
            e["extension_sets"] = ex;
            FlipResult fr = flip(sigma0, expected);
            e["kind"] = to_string(fr.kind);
            e["removed_ray"] = fr.removed_ray >= 0 ? json(ctx.labels()[static_cast<std::size_t>(fr.removed_ray)]) : json(nullptr);
            json rm = json::array(), in = json::array();
            for (const auto& k : fr.removed) rm.push_back(labels_of(ctx, k));
            for (const auto& k : fr.inserted) in.push_back(labels_of(ctx, k));
            e["removed_cones"] = rm;
            e["inserted_cones"] = in;
            ok = ok && fr.kind == FlipKind::DivisorialContraction && fr.removed_ray == q;
            flips.push_back(fr);
        } else {
            e["reason"] = sup.reason;
        }
        circuits.push_back(expected);
        a_ok = a_ok && ok;
        cj.push_back(e);
    }
    derived["circuits"] = cj;
    a_ok = a_ok && circuits.size() == 2 && flips.size() == 2;
    mark("a_supported_divisorial", a_ok);

    // (b) star of the contracted ray against P1 x P2
    Fan star = star_fan(sigma0, Cone{q});
    Fan model = p1xp2_fan();
    json sj;
    bool b_ok = false;
    if (!cert["star_isomorphism"].is_null()) {
        LatticeMatrix A = matrix_from_json(cert["star_isomorphism"], "star_isomorphism");
        std::vector<int> map;
        bool iso = A.rows() == model.rank() && A.cols() == star.rank() && abs(determinant(A)) == 1;
        if (iso) {
            map = ray_map(star, model, A);
            std::set<int> seen(map.begin(), map.end());
            iso = !seen.count(-1) && seen.size() == model.rays().size() && star.rays().size() == model.rays().size();
            if (iso) {
                std::set<Cone> img;
                for (const auto& c : star.max_cones()) {
                    Cone k;
                    for (int i : c) k.push_back(map[static_cast<std::size_t>(i)]);
                    std::sort(k.begin(), k.end());
                    img.insert(k);
                }
                iso = img == std::set<Cone>(model.max_cones().begin(), model.max_cones().end());
            }
        }
        sj["unimodular_isomorphism"] = iso;
        if (iso) {
            // star rays follow the sorted link rays of the contracted ray
            std::vector<int> link;
            for (const auto& m : sigma0.max_cones())
                if (std::binary_search(m.begin(), m.end(), q))
                    for (int i : m)
                        if (i != q) link.push_back(i);
            std::sort(link.begin(), link.end());
            link.erase(std::unique(link.begin(), link.end()), link.end());
            json rm = json::object();
            std::map<int, int> factor;  // sigma0 ray -> 1 (P1 factor) or 2 (P2 factor)
            for (std::size_t k = 0; k < link.size(); ++k) {
                int target = map[k];
                factor[link[k]] = target < 2 ? 1 : 2;
                rm[ctx.labels()[static_cast<std::size_t>(link[k])]] = target < 2 ? "P1" : "P2";
            }
            sj["ray_factors"] = rm;
            auto side = [&](const Circuit& c) {
                std::set<int> f;
                for (int r : c.plus()) f.insert(factor.count(r) ? factor[r] : 0);
                return f.size() == 1 ? *f.begin() : 0;
            };
            bool ruled = circuits.size() == 2 && side(circuits[0]) == 2 && side(circuits[1]) == 1;
            sj["S1_contracts_to"] = "P1";
            sj["S2_contracts_to"] = "P2";
            sj["rulings_match"] = ruled;
            b_ok = ruled;
        }
    } else {
        sj["unimodular_isomorphism"] = false;
    }
    derived["star"] = sj;
    mark("b_star_isomorphism", b_ok);

    // (c) anticanonical degrees of the circuit curves
    json dj = json::array();
    std::vector<Rat> degrees;
    std::optional<CurveFunctional> c_s2;
    for (std::size_t i = 0; i < circuits.size(); ++i) {
        std::optional<CurveFunctional> found;
        RaySet want = 0;
        for (int r : circuits[i].rays) want |= bit(r);
        for (const auto& w : walls(sigma0)) {
            auto c = wall_curve_class(sigma0, w);
            RaySet sup = 0;
            for (std::size_t k = 0; k < c.coeffs.size(); ++k)
                if (c.coeffs[k] != 0) sup |= bit(static_cast<int>(k));
            if (sup == want) {
                found = c;
                break;
            }
        }
        json e;
        e["name"] = cert["circuits"][i]["name"];
        if (found) {
            Rat d = anticanonical_degree(*found);
            e["wall"] = labels_of(ctx, found->wall);
            e["degree"] = to_string(d);
            degrees.push_back(d);
            if (i == 1) c_s2 = found;
        } else {
            e["wall"] = nullptr;
        }
        dj.push_back(e);
    }
    derived["degrees"] = dj;
    mark("c_degrees", degrees.size() == 2 && degrees[0] == 0 && degrees[1] == 1);

    // (d) components of the exceptional divisor on Z
    Int comp = Z.component_count_on_Z(ctx.rays()[static_cast<std::size_t>(q)]);
    json cc;
    cc["ray"] = ctx.labels()[static_cast<std::size_t>(q)];
    cc["value"] = to_json(comp);
    derived["component_count"] = cc;
    mark("d_component_count", comp == 1);

    // (e) exceptional strata
    json ej;
    bool e_ok = false;
    if (flips.size() == 2) {
        auto verdicts = [&](const FlipResult& fr) {
            std::set<std::vector<Point>> before, after;
            for (const auto& c : sigma0.all_cones()) {
                std::vector<Point> g;
                for (int i : c) g.push_back(sigma0.rays()[static_cast<std::size_t>(i)]);
                std::sort(g.begin(), g.end());
                before.insert(g);
            }
            for (const auto& c : fr.fan.all_cones()) {
                std::vector<Point> g;
                for (int i : c) g.push_back(fr.fan.rays()[static_cast<std::size_t>(i)]);
                std::sort(g.begin(), g.end());
                after.insert(g);
            }
            std::vector<std::pair<std::vector<Point>, bool>> removed, created;
            for (const auto& g : exceptional_cones(sigma0, fr.fan)) {
                bool meets = Z.stratum_meets(g).meets;
                (before.count(g) ? removed : created).emplace_back(g, meets);
            }
            return std::make_pair(removed, created);
        };
        auto label_pts = [&](const std::vector<Point>& g) {
            json a = json::array();
            std::vector<std::string> ls;
            for (const auto& p : g) ls.push_back(ctx.labels()[static_cast<std::size_t>(
                std::find(ctx.rays().begin(), ctx.rays().end(), p) - ctx.rays().begin())]);
            std::sort(ls.begin(), ls.end());
            for (auto& l : ls) a.push_back(l);
            return a;
        };
        auto [rm1, cr1] = verdicts(flips[0]);
        auto [rm2, cr2] = verdicts(flips[1]);
        json list = json::array();
        bool literal = true, created_miss = true, contain_q = true;
        std::set<std::vector<Point>> meet1, meet2;
        for (auto& [g, m] : rm1)
            if (m) meet1.insert(g);
        for (auto& [g, m] : rm2) {
            json e;
            e["cone"] = label_pts(g);
            e["side"] = "removed";
            e["meets"] = m;
            list.push_back(e);
            if (m) {
                literal = false;
                meet2.insert(g);
                if (std::find(g.begin(), g.end(), ctx.rays()[static_cast<std::size_t>(q)]) == g.end()) contain_q = false;
            }
        }
        for (auto& [g, m] : cr2) {
            json e;
            e["cone"] = label_pts(g);
            e["side"] = "created";
            e["meets"] = m;
            list.push_back(e);
            if (m) literal = created_miss = false;
        }
        ej["verdicts"] = list;
        ej["all_strata_miss_Z"] = literal;
        ej["created_strata_miss_Z"] = created_miss;
        ej["meeting_strata_contain_contracted_ray"] = contain_q;
        ej["meeting_strata_shared_with_S1"] = meet1 == meet2;
        e_ok = created_miss && contain_q && meet1 == meet2;
    }
    derived["strata"] = ej;
    mark("e_strata", e_ok);

    // (f) face point
    json fj;
    bool f_ok = false;
    std::optional<RatVector> D;
    std::optional<Point> fS2;
    if (!cert["face"].at("D").is_null()) D = ratvec_from_json(cert["face"]["D"], "face.D");
    if (D && D->size() != W.dim()) throw InputError("face.D has the wrong length");
    if (D && c_s2 && flips.size() == 2) {
        fS2 = primitive(W.functional(c_s2->coeffs));
        auto K = cpl_cone(sigma0, W, false);
        bool on_face = dot(to_rat(*fS2), *D) == 0;
        bool relint = true;
        for (const auto& r : K.cone.inequalities)
            if (primitive(r) != *fS2 && dot(r, *D) <= 0) relint = false;
        fj["C_S2_at_D"] = to_string(c_s2->evaluate(W, *D));
        fj["on_face"] = on_face;
        fj["relative_interior_of_facet"] = relint;
        FlipResult& f2 = flips[1];
        ClassSpace Wp = class_space(f2.fan);
        Pullback pb = pullback_classes(sigma0, f2, circuits[1], W, Wp);
        auto A = solve(pb.matrix, *D);
        bool ample = false;
        if (A) {
            auto Kp = cpl_cone(f2.fan, Wp, false);
            ample = std::all_of(Kp.cone.inequalities.begin(), Kp.cone.inequalities.end(),
                                [&](const RatVector& r) { return dot(r, *A) > 0; });
            fj["pullback_preimage"] = to_json(*A);
        } else {
            fj["pullback_preimage"] = nullptr;
        }
        fj["preimage_strictly_ample_on_contraction"] = ample;
        fj["D_in_N0_via"] = "sigma0";
        const auto& dm = cert["perturbation"].value("D_membership", json::object());
        fj["membership_sweep_agrees"] = dm.value("member", false);
        f_ok = on_face && relint && ample && good && proj.projective && dm.value("member", false);
    }
    derived["face"] = fj;
    mark("f_face_point_in_N0", f_ok);

    // (g) perturbations beyond the face
    json gj;
    bool g_ok = false;
    if (D && c_s2) {
        const RatVector E = W.ray_class(q);
        json probes = json::array();
        bool all_neg = true, any_out = false, sweep_ok = true;
        std::vector<json> entries(cert["perturbation"]["sweep"].begin(), cert["perturbation"]["sweep"].end());
        if (cert["perturbation"].contains("t_min_probe")) entries.push_back(cert["perturbation"]["t_min_probe"]);
        for (const auto& e : entries) {
            Rat t = rat_from_json(e.at("t"), "perturbation.t");
            RatVector Dp = *D;
            for (std::size_t i = 0; i < Dp.size(); ++i) Dp[i] += t * E[i];
            Rat v = c_s2->evaluate(W, Dp);
            json p;
            p["t"] = to_string(t);
            p["C_S2"] = to_string(v);
            p["outside_every_good_cone"] = v < 0;
            probes.push_back(p);
            if (!(t > 0 && v < 0)) all_neg = false;
            if (e.value("member", true) || e.value("undecided", true)) sweep_ok = false;
            else any_out = true;
        }
        gj["obstruction"] = "convexity on any complete fan containing the circuit rays forces C_S2 >= 0";
        gj["probes"] = probes;
        gj["sweep_agrees"] = sweep_ok && any_out;
        g_ok = all_neg && sweep_ok && any_out;
    }
    derived["perturbation"] = gj;
    mark("g_perturbation_outside_N0", g_ok);

    cert["derived"] = derived;
    cert["checks"] = checks;
    bool all = true;
    for (const auto& [k, v] : checks.items())
        if (v != "pass") {
            all = false;
            if (out.failure.empty()) out.failure = k;
        }
    cert["verdict"] = all ? kStrictVerdict : "FAIL";
    if (input.contains("derived") || input.contains("checks") || input.contains("verdict")) {
        for (const char* k : {"derived", "checks", "verdict"})
            if (!input.contains(k) || input[k] != cert[k]) {
                all = false;
                out.failure = std::string("recorded \"") + k + "\" does not match the recomputation";
                cert["verdict"] = "FAIL";
                break;
            }
    }
    out.pass = all;
    out.certificate = cert;
    return out;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

json nef_summary(const GoodFanContext& ctx, const Tri& t) {
    Fan f = ctx.to_fan(t);
    auto K = cpl_cone(f, ctx.class_space(), false);
    const std::size_t dim = ctx.class_space().dim();
    std::size_t facets = 0;
    for (std::size_t i = 0; i < K.cone.inequalities.size(); ++i) {
        // irredundant iff the row can be negative on the cone cut by the others
        RatMatrix A;
        RatVector b;
        for (std::size_t j = 0; j < K.cone.inequalities.size(); ++j) {
            if (j == i) continue;
            RatVector row(dim);
            for (std::size_t k = 0; k < dim; ++k) row[k] = -K.cone.inequalities[j][k];
            A.push_back(row);
            b.emplace_back(0);
        }
        RatVector row(dim);
        for (std::size_t k = 0; k < dim; ++k) row[k] = -K.cone.inequalities[i][k];
        A.push_back(row);
        b.emplace_back(1);
        auto r = lp_maximize(row, A, b);
        if (r.status == LpStatus::Optimal && r.value > 0) ++facets;
    }
    std::set<Rat> degs;
    for (const auto& c : K.functionals) degs.insert(anticanonical_degree(c));
    json j;
    j["walls"] = K.walls.size();
    j["distinct_functionals"] = K.cone.inequalities.size();
    j["facets"] = facets;
    json d = json::array();
    for (const auto& x : degs) d.push_back(to_string(x));
    j["wall_degrees"] = d;
    j["full_dimensional"] = K.full_dimensional;
    return j;
}

}  // namespace

Report verify_pipeline(const PipelineConfig& cfg, PipelineState* keep) {
    Instance inst = cfg.custom ? *cfg.custom : instance_by_name(cfg.instance);
    Report rep;
    rep.instance = inst.name;
    auto t0 = std::chrono::steady_clock::now();
    PipelineState st = prepare_instance(inst);
    const auto& ctx = *st.ctx;

    {
        Check c{"quotient"};
        if (inst.action) {
            Sublattice L = invariant_sublattice(*inst.action, inst.action->rank());
            c.detail["index"] = to_json(L.index);
            c.detail["character_image_order"] = to_json(character_image_order(*inst.action, inst.action->rank()));
            c.detail["delta_vertices"] = points_json(st.delta.vertices());
            bool ok = L.index == inst.expected_index &&
                      character_image_order(*inst.action, inst.action->rank()) == L.index;
            if (!inst.expected_delta_vertices.empty())
                ok = ok && as_set(st.delta.vertices()) == as_set(inst.expected_delta_vertices);
            c.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
        } else {
            c.status = CheckStatus::NotApplicable;
            c.detail["delta_vertices"] = points_json(st.delta.vertices());
        }
        c.seconds = seconds_since(t0);
        rep.checks.push_back(c);
    }
    {
        auto t = std::chrono::steady_clock::now();
        Check c{"duality"};
        bool reflexive = is_reflexive(st.delta) && is_reflexive(st.delta_star);
        bool involution = polar_dual(st.delta_star).vertices() == st.delta.vertices();
        auto cls = classify_lattice_points(st.delta_star);
        c.detail["dual_vertices"] = points_json(st.delta_star.vertices());
        c.detail["reflexive"] = reflexive;
        c.detail["involution"] = involution;
        c.detail["census"] = cls.count_by_dim;
        bool ok = reflexive && involution;
        if (inst.expected_census) ok = ok && cls.count_by_dim == *inst.expected_census;
        if (!inst.carriers.empty()) {
            std::vector<Point> labelled_vertices;
            for (std::size_t i = 0; i < ctx.rays().size(); ++i)
                if (!inst.carriers.count(ctx.labels()[i])) labelled_vertices.push_back(ctx.rays()[i]);
            bool verts = as_set(labelled_vertices) == as_set(st.delta_star.vertices());
            std::size_t matched = 0;
            for (const auto& [label, face] : inst.carriers) {
                Face f = st.delta_star.carrier(ctx.rays()[static_cast<std::size_t>(ctx.label_index(label))]);
                std::vector<Point> want;
                for (const auto& v : face) want.push_back(ctx.rays()[static_cast<std::size_t>(ctx.label_index(v))]);
                std::vector<Point> got;
                for (int v : f.vertices) got.push_back(st.delta_star.vertices()[static_cast<std::size_t>(v)]);
                if (as_set(got) == as_set(want) && f.dim == static_cast<int>(face.size()) - 1) ++matched;
            }
            c.detail["vertices_match_table"] = verts;
            c.detail["carriers_matched"] = matched;
            c.detail["carriers_listed"] = inst.carriers.size();
            ok = ok && verts && matched == inst.carriers.size();
        }
        c.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
        c.seconds = seconds_since(t);
        rep.checks.push_back(c);
    }
    {
        auto t = std::chrono::steady_clock::now();
        Check c{"singularities"};
        Fan sigma = face_fan(st.delta_star);
        auto sr = classify_singularities(sigma);
        auto sing3 = sr.singular_cones(3);
        json types = json::array();
        std::set<std::vector<Int>> seen;
        bool type_ok = true;
        for (const auto& cs : sr.cones) {
            if (cs.dim != 3 || cs.smooth) continue;
            seen.insert(cs.quotient_type);
            if (inst.expected_singular_type) {
                const auto& e = *inst.expected_singular_type;
                auto want = canonical_quotient_type(e[0], std::vector<Int>(e.begin() + 1, e.end()));
                if (cs.multiplicity != e[0] || cs.quotient_type != want) type_ok = false;
            }
        }
        for (const auto& ty : seen) types.push_back(to_json(Point(ty.begin(), ty.end())));
        c.detail["singular_3cones"] = sing3.size();
        c.detail["quotient_types"] = types;
        c.detail["gorenstein"] = std::all_of(sr.cones.begin(), sr.cones.end(), [](const ConeSingularity& x) { return x.gorenstein; });
        bool ok = type_ok;
        if (inst.expected_singular_3cones) ok = ok && sing3.size() == *inst.expected_singular_3cones;
        c.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
        c.seconds = seconds_since(t);
        rep.checks.push_back(c);
    }

    auto tg = std::chrono::steady_clock::now();
    bool from_cache = false;
    if (!cfg.graph_cache.empty() && std::filesystem::exists(cfg.graph_cache)) {
        st.graph = read_graph_cache(cfg.graph_cache, ctx);
        from_cache = true;
    } else {
        st.graph = build_good_fan_graph(ctx, GoodFanConfig{cfg.budget, cfg.jobs});
        if (!cfg.graph_cache.empty()) write_graph_cache(cfg.graph_cache, ctx, st.graph);
    }
    const double graph_seconds = seconds_since(tg);
    const auto& g = st.graph;

    {
        auto t = std::chrono::steady_clock::now();
        Check c{"sigma-eta"};
        json per = json::array();
        bool smooth = true;
        for (const auto& F : g.factors) {
            std::size_t seeds = 0;
            for (std::size_t n = 0; n < F.nodes.size(); ++n) {
                if (!F.seed[n]) continue;
                ++seeds;
                for (RaySet s : all_faces(F.nodes[n]))
                    if (popcount(s) <= 3 && mask_multiplicity(ctx, s) != 1) smooth = false;
            }
            json e;
            e["facet"] = F.facet;
            e["stellar_fans"] = seeds;
            e["search_states"] = F.seed_states;
            per.push_back(e);
        }
        c.detail["per_facet"] = per;
        c.detail["cones_up_to_dim_3_smooth"] = smooth;
        c.status = smooth ? CheckStatus::Pass : CheckStatus::Fail;
        c.seconds = seconds_since(t) + (from_cache ? 0 : graph_seconds / 2);
        rep.checks.push_back(c);
    }
    std::optional<Tri> projective_seed;
    {
        auto t = std::chrono::steady_clock::now();
        Check c{"good-fan-closure"};
        c.detail["dim_W"] = ctx.class_space().dim();
        c.detail["rays"] = ctx.rays().size();
        c.detail["mode"] = g.factorized ? "factorized" : "flat";
        c.detail["from_cache"] = from_cache;
        json per = json::array();
        bool all_rays = true;
        for (const auto& F : g.factors) {
            for (const auto& n : F.nodes) {
                RaySet used = 0;
                for (RaySet s : n) used |= s;
                all_rays = all_rays && used == F.mask;
            }
            json e;
            e["facet"] = F.facet;
            e["nodes"] = F.nodes.size();
            e["edges"] = F.edges.size();
            e["local_circuits"] = F.circuit_count;
            json fs = json::object();
            for (const auto& [k, v] : F.flip_stats) fs[k] = v;
            e["flip_stats"] = fs;
            per.push_back(e);
        }
        c.detail["per_facet"] = per;
        c.detail["every_node_uses_all_rays"] = all_rays;
        bool ok = all_rays && ctx.class_space().dim() == ctx.rays().size() - ctx.rank();
        if (g.factorized) {
            Int prod = 1;
            for (const auto& F : g.factors) prod *= Int(static_cast<long>(F.nodes.size()));
            // with uniform shared faces and connected factors every tuple is reachable from a Σ_η
            bool exact = shared_faces_agree(g) &&
                         std::all_of(g.factors.begin(), g.factors.end(), [](const FacetFactor& F) { return connected(F); });
            c.detail["good_fans"] = to_json(prod);
            c.detail["good_fans_exact"] = exact;
            // a Σ_η: any global insertion order
            Tri s = replay_order(ctx, ctx.insert_points());
            auto pj = check_projective(ctx, s);
            auto dec = decompose(ctx, g, s);
            c.detail["reference_sigma_eta_projective"] = pj.projective;
            c.detail["reference_sigma_eta_in_graph"] = dec.has_value();
            ok = ok && pj.projective && dec.has_value();
            if (pj.projective) projective_seed = s;
        } else {
            c.detail["good_fans"] = g.flat_nodes.size();
            c.detail["non_projective_good_fans"] = g.flat_nonprojective;
            ok = ok && !g.flat_nodes.empty();
        }
        c.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
        c.seconds = seconds_since(t) + (from_cache ? graph_seconds : graph_seconds / 2);
        rep.checks.push_back(c);
    }
    {
        auto t = std::chrono::steady_clock::now();
        Check c{"circuits"};
        if (inst.circuits.empty()) {
            c.status = CheckStatus::NotApplicable;
        } else {
            bool ok = true;
            json list = json::array();
            const int q = ctx.label_index(inst.contracted);
            for (const auto& lc : inst.circuits) {
                Circuit want = labelled_circuit(ctx, lc);
                auto rel = circuit_of(ctx.rays(), want.rays);
                json e;
                e["rays"] = lc.labels;
                if (rel) {
                    Circuit r = rel->coeff(q) < 0 ? *rel : rel->reversed();
                    json k = json::array();
                    for (const auto& l : lc.labels) k.push_back(to_json(r.coeff(ctx.label_index(l))));
                    e["relation"] = k;
                    ok = ok && r.coeffs == want.coeffs;
                } else {
                    e["relation"] = nullptr;
                    ok = false;
                }
                list.push_back(e);
            }
            c.detail["circuits"] = list;
            c.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
        }
        c.seconds = seconds_since(t);
        rep.checks.push_back(c);
    }
    {
        auto t = std::chrono::steady_clock::now();
        Check c{"trivial-flops"};
        auto audit = audit_edges(ctx, g);
        c.detail["edges_checked"] = audit.edges;
        c.detail["edges_ok"] = audit.ok;
        if (!audit.ok) c.detail["failure"] = audit.failure;
        if (audit.offending_stratum) c.detail["offending_stratum"] = points_json(*audit.offending_stratum);
        Fan sigma = face_fan(st.delta_star);
        std::size_t curves = 0, one_point = 0;
        for (const auto& cone : classify_singularities(sigma).singular_cones(3)) {
            ++curves;
            auto v = ctx.hypersurface().stratum_meets(sigma, cone);
            if (v.intersection_count && *v.intersection_count == 1) ++one_point;
        }
        std::size_t exc = 0, irreducible = 0;
        for (int r : ctx.insert_points()) {
            if (st.delta_star.carrier(ctx.rays()[static_cast<std::size_t>(r)]).dim != 2) continue;
            ++exc;
            if (ctx.hypersurface().component_count_on_Z(ctx.rays()[static_cast<std::size_t>(r)]) == 1) ++irreducible;
        }
        c.detail["singular_curves"] = curves;
        c.detail["curves_meeting_Z_once"] = one_point;
        c.detail["exceptional_rays"] = exc;
        c.detail["irreducible_on_Z"] = irreducible;
        bool ok = audit.ok && one_point == curves && irreducible == exc;
        c.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
        c.seconds = seconds_since(t);
        rep.checks.push_back(c);
    }
    {
        auto t = std::chrono::steady_clock::now();
        Check c{"nef-cone"};
        if (!g.factorized && g.flat_nodes.size() <= 16) {
            json list = json::array();
            for (const auto& choice : g.flat_nodes) list.push_back(nef_summary(ctx, assemble(g, choice)));
            c.detail["good_fans"] = list;
            c.status = CheckStatus::Pass;
        } else {
            c.status = CheckStatus::NotApplicable;
        }
        c.seconds = seconds_since(t);
        rep.checks.push_back(c);
    }
    {
        auto t = std::chrono::steady_clock::now();
        Check c{"certificate"};
        if (!inst.required_cones.empty()) {
            auto outc = counterexample_certificate(st, cfg.budget);
            c.detail["verdict"] = outc.pass ? kStrictVerdict : "FAIL";
            if (!outc.pass) c.detail["failure"] = outc.failure;
            if (!outc.certificate.is_null()) rep.certificate = outc.certificate;
            c.status = outc.pass ? CheckStatus::Pass : CheckStatus::Fail;
        } else {
            json scan = scan_for_witnesses(st);
            c.detail["scan"] = scan;
            bool none = scan["candidates"].empty();
            c.detail["verdict"] = none ? kNoWitness : "candidates found";
            c.status = none ? CheckStatus::Pass : CheckStatus::NotApplicable;
        }
        c.seconds = seconds_since(t);
        rep.checks.push_back(c);
    }
    if (keep) *keep = std::move(st);
    return rep;
}

}  // namespace toric
