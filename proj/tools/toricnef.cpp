#include "toricnef/verifier.hpp"
#include "toricnef/lattice_quotient.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

using namespace toric;

namespace {

struct Options {
    std::string input;
    std::string output;
    std::size_t budget = 1000000;
    unsigned jobs = 1;
    std::string instance = "quintic-quotient";
    std::string graph_cache;
    bool timing = false;
};

enum Exit { kPass = 0, kMathFail = 2, kInput = 3, kBudget = 4 };

void emit(const Options& o, const json& j) {
    if (o.output.empty())
        std::cout << canonical_dump(j);
    else
        write_text_file(o.output, canonical_dump(j));
}

LatticePolytope input_polytope(const Options& o, bool dual_side) {
    if (!o.input.empty()) return polytope_from_json(read_json_file(o.input));
    auto d = instance_delta(instance_by_name(o.instance));
    return dual_side ? polar_dual(d) : d;
}

Fan input_fan(const Options& o) {
    if (!o.input.empty()) {
        auto j = read_json_file(o.input);
        return fan_from_json(j.contains("fan") ? j["fan"] : j);
    }
    return face_fan(polar_dual(instance_delta(instance_by_name(o.instance))));
}

int cmd_dual(const Options& o) {
    auto P = input_polytope(o, false);
    emit(o, to_json(polar_dual(P)));
    return kPass;
}

int cmd_points(const Options& o) {
    auto P = input_polytope(o, true);
    auto cls = classify_lattice_points(P);
    json pts = json::array();
    for (const auto& p : cls.points) {
        json e;
        e["point"] = to_json(p.coords);
        e["carrier_dim"] = p.carrier.dim;
        json v = json::array();
        for (int i : p.carrier.vertices) v.push_back(to_json(P.vertices()[static_cast<std::size_t>(i)]));
        e["carrier"] = v;
        pts.push_back(e);
    }
    json j;
    j["census"] = cls.count_by_dim;
    j["points"] = pts;
    emit(o, j);
    return kPass;
}

int cmd_quotient(const Options& o) {
    Instance inst = instance_by_name(o.instance);
    if (!o.input.empty()) {
        inst = instance_from_json(read_json_file(o.input));
    }
    if (!inst.action) throw InputError("instance has no group action");
    auto L = invariant_sublattice(*inst.action, inst.action->rank());
    json j;
    j["index"] = to_json(L.index);
    j["character_image_order"] = to_json(character_image_order(*inst.action, inst.action->rank()));
    j["lattice_basis"] = to_json(L.basis);
    j["delta"] = to_json(instance_delta(inst));
    emit(o, j);
    return kPass;
}

int cmd_fan(const Options& o) {
    emit(o, to_json(face_fan(input_polytope(o, true))));
    return kPass;
}

int cmd_subdivide(const Options& o) {
    Fan f;
    std::vector<Point> rays;
    if (!o.input.empty()) {
        auto j = read_json_file(o.input);
        f = fan_from_json(j.at("fan"));
        for (const auto& r : j.at("rays")) rays.push_back(point_from_json(r, "rays"));
    } else {
        auto st = prepare_instance(instance_by_name(o.instance));
        f = face_fan(st.delta_star);
        for (int r : st.ctx->insert_points()) rays.push_back(st.ctx->rays()[static_cast<std::size_t>(r)]);
    }
    for (const auto& r : rays) f = stellar_subdivide(f, r);
    emit(o, to_json(f));
    return kPass;
}

int cmd_singularities(const Options& o) {
    Fan f = input_fan(o);
    auto rep = classify_singularities(f);
    json cones = json::array();
    for (const auto& c : rep.cones) {
        if (c.smooth) continue;
        json e;
        e["cone"] = c.cone;
        e["dim"] = c.dim;
        e["multiplicity"] = to_json(c.multiplicity);
        e["gorenstein"] = c.gorenstein;
        if (!c.quotient_type.empty()) e["quotient_type"] = to_json(Point(c.quotient_type.begin(), c.quotient_type.end()));
        cones.push_back(e);
    }
    json j;
    j["singular_cones"] = cones;
    emit(o, j);
    return kPass;
}

int cmd_circuits(const Options& o) {
    Fan f = input_fan(o);
    json list = json::array();
    for (const auto& c : find_circuits(f, f.rank() + 1)) {
        json e = to_json(c);
        json s = json::array();
        for (const auto& S : {c, c.reversed()}) {
            auto sup = is_supported(S, f);
            if (!sup.supported) continue;
            json x;
            x["orientation"] = to_json(S);
            x["kind"] = to_string(flip(f, S).kind);
            s.push_back(x);
        }
        e["supported"] = s;
        list.push_back(e);
    }
    json j;
    j["circuits"] = list;
    emit(o, j);
    return kPass;
}

int cmd_cpl(const Options& o) {
    Fan f = input_fan(o);
    auto W = class_space(f);
    auto K = cpl_cone(f, W, false);
    json rows = json::array();
    for (const auto& r : K.cone.inequalities) rows.push_back(to_json(r));
    json j;
    j["dim_W"] = W.dim();
    j["walls"] = K.walls.size();
    j["inequalities"] = rows;
    j["full_dimensional"] = K.full_dimensional;
    if (K.full_dimensional) j["interior_point"] = to_json(K.interior_point);
    emit(o, j);
    return K.full_dimensional ? kPass : kMathFail;
}

int cmd_good_fans(const Options& o) {
    auto st = prepare_instance(instance_by_name(o.instance));
    const auto& ctx = *st.ctx;
    auto g = build_good_fan_graph(ctx, GoodFanConfig{o.budget, o.jobs});
    if (!o.output.empty()) write_graph_cache(o.output, ctx, g);
    json j;
    j["instance"] = o.instance;
    j["mode"] = g.factorized ? "factorized" : "flat";
    json per = json::array();
    for (const auto& F : g.factors) {
        json e;
        e["facet"] = F.facet;
        e["nodes"] = F.nodes.size();
        e["seeds"] = F.seed_count;
        e["edges"] = F.edges.size();
        e["connected"] = connected(F);
        per.push_back(e);
    }
    j["facets"] = per;
    if (!g.factorized) j["good_fans"] = g.flat_nodes.size();
    else j["shared_faces_agree"] = shared_faces_agree(g);
    std::cout << canonical_dump(j);
    return kPass;
}

int cmd_certify(const Options& o) {
    PipelineConfig cfg;
    cfg.instance = o.instance;
    cfg.budget = o.budget;
    cfg.jobs = o.jobs;
    cfg.graph_cache = o.graph_cache;
    if (!o.input.empty()) cfg.custom = instance_from_json(read_json_file(o.input));
    Report rep = verify_pipeline(cfg);
    json r = rep.to_json(o.timing);
    if (!o.output.empty() && rep.certificate) {
        write_text_file(o.output, canonical_dump(*rep.certificate));
        r.erase("certificate");
    }
    std::cout << canonical_dump(r);
    return rep.passed() ? kPass : kMathFail;
}

int cmd_check(const Options& o) {
    if (o.input.empty()) throw InputError("check needs --input <certificate>");
    auto out = verify_certificate(read_json_file(o.input));
    json j;
    j["version"] = "1";
    j["verdict"] = out.certificate["verdict"];
    j["checks"] = out.certificate["checks"];
    if (!out.pass) j["failure"] = out.failure;
    if (!o.output.empty()) write_text_file(o.output, canonical_dump(out.certificate));
    std::cout << canonical_dump(j);
    return out.pass ? kPass : kMathFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Toric nef cones of Calabi-Yau hypersurfaces"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--input", o.input, "input JSON file");
    app.add_option("--output", o.output, "output file (stdout if omitted)");
    app.add_option("--budget", o.budget, "search state budget");
    app.add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed-instance", o.instance, "built-in instance")
        ->check(CLI::IsMember(instance_names()));
    app.add_option("--graph-cache", o.graph_cache, "good-fan graph cache (read if present)");
    app.add_flag("--timing", o.timing, "include timings in the report");

    std::function<int(const Options&)> run;
    auto sub = [&](const char* name, const char* help, int (*fn)(const Options&)) {
        app.add_subcommand(name, help)->callback([&run, fn] { run = fn; });
    };
    sub("dual", "polar dual of a polytope", cmd_dual);
    sub("points", "lattice points with carrier faces", cmd_points);
    sub("quotient", "invariant lattice and rebased Newton polytope", cmd_quotient);
    sub("fan", "face fan of a polytope", cmd_fan);
    sub("subdivide", "stellar subdivisions in order", cmd_subdivide);
    sub("singularities", "non-smooth cones of a fan", cmd_singularities);
    sub("circuits", "circuits and supported flips of a fan", cmd_circuits);
    sub("cpl", "cone of convex support functions", cmd_cpl);
    sub("good-fans", "good-fan graph; --output writes the cache", cmd_good_fans);
    sub("certify", "full pipeline and certificate", cmd_certify);
    sub("check", "re-verify a certificate without search", cmd_check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kInput;
    }
    try {
        return run(o);
    } catch (const BudgetExhausted& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return kBudget;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    }
}
