#include "toricnef/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace toric {

json to_json(const Int& x) { return x.str(); }

json to_json(const Rat& x) { return to_string(x); }

json to_json(const Point& p) {
    json a = json::array();
    for (const auto& x : p) {
        if (abs(x) < Int(1000000000000000LL)) a.push_back(x.convert_to<long long>());
        else a.push_back(x.str());
    }
    return a;
}

json to_json(const RatVector& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(to_string(x));
    return a;
}

json to_json(const LatticeMatrix& m) {
    json a = json::array();
    for (const auto& r : m.to_rows()) a.push_back(to_json(r));
    return a;
}

json to_json(const LatticePolytope& P) {
    json j;
    j["rank"] = P.rank();
    json v = json::array();
    for (const auto& p : P.vertices()) v.push_back(to_json(p));
    j["vertices"] = v;
    return j;
}

json to_json(const Fan& f) {
    json j;
    json r = json::array();
    for (const auto& p : f.rays()) r.push_back(to_json(p));
    j["rays"] = r;
    json c = json::array();
    for (const auto& k : f.max_cones()) c.push_back(k);
    j["max_cones"] = c;
    return j;
}

json to_json(const Circuit& c) {
    json j;
    j["rays"] = c.rays;
    json k = json::array();
    for (const auto& x : c.coeffs) k.push_back(to_json(x));
    j["coeffs"] = k;
    return j;
}

json to_json(const CurveFunctional& c) {
    json j;
    j["wall"] = c.wall;
    json k = json::object();
    for (std::size_t i = 0; i < c.coeffs.size(); ++i)
        if (c.coeffs[i] != 0) k[std::to_string(i)] = to_string(c.coeffs[i]);
    j["coeffs"] = k;
    return j;
}

json to_json(const DivisorClass& d) {
    json j;
    j["w"] = to_json(d.w);
    if (d.representative) j["representative"] = to_json(*d.representative);
    return j;
}

Int int_from_json(const json& j, const std::string& where) {
    try {
        if (j.is_number_integer()) return Int(j.get<long long>());
        if (j.is_string()) return parse_int(j.get<std::string>());
    } catch (const Error&) {
    }
    throw InputError(where + ": expected an integer");
}

Rat rat_from_json(const json& j, const std::string& where) {
    try {
        if (j.is_number_integer()) return Rat(j.get<long long>());
        if (j.is_string()) return parse_rat(j.get<std::string>());
    } catch (const Error&) {
    }
    throw InputError(where + ": expected a rational \"p/q\"");
}

Point point_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw InputError(where + ": expected an array");
    Point p;
    for (std::size_t i = 0; i < j.size(); ++i) p.push_back(int_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    return p;
}

RatVector ratvec_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw InputError(where + ": expected an array");
    RatVector v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(rat_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    return v;
}

LatticeMatrix matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw InputError(where + ": expected a non-empty array of rows");
    std::vector<Point> rows;
    for (std::size_t i = 0; i < j.size(); ++i) rows.push_back(point_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    for (const auto& r : rows)
        if (r.size() != rows[0].size()) throw InputError(where + ": rows have different lengths");
    return LatticeMatrix(rows, rows[0].size());
}

LatticePolytope polytope_from_json(const json& j) {
    if (!j.is_object() || !j.contains("vertices")) throw InputError("polytope: missing \"vertices\"");
    std::vector<Point> v;
    const auto& a = j["vertices"];
    if (!a.is_array()) throw InputError("polytope.vertices: expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) v.push_back(point_from_json(a[i], "polytope.vertices[" + std::to_string(i) + "]"));
    if (j.contains("rank") && !v.empty() && j["rank"].get<std::size_t>() != v[0].size())
        throw InputError("polytope.rank does not match the vertex length");
    try {
        return LatticePolytope::hull(v);
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError(std::string("polytope: ") + e.what());
    }
}

Fan fan_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rays") || !j.contains("max_cones"))
        throw InputError("fan: expected \"rays\" and \"max_cones\"");
    std::vector<Point> rays;
    for (std::size_t i = 0; i < j["rays"].size(); ++i)
        rays.push_back(point_from_json(j["rays"][i], "fan.rays[" + std::to_string(i) + "]"));
    std::vector<Cone> cones;
    for (std::size_t i = 0; i < j["max_cones"].size(); ++i) {
        const auto& c = j["max_cones"][i];
        if (!c.is_array()) throw InputError("fan.max_cones[" + std::to_string(i) + "]: expected an array");
        Cone k;
        for (const auto& x : c) {
            if (!x.is_number_integer()) throw InputError("fan.max_cones[" + std::to_string(i) + "]: expected ray indices");
            k.push_back(x.get<int>());
        }
        cones.push_back(k);
    }
    try {
        return Fan(rays, cones);
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError(std::string("fan: ") + e.what());
    }
}

Circuit circuit_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rays") || !j.contains("coeffs"))
        throw InputError("circuit: expected \"rays\" and \"coeffs\"");
    Circuit c;
    for (const auto& x : j["rays"]) {
        if (!x.is_number_integer()) throw InputError("circuit.rays: expected ray indices");
        c.rays.push_back(x.get<int>());
    }
    for (std::size_t i = 0; i < j["coeffs"].size(); ++i)
        c.coeffs.push_back(int_from_json(j["coeffs"][i], "circuit.coeffs[" + std::to_string(i) + "]"));
    if (c.rays.size() != c.coeffs.size()) throw InputError("circuit: rays and coeffs differ in length");
    return c;
}

DivisorClass divisor_class_from_json(const json& j) {
    if (!j.is_object() || !j.contains("w")) throw InputError("divisor class: missing \"w\"");
    DivisorClass d;
    d.w = ratvec_from_json(j["w"], "w");
    if (j.contains("representative")) d.representative = ratvec_from_json(j["representative"], "representative");
    return d;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

std::string content_hash(const json& j) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : j.dump()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

json tri_json(const Tri& t) {
    json a = json::array();
    for (RaySet s : t) a.push_back(to_cone(s));
    return a;
}

Tri tri_from(const json& a, std::size_t line) {
    Tri t;
    for (const auto& c : a) {
        Cone k;
        for (const auto& x : c) {
            if (!x.is_number_integer()) throw InputError("graph cache line " + std::to_string(line) + ": bad cone");
            k.push_back(x.get<int>());
        }
        t.push_back(to_mask(k));
    }
    std::sort(t.begin(), t.end());
    return t;
}

json rays_json(const GoodFanContext& ctx) {
    json r = json::array();
    for (std::size_t i = 0; i < ctx.rays().size(); ++i) {
        json e;
        e["label"] = ctx.labels()[i];
        e["point"] = to_json(ctx.rays()[i]);
        r.push_back(e);
    }
    return r;
}

}  // namespace

void write_graph_cache(const std::string& path, const GoodFanContext& ctx, const GoodFanGraph& g) {
    std::string out;
    json head;
    head["record"] = "header";
    head["version"] = "1";
    head["rays"] = rays_json(ctx);
    head["factorized"] = g.factorized;
    head["facets"] = g.factors.size();
    json flat = json::array();
    for (const auto& c : g.flat_nodes) flat.push_back(c);
    head["flat_nodes"] = flat;
    head["flat_nonprojective"] = g.flat_nonprojective;
    head["flat_incompatible"] = g.flat_incompatible;
    out += head.dump() + "\n";
    for (const auto& F : g.factors) {
        json fj;
        fj["record"] = "facet";
        fj["facet"] = F.facet;
        fj["seed_count"] = F.seed_count;
        fj["seed_states"] = F.seed_states;
        fj["circuit_count"] = F.circuit_count;
        json st = json::object();
        for (const auto& [k, v] : F.flip_stats) st[k] = v;
        fj["flip_stats"] = st;
        out += fj.dump() + "\n";
        std::vector<std::string> hashes;
        for (const auto& t : F.nodes) hashes.push_back(content_hash(tri_json(t)));
        std::vector<json> edges(F.nodes.size(), json::array());
        for (const auto& e : F.edges) {
            json ej;
            ej["circuit"] = to_json(e.circuit);
            ej["to"] = hashes[static_cast<std::size_t>(e.to)];
            edges[static_cast<std::size_t>(e.from)].push_back(ej);
        }
        for (std::size_t n = 0; n < F.nodes.size(); ++n) {
            json nj;
            nj["record"] = "node";
            nj["facet"] = F.facet;
            nj["hash"] = hashes[n];
            nj["seed"] = static_cast<bool>(F.seed[n]);
            nj["fan"] = tri_json(F.nodes[n]);
            nj["edges"] = edges[n];
            out += nj.dump() + "\n";
        }
    }
    write_text_file(path, out);
}

GoodFanGraph read_graph_cache(const std::string& path, const GoodFanContext& ctx) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    GoodFanGraph g;
    std::string line;
    std::size_t ln = 0;
    std::vector<std::map<std::string, int>> by_hash;
    struct Pending {
        std::size_t facet;
        int from;
        Circuit circuit;
        std::string to;
        std::size_t line;
    };
    std::vector<Pending> pending;
    while (std::getline(in, line)) {
        ++ln;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw InputError("graph cache line " + std::to_string(ln) + ": " + e.what());
        }
        const std::string rec = j.value("record", "");
        if (rec == "header") {
            if (j["rays"] != rays_json(ctx)) throw InputError("graph cache was written for a different ray table");
            g.factorized = j["factorized"].get<bool>();
            g.factors.resize(j["facets"].get<std::size_t>());
            by_hash.resize(g.factors.size());
            for (const auto& c : j["flat_nodes"]) g.flat_nodes.push_back(c.get<std::vector<int>>());
            g.flat_nonprojective = j["flat_nonprojective"].get<std::size_t>();
            g.flat_incompatible = j["flat_incompatible"].get<std::size_t>();
        } else if (rec == "facet") {
            auto f = j["facet"].get<std::size_t>();
            if (f >= g.factors.size()) throw InputError("graph cache line " + std::to_string(ln) + ": bad facet");
            auto& F = g.factors[f];
            F.facet = static_cast<int>(f);
            F.mask = ctx.facet_masks()[f];
            F.vertices = ctx.facet_vertices()[f];
            for (int r : ctx.insert_points())
                if (F.mask & (RaySet(1) << r)) F.insert_points.push_back(r);
            F.seed_count = j["seed_count"].get<std::size_t>();
            F.seed_states = j["seed_states"].get<std::size_t>();
            F.circuit_count = j["circuit_count"].get<std::size_t>();
            for (const auto& [k, v] : j["flip_stats"].items()) F.flip_stats[k] = v.get<std::size_t>();
        } else if (rec == "node") {
            auto f = j["facet"].get<std::size_t>();
            if (f >= g.factors.size()) throw InputError("graph cache line " + std::to_string(ln) + ": bad facet");
            auto& F = g.factors[f];
            Tri t = tri_from(j["fan"], ln);
            if (content_hash(tri_json(t)) != j["hash"].get<std::string>())
                throw InputError("graph cache line " + std::to_string(ln) + ": hash mismatch");
            int id = static_cast<int>(F.nodes.size());
            by_hash[f][j["hash"].get<std::string>()] = id;
            F.index.emplace(t, id);
            F.nodes.push_back(t);
            F.seed.push_back(j["seed"].get<bool>());
            for (const auto& e : j["edges"])
                pending.push_back({f, id, circuit_from_json(e["circuit"]), e["to"].get<std::string>(), ln});
        } else {
            throw InputError("graph cache line " + std::to_string(ln) + ": unknown record");
        }
    }
    auto resolve = [&](std::size_t f, const std::string& h, std::size_t l) {
        if (f >= by_hash.size()) throw InputError("graph cache line " + std::to_string(l) + ": bad facet");
        auto it = by_hash[f].find(h);
        if (it == by_hash[f].end()) throw InputError("graph cache line " + std::to_string(l) + ": unknown node " + h);
        return it->second;
    };
    for (auto& p : pending) g.factors[p.facet].edges.push_back({p.from, resolve(p.facet, p.to, p.line), p.circuit});
    return g;
}

}  // namespace toric
