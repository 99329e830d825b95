#include "fixtures.hpp"

#include <doctest.h>

#include <filesystem>

using namespace toric;

namespace {

const Check& find(const Report& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return c;
    throw std::runtime_error("no check " + name);
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("toricnef_" + name)).string();
}

}  // namespace

TEST_SUITE("verifier") {
TEST_CASE("P4 control run") {
    PipelineConfig cfg;
    cfg.instance = "p4";
    auto r = verify_pipeline(cfg);
    CHECK(r.passed());
    CHECK(find(r, "good-fan-closure").detail["good_fans"] == 1);
    CHECK(find(r, "certificate").detail["verdict"] == kNoWitness);
    CHECK(!r.certificate);
    const auto& nef = find(r, "nef-cone").detail["good_fans"][0];
    CHECK(nef["facets"] == 1);
    CHECK(nef["wall_degrees"] == json::array({"5"}));
}

TEST_CASE("P1 x P3 control run") {
    PipelineConfig cfg;
    cfg.instance = "p1xp3";
    auto r = verify_pipeline(cfg);
    CHECK(r.passed());
    CHECK(find(r, "certificate").detail["verdict"] == kNoWitness);
    CHECK(find(r, "trivial-flops").detail["edges_checked"] == 0);
    const auto& nef = find(r, "nef-cone").detail["good_fans"];
    REQUIRE(nef.size() == 1);
    CHECK(nef[0]["facets"] == 2);
    CHECK(nef[0]["wall_degrees"] == json::array({"2", "4"}));
}

TEST_CASE("reports are deterministic and timing is opt-in") {
    PipelineConfig cfg;
    cfg.instance = "p1xp3";
    auto a = canonical_dump(verify_pipeline(cfg).to_json());
    auto b = canonical_dump(verify_pipeline(cfg).to_json());
    CHECK(a == b);
    CHECK(a.find("seconds") == std::string::npos);
    CHECK(verify_pipeline(cfg).to_json(true).dump().find("seconds") != std::string::npos);
}

TEST_CASE("selector requiring an absent tetrahedron") {
    auto st = prepare_instance(quintic_quotient());
    st.inst.required_cones.push_back({"D0", "D1", "P6", "P7"});
    auto out = counterexample_certificate(st, 1000000);
    CHECK(!out.pass);
    CHECK(out.failure == "selector matches no fan");
}

TEST_CASE("tampered graph cache fails the trivial-flop check") {
    auto inst = fixtures::trapezoid_instance();
    auto st = prepare_instance(inst);
    const auto& ctx = *st.ctx;
    auto g = build_good_fan_graph(ctx, GoodFanConfig{});
    Circuit c = *circuit_of(ctx.rays(), {0, 1, 5, 6});
    bool injected = false;
    for (auto& F : g.factors) {
        if (injected || (F.mask >> 5 & 1) == 0) continue;
        for (const auto& S : {c, c.reversed()})
            if (auto lf = apply_local_flip(ctx, F.nodes[0], S)) {
                F.nodes.push_back(lf->result);
                F.seed.push_back(false);
                F.edges.push_back({0, static_cast<int>(F.nodes.size()) - 1, lf->circuit});
                injected = true;
                break;
            }
    }
    REQUIRE(injected);
    auto path = temp_path("tampered.jsonl");
    write_graph_cache(path, ctx, g);
    PipelineConfig cfg;
    cfg.custom = inst;
    cfg.graph_cache = path;
    auto r = verify_pipeline(cfg);
    CHECK(!r.passed());
    const auto& tf = find(r, "trivial-flops");
    CHECK(tf.status == CheckStatus::Fail);
    CHECK(tf.detail.contains("offending_stratum"));
    CHECK(tf.detail["offending_stratum"].size() == 2);
    std::filesystem::remove(path);
}

TEST_CASE("graph cache round trip") {
    auto st = prepare_instance(fixtures::trapezoid_instance());
    auto g = build_good_fan_graph(*st.ctx, GoodFanConfig{});
    auto path = temp_path("graph.jsonl");
    write_graph_cache(path, *st.ctx, g);
    auto h = read_graph_cache(path, *st.ctx);
    CHECK(h.factorized == g.factorized);
    CHECK(h.flat_nodes == g.flat_nodes);
    REQUIRE(h.factors.size() == g.factors.size());
    for (std::size_t i = 0; i < g.factors.size(); ++i) {
        CHECK(h.factors[i].nodes == g.factors[i].nodes);
        CHECK(h.factors[i].seed == g.factors[i].seed);
        CHECK(h.factors[i].edges.size() == g.factors[i].edges.size());
    }
    // a cache for another ray table is refused
    auto other = prepare_instance(p4_instance());
    CHECK_THROWS_AS(read_graph_cache(path, *other.ctx), InputError);
    std::filesystem::remove(path);
}

TEST_CASE("malformed certificates are input errors") {
    CHECK_THROWS_AS(verify_certificate(json::parse(R"({"kind": "report"})")), InputError);
    CHECK_THROWS_AS(verify_certificate(json::parse(R"({"kind": "certificate", "version": "1"})")), InputError);
}

TEST_CASE("custom instances from json") {
    auto inst = instance_from_json(json::parse(R"({"name": "q", "order": "5",
        "weights": [[0, 1, 2, 3, 4], [0, 1, 3, 1, 0]],
        "basis": [[4, -1, -1, -1], [1, -1, 2, 0], [-1, -1, 4, -1], [-1, -1, -1, 4]]})"));
    CHECK(inst.expected_index == 25);
    CHECK(fixtures::as_set(instance_delta(inst).vertices()) == fixtures::as_set(fixtures::delta_vertices()));
    CHECK_THROWS_AS(instance_from_json(json::parse(R"({"name": "q"})")), InputError);
    CHECK_THROWS_AS(instance_from_json(json::parse(R"({"order": "5", "weights": [[0, 1], "x"]})")), InputError);
}
}

TEST_SUITE("io") {
TEST_CASE("json round trips") {
    auto P0 = projective_newton_polytope(4);
    CHECK(polytope_from_json(to_json(P0)) == P0);
    Fan f = p1xp2_fan();
    CHECK(fan_from_json(to_json(f)) == f);
    Circuit c{{0, 2, 3}, {1, 1, -2}};
    CHECK(circuit_from_json(to_json(c)) == c);
    CHECK(rat_from_json(to_json(Rat(-7) / 3), "x") == Rat(-7) / 3);
    CHECK(int_from_json(json(12), "x") == 12);
    CHECK(canonical_dump(to_json(P0)).back() == '\n');
    CHECK(content_hash(to_json(f)).size() == 16);
}

TEST_CASE("errors carry their location") {
    try {
        point_from_json(json::parse(R"([1, "a"])"), "rays[3]");
        FAIL("expected an error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("rays[3]") != std::string::npos);
    }
    CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), InputError);
}
}
