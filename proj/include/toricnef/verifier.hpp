#pragma once

#include "toricnef/goodfans.hpp"
#include "toricnef/instances.hpp"
#include "toricnef/io.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace toric {

enum class CheckStatus { Pass, Fail, NotApplicable };
std::string to_string(CheckStatus s);

struct Check {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    json detail = json::object();
    double seconds = 0;
};

struct Report {
    std::string instance;
    std::vector<Check> checks;
    std::optional<json> certificate;

    bool passed() const;
    json to_json(bool with_timing = false) const;
};

struct PipelineConfig {
    std::string instance = "quintic-quotient";
    std::optional<Instance> custom;
    std::size_t budget = 1000000;
    unsigned jobs = 1;
    std::string graph_cache;  // read if present, written otherwise
};

// Everything computed by the pipeline, kept for callers that want more than the report.
struct PipelineState {
    Instance inst;
    LatticePolytope delta;
    LatticePolytope delta_star;
    std::unique_ptr<GoodFanContext> ctx;
    GoodFanGraph graph;
};

// {"name", "newton": polytope} or {"name", "order", "weights", "basis", "index"}.
Instance instance_from_json(const json& j);

// Context for an instance: Newton polytope, its dual and the labelled ray table.
PipelineState prepare_instance(const Instance& inst);
Report verify_pipeline(const PipelineConfig& cfg, PipelineState* keep = nullptr);

// The certificate is built from the graph and re-verified by verify_certificate.
struct CertificateOutcome {
    bool pass = false;
    std::string failure;
    json certificate;
};

CertificateOutcome counterexample_certificate(const PipelineState& st, std::size_t budget);
// Recomputes every derived field from the recorded inputs without any search.
CertificateOutcome verify_certificate(const json& cert);

// Supported divisorial circuits on good fans whose contraction could restrict
// trivially to the hypersurface; empty for the control instances.
json scan_for_witnesses(const PipelineState& st);

extern const char* const kStrictVerdict;
extern const char* const kNoWitness;

}  // namespace toric
