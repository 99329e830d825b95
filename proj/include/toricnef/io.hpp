#pragma once

#include "toricnef/circuits.hpp"
#include "toricnef/classgroup.hpp"
#include "toricnef/fan.hpp"
#include "toricnef/goodfans.hpp"
#include "toricnef/polytope.hpp"

#include <json.hpp>

#include <string>

namespace toric {

using json = nlohmann::ordered_json;

json to_json(const Int& x);
json to_json(const Rat& x);
json to_json(const Point& p);
json to_json(const RatVector& v);
json to_json(const LatticeMatrix& m);
json to_json(const LatticePolytope& P);
json to_json(const Fan& f);
json to_json(const Circuit& c);
json to_json(const CurveFunctional& c);
json to_json(const DivisorClass& d);

Int int_from_json(const json& j, const std::string& where);
Rat rat_from_json(const json& j, const std::string& where);
Point point_from_json(const json& j, const std::string& where);
RatVector ratvec_from_json(const json& j, const std::string& where);
LatticeMatrix matrix_from_json(const json& j, const std::string& where);
LatticePolytope polytope_from_json(const json& j);
Fan fan_from_json(const json& j);
Circuit circuit_from_json(const json& j);
DivisorClass divisor_class_from_json(const json& j);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Two-space indented dump with a trailing newline.
std::string canonical_dump(const json& j);
// 64-bit FNV-1a of the compact dump, as 16 hex digits.
std::string content_hash(const json& j);

// Graph cache: one JSON record per line, keyed by the content hash of the node.
void write_graph_cache(const std::string& path, const GoodFanContext& ctx, const GoodFanGraph& g);
GoodFanGraph read_graph_cache(const std::string& path, const GoodFanContext& ctx);

}  // namespace toric
