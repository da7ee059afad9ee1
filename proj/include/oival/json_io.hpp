#pragma once

#include <json.hpp>
#include <string>

#include "oival/construct.hpp"
#include "oival/cover.hpp"
#include "oival/hitting.hpp"
#include "oival/select.hpp"

namespace oival {

// std::map-backed, so object keys serialize sorted.
using json = nlohmann::json;

// Canonical byte form: two-space indent, LF separators, trailing newline.
std::string canon_dump(const json& j);

// FNV-1a 64 over the canonical byte form, as fixed-width hex.
std::string digest_hex(const json& j);

json verdict_json(const Verdict& v);
json selection_json(const Selection& s);
json report_json(const VerifierReport& r);

// File schemas.  Streams are seq-specs; clopen members are {"omitting": m},
// {"requiring": m}, {"universal": depth}, or {"union"| "intersect": [...]}.
ClopenSet clopen_from_json(const json& j);
Point point_from_json(const json& j);
ScalePrefix prefix_from_json(const json& j);
Sample sample_from_json(const json& j);
std::vector<Sample> chain_from_json(const json& j);  // accepts a single sample too
std::vector<CoverPrefix> covers_from_json(const json& j);

// Staged-construction plan: an oracle family plus step/horizon/round counts.
struct BuildPlanCfg {
  ScalePrefix::Kind kind = ScalePrefix::Kind::le_star_scale;
  OracleFamily oracle;
  u64 steps = 1;
  u64 horizon = 10000;
  u64 rounds = 4;
};
BuildPlanCfg build_plan_from_json(const json& j);

// Either the named form {"plan": ..., "base": ..., "k", "horizon"} or the
// explicit form {"embed", "partition", "width", "base", "k", "relation",
// "horizon"}.
RefinePlan refine_plan_from_json(const json& j);

json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& bytes);

}  // namespace oival
