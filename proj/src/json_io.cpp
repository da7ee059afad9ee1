#include "oival/json_io.hpp"

#include <fstream>
#include <sstream>

#include "oival/error.hpp"

namespace oival {

std::string canon_dump(const json& j) { return j.dump(2) + "\n"; }

std::string digest_hex(const json& j) {
  std::string bytes = canon_dump(j);
  u64 h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json verdict_json(const Verdict& v) {
  json j;
  j["outcome"] = outcome_name(v.outcome);
  j["horizon"] = v.horizon;
  j["witnesses"] = v.witnesses;
  j["violations"] = v.violations;
  if (v.outcome == Outcome::fails) j["fail_index"] = v.fail_index;
  return j;
}

json selection_json(const Selection& s) {
  const char* kind = "finite";
  switch (s.kind) {
    case Selection::Kind::one: kind = "one"; break;
    case Selection::Kind::pair: kind = "pair"; break;
    case Selection::Kind::k_bounded: kind = "k_bounded"; break;
    case Selection::Kind::n_plus_one: kind = "n_plus_one"; break;
    case Selection::Kind::finite: kind = "finite"; break;
  }
  json j;
  j["kind"] = kind;
  j["groups"] = s.groups;
  return j;
}

json report_json(const VerifierReport& r) {
  json j;
  j["point_misses"] = r.point_misses;
  j["verdict"] = verdict_json(r.verdict);
  return j;
}

namespace {

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(errc::parse_error, std::string("missing field '") + key + "'");
  return *it;
}

u64 num_field(const json& j, const char* key) {
  const json& f = field(j, key);
  if (!f.is_number_unsigned()) fail(errc::parse_error, std::string("field '") + key + "' must be a nonnegative integer");
  return f.get<u64>();
}

}  // namespace

ClopenSet clopen_from_json(const json& j) {
  if (!j.is_object() || j.size() != 1)
    fail(errc::parse_error, "clopen member must be a single-key object");
  const auto& [key, val] = *j.items().begin();
  if (key == "omitting") return ClopenSet::omitting(val.get<u64>());
  if (key == "requiring") return ClopenSet::requiring(val.get<u64>());
  if (key == "universal") return ClopenSet::universal(val.get<u64>());
  if (key == "union" || key == "intersect") {
    if (!val.is_array() || val.empty())
      fail(errc::parse_error, "'" + key + "' needs a nonempty array");
    ClopenSet acc = clopen_from_json(val[0]);
    for (size_t i = 1; i < val.size(); ++i) {
      ClopenSet next = clopen_from_json(val[i]);
      acc = key == "union" ? acc.union_with(next) : acc.intersect(next);
    }
    return acc;
  }
  fail(errc::parse_error, "unknown clopen key '" + key + "'");
}

Point point_from_json(const json& j) {
  if (j.is_array()) return Point::finite(j.get<std::vector<u64>>());
  if (j.is_string()) return Point::infinite(parse_seq(j.get<std::string>()));
  fail(errc::parse_error, "point must be an element array or a seq-spec string");
}

ScalePrefix prefix_from_json(const json& j) {
  ScalePrefix p;
  p.kind = scale_kind_from_name(field(j, "kind").get<std::string>());
  for (const json& m : field(j, "members"))
    p.members.push_back(parse_seq(m.get<std::string>()));
  return p;
}

Sample sample_from_json(const json& j) {
  Sample s;
  for (const json& p : field(j, "fin_part")) s.fin_part.push_back(point_from_json(p));
  if (j.contains("ordered_part")) s.ordered_part = prefix_from_json(j["ordered_part"]);
  if (j.contains("split_index")) s.split_index = num_field(j, "split_index");
  return s;
}

std::vector<Sample> chain_from_json(const json& j) {
  std::vector<Sample> chain;
  if (j.contains("chain"))
    for (const json& s : j["chain"]) chain.push_back(sample_from_json(s));
  else
    chain.push_back(sample_from_json(j));
  return chain;
}

std::vector<CoverPrefix> covers_from_json(const json& j) {
  const json& list = j.is_array() ? j : field(j, "covers");
  std::vector<CoverPrefix> out;
  for (const json& c : list) {
    CoverPrefix p;
    p.length = num_field(c, "length");
    const json& st = field(c, "stream");
    if (st.is_string() && st.get<std::string>() == "om") {
      p.stream = om_cover();
    } else if (st.is_object()) {
      std::vector<ClopenSet> members;
      for (const json& m : field(st, "members")) members.push_back(clopen_from_json(m));
      bool nfs = st.value("no_finite_subcover", false);
      p.stream = explicit_cover(std::move(members), nfs);
    } else {
      fail(errc::parse_error, "stream must be \"om\" or an explicit member object");
    }
    out.push_back(std::move(p));
  }
  return out;
}

BuildPlanCfg build_plan_from_json(const json& j) {
  BuildPlanCfg cfg;
  cfg.kind = scale_kind_from_name(field(j, "kind").get<std::string>());
  const json& oj = field(j, "oracle");
  std::string role = field(oj, "role").get<std::string>();
  if (role == "dominating")
    cfg.oracle.role = OracleFamily::Role::dominating;
  else if (role == "unbounded")
    cfg.oracle.role = OracleFamily::Role::unbounded;
  else
    fail(errc::parse_error, "oracle role must be dominating or unbounded");
  for (const json& m : field(oj, "members"))
    cfg.oracle.members.push_back(parse_seq(m.get<std::string>()));
  cfg.steps = num_field(j, "steps");
  cfg.horizon = j.value("horizon", cfg.horizon);
  cfg.rounds = j.value("rounds", cfg.rounds);
  return cfg;
}

RefinePlan refine_plan_from_json(const json& j) {
  if (j.contains("plan")) {
    std::string name = j["plan"].get<std::string>();
    ScalePrefix base = prefix_from_json(field(j, "base"));
    u64 k = j.value("k", u64(2));
    u64 horizon = j.value("horizon", u64(1000));
    return theorem_plan(name, std::move(base), k, horizon);
  }
  RefinePlan p;
  std::string embed = field(j, "embed").get<std::string>();
  if (embed == "kun")
    p.embed = RefinePlan::Embed::kun;
  else if (embed == "sparse")
    p.embed = RefinePlan::Embed::sparse;
  else if (embed == "perturb")
    p.embed = RefinePlan::Embed::perturb;
  else
    fail(errc::parse_error, "embed must be kun, sparse, or perturb");
  std::string growth = j.value("partition", std::string("linear"));
  if (growth != "linear" && growth != "doubling")
    fail(errc::parse_error, "partition must be linear or doubling");
  BlockPartition part =
      default_partition(growth == "linear" ? BlockGrowth::linear : BlockGrowth::doubling);
  p.selector = BlockSelector{std::move(part), j.value("width", u64(1)), 0, {}};
  p.base = prefix_from_json(field(j, "base"));
  p.k = j.value("k", u64(1));
  if (j.contains("relation")) {
    std::string rel = j["relation"].get<std::string>();
    std::optional<Rel> r = rel_from_name(rel);
    if (!r) fail(errc::parse_error, "unknown relation '" + rel + "'");
    p.relation = *r;
  }
  p.horizon = j.value("horizon", p.horizon);
  return p;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::parse_error, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(errc::parse_error, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::parse_error, "cannot write " + path);
  out << bytes;
}

}  // namespace oival
