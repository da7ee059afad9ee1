#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <string>

#include "oival/construct.hpp"
#include "oival/error.hpp"
#include "oival/hitting.hpp"
#include "oival/json_io.hpp"
#include "oival/select.hpp"
#include "oival/suites.hpp"

#ifndef OIVAL_DEFAULT_FIXTURES
#define OIVAL_DEFAULT_FIXTURES "fixtures"
#endif

namespace oival {
namespace {

void emit(const json& trace, const std::string& out_path) {
  std::string bytes = canon_dump(trace);
  if (out_path.empty())
    std::cout << bytes;
  else
    write_text_file(out_path, bytes);
}

json verdict_list(const std::vector<Verdict>& vs) {
  json arr = json::array();
  for (const Verdict& v : vs) arr.push_back(verdict_json(v));
  return arr;
}

json spec_list(const std::vector<IncSeq>& seqs) {
  json arr = json::array();
  for (const IncSeq& s : seqs) arr.push_back(s.to_spec());
  return arr;
}

int run_verify(const std::string& suite, RunConfig cfg, const std::string& out_path) {
  if (!std::getenv("OIVAL_FIXTURES")) cfg.fixtures = OIVAL_DEFAULT_FIXTURES;
  SuiteResult r = run_suite(suite, cfg);
  std::cout << "suite " << r.name << ": " << r.checks << " checks, "
            << r.failures.size() << " failures\n";
  for (const std::string& f : r.failures) std::cout << "  " << f << "\n";
  if (!out_path.empty()) {
    json config = {{"seed", cfg.seed}, {"horizon", cfg.horizon}, {"rounds", cfg.rounds}};
    json trace;
    trace["command"] = "verify";
    trace["suite"] = r.name;
    trace["config"] = config;
    trace["inputs_digest"] = digest_hex(json{{"suite", r.name}, {"config", config}});
    trace["checks"] = r.checks;
    trace["failures"] = r.failures;
    trace["passed"] = r.passed();
    emit(trace, out_path);
  }
  return r.passed() ? 0 : 1;
}

const char* certify(const VerifierReport& rep, bool gamma) {
  switch (rep.verdict.outcome) {
    case Outcome::holds: return gamma ? "gamma-certified" : "cover-certified";
    case Outcome::fails: return "failed";
    case Outcome::unknown: return "unknown";
  }
  return "unknown";
}

int run_demo(const std::string& procedure, const std::string& sample_path,
             const std::string& covers_path, u64 seed, u64 horizon, u64 rounds,
             const std::string& out_path) {
  json sample_raw = load_json_file(sample_path);
  json covers_raw = load_json_file(covers_path);
  std::vector<CoverPrefix> covers = covers_from_json(covers_raw);

  u64 N = rounds;
  if (N == 0) N = procedure == "tower" ? 8 : procedure == "crown" ? 9 : 6;

  json trace;
  trace["command"] = "demo";
  trace["procedure"] = procedure;
  trace["config"] = {{"seed", seed}, {"horizon", horizon}, {"rounds", N}};
  json inputs = {{"sample", sample_raw}, {"covers", covers_raw}};
  trace["inputs"] = inputs;
  trace["inputs_digest"] = digest_hex(inputs);

  auto gms = [&](u64 k) {
    std::vector<GmExtraction> out;
    for (const CoverPrefix& c : covers) out.push_back(gm_extract(c.stream, k, N));
    return out;
  };

  if (procedure == "two-pass") {
    Sample s = sample_from_json(sample_raw);
    check_sample(s);
    TwoPassResult r = menger_two_pass(covers, s);
    trace["selections"] = selection_json(r.sel);
    trace["first_pass"] = r.first_pass;
    trace["second_pass"] = r.second_pass;
    trace["report"] = report_json(r.report);
    trace["verdict"] = certify(r.report, false);
  } else if (procedure == "bs" || procedure == "uid") {
    Sample s = sample_from_json(sample_raw);
    check_sample(s);
    auto g = gms(0);
    ScaleSelection r =
        procedure == "bs" ? bs_select(covers, s, g) : uid_select(covers, s, g);
    trace["selections"] = selection_json(r.sel);
    trace["alpha"] = r.alpha;
    trace["witness"] = r.witness;
    trace["g"] = r.g;
    trace["report"] = report_json(r.report);
    trace["verdict"] = certify(r.report, true);
  } else if (procedure == "utgg") {
    Sample s = sample_from_json(sample_raw);
    check_sample(s);
    PairSelection r = utgg_select(covers, s, gms(1));
    trace["selections"] = selection_json(r.sel);
    trace["alpha"] = r.alpha;
    trace["b"] = r.b;
    trace["c"] = r.c;
    trace["witness"] = r.witness;
    trace["g"] = r.g;
    trace["duplicate_pair"] = r.duplicate_pair;
    trace["report"] = report_json(r.report);
    trace["verdict"] = certify(r.report, true);
  } else if (procedure == "tower") {
    Sample s = sample_from_json(sample_raw);
    check_sample(s);
    TowerSelection r = tower_select(covers, s, gms(0));
    trace["selections"] = selection_json(r.sel);
    trace["omitted"] = r.omitted;
    trace["g"] = r.g;
    trace["report"] = report_json(r.report);
    trace["verdict"] = certify(r.report, true);
  } else if (procedure == "jordan") {
    std::vector<Sample> chain = chain_from_json(sample_raw);
    for (const Sample& s : chain) check_sample(s);
    DiagonalSelection r = jordan_diagonal(chain, covers);
    trace["selections"] = selection_json(r.sel);
    trace["stage_gamma"] = verdict_list(r.stage_gamma);
    trace["report"] = report_json(r.report);
    trace["verdict"] = certify(r.report, true);
  } else if (procedure == "crown") {
    Sample s = sample_from_json(sample_raw);
    check_sample(s);
    std::vector<CoverStream> streams;
    for (const CoverPrefix& c : covers) streams.push_back(c.stream);
    CrownResult r = crown_run(s, streams, N);
    trace["selections"] = selection_json(r.sel);
    trace["splits"] = r.splits;
    json rounds_out = json::array();
    for (const CrownRound& round : r.rounds) {
      rounds_out.push_back({{"split", round.split},
                            {"members", round.gm.members},
                            {"omitted", round.omitted},
                            {"family", round.family},
                            {"small_gamma", verdict_json(round.small_gamma)},
                            {"deep_gamma", verdict_json(round.deep_gamma)}});
    }
    trace["rounds"] = rounds_out;
    trace["report"] = report_json(r.report);
    trace["verdict"] = certify(r.report, true);
  } else {
    fail(errc::parse_error, "unknown procedure '" + procedure + "'");
  }

  emit(trace, out_path);
  return trace["verdict"] == "failed" ? 1 : 0;
}

int run_construct(const std::string& plan_path, const std::string& out_path) {
  json plan_raw = load_json_file(plan_path);
  json trace;
  trace["command"] = "construct";
  trace["plan"] = plan_raw;
  trace["inputs_digest"] = digest_hex(plan_raw);

  bool all_ok = true;
  if (plan_raw.contains("embed") || plan_raw.contains("plan")) {
    RefinePlan plan = refine_plan_from_json(plan_raw);
    RefineResult r = run_refine_plan(plan);
    trace["mode"] = "refine";
    trace["kind"] = scale_kind_name(r.refined.kind);
    trace["members"] = spec_list(r.refined.members);
    trace["index_streams"] = spec_list(r.index_streams);
    trace["certificates"] = verdict_list(r.certs);
    trace["counting"] = verdict_list(r.counting);
    trace["refinement"] = verdict_list(r.refinement);
    for (const Verdict& v : r.certs) all_ok = all_ok && v.ok();
    for (const Verdict& v : r.counting) all_ok = all_ok && v.ok();
    for (const Verdict& v : r.refinement) all_ok = all_ok && v.ok();
  } else {
    BuildPlanCfg cfg = build_plan_from_json(plan_raw);
    check_oracle(cfg.oracle);
    BuildResult r = build_prefix(cfg.kind, cfg.oracle, cfg.steps, cfg.horizon, cfg.rounds);
    trace["mode"] = "build";
    trace["kind"] = scale_kind_name(r.prefix.kind);
    trace["members"] = spec_list(r.prefix.members);
    trace["complements"] = spec_list(r.complements);
    trace["checks"] = verdict_list(r.checks);
    for (const Verdict& v : r.checks) all_ok = all_ok && v.ok();
  }

  emit(trace, out_path);
  return all_ok ? 0 : 1;
}

int run_rel(const std::string& rel, const std::string& spec_a, const std::string& spec_b,
            u64 horizon) {
  std::optional<Rel> r = rel_from_name(rel);
  if (!r) fail(errc::parse_error, "unknown relation '" + rel + "'");
  IncSeq a = parse_seq(spec_a);
  IncSeq b = parse_seq(spec_b);
  Verdict v = relate(*r, a, b, horizon);
  auto list_indices = [](const std::vector<u64>& xs) {
    std::string out;
    for (size_t i = 0; i < xs.size() && i < 20; ++i)
      out += (i ? ", " : "") + std::to_string(xs[i]);
    if (xs.size() > 20) out += ", ...";
    return out;
  };
  switch (v.outcome) {
    case Outcome::holds:
      std::cout << "Holds at horizon " << v.horizon << " (" << v.witnesses.size()
                << " witnesses)\n";
      return 0;
    case Outcome::fails: {
      std::cout << "Fails at index " << v.fail_index << " (horizon " << v.horizon
                << ")\n";
      if (!v.violations.empty()) {
        std::cout << "violating indices: " << list_indices(v.violations) << "\n";
        std::vector<u64> elems;
        for (size_t i = 0; i < v.violations.size() && i < 20; ++i)
          elems.push_back(a.nth(v.violations[i]));
        std::cout << "violating elements of the left stream: " << list_indices(elems)
                  << "\n";
      }
      return 1;
    }
    case Outcome::unknown:
      std::cout << "Unknown at horizon " << v.horizon << "\n";
      if (!v.violations.empty())
        std::cout << "violating indices: " << list_indices(v.violations) << "\n";
      return 1;
  }
  return 1;
}

}  // namespace
}  // namespace oival

int main(int argc, char** argv) {
  using namespace oival;
  CLI::App app{"interval-omission workbench"};
  app.require_subcommand(1);

  std::string suite, procedure, sample_path, covers_path, plan_path, out_path;
  std::string rel, spec_a, spec_b;
  u64 seed = 1, horizon = 0, rounds = 0, rel_horizon = 1000;

  CLI::App* verify = app.add_subcommand("verify", "run a named invariant suite");
  verify->add_option("--suite", suite, "suite name")->required();
  verify->add_option("--seed", seed, "rng seed");
  verify->add_option("--horizon", horizon, "evaluation horizon (0 = suite default)");
  verify->add_option("--rounds", rounds, "iteration count (0 = suite default)");
  verify->add_option("--out", out_path, "write the JSON report here");

  CLI::App* demo = app.add_subcommand("demo", "drive a selection procedure");
  demo->add_option("--procedure", procedure, "two-pass|bs|uid|utgg|tower|jordan|crown")
      ->required();
  demo->add_option("--sample", sample_path, "sample or chain file")->required();
  demo->add_option("--covers", covers_path, "cover prefixes file")->required();
  demo->add_option("--seed", seed, "rng seed");
  demo->add_option("--horizon", horizon, "evaluation horizon");
  demo->add_option("--rounds", rounds, "extraction rounds (0 = per-procedure default)");
  demo->add_option("--out", out_path, "write the JSON trace here (default stdout)");

  CLI::App* construct = app.add_subcommand("construct", "run a build or refine plan");
  construct->add_option("--plan", plan_path, "plan file")->required();
  construct->add_option("--out", out_path, "write the JSON trace here (default stdout)");

  CLI::App* relcmd = app.add_subcommand("rel", "evaluate a stream relation");
  relcmd->add_option("rel", rel, "le|le_star|le_inf|sqe|subs")->required();
  relcmd->add_option("a", spec_a, "left seq-spec")->required();
  relcmd->add_option("b", spec_b, "right seq-spec")->required();
  relcmd->add_option("--horizon", rel_horizon, "evaluation horizon");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed())
      return run_verify(suite, RunConfig{seed, horizon, rounds, ""}, out_path);
    if (demo->parsed())
      return run_demo(procedure, sample_path, covers_path, seed, horizon, rounds,
                      out_path);
    if (construct->parsed()) return run_construct(plan_path, out_path);
    if (relcmd->parsed()) return run_rel(rel, spec_a, spec_b, rel_horizon);
  } catch (const error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == errc::parse_error || e.code() == errc::unknown_suite ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
