#include "oival/suites.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <set>
#include <utility>

#include "oival/construct.hpp"
#include "oival/cover.hpp"
#include "oival/error.hpp"
#include "oival/hitting.hpp"
#include "oival/interval.hpp"
#include "oival/json_io.hpp"
#include "oival/rng.hpp"
#include "oival/select.hpp"

namespace oival {

namespace {

constexpr u64 kMaxListedFailures = 25;
constexpr u64 kSplitWitnesses = 50;     // splitter: per-side le_inf evidence
constexpr u64 kDominatorWitnesses = 25; // dominator: per-member le_inf evidence
constexpr u64 kMissBudget = 2;          // selectors: per-point verifier misses
constexpr u64 kGuardBound = 200;        // hitting: guard values stay inside this
constexpr u64 kGreedyLength = 48;       // defeater: blocks handed to the greedy pick
constexpr u64 kDefeatThreshold = 20;    // defeater: hits required to defeat
constexpr u64 kCantorBound = 64;        // defeater: per-row truncation
constexpr u64 kReclawRows = 12;
constexpr u64 kWindowBudget = 26;       // gm: widest window enumerated exhaustively

struct Score {
  SuiteResult out;
  u64 dropped = 0;

  explicit Score(std::string name) { out.name = std::move(name); }

  void pass() { ++out.checks; }
  void bulk(u64 n) { out.checks += n; }
  void fail(std::string what) {
    ++out.checks;
    if (out.failures.size() < kMaxListedFailures)
      out.failures.push_back(std::move(what));
    else
      ++dropped;
  }
  void check(bool ok, std::string what) {
    if (ok)
      pass();
    else
      fail(std::move(what));
  }
  SuiteResult done() {
    if (dropped) out.failures.push_back("... and " + std::to_string(dropped) + " more");
    return std::move(out);
  }
};

std::string num(u64 v) { return std::to_string(v); }

std::string fx(const RunConfig& cfg, const char* file) {
  return fixtures_dir(cfg) + "/" + file;
}

IncSeq seeded_stream(Rng& r, bool ensure_gap) {
  EventuallyArithOpts o;
  o.ensure_gap = ensure_gap;
  return random_eventually_arith(r, o);
}

void tilde_suite(Score& sc, u64 seed, u64 horizon, u64 rounds) {
  Rng root(seed);
  for (u64 i = 1; i <= rounds; ++i) {
    Rng r = root.fork(i);
    IncSeq y = seeded_stream(r, true);
    IncSeq ty = tilde(y);
    SeqCursor cur = ty.cursor();
    u64 prev = 0, v = 0;
    bool good = true;
    std::string why;
    // the accelerated stream outruns the value cap; the cursor end is the
    // reachable horizon
    for (u64 n = 1; n <= horizon && cur.next(v); ++n) {
      if (v <= prev || y.nth(n) > v) {
        good = false;
        why = "y=" + y.to_spec() + " breaks at n=" + num(n);
        break;
      }
      prev = v;
    }
    sc.check(good, std::move(why));
  }
}

void omit0_suite(Score& sc, u64 seed, u64 horizon, u64 rounds) {
  Rng root(seed);
  for (u64 i = 1; i <= rounds; ++i) {
    Rng r = root.fork(i);
    IncSeq x = seeded_stream(r, true);
    IncSeq y = seeded_stream(r, false);
    Verdict v = omit0_check(Point::infinite(x), y, horizon);
    sc.check(v.ok(), "x=" + x.to_spec() + " y=" + y.to_spec() + " -> " +
                         outcome_name(v.outcome));
  }
}

void splitter_suite(Score& sc, u64 seed, u64 horizon, u64 rounds) {
  Rng root(seed);
  for (u64 i = 1; i <= rounds; ++i) {
    Rng r = root.fork(i);
    IncSeq g = seeded_stream(r, true);
    Split s = split_by_g(g, horizon);
    sc.check(s.wa.ok() && s.wa.witnesses.size() >= kSplitWitnesses,
             "g=" + g.to_spec() + " side a holds only " + num(s.wa.witnesses.size()) +
                 " witnesses");
    sc.check(s.wac.ok() && s.wac.witnesses.size() >= kSplitWitnesses,
             "g=" + g.to_spec() + " complement side holds only " +
                 num(s.wac.witnesses.size()) + " witnesses");
    std::vector<unsigned char> hits(horizon + 1, 0);
    for (u64 v : s.a.elements_below(horizon)) ++hits[v];
    for (u64 v : s.a_compl.elements_below(horizon)) ++hits[v];
    u64 bad = 0;
    for (u64 k = 1; k <= horizon; ++k)
      if (hits[k] != 1) {
        bad = k;
        break;
      }
    sc.check(bad == 0, "g=" + g.to_spec() + " tiling breaks at " + num(bad));
  }
}

void dominator_suite(Score& sc, u64 seed, u64 horizon, u64 rounds) {
  Rng root(seed);
  for (u64 i = 1; i <= rounds; ++i) {
    Rng r = root.fork(i);
    u64 m = 1 + r.below(8);
    std::vector<IncSeq> Y;
    for (u64 j = 0; j < m; ++j) {
      // step-1 tails keep the accelerated stream linear; faster tails starve
      // the quotient prefixes
      EventuallyArithOpts o;
      o.step_max = 1;
      Y.push_back(random_eventually_arith(r, o));
    }
    IncSeq a = seeded_stream(r, true);
    DominatorResult d = interval_union_dominator(Y, a, 1, horizon);
    for (u64 j = 0; j < m; ++j) {
      const Verdict& v = d.member_verdicts[j];
      sc.check(v.ok() && v.witnesses.size() >= kDominatorWitnesses,
               "a=" + a.to_spec() + " y=" + Y[j].to_spec() + " holds only " +
                   num(v.witnesses.size()) + " witnesses");
    }
  }
}

void gm_structure(Score& sc, const GmExtraction& g, u64 k, u64 N) {
  std::string tag = "k=" + num(k);
  sc.check(!g.a.empty() && g.a.front() == 1, tag + ": first modulus is not 1");
  sc.check(g.a.size() == (k + 1) * N + 1, tag + ": modulus count " + num(g.a.size()));
  sc.check(g.b.size() == N + 1, tag + ": block count " + num(g.b.size()));
  std::set<u64> uniq(g.members.begin(), g.members.end());
  sc.check(g.members.size() == (k + 1) * N && uniq.size() == g.members.size(),
           tag + ": members not distinct");
  bool rows = g.groups.size() == N;
  for (const auto& grp : g.groups) rows = rows && grp.size() == k + 1;
  sc.check(rows, tag + ": group shape");
}

void gm_suite(Score& sc, u64 cap, u64 N) {
  // k = 0: one global pass over every trace on [1, a(N+1)]
  GmExtraction g0 = gm_extract(om_cover(), 0, N);
  gm_structure(sc, g0, 0, N);
  u64 B = g0.a.back();
  sc.check(B <= cap, "k=0: top modulus " + num(B) + " exceeds " + num(cap));
  if (B <= cap && B < 63) {
    std::vector<u64> window(N), conclusion(N);
    for (u64 n = 1; n <= N; ++n) {
      for (u64 v = g0.a[n - 1] + 1; v < g0.a[n]; ++v) window[n - 1] |= u64(1) << (v - 1);
      for (u64 m : g0.groups[n - 1]) conclusion[n - 1] |= u64(1) << (m - 1);
    }
    u64 bad_mask = 0, bad_n = 0;
    for (u64 x = 0; x < (u64(1) << B) && !bad_n; ++x)
      for (u64 n = 1; n <= N; ++n)
        // omission of the open modulus window forces a group member to miss x
        if ((x & window[n - 1]) == 0 && (x & conclusion[n - 1]) == conclusion[n - 1]) {
          bad_mask = x;
          bad_n = n;
          break;
        }
    sc.bulk(N << B);
    if (bad_n) sc.fail("k=0: trace " + num(bad_mask) + " defeats round " + num(bad_n));
  }

  for (u64 k = 1; k <= 3; ++k) {
    GmExtraction g = gm_extract(om_cover(), k, N);
    gm_structure(sc, g, k, N);
    for (u64 n = 1; n <= N; ++n) {
      u64 lo = g.b[n - 1], hi = g.b[n];
      u64 w = hi - lo - 1;
      std::string tag = "k=" + num(k) + " n=" + num(n);
      if (w > kWindowBudget) {
        sc.fail(tag + ": window width " + num(w) + " beyond the enumeration budget");
        continue;
      }
      bool inside = true;
      for (u64 m : g.groups[n - 1]) inside = inside && lo < m && m < hi;
      // membership of the chosen members and the size hypothesis both read
      // only bits strictly inside the block, so enumerating the window
      // contents covers every trace
      sc.check(inside, tag + ": group member outside its block");
      if (!inside) continue;
      u64 bad = 0;
      bool found_bad = false;
      for (u64 sub = 0; sub < (u64(1) << w); ++sub) {
        if (std::popcount(sub) > int(k)) continue;
        bool covered = false;
        for (u64 m : g.groups[n - 1])
          if (((sub >> (m - lo - 1)) & 1) == 0) {
            covered = true;
            break;
          }
        if (!covered) {
          bad = sub;
          found_bad = true;
          break;
        }
      }
      sc.bulk(u64(1) << w);
      if (found_bad) sc.fail(tag + ": window trace " + num(bad) + " escapes the group");
    }
  }
}

std::vector<GmExtraction> gms_for(const std::vector<CoverPrefix>& covers, u64 k, u64 N) {
  std::vector<GmExtraction> out;
  for (const CoverPrefix& c : covers) out.push_back(gm_extract(c.stream, k, N));
  return out;
}

void report_checks(Score& sc, const VerifierReport& rep, const std::string& tag) {
  sc.check(rep.verdict.ok(),
           tag + ": verifier verdict " + outcome_name(rep.verdict.outcome));
  for (size_t p = 0; p < rep.point_misses.size(); ++p)
    sc.check(rep.point_misses[p].size() <= kMissBudget,
             tag + ": point " + num(p + 1) + " misses " +
                 num(rep.point_misses[p].size()) + " covers");
}

void scale_suite(Score& sc, const RunConfig& cfg, u64 N, bool pinned) {
  const std::string tag = pinned ? "uid" : "bs";
  Sample sample = sample_from_json(load_json_file(fx(cfg, "scale_sample.json")));
  check_sample(sample);
  auto covers = covers_from_json(load_json_file(fx(cfg, "covers_four.json")));
  auto gms = gms_for(covers, 0, N);
  ScaleSelection r =
      pinned ? uid_select(covers, sample, gms) : bs_select(covers, sample, gms);
  report_checks(sc, r.report, tag);
  std::set<u64> I(r.witness.begin(), r.witness.end());
  for (size_t n0 = 0; n0 < r.sel.groups.size(); ++n0) {
    u64 n = n0 + 1;
    const auto& grp = r.sel.groups[n0];
    if (!I.count(n)) {
      sc.check(grp.empty(), tag + ": off-witness group " + num(n) + " not empty");
      continue;
    }
    if (pinned) {
      sc.check(grp.size() <= n + 1,
               tag + ": group " + num(n) + " holds " + num(grp.size()) + " members");
    } else {
      // the single small-part pick rides along with the n interval members
      bool small = std::find(grp.begin(), grp.end(), r.g[n0]) != grp.end();
      u64 tail = grp.size() - (small ? 1 : 0);
      sc.check(tail <= n && grp.size() <= n + 1,
               tag + ": group " + num(n) + " holds " + num(tail) + " interval members");
    }
  }
}

void utgg_suite(Score& sc, const RunConfig& cfg, u64 N) {
  Sample sample = sample_from_json(load_json_file(fx(cfg, "pair_sample.json")));
  check_sample(sample);
  auto covers = covers_from_json(load_json_file(fx(cfg, "covers_pair.json")));
  auto gms = gms_for(covers, 1, N);
  PairSelection r = utgg_select(covers, sample, gms);
  report_checks(sc, r.report, "utgg");
  for (size_t n = 0; n < r.sel.groups.size(); ++n)
    sc.check(r.sel.groups[n].size() == 2,
             "utgg: group " + num(n + 1) + " holds " + num(r.sel.groups[n].size()));
}

void tower_suite(Score& sc, const RunConfig& cfg, u64 N) {
  Sample sample = sample_from_json(load_json_file(fx(cfg, "tower_sample.json")));
  check_sample(sample);
  auto covers = covers_from_json(load_json_file(fx(cfg, "covers_tower.json")));
  auto gms = gms_for(covers, 0, N);
  TowerSelection r = tower_select(covers, sample, gms);
  report_checks(sc, r.report, "tower");
  for (size_t n = 0; n < r.sel.groups.size(); ++n)
    sc.check(r.sel.groups[n].size() == 1,
             "tower: group " + num(n + 1) + " holds " + num(r.sel.groups[n].size()));
}

void jordan_suite(Score& sc, const RunConfig& cfg) {
  std::vector<Sample> chain = chain_from_json(load_json_file(fx(cfg, "jordan_chain.json")));
  for (const Sample& s : chain) check_sample(s);
  auto covers = covers_from_json(load_json_file(fx(cfg, "covers_jordan.json")));
  DiagonalSelection r = jordan_diagonal(chain, covers);
  report_checks(sc, r.report, "jordan");
  for (size_t n = 0; n < r.sel.groups.size(); ++n)
    sc.check(r.sel.groups[n].size() == 1,
             "jordan: group " + num(n + 1) + " holds " + num(r.sel.groups[n].size()));
  for (size_t st = 0; st < r.stage_gamma.size(); ++st)
    sc.check(r.stage_gamma[st].ok(), "jordan: stage " + num(st + 1) + " union not "
                                     "point-cofinite");
}

void crown_suite(Score& sc, const RunConfig& cfg, u64 gm_rounds) {
  Sample sample = sample_from_json(load_json_file(fx(cfg, "crown_sample.json")));
  check_sample(sample);
  auto covers = covers_from_json(load_json_file(fx(cfg, "covers_jordan.json")));
  std::vector<CoverStream> streams;
  for (const CoverPrefix& p : covers) streams.push_back(p.stream);
  CrownResult r = crown_run(sample, streams, gm_rounds);
  report_checks(sc, r.report, "crown");
  for (size_t n = 0; n < r.sel.groups.size(); ++n)
    sc.check(r.sel.groups[n].size() == 1,
             "crown: group " + num(n + 1) + " holds " + num(r.sel.groups[n].size()));
  for (size_t n = 0; n < r.rounds.size(); ++n) {
    sc.check(r.rounds[n].small_gamma.ok(), "crown: round " + num(n + 1) + " small part");
    sc.check(r.rounds[n].deep_gamma.ok(), "crown: round " + num(n + 1) + " deep part");
  }
}

// Direct reading of the guard promise, independent of guard_check: each open
// c-interval untouched by s must hold an open a-interval untouched by the
// perturbed union.
bool guard_holds_direct(const GuardResult& gd, const BlockSelector& g, const IncSeq& a,
                        const IncSeq& s) {
  IncSeq b = perturb(s, g);
  for (size_t n = 0; n + 1 < gd.c.size(); ++n) {
    u64 lo = gd.c[n], hi = gd.c[n + 1];
    if (s.rank(hi - 1) - s.rank(lo) != 0) continue;
    bool free_found = false;
    for (u64 j = a.rank(lo - 1) + 1; a.nth(j + 1) <= hi && !free_found; ++j) {
      bool free = true;
      for (u64 v = a.nth(j) + 1; v < a.nth(j + 1) && free; ++v) free = !b.contains(v);
      free_found = free;
    }
    if (!free_found) return false;
  }
  return true;
}

void hitting_suite(Score& sc, u64 seed, u64 horizon, u64 rounds) {
  BlockSelector width1{BlockPartition(), 1, 0, {}};
  BlockSelector width2{BlockPartition(IncSeq::arithmetic(1, 2)), 2, 0, {}};
  BlockSelector width3{BlockPartition(IncSeq::arithmetic(1, 3)), 3, 0, {}};

  KunEmbed k1 = kun_embed(1, width1, IncSeq::arithmetic(2, 2), horizon);
  sc.check(k1.le.ok(), "kun k=1: pointwise bound " + std::string(outcome_name(k1.le.outcome)));
  sc.check(k1.counting.ok(), "kun k=1: counting bound");
  KunEmbed k2 = kun_embed(2, width2, IncSeq::arithmetic(2, 2), horizon);
  sc.check(k2.le.ok(), "kun k=2: pointwise bound");
  sc.check(k2.counting.ok(), "kun k=2: counting bound");

  SparseEmbed s1 = sparse_embed(IncSeq::arithmetic(10, 10), 1, width1, horizon);
  sc.check(s1.window.ok(), "sparse k=1: window bound");
  SparseEmbed s3 = sparse_embed(IncSeq::arithmetic(5, 5), 3, width3, horizon);
  sc.check(s3.window.ok(), "sparse k=3: window bound");

  IncSeq a = IncSeq::arithmetic(2, 2);
  GuardResult gd = perturbation_guard(width1, a, 5);
  sc.check(!gd.c.empty() && gd.c.back() <= kGuardBound,
           "guard: values escape [1," + num(kGuardBound) + "]");
  Rng root(seed);
  for (u64 i = 1; i <= rounds; ++i) {
    Rng r = root.fork(i);
    IncSeq s = i % 4 == 0 ? IncSeq::geometric(r.range(2, 12), r.range(2, 6))
                          : seeded_stream(r, true);
    Verdict v = guard_check(gd, width1, a, s);
    bool direct = guard_holds_direct(gd, width1, a, s);
    sc.check(v.ok() && direct, "guard: s=" + s.to_spec() + " verdict=" +
                                   outcome_name(v.outcome) +
                                   (direct ? "" : " direct-scan disagrees"));
  }
}

void defeater_suite(Score& sc, const RunConfig& cfg, u64 seed, u64 rounds) {
  for (const char* file : {"plan_u2nots1.json", "plan_uidnotuk.json"}) {
    std::string tag(file);
    RefinePlan plan = refine_plan_from_json(load_json_file(fx(cfg, file)));
    RefineResult rr = run_refine_plan(plan);
    for (size_t m = 0; m < rr.certs.size(); ++m)
      sc.check(rr.certs[m].ok(), tag + ": embed certificate " + num(m + 1));
    for (size_t m = 0; m < rr.counting.size(); ++m)
      sc.check(rr.counting[m].ok(), tag + ": counting certificate " + num(m + 1));
    for (size_t m = 0; m < rr.refinement.size(); ++m)
      sc.check(rr.refinement[m].ok(), tag + ": relation certificate " + num(m + 1));

    std::vector<std::vector<u64>> greedy = greedy_groups(plan.selector, kGreedyLength);
    std::vector<std::pair<Point, BlockSelector>> pts;
    for (const IncSeq& m : rr.refined.members)
      pts.emplace_back(Point::infinite(m), plan.selector);
    DefeatReport rep =
        defeat_gamma_selection(plan.selector.part, pts, greedy, kDefeatThreshold);
    sc.check(rep.defeated && rep.failures.size() >= kDefeatThreshold,
             tag + ": greedy selection survives, hits=" + num(rep.failures.size()));
  }

  std::vector<Point> xs = {
      Point::infinite(IncSeq::power(2)),
      Point::infinite(IncSeq::power(3)),
      Point::infinite(IncSeq::arithmetic(3, 7)),
      Point::infinite(IncSeq::triangular()),
      Point::infinite(IncSeq::with_prefix({1, 5}, 9, 4)),
      Point::infinite(IncSeq::geometric(3, 3)),
  };
  Rng r = Rng(seed).fork(977);
  std::vector<u64> sels;
  for (u64 i = 0; i < rounds; ++i) sels.push_back(1 + r.below(xs.size()));
  CantorDiagonal cd = cantor_defeater(xs, sels, kCantorBound);
  sc.check(cd.mismatches.empty(),
           "diagonal: " + num(cd.mismatches.size()) + " rows fail to decode");
  sc.check(cd.selected == sels && cd.rows.size() == sels.size(), "diagonal bookkeeping");
}

void reclaw_suite(Score& sc, u64 seed, u64 rounds) {
  std::vector<std::vector<ClopenSet>> rows;
  for (u64 n = 1; n <= kReclawRows; ++n)
    rows.push_back({ClopenSet::omitting(n), ClopenSet::requiring(n)});
  Rng root(seed);
  for (u64 i = 1; i <= rounds; ++i) {
    Rng r = root.fork(i);
    IncSeq x = seeded_stream(r, false);
    ReclawResult first = reclaw_map(rows, Point::infinite(x));
    u64 M = *std::max_element(first.moduli.begin(), first.moduli.end());
    std::vector<u64> pre = x.elements_below(M);
    u64 last = pre.empty() ? 0 : pre.back();
    u64 start = std::max(M, last) + 1 + r.below(16);
    IncSeq y = IncSeq::with_prefix(pre, start, 1 + r.below(4));
    ReclawResult second = reclaw_map(rows, Point::infinite(y));
    sc.check(first.values.size() == rows.size() && second.values == first.values,
             "x=" + x.to_spec() + " y=" + y.to_spec() + " disagree inside the modulus");
  }
}

struct Params {
  u64 horizon;
  u64 rounds;
};

Params defaults_for(const std::string& name) {
  if (name == "tilde") return {10000, 1000};
  if (name == "omit0") return {1000, 1000};
  if (name == "splitter") return {10000, 500};
  if (name == "dominator") return {100000, 200};
  if (name == "gm") return {24, 8};
  if (name == "bs" || name == "uid" || name == "utgg") return {1000, 6};
  if (name == "tower" || name == "jordan") return {1000, 8};
  if (name == "crown") return {1000, 9};
  if (name == "hitting") return {10000, 200};
  if (name == "defeater") return {1000, 100};
  if (name == "reclaw") return {10000, 500};
  return {1000, 1};
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "tilde",  "omit0",  "splitter", "dominator", "gm",
      "bs",     "uid",    "utgg",     "tower",     "jordan",
      "crown",  "selectors", "hitting", "defeater", "reclaw"};
  return names;
}

std::string fixtures_dir(const RunConfig& cfg) {
  if (!cfg.fixtures.empty()) return cfg.fixtures;
  if (const char* env = std::getenv("OIVAL_FIXTURES")) return env;
  return "fixtures";
}

SuiteResult run_suite(const std::string& name, const RunConfig& cfg) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    fail(errc::unknown_suite, "no suite named '" + name + "'");

  if (name == "selectors") {
    SuiteResult all;
    all.name = name;
    for (const char* sub : {"bs", "uid", "utgg", "tower", "jordan", "crown"}) {
      SuiteResult r = run_suite(sub, cfg);
      all.checks += r.checks;
      for (std::string& f : r.failures) all.failures.push_back(std::move(f));
    }
    return all;
  }

  Params def = defaults_for(name);
  u64 horizon = cfg.horizon ? cfg.horizon : def.horizon;
  u64 rounds = cfg.rounds ? cfg.rounds : def.rounds;
  if (horizon < rounds || rounds < 1)
    fail(errc::invalid_argument, "need horizon >= rounds >= 1, got horizon=" +
                                     num(horizon) + " rounds=" + num(rounds));

  Score sc(name);
  if (name == "tilde")
    tilde_suite(sc, cfg.seed, horizon, rounds);
  else if (name == "omit0")
    omit0_suite(sc, cfg.seed, horizon, rounds);
  else if (name == "splitter")
    splitter_suite(sc, cfg.seed, horizon, rounds);
  else if (name == "dominator")
    dominator_suite(sc, cfg.seed, horizon, rounds);
  else if (name == "gm")
    gm_suite(sc, horizon, rounds);
  else if (name == "bs")
    scale_suite(sc, cfg, rounds, false);
  else if (name == "uid")
    scale_suite(sc, cfg, rounds, true);
  else if (name == "utgg")
    utgg_suite(sc, cfg, rounds);
  else if (name == "tower")
    tower_suite(sc, cfg, rounds);
  else if (name == "jordan")
    jordan_suite(sc, cfg);
  else if (name == "crown")
    crown_suite(sc, cfg, rounds);
  else if (name == "hitting")
    hitting_suite(sc, cfg.seed, horizon, rounds);
  else if (name == "defeater")
    defeater_suite(sc, cfg, cfg.seed, rounds);
  else if (name == "reclaw")
    reclaw_suite(sc, cfg.seed, rounds);
  return sc.done();
}

}  // namespace oival
