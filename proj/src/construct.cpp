#include "oival/construct.hpp"

#include <algorithm>
#include <unordered_set>

#include "oival/error.hpp"
#include "oival/interval.hpp"
#include "oival/point.hpp"

namespace oival {

namespace {

std::vector<u64> take_upto(const IncSeq& s, u64 count) {
  std::vector<u64> out;
  out.reserve(count);
  SeqCursor c = s.cursor();
  u64 v = 0;
  while (out.size() < count && c.next(v)) out.push_back(v);
  return out;
}

// Longest prefix of s that stays representable and within scan budgets.
u64 reach_len(const IncSeq& s, u64 limit) {
  u64 n = 0;
  try {
    SeqCursor c = s.cursor();
    u64 v = 0;
    while (n < limit && c.next(v)) ++n;
  } catch (const error&) {
  }
  return n;
}

// Round-robin gap insertion over materialized member prefixes.  Each stage
// contributes one element of the result, then jumps past one full closed
// interval of the current member.
struct OmitStages {
  std::vector<u64> picks;
  std::vector<std::vector<u64>> witness;
  u64 tail_from = 0;
  bool ok = false;
};

OmitStages omit_stages(const std::vector<std::vector<u64>>& ys, u64 rounds) {
  size_t N = ys.size();
  OmitStages r;
  r.witness.assign(N, {});
  u64 cur = 1;
  u64 total = rounds * N;
  for (u64 stage = 0; stage < total; ++stage) {
    size_t i = stage % N;
    const std::vector<u64>& y = ys[i];
    size_t n = std::upper_bound(y.begin(), y.end(), cur) - y.begin();
    if (n + 1 >= y.size()) {
      r.tail_from = cur;
      return r;
    }
    r.picks.push_back(cur);
    r.witness[i].push_back(n + 1);  // closed interval with endpoints y(n+1), y(n+2)
    cur = y[n + 1] + 1;
  }
  r.ok = true;
  r.tail_from = cur;
  return r;
}

// Complement of a prefix-plus-even-step stream, exactly: the gaps below the
// tail, then the alternating tail shifted by one.
IncSeq complement_of_step2(const IncSeq& b) {
  auto at = b.affine_tail();
  if (!at || at->step != 2) fail(errc::invalid_argument, "expected a step-2 tail");
  u64 v0 = b.nth(at->from);
  std::vector<u64> in = b.elements_below(v0);
  std::vector<u64> gaps;
  size_t p = 0;
  for (u64 k = 1; k < v0; ++k) {
    while (p < in.size() && in[p] < k) ++p;
    if (p >= in.size() || in[p] != k) gaps.push_back(k);
  }
  return IncSeq::with_prefix(std::move(gaps), v0 + 1, 2);
}

}  // namespace

void check_oracle(const OracleFamily& fam) {
  if (fam.members.empty()) fail(errc::invalid_argument, "oracle family is empty");
  std::vector<std::string> specs;
  for (const IncSeq& m : fam.members) specs.push_back(m.to_spec());
  for (size_t i = 0; i < specs.size(); ++i)
    for (size_t j = i + 1; j < specs.size(); ++j)
      if (specs[i] == specs[j])
        fail(errc::invalid_argument, "duplicate oracle member " + specs[i]);
}

const char* scale_kind_name(ScalePrefix::Kind k) {
  switch (k) {
    case ScalePrefix::Kind::le_star_scale: return "le_star_scale";
    case ScalePrefix::Kind::sq_scale: return "sq_scale";
    case ScalePrefix::Kind::tower: return "tower";
    case ScalePrefix::Kind::unbounded_set: return "unbounded_set";
  }
  return "?";
}

ScalePrefix::Kind scale_kind_from_name(std::string_view name) {
  if (name == "le_star_scale") return ScalePrefix::Kind::le_star_scale;
  if (name == "sq_scale") return ScalePrefix::Kind::sq_scale;
  if (name == "tower") return ScalePrefix::Kind::tower;
  if (name == "unbounded_set") return ScalePrefix::Kind::unbounded_set;
  fail(errc::invalid_argument, "unknown prefix kind '" + std::string(name) + "'");
}

std::vector<Verdict> verify_scale_prefix(const ScalePrefix& p, u64 horizon) {
  std::vector<Verdict> out;
  for (size_t i = 0; i < p.members.size(); ++i) {
    for (size_t j = i + 1; j < p.members.size(); ++j) {
      switch (p.kind) {
        case ScalePrefix::Kind::le_star_scale:
          out.push_back(relate(Rel::le_star, p.members[i], p.members[j], horizon));
          break;
        case ScalePrefix::Kind::sq_scale:
          out.push_back(relate(Rel::sqe, p.members[i], p.members[j], horizon));
          break;
        case ScalePrefix::Kind::tower:
          out.push_back(relate(Rel::subs, p.members[j], p.members[i], horizon));
          break;
        case ScalePrefix::Kind::unbounded_set:
          break;
      }
    }
  }
  return out;
}

Split split_by_g(const IncSeq& g, u64 horizon) {
  IncSeq tg = tilde(g);
  IncSeq a = IncSeq::interval_union(IncSeq::arithmetic(1, 2), tg);
  IncSeq a_compl = IncSeq::complement(a, IncSeq::interval_union(IncSeq::arithmetic(2, 2), tg));
  Split s{a, a_compl, relate(Rel::le_inf, g, a, horizon),
          relate(Rel::le_inf, g, a_compl, horizon)};
  return s;
}

OmitFamilyResult omit_closed_family(const std::vector<IncSeq>& Y, u64 rounds) {
  if (Y.empty()) fail(errc::invalid_argument, "empty member list");
  u64 count = 2 * rounds * Y.size() + 8;
  for (int sizing = 0; sizing < 8; ++sizing) {
    std::vector<std::vector<u64>> ys;
    ys.reserve(Y.size());
    for (const IncSeq& y : Y) ys.push_back(take_upto(y, count));
    OmitStages st = omit_stages(ys, rounds);
    if (!st.ok) {
      count *= 2;
      continue;
    }
    OmitFamilyResult r;
    r.s = IncSeq::with_prefix(std::move(st.picks), st.tail_from, 2);
    r.witness_indices = std::move(st.witness);
    return r;
  }
  fail(errc::budget_exceeded, "member prefixes exhausted before all stages ran");
}

DominatorResult interval_union_dominator(const std::vector<IncSeq>& Y, const IncSeq& a,
                                         u64 rounds, u64 horizon) {
  if (Y.empty()) fail(errc::invalid_argument, "empty member list");
  std::vector<IncSeq> iterates;
  iterates.reserve(Y.size());
  for (const IncSeq& y : Y) iterates.push_back(tilde(y));

  DominatorResult best;
  for (int attempt = 0; attempt < 4; ++attempt) {
    u64 r = rounds << attempt;
    u64 hq = 64 + 4 * r * Y.size();
    OmitStages st;
    std::vector<std::vector<u64>> qs;
    for (int sizing = 0; sizing < 8; ++sizing) {
      u64 depth = hq;
      u64 avail = reach_len(a, depth + 1);
      depth = avail > 0 ? std::min(depth, avail - 1) : 0;
      if (depth == 0) break;
      qs.clear();
      for (const IncSeq& ty : iterates)
        qs.push_back(quotient(Point::infinite(ty), a, depth));
      st = omit_stages(qs, r);
      if (st.ok) break;
      // once the block stream saturates, deeper quotients are unreachable
      if (depth < hq) break;
      hq *= 2;
    }
    if (!st.ok) fail(errc::budget_exceeded, "quotient prefixes exhausted");

    DominatorResult res;
    res.b = IncSeq::with_prefix(std::move(st.picks), st.tail_from, 2);
    res.c = IncSeq::interval_union(res.b, a);
    res.omitted_quotient = std::move(st.witness);
    bool enough = true;
    u64 hc = std::min(horizon, reach_len(res.c, horizon));
    for (const IncSeq& y : Y) {
      u64 hy = std::min(hc, reach_len(y, hc));
      res.member_verdicts.push_back(relate(Rel::le_inf, y, res.c, hy));
      if (!res.member_verdicts.back().ok() ||
          res.member_verdicts.back().witnesses.size() < rounds)
        enough = false;
    }
    best = res;
    if (enough) return best;
  }
  return best;
}

SplitStepResult split_step(const std::vector<IncSeq>& Y, const IncSeq& a, u64 rounds,
                           u64 horizon) {
  IncSeq ta = tilde(a);
  SplitStepResult out;
  for (int attempt = 0; attempt < 4; ++attempt) {
    u64 r = rounds << attempt;
    DominatorResult dom = interval_union_dominator(Y, ta, r, horizon);
    out.s = dom.c;
    out.b = dom.b;
    out.b_compl = complement_of_step2(dom.b);
    out.s_compl = IncSeq::complement(out.s, IncSeq::interval_union(out.b_compl, ta));
    out.member_verdicts = dom.member_verdicts;
    u64 hc = std::min({horizon, reach_len(a, horizon), reach_len(out.s_compl, horizon)});
    out.compl_verdict = relate(Rel::le_inf, a, out.s_compl, hc);
    bool enough = out.compl_verdict.ok() && out.compl_verdict.witnesses.size() >= rounds;
    for (const Verdict& v : out.member_verdicts)
      if (!v.ok() || v.witnesses.size() < rounds) enough = false;
    if (enough) return out;
  }
  return out;
}

IncSeq scale_step(ScalePrefix::Kind kind, const ScalePrefix& prior, const IncSeq& f,
                  u64 horizon) {
  if (kind != ScalePrefix::Kind::le_star_scale && kind != ScalePrefix::Kind::sq_scale)
    fail(errc::invalid_argument, "scale_step handles le_star and sqe kinds");
  if (prior.kind != kind && !prior.members.empty())
    fail(errc::invalid_argument, "prior prefix kind mismatch");

  std::vector<IncSeq> cand = prior.members;
  cand.push_back(f);
  std::vector<IncSeq::AffineTail> tails;
  for (const IncSeq& s : cand) {
    auto at = s.affine_tail();
    if (!at) fail(errc::invalid_argument, "input lacks an affine tail: " + s.to_spec());
    tails.push_back(*at);
  }

  if (kind == ScalePrefix::Kind::sq_scale) {
    u64 g = 1;
    for (const auto& t : tails) g = std::max(g, t.step);
    u64 step = 2 * g + 1;
    u64 start = step + f.nth(1) % step;
    IncSeq s = IncSeq::arithmetic(start, step);
    for (const IncSeq& p : prior.members)
      if (!relate(Rel::sqe, p, s, horizon).ok())
        fail(errc::invalid_argument, "coarsening step failed its two-point check");
    if (!relate(Rel::le_star, f, s, horizon).ok())
      fail(errc::invalid_argument, "coarsening step does not dominate the oracle member");
    return s;
  }

  // pointwise max plus one, exact: scan to the index where a maximal-slope
  // candidate takes the lead for good
  u64 beta = 0, in_tail = 0;
  for (const auto& t : tails) {
    beta = std::max(beta, t.step);
    in_tail = std::max(in_tail, t.from);
  }
  std::vector<u64> vals;
  size_t lead = 0;
  for (u64 n = 1;; ++n) {
    if (n > 1000000) fail(errc::budget_exceeded, "no stable leader found");
    u64 m = 0;
    size_t arg = 0;
    for (size_t i = 0; i < cand.size(); ++i) {
      u64 v = cand[i].nth(n);
      if (v > m || (v == m && tails[i].step > tails[arg].step)) {
        m = v;
        arg = i;
      }
    }
    vals.push_back(m + 1);
    if (n >= in_tail && tails[arg].step == beta) {
      lead = arg;
      break;
    }
  }
  u64 next = cand[lead].nth(vals.size() + 1) + 1;
  IncSeq s = IncSeq::with_prefix(std::move(vals), next, beta);
  for (const IncSeq& p : prior.members)
    if (!relate(Rel::le_star, p, s, horizon).ok())
      fail(errc::invalid_argument, "max step lost a prior member");
  if (!relate(Rel::le_star, f, s, horizon).ok())
    fail(errc::invalid_argument, "max step lost the oracle member");
  return s;
}

IncSeq tower_step(const ScalePrefix& prior, const IncSeq& f, u64 horizon) {
  if (prior.kind != ScalePrefix::Kind::tower && !prior.members.empty())
    fail(errc::invalid_argument, "prior prefix kind mismatch");
  if (prior.members.empty()) return f;

  const IncSeq& last = prior.members.back();
  auto la = last.affine_tail();
  auto fa = f.affine_tail();
  if (!la || !fa) fail(errc::invalid_argument, "input lacks an affine tail");
  u64 d = la->step, e = fa->step;
  u64 step = d * ((e + d - 1) / d);

  std::vector<u64> tv;
  u64 prev_idx = 0;
  for (u64 n = 1;; ++n) {
    if (n > 1000000) fail(errc::budget_exceeded, "no tail alignment found");
    u64 fn = f.nth(n);
    u64 lo = std::max(fn, tv.empty() ? u64(1) : tv.back() + 1);
    u64 idx = std::max(prev_idx + 1, last.rank(lo - 1) + 1);
    tv.push_back(last.nth(idx));
    prev_idx = idx;
    if (n >= fa->from && idx >= la->from) break;
  }
  u64 tail_start = tv.back() + step;
  IncSeq t = IncSeq::with_prefix(std::move(tv), tail_start, step);

  if (!relate(Rel::le, f, t, horizon).ok())
    fail(errc::invalid_argument, "tower step lost pointwise domination");
  for (const IncSeq& p : prior.members)
    if (!relate(Rel::subs, t, p, horizon).ok())
      fail(errc::invalid_argument, "tower step left the chain");
  return t;
}

TowerTransform tower_from_scale(const ScalePrefix& scale, const IncSeq& g, u64 horizon) {
  if (scale.kind != ScalePrefix::Kind::le_star_scale)
    fail(errc::invalid_argument, "transform expects a le_star scale");
  if (scale.members.empty()) fail(errc::invalid_argument, "empty scale");

  std::vector<u64> gp = take_upto(g, horizon);
  std::vector<std::vector<u64>> sp;
  for (const IncSeq& s : scale.members) sp.push_back(take_upto(s, horizon));

  TowerTransform out;
  for (size_t i = 0; i < sp.size(); ++i) {
    std::vector<u64> t;
    for (u64 n = 1; n <= horizon; ++n) {
      bool s_def = n <= sp[i].size(), g_def = n <= gp.size();
      if (!s_def && !g_def) break;
      if (!s_def) continue;  // member value past the cap, above any g value
      if (!g_def || sp[i][n - 1] <= gp[n - 1]) t.push_back(n);
    }
    if (t.empty())
      fail(errc::empty_transform,
           "member " + std::to_string(i + 1) + " maps to the empty set at this horizon");
    out.prefixes.push_back(std::move(t));
  }

  for (size_t i = 0; i < sp.size(); ++i) {
    for (size_t j = i + 1; j < sp.size(); ++j) {
      u64 crossing = 1;
      for (u64 n = horizon; n >= 1; --n) {
        bool i_def = n <= sp[i].size(), j_def = n <= sp[j].size();
        u64 vi = i_def ? sp[i][n - 1] : kValueCap;
        u64 vj = j_def ? sp[j][n - 1] : kValueCap;
        if (vi > vj) {
          crossing = n + 1;
          break;
        }
      }
      bool bounded = true;
      const std::vector<u64>&ti = out.prefixes[i], &tj = out.prefixes[j];
      for (u64 n : tj)
        if (n >= crossing && !std::binary_search(ti.begin(), ti.end(), n)) bounded = false;
      out.certs.push_back({static_cast<u64>(i + 1), static_cast<u64>(j + 1), crossing, bounded});
    }
  }
  return out;
}

std::vector<u64> pseudointersection(const std::vector<IncSeq>& family, u64 horizon) {
  if (family.empty()) fail(errc::invalid_argument, "empty family");
  std::vector<std::vector<u64>> els;
  for (const IncSeq& s : family) els.push_back(s.elements_below(horizon));

  for (size_t i = 0; i < els.size(); ++i) {
    for (size_t j = i + 1; j < els.size(); ++j) {
      std::vector<u64> both;
      std::set_intersection(els[i].begin(), els[i].end(), els[j].begin(), els[j].end(),
                            std::back_inserter(both));
      if (both.empty())
        fail(errc::centered_check_failed, "members " + std::to_string(i + 1) + " and " +
                                              std::to_string(j + 1) +
                                              " share no element up to the horizon");
    }
  }

  std::vector<u64> acc = els[0];
  for (size_t i = 1; i < els.size(); ++i) {
    std::vector<u64> next;
    std::set_intersection(acc.begin(), acc.end(), els[i].begin(), els[i].end(),
                          std::back_inserter(next));
    acc = std::move(next);
  }
  if (acc.empty())
    fail(errc::centered_check_failed, "the family has empty intersection up to the horizon");
  return acc;
}

std::vector<std::vector<u64>> disjointify(const std::vector<IncSeq>& families, u64 take) {
  size_t N = families.size();
  std::vector<std::vector<u64>> out(N);
  if (N == 0 || take == 0) return out;

  std::unordered_set<u64> used;
  std::vector<SeqCursor> walks;
  walks.reserve(N);
  for (const IncSeq& s : families) walks.push_back(s.cursor());
  auto next_unused = [&](size_t i) {
    u64 v = 0;
    while (walks[i].next(v))
      if (!used.count(v)) return v;
    fail(errc::seq_overflow, "family " + std::to_string(i + 1) + " ran out of fresh elements");
  };

  for (u64 k = 1;; ++k) {
    for (size_t i = 0; i < std::min<size_t>(k, N); ++i) {
      u64 v = next_unused(i);
      used.insert(v);
      out[i].push_back(v);
    }
    bool done = true;
    for (const auto& b : out)
      if (b.size() < take) done = false;
    if (done) break;
  }
  for (auto& b : out) b.resize(take);
  return out;
}

BuildResult build_prefix(ScalePrefix::Kind kind, const OracleFamily& oracle, u64 steps,
                         u64 horizon, u64 rounds) {
  check_oracle(oracle);
  BuildResult r;
  r.prefix.kind = kind;
  size_t N = oracle.members.size();
  for (u64 j = 1; j <= steps; ++j) {
    const IncSeq& f = oracle.members[(j - 1) % N];
    switch (kind) {
      case ScalePrefix::Kind::le_star_scale:
      case ScalePrefix::Kind::sq_scale:
        r.prefix.members.push_back(scale_step(kind, r.prefix, f, horizon));
        break;
      case ScalePrefix::Kind::tower:
        r.prefix.members.push_back(tower_step(r.prefix, f, horizon));
        break;
      case ScalePrefix::Kind::unbounded_set: {
        std::vector<IncSeq> Y(oracle.members.begin(),
                              oracle.members.begin() + std::min<size_t>(j, N));
        SplitStepResult st = split_step(Y, f, rounds, horizon);
        r.prefix.members.push_back(st.s);
        r.complements.push_back(st.s_compl);
        break;
      }
    }
  }
  r.checks = verify_scale_prefix(r.prefix, horizon);
  return r;
}

}  // namespace oival
