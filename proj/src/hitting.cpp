#include "oival/hitting.hpp"

#include <algorithm>
#include <string>

#include "oival/error.hpp"

namespace oival {

namespace {

std::string num(u64 n) { return std::to_string(n); }

Verdict exact_verdict(u64 horizon, std::vector<u64> witnesses, std::vector<u64> violations) {
  if (violations.empty()) return Verdict::holds(horizon, std::move(witnesses));
  Verdict v = Verdict::fails_at(horizon, violations.front());
  v.violations = std::move(violations);
  return v;
}

// Selector mass below bound: sum of widths over blocks 1..bound.
u64 selector_mass(const BlockSelector& g, u64 bound) {
  unsigned __int128 m = g.width_const == 0
                            ? (unsigned __int128)bound * (bound + 1) / 2
                            : (unsigned __int128)g.width_const * bound;
  if (m > kValueCap) fail(errc::budget_exceeded, "guard mass exceeds the value cap");
  return (u64)m;
}

void check_const_width(const BlockSelector& g, u64 k, const char* what) {
  if (k == 0) fail(errc::invalid_argument, std::string(what) + " needs a positive width");
  if (g.width_const != k)
    fail(errc::invalid_argument,
         std::string(what) + " width " + num(k) + " does not match the selector");
}

}  // namespace

BlockPartition default_partition(BlockGrowth growth) {
  return growth == BlockGrowth::linear ? linear_blocks() : doubling_blocks();
}

ClopenSet basic_open(const BlockPartition& part, u64 n, u64 m) {
  if (n == 0) fail(errc::invalid_argument, "block index starts at 1");
  if (m < part.lo(n) || m > part.hi(n))
    fail(errc::m_out_of_block, "value " + num(m) + " outside block " + num(n));
  return ClopenSet::omitting(m);
}

std::vector<u64> hitting_indices(const Point& s, const BlockSelector& g, u64 horizon) {
  std::vector<u64> out;
  for (u64 n = 1; n <= horizon; ++n) {
    bool all = true;
    for (u64 m : g.pick(n))
      if (!s.contains(m)) {
        all = false;
        break;
      }
    if (all) out.push_back(n);
  }
  return out;
}

u64 hitting_count(const Point& s, const BlockSelector& g, u64 horizon) {
  return hitting_indices(s, g, horizon).size();
}

IncSeq perturb(const IncSeq& s, const BlockSelector& g) { return IncSeq::block_union(g, s); }

KunEmbed kun_embed(u64 k, const BlockSelector& g, const IncSeq& s, u64 horizon) {
  check_const_width(g, k, "kun embed");
  if (horizon < k) fail(errc::invalid_argument, "horizon below the consumption stride");
  KunEmbed e;
  e.t = IncSeq::kun_indices(k, g, s);
  e.refined = IncSeq::block_union(g, e.t);
  e.le = relate(Rel::le, s, e.refined, horizon);
  u64 rounds = horizon / k;
  std::vector<u64> sp = s.prefix(horizon), rp = e.refined.prefix(k * (rounds - 1) + 1);
  std::vector<u64> witnesses, violations;
  for (u64 n = 1; n <= rounds; ++n) {
    if (sp[k * n - 1] < rp[k * (n - 1)])
      witnesses.push_back(n);
    else
      violations.push_back(n);
  }
  e.counting = exact_verdict(rounds, std::move(witnesses), std::move(violations));
  return e;
}

SparseEmbed sparse_embed(const IncSeq& s, u64 k, const BlockSelector& g, u64 horizon) {
  check_const_width(g, k, "sparse embed");
  SparseEmbed e;
  e.t = IncSeq::sparse_indices(g, s);
  e.refined = IncSeq::block_union(g, e.t);
  std::vector<u64> sp = s.prefix(horizon + 2);
  std::vector<u64> elems = e.refined.elements_below(sp.back());
  std::vector<u64> witnesses, violations;
  for (u64 n = 1; n <= horizon; ++n) {
    auto lo = std::upper_bound(elems.begin(), elems.end(), sp[n - 1]);
    auto hi = std::lower_bound(elems.begin(), elems.end(), sp[n + 1]);
    if ((u64)(hi - lo) <= k)
      witnesses.push_back(n);
    else
      violations.push_back(n);
  }
  e.window = exact_verdict(horizon, std::move(witnesses), std::move(violations));
  return e;
}

GuardResult perturbation_guard(const BlockSelector& g, const IncSeq& a, u64 rounds) {
  if (rounds == 0) fail(errc::invalid_argument, "guard needs at least one round");
  GuardResult r;
  r.c.push_back(1);
  for (u64 n = 1; n < rounds; ++n) {
    u64 cn = r.c.back();
    u64 dn = selector_mass(g, cn);
    u64 j0 = a.rank(cn - 1) + 1;
    r.c.push_back(a.nth(j0 + dn + 1));
  }
  for (u64 cn : r.c) r.d.push_back(selector_mass(g, cn));
  return r;
}

Verdict guard_check(const GuardResult& guard, const BlockSelector& g, const IncSeq& a,
                    const IncSeq& s) {
  if (guard.c.size() < 2) fail(errc::invalid_argument, "guard has no interval to check");
  IncSeq b = perturb(s, g);
  u64 intervals = guard.c.size() - 1;
  std::vector<u64> witnesses, violations;
  for (u64 n = 1; n <= intervals; ++n) {
    u64 lo = guard.c[n - 1], hi = guard.c[n];
    if (s.rank(hi - 1) - s.rank(lo) > 0) continue;
    bool shielded = false;
    for (u64 j = a.rank(lo - 1) + 1; a.nth(j + 1) <= hi && !shielded; ++j)
      shielded = b.rank(a.nth(j + 1) - 1) - b.rank(a.nth(j)) == 0;
    if (shielded)
      witnesses.push_back(n);
    else
      violations.push_back(n);
  }
  return exact_verdict(intervals, std::move(witnesses), std::move(violations));
}

const char* hitting_shape_name(HittingShape s) {
  switch (s) {
    case HittingShape::one: return "one";
    case HittingShape::constant_k: return "k";
    case HittingShape::identity_width: return "id";
  }
  return "?";
}

std::vector<std::vector<u64>> greedy_groups(const BlockSelector& g, u64 length) {
  BlockSelector lowest{g.part, g.width_const, 0, {}};
  std::vector<std::vector<u64>> out;
  for (u64 n = 1; n <= length; ++n) out.push_back(lowest.pick(n));
  return out;
}

DefeatReport defeat_gamma_selection(const BlockPartition& part,
                                    const std::vector<std::pair<Point, BlockSelector>>& sample,
                                    const std::vector<std::vector<u64>>& groups, u64 threshold) {
  u64 length = groups.size();
  DefeatReport r;
  r.threshold = threshold == 0 ? std::max<u64>(1, length / 2) : threshold;

  std::vector<std::pair<u64, std::vector<u64>>> overrides;
  bool all_one = true, all_equal = true, identity = true;
  for (u64 n = 1; n <= length; ++n) {
    std::vector<u64> grp = groups[n - 1];
    std::sort(grp.begin(), grp.end());
    if (grp.empty()) fail(errc::invalid_argument, "empty group at block " + num(n));
    for (size_t i = 0; i + 1 < grp.size(); ++i)
      if (grp[i] == grp[i + 1])
        fail(errc::invalid_argument, "repeated choice at block " + num(n));
    for (u64 m : grp)
      if (m < part.lo(n) || m > part.hi(n))
        fail(errc::m_out_of_block, "choice " + num(m) + " outside block " + num(n));
    if (grp.size() != 1) all_one = false;
    if (grp.size() != groups[0].size()) all_equal = false;
    if (grp.size() != n) identity = false;
    overrides.emplace_back(n, std::move(grp));
  }
  if (all_one) {
    r.shape = HittingShape::one;
    r.shape_k = 1;
  } else if (all_equal) {
    r.shape = HittingShape::constant_k;
    r.shape_k = groups[0].size();
  } else if (identity) {
    r.shape = HittingShape::identity_width;
  } else {
    fail(errc::invalid_argument, "group sizes fit no selector shape");
  }
  u64 width = r.shape == HittingShape::identity_width ? 0 : r.shape_k;
  r.induced = BlockSelector{part, width, 0, std::move(overrides)};

  for (size_t i = 0; i < sample.size(); ++i) {
    const Point& x = sample[i].first;
    std::vector<u64> hits;
    for (u64 n = 1; n <= length; ++n) {
      bool all = true;
      for (u64 m : groups[n - 1])
        if (!x.contains(m)) {
          all = false;
          break;
        }
      if (all) hits.push_back(n);
    }
    if (hits.size() >= r.threshold) {
      r.defeated = true;
      r.sample_index = i + 1;
      r.failures = std::move(hits);
      break;
    }
  }
  return r;
}

namespace {

// Exact support recovery: the union must meet exactly the chosen blocks, with
// the full selector width in each.
Verdict decode_cert(const IncSeq& refined, const BlockSelector& g, const IncSeq& s, u64 horizon) {
  std::vector<u64> count(horizon + 2, 0);
  for (u64 v : refined.elements_below(g.part.hi(horizon))) {
    u64 b = g.part.block_of(v);
    if (b <= horizon) count[b]++;
  }
  std::vector<u64> witnesses, violations;
  for (u64 n = 1; n <= horizon; ++n) {
    bool want = s.contains(n);
    bool have = count[n] > 0;
    bool good = want == have && (!have || count[n] == g.width_at(n));
    if (!good)
      violations.push_back(n);
    else if (have)
      witnesses.push_back(n);
  }
  return exact_verdict(horizon, std::move(witnesses), std::move(violations));
}

}  // namespace

RefineResult run_refine_plan(const RefinePlan& plan) {
  if (plan.base.members.empty()) fail(errc::invalid_argument, "empty base prefix");
  if (plan.horizon == 0) fail(errc::invalid_argument, "horizon must be >= 1");
  RefineResult r;
  r.refined.kind = plan.relation ? plan.base.kind : ScalePrefix::Kind::unbounded_set;
  for (const IncSeq& m : plan.base.members) {
    switch (plan.embed) {
      case RefinePlan::Embed::kun: {
        KunEmbed e = kun_embed(plan.k, plan.selector, m, plan.horizon);
        r.index_streams.push_back(e.t);
        r.refined.members.push_back(e.refined);
        r.certs.push_back(std::move(e.le));
        r.counting.push_back(std::move(e.counting));
        break;
      }
      case RefinePlan::Embed::sparse: {
        SparseEmbed e = sparse_embed(m, plan.k, plan.selector, plan.horizon);
        r.index_streams.push_back(e.t);
        r.refined.members.push_back(e.refined);
        r.certs.push_back(std::move(e.window));
        break;
      }
      case RefinePlan::Embed::perturb: {
        IncSeq u = perturb(m, plan.selector);
        r.index_streams.push_back(m);
        r.refined.members.push_back(u);
        r.certs.push_back(decode_cert(u, plan.selector, m, plan.horizon));
        break;
      }
    }
    if (plan.relation)
      r.refinement.push_back(
          relate(*plan.relation, m, r.refined.members.back(), plan.horizon));
  }
  return r;
}

RefinePlan theorem_plan(std::string_view name, ScalePrefix base, u64 k, u64 horizon) {
  if (k == 0) fail(errc::invalid_argument, "plan width must be >= 1");
  auto need = [&](ScalePrefix::Kind kind, const char* what) {
    if (base.kind != kind)
      fail(errc::invalid_argument, std::string(name) + " needs a " + what + " base");
  };
  RefinePlan p;
  p.base = std::move(base);
  p.horizon = horizon;
  if (name == "u2nots1") {
    need(ScalePrefix::Kind::sq_scale, "sq_scale");
    p.embed = RefinePlan::Embed::sparse;
    p.selector = BlockSelector{linear_blocks(), 1, 0, {}};
    p.k = 1;
    p.relation = Rel::sqe;
  } else if (name == "uidnotuk") {
    need(ScalePrefix::Kind::le_star_scale, "le_star_scale");
    p.embed = RefinePlan::Embed::kun;
    p.selector = BlockSelector{BlockPartition(IncSeq::arithmetic(1, k)), k, 0, {}};
    p.k = k;
    p.relation = Rel::le_star;
  } else if (name == "uk+1notuk") {
    need(ScalePrefix::Kind::sq_scale, "sq_scale");
    p.embed = RefinePlan::Embed::sparse;
    p.selector = BlockSelector{BlockPartition(IncSeq::arithmetic(1, k + 1)), k + 1, 0, {}};
    p.k = k + 1;
  } else if (name == "ufognonuidgg") {
    need(ScalePrefix::Kind::le_star_scale, "le_star_scale");
    p.embed = RefinePlan::Embed::perturb;
    p.selector = BlockSelector{linear_blocks(), 0, 0, {}};
    p.k = 1;
  } else {
    fail(errc::invalid_argument, "unknown plan " + std::string(name));
  }
  return p;
}

}  // namespace oival
