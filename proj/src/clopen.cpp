#include "oival/clopen.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "oival/error.hpp"

namespace oival {

namespace {

// One mask bit per element of [1, depth].
constexpr u64 kDepthCap = 64;

u64 mask_of(u64 depth) { return depth >= 64 ? ~u64(0) : (u64(1) << depth) - 1; }

u64 checked_depth(u64 depth) {
  if (depth < 1 || depth > kDepthCap)
    fail(errc::invalid_argument, "trace depth " + std::to_string(depth) + " outside [1, 64]");
  return depth;
}

u64 weight(const ClopenSet::Term& t) {
  return std::popcount(t.pos) + std::popcount(t.neg);
}

bool covers(const ClopenSet::Term& u, const ClopenSet::Term& t) {
  return (t.pos & u.pos) == u.pos && (t.neg & u.neg) == u.neg;
}

// Splitting search: does the union of os contain every trace of t?
bool covered_by(const ClopenSet::Term& t, const std::vector<ClopenSet::Term>& os, u64& budget) {
  if (budget == 0) fail(errc::budget_exceeded, "coverage split budget");
  --budget;
  std::vector<ClopenSet::Term> live;
  for (const ClopenSet::Term& u : os) {
    if ((u.pos & t.neg) || (u.neg & t.pos)) continue;
    if (covers(u, t)) return true;
    live.push_back(u);
  }
  if (live.empty()) return false;
  // live[0] is consistent with t but not implied by it, so a free bit exists
  u64 cand = (live[0].pos | live[0].neg) & ~(t.pos | t.neg);
  u64 b = cand & ~(cand - 1);
  return covered_by(ClopenSet::Term{t.pos | b, t.neg}, live, budget) &&
         covered_by(ClopenSet::Term{t.pos, t.neg | b}, live, budget);
}

}  // namespace

ClopenSet::ClopenSet(u64 depth, std::vector<Term> terms)
    : depth_(checked_depth(depth)), terms_(std::move(terms)) {
  normalize();
}

void ClopenSet::normalize() {
  u64 dm = mask_of(depth_);
  std::vector<Term> keep;
  keep.reserve(terms_.size());
  for (Term t : terms_) {
    t.pos &= dm;
    t.neg &= dm;
    if (t.pos & t.neg) continue;
    keep.push_back(t);
  }
  std::sort(keep.begin(), keep.end(), [](const Term& a, const Term& b) {
    if (weight(a) != weight(b)) return weight(a) < weight(b);
    if (a.pos != b.pos) return a.pos < b.pos;
    return a.neg < b.neg;
  });
  terms_.clear();
  for (const Term& t : keep) {
    bool redundant = false;
    for (const Term& u : terms_)
      if (covers(u, t)) {
        redundant = true;
        break;
      }
    if (!redundant) terms_.push_back(t);
  }
}

ClopenSet ClopenSet::empty_set(u64 depth) { return ClopenSet(depth, {}); }

ClopenSet ClopenSet::universal(u64 depth) { return ClopenSet(depth, {Term{0, 0}}); }

ClopenSet ClopenSet::exact_trace(u64 depth, u64 trace) {
  checked_depth(depth);
  u64 dm = mask_of(depth);
  if (trace & ~dm) fail(errc::invalid_argument, "trace exceeds the depth window");
  return ClopenSet(depth, {Term{trace, dm & ~trace}});
}

ClopenSet ClopenSet::requiring(u64 m) {
  checked_depth(m);
  return ClopenSet(m, {Term{u64(1) << (m - 1), 0}});
}

ClopenSet ClopenSet::omitting(u64 m) {
  checked_depth(m);
  return ClopenSet(m, {Term{0, u64(1) << (m - 1)}});
}

ClopenSet ClopenSet::from_traces(u64 depth, const std::vector<u64>& traces) {
  checked_depth(depth);
  u64 dm = mask_of(depth);
  std::vector<Term> terms;
  terms.reserve(traces.size());
  for (u64 t : traces) {
    if (t & ~dm) fail(errc::invalid_argument, "trace exceeds the depth window");
    terms.push_back(Term{t, dm & ~t});
  }
  return ClopenSet(depth, std::move(terms));
}

ClopenSet ClopenSet::from_terms(u64 depth, std::vector<Term> terms) {
  return ClopenSet(depth, std::move(terms));
}

bool ClopenSet::member_mask(u64 mask) const {
  mask &= mask_of(depth_);
  for (const Term& t : terms_)
    if ((mask & t.pos) == t.pos && (mask & t.neg) == 0) return true;
  return false;
}

bool ClopenSet::contains_point(const Point& x) const {
  u64 mask = 0;
  for (u64 v : x.elements_below(depth_)) mask |= u64(1) << (v - 1);
  return member_mask(mask);
}

ClopenSet ClopenSet::with_depth(u64 d) const {
  if (d < depth_) fail(errc::invalid_argument, "cannot narrow a trace window");
  return ClopenSet(d, terms_);
}

ClopenSet ClopenSet::union_with(const ClopenSet& o) const {
  u64 d = std::max(depth_, o.depth_);
  std::vector<Term> terms = terms_;
  terms.insert(terms.end(), o.terms_.begin(), o.terms_.end());
  return ClopenSet(d, std::move(terms));
}

ClopenSet ClopenSet::intersect(const ClopenSet& o) const {
  u64 d = std::max(depth_, o.depth_);
  std::vector<Term> terms;
  for (const Term& a : terms_)
    for (const Term& b : o.terms_) {
      Term t{a.pos | b.pos, a.neg | b.neg};
      if (t.pos & t.neg) continue;
      terms.push_back(t);
      if (terms.size() > kClopenTermBudget) fail(errc::budget_exceeded, "clopen term budget");
    }
  return ClopenSet(d, std::move(terms));
}

ClopenSet ClopenSet::complement() const {
  // De Morgan product: one literal from each term's negation.
  std::vector<Term> acc = {Term{0, 0}};
  for (const Term& t : terms_) {
    std::vector<Term> literals;
    for (u64 b = t.pos; b; b &= b - 1) literals.push_back(Term{0, b & ~(b - 1)});
    for (u64 b = t.neg; b; b &= b - 1) literals.push_back(Term{b & ~(b - 1), 0});
    std::vector<Term> next;
    for (const Term& a : acc)
      for (const Term& l : literals) {
        Term m{a.pos | l.pos, a.neg | l.neg};
        if (m.pos & m.neg) continue;
        next.push_back(m);
        if (next.size() > kClopenTermBudget) fail(errc::budget_exceeded, "clopen term budget");
      }
    std::sort(next.begin(), next.end(), [](const Term& a, const Term& b) {
      return a.pos != b.pos ? a.pos < b.pos : a.neg < b.neg;
    });
    next.erase(std::unique(next.begin(), next.end(),
                           [](const Term& a, const Term& b) {
                             return a.pos == b.pos && a.neg == b.neg;
                           }),
               next.end());
    acc = std::move(next);
    if (acc.empty()) break;
  }
  return ClopenSet(depth_, std::move(acc));
}

ClopenSet ClopenSet::minus(const ClopenSet& o) const {
  return intersect(o.with_depth(std::max(depth_, o.depth())).complement());
}

bool ClopenSet::disjoint_with(const ClopenSet& o) const { return intersect(o).is_empty(); }

bool ClopenSet::same_set(const ClopenSet& o) const {
  u64 budget = kClopenTermBudget;
  for (const Term& t : terms_)
    if (!covered_by(t, o.terms_, budget)) return false;
  for (const Term& t : o.terms_)
    if (!covered_by(t, terms_, budget)) return false;
  return true;
}

std::vector<u64> ClopenSet::traces_at(u64 d) const {
  if (d < depth_) fail(errc::invalid_argument, "cannot narrow a trace window");
  if (d > kTraceDepthCap) fail(errc::budget_exceeded, "trace enumeration width");
  std::vector<u64> out;
  for (u64 t = 0; t < (u64(1) << d); ++t)
    if (member_mask(t)) out.push_back(t);
  return out;
}

std::optional<u64> powerset_escape(const ClopenSet& U, u64 bound) {
  u64 c = std::min(bound, U.depth());
  // traces confined to [1, c] that fall outside U; term emptiness is exact,
  // so wide windows need no enumeration
  u64 outside = mask_of(U.depth()) & ~mask_of(c);
  ClopenSet bad =
      U.complement().intersect(ClopenSet::from_terms(U.depth(), {{0, outside}}));
  if (bad.is_empty()) return std::nullopt;
  return bad.terms()[0].pos;
}

u64 clopen_modulus(const ClopenSet& U, u64 bound) {
  if (auto esc = powerset_escape(U, bound))
    fail(errc::not_an_omega_witness,
         "trace " + std::to_string(*esc) + " below bound " + std::to_string(bound) +
             " escapes the set");
  return std::max(U.depth() + 1, bound + 1);
}

}  // namespace oival
