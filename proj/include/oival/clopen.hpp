#pragma once

#include <vector>

#include "oival/point.hpp"

namespace oival {

// Trace width above which canonical materialization refuses to enumerate.
inline constexpr u64 kTraceDepthCap = 26;
// Upper bound on stored terms; De Morgan products abort past it.
inline constexpr u64 kClopenTermBudget = u64(1) << 14;

// A clopen subset of P(N), finitely supported: membership depends only on
// x cap [1, depth].  Stored as a union of signed cylinders; each term matches
// the points containing all of `pos` and none of `neg`.  Element i of [1,depth]
// maps to bit i-1.  Terms are kept consistent (pos and neg disjoint), deduped,
// and subsumption-pruned, so the set is empty exactly when no terms remain.
class ClopenSet {
 public:
  struct Term {
    u64 pos = 0, neg = 0;
  };

  static ClopenSet empty_set(u64 depth);
  static ClopenSet universal(u64 depth);
  // The single cylinder x cap [1,depth] = trace.
  static ClopenSet exact_trace(u64 depth, u64 trace);
  static ClopenSet requiring(u64 m);  // {x : m in x}, depth m
  static ClopenSet omitting(u64 m);   // {x : m not in x}, depth m
  static ClopenSet from_traces(u64 depth, const std::vector<u64>& traces);
  static ClopenSet from_terms(u64 depth, std::vector<Term> terms);

  u64 depth() const { return depth_; }
  const std::vector<Term>& terms() const { return terms_; }

  bool member_mask(u64 mask) const;
  bool contains_point(const Point& x) const;

  // Same subset of P(N), wider trace window.  d must be >= depth().
  ClopenSet with_depth(u64 d) const;

  ClopenSet union_with(const ClopenSet& o) const;
  ClopenSet intersect(const ClopenSet& o) const;
  ClopenSet complement() const;
  ClopenSet minus(const ClopenSet& o) const;

  bool is_empty() const { return terms_.empty(); }
  bool disjoint_with(const ClopenSet& o) const;
  bool same_set(const ClopenSet& o) const;  // extensional, depth-insensitive

  // All matching traces at width d >= depth, sorted.  Guarded by
  // kTraceDepthCap since the enumeration walks 2^d masks.
  std::vector<u64> traces_at(u64 d) const;

 private:
  ClopenSet(u64 depth, std::vector<Term> terms);
  void normalize();

  u64 depth_;
  std::vector<Term> terms_;
};

// Least offending trace confined to [1, bound] outside U, if any.  Decided by
// term algebra, so it stays exact at full 64-bit windows.
std::optional<u64> powerset_escape(const ClopenSet& U, u64 bound);

// m = max(depth+1, bound+1) such that every x with x cap [1,m) inside
// [1,bound] belongs to U.  Errors with not_an_omega_witness when some trace
// below the bound falls outside U.
u64 clopen_modulus(const ClopenSet& U, u64 bound);

}  // namespace oival
