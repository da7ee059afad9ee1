#pragma once

#include <string_view>
#include <vector>

#include "oival/point.hpp"
#include "oival/seq.hpp"
#include "oival/verdict.hpp"

namespace oival {

// Bracket style for an interval with natural endpoints lo < hi.
enum class BracketKind {
  closed_closed,  // {lo..hi}
  open_open,      // {lo+1..hi-1}, possibly empty
  closed_open,    // {lo..hi-1}
  open_closed,    // {lo+1..hi}
};

const char* bracket_name(BracketKind k);
BracketKind bracket_from_name(std::string_view name);

struct Interval {
  u64 lo = 1, hi = 2;
  BracketKind kind = BracketKind::closed_closed;

  u64 first() const {
    return (kind == BracketKind::open_open || kind == BracketKind::open_closed) ? lo + 1 : lo;
  }
  u64 last() const {
    return (kind == BracketKind::open_open || kind == BracketKind::closed_open) ? hi - 1 : hi;
  }
  bool empty() const { return first() > last(); }
  u64 size() const { return empty() ? 0 : last() - first() + 1; }
  bool contains(u64 k) const { return !empty() && k >= first() && k <= last(); }
};

// The n-th interval of the stream: endpoints a(n), a(n+1).
Interval interval(const IncSeq& a, u64 n, BracketKind kind);

bool omits(const Point& x, const Interval& iv);

// Indices n in [1, horizon] whose stream interval is disjoint from x.
// Empty intervals count as omitted.
std::vector<u64> omitted_indices(const Point& x, const IncSeq& a, BracketKind kind, u64 horizon);

// Indices n in [1, horizon] with x meeting {a(n)..a(n+1)-1}.
std::vector<u64> quotient(const Point& x, const IncSeq& a, u64 horizon);

// For every n in [min complement of x, horizon] where x omits the open
// interval between consecutive accelerated-y values, checks that the next
// accelerated value is at most x evaluated at the current one.  x must be an
// infinite proper subset of the naturals.
Verdict omit0_check(const Point& x, const IncSeq& y, u64 horizon);

}  // namespace oival
