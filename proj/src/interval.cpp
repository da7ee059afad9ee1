#include "oival/interval.hpp"

#include <algorithm>

namespace oival {

const char* bracket_name(BracketKind k) {
  switch (k) {
    case BracketKind::closed_closed: return "closed_closed";
    case BracketKind::open_open: return "open_open";
    case BracketKind::closed_open: return "closed_open";
    case BracketKind::open_closed: return "open_closed";
  }
  return "?";
}

BracketKind bracket_from_name(std::string_view name) {
  if (name == "closed_closed") return BracketKind::closed_closed;
  if (name == "open_open") return BracketKind::open_open;
  if (name == "closed_open") return BracketKind::closed_open;
  if (name == "open_closed") return BracketKind::open_closed;
  fail(errc::invalid_argument, "unknown bracket kind '" + std::string(name) + "'");
}

Interval interval(const IncSeq& a, u64 n, BracketKind kind) {
  u64 lo = a.nth(n), hi = a.nth(n + 1);
  return Interval{lo, hi, kind};
}

bool omits(const Point& x, const Interval& iv) {
  if (iv.empty()) return true;
  return x.rank(iv.last()) - x.rank(iv.first() - 1) == 0;
}

namespace {

// Count of sorted values inside [lo, hi].
u64 count_between(const std::vector<u64>& sorted, u64 lo, u64 hi) {
  if (lo > hi) return 0;
  auto l = std::lower_bound(sorted.begin(), sorted.end(), lo);
  auto r = std::upper_bound(sorted.begin(), sorted.end(), hi);
  return static_cast<u64>(r - l);
}

}  // namespace

std::vector<u64> omitted_indices(const Point& x, const IncSeq& a, BracketKind kind, u64 horizon) {
  if (horizon < 1) fail(errc::invalid_argument, "horizon must be >= 1");
  std::vector<u64> apre = a.prefix(horizon + 1);
  std::vector<u64> xs = x.elements_below(apre.back());
  std::vector<u64> out;
  for (u64 n = 1; n <= horizon; ++n) {
    Interval iv{apre[n - 1], apre[n], kind};
    if (iv.empty() || count_between(xs, iv.first(), iv.last()) == 0) out.push_back(n);
  }
  return out;
}

std::vector<u64> quotient(const Point& x, const IncSeq& a, u64 horizon) {
  if (horizon < 1) fail(errc::invalid_argument, "horizon must be >= 1");
  std::vector<u64> apre = a.prefix(horizon + 1);
  std::vector<u64> out;
  // consecutive blocks share a boundary, so one rank per endpoint suffices
  u64 prev = x.rank(apre[0] - 1);
  for (u64 n = 1; n <= horizon; ++n) {
    u64 cur = x.rank(apre[n] - 1);
    if (cur > prev) out.push_back(n);
    prev = cur;
  }
  return out;
}

Verdict omit0_check(const Point& x, const IncSeq& y, u64 horizon) {
  if (horizon < 1) fail(errc::invalid_argument, "horizon must be >= 1");
  if (x.is_finite()) fail(errc::invalid_argument, "x must be an infinite stream");
  if (x.is_naturals()) fail(errc::x_equals_naturals, "x carries no gap to anchor the check");
  auto gap = x.min_complement();
  if (!gap) fail(errc::budget_exceeded, "gap scan for x");
  u64 k = *gap;

  bool y_nat = y.is_naturals();
  mpz_class t;  // accelerated value at the current index
  if (y_nat)
    t = 1;
  else
    t = y.nth_big(*y.min_complement());

  std::vector<u64> witnesses;
  for (u64 n = 1; n <= horizon; ++n) {
    mpz_class t_next = y_nat ? mpz_class(t + 1) : y.nth_big(t);
    if (n >= k) {
      // x omits the open interval (t, t_next)?
      mpz_class inside = x.rank_big(t_next - 1) - x.rank_big(t);
      if (inside == 0) {
        if (t_next <= x.nth_big(t))
          witnesses.push_back(n);
        else
          return Verdict::fails_at(horizon, n);
      }
    }
    t = t_next;
  }
  return Verdict::holds(horizon, std::move(witnesses));
}

}  // namespace oival
