#pragma once

// Reference implementations used only by the tests.  Everything here works on
// explicit membership bitmaps over a bounded universe and follows the plain
// definitions, with none of the descriptor machinery from the library, so the
// two sides fail independently.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace naive {

using u64 = std::uint64_t;

struct Set {
  u64 bound = 0;              // universe is [1, bound]
  std::vector<char> in;       // in[k] for 1 <= k <= bound

  explicit Set(u64 b) : bound(b), in(b + 1, 0) {}

  bool has(u64 k) const { return k >= 1 && k <= bound && in[k]; }

  // n-th element in increasing order, 1-based; 0 when there is no such
  // element below the bound.
  u64 nth(u64 n) const {
    u64 seen = 0;
    for (u64 k = 1; k <= bound; ++k)
      if (in[k] && ++seen == n) return k;
    return 0;
  }

  u64 rank(u64 k) const {
    u64 c = 0;
    for (u64 j = 1; j <= k && j <= bound; ++j) c += in[j] ? 1 : 0;
    return c;
  }

  std::vector<u64> elems() const {
    std::vector<u64> out;
    for (u64 k = 1; k <= bound; ++k)
      if (in[k]) out.push_back(k);
    return out;
  }

  std::vector<u64> first(u64 n) const {
    std::vector<u64> out;
    for (u64 k = 1; k <= bound && out.size() < n; ++k)
      if (in[k]) out.push_back(k);
    return out;
  }

  std::optional<u64> min_complement() const {
    for (u64 k = 1; k <= bound; ++k)
      if (!in[k]) return k;
    return std::nullopt;
  }
};

inline Set from_elems(const std::vector<u64>& v, u64 bound) {
  Set s(bound);
  for (u64 k : v)
    if (k <= bound) s.in[k] = 1;
  return s;
}

inline Set arith(u64 start, u64 step, u64 bound) {
  Set s(bound);
  for (u64 k = start; k <= bound; k += step) s.in[k] = 1;
  return s;
}

inline Set geom(u64 start, u64 ratio, u64 bound) {
  Set s(bound);
  for (u64 k = start; k <= bound; k *= ratio) s.in[k] = 1;
  return s;
}

inline Set prefix_tail(const std::vector<u64>& prefix, u64 start, u64 step, u64 bound) {
  Set s(bound);
  for (u64 k : prefix)
    if (k <= bound) s.in[k] = 1;
  for (u64 k = start; k <= bound; k += step) s.in[k] = 1;
  return s;
}

inline Set complement(const Set& base) {
  Set s(base.bound);
  for (u64 k = 1; k <= base.bound; ++k) s.in[k] = !base.in[k];
  return s;
}

// Union of half-open runs [base(n), base(n+1)) over n in idx.  Runs whose left
// endpoint is visible but whose right endpoint lies past the materialized base
// extend to the bound.
inline Set iunion(const Set& idx, const Set& base) {
  Set s(base.bound);
  for (u64 n = 1;; ++n) {
    u64 a = base.nth(n);
    if (a == 0) break;
    if (!idx.has(n)) continue;
    u64 b = base.nth(n + 1);
    u64 end = b == 0 ? base.bound + 1 : b;
    for (u64 k = a; k < end && k <= base.bound; ++k) s.in[k] = 1;
  }
  return s;
}

// The iterate of y on its least omitted value: t(1) = y(gap), t(n+1) = y(t(n)).
inline std::vector<u64> tilde(const Set& y, u64 count) {
  std::vector<u64> out;
  if (!y.min_complement()) {  // y is everything up to the bound
    for (u64 n = 1; n <= count; ++n) out.push_back(n);
    return out;
  }
  u64 t = y.nth(*y.min_complement());
  while (t != 0 && out.size() < count) {
    out.push_back(t);
    t = y.nth(t);
  }
  return out;
}

enum class Kind { closed_closed, open_open, closed_open, open_closed };

inline u64 iv_first(u64 lo, Kind k) {
  return (k == Kind::closed_closed || k == Kind::closed_open) ? lo : lo + 1;
}
inline u64 iv_last(u64 hi, Kind k) {
  return (k == Kind::closed_closed || k == Kind::open_closed) ? hi : hi - 1;
}

inline bool omits(const Set& x, u64 lo, u64 hi, Kind k) {
  for (u64 v = iv_first(lo, k); v <= iv_last(hi, k) && hi >= lo; ++v)
    if (x.has(v)) return false;
  return true;
}

inline std::vector<u64> omitted_indices(const Set& x, const Set& a, Kind k, u64 horizon) {
  std::vector<u64> out;
  for (u64 n = 1; n <= horizon; ++n) {
    u64 lo = a.nth(n), hi = a.nth(n + 1);
    if (hi == 0) throw std::runtime_error("naive: bound too small");
    if (omits(x, lo, hi, k)) out.push_back(n);
  }
  return out;
}

inline std::vector<u64> quotient(const Set& x, const Set& a, u64 horizon) {
  std::vector<u64> out;
  for (u64 n = 1; n <= horizon; ++n) {
    u64 lo = a.nth(n), hi = a.nth(n + 1);
    if (hi == 0) throw std::runtime_error("naive: bound too small");
    if (!omits(x, lo, hi, Kind::closed_open)) out.push_back(n);
  }
  return out;
}

// Eventual-dominance style verdicts under the shared tail rule, recomputed here
// from scratch: -1 fails, 0 unknown, +1 holds.
inline int tail_rule(const std::vector<u64>& violations, u64 h) {
  if (violations.empty()) return 1;
  u64 last = violations.back();
  if (last <= h / 2) return 1;
  if (last > (3 * h) / 4) return -1;
  return 0;
}

}  // namespace naive
