#include "oival/relate.hpp"

#include <algorithm>

namespace oival {

const char* rel_name(Rel r) {
  switch (r) {
    case Rel::le: return "le";
    case Rel::le_star: return "le_star";
    case Rel::le_inf: return "le_inf";
    case Rel::sqe: return "sqe";
    case Rel::subs: return "subs";
  }
  return "?";
}

std::optional<Rel> rel_from_name(std::string_view name) {
  if (name == "le") return Rel::le;
  if (name == "le_star") return Rel::le_star;
  if (name == "le_inf") return Rel::le_inf;
  if (name == "sqe") return Rel::sqe;
  if (name == "subs") return Rel::subs;
  return std::nullopt;
}

Verdict tail_verdict(u64 horizon, const std::vector<u64>& violations) {
  if (violations.empty()) {
    std::vector<u64> all(horizon);
    for (u64 n = 1; n <= horizon; ++n) all[n - 1] = n;
    return Verdict::holds(horizon, std::move(all));
  }
  u64 last = violations.back();
  Verdict v;
  if (last < tail_start(horizon)) {
    std::vector<u64> tail;
    for (u64 n = last + 1; n <= horizon; ++n) tail.push_back(n);
    v = Verdict::holds(horizon, std::move(tail));
  } else if (last >= persistent_start(horizon)) {
    v = Verdict::fails_at(horizon, last);
  } else {
    v = Verdict::unknown(horizon);
  }
  v.violations = violations;
  return v;
}

Verdict relate(Rel r, const IncSeq& a, const IncSeq& b, u64 horizon) {
  if (horizon < 1) fail(errc::invalid_argument, "horizon must be >= 1");
  switch (r) {
    case Rel::le: {
      std::vector<u64> ap = a.prefix(horizon), bp = b.prefix(horizon);
      for (u64 n = 1; n <= horizon; ++n)
        if (ap[n - 1] > bp[n - 1]) return Verdict::fails_at(horizon, n);
      std::vector<u64> all(horizon);
      for (u64 n = 1; n <= horizon; ++n) all[n - 1] = n;
      return Verdict::holds(horizon, std::move(all));
    }
    case Rel::le_star: {
      std::vector<u64> ap = a.prefix(horizon), bp = b.prefix(horizon);
      std::vector<u64> bad;
      for (u64 n = 1; n <= horizon; ++n)
        if (ap[n - 1] > bp[n - 1]) bad.push_back(n);
      return tail_verdict(horizon, bad);
    }
    case Rel::le_inf: {
      std::vector<u64> ap = a.prefix(horizon), bp = b.prefix(horizon);
      std::vector<u64> w;
      for (u64 n = 1; n <= horizon; ++n)
        if (ap[n - 1] <= bp[n - 1]) w.push_back(n);
      if (w.empty()) return Verdict::unknown(horizon);
      return Verdict::holds(horizon, std::move(w));
    }
    case Rel::sqe: {
      std::vector<u64> bp = b.prefix(horizon + 1);
      std::vector<u64> bad;
      for (u64 n = 1; n <= horizon; ++n) {
        u64 below = bp[n - 1] > 1 ? a.rank(bp[n - 1] - 1) : 0;
        if (a.rank(bp[n]) - below < 2) bad.push_back(n);
      }
      return tail_verdict(horizon, bad);
    }
    case Rel::subs: {
      std::vector<u64> ap = a.prefix(horizon);
      std::vector<u64> bad;
      for (u64 n = 1; n <= horizon; ++n)
        if (!b.contains(ap[n - 1])) bad.push_back(n);
      return tail_verdict(horizon, bad);
    }
  }
  fail(errc::invalid_argument, "unknown relation");
}

}  // namespace oival
