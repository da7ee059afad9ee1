#pragma once

#include <cstdint>

#include "oival/seq.hpp"

namespace oival {

// Splitmix64 stream: platform-independent, so identical seeds give identical
// suites and traces everywhere.
struct Rng {
  u64 state;

  explicit Rng(u64 seed) : state(seed) {}

  u64 next() {
    u64 z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0, n)
  u64 below(u64 n) {
    u64 mask = ~u64(0);
    if (n == 0) return 0;
    u64 bound = mask - mask % n;
    u64 v;
    do {
      v = next();
    } while (v >= bound);
    return v % n;
  }
  // uniform in [lo, hi]
  u64 range(u64 lo, u64 hi) { return lo + below(hi - lo + 1); }

  Rng fork(u64 tag) {
    Rng child(state ^ (tag * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull));
    child.next();
    return child;
  }
};

struct EventuallyArithOpts {
  u64 max_prefix = 5;
  u64 start_max = 40;
  u64 step_max = 4;
  bool ensure_gap = false;  // guarantee the stream misses some natural
};

// Random member of the explicit-prefix + arithmetic-tail family, the stock
// family for seeded property runs: closed under the workbench constructions
// and exactly evaluable at any index.
inline IncSeq random_eventually_arith(Rng& rng, const EventuallyArithOpts& o = {}) {
  u64 plen = rng.below(o.max_prefix + 1);
  std::vector<u64> prefix;
  u64 last = 0;
  for (u64 i = 0; i < plen; ++i) {
    last += rng.range(1, 1 + o.start_max / 4);
    prefix.push_back(last);
  }
  u64 start = last + rng.range(1, o.start_max);
  u64 step = rng.range(1, o.step_max);
  IncSeq s = IncSeq::with_prefix(std::move(prefix), start, step);
  if (o.ensure_gap && s.is_naturals())
    s = IncSeq::arithmetic(2, 1);  // same shape, shifted off the full naturals
  return s;
}

}  // namespace oival
