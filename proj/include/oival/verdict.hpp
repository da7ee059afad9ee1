#pragma once

#include <cstdint>
#include <vector>

#include "oival/seq.hpp"

namespace oival {

enum class Outcome { holds, fails, unknown };

// Horizon-bounded answer to an asymptotic question.  `witnesses` carries the
// evidence indices when the answer is positive; `fail_index` the offending
// index otherwise.  Tail-rule checks also record every violating index so a
// negative or undecided answer stays inspectable.
struct Verdict {
  Outcome outcome = Outcome::unknown;
  u64 horizon = 0;
  std::vector<u64> witnesses;
  u64 fail_index = 0;
  std::vector<u64> violations;

  static Verdict holds(u64 horizon, std::vector<u64> w) {
    return Verdict{Outcome::holds, horizon, std::move(w), 0, {}};
  }
  static Verdict fails_at(u64 horizon, u64 idx) {
    return Verdict{Outcome::fails, horizon, {}, idx, {}};
  }
  static Verdict unknown(u64 horizon) { return Verdict{Outcome::unknown, horizon, {}, 0, {}}; }

  bool ok() const { return outcome == Outcome::holds; }
};

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::holds: return "holds";
    case Outcome::fails: return "fails";
    case Outcome::unknown: return "unknown";
  }
  return "?";
}

// Shared tail policy for "almost all" and "infinitely many" questions:
// positions in (h/2, h] must be violation-free for a positive answer, and a
// violation in (3h/4, h] counts as persistent.
inline u64 tail_start(u64 horizon) { return horizon / 2 + 1; }
inline u64 persistent_start(u64 horizon) { return (3 * horizon) / 4 + 1; }

// Applies the tail policy to a sorted violation list over [1, horizon].
Verdict tail_verdict(u64 horizon, const std::vector<u64>& violations);

}  // namespace oival
