#pragma once

#include <optional>
#include <string_view>

#include "oival/seq.hpp"
#include "oival/verdict.hpp"

namespace oival {

// Order relations on increasing streams, evaluated pointwise at a horizon:
//   le       a(n) <= b(n) for all n
//   le_star  a(n) <= b(n) for almost all n
//   le_inf   a(n) <= b(n) for infinitely many n
//   sqe      almost every closed b-interval holds two elements of a
//   subs     a minus b finite (indices of a outside b almost never occur)
enum class Rel { le, le_star, le_inf, sqe, subs };

const char* rel_name(Rel r);
std::optional<Rel> rel_from_name(std::string_view name);

Verdict relate(Rel r, const IncSeq& a, const IncSeq& b, u64 horizon);

}  // namespace oival
