#pragma once

#include <functional>
#include <string>
#include <vector>

#include "oival/clopen.hpp"
#include "oival/verdict.hpp"

namespace oival {

// Request for a fresh cover member containing every subset of
// [1, powerset_bound] and every listed extra trace, skipping excluded indices.
struct OmegaQuery {
  u64 powerset_bound = 0;
  std::vector<u64> extra_masks;
  std::vector<u64> exclude;
};

// Enumerated family of clopen sets.  size == 0 means the enumerator is total
// on all indices.  The omega hook answers OmegaQuery or raises
// omega_query_failed; suppliers without one leave it empty.
struct CoverStream {
  std::function<ClopenSet(u64)> member;  // 1-based
  u64 size = 0;
  bool no_finite_subcover = false;
  std::function<u64(const OmegaQuery&)> omega;

  bool has_omega() const { return static_cast<bool>(omega); }
};

// O_m = {x : m not in x}; unbounded, omega-capable, no finite subcover.
CoverStream om_cover();

// Wraps an explicit member list; the omega hook scans indices in order and
// checks each candidate exhaustively.
CoverStream explicit_cover(std::vector<ClopenSet> members, bool no_finite_subcover = false);

// Pairwise-disjoint refinement: member n minus the union of members before it.
std::vector<ClopenSet> refine_disjoint(const CoverStream& cover, u64 count);

// Running unions V_m = U_1 | ... | U_m.
std::vector<ClopenSet> increasing_union_cover(const std::vector<ClopenSet>& prefix);

struct ReclawResult {
  std::vector<u64> values;  // values[n-1] = the unique m with x in U^n_m
  std::vector<u64> moduli;  // trace depth certifying the choice at n
};

// The continuous coding map: row n of `covers` must be pairwise disjoint and
// must capture x.  Points agreeing with x up to moduli[n-1] get the same
// value at n.
ReclawResult reclaw_map(const std::vector<std::vector<ClopenSet>>& covers, const Point& x);

struct Classification {
  // Witness layout: is_omega indexes subsets of the sample by bitmask and
  // records the covering member per subset; is_point_cofinite aggregates all
  // points' missing indices under the tail policy.
  Verdict is_omega;
  Verdict is_point_cofinite;
  std::vector<std::vector<u64>> point_misses;  // aligned with the sample
};

Classification classify(const std::vector<ClopenSet>& prefix, const std::vector<Point>& sample);

struct GmExtraction {
  u64 k = 0;
  std::vector<u64> a;        // a(1) = 1, then one modulus per chosen member
  std::vector<u64> members;  // chosen member indices, pairwise distinct
  std::vector<u64> b;        // b(n) = a((k+1)(n-1)+1); equals a when k = 0
  std::vector<std::vector<u64>> groups;  // N rows of k+1 member indices
};

// Interval extraction against an omega-capable cover: after N rounds, any x
// with at most k elements strictly between b(n) and b(n+1) lies in the union
// of group n.  k = 0 is the plain omission form.
// extra_masks constrain every omega query: chosen members must admit them.
GmExtraction gm_extract(const CoverStream& cover, u64 k, u64 N,
                        const std::vector<u64>& extra_masks = {});

struct CantorDiagonal {
  std::vector<u64> selected;            // chosen source index per position
  u64 bound = 0;                        // per-row truncation for the encoding
  std::vector<mpz_class> encoded;       // the diagonal point, ascending
  std::vector<std::vector<u64>> rows;   // row n = selected point's elements <= bound
  std::vector<u64> mismatches;          // decode failures; empty means exact
};

// Encode position n, value v into the fixed odd-dyadic slot.
mpz_class cantor_pair(u64 n, u64 v);

// Diagonal against {f : f(n) != x_m} column families: position n carries
// x_{selections[n-1]}, so the diagonal escapes every selected member.  Each
// row is re-decoded from the encoding and compared back to its source.
CantorDiagonal cantor_defeater(const std::vector<Point>& xs,
                               const std::vector<u64>& selections, u64 bound = 64);

}  // namespace oival
