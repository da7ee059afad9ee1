#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "oival/clopen.hpp"
#include "oival/construct.hpp"
#include "oival/point.hpp"
#include "oival/relate.hpp"
#include "oival/seq.hpp"
#include "oival/verdict.hpp"

namespace oival {

enum class BlockGrowth { linear, doubling };

BlockPartition default_partition(BlockGrowth growth);

// {x : m not in x}, with m checked against block n of the partition.
ClopenSet basic_open(const BlockPartition& part, u64 n, u64 m);

// Number of blocks n <= horizon whose whole choice g(n) lands inside s.
u64 hitting_count(const Point& s, const BlockSelector& g, u64 horizon);
std::vector<u64> hitting_indices(const Point& s, const BlockSelector& g, u64 horizon);

// Union of the block choices over the index stream s.
IncSeq perturb(const IncSeq& s, const BlockSelector& g);

// Block indices t and the union s' of their choices, consuming k values of s
// per step so that s(kn) < min I_{t(n)}.  le re-verifies s(i) <= s'(i)
// pointwise; counting re-verifies the stronger bound s(kn) < s'(k(n-1)+1).
struct KunEmbed {
  IncSeq t;
  IncSeq refined;
  Verdict le;
  Verdict counting;
};
KunEmbed kun_embed(u64 k, const BlockSelector& g, const IncSeq& s, u64 horizon);

// Block indices t spaced so that two s-values separate consecutive choices.
// window re-verifies |s' meet (s(n), s(n+2))| <= k for every n.
struct SparseEmbed {
  IncSeq t;
  IncSeq refined;
  Verdict window;
};
SparseEmbed sparse_embed(const IncSeq& s, u64 k, const BlockSelector& g, u64 horizon);

// Guard stream c: each open interval (c(n), c(n+1)) holds more than d(n)
// open a-intervals, where d(n) sums the selector widths up to c(n).  Any s
// omitting (c(n), c(n+1)) then leaves some inner a-interval free of the
// perturbed union.
struct GuardResult {
  std::vector<u64> c;
  std::vector<u64> d;
};
GuardResult perturbation_guard(const BlockSelector& g, const IncSeq& a, u64 rounds);

// Re-checks the guard promise for one s: every c-interval omitted by s must
// contain an open a-interval omitted by perturb(s, g).  Witnesses list the
// omitted c-interval indices; a violation is an omitted c-interval with no
// free inner a-interval.
Verdict guard_check(const GuardResult& guard, const BlockSelector& g, const IncSeq& a,
                    const IncSeq& s);

enum class HittingShape { one, constant_k, identity_width };

const char* hitting_shape_name(HittingShape s);

// Turns a per-block selection into the selector it induces, finds the first
// sample point containing enough of the chosen groups, and lists the block
// indices where that point defeats the selection.  An undefeated selection is
// a report, not an error.  Group sizes must be all equal or exactly n per
// block; anything else fits no selector shape.
struct DefeatReport {
  BlockSelector induced;
  HittingShape shape = HittingShape::one;
  u64 shape_k = 0;          // group size when shape is constant_k
  bool defeated = false;
  u64 sample_index = 0;     // 1-based position of the defeating point
  std::vector<u64> failures;
  u64 threshold = 0;
};
DefeatReport defeat_gamma_selection(const BlockPartition& part,
                                    const std::vector<std::pair<Point, BlockSelector>>& sample,
                                    const std::vector<std::vector<u64>>& groups,
                                    u64 threshold = 0);

// Lowest-index choice in every block, one group per block up to length.
std::vector<std::vector<u64>> greedy_groups(const BlockSelector& g, u64 length);

// Refinement plan: embed every member of the base prefix through the block
// machinery.  The optional relation is re-verified between each base member
// and its refinement.
struct RefinePlan {
  enum class Embed { kun, sparse, perturb };
  Embed embed = Embed::kun;
  BlockSelector selector;
  ScalePrefix base;
  u64 k = 1;
  std::optional<Rel> relation;
  u64 horizon = 1000;
};

struct RefineResult {
  ScalePrefix refined;
  std::vector<IncSeq> index_streams;   // chosen block indices per member
  std::vector<Verdict> certs;          // per member embed guarantee
  std::vector<Verdict> counting;       // kun only, one per member
  std::vector<Verdict> refinement;     // plan relation per member, if any
};
RefineResult run_refine_plan(const RefinePlan& plan);

// Named plans: u2nots1, uidnotuk, uk+1notuk, ufognonuidgg.  The base kind and
// block shape are validated against the plan's requirements.
RefinePlan theorem_plan(std::string_view name, ScalePrefix base, u64 k = 2,
                        u64 horizon = 1000);

}  // namespace oival
