#pragma once

#include <string_view>
#include <vector>

#include "oival/relate.hpp"
#include "oival/seq.hpp"
#include "oival/verdict.hpp"

namespace oival {

// Finite stand-in for a dominating or unbounded family of functions.
struct OracleFamily {
  enum class Role { dominating, unbounded };
  std::vector<IncSeq> members;
  Role role = Role::dominating;
};

// Validates non-emptiness and descriptor-level distinctness.
void check_oracle(const OracleFamily& fam);

// Staged prefix of an ordered family.  The kind fixes the pairwise invariant:
//   le_star_scale : relate(le_star, s_i, s_j) holds for i < j
//   sq_scale      : relate(sqe, s_i, s_j) holds for i < j
//   tower         : relate(subs, s_j, s_i) holds for i < j
//   unbounded_set : no pairwise constraint
struct ScalePrefix {
  enum class Kind { le_star_scale, sq_scale, tower, unbounded_set };
  Kind kind = Kind::unbounded_set;
  std::vector<IncSeq> members;
};

const char* scale_kind_name(ScalePrefix::Kind k);
ScalePrefix::Kind scale_kind_from_name(std::string_view name);

// Pairwise invariant checks, one verdict per ordered pair (i, j), i < j,
// in lexicographic order.
std::vector<Verdict> verify_scale_prefix(const ScalePrefix& p, u64 horizon);

// Complement splitter.  a takes every other run of the iterate of g, so both
// sides inherit infinitely many full runs, and g is dominated infinitely often
// by each side.
struct Split {
  IncSeq a, a_compl;
  Verdict wa, wac;  // g infinitely-often below a, a_compl
};
Split split_by_g(const IncSeq& g, u64 horizon = 10000);

// A stream omitting at least `rounds` closed y-intervals for every y in Y,
// built by round-robin gap insertion.  witness_indices[i] lists the omitted
// closed interval indices of Y[i].
struct OmitFamilyResult {
  IncSeq s;
  std::vector<std::vector<u64>> witness_indices;
};
OmitFamilyResult omit_closed_family(const std::vector<IncSeq>& Y, u64 rounds);

// Index set b and the run union c over a with every member of Y infinitely
// often below c.  omitted_quotient[i] certifies the closed quotient-interval
// omissions that generate the witnesses.
struct DominatorResult {
  IncSeq b, c;
  std::vector<Verdict> member_verdicts;            // relate(le_inf, y, c)
  std::vector<std::vector<u64>> omitted_quotient;  // per member
};
DominatorResult interval_union_dominator(const std::vector<IncSeq>& Y, const IncSeq& a,
                                         u64 rounds, u64 horizon = 100000);

// One diagonal stage: s with Y infinitely often below s, and a infinitely
// often below the complement of s.
struct SplitStepResult {
  IncSeq s, s_compl;
  IncSeq b, b_compl;  // run index set over the iterate of a, and its complement
  std::vector<Verdict> member_verdicts;  // relate(le_inf, y, s)
  Verdict compl_verdict;                 // relate(le_inf, a, s_compl)
};
SplitStepResult split_step(const std::vector<IncSeq>& Y, const IncSeq& a, u64 rounds,
                           u64 horizon = 10000);

// Next scale member.  le_star kind: exact pointwise max of the prior members
// and f, plus one.  sqe kind: an arithmetic stream coarse enough that every
// closed interval holds two points of each prior member, eventually above f.
// Inputs must have affine tails.
IncSeq scale_step(ScalePrefix::Kind kind, const ScalePrefix& prior, const IncSeq& f,
                  u64 horizon = 10000);

// Next tower member: a subset of the last prior member dominating f pointwise.
IncSeq tower_step(const ScalePrefix& prior, const IncSeq& f, u64 horizon = 10000);

// Transforms a le_star scale into tower prefixes t_i = {n : s_i(n) <= g(n)},
// certifying that t_j minus t_i stays below the crossing index of s_i, s_j.
struct TowerTransform {
  std::vector<std::vector<u64>> prefixes;
  struct Cert {
    u64 i, j;       // 1-based member indices, i < j
    u64 crossing;   // least C with s_i(n) <= s_j(n) for all n in [C, horizon]
    bool bounded;   // every element of t_j minus t_i is < crossing
  };
  std::vector<Cert> certs;
};
TowerTransform tower_from_scale(const ScalePrefix& scale, const IncSeq& g, u64 horizon);

// Elements of the intersection of the family up to the horizon.  The pairwise
// stage pinpoints which pair fails when the family is not centered.
std::vector<u64> pseudointersection(const std::vector<IncSeq>& family, u64 horizon);

// Pairwise disjoint finite subsets, |B_i| = take, picked round-robin: for
// k = 1, 2, ..., for i = 1..min(k, N), the least element of A_i not yet used.
std::vector<std::vector<u64>> disjointify(const std::vector<IncSeq>& families, u64 take);

// Runs `steps` staged constructions against the oracle, cycling its members.
// unbounded_set kind runs split_step stages against the growing member list.
struct BuildResult {
  ScalePrefix prefix;
  std::vector<IncSeq> complements;  // split stages only
  std::vector<Verdict> checks;      // pairwise invariant verdicts at the end
};
BuildResult build_prefix(ScalePrefix::Kind kind, const OracleFamily& oracle, u64 steps,
                         u64 horizon, u64 rounds);

}  // namespace oival
