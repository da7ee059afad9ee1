#pragma once

#include <utility>
#include <vector>

#include "oival/construct.hpp"
#include "oival/cover.hpp"
#include "oival/point.hpp"
#include "oival/verdict.hpp"

namespace oival {

// Finite stand-in for the sample spaces the procedures run over: explicit
// finite sets plus a staged ordered family with a designated split.
struct Sample {
  std::vector<Point> fin_part;
  ScalePrefix ordered_part;
  u64 split_index = 0;  // 0: no designated split
};

// split_index within range, fin_part duplicate-free.
void check_sample(const Sample& s);

std::vector<Point> sample_points(const Sample& s);  // fin first, then ordered
std::vector<Point> small_points(const Sample& s);   // fin + ordered below the split
std::vector<Point> tail_points(const Sample& s);    // ordered at and after the split

// A cover stream cut to a usable finite length.
struct CoverPrefix {
  CoverStream stream;
  u64 length = 0;
};

struct Selection {
  enum class Kind { one, pair, k_bounded, n_plus_one, finite };
  Kind kind = Kind::finite;
  std::vector<std::vector<u64>> groups;  // chosen member indices, one group per cover
};

// Membership recheck over the sample, kept separate from the choosing code.
// Covers with empty groups offer no membership and are skipped.
struct VerifierReport {
  std::vector<std::vector<u64>> point_misses;  // cover indices missing each point
  Verdict verdict;
};

VerifierReport verify_selection(const std::vector<CoverPrefix>& covers, const Selection& sel,
                                const std::vector<Point>& points);

// Finite selection covering the explicit part first and the leftover points in
// a second pass, covers assigned round-robin.
struct TwoPassResult {
  Selection sel;
  std::vector<std::vector<u64>> first_pass;   // per cover
  std::vector<std::vector<u64>> second_pass;  // per cover
  VerifierReport report;
};
TwoPassResult menger_two_pass(const std::vector<CoverPrefix>& covers, const Sample& sample);

// One member per cover at the pointwise-max entry point of the sample.
// cofinite: entry(x, n) is the least m with x in every member from m on.
// cofinal: entries at or below the cover index collapse to 1.
enum class GammaMode { cofinal, cofinite };
struct GammaSelection {
  Selection sel;
  std::vector<std::vector<u64>> entry;  // per point, per cover
  std::vector<u64> g;
  VerifierReport report;
};
GammaSelection gamma_select_small(const std::vector<CoverPrefix>& covers, const Sample& sample,
                                  GammaMode mode);

// Finite groups over the witness set I, empty groups elsewhere.
struct ScaleSelection {
  Selection sel;
  u64 alpha = 0;             // chosen ordered member, 0 when the scale is empty
  std::vector<u64> witness;  // I
  std::vector<u64> g;        // small-part bound per cover
  VerifierReport report;
};
ScaleSelection bs_select(const std::vector<CoverPrefix>& covers, const Sample& sample,
                         const std::vector<GmExtraction>& gm_outputs);
// Same construction with the group sizes pinned to n+1.
ScaleSelection uid_select(const std::vector<CoverPrefix>& covers, const Sample& sample,
                          const std::vector<GmExtraction>& gm_outputs);

// Exactly two members per cover, chosen through a common block stream.
struct PairSelection {
  Selection sel;
  u64 alpha = 0;
  std::vector<u64> b;        // merged block stream, every closed b-interval
                             // holds a closed block interval of each cover
  std::vector<u64> c;        // per-cover first usable b-interval
  std::vector<u64> witness;  // I
  std::vector<u64> g;
  bool duplicate_pair = false;  // pair filled by repetition (no tail part)
  VerifierReport report;
};
PairSelection utgg_select(const std::vector<CoverPrefix>& covers, const Sample& sample,
                          const std::vector<GmExtraction>& gm_pair_outputs);

// One member per cover at an interval the split tower member omits.
struct TowerSelection {
  Selection sel;
  std::vector<std::vector<u64>> omitted;  // qualifying indices per cover
  std::vector<u64> g;
  VerifierReport report;
};
TowerSelection tower_select(const std::vector<CoverPrefix>& covers, const Sample& sample,
                            const std::vector<GmExtraction>& gm_outputs);

// Splits each cover prefix into disjoint infinite-index classes whose union
// stays point-cofinite on the sample.
struct ThinnedFamilies {
  std::vector<std::vector<std::vector<u64>>> classes;  // cover, class, indices
  std::vector<std::pair<u64, u64>> arranged;  // all classes in one round-robin pass
  std::vector<Verdict> union_gamma;           // per cover, over the class union
};
ThinnedFamilies sinf_thin(const std::vector<CoverPrefix>& covers, const Sample& sample,
                          u64 classes = 2);

// One member per cover over an increasing chain of samples, families thinned
// stage by stage so the tail union stays point-cofinite on each chain element.
struct DiagonalSelection {
  Selection sel;
  std::vector<std::vector<std::vector<u64>>> families;  // stage, cover, survivors
  std::vector<Verdict> stage_gamma;                     // tail union on chain element
  VerifierReport report;                                // over the last chain element
};
DiagonalSelection jordan_diagonal(const std::vector<Sample>& chain,
                                  const std::vector<CoverPrefix>& covers,
                                  std::vector<std::vector<u64>> families = {});

// Iterated split advance over a tower sample: each round extracts a modulus
// chain avoiding the current small part, advances the split to a member
// omitting enough extracted intervals, and keeps the omission subfamily.  The
// rounds feed a diagonal pick over the accumulated chain.
struct CrownRound {
  u64 split = 0;  // ordered index the round advanced to
  GmExtraction gm;
  std::vector<u64> omitted;  // interval indices the new split member omits
  std::vector<u64> family;   // member indices kept for the diagonal
  Verdict small_gamma, deep_gamma;
};
struct CrownResult {
  Selection sel;
  std::vector<CrownRound> rounds;
  std::vector<u64> splits;  // 0 = before the first member, then per round
  DiagonalSelection diag;
  VerifierReport report;
};
CrownResult crown_run(const Sample& sample, const std::vector<CoverStream>& omega_covers,
                      u64 gm_rounds = 8);

}  // namespace oival
