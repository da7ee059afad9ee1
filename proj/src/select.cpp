#include "oival/select.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "oival/error.hpp"

namespace oival {

namespace {

std::string ord(u64 n) { return std::to_string(n); }

bool member_has(const CoverPrefix& c, u64 idx, const Point& x) {
  return c.stream.member(idx).contains_point(x);
}

// bits of x within [1, 64]
u64 trace64(const Point& x) {
  u64 m = 0;
  for (u64 v : x.elements_below(64)) m |= u64(1) << (v - 1);
  return m;
}

// x avoids the open interval between two consecutive block values
bool omits_open(const Point& x, u64 lo, u64 hi) {
  return x.rank(hi - 1) == x.rank(lo);
}

std::vector<u64> sorted_unique(std::vector<u64> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

u64 required_rounds(u64 range) { return std::max<u64>(1, range / 2); }

Sample below_split(const Sample& s, u64 alpha) {
  Sample small;
  small.fin_part = s.fin_part;
  small.ordered_part.kind = s.ordered_part.kind;
  for (u64 j = 1; j < alpha; ++j)
    small.ordered_part.members.push_back(s.ordered_part.members[j - 1]);
  return small;
}

// Least prefix position from which every member holds every sample point,
// per point and per cover.  Throws when a point leaves the last member.
std::vector<std::vector<u64>> entry_table(const std::vector<CoverPrefix>& covers,
                                          const std::vector<Point>& pts) {
  std::vector<std::vector<u64>> entry(pts.size(), std::vector<u64>(covers.size(), 1));
  for (size_t p = 0; p < pts.size(); ++p)
    for (size_t n = 0; n < covers.size(); ++n) {
      u64 L = covers[n].length;
      u64 e = L + 1;
      for (u64 m = L; m >= 1; --m) {
        if (!member_has(covers[n], m, pts[p])) break;
        e = m;
      }
      if (e > L)
        fail(errc::prefix_too_short, "point " + ord(p + 1) + " stays outside cover " +
                                         ord(n + 1) + " at the prefix end");
      entry[p][n] = e;
    }
  return entry;
}

void bound_groups(const Selection& sel) {
  for (size_t n = 0; n < sel.groups.size(); ++n) {
    bool ok = true;
    switch (sel.kind) {
      case Selection::Kind::one: ok = sel.groups[n].size() <= 1; break;
      case Selection::Kind::pair: ok = sel.groups[n].size() == 2; break;
      case Selection::Kind::n_plus_one: ok = sel.groups[n].size() <= n + 2; break;
      default: break;
    }
    if (!ok)
      fail(errc::invalid_argument,
           "group " + ord(n + 1) + " breaks the selection kind bound");
  }
}

}  // namespace

void check_sample(const Sample& s) {
  if (s.split_index > s.ordered_part.members.size())
    fail(errc::invalid_argument, "split index beyond the ordered part");
  for (const Point& x : s.fin_part)
    if (!x.is_finite())
      fail(errc::invalid_argument, "finite part holds an infinite point");
  for (size_t i = 0; i < s.fin_part.size(); ++i)
    for (size_t j = i + 1; j < s.fin_part.size(); ++j)
      if (s.fin_part[i].finite_elements() == s.fin_part[j].finite_elements())
        fail(errc::invalid_argument, "finite part holds duplicates");
}

std::vector<Point> sample_points(const Sample& s) {
  std::vector<Point> pts = s.fin_part;
  for (const IncSeq& m : s.ordered_part.members) pts.push_back(Point::infinite(m));
  return pts;
}

std::vector<Point> small_points(const Sample& s) {
  std::vector<Point> pts = s.fin_part;
  for (u64 j = 1; j < s.split_index; ++j)
    pts.push_back(Point::infinite(s.ordered_part.members[j - 1]));
  return pts;
}

std::vector<Point> tail_points(const Sample& s) {
  std::vector<Point> pts;
  if (s.split_index == 0) return pts;
  for (u64 j = s.split_index; j <= s.ordered_part.members.size(); ++j)
    pts.push_back(Point::infinite(s.ordered_part.members[j - 1]));
  return pts;
}

VerifierReport verify_selection(const std::vector<CoverPrefix>& covers, const Selection& sel,
                                const std::vector<Point>& points) {
  u64 H = covers.size();
  VerifierReport r;
  r.point_misses.assign(points.size(), {});
  std::vector<u64> merged;
  for (size_t p = 0; p < points.size(); ++p)
    for (u64 n = 1; n <= H; ++n) {
      const std::vector<u64>& grp = sel.groups[n - 1];
      if (grp.empty()) continue;
      bool in = false;
      for (u64 idx : grp)
        if (member_has(covers[n - 1], idx, points[p])) {
          in = true;
          break;
        }
      if (!in) {
        r.point_misses[p].push_back(n);
        merged.push_back(n);
      }
    }
  r.verdict = tail_verdict(H, sorted_unique(std::move(merged)));
  return r;
}

TwoPassResult menger_two_pass(const std::vector<CoverPrefix>& covers, const Sample& sample) {
  check_sample(sample);
  u64 H = covers.size();
  TwoPassResult r;
  r.first_pass.assign(H, {});
  r.second_pass.assign(H, {});
  r.sel.kind = Selection::Kind::finite;
  r.sel.groups.assign(H, {});

  auto place = [&](const Point& x, u64 slot, std::vector<std::vector<u64>>& pass) {
    for (u64 t = 0; t < H; ++t) {
      u64 c = (slot + t) % H;
      for (u64 m = 1; m <= covers[c].length; ++m)
        if (member_has(covers[c], m, x)) {
          pass[c].push_back(m);
          return;
        }
    }
    fail(errc::not_coverable, "no member holds " + x.to_spec());
  };

  std::vector<Point> pts = sample_points(sample);
  if (!pts.empty() && H == 0) fail(errc::not_coverable, "no covers supplied");
  for (size_t i = 0; i < sample.fin_part.size(); ++i)
    place(sample.fin_part[i], i % std::max<u64>(H, 1), r.first_pass);

  // leftovers: points the first pass picks do not reach
  u64 slot = 0;
  for (const IncSeq& m : sample.ordered_part.members) {
    Point x = Point::infinite(m);
    bool covered = false;
    for (u64 c = 0; c < H && !covered; ++c)
      for (u64 idx : r.first_pass[c])
        if (member_has(covers[c], idx, x)) {
          covered = true;
          break;
        }
    if (!covered) place(x, slot++ % std::max<u64>(H, 1), r.second_pass);
  }

  for (u64 c = 0; c < H; ++c) {
    std::vector<u64> g = r.first_pass[c];
    g.insert(g.end(), r.second_pass[c].begin(), r.second_pass[c].end());
    r.sel.groups[c] = sorted_unique(std::move(g));
  }

  // one-shot covering check: each point must land somewhere
  r.report.point_misses.assign(pts.size(), {});
  std::vector<u64> witness;
  for (size_t p = 0; p < pts.size(); ++p) {
    u64 found = 0;
    for (u64 n = 1; n <= H; ++n) {
      if (r.sel.groups[n - 1].empty()) continue;
      bool in = false;
      for (u64 idx : r.sel.groups[n - 1])
        if (member_has(covers[n - 1], idx, pts[p])) {
          in = true;
          break;
        }
      if (in) {
        if (!found) found = n;
      } else {
        r.report.point_misses[p].push_back(n);
      }
    }
    if (!found) {
      r.report.verdict = Verdict::fails_at(H, p + 1);
      return r;
    }
    witness.push_back(found);
  }
  r.report.verdict = Verdict::holds(H, std::move(witness));
  return r;
}

GammaSelection gamma_select_small(const std::vector<CoverPrefix>& covers, const Sample& sample,
                                  GammaMode mode) {
  check_sample(sample);
  std::vector<Point> pts = sample_points(sample);
  GammaSelection r;
  r.entry = entry_table(covers, pts);
  if (mode == GammaMode::cofinal)
    for (auto& row : r.entry)
      for (size_t n = 0; n < row.size(); ++n)
        if (row[n] <= n + 1) row[n] = 1;
  r.g.assign(covers.size(), 1);
  for (const auto& row : r.entry)
    for (size_t n = 0; n < row.size(); ++n) r.g[n] = std::max(r.g[n], row[n]);
  r.sel.kind = Selection::Kind::one;
  for (u64 gn : r.g) r.sel.groups.push_back({gn});
  bound_groups(r.sel);
  r.report = verify_selection(covers, r.sel, pts);
  return r;
}

namespace {

ScaleSelection scale_select(const std::vector<CoverPrefix>& covers, const Sample& sample,
                            const std::vector<GmExtraction>& gm_outputs,
                            Selection::Kind kind) {
  check_sample(sample);
  u64 H = covers.size();
  if (gm_outputs.size() != H)
    fail(errc::invalid_argument, "one extraction per cover required");
  for (u64 n = 1; n <= H; ++n) {
    if (gm_outputs[n - 1].k != 0)
      fail(errc::invalid_argument, "extraction " + ord(n) + " is not plain omission form");
    if (gm_outputs[n - 1].a.size() < n + 1)
      fail(errc::invalid_argument, "chain " + ord(n) + " too short for its cover");
  }

  ScaleSelection r;
  r.sel.kind = kind;
  u64 P = sample.ordered_part.members.size();

  if (P == 0) {
    GammaSelection g = gamma_select_small(covers, sample, GammaMode::cofinite);
    r.alpha = 0;
    for (u64 n = 1; n <= H; ++n) r.witness.push_back(n);
    r.g = g.g;
    r.sel.groups = g.sel.groups;
    bound_groups(r.sel);
    r.report = verify_selection(covers, r.sel, sample_points(sample));
    return r;
  }
  if (sample.ordered_part.kind != ScalePrefix::Kind::le_star_scale)
    fail(errc::invalid_argument, "ordered part is not a le_star scale");

  u64 R0 = required_rounds(H);
  for (u64 j = P; j >= 1; --j) {
    std::vector<u64> sj = sample.ordered_part.members[j - 1].prefix(H);
    std::vector<u64> I;
    for (u64 n = 1; n <= H; ++n)
      if (gm_outputs[n - 1].a[n] < sj[n - 1]) I.push_back(n);
    if (I.size() >= R0) {
      r.alpha = j;
      r.witness = std::move(I);
      break;
    }
  }
  if (r.alpha == 0)
    fail(errc::empty_witness_set, "no ordered member leaves enough witness indices");

  GammaSelection g =
      gamma_select_small(covers, below_split(sample, r.alpha), GammaMode::cofinite);
  r.g = g.g;
  r.sel.groups.assign(H, {});
  for (u64 n : r.witness) {
    std::vector<u64> grp(gm_outputs[n - 1].members.begin(),
                         gm_outputs[n - 1].members.begin() + n);
    grp.push_back(r.g[n - 1]);
    r.sel.groups[n - 1] = sorted_unique(std::move(grp));
  }
  bound_groups(r.sel);
  r.report = verify_selection(covers, r.sel, sample_points(sample));
  return r;
}

}  // namespace

ScaleSelection bs_select(const std::vector<CoverPrefix>& covers, const Sample& sample,
                         const std::vector<GmExtraction>& gm_outputs) {
  return scale_select(covers, sample, gm_outputs, Selection::Kind::finite);
}

ScaleSelection uid_select(const std::vector<CoverPrefix>& covers, const Sample& sample,
                          const std::vector<GmExtraction>& gm_outputs) {
  return scale_select(covers, sample, gm_outputs, Selection::Kind::n_plus_one);
}

PairSelection utgg_select(const std::vector<CoverPrefix>& covers, const Sample& sample,
                          const std::vector<GmExtraction>& gm_pair_outputs) {
  check_sample(sample);
  u64 H = covers.size();
  if (gm_pair_outputs.size() != H)
    fail(errc::invalid_argument, "one extraction per cover required");
  for (u64 n = 1; n <= H; ++n)
    if (gm_pair_outputs[n - 1].k != 1)
      fail(errc::invalid_argument, "extraction " + ord(n) + " is not in pair form");

  PairSelection r;
  r.sel.kind = Selection::Kind::pair;
  u64 P = sample.ordered_part.members.size();

  if (P == 0) {
    GammaSelection g = gamma_select_small(covers, sample, GammaMode::cofinite);
    r.duplicate_pair = true;
    r.g = g.g;
    for (u64 gn : g.g) r.sel.groups.push_back({gn, gn});
    bound_groups(r.sel);
    r.report = verify_selection(covers, r.sel, sample_points(sample));
    return r;
  }
  if (sample.ordered_part.kind != ScalePrefix::Kind::sq_scale)
    fail(errc::invalid_argument, "ordered part is not an interval scale");

  // merged block stream: every closed interval holds a closed block interval
  // of every cover
  r.b = {1};
  for (;;) {
    u64 next = 0;
    bool room = true;
    for (u64 n = 1; n <= H && room; ++n) {
      const std::vector<u64>& bn = gm_pair_outputs[n - 1].b;
      size_t i = 0;
      while (i < bn.size() && bn[i] < r.b.back()) ++i;
      if (i + 1 >= bn.size()) {
        room = false;
        break;
      }
      next = std::max(next, bn[i + 1]);
    }
    if (!room) break;
    r.b.push_back(next);
  }
  if (r.b.size() < 2) fail(errc::invalid_argument, "block streams too short to merge");
  u64 M = r.b.size() - 1;

  // first block interval of each cover inside every merged interval
  std::vector<std::vector<u64>> idx(H, std::vector<u64>(M + 1, 0));
  for (u64 n = 1; n <= H; ++n) {
    const std::vector<u64>& bn = gm_pair_outputs[n - 1].b;
    for (u64 m = 1; m <= M; ++m)
      for (size_t i = 0; i + 1 < bn.size(); ++i)
        if (r.b[m - 1] <= bn[i] && bn[i + 1] <= r.b[m]) {
          idx[n - 1][m] = i + 1;
          break;
        }
  }
  for (u64 n = 1; n <= H; ++n) {
    u64 start = M + 1;
    for (u64 m = M; m >= 1; --m) {
      if (idx[n - 1][m] == 0) break;
      start = m;
    }
    u64 cn = std::max(start, n);
    if (n > 1) cn = std::max(cn, r.c.back() + 1);
    if (cn > M)
      fail(errc::empty_witness_set, "cover " + ord(n) + " has no usable merged interval");
    r.c.push_back(cn);
  }

  u64 R0 = required_rounds(H);
  for (u64 j = P; j >= 1; --j) {
    Point x = Point::infinite(sample.ordered_part.members[j - 1]);
    std::vector<u64> I;
    for (u64 m = 1; m <= M; ++m)
      if (omits_open(x, r.b[m - 1], r.b[m])) I.push_back(m);
    if (I.size() >= R0) {
      r.alpha = j;
      r.witness = std::move(I);
      break;
    }
  }
  if (r.alpha == 0)
    fail(errc::empty_witness_set, "no ordered member omits enough merged intervals");

  // pair union subfamilies along the merged axis, from each cover's offset on
  std::vector<CoverPrefix> sub(H);
  for (u64 n = 1; n <= H; ++n) {
    CoverStream orig = covers[n - 1].stream;
    std::vector<u64> members = gm_pair_outputs[n - 1].members;
    std::vector<u64> row = idx[n - 1];
    u64 cn = r.c[n - 1];
    sub[n - 1].length = M - cn + 1;
    sub[n - 1].stream.size = M - cn + 1;
    sub[n - 1].stream.member = [orig, members, row, cn](u64 p) {
      u64 i = row[cn + p - 1];
      return orig.member(members[2 * i - 2]).union_with(orig.member(members[2 * i - 1]));
    };
  }
  GammaSelection g =
      gamma_select_small(sub, below_split(sample, r.alpha), GammaMode::cofinite);

  for (u64 n = 1; n <= H; ++n) {
    u64 m0 = r.c[n - 1] + g.g[n - 1] - 1;
    u64 gn = 0;
    for (u64 m : r.witness)
      if (m >= m0) {
        gn = m;
        break;
      }
    if (gn == 0)
      fail(errc::empty_witness_set, "cover " + ord(n) + " has no witness interval in reach");
    r.g.push_back(gn);
    u64 i = idx[n - 1][gn];
    r.sel.groups.push_back({gm_pair_outputs[n - 1].members[2 * i - 2],
                            gm_pair_outputs[n - 1].members[2 * i - 1]});
  }
  bound_groups(r.sel);
  r.report = verify_selection(covers, r.sel, sample_points(sample));
  return r;
}

TowerSelection tower_select(const std::vector<CoverPrefix>& covers, const Sample& sample,
                            const std::vector<GmExtraction>& gm_outputs) {
  check_sample(sample);
  u64 H = covers.size();
  if (gm_outputs.size() != H)
    fail(errc::invalid_argument, "one extraction per cover required");
  if (sample.ordered_part.kind != ScalePrefix::Kind::tower || sample.split_index == 0)
    fail(errc::invalid_argument, "needs a tower sample with a designated split");
  for (u64 n = 1; n <= H; ++n)
    if (gm_outputs[n - 1].k != 0)
      fail(errc::invalid_argument, "extraction " + ord(n) + " is not plain omission form");

  Point split = Point::infinite(sample.ordered_part.members[sample.split_index - 1]);
  TowerSelection r;
  r.sel.kind = Selection::Kind::one;
  for (u64 n = 1; n <= H; ++n) {
    const std::vector<u64>& a = gm_outputs[n - 1].a;
    std::vector<u64> I;
    for (u64 m = n; m + 1 <= a.size(); ++m)
      if (omits_open(split, a[m - 1], a[m])) I.push_back(m);
    if (I.empty())
      fail(errc::empty_witness_set, "cover " + ord(n) + " has no omitted interval");
    r.omitted.push_back(std::move(I));
  }

  std::vector<CoverPrefix> sub(H);
  for (u64 n = 1; n <= H; ++n) {
    CoverStream orig = covers[n - 1].stream;
    std::vector<u64> members = gm_outputs[n - 1].members;
    std::vector<u64> I = r.omitted[n - 1];
    sub[n - 1].length = I.size();
    sub[n - 1].stream.size = I.size();
    sub[n - 1].stream.member = [orig, members, I](u64 p) {
      return orig.member(members[I[p - 1] - 1]);
    };
  }
  Sample small = below_split(sample, sample.split_index);
  GammaSelection g = gamma_select_small(sub, small, GammaMode::cofinite);

  for (u64 n = 1; n <= H; ++n) {
    u64 m = r.omitted[n - 1][g.g[n - 1] - 1];
    r.g.push_back(m);
    r.sel.groups.push_back({gm_outputs[n - 1].members[m - 1]});
  }
  bound_groups(r.sel);
  r.report = verify_selection(covers, r.sel, sample_points(sample));
  return r;
}

ThinnedFamilies sinf_thin(const std::vector<CoverPrefix>& covers, const Sample& sample,
                          u64 classes) {
  check_sample(sample);
  if (classes < 1) fail(errc::invalid_argument, "need at least one class");
  std::vector<Point> pts = sample_points(sample);
  ThinnedFamilies r;
  for (size_t c = 0; c < covers.size(); ++c) {
    std::vector<IncSeq> ids(classes, IncSeq::identity());
    // the sharing staircase keeps feeding finished classes, so shrink the
    // take until every index fits the prefix
    std::vector<std::vector<u64>> cls;
    u64 take = covers[c].length / classes;
    for (; take >= 1; --take) {
      cls = disjointify(ids, take);
      u64 top = 0;
      for (const auto& b : cls)
        for (u64 v : b) top = std::max(top, v);
      if (top <= covers[c].length) break;
    }
    if (take == 0)
      fail(errc::prefix_too_short, "cover " + ord(c + 1) + " too short to split");
    r.classes.push_back(std::move(cls));

    std::vector<u64> all;
    for (const auto& cls : r.classes.back())
      all.insert(all.end(), cls.begin(), cls.end());
    std::sort(all.begin(), all.end());
    std::vector<ClopenSet> sets;
    for (u64 idx : all) sets.push_back(covers[c].stream.member(idx));
    r.union_gamma.push_back(classify(sets, pts).is_point_cofinite);
  }
  for (u64 rank = 0;; ++rank) {
    bool any = false;
    for (size_t c = 0; c < r.classes.size(); ++c)
      for (const auto& cls : r.classes[c])
        if (rank < cls.size()) {
          r.arranged.emplace_back(c + 1, cls[rank]);
          any = true;
        }
    if (!any) break;
  }
  return r;
}

DiagonalSelection jordan_diagonal(const std::vector<Sample>& chain,
                                  const std::vector<CoverPrefix>& covers,
                                  std::vector<std::vector<u64>> families) {
  u64 K = chain.size();
  if (K == 0 || covers.size() != K)
    fail(errc::invalid_argument, "chain and covers must align, one cover per element");
  for (const Sample& s : chain) check_sample(s);
  for (u64 st = 1; st < K; ++st) {
    std::set<std::string> later;
    for (const Point& p : sample_points(chain[st])) later.insert(p.to_spec());
    for (const Point& p : sample_points(chain[st - 1]))
      if (!later.count(p.to_spec()))
        fail(errc::invalid_argument,
             "chain element " + ord(st + 1) + " drops " + p.to_spec());
  }
  if (families.empty())
    for (const CoverPrefix& c : covers) {
      std::vector<u64> full(c.length);
      for (u64 m = 1; m <= c.length; ++m) full[m - 1] = m;
      families.push_back(std::move(full));
    }
  if (families.size() != K) fail(errc::invalid_argument, "one family per cover required");

  // pairwise disjoint starting families, least unused index round robin
  u64 take = families[0].size();
  for (const auto& f : families) take = std::min<u64>(take, f.size());
  take /= K;
  if (take == 0) fail(errc::prefix_too_short, "families too small to share out");
  std::vector<std::vector<u64>> fams(K);
  std::set<u64> used;
  for (u64 round = 1; take > 0; ++round) {
    bool moved = false;
    for (u64 i = 0; i < std::min<u64>(round, K); ++i) {
      if (fams[i].size() >= take) continue;
      for (u64 idx : families[i])
        if (!used.count(idx)) {
          used.insert(idx);
          fams[i].push_back(idx);
          moved = true;
          break;
        }
    }
    bool full = true;
    for (const auto& f : fams) full = full && f.size() >= take;
    if (full) break;
    if (!moved && round > K)
      fail(errc::prefix_too_short, "families exhausted before sharing out");
  }

  DiagonalSelection r;
  r.sel.kind = Selection::Kind::one;
  r.sel.groups.assign(K, {});
  for (u64 st = 1; st <= K; ++st) {
    for (u64 c = st; c <= K; ++c) {
      std::vector<u64> kept;
      for (size_t p = 0; p < fams[c - 1].size(); p += 2) kept.push_back(fams[c - 1][p]);
      fams[c - 1] = std::move(kept);
    }
    r.families.push_back(fams);

    std::vector<ClopenSet> tail_union;
    for (u64 rank = 0;; ++rank) {
      bool any = false;
      for (u64 c = st; c <= K; ++c)
        if (rank < fams[c - 1].size()) {
          tail_union.push_back(covers[c - 1].stream.member(fams[c - 1][rank]));
          any = true;
        }
      if (!any) break;
    }
    r.stage_gamma.push_back(
        classify(tail_union, sample_points(chain[st - 1])).is_point_cofinite);

    if (fams[st - 1].empty())
      fail(errc::prefix_too_short, "stage " + ord(st) + " exhausted its family");
    r.sel.groups[st - 1] = {fams[st - 1].front()};
  }
  bound_groups(r.sel);
  r.report = verify_selection(covers, r.sel, sample_points(chain.back()));
  return r;
}

CrownResult crown_run(const Sample& sample, const std::vector<CoverStream>& omega_covers,
                      u64 gm_rounds) {
  check_sample(sample);
  u64 H = omega_covers.size();
  u64 P = sample.ordered_part.members.size();
  CrownResult r;
  r.sel.kind = Selection::Kind::one;
  r.splits = {0};
  if (H == 0) {
    r.report.verdict = Verdict::holds(0, {});
    return r;
  }
  if (sample.ordered_part.kind != ScalePrefix::Kind::tower)
    fail(errc::invalid_argument, "ordered part is not a tower");

  u64 R0 = required_rounds(gm_rounds);
  u64 alpha = 0;
  for (u64 n = 1; n <= H; ++n) {
    std::vector<Point> small = sample.fin_part;
    for (u64 j = 1; j <= alpha; ++j)
      small.push_back(Point::infinite(sample.ordered_part.members[j - 1]));
    std::vector<u64> masks;
    for (const Point& x : small) masks.push_back(trace64(x));

    CrownRound round;
    round.gm = gm_extract(omega_covers[n - 1], 0, gm_rounds, masks);

    auto omitted_of = [&](u64 j) {
      Point t = Point::infinite(sample.ordered_part.members[j - 1]);
      std::vector<u64> I;
      for (u64 m = 1; m <= gm_rounds; ++m)
        if (omits_open(t, round.gm.a[m - 1], round.gm.a[m])) I.push_back(m);
      return I;
    };
    for (u64 beta = alpha + 1; beta <= P; ++beta) {
      std::vector<u64> I = omitted_of(beta);
      if (I.size() >= R0) {
        round.split = beta;
        round.omitted = std::move(I);
        break;
      }
    }
    if (round.split == 0) {
      if (alpha < P && omitted_of(P).empty())
        fail(errc::empty_witness_set,
             "deepest member omits nothing for cover " + ord(n));
      fail(errc::tower_exhausted, "tower spent before cover " + ord(n));
    }
    for (u64 m : round.omitted) round.family.push_back(round.gm.members[m - 1]);

    std::vector<ClopenSet> sets;
    for (u64 idx : round.family) sets.push_back(omega_covers[n - 1].member(idx));
    std::vector<Point> deep = sample.fin_part;
    for (u64 j = round.split; j <= P; ++j)
      deep.push_back(Point::infinite(sample.ordered_part.members[j - 1]));
    round.small_gamma = classify(sets, small).is_point_cofinite;
    round.deep_gamma = classify(sets, deep).is_point_cofinite;

    alpha = round.split;
    r.splits.push_back(alpha);
    r.rounds.push_back(std::move(round));
  }

  u64 final_split = r.splits.back();
  std::vector<Sample> ychain(H);
  std::vector<CoverPrefix> prefixes(H);
  std::vector<std::vector<u64>> families;
  for (u64 n = 1; n <= H; ++n) {
    ychain[n - 1].fin_part = sample.fin_part;
    ychain[n - 1].ordered_part.kind = ScalePrefix::Kind::tower;
    for (u64 j = 1; j < r.splits[n - 1]; ++j)
      ychain[n - 1].ordered_part.members.push_back(sample.ordered_part.members[j - 1]);
    for (u64 j = final_split; j <= P; ++j)
      ychain[n - 1].ordered_part.members.push_back(sample.ordered_part.members[j - 1]);
    prefixes[n - 1].stream = omega_covers[n - 1];
    prefixes[n - 1].length = r.rounds[n - 1].family.back();
    families.push_back(r.rounds[n - 1].family);
  }
  r.diag = jordan_diagonal(ychain, prefixes, families);
  r.sel = r.diag.sel;
  r.report = verify_selection(prefixes, r.sel, sample_points(sample));
  return r;
}

}  // namespace oival
