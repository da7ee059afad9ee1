#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "oival/construct.hpp"
#include "oival/error.hpp"
#include "oival/select.hpp"

using namespace oival;

namespace {

errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return errc::parse_error;
}

CoverPrefix om(u64 length) { return CoverPrefix{om_cover(), length}; }

Point pt(std::vector<u64> elems) { return Point::finite(std::move(elems)); }

ScalePrefix prefix_of(ScalePrefix::Kind kind, std::vector<IncSeq> members) {
  return ScalePrefix{kind, std::move(members)};
}

// Membership oracle that never touches the clopen machinery.
bool in_om(const Point& x, u64 m) { return !x.contains(m); }

// Least index from which x stays inside every omitting-style member.
u64 om_entry(const Point& x, u64 length) {
  u64 e = length + 1;
  for (u64 m = length; m >= 1; --m) {
    if (!in_om(x, m)) break;
    e = m;
  }
  return e;
}

}  // namespace

TEST_CASE("sample validation") {
  Sample s;
  s.fin_part = {pt({1}), pt({2, 5})};
  s.ordered_part = prefix_of(ScalePrefix::Kind::unbounded_set, {IncSeq::power(2)});
  s.split_index = 1;
  check_sample(s);

  CHECK(sample_points(s).size() == 3);
  CHECK(small_points(s).size() == 2);
  CHECK(tail_points(s).size() == 1);

  SUBCASE("split beyond the ordered part") {
    s.split_index = 2;
    CHECK(code_of([&] { check_sample(s); }) == errc::invalid_argument);
  }
  SUBCASE("duplicate finite members") {
    s.fin_part.push_back(pt({1}));
    CHECK(code_of([&] { check_sample(s); }) == errc::invalid_argument);
  }
  SUBCASE("infinite point in the finite part") {
    s.fin_part.push_back(Point::infinite(IncSeq::identity()));
    CHECK(code_of([&] { check_sample(s); }) == errc::invalid_argument);
  }
  SUBCASE("empty sample is fine") {
    check_sample(Sample{});
    CHECK(sample_points(Sample{}).empty());
  }
}

TEST_CASE("selection verifier counts misses per point") {
  std::vector<CoverPrefix> covers = {om(10), om(10), om(10), om(10)};

  SUBCASE("a single middle miss is inconclusive") {
    Selection sel{Selection::Kind::one, {{1}, {2}, {3}, {4}}};
    VerifierReport r = verify_selection(covers, sel, {pt({}), pt({3})});
    CHECK(r.point_misses == std::vector<std::vector<u64>>{{}, {3}});
    CHECK(r.verdict.outcome == Outcome::unknown);
  }
  SUBCASE("no misses reports the full tail") {
    Selection sel{Selection::Kind::one, {{5}, {5}, {5}, {5}}};
    VerifierReport r = verify_selection(covers, sel, {pt({3})});
    CHECK(r.point_misses == std::vector<std::vector<u64>>{{}});
    CHECK(r.verdict.ok());
    CHECK(r.verdict.witnesses == std::vector<u64>{1, 2, 3, 4});
  }
  SUBCASE("empty groups are skipped") {
    Selection sel{Selection::Kind::finite, {{}, {}, {}, {3}}};
    VerifierReport r = verify_selection(covers, sel, {pt({3})});
    CHECK(r.point_misses == std::vector<std::vector<u64>>{{4}});
    CHECK(r.verdict.outcome == Outcome::fails);
    CHECK(r.verdict.fail_index == 4);
  }
}

TEST_CASE("two pass covering") {
  std::vector<CoverPrefix> covers = {om(12), om(12)};

  SUBCASE("explicit points then leftovers") {
    Sample s;
    s.fin_part = {pt({1}), pt({1, 2, 3}), pt({7})};
    s.ordered_part = prefix_of(ScalePrefix::Kind::unbounded_set,
                               {IncSeq::triangular(), IncSeq::power(2)});
    TwoPassResult r = menger_two_pass(covers, s);

    CHECK(r.first_pass == std::vector<std::vector<u64>>{{2, 1}, {4}});
    // the triangular stream meets O_1, O_2 and O_4, so only it needs pass two
    CHECK(r.second_pass == std::vector<std::vector<u64>>{{3}, {}});
    CHECK(r.sel.kind == Selection::Kind::finite);
    CHECK(r.sel.groups == std::vector<std::vector<u64>>{{1, 2, 3}, {4}});

    CHECK(r.report.verdict.ok());
    CHECK(r.report.verdict.witnesses == std::vector<u64>{1, 2, 1, 1, 1});
    for (size_t p = 0; p < 5; ++p) {
      bool somewhere = false;
      const std::vector<Point> pts = sample_points(s);
      for (size_t n = 0; n < covers.size() && !somewhere; ++n)
        for (u64 idx : r.sel.groups[n])
          if (in_om(pts[p], idx)) {
            somewhere = true;
            break;
          }
      CHECK(somewhere);
    }
  }
  SUBCASE("empty sample gives an empty selection") {
    TwoPassResult r = menger_two_pass(covers, Sample{});
    CHECK(r.sel.groups == std::vector<std::vector<u64>>{{}, {}});
    CHECK(r.report.verdict.ok());
  }
  SUBCASE("the full set defeats every member") {
    Sample s;
    s.ordered_part = prefix_of(ScalePrefix::Kind::unbounded_set, {IncSeq::identity()});
    CHECK(code_of([&] { menger_two_pass(covers, s); }) == errc::not_coverable);
  }
}

TEST_CASE("small part gamma selection") {
  SUBCASE("entry points and the pointwise max") {
    std::vector<CoverPrefix> covers;
    covers.push_back({explicit_cover({ClopenSet::requiring(2), ClopenSet::omitting(2),
                                      ClopenSet::universal(2), ClopenSet::universal(2)}),
                      4});
    covers.push_back({explicit_cover({ClopenSet::omitting(1), ClopenSet::universal(1),
                                      ClopenSet::universal(1), ClopenSet::universal(1)}),
                      4});
    Sample s;
    s.fin_part = {pt({1}), pt({2})};
    GammaSelection r = gamma_select_small(covers, s, GammaMode::cofinite);
    CHECK(r.entry == std::vector<std::vector<u64>>{{2, 2}, {3, 1}});
    CHECK(r.g == std::vector<u64>{3, 2});
    CHECK(r.sel.kind == Selection::Kind::one);
    CHECK(r.sel.groups == std::vector<std::vector<u64>>{{3}, {2}});
    CHECK(r.report.point_misses == std::vector<std::vector<u64>>{{}, {}});
    CHECK(r.report.verdict.ok());
  }
  SUBCASE("entry points over omitting streams match the direct formula") {
    std::vector<CoverPrefix> covers = {om(20), om(20), om(20)};
    Sample s;
    s.fin_part = {pt({}), pt({1}), pt({2, 5})};
    s.ordered_part = prefix_of(ScalePrefix::Kind::unbounded_set, {IncSeq::power(3)});
    GammaSelection r = gamma_select_small(covers, s, GammaMode::cofinite);
    std::vector<Point> pts = sample_points(s);
    for (size_t p = 0; p < pts.size(); ++p)
      for (size_t n = 0; n < covers.size(); ++n)
        CHECK(r.entry[p][n] == om_entry(pts[p], 20));
    CHECK(r.entry[3] == std::vector<u64>{10, 10, 10});  // powers of three below 20
    CHECK(r.g == std::vector<u64>{10, 10, 10});
    CHECK(r.report.verdict.ok());
  }
  SUBCASE("cofinal mode collapses entries at or below the cover index") {
    std::vector<CoverPrefix> covers = {om(6), om(6), om(6)};
    Sample s;
    s.fin_part = {pt({1})};
    GammaSelection c = gamma_select_small(covers, s, GammaMode::cofinal);
    CHECK(c.entry == std::vector<std::vector<u64>>{{2, 1, 1}});
    CHECK(c.g == std::vector<u64>{2, 1, 1});
    GammaSelection f = gamma_select_small(covers, s, GammaMode::cofinite);
    CHECK(f.entry == std::vector<std::vector<u64>>{{2, 2, 2}});
    CHECK(f.g == std::vector<u64>{2, 2, 2});
  }
  SUBCASE("empty sample picks the first member everywhere") {
    std::vector<CoverPrefix> covers = {om(4), om(4)};
    GammaSelection r = gamma_select_small(covers, Sample{}, GammaMode::cofinite);
    CHECK(r.g == std::vector<u64>{1, 1});
    CHECK(r.sel.groups == std::vector<std::vector<u64>>{{1}, {1}});
  }
  SUBCASE("a point filling the prefix end cannot enter") {
    std::vector<CoverPrefix> covers = {om(10)};
    Sample s;
    s.ordered_part =
        prefix_of(ScalePrefix::Kind::unbounded_set, {IncSeq::arithmetic(2, 2)});
    CHECK(code_of([&] { gamma_select_small(covers, s, GammaMode::cofinite); }) ==
          errc::prefix_too_short);
  }
  SUBCASE("a member missing the point at the prefix end cannot enter") {
    std::vector<CoverPrefix> covers;
    covers.push_back({explicit_cover({ClopenSet::requiring(1)}), 1});
    Sample s;
    s.fin_part = {pt({4})};
    CHECK(code_of([&] { gamma_select_small(covers, s, GammaMode::cofinite); }) ==
          errc::prefix_too_short);
  }
}

TEST_CASE("scale selection with growing finite groups") {
  std::vector<CoverPrefix> covers = {om(20), om(20), om(20), om(20)};
  std::vector<GmExtraction> gm(4, gm_extract(om_cover(), 0, 6));
  REQUIRE(gm[0].a == std::vector<u64>{1, 3, 5, 7, 9, 11, 13});
  REQUIRE(gm[0].members == std::vector<u64>{2, 4, 6, 8, 10, 12});

  SUBCASE("end to end over a three member scale") {
    Sample s;
    s.fin_part = {pt({}), pt({1})};
    s.ordered_part =
        prefix_of(ScalePrefix::Kind::le_star_scale,
                  {IncSeq::power(2), IncSeq::power(3), IncSeq::power(4)});
    ScaleSelection r = bs_select(covers, s, gm);

    CHECK(r.alpha == 3);
    CHECK(r.witness == std::vector<u64>{1, 2, 3, 4});
    CHECK(r.g == std::vector<u64>{17, 17, 17, 17});
    CHECK(r.sel.kind == Selection::Kind::finite);
    CHECK(r.sel.groups == std::vector<std::vector<u64>>{
                              {2, 17}, {2, 4, 17}, {2, 4, 6, 17}, {2, 4, 6, 8, 17}});
    for (const auto& m : r.report.point_misses) CHECK(m.empty());
    CHECK(r.report.verdict.ok());

    // witness arithmetic recheck straight from the chain values
    for (u64 n = 1; n <= 4; ++n) {
      u64 an = gm[n - 1].a[n];
      bool in = std::find(r.witness.begin(), r.witness.end(), n) != r.witness.end();
      CHECK(in == (an < IncSeq::power(4).prefix(n)[n - 1]));
    }
  }
  SUBCASE("short scale leaves early covers without groups") {
    Sample s;
    s.fin_part = {pt({1})};
    s.ordered_part = prefix_of(ScalePrefix::Kind::le_star_scale, {IncSeq::power(2)});
    ScaleSelection r = bs_select(covers, s, gm);
    CHECK(r.alpha == 1);
    CHECK(r.witness == std::vector<u64>{3, 4});
    CHECK(r.sel.groups ==
          std::vector<std::vector<u64>>{{}, {}, {2, 4, 6}, {2, 4, 6, 8}});
    CHECK(r.report.verdict.ok());
  }
  SUBCASE("a slow scale has no witness indices") {
    Sample s;
    s.ordered_part = prefix_of(ScalePrefix::Kind::le_star_scale,
                               {IncSeq::arithmetic(2, 1), IncSeq::arithmetic(3, 1)});
    CHECK(code_of([&] { bs_select(covers, s, gm); }) == errc::empty_witness_set);
  }
  SUBCASE("no ordered part reduces to one pick per cover") {
    Sample s;
    s.fin_part = {pt({1}), pt({3})};
    ScaleSelection r = bs_select(covers, s, gm);
    CHECK(r.alpha == 0);
    CHECK(r.witness == std::vector<u64>{1, 2, 3, 4});
    CHECK(r.sel.groups == std::vector<std::vector<u64>>{{4}, {4}, {4}, {4}});
  }
  SUBCASE("groups never hold duplicates") {
    Sample s;
    s.fin_part = {pt({1})};
    s.ordered_part = prefix_of(ScalePrefix::Kind::le_star_scale, {IncSeq::power(2)});
    ScaleSelection r = bs_select(covers, s, gm);
    for (const auto& grp : r.sel.groups) {
      std::set<u64> uniq(grp.begin(), grp.end());
      CHECK(uniq.size() == grp.size());
    }
  }
}

TEST_CASE("bounded variant pins group sizes") {
  std::vector<CoverPrefix> covers = {om(20), om(20), om(20), om(20)};
  std::vector<GmExtraction> gm(4, gm_extract(om_cover(), 0, 6));

  SUBCASE("sizes stay within index plus one") {
    Sample s;
    s.fin_part = {pt({}), pt({1})};
    s.ordered_part =
        prefix_of(ScalePrefix::Kind::le_star_scale,
                  {IncSeq::power(2), IncSeq::power(3), IncSeq::power(4)});
    ScaleSelection r = uid_select(covers, s, gm);
    CHECK(r.sel.kind == Selection::Kind::n_plus_one);
    for (size_t n = 0; n < r.sel.groups.size(); ++n) {
      CHECK(r.sel.groups[n].size() <= n + 2);
      bool in = std::find(r.witness.begin(), r.witness.end(), n + 1) != r.witness.end();
      if (in) CHECK(r.sel.groups[n].size() == n + 2);  // singleton small bound
    }
    CHECK(r.report.verdict.ok());
  }
  SUBCASE("no ordered part reduces to the gamma pick") {
    Sample s;
    s.fin_part = {pt({1}), pt({3})};
    ScaleSelection r = uid_select(covers, s, gm);
    CHECK(r.sel.kind == Selection::Kind::n_plus_one);
    CHECK(r.sel.groups == std::vector<std::vector<u64>>{{4}, {4}, {4}, {4}});
  }
}

TEST_CASE("pair selection through a common block stream") {
  std::vector<CoverPrefix> covers = {om(24), om(24)};
  std::vector<GmExtraction> gm(2, gm_extract(om_cover(), 1, 6));
  REQUIRE(gm[0].b == std::vector<u64>{1, 5, 9, 13, 17, 21, 25});

  SUBCASE("end to end over a coarse scale") {
    Sample s;
    s.fin_part = {pt({})};
    s.ordered_part = prefix_of(ScalePrefix::Kind::sq_scale,
                               {IncSeq::arithmetic(3, 10), IncSeq::arithmetic(3, 20)});
    PairSelection r = utgg_select(covers, s, gm);

    CHECK(r.alpha == 2);
    CHECK(r.b == std::vector<u64>{1, 5, 9, 13, 17, 21, 25});
    CHECK(r.c == std::vector<u64>{1, 2});
    CHECK(r.witness == std::vector<u64>{2, 3, 4, 5});
    CHECK(r.g == std::vector<u64>{2, 2});
    CHECK(r.sel.kind == Selection::Kind::pair);
    CHECK(r.sel.groups == std::vector<std::vector<u64>>{{6, 8}, {6, 8}});
    CHECK_FALSE(r.duplicate_pair);
    CHECK(r.report.verdict.ok());

    // witness recheck: the chosen member omits every open block interval
    IncSeq sa = IncSeq::arithmetic(3, 20);
    Point xa = Point::infinite(sa);
    for (u64 m : r.witness)
      for (u64 v = r.b[m - 1] + 1; v < r.b[m]; ++v) CHECK(!xa.contains(v));
  }
  SUBCASE("every group has exactly two members") {
    Sample s;
    s.fin_part = {pt({})};
    s.ordered_part = prefix_of(ScalePrefix::Kind::sq_scale,
                               {IncSeq::arithmetic(3, 10), IncSeq::arithmetic(3, 20)});
    PairSelection r = utgg_select(covers, s, gm);
    for (const auto& grp : r.sel.groups) CHECK(grp.size() == 2);
  }
  SUBCASE("no tail part fills the pair by repetition") {
    std::vector<CoverPrefix> one = {om(12)};
    std::vector<GmExtraction> gm1(1, gm_extract(om_cover(), 1, 3));
    Sample s;
    s.fin_part = {pt({1})};
    PairSelection r = utgg_select(one, s, gm1);
    CHECK(r.duplicate_pair);
    CHECK(r.sel.groups == std::vector<std::vector<u64>>{{2, 2}});
    CHECK(r.report.verdict.ok());
  }
  SUBCASE("dense scale members yield no witness intervals") {
    Sample s;
    s.ordered_part = prefix_of(ScalePrefix::Kind::sq_scale,
                               {IncSeq::identity(), IncSeq::arithmetic(2, 2)});
    CHECK(code_of([&] { utgg_select(covers, s, gm); }) == errc::empty_witness_set);
  }
}

TEST_CASE("tower selection at omitted intervals") {
  std::vector<CoverPrefix> covers = {om(16), om(16), om(16)};
  std::vector<GmExtraction> gm(3, gm_extract(om_cover(), 0, 8));

  SUBCASE("split in the middle") {
    Sample s;
    s.fin_part = {pt({}), pt({2, 3})};
    s.ordered_part =
        prefix_of(ScalePrefix::Kind::tower,
                  {IncSeq::arithmetic(1, 2), IncSeq::arithmetic(1, 4), IncSeq::arithmetic(1, 8)});
    s.split_index = 2;
    TowerSelection r = tower_select(covers, s, gm);

    CHECK(r.omitted[0] == std::vector<u64>{1, 2, 3, 4, 5, 6, 7, 8});
    CHECK(r.omitted[1] == std::vector<u64>{2, 3, 4, 5, 6, 7, 8});
    CHECK(r.omitted[2] == std::vector<u64>{3, 4, 5, 6, 7, 8});
    CHECK(r.g == std::vector<u64>{2, 2, 3});
    CHECK(r.sel.kind == Selection::Kind::one);
    CHECK(r.sel.groups == std::vector<std::vector<u64>>{{4}, {4}, {6}});
    for (const auto& m : r.report.point_misses) CHECK(m.empty());
    CHECK(r.report.verdict.ok());
  }
  SUBCASE("split at the last member leaves no deeper check") {
    Sample s;
    s.fin_part = {pt({}), pt({2, 3})};
    s.ordered_part =
        prefix_of(ScalePrefix::Kind::tower,
                  {IncSeq::arithmetic(1, 2), IncSeq::arithmetic(1, 4), IncSeq::arithmetic(1, 8)});
    s.split_index = 3;
    TowerSelection r = tower_select(covers, s, gm);
    CHECK(r.g == std::vector<u64>{2, 2, 3});
    CHECK(r.sel.groups == std::vector<std::vector<u64>>{{4}, {4}, {6}});
  }
  SUBCASE("deeper members miss only before their crossing") {
    Sample s;
    s.ordered_part =
        prefix_of(ScalePrefix::Kind::tower,
                  {IncSeq::arithmetic(1, 2), IncSeq::with_prefix({2}, 5, 4),
                   IncSeq::with_prefix({4}, 9, 8)});
    s.split_index = 2;
    TowerSelection r = tower_select(covers, s, gm);

    CHECK(r.omitted[0] == std::vector<u64>{2, 3, 4, 5, 6, 7, 8});
    CHECK(r.g == std::vector<u64>{2, 2, 3});
    CHECK(r.report.point_misses[0].empty());  // the split stays clean
    CHECK(r.report.point_misses[1].empty());
    CHECK(r.report.point_misses[2] == std::vector<u64>{1, 2});

    // crossing of the deepest member over the split one
    Point deep = Point::infinite(IncSeq::with_prefix({4}, 9, 8));
    Point split = Point::infinite(IncSeq::with_prefix({2}, 5, 4));
    u64 crossing = 5;  // elements from 5 on lie inside the split member
    for (u64 v = crossing; v <= 100; ++v)
      if (deep.contains(v)) CHECK(split.contains(v));
    for (u64 n = 1; n <= 3; ++n) {
      bool missed = std::find(r.report.point_misses[2].begin(),
                              r.report.point_misses[2].end(),
                              n) != r.report.point_misses[2].end();
      u64 interval_lo = gm[n - 1].a[r.g[n - 1] - 1];
      if (missed) CHECK(interval_lo < crossing);
    }
  }
  SUBCASE("a member meeting every interval leaves nothing to omit") {
    Sample s;
    s.ordered_part = prefix_of(ScalePrefix::Kind::tower, {IncSeq::identity()});
    s.split_index = 1;
    CHECK(code_of([&] { tower_select(covers, s, gm); }) == errc::empty_witness_set);
  }
}

TEST_CASE("cover thinning into disjoint classes") {
  Sample s;
  s.fin_part = {pt({}), pt({1})};

  SUBCASE("two covers, two classes each") {
    std::vector<CoverPrefix> covers = {om(12), om(12)};
    ThinnedFamilies r = sinf_thin(covers, s, 2);
    REQUIRE(r.classes.size() == 2);

    // take 6 would push the sharing staircase past the prefix, so 5 is the
    // largest take whose classes stay inside twelve members
    std::vector<std::vector<u64>> oracle =
        disjointify({IncSeq::identity(), IncSeq::identity()}, 5);
    for (size_t c = 0; c < 2; ++c) {
      REQUIRE(r.classes[c].size() == 2);
      CHECK(r.classes[c][0] == oracle[0]);
      CHECK(r.classes[c][1] == oracle[1]);
      std::set<u64> all;
      for (const auto& cls : r.classes[c])
        for (u64 idx : cls) {
          CHECK(idx >= 1);
          CHECK(idx <= 12);
          CHECK(all.insert(idx).second);  // pairwise disjoint
        }
      CHECK(r.union_gamma[c].ok());
    }
    CHECK(r.classes[0][0].front() == 1);
  }
  SUBCASE("arranged sequence interleaves all classes") {
    std::vector<CoverPrefix> covers = {om(12), om(12)};
    ThinnedFamilies r = sinf_thin(covers, s, 2);
    REQUIRE(!r.arranged.empty());
    CHECK(r.arranged[0] == std::pair<u64, u64>{1, r.classes[0][0][0]});
    CHECK(r.arranged[1] == std::pair<u64, u64>{1, r.classes[0][1][0]});
    CHECK(r.arranged[2] == std::pair<u64, u64>{2, r.classes[1][0][0]});
    CHECK(r.arranged[3] == std::pair<u64, u64>{2, r.classes[1][1][0]});
    u64 total = 0;
    for (const auto& cover : r.classes)
      for (const auto& cls : cover) total += cls.size();
    CHECK(r.arranged.size() == total);
  }
  SUBCASE("three classes split a single cover") {
    std::vector<CoverPrefix> covers = {om(12)};
    ThinnedFamilies r = sinf_thin(covers, s, 3);
    REQUIRE(r.classes[0].size() == 3);
    std::vector<std::vector<u64>> oracle = disjointify(
        {IncSeq::identity(), IncSeq::identity(), IncSeq::identity()}, 3);
    for (size_t k = 0; k < 3; ++k) CHECK(r.classes[0][k] == oracle[k]);
    CHECK(r.union_gamma[0].ok());
  }
}

TEST_CASE("diagonal pick over an increasing chain") {
  SUBCASE("three nested finite samples") {
    std::vector<CoverPrefix> covers = {om(24), om(24), om(24)};
    std::vector<Sample> chain(3);
    chain[0].fin_part = {pt({})};
    chain[1].fin_part = {pt({}), pt({1})};
    chain[2].fin_part = {pt({}), pt({1}), pt({2, 4})};
    DiagonalSelection r = jordan_diagonal(chain, covers);

    CHECK(r.sel.kind == Selection::Kind::one);
    CHECK(r.sel.groups == std::vector<std::vector<u64>>{{1}, {3}, {6}});
    REQUIRE(r.stage_gamma.size() == 3);
    for (const Verdict& v : r.stage_gamma) CHECK(v.ok());
    CHECK(r.report.point_misses == std::vector<std::vector<u64>>{{}, {1}, {}});
    CHECK(r.report.verdict.ok());

    // families shrink stage by stage and stay inside the prefix
    REQUIRE(r.families.size() == 3);
    for (size_t st = 1; st < 3; ++st)
      for (size_t c = st; c < 3; ++c)
        CHECK(r.families[st][c].size() <= r.families[st - 1][c].size());
  }
  SUBCASE("single element chain reduces to one pick") {
    std::vector<Sample> chain(1);
    chain[0].fin_part = {pt({})};
    DiagonalSelection r = jordan_diagonal(chain, {om(8)});
    CHECK(r.sel.groups == std::vector<std::vector<u64>>{{1}});
    CHECK(r.report.verdict.ok());
  }
  SUBCASE("chain and covers must align") {
    std::vector<Sample> chain(2);
    CHECK(code_of([&] { jordan_diagonal(chain, {om(8)}); }) == errc::invalid_argument);
  }
  SUBCASE("chain elements must be nested") {
    std::vector<Sample> chain(2);
    chain[0].fin_part = {pt({1})};
    chain[1].fin_part = {pt({2})};
    CHECK(code_of([&] { jordan_diagonal(chain, {om(8), om(8)}); }) ==
          errc::invalid_argument);
  }
  SUBCASE("short prefixes starve the later stages") {
    std::vector<Sample> chain(3);
    CHECK(code_of([&] { jordan_diagonal(chain, {om(2), om(2), om(2)}); }) ==
          errc::prefix_too_short);
  }
}

TEST_CASE("crown iteration over a tower sample") {
  auto tower_sample = [](u64 members) {
    Sample s;
    s.fin_part = {pt({})};
    std::vector<IncSeq> t;
    u64 step = 2;
    for (u64 j = 0; j < members; ++j, step *= 2) t.push_back(IncSeq::arithmetic(1, step));
    s.ordered_part = prefix_of(ScalePrefix::Kind::tower, std::move(t));
    return s;
  };
  std::vector<CoverStream> covers = {om_cover(), om_cover(), om_cover()};

  SUBCASE("end to end with three covers") {
    CrownResult r = crown_run(tower_sample(8), covers, 9);

    CHECK(r.splits == std::vector<u64>{0, 1, 2, 3});
    REQUIRE(r.rounds.size() == 3);
    for (const CrownRound& round : r.rounds) {
      CHECK(round.gm.members == std::vector<u64>{2, 4, 6, 8, 10, 12, 14, 16, 18});
      CHECK(round.omitted == std::vector<u64>{1, 2, 3, 4, 5, 6, 7, 8, 9});
      CHECK(round.family == std::vector<u64>{2, 4, 6, 8, 10, 12, 14, 16, 18});
      CHECK(round.small_gamma.ok());
      CHECK(round.deep_gamma.ok());
    }
    CHECK(r.sel.kind == Selection::Kind::one);
    CHECK(r.sel.groups == std::vector<std::vector<u64>>{{2}, {6}, {12}});
    for (const auto& m : r.report.point_misses) CHECK(m.empty());
    CHECK(r.report.verdict.ok());
  }
  SUBCASE("the advance respects the small part masks") {
    // small parts are odd heavy, so every extracted member index stays even
    CrownResult r = crown_run(tower_sample(8), covers, 9);
    for (const CrownRound& round : r.rounds)
      for (u64 m : round.gm.members) CHECK(m % 2 == 0);
  }
  SUBCASE("a short tower cannot advance through all covers") {
    CHECK(code_of([&] { crown_run(tower_sample(2), covers, 9); }) ==
          errc::tower_exhausted);
  }
  SUBCASE("a member meeting every interval stops the advance") {
    Sample s;
    s.ordered_part = prefix_of(ScalePrefix::Kind::tower, {IncSeq::identity()});
    CHECK(code_of([&] { crown_run(s, covers, 9); }) == errc::empty_witness_set);
  }
  SUBCASE("no covers, no selection") {
    CrownResult r = crown_run(tower_sample(4), {}, 9);
    CHECK(r.sel.groups.empty());
    CHECK(r.rounds.empty());
    CHECK(r.report.verdict.ok());
  }
  SUBCASE("the ordered part must be a tower") {
    Sample s;
    s.ordered_part = prefix_of(ScalePrefix::Kind::le_star_scale, {IncSeq::power(2)});
    CHECK(code_of([&] { crown_run(s, covers, 9); }) == errc::invalid_argument);
  }
}
