#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "oival/cover.hpp"
#include "oival/error.hpp"
#include "oival/rng.hpp"

using namespace oival;
using V = std::vector<u64>;

namespace {

template <class F>
std::optional<errc> code_of(F&& f) {
  try {
    f();
  } catch (const error& e) {
    return e.code();
  }
  return std::nullopt;
}

// Trace-set model at a fixed width: every operation is plain set algebra over
// enumerated masks, so implementation shortcuts never leak into expectations.
using Model = std::set<u64>;

Model model_of(const ClopenSet& c, u64 d) {
  Model m;
  for (u64 t = 0; t < (u64(1) << d); ++t)
    if (c.member_mask(t)) m.insert(t);
  return m;
}

Model model_union(const Model& a, const Model& b) {
  Model r = a;
  r.insert(b.begin(), b.end());
  return r;
}

Model model_intersect(const Model& a, const Model& b) {
  Model r;
  for (u64 t : a)
    if (b.count(t)) r.insert(t);
  return r;
}

Model model_minus(const Model& a, const Model& b) {
  Model r;
  for (u64 t : a)
    if (!b.count(t)) r.insert(t);
  return r;
}

Model model_complement(const Model& a, u64 d) {
  Model r;
  for (u64 t = 0; t < (u64(1) << d); ++t)
    if (!a.count(t)) r.insert(t);
  return r;
}

ClopenSet random_clopen(Rng& r, u64 d) {
  std::vector<ClopenSet::Term> terms;
  u64 n = r.below(4);  // empty through three terms
  for (u64 i = 0; i < n; ++i) {
    u64 pos = r.below(u64(1) << d);
    u64 neg = r.below(u64(1) << d) & ~pos;
    terms.push_back({pos, neg});
  }
  return ClopenSet::from_terms(d, std::move(terms));
}

// The column family {f : f(n) = m} under the increasing-enumeration reading:
// traces of width m whose top element is m and whose size is n.
ClopenSet nth_element_is(u64 n, u64 m) {
  std::vector<u64> traces;
  for (u64 t = 0; t < (u64(1) << m); ++t)
    if ((t >> (m - 1) & 1) && static_cast<u64>(__builtin_popcountll(t)) == n)
      traces.push_back(t);
  return ClopenSet::from_traces(m, traces);
}

}  // namespace

TEST_CASE("clopen basics and frozen traces") {
  CHECK_EQ(ClopenSet::omitting(3).traces_at(3), V{0, 1, 2, 3});
  CHECK_EQ(ClopenSet::requiring(2).traces_at(2), V{2, 3});
  CHECK_EQ(ClopenSet::exact_trace(3, 0b101).traces_at(3), V{0b101});
  CHECK_EQ(ClopenSet::universal(2).traces_at(2), V{0, 1, 2, 3});
  CHECK(ClopenSet::empty_set(4).is_empty());
  CHECK_FALSE(ClopenSet::universal(1).is_empty());

  SUBCASE("membership of points") {
    Point evens = Point::infinite(IncSeq::arithmetic(2, 2));
    CHECK(ClopenSet::omitting(3).contains_point(evens));
    CHECK(ClopenSet::requiring(2).contains_point(evens));
    CHECK_FALSE(ClopenSet::requiring(5).contains_point(evens));
    CHECK(ClopenSet::exact_trace(4, 0b1010).contains_point(evens));
    CHECK(ClopenSet::universal(1).contains_point(Point::finite({})));
    CHECK_FALSE(ClopenSet::empty_set(1).contains_point(Point::finite({})));
  }

  SUBCASE("depth cap") {
    CHECK_EQ(code_of([] { ClopenSet::omitting(65); }), errc::invalid_argument);
    CHECK_EQ(ClopenSet::omitting(64).depth(), 64u);
    CHECK_EQ(code_of([] { ClopenSet::universal(10).traces_at(30); }), errc::budget_exceeded);
  }

  SUBCASE("powerset escape agrees with enumeration") {
    Rng rng(0xE5C);
    for (int trial = 0; trial < 40; ++trial) {
      Rng r = rng.fork(trial);
      u64 d = 3 + r.below(4);
      ClopenSet U = random_clopen(r, d);
      u64 bound = 1 + r.below(d + 2);
      u64 c = std::min(bound, d);
      std::optional<u64> expect;
      for (u64 t = 0; t < (u64(1) << c) && !expect; ++t)
        if (!U.member_mask(t)) expect = t;
      std::optional<u64> got = powerset_escape(U, bound);
      CHECK_EQ(got.has_value(), expect.has_value());
      if (got) CHECK_FALSE(U.member_mask(*got));
    }
  }

  SUBCASE("equality ignores the representation width") {
    CHECK(ClopenSet::universal(1).same_set(ClopenSet::universal(3)));
    CHECK(ClopenSet::omitting(2).same_set(ClopenSet::from_traces(2, {0, 1})));
    CHECK_FALSE(ClopenSet::omitting(2).same_set(ClopenSet::omitting(3)));
    CHECK(ClopenSet::requiring(1).disjoint_with(ClopenSet::omitting(1)));
    CHECK_FALSE(ClopenSet::omitting(1).disjoint_with(ClopenSet::omitting(2)));
  }
}

TEST_CASE("clopen algebra agrees with the trace-set model") {
  Rng rng(0xC0FFEE);
  for (int trial = 0; trial < 60; ++trial) {
    Rng r = rng.fork(trial);
    u64 d = 3 + r.below(5);
    ClopenSet A = random_clopen(r, d), B = random_clopen(r, d);
    Model ma = model_of(A, d), mb = model_of(B, d);

    CHECK(model_of(A.union_with(B), d) == model_union(ma, mb));
    CHECK(model_of(A.intersect(B), d) == model_intersect(ma, mb));
    CHECK(model_of(A.minus(B), d) == model_minus(ma, mb));
    CHECK(model_of(A.complement(), d) == model_complement(ma, d));
    CHECK_EQ(A.is_empty(), ma.empty());
    CHECK_EQ(A.disjoint_with(B), model_intersect(ma, mb).empty());
    CHECK_EQ(A.same_set(B), ma == mb);

    std::vector<u64> tr(ma.begin(), ma.end());
    CHECK_EQ(A.traces_at(d), tr);
  }
}

TEST_CASE("containment modulus") {
  CHECK_EQ(clopen_modulus(ClopenSet::omitting(3), 2), 4);
  CHECK_EQ(clopen_modulus(ClopenSet::universal(1), 5), 6);
  CHECK_EQ(code_of([] { clopen_modulus(ClopenSet::requiring(1), 1); }),
           errc::not_an_omega_witness);

  SUBCASE("returned width really confines membership") {
    ClopenSet U = ClopenSet::omitting(4).intersect(ClopenSet::omitting(6));
    u64 m = clopen_modulus(U, 3);
    CHECK_EQ(m, 7);
    for (u64 t = 0; t < (u64(1) << (m - 1)); ++t)
      if ((t & ~u64(0b111)) == 0) CHECK(U.member_mask(t));
  }
}

TEST_CASE("disjoint refinement and increasing unions") {
  std::vector<ClopenSet> in = {ClopenSet::requiring(1), ClopenSet::requiring(2)};
  std::vector<ClopenSet> out = refine_disjoint(explicit_cover(in), 2);
  REQUIRE_EQ(out.size(), 2u);
  CHECK(out[0].same_set(ClopenSet::requiring(1)));
  CHECK_EQ(out[1].traces_at(2), V{2});
  CHECK(out[0].disjoint_with(out[1]));
  CHECK(out[0].union_with(out[1]).same_set(in[0].union_with(in[1])));

  SUBCASE("universal head absorbs the rest") {
    std::vector<ClopenSet> uni = {ClopenSet::universal(1), ClopenSet::requiring(3)};
    std::vector<ClopenSet> ref = refine_disjoint(explicit_cover(uni), 2);
    CHECK(ref[0].same_set(ClopenSet::universal(1)));
    CHECK(ref[1].is_empty());
  }

  SUBCASE("random inputs stay pairwise disjoint with equal union") {
    Rng rng(0xD15C);
    for (int trial = 0; trial < 25; ++trial) {
      Rng r = rng.fork(trial);
      u64 d = 3 + r.below(3);
      std::vector<ClopenSet> fam;
      for (int i = 0; i < 4; ++i) fam.push_back(random_clopen(r, d));
      std::vector<ClopenSet> ref = refine_disjoint(explicit_cover(fam), 4);
      ClopenSet u_in = ClopenSet::empty_set(d), u_out = ClopenSet::empty_set(d);
      for (int i = 0; i < 4; ++i) {
        u_in = u_in.union_with(fam[i]);
        u_out = u_out.union_with(ref[i]);
        CHECK(ref[i].minus(fam[i]).is_empty());
        for (int j = 0; j < i; ++j) CHECK(ref[i].disjoint_with(ref[j]));
      }
      CHECK(u_in.same_set(u_out));
    }
  }

  SUBCASE("increasing unions") {
    std::vector<ClopenSet> vs = increasing_union_cover(in);
    CHECK(vs[0].same_set(in[0]));
    CHECK(vs[1].same_set(in[0].union_with(in[1])));
    CHECK(increasing_union_cover({}).empty());
  }
}

TEST_CASE("omega queries") {
  SUBCASE("unbounded single-exclusion family") {
    CoverStream om = om_cover();
    CHECK(om.no_finite_subcover);
    CHECK(om.member(3).same_set(ClopenSet::omitting(3)));
    CHECK_EQ(om.omega({3, {}, {}}), 4u);
    CHECK_EQ(om.omega({3, {}, {4}}), 5u);
    CHECK_EQ(om.omega({1, {u64(0b10)}, {}}), 3u);
  }

  SUBCASE("explicit families scan and can exhaust") {
    CoverStream cv = explicit_cover({ClopenSet::requiring(1), ClopenSet::omitting(5)});
    CHECK_EQ(cv.omega({2, {}, {}}), 2u);
    CHECK_EQ(code_of([&] { cv.omega({2, {}, {2}}); }), errc::omega_query_failed);
  }
}

TEST_CASE("coding map over disjoint columns") {
  std::vector<std::vector<ClopenSet>> cols;
  for (u64 n = 1; n <= 4; ++n) {
    std::vector<ClopenSet> col;
    for (u64 m = 1; m <= 10; ++m) col.push_back(nth_element_is(n, m));
    cols.push_back(col);
  }

  Point evens = Point::infinite(IncSeq::arithmetic(2, 2));
  ReclawResult f = reclaw_map(cols, evens);
  CHECK_EQ(f.values, V{2, 4, 6, 8});
  CHECK_EQ(f.moduli, V{2, 4, 6, 8});

  SUBCASE("agreement to the modulus forces equal values") {
    Point y = Point::finite({2, 4, 6, 8, 11});
    ReclawResult g = reclaw_map(cols, y);
    CHECK_EQ(g.values, f.values);
  }

  SUBCASE("uncaptured point") {
    std::vector<std::vector<ClopenSet>> one = {cols[1]};
    CHECK_EQ(code_of([&] { reclaw_map(one, Point::finite({1})); }), errc::not_covered);
  }

  SUBCASE("rows must be disjoint") {
    std::vector<std::vector<ClopenSet>> bad = {{ClopenSet::universal(1), ClopenSet::universal(1)}};
    CHECK_EQ(code_of([&] { reclaw_map(bad, evens); }), errc::invalid_argument);
  }
}

TEST_CASE("cover classification") {
  std::vector<ClopenSet> om;
  for (u64 m = 1; m <= 20; ++m) om.push_back(ClopenSet::omitting(m));

  SUBCASE("finite sample: omega and point-cofinite") {
    std::vector<Point> sample = {Point::finite({1}), Point::finite({2, 3})};
    Classification c = classify(om, sample);
    CHECK(c.is_omega.ok());
    CHECK(c.is_point_cofinite.ok());
    CHECK_EQ(c.point_misses[0], V{1});
    CHECK_EQ(c.point_misses[1], V{2, 3});
  }

  SUBCASE("a spread-out point defeats the tail rule") {
    std::vector<Point> sample = {Point::finite({1}), Point::infinite(IncSeq::arithmetic(2, 2))};
    Classification c = classify(om, sample);
    CHECK_FALSE(c.is_point_cofinite.ok());
    CHECK_EQ(c.point_misses[1].size(), 10u);
  }

  SUBCASE("empty prefix stays undecided") {
    Classification c = classify({}, {Point::finite({1})});
    CHECK_EQ(c.is_omega.outcome, Outcome::unknown);
    CHECK_EQ(c.is_point_cofinite.outcome, Outcome::unknown);
  }
}

TEST_CASE("interval extraction from an omega cover") {
  SUBCASE("plain omission form, frozen chain") {
    GmExtraction g = gm_extract(om_cover(), 0, 4);
    CHECK_EQ(g.a, V{1, 3, 5, 7, 9});
    CHECK_EQ(g.members, V{2, 4, 6, 8});
    CHECK_EQ(g.b, g.a);
    REQUIRE_EQ(g.groups.size(), 4u);
    for (u64 n = 1; n <= 4; ++n) CHECK_EQ(g.groups[n - 1], V{2 * n});

    // omission of (a(n), a(n+1)) must put the trace inside member n
    CoverStream om = om_cover();
    for (u64 t = 0; t < (u64(1) << g.a.back()); ++t)
      for (u64 n = 1; n <= 4; ++n) {
        u64 between = t & (((u64(1) << (g.a[n] - 1)) - 1) ^ ((u64(1) << g.a[n - 1]) - 1));
        if (between == 0) CHECK(om.member(g.members[n - 1]).member_mask(t));
      }
  }

  SUBCASE("pair form subsamples every other modulus") {
    GmExtraction g = gm_extract(om_cover(), 1, 3);
    CHECK_EQ(g.a, V{1, 3, 5, 7, 9, 11, 13});
    CHECK_EQ(g.b, V{1, 5, 9, 13});
    REQUIRE_EQ(g.groups.size(), 3u);
    CHECK_EQ(g.groups[0], V{2, 4});
    CHECK_EQ(g.groups[1], V{6, 8});
    CHECK_EQ(g.groups[2], V{10, 12});

    CoverStream om = om_cover();
    for (u64 t = 0; t < (u64(1) << g.b.back()); ++t)
      for (u64 n = 1; n <= 3; ++n) {
        u64 between = t & (((u64(1) << (g.b[n] - 1)) - 1) ^ ((u64(1) << g.b[n - 1]) - 1));
        if (static_cast<u64>(__builtin_popcountll(between)) <= 1) {
          bool in_union = false;
          for (u64 idx : g.groups[n - 1])
            if (om.member(idx).member_mask(t)) in_union = true;
          CHECK(in_union);
        }
      }
  }

  SUBCASE("finite families can exhaust") {
    CoverStream cv = explicit_cover(
        {ClopenSet::omitting(2), ClopenSet::omitting(3), ClopenSet::omitting(4)});
    CHECK_EQ(code_of([&] { gm_extract(cv, 0, 3); }), errc::omega_query_failed);
  }

  SUBCASE("omega hook required") {
    CoverStream bare;
    bare.member = [](u64) { return ClopenSet::universal(1); };
    CHECK_EQ(code_of([&] { gm_extract(bare, 0, 2); }), errc::invalid_argument);
  }
}

TEST_CASE("diagonal against column families") {
  CHECK_EQ(cantor_pair(1, 1), 1);
  CHECK_EQ(cantor_pair(1, 2), 3);
  CHECK_EQ(cantor_pair(2, 1), 2);
  CHECK_EQ(cantor_pair(3, 5), 36);
  CHECK_EQ(cantor_pair(5, 3), 80);

  std::vector<Point> xs = {Point::finite({}), Point::finite({1})};

  SUBCASE("selecting the empty source") {
    CantorDiagonal d = cantor_defeater(xs, {1, 1, 1});
    CHECK(d.encoded.empty());
    CHECK(d.mismatches.empty());
  }

  SUBCASE("selecting the singleton source") {
    CantorDiagonal d = cantor_defeater(xs, {2, 2, 2});
    REQUIRE_EQ(d.encoded.size(), 3u);
    CHECK_EQ(d.encoded[0], 1);
    CHECK_EQ(d.encoded[1], 2);
    CHECK_EQ(d.encoded[2], 4);
    CHECK(d.mismatches.empty());
  }

  SUBCASE("one hundred rows exceed native width") {
    std::vector<u64> sel(100, 2);
    CantorDiagonal d = cantor_defeater(xs, sel);
    REQUIRE_EQ(d.encoded.size(), 100u);
    mpz_class top = 1;
    mpz_mul_2exp(top.get_mpz_t(), top.get_mpz_t(), 99);
    CHECK_EQ(d.encoded.back(), top);
    CHECK(d.mismatches.empty());
  }

  SUBCASE("sources must be distinguishable") {
    std::vector<Point> dup = {Point::finite({1}), Point::finite({1})};
    CHECK_EQ(code_of([&] { cantor_defeater(dup, {1}); }), errc::invalid_argument);
  }
}
