#include "oival/cover.hpp"

#include <algorithm>
#include <memory>

#include "oival/error.hpp"

namespace oival {

namespace {

bool excluded(const std::vector<u64>& exclude, u64 idx) {
  return std::find(exclude.begin(), exclude.end(), idx) != exclude.end();
}

}  // namespace

CoverStream om_cover() {
  CoverStream c;
  c.member = [](u64 m) { return ClopenSet::omitting(m); };
  c.size = 0;
  c.no_finite_subcover = true;
  c.omega = [](const OmegaQuery& q) {
    u64 avoid = 0;
    for (u64 e : q.extra_masks) avoid |= e;
    for (u64 m = q.powerset_bound + 1;; ++m) {
      if (m <= 64 && (avoid >> (m - 1) & 1)) continue;
      if (excluded(q.exclude, m)) continue;
      return m;
    }
  };
  return c;
}

CoverStream explicit_cover(std::vector<ClopenSet> members, bool no_finite_subcover) {
  auto shared = std::make_shared<const std::vector<ClopenSet>>(std::move(members));
  CoverStream c;
  c.size = shared->size();
  c.no_finite_subcover = no_finite_subcover;
  c.member = [shared](u64 n) {
    if (n < 1 || n > shared->size())
      fail(errc::invalid_argument, "member index " + std::to_string(n) + " outside family");
    return (*shared)[n - 1];
  };
  c.omega = [shared](const OmegaQuery& q) {
    for (u64 i = 1; i <= shared->size(); ++i) {
      if (excluded(q.exclude, i)) continue;
      const ClopenSet& U = (*shared)[i - 1];
      if (powerset_escape(U, q.powerset_bound)) continue;
      bool all = true;
      for (u64 e : q.extra_masks)
        if (!U.member_mask(e)) {
          all = false;
          break;
        }
      if (all) return i;
    }
    fail(errc::omega_query_failed, "exclusions exhausted the family");
  };
  return c;
}

std::vector<ClopenSet> refine_disjoint(const CoverStream& cover, u64 count) {
  std::vector<ClopenSet> out;
  std::vector<ClopenSet> seen;
  for (u64 n = 1; n <= count; ++n) {
    ClopenSet c = cover.member(n);
    // subtracting one member at a time keeps every complement small
    ClopenSet r = c;
    for (const ClopenSet& p : seen) r = r.minus(p);
    out.push_back(std::move(r));
    seen.push_back(std::move(c));
  }
  return out;
}

std::vector<ClopenSet> increasing_union_cover(const std::vector<ClopenSet>& prefix) {
  std::vector<ClopenSet> out;
  out.reserve(prefix.size());
  for (const ClopenSet& c : prefix)
    out.push_back(out.empty() ? c : out.back().union_with(c));
  return out;
}

ReclawResult reclaw_map(const std::vector<std::vector<ClopenSet>>& covers, const Point& x) {
  ReclawResult r;
  for (size_t row = 0; row < covers.size(); ++row) {
    const std::vector<ClopenSet>& col = covers[row];
    for (size_t i = 0; i < col.size(); ++i)
      for (size_t j = i + 1; j < col.size(); ++j)
        if (!col[i].disjoint_with(col[j]))
          fail(errc::invalid_argument, "row " + std::to_string(row + 1) + " members " +
                                           std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                           " overlap");
    bool found = false;
    for (size_t m = 0; m < col.size() && !found; ++m)
      if (col[m].contains_point(x)) {
        r.values.push_back(m + 1);
        r.moduli.push_back(col[m].depth());
        found = true;
      }
    if (!found)
      fail(errc::not_covered, "row " + std::to_string(row + 1) + " misses the point");
  }
  return r;
}

Classification classify(const std::vector<ClopenSet>& prefix, const std::vector<Point>& sample) {
  Classification r;
  u64 H = prefix.size();
  r.point_misses.assign(sample.size(), {});
  if (H == 0) {
    r.is_omega = Verdict::unknown(0);
    r.is_point_cofinite = Verdict::unknown(0);
    return r;
  }
  if (sample.size() > 16)
    fail(errc::invalid_argument, "subset scan over more than 16 points");

  std::vector<u64> covered_mask(H, 0);
  std::vector<u64> merged;
  for (size_t i = 0; i < sample.size(); ++i)
    for (u64 n = 1; n <= H; ++n) {
      if (prefix[n - 1].contains_point(sample[i]))
        covered_mask[n - 1] |= u64(1) << i;
      else {
        r.point_misses[i].push_back(n);
        merged.push_back(n);
      }
    }
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  r.is_point_cofinite = tail_verdict(H, merged);

  u64 subsets = sample.empty() ? 0 : (u64(1) << sample.size()) - 1;
  std::vector<u64> wit;
  for (u64 S = 1; S <= subsets; ++S) {
    u64 found = 0;
    for (u64 n = 1; n <= H && !found; ++n)
      if ((covered_mask[n - 1] & S) == S) found = n;
    if (!found) {
      r.is_omega = Verdict::fails_at(subsets, S);
      return r;
    }
    wit.push_back(found);
  }
  r.is_omega = Verdict::holds(subsets, std::move(wit));
  return r;
}

GmExtraction gm_extract(const CoverStream& cover, u64 k, u64 N,
                        const std::vector<u64>& extra_masks) {
  if (!cover.has_omega()) fail(errc::invalid_argument, "cover lacks an omega hook");
  if (N < 1) fail(errc::invalid_argument, "need at least one round");
  GmExtraction g;
  g.k = k;
  g.a = {1};
  u64 total = (k + 1) * N;
  for (u64 n = 1; n <= total; ++n) {
    OmegaQuery q{g.a.back(), extra_masks, g.members};
    u64 idx = cover.omega(q);
    ClopenSet U = cover.member(idx);
    g.members.push_back(idx);
    g.a.push_back(clopen_modulus(U, g.a.back()));
  }
  for (u64 n = 0; n <= total; n += k + 1) g.b.push_back(g.a[n]);
  for (u64 n = 0; n < N; ++n)
    g.groups.emplace_back(g.members.begin() + (k + 1) * n,
                          g.members.begin() + (k + 1) * (n + 1));
  return g;
}

mpz_class cantor_pair(u64 n, u64 v) {
  if (n < 1 || v < 1) fail(errc::invalid_argument, "pairing is 1-based");
  mpz_class r = 2 * mpz_class(v) - 1;
  mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), n - 1);
  return r;
}

CantorDiagonal cantor_defeater(const std::vector<Point>& xs,
                               const std::vector<u64>& selections, u64 bound) {
  if (xs.empty()) fail(errc::invalid_argument, "no source points");
  for (size_t i = 0; i < xs.size(); ++i)
    for (size_t j = i + 1; j < xs.size(); ++j)
      if (xs[i].elements_below(bound) == xs[j].elements_below(bound))
        fail(errc::invalid_argument, "sources " + std::to_string(i + 1) + " and " +
                                         std::to_string(j + 1) +
                                         " indistinguishable below the bound");

  CantorDiagonal d;
  d.bound = bound;
  d.selected = selections;
  for (size_t p = 0; p < selections.size(); ++p) {
    u64 m = selections[p];
    if (m < 1 || m > xs.size())
      fail(errc::invalid_argument, "selection " + std::to_string(m) + " outside the sources");
    d.rows.push_back(xs[m - 1].elements_below(bound));
    for (u64 v : d.rows.back()) d.encoded.push_back(cantor_pair(p + 1, v));
  }
  std::sort(d.encoded.begin(), d.encoded.end());

  // decode each slot back and compare against the source point
  for (size_t p = 0; p < selections.size(); ++p) {
    const Point& src = xs[selections[p] - 1];
    for (u64 v = 1; v <= bound; ++v) {
      bool in_src = src.contains(v);
      bool in_enc = std::binary_search(d.encoded.begin(), d.encoded.end(), cantor_pair(p + 1, v));
      if (in_src != in_enc) d.mismatches.push_back(p * bound + v);
    }
  }
  return d;
}

}  // namespace oival
