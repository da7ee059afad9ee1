#include "oival/point.hpp"

#include <algorithm>
#include <sstream>

namespace oival {

Point Point::finite(std::vector<u64> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  if (!elems.empty() && elems.front() < 1) fail(errc::invalid_argument, "elements must be >= 1");
  return Point(std::move(elems));
}

bool Point::contains(u64 k) const {
  if (is_finite()) {
    const auto& e = finite_elements();
    return std::binary_search(e.begin(), e.end(), k);
  }
  return stream().contains(k);
}

bool Point::contains_big(const mpz_class& k) const {
  if (is_finite()) {
    if (mpz_sizeinbase(k.get_mpz_t(), 2) > 64) return false;
    return contains(k.get_ui());
  }
  return stream().contains_big(k);
}

u64 Point::rank(u64 k) const {
  if (is_finite()) {
    const auto& e = finite_elements();
    return std::upper_bound(e.begin(), e.end(), k) - e.begin();
  }
  return stream().rank(k);
}

mpz_class Point::rank_big(const mpz_class& k) const {
  if (is_finite()) {
    const auto& e = finite_elements();
    u64 cnt = 0;
    for (u64 v : e)
      if (k >= v) ++cnt;
    return cnt;
  }
  return stream().rank_big(k);
}

u64 Point::nth(u64 n) const {
  if (is_finite()) {
    const auto& e = finite_elements();
    if (n < 1 || n > e.size())
      fail(errc::invalid_argument, "index " + std::to_string(n) + " outside finite point");
    return e[n - 1];
  }
  return stream().nth(n);
}

mpz_class Point::nth_big(const mpz_class& n) const {
  if (is_finite()) {
    if (mpz_sizeinbase(n.get_mpz_t(), 2) > 64)
      fail(errc::invalid_argument, "index outside finite point");
    return nth(n.get_ui());
  }
  return stream().nth_big(n);
}

std::vector<u64> Point::elements_below(u64 bound) const {
  if (is_finite()) {
    const auto& e = finite_elements();
    return {e.begin(), std::upper_bound(e.begin(), e.end(), bound)};
  }
  return stream().elements_below(bound);
}

std::optional<u64> Point::max_element() const {
  if (!is_finite()) return std::nullopt;
  const auto& e = finite_elements();
  return e.empty() ? std::optional<u64>{} : std::optional<u64>{e.back()};
}

bool Point::is_naturals() const { return !is_finite() && stream().is_naturals(); }

std::optional<u64> Point::min_complement() const {
  if (is_finite()) {
    const auto& e = finite_elements();
    u64 expect = 1;
    for (u64 v : e) {
      if (v != expect) return expect;
      ++expect;
    }
    return expect;
  }
  return stream().min_complement();
}

std::string Point::to_spec() const {
  if (!is_finite()) return stream().to_spec();
  std::ostringstream os;
  os << "{";
  const auto& e = finite_elements();
  for (size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
  os << "}";
  return os.str();
}

namespace {

// Streams both points in value order; yields false when past `bound`.
struct PointWalk {
  const Point& p;
  size_t fin_pos = 0;
  std::optional<SeqCursor> cur;
  std::optional<u64> pending;
  bool done = false;

  explicit PointWalk(const Point& pt) : p(pt) {
    if (!p.is_finite()) cur.emplace(p.stream().cursor());
  }
  std::optional<u64> peek() {
    if (done) return std::nullopt;
    if (pending) return pending;
    if (p.is_finite()) {
      if (fin_pos >= p.finite_elements().size()) {
        done = true;
        return std::nullopt;
      }
      pending = p.finite_elements()[fin_pos++];
      return pending;
    }
    u64 v;
    if (!cur->next(v)) {
      done = true;
      return std::nullopt;
    }
    pending = v;
    return pending;
  }
  void pop() { pending.reset(); }
};

}  // namespace

Rational dist(const Point& a, const Point& b, u64 depth) {
  PointWalk wa(a), wb(b);
  while (true) {
    auto va = wa.peek(), vb = wb.peek();
    if (!va && !vb) fail(errc::indistinguishable_up_to_horizon, "no difference found");
    u64 least;
    if (va && (!vb || *va < *vb)) {
      least = *va;
      wa.pop();
    } else if (vb && (!va || *vb < *va)) {
      least = *vb;
      wb.pop();
    } else {
      if (*va > depth)
        fail(errc::indistinguishable_up_to_horizon,
             "points agree on every value up to " + std::to_string(depth));
      wa.pop();
      wb.pop();
      continue;
    }
    if (least > depth)
      fail(errc::indistinguishable_up_to_horizon,
           "points agree on every value up to " + std::to_string(depth));
    return Rational{1, least};
  }
}

}  // namespace oival
