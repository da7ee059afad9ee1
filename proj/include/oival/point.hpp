#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "oival/seq.hpp"

namespace oival {

struct Rational {
  u64 num, den;
};

// A subset of the naturals: either an explicit finite set or an infinite
// stream.  Finite elements are kept sorted and distinct.
class Point {
 public:
  Point() : rep_(std::vector<u64>{}) {}

  static Point finite(std::vector<u64> elems);
  static Point infinite(IncSeq s) { return Point(std::move(s)); }

  bool is_finite() const { return std::holds_alternative<std::vector<u64>>(rep_); }
  bool empty() const { return is_finite() && finite_elements().empty(); }
  const std::vector<u64>& finite_elements() const { return std::get<std::vector<u64>>(rep_); }
  const IncSeq& stream() const { return std::get<IncSeq>(rep_); }

  bool contains(u64 k) const;
  bool contains_big(const mpz_class& k) const;
  u64 rank(u64 k) const;
  mpz_class rank_big(const mpz_class& k) const;
  u64 nth(u64 n) const;
  mpz_class nth_big(const mpz_class& n) const;
  std::vector<u64> elements_below(u64 bound) const;
  std::optional<u64> max_element() const;  // nullopt when infinite
  bool is_naturals() const;
  std::optional<u64> min_complement() const;

  std::string to_spec() const;  // "{a,b,c}" or the stream descriptor

 private:
  explicit Point(std::vector<u64> v) : rep_(std::move(v)) {}
  explicit Point(IncSeq s) : rep_(std::move(s)) {}
  std::variant<std::vector<u64>, IncSeq> rep_;
};

// 1 / least element of the symmetric difference.  Streams that agree on every
// value up to `depth` are reported indistinguishable.
Rational dist(const Point& a, const Point& b, u64 depth = u64(1) << 20);

}  // namespace oival
