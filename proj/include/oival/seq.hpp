#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oival/error.hpp"

namespace oival {

using u64 = std::uint64_t;

// Values beyond the cap saturate cursors; indexed access past a saturated
// cursor raises seq_overflow.  Exact arithmetic above the cap goes through the
// *_big entry points.
inline constexpr u64 kValueCap = u64(1) << 62;

// Element-scan budget for descriptors without closed forms.
inline constexpr u64 kScanBudget = u64(1) << 24;

class IncSeq;
struct SeqNode;

namespace detail {
struct CursorBase {
  virtual ~CursorBase() = default;
  // Advances to the next element.  Returns false once the next value would
  // exceed kValueCap.  Strictly increasing across successful calls.
  virtual bool next(u64& out) = 0;
};
std::unique_ptr<CursorBase> make_cursor(const std::shared_ptr<const SeqNode>& node);
}  // namespace detail

class SeqCursor {
 public:
  explicit SeqCursor(std::shared_ptr<const SeqNode> node)
      : impl_(detail::make_cursor(node)) {}
  bool next(u64& out) { return impl_->next(out); }

 private:
  std::unique_ptr<detail::CursorBase> impl_;
};

// Partition of the naturals into consecutive finite blocks I_1, I_2, ...
// given by the stream of block minima; minima(1) must be 1.
struct BlockPartition {
  explicit BlockPartition(IncSeq minima);
  BlockPartition();  // linear widths 1,2,3,...

  u64 lo(u64 n) const;            // min I_n
  u64 hi(u64 n) const;            // max I_n
  u64 width(u64 n) const;
  u64 block_of(u64 k) const;      // n with k in I_n
  const IncSeq& minima() const { return *minima_; }

 private:
  std::shared_ptr<IncSeq> minima_;
};

BlockPartition linear_blocks();    // widths 1,2,3,...   minima 1,2,4,7,11,...
BlockPartition doubling_blocks();  // widths 1,2,4,8,... minima 1,2,4,8,16,...

// Chooses g(n) \subseteq I_n with |g(n)| = width(n).  Default rule takes the
// first width(n) slots of the block, shifted by `offset` positions (clamped so
// the choice stays inside the block).  Explicit overrides win for listed n.
struct BlockSelector {
  BlockPartition part;
  u64 width_const = 1;  // 0 means width(n) = n
  u64 offset = 0;
  std::vector<std::pair<u64, std::vector<u64>>> overrides;  // sorted by n

  u64 width_at(u64 n) const;
  std::vector<u64> pick(u64 n) const;  // sorted, inside I_n
  bool picks_whole_blocks() const;
};

class IncSeq {
 public:
  IncSeq();  // identity

  static IncSeq identity();
  static IncSeq arithmetic(u64 start, u64 step);
  static IncSeq geometric(u64 start, u64 ratio);  // start, start*ratio, ...
  static IncSeq power(u64 base);                  // base, base^2, base^3, ...
  static IncSeq with_prefix(std::vector<u64> prefix, u64 tail_start, u64 tail_step);
  static IncSeq interval_union(IncSeq index, IncSeq base);
  static IncSeq complement(IncSeq base, IncSeq cert);
  static IncSeq block_union(BlockSelector sel, IncSeq s);
  static IncSeq triangular();  // 1,2,4,7,11,...
  static IncSeq kun_indices(u64 k, BlockSelector sel, IncSeq s);
  static IncSeq sparse_indices(BlockSelector sel, IncSeq s);

  u64 nth(u64 n) const;  // 1-based
  bool contains(u64 k) const;
  u64 rank(u64 k) const;  // |s cap [1,k]|
  std::vector<u64> prefix(u64 count) const;
  std::vector<u64> elements_below(u64 bound) const;  // all elements <= bound

  // nullopt iff the stream enumerates all of the naturals.
  std::optional<u64> min_complement() const;
  bool is_naturals() const;

  mpz_class nth_big(const mpz_class& n) const;
  mpz_class rank_big(const mpz_class& k) const;
  bool contains_big(const mpz_class& k) const;

  SeqCursor cursor() const { return SeqCursor(node_); }
  std::string to_spec() const;

  // Constant-gap tail, when the descriptor has one: nth(n+1) - nth(n) == step
  // for all n >= from.  Stage-wise builders require it for exact outputs.
  struct AffineTail {
    u64 from, step;
  };
  std::optional<AffineTail> affine_tail() const;

  const std::shared_ptr<const SeqNode>& node() const { return node_; }

 private:
  explicit IncSeq(std::shared_ptr<const SeqNode> node) : node_(std::move(node)) {}
  friend IncSeq wrap_node(std::shared_ptr<const SeqNode> node);
  std::shared_ptr<const SeqNode> node_;
};

IncSeq wrap_node(std::shared_ptr<const SeqNode> node);

// Accelerated subsequence: iterate y starting from y(min complement of y).
// For the full naturals the stream is returned unchanged.
IncSeq tilde(const IncSeq& y);

// First index <= limit where the two streams disagree, if any.
std::optional<u64> first_difference(const IncSeq& a, const IncSeq& b, u64 limit);

// Textual descriptors:
//   id | arith(s,d) | pow(b) | list(n1,...,nk; arith(s,d))
//   | compl(seq; cert=seq) | iunion(seq_index, seq_base)
// plus the extended forms geom(s,r), tilde(seq), blockmin(linear|doubling).
// Whitespace-insensitive; every integer must be >= 1.
IncSeq parse_seq(std::string_view text);

}  // namespace oival
