#include "oival/seq.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <sstream>
#include <variant>

namespace oival {
namespace {

bool try_add(u64 a, u64 b, u64& r) {
  return !__builtin_add_overflow(a, b, &r) && r < kValueCap;
}

bool try_mul(u64 a, u64 b, u64& r) {
  return !__builtin_mul_overflow(a, b, &r) && r < kValueCap;
}

u64 checked_add(u64 a, u64 b) {
  u64 r;
  if (!try_add(a, b, r)) fail(errc::seq_overflow, "value past cap");
  return r;
}

u64 isqrt_u64(u64 x) {
  if (x < 2) return x;
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(x)));
  while (r > 0 && r > x / r) --r;
  while ((r + 1) <= x / (r + 1)) ++r;
  return r;
}

mpz_class to_mpz(u64 v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}

bool fits_u64(const mpz_class& z) { return z >= 0 && mpz_sizeinbase(z.get_mpz_t(), 2) <= 64; }

u64 to_u64(const mpz_class& z) {
  u64 out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, z.get_mpz_t());
  return out;
}

// Bit-size ceiling for exact big evaluation.
constexpr size_t kBigBitBudget = size_t(1) << 22;

void guard_bits(const mpz_class& z) {
  if (mpz_sizeinbase(z.get_mpz_t(), 2) > kBigBitBudget)
    fail(errc::budget_exceeded, "big value bit budget");
}

}  // namespace

struct IdentityD {};
struct ArithD {
  u64 start, step;
};
struct GeomD {
  u64 start, ratio;
};
struct ListTailD {
  std::vector<u64> prefix;
  u64 start, step;
};
struct TriD {};
struct IUnionD {
  IncSeq index, base;
};
struct ComplD {
  IncSeq base, cert;
};
struct BlockUnionD {
  BlockSelector sel;
  IncSeq s;
};
struct TildeD {
  IncSeq y;
  u64 gap;  // min complement of y, fixed at construction
};
struct KunD {
  u64 k;
  BlockSelector sel;
  IncSeq s;
};
struct SparseD {
  BlockSelector sel;
  IncSeq s;
};

struct SeqNode {
  std::variant<IdentityD, ArithD, GeomD, ListTailD, TriD, IUnionD, ComplD, BlockUnionD, TildeD,
               KunD, SparseD>
      v;
};

namespace {

IncSeq wrap(SeqNode node);

template <class D>
const D* as(const IncSeq& s) {
  return std::get_if<D>(&s.node()->v);
}

}  // namespace

// ---------------------------------------------------------------------------
// BlockPartition / BlockSelector

BlockPartition::BlockPartition(IncSeq minima) : minima_(std::make_shared<IncSeq>(minima)) {
  if (minima.nth(1) != 1) fail(errc::invalid_argument, "block minima must start at 1");
}

BlockPartition::BlockPartition() : BlockPartition(IncSeq::triangular()) {}

BlockPartition linear_blocks() { return BlockPartition(IncSeq::triangular()); }
BlockPartition doubling_blocks() { return BlockPartition(IncSeq::geometric(1, 2)); }

u64 BlockPartition::lo(u64 n) const { return minima_->nth(n); }
u64 BlockPartition::hi(u64 n) const { return minima_->nth(n + 1) - 1; }
u64 BlockPartition::width(u64 n) const { return minima_->nth(n + 1) - minima_->nth(n); }

u64 BlockPartition::block_of(u64 k) const {
  if (k == 0) fail(errc::invalid_argument, "block_of(0)");
  if (as<TriD>(*minima_)) {
    u64 m = k - 1;
    u64 n0 = isqrt_u64(2 * std::min(m, (u64(1) << 61)));
    u64 best = 1;
    for (u64 c = (n0 > 3 ? n0 - 3 : 1); c <= n0 + 3; ++c) {
      u64 tri;
      if (!try_mul(c % 2 == 0 ? c / 2 : c, c % 2 == 0 ? c - 1 : (c - 1) / 2, tri)) break;
      if (tri <= m) best = c;
    }
    return best;
  }
  if (const auto* g = as<GeomD>(*minima_); g && g->start == 1 && g->ratio == 2)
    return static_cast<u64>(std::bit_width(k));
  if (as<IdentityD>(*minima_)) return k;
  if (const auto* a = as<ArithD>(*minima_); a && a->start == 1) return (k - 1) / a->step + 1;
  // galloping on the minima stream
  u64 hi = 1;
  while (minima_->nth(hi + 1) <= k) hi *= 2;
  u64 lo = hi / 2 + 1;
  while (lo < hi) {
    u64 mid = lo + (hi - lo + 1) / 2;
    if (minima_->nth(mid) <= k)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

u64 BlockSelector::width_at(u64 n) const { return width_const == 0 ? n : width_const; }

std::vector<u64> BlockSelector::pick(u64 n) const {
  auto it = std::lower_bound(overrides.begin(), overrides.end(), n,
                             [](const auto& p, u64 v) { return p.first < v; });
  u64 lo = part.lo(n), bw = part.width(n), w = width_at(n);
  if (it != overrides.end() && it->first == n) {
    const auto& e = it->second;
    if (e.size() != w) fail(errc::invalid_argument, "override width mismatch at block " + std::to_string(n));
    for (size_t i = 0; i < e.size(); ++i) {
      if (i > 0 && e[i] <= e[i - 1]) fail(errc::invalid_argument, "override not sorted");
      if (e[i] < lo || e[i] > lo + bw - 1)
        fail(errc::m_out_of_block,
             "choice " + std::to_string(e[i]) + " outside block " + std::to_string(n));
    }
    return e;
  }
  if (w > bw)
    fail(errc::m_out_of_block,
         "width " + std::to_string(w) + " exceeds block " + std::to_string(n));
  u64 off = std::min(offset, bw - w);
  std::vector<u64> out(w);
  for (u64 i = 0; i < w; ++i) out[i] = lo + off + i;
  return out;
}

bool BlockSelector::picks_whole_blocks() const {
  if (offset != 0) return false;
  bool full_rule = false;
  if (width_const == 0 && as<TriD>(part.minima())) full_rule = true;
  if (width_const == 1 && as<IdentityD>(part.minima())) full_rule = true;
  if (const auto* a = as<ArithD>(part.minima());
      a && a->start == 1 && width_const == a->step)
    full_rule = true;
  if (!full_rule) return false;
  for (const auto& [n, e] : overrides) {
    u64 lo = part.lo(n), bw = part.width(n);
    if (e.size() != bw) return false;
    for (u64 i = 0; i < bw; ++i)
      if (e[i] != lo + i) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Construction

IncSeq wrap_node(std::shared_ptr<const SeqNode> node) { return IncSeq(std::move(node)); }

namespace {
IncSeq wrap(SeqNode node) { return wrap_node(std::make_shared<const SeqNode>(std::move(node))); }
}  // namespace

IncSeq::IncSeq() : IncSeq(std::make_shared<const SeqNode>(SeqNode{IdentityD{}})) {}

IncSeq IncSeq::identity() { return wrap(SeqNode{IdentityD{}}); }

IncSeq IncSeq::arithmetic(u64 start, u64 step) {
  if (start < 1 || step < 1) fail(errc::invalid_argument, "arith needs start,step >= 1");
  return wrap(SeqNode{ArithD{start, step}});
}

IncSeq IncSeq::geometric(u64 start, u64 ratio) {
  if (start < 1 || ratio < 2) fail(errc::invalid_argument, "geom needs start >= 1, ratio >= 2");
  return wrap(SeqNode{GeomD{start, ratio}});
}

IncSeq IncSeq::power(u64 base) {
  if (base < 2) fail(errc::invalid_argument, "pow needs base >= 2");
  return geometric(base, base);
}

IncSeq IncSeq::with_prefix(std::vector<u64> prefix, u64 tail_start, u64 tail_step) {
  if (prefix.empty()) return arithmetic(tail_start, tail_step);
  if (prefix.front() < 1) fail(errc::invalid_argument, "elements must be >= 1");
  for (size_t i = 1; i < prefix.size(); ++i)
    if (prefix[i] <= prefix[i - 1]) fail(errc::invalid_argument, "prefix not strictly increasing");
  if (tail_start <= prefix.back() || tail_step < 1)
    fail(errc::invalid_argument, "tail must continue past the prefix");
  return wrap(SeqNode{ListTailD{std::move(prefix), tail_start, tail_step}});
}

IncSeq IncSeq::interval_union(IncSeq index, IncSeq base) {
  return wrap(SeqNode{IUnionD{std::move(index), std::move(base)}});
}

IncSeq IncSeq::complement(IncSeq base, IncSeq cert) {
  if (base.is_naturals()) fail(errc::invalid_argument, "complement of the full naturals is empty");
  return wrap(SeqNode{ComplD{std::move(base), std::move(cert)}});
}

IncSeq IncSeq::block_union(BlockSelector sel, IncSeq s) {
  return wrap(SeqNode{BlockUnionD{std::move(sel), std::move(s)}});
}

IncSeq IncSeq::triangular() { return wrap(SeqNode{TriD{}}); }

IncSeq IncSeq::kun_indices(u64 k, BlockSelector sel, IncSeq s) {
  if (k < 1) fail(errc::invalid_argument, "kun stride must be >= 1");
  return wrap(SeqNode{KunD{k, std::move(sel), std::move(s)}});
}

IncSeq IncSeq::sparse_indices(BlockSelector sel, IncSeq s) {
  return wrap(SeqNode{SparseD{std::move(sel), std::move(s)}});
}

IncSeq tilde(const IncSeq& y) {
  if (y.is_naturals()) return y;
  auto gap = y.min_complement();
  if (!gap) fail(errc::budget_exceeded, "no gap found below budget");
  return wrap(SeqNode{TildeD{y, *gap}});
}

// ---------------------------------------------------------------------------
// Cursors

namespace detail {
namespace {

struct IdentityCur final : CursorBase {
  u64 v = 0;
  bool next(u64& out) override {
    if (v >= kValueCap) return false;
    out = ++v;
    return true;
  }
};

struct ArithCur final : CursorBase {
  u64 v, step;
  bool first = true;
  ArithCur(u64 s, u64 d) : v(s), step(d) {}
  bool next(u64& out) override {
    if (first) {
      first = false;
      out = v;
      return true;
    }
    u64 r;
    if (!try_add(v, step, r)) return false;
    v = r;
    out = v;
    return true;
  }
};

struct GeomCur final : CursorBase {
  u64 v, ratio;
  bool first = true;
  GeomCur(u64 s, u64 r) : v(s), ratio(r) {}
  bool next(u64& out) override {
    if (first) {
      first = false;
      out = v;
      return true;
    }
    u64 r;
    if (!try_mul(v, ratio, r)) return false;
    v = r;
    out = v;
    return true;
  }
};

struct ListTailCur final : CursorBase {
  std::shared_ptr<const SeqNode> hold;
  const ListTailD& d;
  size_t i = 0;
  u64 v = 0;
  bool in_tail = false;
  ListTailCur(std::shared_ptr<const SeqNode> h, const ListTailD& dd) : hold(std::move(h)), d(dd) {}
  bool next(u64& out) override {
    if (!in_tail) {
      if (i < d.prefix.size()) {
        out = d.prefix[i++];
        return true;
      }
      in_tail = true;
      v = d.start;
      out = v;
      return true;
    }
    u64 r;
    if (!try_add(v, d.step, r)) return false;
    v = r;
    out = v;
    return true;
  }
};

struct TriCur final : CursorBase {
  u64 v = 0, inc = 0;
  bool next(u64& out) override {
    if (inc == 0) {
      v = 1;
      inc = 1;
      out = v;
      return true;
    }
    u64 r;
    if (!try_add(v, inc, r)) return false;
    v = r;
    ++inc;
    out = v;
    return true;
  }
};

struct IUnionCur final : CursorBase {
  SeqCursor idx, base;
  u64 base_pos = 0, last_val = 0;
  u64 cur = 0, block_end = 0;
  bool in_block = false;
  IUnionCur(const IUnionD& d) : idx(d.index.cursor()), base(d.base.cursor()) {}
  bool base_at(u64 p, u64& val) {
    while (base_pos < p) {
      if (!base.next(last_val)) return false;
      ++base_pos;
    }
    val = last_val;
    return true;
  }
  bool next(u64& out) override {
    if (in_block && cur + 1 < block_end) {
      out = ++cur;
      return true;
    }
    in_block = false;
    u64 n;
    if (!idx.next(n)) return false;
    u64 a, a1;
    if (!base_at(n, a)) return false;
    if (!base_at(n + 1, a1)) a1 = kValueCap + 1;  // block end past the cap
    cur = a;
    block_end = a1;
    in_block = true;
    out = cur;
    return true;
  }
};

struct ComplCur final : CursorBase {
  SeqCursor base, cert;
  u64 k = 0, next_base = 0, next_cert = 0;
  bool base_done = false, have_base = false, cert_done = false, have_cert = false;
  ComplCur(const ComplD& d) : base(d.base.cursor()), cert(d.cert.cursor()) {}
  bool next(u64& out) override {
    u64 steps = 0;
    while (true) {
      if (k >= kValueCap) return false;
      if (++steps > kScanBudget) fail(errc::budget_exceeded, "complement scan");
      ++k;
      if (!have_cert && !cert_done) {
        if (cert.next(next_cert))
          have_cert = true;
        else
          cert_done = true;
      }
      // the certificate promises a complement element at or below each of its
      // values; passing one without emitting falsifies it
      if (have_cert && k > next_cert)
        fail(errc::descriptor_exhausted,
             "no complement element at or below pacing bound " + std::to_string(next_cert));
      while (!base_done && (!have_base || next_base < k)) {
        if (base.next(next_base))
          have_base = true;
        else
          base_done = true;
      }
      if (have_base && next_base == k) continue;
      have_cert = false;
      out = k;
      return true;
    }
  }
};

struct BlockUnionCur final : CursorBase {
  const BlockUnionD& d;
  std::shared_ptr<const SeqNode> hold;
  SeqCursor s;
  std::vector<u64> cur;
  size_t pos = 0;
  BlockUnionCur(std::shared_ptr<const SeqNode> h, const BlockUnionD& dd)
      : d(dd), hold(std::move(h)), s(dd.s.cursor()) {}
  bool next(u64& out) override {
    while (pos >= cur.size()) {
      u64 n;
      if (!s.next(n)) return false;
      try {
        cur = d.sel.pick(n);
      } catch (const error& e) {
        if (e.code() == errc::seq_overflow) return false;  // block past the cap
        throw;
      }
      pos = 0;
    }
    out = cur[pos++];
    return true;
  }
};

struct TildeCur final : CursorBase {
  const TildeD& d;
  std::shared_ptr<const SeqNode> hold;
  u64 t = 0;
  bool started = false;
  TildeCur(std::shared_ptr<const SeqNode> h, const TildeD& dd) : d(dd), hold(std::move(h)) {}
  bool next(u64& out) override {
    try {
      t = d.y.nth(started ? t : d.gap);
    } catch (const error& e) {
      if (e.code() == errc::seq_overflow) return false;
      throw;
    }
    started = true;
    out = t;
    return true;
  }
};

struct KunCur final : CursorBase {
  const KunD& d;
  std::shared_ptr<const SeqNode> hold;
  SeqCursor s;
  u64 m_prev = 0;
  KunCur(std::shared_ptr<const SeqNode> h, const KunD& dd)
      : d(dd), hold(std::move(h)), s(dd.s.cursor()) {}
  bool next(u64& out) override {
    u64 v = 0;
    for (u64 i = 0; i < d.k; ++i)
      if (!s.next(v)) return false;
    u64 b = d.sel.part.block_of(v) + 1;
    if (b <= m_prev) b = m_prev + 1;
    m_prev = b;
    out = b;
    return true;
  }
};

struct SparseCur final : CursorBase {
  const SparseD& d;
  std::shared_ptr<const SeqNode> hold;
  SeqCursor s;
  u64 m_prev = 0, pick_max = 0;
  SparseCur(std::shared_ptr<const SeqNode> h, const SparseD& dd)
      : d(dd), hold(std::move(h)), s(dd.s.cursor()) {}
  bool next(u64& out) override {
    u64 v = 0, seen = 0;
    while (seen < 2) {
      if (!s.next(v)) return false;
      if (v > pick_max) ++seen;
    }
    u64 b = d.sel.part.block_of(v) + 1;
    if (b <= m_prev) b = m_prev + 1;
    auto picks = d.sel.pick(b);
    m_prev = b;
    pick_max = picks.back();
    out = b;
    return true;
  }
};

}  // namespace

std::unique_ptr<CursorBase> make_cursor(const std::shared_ptr<const SeqNode>& node) {
  return std::visit(
      [&](const auto& d) -> std::unique_ptr<CursorBase> {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, IdentityD>) return std::make_unique<IdentityCur>();
        if constexpr (std::is_same_v<T, ArithD>)
          return std::make_unique<ArithCur>(d.start, d.step);
        if constexpr (std::is_same_v<T, GeomD>)
          return std::make_unique<GeomCur>(d.start, d.ratio);
        if constexpr (std::is_same_v<T, ListTailD>) return std::make_unique<ListTailCur>(node, d);
        if constexpr (std::is_same_v<T, TriD>) return std::make_unique<TriCur>();
        if constexpr (std::is_same_v<T, IUnionD>) return std::make_unique<IUnionCur>(d);
        if constexpr (std::is_same_v<T, ComplD>) return std::make_unique<ComplCur>(d);
        if constexpr (std::is_same_v<T, BlockUnionD>)
          return std::make_unique<BlockUnionCur>(node, d);
        if constexpr (std::is_same_v<T, TildeD>) return std::make_unique<TildeCur>(node, d);
        if constexpr (std::is_same_v<T, KunD>) return std::make_unique<KunCur>(node, d);
        if constexpr (std::is_same_v<T, SparseD>) return std::make_unique<SparseCur>(node, d);
      },
      node->v);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Indexed access and membership

u64 IncSeq::nth(u64 n) const {
  if (n < 1) fail(errc::invalid_argument, "indices are 1-based");
  if (const auto* d = std::get_if<IdentityD>(&node_->v)) {
    (void)d;
    if (n > kValueCap) fail(errc::seq_overflow, "index past cap");
    return n;
  }
  if (const auto* d = std::get_if<ArithD>(&node_->v)) {
    u64 off;
    if (!try_mul(n - 1, d->step, off)) fail(errc::seq_overflow, "value past cap");
    return checked_add(d->start, off);
  }
  if (const auto* d = std::get_if<GeomD>(&node_->v)) {
    u64 v = d->start;
    for (u64 i = 1; i < n; ++i)
      if (!try_mul(v, d->ratio, v)) fail(errc::seq_overflow, "value past cap");
    return v;
  }
  if (const auto* d = std::get_if<ListTailD>(&node_->v)) {
    if (n <= d->prefix.size()) return d->prefix[n - 1];
    u64 off;
    if (!try_mul(n - d->prefix.size() - 1, d->step, off))
      fail(errc::seq_overflow, "value past cap");
    return checked_add(d->start, off);
  }
  if (std::get_if<TriD>(&node_->v)) {
    u64 half;
    if (!try_mul(n % 2 == 0 ? n / 2 : n, n % 2 == 0 ? n - 1 : (n - 1) / 2, half))
      fail(errc::seq_overflow, "value past cap");
    return checked_add(half, 1);
  }
  // streamed descriptors
  SeqCursor c = cursor();
  u64 v = 0;
  for (u64 i = 0; i < n; ++i)
    if (!c.next(v)) fail(errc::seq_overflow, "stream saturated before index " + std::to_string(n));
  return v;
}

bool IncSeq::contains(u64 k) const {
  if (k < 1) return false;
  if (std::get_if<IdentityD>(&node_->v)) return true;
  if (const auto* d = std::get_if<ArithD>(&node_->v))
    return k >= d->start && (k - d->start) % d->step == 0;
  if (const auto* d = std::get_if<GeomD>(&node_->v)) {
    u64 v = d->start;
    while (v < k) {
      if (!try_mul(v, d->ratio, v)) return false;
    }
    return v == k;
  }
  if (const auto* d = std::get_if<ListTailD>(&node_->v)) {
    if (std::binary_search(d->prefix.begin(), d->prefix.end(), k)) return true;
    return k >= d->start && (k - d->start) % d->step == 0;
  }
  if (std::get_if<TriD>(&node_->v)) {
    u64 m = k - 1, n0 = isqrt_u64(m <= (u64(1) << 61) ? 2 * m : kValueCap);
    for (u64 c = (n0 > 3 ? n0 - 3 : 1); c <= n0 + 3; ++c) {
      u64 tri;
      if (try_mul(c % 2 == 0 ? c / 2 : c, c % 2 == 0 ? c - 1 : (c - 1) / 2, tri) && tri == m)
        return true;
    }
    return false;
  }
  if (const auto* d = std::get_if<IUnionD>(&node_->v)) {
    SeqCursor idx = d->index.cursor();
    SeqCursor base = d->base.cursor();
    u64 base_pos = 0, last = 0, n = 0, budget = 0;
    auto base_at = [&](u64 p, u64& val) {
      while (base_pos < p) {
        if (!base.next(last)) return false;
        ++base_pos;
      }
      val = last;
      return true;
    };
    while (idx.next(n)) {
      if (++budget > kScanBudget) fail(errc::budget_exceeded, "interval-union scan");
      u64 a, a1;
      if (!base_at(n, a)) return false;
      if (a > k) return false;
      if (!base_at(n + 1, a1)) return true;  // block end past the cap, so k < a1
      if (k < a1) return true;
    }
    return false;
  }
  if (const auto* d = std::get_if<ComplD>(&node_->v)) return !d->base.contains(k);
  if (const auto* d = std::get_if<BlockUnionD>(&node_->v)) {
    u64 n = d->sel.part.block_of(k);
    if (!d->s.contains(n)) return false;
    auto p = d->sel.pick(n);
    return std::binary_search(p.begin(), p.end(), k);
  }
  if (const auto* d = std::get_if<TildeD>(&node_->v)) {
    u64 t = d->gap, budget = 0;
    bool started = false;
    while (true) {
      if (++budget > kScanBudget) fail(errc::budget_exceeded, "tilde scan");
      try {
        t = d->y.nth(started ? t : d->gap);
      } catch (const error& e) {
        if (e.code() == errc::seq_overflow) return false;
        throw;
      }
      started = true;
      if (t >= k) return t == k;
    }
  }
  // block-index streams: scan
  SeqCursor c = cursor();
  u64 v = 0, budget = 0;
  while (c.next(v)) {
    if (++budget > kScanBudget) fail(errc::budget_exceeded, "index-stream scan");
    if (v >= k) return v == k;
  }
  return false;
}

u64 IncSeq::rank(u64 k) const {
  if (k < 1) return 0;
  if (std::get_if<IdentityD>(&node_->v)) return k;
  if (const auto* d = std::get_if<ArithD>(&node_->v))
    return k < d->start ? 0 : (k - d->start) / d->step + 1;
  if (const auto* d = std::get_if<GeomD>(&node_->v)) {
    u64 v = d->start, cnt = 0;
    while (v <= k) {
      ++cnt;
      if (!try_mul(v, d->ratio, v)) break;
    }
    return cnt;
  }
  if (const auto* d = std::get_if<ListTailD>(&node_->v)) {
    u64 cnt = std::upper_bound(d->prefix.begin(), d->prefix.end(), k) - d->prefix.begin();
    if (k >= d->start) cnt += (k - d->start) / d->step + 1;
    return cnt;
  }
  if (std::get_if<TriD>(&node_->v)) {
    u64 m = k - 1, n0 = isqrt_u64(m <= (u64(1) << 61) ? 2 * m : kValueCap), best = 1;
    for (u64 c = (n0 > 3 ? n0 - 3 : 1); c <= n0 + 4; ++c) {
      u64 tri;
      if (try_mul(c % 2 == 0 ? c / 2 : c, c % 2 == 0 ? c - 1 : (c - 1) / 2, tri) && tri <= m)
        best = c;
    }
    return best;
  }
  SeqCursor c = cursor();
  u64 v = 0, cnt = 0;
  try {
    while (c.next(v)) {
      if (v > k) break;
      if (++cnt > kScanBudget) fail(errc::budget_exceeded, "rank scan");
    }
  } catch (const error& e) {
    // saturation only hides values beyond the cap, all of which exceed k
    if (e.code() != errc::seq_overflow) throw;
  }
  return cnt;
}

std::vector<u64> IncSeq::prefix(u64 count) const {
  std::vector<u64> out;
  out.reserve(count);
  SeqCursor c = cursor();
  u64 v = 0;
  for (u64 i = 0; i < count; ++i) {
    if (!c.next(v))
      fail(errc::seq_overflow, "stream saturated before index " + std::to_string(count));
    out.push_back(v);
  }
  return out;
}

std::vector<u64> IncSeq::elements_below(u64 bound) const {
  std::vector<u64> out;
  SeqCursor c = cursor();
  u64 v = 0;
  while (c.next(v)) {
    if (v > bound) break;
    out.push_back(v);
    if (out.size() > kScanBudget) fail(errc::budget_exceeded, "elements_below scan");
  }
  return out;
}

bool IncSeq::is_naturals() const {
  if (std::get_if<IdentityD>(&node_->v)) return true;
  if (const auto* d = std::get_if<ArithD>(&node_->v)) return d->start == 1 && d->step == 1;
  if (const auto* d = std::get_if<ListTailD>(&node_->v)) {
    for (size_t i = 0; i < d->prefix.size(); ++i)
      if (d->prefix[i] != i + 1) return false;
    return d->start == d->prefix.size() + 1 && d->step == 1;
  }
  if (const auto* d = std::get_if<IUnionD>(&node_->v))
    return d->index.is_naturals() && d->base.nth(1) == 1;
  if (const auto* d = std::get_if<BlockUnionD>(&node_->v))
    return d->s.is_naturals() && d->sel.picks_whole_blocks();
  if (const auto* d = std::get_if<TildeD>(&node_->v)) return d->y.is_naturals();
  return false;
}

std::optional<u64> IncSeq::min_complement() const {
  if (is_naturals()) return std::nullopt;
  SeqCursor c = cursor();
  u64 expect = 1, v = 0, steps = 0;
  while (c.next(v)) {
    if (v != expect) return expect;
    ++expect;
    if (++steps > kScanBudget) fail(errc::budget_exceeded, "gap scan");
  }
  if (expect > kValueCap) fail(errc::budget_exceeded, "gap scan saturated");
  return expect;
}

// ---------------------------------------------------------------------------
// Exact evaluation beyond the cap

mpz_class IncSeq::nth_big(const mpz_class& n) const {
  if (n < 1) fail(errc::invalid_argument, "indices are 1-based");
  if (std::get_if<IdentityD>(&node_->v)) return n;
  if (const auto* d = std::get_if<ArithD>(&node_->v)) {
    guard_bits(n);
    return to_mpz(d->start) + (n - 1) * to_mpz(d->step);
  }
  if (const auto* d = std::get_if<GeomD>(&node_->v)) {
    if (n > 2000000) fail(errc::budget_exceeded, "geometric index too large for exact value");
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), d->ratio, to_u64(n - 1));
    return to_mpz(d->start) * r;
  }
  if (const auto* d = std::get_if<ListTailD>(&node_->v)) {
    if (n <= d->prefix.size()) return to_mpz(d->prefix[to_u64(n) - 1]);
    guard_bits(n);
    return to_mpz(d->start) + (n - to_mpz(d->prefix.size()) - 1) * to_mpz(d->step);
  }
  if (std::get_if<TriD>(&node_->v)) {
    guard_bits(n);
    return n * (n - 1) / 2 + 1;
  }
  if (const auto* d = std::get_if<ComplD>(&node_->v)) {
    mpz_class hi = d->cert.nth_big(n);
    if (hi - d->base.rank_big(hi) < n)
      fail(errc::descriptor_exhausted, "infiniteness witness exhausted before requested index");
    mpz_class lo = 1, best = hi;
    while (lo <= hi) {
      mpz_class mid = (lo + hi) / 2;
      if (mid - d->base.rank_big(mid) >= n) {
        best = mid;
        hi = mid - 1;
      } else {
        lo = mid + 1;
      }
    }
    return best;
  }
  if (const auto* d = std::get_if<TildeD>(&node_->v)) {
    if (n > 1000000) fail(errc::budget_exceeded, "tilde index too large");
    mpz_class t = to_mpz(d->gap);
    u64 steps = to_u64(n);
    for (u64 i = 0; i < steps; ++i) {
      t = d->y.nth_big(t);
      guard_bits(t);
    }
    return t;
  }
  if (const auto* d = std::get_if<IUnionD>(&node_->v)) {
    SeqCursor idx = d->index.cursor();
    mpz_class cum = 0;
    u64 bi = 0, budget = 0;
    while (idx.next(bi)) {
      if (++budget > kScanBudget) fail(errc::budget_exceeded, "interval-union index walk");
      mpz_class a = d->base.nth_big(to_mpz(bi)), a1 = d->base.nth_big(to_mpz(bi + 1));
      mpz_class len = a1 - a;
      if (cum + len >= n) return a + (n - cum - 1);
      cum += len;
    }
    fail(errc::seq_overflow, "interval-union index stream saturated");
  }
  if (const auto* d = std::get_if<BlockUnionD>(&node_->v)) {
    SeqCursor sc = d->s.cursor();
    mpz_class cum = 0;
    u64 bn = 0, budget = 0;
    while (sc.next(bn)) {
      if (++budget > kScanBudget) fail(errc::budget_exceeded, "block-union walk");
      u64 w = d->sel.width_at(bn);
      if (cum + w >= n) {
        u64 j = to_u64(mpz_class(n - cum));
        mpz_class lo = d->sel.part.minima().nth_big(to_mpz(bn));
        mpz_class end = d->sel.part.minima().nth_big(to_mpz(bn + 1));
        if (fits_u64(end) && to_u64(end) <= kValueCap) return to_mpz(d->sel.pick(bn)[j - 1]);
        mpz_class off = to_mpz(d->sel.offset), slack = end - lo - w;
        if (off > slack) off = slack;
        return lo + off + (j - 1);
      }
      cum += w;
    }
    fail(errc::seq_overflow, "block-union base stream saturated");
  }
  // index streams: cursor walk
  if (!fits_u64(n)) fail(errc::budget_exceeded, "index too large");
  return to_mpz(nth(to_u64(n)));
}

mpz_class IncSeq::rank_big(const mpz_class& k) const {
  if (k < 1) return 0;
  if (fits_u64(k) && to_u64(k) <= kValueCap) return to_mpz(rank(to_u64(k)));
  if (std::get_if<IdentityD>(&node_->v)) return k;
  if (const auto* d = std::get_if<ArithD>(&node_->v)) {
    if (k < d->start) return 0;
    return (k - d->start) / d->step + 1;
  }
  if (const auto* d = std::get_if<GeomD>(&node_->v)) {
    mpz_class v = to_mpz(d->start), cnt = 0;
    while (v <= k) {
      ++cnt;
      v *= d->ratio;
    }
    return cnt;
  }
  if (const auto* d = std::get_if<ListTailD>(&node_->v)) {
    mpz_class cnt = d->prefix.size();
    if (k >= d->start) cnt += (k - d->start) / d->step + 1;
    return cnt;
  }
  if (std::get_if<TriD>(&node_->v)) {
    // largest n with n(n-1)/2 <= k-1
    mpz_class m = 2 * (k - 1), r;
    mpz_sqrt(r.get_mpz_t(), m.get_mpz_t());
    while (r * (r - 1) / 2 > k - 1) --r;
    while ((r + 1) * r / 2 <= k - 1) ++r;
    return r;
  }
  if (const auto* d = std::get_if<ComplD>(&node_->v)) return k - d->base.rank_big(k);
  if (const auto* d = std::get_if<TildeD>(&node_->v)) {
    mpz_class t = to_mpz(d->gap), cnt = 0;
    u64 budget = 0;
    while (true) {
      if (++budget > 1000000) fail(errc::budget_exceeded, "tilde rank walk");
      t = d->y.nth_big(t);
      guard_bits(t);
      if (t > k) return cnt;
      ++cnt;
    }
  }
  if (const auto* d = std::get_if<IUnionD>(&node_->v)) {
    SeqCursor idx = d->index.cursor();
    mpz_class cnt = 0;
    u64 bi = 0, budget = 0;
    while (idx.next(bi)) {
      if (++budget > kScanBudget) fail(errc::budget_exceeded, "interval-union rank walk");
      mpz_class a = d->base.nth_big(to_mpz(bi));
      if (a > k) break;
      mpz_class a1 = d->base.nth_big(to_mpz(bi + 1));
      mpz_class top = a1 - 1;
      if (top > k) top = k;
      cnt += top - a + 1;
      if (a1 > k) break;
    }
    return cnt;
  }
  if (const auto* d = std::get_if<BlockUnionD>(&node_->v)) {
    SeqCursor sc = d->s.cursor();
    mpz_class cnt = 0;
    u64 bn = 0, budget = 0;
    while (sc.next(bn)) {
      if (++budget > kScanBudget) fail(errc::budget_exceeded, "block-union rank walk");
      mpz_class lo = d->sel.part.minima().nth_big(to_mpz(bn));
      if (lo > k) break;
      mpz_class hi1 = d->sel.part.minima().nth_big(to_mpz(bn + 1));
      u64 w = d->sel.width_at(bn);
      if (hi1 <= k) {
        cnt += w;
        continue;
      }
      mpz_class off = to_mpz(d->sel.offset), slack = hi1 - lo - w;
      if (off > slack) off = slack;
      for (u64 j = 0; j < w; ++j)
        if (lo + off + j <= k) ++cnt;
      break;
    }
    return cnt;
  }
  fail(errc::budget_exceeded, "rank past cap unsupported for this descriptor");
}

bool IncSeq::contains_big(const mpz_class& k) const {
  if (k < 1) return false;
  if (fits_u64(k) && to_u64(k) <= kValueCap) return contains(to_u64(k));
  if (std::get_if<IdentityD>(&node_->v)) return true;
  if (const auto* d = std::get_if<ArithD>(&node_->v))
    return k >= d->start && mpz_class((k - d->start) % d->step) == 0;
  if (const auto* d = std::get_if<GeomD>(&node_->v)) {
    mpz_class v = to_mpz(d->start);
    while (v < k) v *= d->ratio;
    return v == k;
  }
  if (const auto* d = std::get_if<ListTailD>(&node_->v))
    return k >= d->start && mpz_class((k - d->start) % d->step) == 0;
  if (const auto* d = std::get_if<ComplD>(&node_->v)) return !d->base.contains_big(k);
  return rank_big(k) - rank_big(k - 1) == 1;
}

// ---------------------------------------------------------------------------

std::optional<u64> first_difference(const IncSeq& a, const IncSeq& b, u64 limit) {
  SeqCursor ca = a.cursor(), cb = b.cursor();
  for (u64 i = 1; i <= limit; ++i) {
    u64 va = 0, vb = 0;
    bool ga = ca.next(va), gb = cb.next(vb);
    if (!ga || !gb) {
      if (ga != gb) return i;
      fail(errc::seq_overflow, "both streams saturated at index " + std::to_string(i));
    }
    if (va != vb) return i;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Textual form

std::optional<IncSeq::AffineTail> IncSeq::affine_tail() const {
  if (std::holds_alternative<IdentityD>(node_->v)) return AffineTail{1, 1};
  if (auto* d = std::get_if<ArithD>(&node_->v)) return AffineTail{1, d->step};
  if (auto* d = std::get_if<ListTailD>(&node_->v))
    return AffineTail{static_cast<u64>(d->prefix.size()) + 1, d->step};
  return std::nullopt;
}

std::string IncSeq::to_spec() const {
  std::ostringstream os;
  if (std::get_if<IdentityD>(&node_->v)) {
    os << "id";
  } else if (const auto* d = std::get_if<ArithD>(&node_->v)) {
    os << "arith(" << d->start << "," << d->step << ")";
  } else if (const auto* d = std::get_if<GeomD>(&node_->v)) {
    if (d->start == d->ratio)
      os << "pow(" << d->ratio << ")";
    else
      os << "geom(" << d->start << "," << d->ratio << ")";
  } else if (const auto* d = std::get_if<ListTailD>(&node_->v)) {
    os << "list(";
    for (size_t i = 0; i < d->prefix.size(); ++i) os << (i ? "," : "") << d->prefix[i];
    os << ";arith(" << d->start << "," << d->step << "))";
  } else if (std::get_if<TriD>(&node_->v)) {
    os << "blockmin(linear)";
  } else if (const auto* d = std::get_if<IUnionD>(&node_->v)) {
    os << "iunion(" << d->index.to_spec() << "," << d->base.to_spec() << ")";
  } else if (const auto* d = std::get_if<ComplD>(&node_->v)) {
    os << "compl(" << d->base.to_spec() << ";cert=" << d->cert.to_spec() << ")";
  } else if (const auto* d = std::get_if<TildeD>(&node_->v)) {
    os << "tilde(" << d->y.to_spec() << ")";
  } else if (const auto* d = std::get_if<BlockUnionD>(&node_->v)) {
    os << "blocku(" << d->sel.part.minima().to_spec() << ";w=" << d->sel.width_const
       << ";o=" << d->sel.offset << ";ov=" << d->sel.overrides.size() << ";s=" << d->s.to_spec()
       << ")";
  } else if (const auto* d = std::get_if<KunD>(&node_->v)) {
    os << "kunidx(" << d->k << ";" << d->sel.part.minima().to_spec() << ";s=" << d->s.to_spec()
       << ")";
  } else if (const auto* d = std::get_if<SparseD>(&node_->v)) {
    os << "sparseidx(" << d->sel.part.minima().to_spec() << ";s=" << d->s.to_spec() << ")";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Parser {
  std::string_view text;
  size_t pos = 0;

  [[noreturn]] void die(const std::string& what) {
    fail(errc::parse_error, what + " at offset " + std::to_string(pos));
  }
  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) die(std::string("expected '") + c + "'");
  }
  std::string word() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) die("expected a name");
    return std::string(text.substr(start, pos - start));
  }
  u64 integer() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) die("expected an integer");
    u64 v = 0;
    for (size_t i = start; i < pos; ++i) {
      if (v > kValueCap / 10) die("integer too large");
      v = v * 10 + static_cast<u64>(text[i] - '0');
    }
    if (v < 1) die("integers must be >= 1");
    return v;
  }

  IncSeq seq() {
    std::string w = word();
    if (w == "id") return IncSeq::identity();
    if (w == "arith") {
      expect('(');
      u64 s = integer();
      expect(',');
      u64 d = integer();
      expect(')');
      return IncSeq::arithmetic(s, d);
    }
    if (w == "pow") {
      expect('(');
      u64 b = integer();
      expect(')');
      if (b < 2) die("pow base must be >= 2");
      return IncSeq::power(b);
    }
    if (w == "geom") {
      expect('(');
      u64 s = integer();
      expect(',');
      u64 r = integer();
      expect(')');
      if (r < 2) die("geom ratio must be >= 2");
      return IncSeq::geometric(s, r);
    }
    if (w == "list") {
      expect('(');
      std::vector<u64> pre;
      pre.push_back(integer());
      while (eat(',')) pre.push_back(integer());
      expect(';');
      std::string tw = word();
      if (tw != "arith") die("list tail must be arith");
      expect('(');
      u64 s = integer();
      expect(',');
      u64 d = integer();
      expect(')');
      expect(')');
      try {
        return IncSeq::with_prefix(std::move(pre), s, d);
      } catch (const error& e) {
        die(e.what());
      }
    }
    if (w == "compl") {
      expect('(');
      IncSeq base = seq();
      expect(';');
      std::string cw = word();
      if (cw != "cert") die("complement needs cert=...");
      expect('=');
      IncSeq cert = seq();
      expect(')');
      try {
        return IncSeq::complement(std::move(base), std::move(cert));
      } catch (const error& e) {
        die(e.what());
      }
    }
    if (w == "iunion") {
      expect('(');
      IncSeq index = seq();
      expect(',');
      IncSeq base = seq();
      expect(')');
      return IncSeq::interval_union(std::move(index), std::move(base));
    }
    if (w == "tilde") {
      expect('(');
      IncSeq y = seq();
      expect(')');
      return tilde(y);
    }
    if (w == "blockmin") {
      expect('(');
      std::string kind = word();
      expect(')');
      if (kind == "linear") return IncSeq::triangular();
      if (kind == "doubling") return IncSeq::geometric(1, 2);
      die("unknown block rule '" + kind + "'");
    }
    die("unknown descriptor '" + w + "'");
  }
};

}  // namespace

IncSeq parse_seq(std::string_view s) {
  Parser p{s};
  IncSeq out = p.seq();
  p.skip_ws();
  if (p.pos != s.size()) p.die("trailing input");
  return out;
}

}  // namespace oival
