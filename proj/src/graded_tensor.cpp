#include "moulin/graded_tensor.hpp"

#include <algorithm>
#include <bit>
#include <utility>

namespace moulin {

std::string to_string(Middle m) {
  switch (m) {
    case Middle::none: return "none";
    case Middle::U: return "U";
    case Middle::V: return "V";
    case Middle::W: return "W";
    case Middle::star: return "star";
  }
  return "?";
}

std::int64_t binomial(std::int64_t n, std::int64_t r) noexcept {
  if (r < 0 || n < 0 || r > n) return 0;
  r = std::min(r, n - r);
  std::int64_t out = 1;
  for (std::int64_t i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

std::size_t int_power(std::size_t base, int exponent) noexcept {
  std::size_t out = 1;  // 0^0 = 1
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

std::size_t SpaceSig::middle_dim() const noexcept {
  switch (middle) {
    case Middle::none: return 1;
    case Middle::U: return static_cast<std::size_t>(dim_v + dim_w);
    case Middle::V: return static_cast<std::size_t>(dim_v);
    case Middle::W: return static_cast<std::size_t>(dim_w);
    case Middle::star: return 1;
  }
  return 0;
}

std::size_t SpaceSig::dimension() const noexcept {
  if (p < 0 || q < 0 || q > dim_w) return 0;
  return int_power(static_cast<std::size_t>(dim_v), p) * middle_dim() *
         static_cast<std::size_t>(binomial(dim_w, q));
}

std::size_t Grade::block_offset(int p) const noexcept {
  std::size_t off = 0;
  for (int i = 0; i < p; ++i) off += block(i).dimension();
  return off;
}

std::size_t Grade::dimension() const noexcept { return degree < 0 ? 0 : block_offset(degree + 1); }

WedgeBasis::WedgeBasis(int k, int q) {
  if (k < 0 || k > 20) throw ShapeError("wedge basis supports 0 <= k <= 20");
  rank_.assign(std::size_t{1} << k, -1);
  if (q < 0 || q > k) return;
  for_each_combination(static_cast<std::size_t>(k), static_cast<std::size_t>(q),
                       [&](std::span<const std::size_t> subset) {
                         std::uint32_t mask = 0;
                         for (auto j : subset) mask |= 1u << j;
                         rank_[mask] = static_cast<std::int32_t>(masks_.size());
                         masks_.push_back(mask);
                         return true;
                       });
}

namespace {

struct BlockLayout {
  int p = 0;
  int q = 0;
  std::size_t vcount = 0;
  std::size_t mdim = 0;
  std::size_t wcount = 0;
  std::size_t offset = 0;
  std::size_t size = 0;
  WedgeBasis wedges{0, -1};

  std::size_t index(std::size_t vi, std::size_t m, std::size_t wr) const { return (vi * mdim + m) * wcount + wr; }
};

struct Layout {
  std::vector<BlockLayout> blocks;

  explicit Layout(const Grade& g) {
    if (g.degree < 0) return;
    std::size_t off = 0;
    for (int p = 0; p <= g.degree; ++p) {
      const auto sig = g.block(p);
      BlockLayout b;
      b.p = p;
      b.q = sig.q;
      b.vcount = int_power(static_cast<std::size_t>(g.dim_v), p);
      b.mdim = sig.middle_dim();
      b.size = sig.dimension();
      b.offset = off;
      if (b.size > 0) {
        b.wedges = WedgeBasis(g.dim_w, sig.q);
        b.wcount = b.wedges.size();
      }
      off += b.size;
      blocks.push_back(std::move(b));
    }
  }

  const BlockLayout* find(int p) const {
    if (p < 0 || p >= static_cast<int>(blocks.size())) return nullptr;
    const auto& b = blocks[static_cast<std::size_t>(p)];
    return b.size == 0 ? nullptr : &b;
  }
};

/// Decoded coordinates of one basis element inside a block.
struct Coord {
  std::size_t vi;
  std::size_t m;
  std::size_t wr;
};

Coord decode(const BlockLayout& b, std::size_t i) {
  const std::size_t wr = i % b.wcount;
  const std::size_t rest = i / b.wcount;
  return {rest / b.mdim, rest % b.mdim, wr};
}

template <typename Fn>
void for_each_nonzero(const Layout& layout, const Tensor& t, Fn&& fn) {
  const auto coeffs = t.coeffs();
  for (const auto& b : layout.blocks) {
    for (std::size_t i = 0; i < b.size; ++i) {
      const Element c = coeffs[b.offset + i];
      if (c != 0) fn(b, decode(b, i), c);
    }
  }
}

/// Number of V factors ahead of the middle slot.
int prefix_length(Middle m, int p) { return m == Middle::none ? p - 1 : p; }

/// Sign of e_a ^ e_b relative to the sorted wedge of a|b: the number of pairs
/// (x in a, y in b) with x > y.
long merge_inversions(std::uint32_t a, std::uint32_t b) {
  long count = 0;
  while (b != 0) {
    const int y = std::countr_zero(b);
    b &= b - 1;
    count += std::popcount(a & ~((2u << y) - 1));
  }
  return count;
}

void require_same_grade(const Tensor& a, const Tensor& b) {
  if (!(a.grade() == b.grade())) throw ShapeError("tensors live in different grades");
}

void require_length(std::span<const Element> v, int expected, const char* what) {
  if (static_cast<int>(v.size()) != expected) throw ShapeError(std::string(what) + " has the wrong dimension");
}

}  // namespace

std::vector<BasisIndex> enumerate_basis(const SpaceSig& sig) {
  std::vector<BasisIndex> out;
  const std::size_t dim = sig.dimension();
  if (dim == 0) return out;
  const Grade g{sig.middle, sig.p + sig.q, sig.dim_v, sig.dim_w};
  const Layout layout(g);
  const auto& b = layout.blocks[static_cast<std::size_t>(sig.p)];
  out.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const auto c = decode(b, i);
    BasisIndex idx;
    idx.v_tuple.resize(static_cast<std::size_t>(sig.p));
    std::size_t vi = c.vi;
    for (int j = sig.p - 1; j >= 0; --j) {
      idx.v_tuple[static_cast<std::size_t>(j)] = static_cast<int>(vi % static_cast<std::size_t>(sig.dim_v));
      vi /= static_cast<std::size_t>(sig.dim_v);
    }
    idx.middle_idx = sig.middle == Middle::none ? -1 : static_cast<int>(c.m);
    for (std::uint32_t mask = b.wedges.mask(c.wr); mask != 0; mask &= mask - 1)
      idx.w_subset.push_back(std::countr_zero(mask));
    out.push_back(std::move(idx));
  }
  return out;
}

std::size_t basis_position(const SpaceSig& sig, const BasisIndex& index) {
  if (static_cast<int>(index.v_tuple.size()) != sig.p || static_cast<int>(index.w_subset.size()) != sig.q)
    throw ShapeError("basis index does not match signature degrees");
  std::size_t vi = 0;
  for (int v : index.v_tuple) {
    if (v < 0 || v >= sig.dim_v) throw ShapeError("V index out of range");
    vi = vi * static_cast<std::size_t>(sig.dim_v) + static_cast<std::size_t>(v);
  }
  const std::size_t mdim = sig.middle_dim();
  std::size_t m = 0;
  if (sig.middle != Middle::none) {
    if (index.middle_idx < 0 || static_cast<std::size_t>(index.middle_idx) >= mdim)
      throw ShapeError("middle index out of range");
    m = static_cast<std::size_t>(index.middle_idx);
  }
  std::uint32_t mask = 0;
  int prev = -1;
  for (int w : index.w_subset) {
    if (w <= prev || w >= sig.dim_w) throw ShapeError("wedge subset must be strictly increasing within range");
    mask |= 1u << w;
    prev = w;
  }
  const WedgeBasis wb(sig.dim_w, sig.q);
  return (vi * mdim + m) * wb.size() + wb.rank_of(mask);
}

// ---------------------------------------------------------------------------

Tensor::Tensor(Grade grade) : grade_(grade), coeffs_(grade.dimension(), 0) {}

Tensor::Tensor(Grade grade, std::vector<Element> coeffs) : grade_(grade), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grade_.dimension()) throw ShapeError("coefficient count does not match the grade");
}

Tensor Tensor::in_block(const SpaceSig& sig, std::span<const Element> block_coeffs) {
  if (sig.p < 0 || sig.q < 0) throw ShapeError("negative tensor degree");
  Tensor t(Grade{sig.middle, sig.p + sig.q, sig.dim_v, sig.dim_w});
  auto dst = t.block(sig.p);
  if (dst.size() != block_coeffs.size()) throw ShapeError("block coefficient count does not match the signature");
  std::ranges::copy(block_coeffs, dst.begin());
  return t;
}

Tensor Tensor::unit(const Grade& grade, int p, std::size_t position) {
  Tensor t(grade);
  auto blk = t.block(p);
  if (position >= blk.size()) throw ShapeError("basis position out of range");
  blk[position] = 1;
  return t;
}

std::span<const Element> Tensor::block(int p) const {
  if (p < 0 || p > grade_.degree) return {};
  return std::span<const Element>(coeffs_).subspan(grade_.block_offset(p), grade_.block(p).dimension());
}

std::span<Element> Tensor::block(int p) {
  if (p < 0 || p > grade_.degree) return {};
  return std::span<Element>(coeffs_).subspan(grade_.block_offset(p), grade_.block(p).dimension());
}

bool Tensor::is_zero() const noexcept {
  return std::ranges::all_of(coeffs_, [](Element c) { return c == 0; });
}

Tensor add(const PrimeField& field, const Tensor& a, const Tensor& b) { return axpy(field, a, 1, b); }

Tensor sub(const PrimeField& field, const Tensor& a, const Tensor& b) {
  return axpy(field, a, field.neg(1), b);
}

Tensor scale(const PrimeField& field, Element c, const Tensor& t) {
  Tensor out = t;
  for (auto& x : out.coeffs()) x = field.mul(x, c);
  return out;
}

Tensor axpy(const PrimeField& field, const Tensor& a, Element c, const Tensor& b) {
  require_same_grade(a, b);
  Tensor out = a;
  auto dst = out.coeffs();
  auto src = b.coeffs();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = field.mul_add(dst[i], c, src[i]);
  return out;
}

// ---------------------------------------------------------------------------

Tensor wedge_multiply(const PrimeField& field, const TensorPower& t) {
  const int k = t.dim_w;
  const int q = t.degree;
  if (k < 0 || q < 0) throw ShapeError("negative tensor power shape");
  const std::size_t tuples = int_power(static_cast<std::size_t>(k), q);
  if (t.coeffs.size() != tuples) throw ShapeError("tensor power coefficient count must be k^q");

  Tensor out(Grade{Middle::none, q, 0, k});
  if (q > k) return out;
  const WedgeBasis wb(k, q);
  auto dst = out.block(0);
  std::vector<int> digits(static_cast<std::size_t>(q));
  for (std::size_t i = 0; i < tuples; ++i) {
    const Element c = t.coeffs[i] % field.modulus();
    if (c == 0) continue;
    std::size_t rest = i;
    for (int j = q - 1; j >= 0; --j) {
      digits[static_cast<std::size_t>(j)] = static_cast<int>(rest % static_cast<std::size_t>(k));
      rest /= static_cast<std::size_t>(k);
    }
    std::uint32_t mask = 0;
    long inversions = 0;
    bool repeated = false;
    for (int a = 0; a < q && !repeated; ++a) {
      const int x = digits[static_cast<std::size_t>(a)];
      if (mask & (1u << x)) repeated = true;
      mask |= 1u << x;
      for (int b = a + 1; b < q; ++b) inversions += digits[static_cast<std::size_t>(b)] < x ? 1 : 0;
    }
    if (repeated) continue;
    auto& slot = dst[wb.rank_of(mask)];
    slot = field.add(slot, field.mul(field.sign(inversions), c));
  }
  return out;
}

Tensor expand_rank1(const PrimeField& field, const Rank1& r, const SpaceSig& sig) {
  if (sig.p < 0 || sig.q < 0) throw ShapeError("negative tensor degree");
  if (static_cast<int>(r.v_factors.size()) != sig.p) throw ShapeError("V factor count does not match p");
  if (static_cast<int>(r.w_factors.size()) != sig.q) throw ShapeError("W factor count does not match q");
  for (const auto& v : r.v_factors) require_length(v, sig.dim_v, "V factor");
  for (const auto& w : r.w_factors) require_length(w, sig.dim_w, "W factor");
  const std::size_t mdim = sig.middle_dim();
  std::vector<Element> middle(1, 1);
  if (sig.middle == Middle::none) {
    if (r.middle) throw ShapeError("a middle factor was given for a V-space signature");
  } else {
    if (!r.middle) throw ShapeError("middle factor missing");
    require_length(*r.middle, static_cast<int>(mdim), "middle factor");
    middle = *r.middle;
  }

  // Kronecker product of the V factors, first factor most significant.
  std::vector<Element> vpart(1, r.scalar % field.modulus());
  for (const auto& v : r.v_factors) {
    std::vector<Element> next;
    next.reserve(vpart.size() * v.size());
    for (Element a : vpart)
      for (Element b : v) next.push_back(field.mul(a, b % field.modulus()));
    vpart = std::move(next);
  }

  TensorPower wpow{sig.dim_w, sig.q, std::vector<Element>(1, 1)};
  for (const auto& w : r.w_factors) {
    std::vector<Element> next;
    next.reserve(wpow.coeffs.size() * w.size());
    for (Element a : wpow.coeffs)
      for (Element b : w) next.push_back(field.mul(a, b % field.modulus()));
    wpow.coeffs = std::move(next);
  }
  const Tensor wedge = wedge_multiply(field, wpow);
  const auto wcoeffs = wedge.block(0);

  Tensor out(Grade{sig.middle, sig.p + sig.q, sig.dim_v, sig.dim_w});
  auto dst = out.block(sig.p);
  if (dst.empty()) return out;
  std::size_t pos = 0;
  for (Element a : vpart)
    for (Element m : middle) {
      const Element am = field.mul(a, m % field.modulus());
      for (Element w : wcoeffs) dst[pos++] = field.mul(am, w);
    }
  return out;
}

Tensor cowedge(const PrimeField& field, const Tensor& t) {
  const auto& g = t.grade();
  if (g.middle != Middle::none) throw ShapeError("cowedge is defined on T^pV (x) Lambda^qW only");
  const Grade og{Middle::W, g.degree - 1, g.dim_v, g.dim_w};
  Tensor out(og);
  const Layout in(g);
  const Layout ol(og);
  auto dst = out.coeffs();
  for_each_nonzero(in, t, [&](const BlockLayout& b, Coord c, Element coeff) {
    const auto* ob = ol.find(b.p);
    if (b.q == 0 || ob == nullptr) return;
    const std::uint32_t mask = b.wedges.mask(c.wr);
    long position = 0;
    for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1, ++position) {
      const int j = std::countr_zero(rest);
      const std::size_t idx = ob->offset + ob->index(c.vi, static_cast<std::size_t>(j),
                                                     ob->wedges.rank_of(mask & ~(1u << j)));
      dst[idx] = field.add(dst[idx], field.mul(field.sign(position), coeff));
    }
  });
  return out;
}

Tensor cobound_v(const PrimeField& field, std::span<const Element> v, const Tensor& t) {
  const auto& g = t.grade();
  require_length(v, g.dim_v, "V vector");
  const Grade og{g.middle, g.degree + 1, g.dim_v, g.dim_w};
  Tensor out(og);
  const Layout in(g);
  const Layout ol(og);
  auto dst = out.coeffs();
  const std::size_t l = static_cast<std::size_t>(g.dim_v);
  for_each_nonzero(in, t, [&](const BlockLayout& b, Coord c, Element coeff) {
    const int gaps = prefix_length(g.middle, b.p);
    const auto* ob = ol.find(b.p + 1);
    if (gaps < 0 || ob == nullptr) return;
    for (int gap = 0; gap <= gaps; ++gap) {
      const std::size_t tail = int_power(l, b.p - gap);
      const std::size_t prefix = c.vi / tail;
      const std::size_t suffix = c.vi % tail;
      const Element signed_coeff = field.mul(field.sign(gap), coeff);
      for (std::size_t r = 0; r < l; ++r) {
        if (v[r] == 0) continue;
        const std::size_t nvi = (prefix * l + r) * tail + suffix;
        const std::size_t idx = ob->offset + ob->index(nvi, c.m, c.wr);
        dst[idx] = field.mul_add(dst[idx], signed_coeff, v[r]);
      }
    }
  });
  return out;
}

Tensor cobound_w(const PrimeField& field, std::span<const Element> w, const Tensor& t) {
  const auto& g = t.grade();
  require_length(w, g.dim_w, "W vector");
  const Grade og{g.middle, g.degree + 1, g.dim_v, g.dim_w};
  Tensor out(og);
  const Layout in(g);
  const Layout ol(og);
  auto dst = out.coeffs();
  for_each_nonzero(in, t, [&](const BlockLayout& b, Coord c, Element coeff) {
    const auto* ob = ol.find(b.p);
    if (ob == nullptr) return;
    const Element signed_coeff = field.mul(field.sign(prefix_length(g.middle, b.p) + b.q), coeff);
    const std::uint32_t mask = b.wedges.mask(c.wr);
    for (int j = 0; j < g.dim_w; ++j) {
      if (w[static_cast<std::size_t>(j)] == 0 || (mask & (1u << j))) continue;
      const long swaps = std::popcount(mask >> (j + 1));
      const std::size_t idx = ob->offset + ob->index(c.vi, c.m, ob->wedges.rank_of(mask | (1u << j)));
      dst[idx] = field.mul_add(dst[idx], field.mul(field.sign(swaps), signed_coeff), w[static_cast<std::size_t>(j)]);
    }
  });
  return out;
}

Tensor cobound_u(const PrimeField& field, std::span<const Element> u, const Tensor& t) {
  const auto& g = t.grade();
  require_length(u, g.dim_v + g.dim_w, "U vector");
  const auto k = static_cast<std::size_t>(g.dim_w);
  return add(field, cobound_v(field, u.subspan(k), t), cobound_w(field, u.first(k), t));
}

Tensor include(const Tensor& t, Middle target) {
  const auto& g = t.grade();
  if (target != Middle::U || (g.middle != Middle::V && g.middle != Middle::W))
    throw ShapeError("include maps a V- or W-middle tensor into the U-middle grade");
  const Grade og{Middle::U, g.degree, g.dim_v, g.dim_w};
  Tensor out(og);
  const Layout in(g);
  const Layout ol(og);
  const std::size_t shift = g.middle == Middle::V ? static_cast<std::size_t>(g.dim_w) : 0;
  auto dst = out.coeffs();
  for_each_nonzero(in, t, [&](const BlockLayout& b, Coord c, Element coeff) {
    const auto* ob = ol.find(b.p);
    dst[ob->offset + ob->index(c.vi, c.m + shift, c.wr)] = coeff;
  });
  return out;
}

Tensor project(const Tensor& t, Middle target) {
  const auto& g = t.grade();
  if (g.middle != Middle::U || (target != Middle::V && target != Middle::W))
    throw ShapeError("project maps a U-middle tensor onto the V- or W-middle grade");
  const Grade og{target, g.degree, g.dim_v, g.dim_w};
  Tensor out(og);
  const Layout in(g);
  const Layout ol(og);
  const std::size_t k = static_cast<std::size_t>(g.dim_w);
  auto dst = out.coeffs();
  for_each_nonzero(in, t, [&](const BlockLayout& b, Coord c, Element coeff) {
    const bool in_w = c.m < k;
    if (in_w != (target == Middle::W)) return;
    const auto* ob = ol.find(b.p);
    dst[ob->offset + ob->index(c.vi, in_w ? c.m : c.m - k, c.wr)] = coeff;
  });
  return out;
}

Tensor include_v_space(const Tensor& t) {
  const auto& g = t.grade();
  if (g.middle != Middle::none) throw ShapeError("include_v_space expects a V-space tensor");
  const Grade og{Middle::U, g.degree - 1, g.dim_v, g.dim_w};
  Tensor out(og);
  const Layout in(g);
  const Layout ol(og);
  const std::size_t l = static_cast<std::size_t>(g.dim_v);
  const std::size_t k = static_cast<std::size_t>(g.dim_w);
  auto dst = out.coeffs();
  for_each_nonzero(in, t, [&](const BlockLayout& b, Coord c, Element coeff) {
    const auto* ob = ol.find(b.p - 1);
    if (ob == nullptr) return;
    dst[ob->offset + ob->index(c.vi / l, k + c.vi % l, c.wr)] = coeff;
  });
  return out;
}

Tensor append_v(const PrimeField& field, const Tensor& t, std::span<const Element> v) {
  const auto& g = t.grade();
  if (g.middle != Middle::none) throw ShapeError("append_v expects a V-space tensor");
  require_length(v, g.dim_v, "V vector");
  const Grade og{Middle::none, g.degree + 1, g.dim_v, g.dim_w};
  Tensor out(og);
  const Layout in(g);
  const Layout ol(og);
  const std::size_t l = static_cast<std::size_t>(g.dim_v);
  auto dst = out.coeffs();
  for_each_nonzero(in, t, [&](const BlockLayout& b, Coord c, Element coeff) {
    const auto* ob = ol.find(b.p + 1);
    if (ob == nullptr) return;
    for (std::size_t r = 0; r < l; ++r) {
      const std::size_t idx = ob->offset + ob->index(c.vi * l + r, 0, c.wr);
      dst[idx] = field.mul_add(dst[idx], coeff, v[r]);
    }
  });
  return out;
}

Tensor with_w_middle(const PrimeField& field, const Tensor& t, std::span<const Element> w) {
  const auto& g = t.grade();
  if (g.middle != Middle::none) throw ShapeError("with_w_middle expects a V-space tensor");
  require_length(w, g.dim_w, "W vector");
  const Grade og{Middle::W, g.degree, g.dim_v, g.dim_w};
  Tensor out(og);
  const Layout in(g);
  const Layout ol(og);
  auto dst = out.coeffs();
  for_each_nonzero(in, t, [&](const BlockLayout& b, Coord c, Element coeff) {
    const auto* ob = ol.find(b.p);
    for (std::size_t j = 0; j < w.size(); ++j) dst[ob->offset + ob->index(c.vi, j, c.wr)] = field.mul(coeff, w[j]);
  });
  return out;
}

Tensor wedge_right(const PrimeField& field, const Tensor& t, const Tensor& omega) {
  const auto& g = t.grade();
  const auto& og_w = omega.grade();
  if (og_w.middle != Middle::none || og_w.dim_w != g.dim_w) throw ShapeError("wedge_right expects omega in Lambda^rW");
  const int r = og_w.degree;
  const auto ocoeffs = omega.block(0);
  for (int p = 1; p <= r; ++p)
    if (!omega.block(p).empty() && std::ranges::any_of(omega.block(p), [](Element c) { return c != 0; }))
      throw ShapeError("wedge_right expects omega supported on Lambda^rW");
  const WedgeBasis owb(g.dim_w, r);

  const Grade og{g.middle, g.degree + r, g.dim_v, g.dim_w};
  Tensor out(og);
  const Layout in(g);
  const Layout ol(og);
  auto dst = out.coeffs();
  for_each_nonzero(in, t, [&](const BlockLayout& b, Coord c, Element coeff) {
    const auto* ob = ol.find(b.p);
    if (ob == nullptr) return;
    const std::uint32_t mask = b.wedges.mask(c.wr);
    for (std::size_t j = 0; j < ocoeffs.size(); ++j) {
      if (ocoeffs[j] == 0) continue;
      const std::uint32_t omask = owb.mask(j);
      if (mask & omask) continue;
      const std::size_t idx = ob->offset + ob->index(c.vi, c.m, ob->wedges.rank_of(mask | omask));
      const Element term = field.mul(field.mul(coeff, ocoeffs[j]), field.sign(merge_inversions(mask, omask)));
      dst[idx] = field.add(dst[idx], term);
    }
  });
  return out;
}

FieldMatrix exterior_power(const PrimeField& field, const FieldMatrix& m, int q) {
  if (m.rows() != m.cols()) throw ShapeError("exterior power of a non-square matrix");
  const int k = static_cast<int>(m.rows());
  const WedgeBasis wb(k, q);
  FieldMatrix out(wb.size(), wb.size());
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  auto members = [](std::uint32_t mask, std::vector<std::size_t>& dst) {
    dst.clear();
    for (; mask != 0; mask &= mask - 1) dst.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
  };
  for (std::size_t s = 0; s < wb.size(); ++s) {
    members(wb.mask(s), rows);
    const FieldMatrix sub_rows = m.select_rows(rows);
    for (std::size_t t = 0; t < wb.size(); ++t) {
      members(wb.mask(t), cols);
      out(s, t) = determinant(field, sub_rows.select_columns(cols));
    }
  }
  return out;
}

}  // namespace moulin
