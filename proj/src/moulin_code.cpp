#include "moulin/moulin_code.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <optional>
#include <set>
#include <string>

#include "moulin/errors.hpp"

namespace moulin {

namespace {

/// Position bookkeeping for one block of a star or U-middle grade.
struct BlockDims {
  std::size_t offset = 0;
  std::size_t vcount = 0;
  std::size_t wcount = 0;
};

std::vector<BlockDims> block_dims(const Grade& g) {
  std::vector<BlockDims> out;
  if (g.degree < 0) return out;
  std::size_t off = 0;
  for (int p = 0; p <= g.degree; ++p) {
    const auto sig = g.block(p);
    BlockDims b;
    b.offset = off;
    b.vcount = int_power(static_cast<std::size_t>(g.dim_v), p);
    b.wcount = sig.q <= g.dim_w ? static_cast<std::size_t>(binomial(g.dim_w, sig.q)) : 0;
    off += sig.dimension();
    out.push_back(b);
  }
  return out;
}

SparseRow to_sparse(const Tensor& t) {
  SparseRow out;
  const auto c = t.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) out.emplace_back(i, c[i]);
  return out;
}

void require_node(const CodeInstance& inst, std::size_t h) {
  if (h >= static_cast<std::size_t>(inst.n()))
    throw CodingError("node index " + std::to_string(h) + " out of range");
}

FieldMatrix rows_of(const StarConfig& stars, std::span<const std::size_t> nodes, bool w_only) {
  const std::size_t width = w_only ? stars.k : stars.d;
  FieldMatrix m(nodes.size(), width);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto v = w_only ? stars.w_part(nodes[i]) : stars.star(nodes[i]);
    std::copy(v.begin(), v.end(), m.row(i).begin());
  }
  return m;
}

int popcount(std::uint32_t m) { return std::popcount(m); }

}  // namespace

// ---------------------------------------------------------------------------
// Instance

CodeInstance build_instance(int n, int k, int d, int s, const PrimeField& field, const StarConfig& stars) {
  CodeInstance inst;
  inst.params = closed_form_params(n, k, d, s);
  inst.field = field;
  if (stars.n != static_cast<std::size_t>(n) || stars.k != static_cast<std::size_t>(k) ||
      stars.d != static_cast<std::size_t>(d) || stars.star_vectors.size() != stars.n)
    throw ParameterError("star configuration does not match (n, k, d)");
  for (const auto& u : stars.star_vectors) {
    if (u.size() != stars.d) throw ParameterError("star vector of wrong length");
    for (Element x : u)
      if (x >= field.modulus()) throw ParameterError("star vector entry outside the field");
  }
  if (!stars.star_scalars.empty() && field.modulus() < static_cast<std::uint32_t>(n))
    throw FieldTooSmallError("field has fewer than n elements");
  const auto report = check_sd_sk(field, stars);
  if (!report.sd_ok || !report.sk_ok) throw ParameterError("star vectors violate (Sd) or (Sk)");
  inst.stars = stars;

  const Grade checks = inst.check_grade();
  const Grade stored = inst.stored_grade();
  const std::size_t cols = stored.dimension();
  const std::size_t rows = checks.dimension();
  inst.check_matrix = FieldMatrix(rows, cols);
  std::size_t r = 0;
  for (int p = 0; p <= s; ++p) {
    const std::size_t block = checks.block(p).dimension();
    for (std::size_t i = 0; i < block; ++i, ++r) {
      const Tensor x = Tensor::unit(checks, p, i);
      const Tensor via_v = include_v_space(x);
      const Tensor via_w = include(cowedge(field, x), Middle::U);
      const Tensor row = sub(field, via_v, via_w);
      std::copy(row.coeffs().begin(), row.coeffs().end(), inst.check_matrix.row(r).begin());
      if (p >= 1) {
        const auto pivot = to_sparse(via_v);
        inst.v_coordinate_rules.emplace_back(pivot.front().first, to_sparse(via_w));
      }
    }
  }

  auto ns = null_space(field, inst.check_matrix);
  if (ns.free_cols.size() != inst.params.file_size)
    throw CodingError("null space dimension " + std::to_string(ns.free_cols.size()) + " differs from M");
  inst.encoder_basis = std::move(ns.basis);
  inst.message_columns = std::move(ns.free_cols);

  const Grade shares{Middle::none, s - 1, inst.l(), k};
  const Grade lifted = inst.lifted_help_grade();
  inst.assign_matrix = FieldMatrix(shares.dimension(), lifted.dimension());
  r = 0;
  for (int p = 0; p <= s - 1; ++p) {
    const std::size_t block = shares.block(p).dimension();
    for (std::size_t i = 0; i < block; ++i, ++r) {
      const Tensor x = Tensor::unit(shares, p, i);
      const Tensor row = scale(field, field.sign(p),
                               sub(field, include(cowedge(field, x), Middle::U), include_v_space(x)));
      std::copy(row.coeffs().begin(), row.coeffs().end(), inst.assign_matrix.row(r).begin());
    }
  }
  return inst;
}

CodeInstance build_vandermonde_instance(int n, int k, int d, int s, std::uint32_t modulus) {
  require_admissible(n, k, d, s);
  const PrimeField field = modulus == 0 ? PrimeField::at_least(static_cast<std::uint32_t>(n)) : PrimeField(modulus);
  const auto stars = make_vandermonde_stars(static_cast<std::size_t>(n), static_cast<std::size_t>(k),
                                            static_cast<std::size_t>(d), field);
  return build_instance(n, k, d, s, field, stars);
}

CodeInstance build_layered_instance(int k, int s, std::uint32_t modulus) {
  require_admissible(k + 1, k, k, s);
  auto inst = build_instance(k + 1, k, k, s, PrimeField(modulus), make_layered_stars(static_cast<std::size_t>(k)));
  return inst;
}

// ---------------------------------------------------------------------------
// Encoding

FileFunctional encode(const CodeInstance& inst, std::span<const Element> message) {
  if (message.size() != inst.params.file_size)
    throw ShapeError("message must have exactly M = " + std::to_string(inst.params.file_size) + " symbols");
  for (Element x : message)
    if (x >= inst.field.modulus()) throw ShapeError("message symbol outside the field");
  return {multiply(inst.field, inst.encoder_basis, message)};
}

std::vector<Element> decode_message(const CodeInstance& inst, const FileFunctional& phi) {
  if (phi.evaluations.size() != inst.encoder_basis.rows()) throw ShapeError("file functional of wrong length");
  std::vector<Element> out;
  out.reserve(inst.message_columns.size());
  for (auto c : inst.message_columns) out.push_back(phi.evaluations[c]);
  return out;
}

bool satisfies_checks(const CodeInstance& inst, const FileFunctional& phi) {
  if (phi.evaluations.size() != inst.check_matrix.cols()) return false;
  const auto syndrome = multiply(inst.field, inst.check_matrix, phi.evaluations);
  return std::ranges::all_of(syndrome, [](Element e) { return e == 0; });
}

NodeContent extract_node(const CodeInstance& inst, const FileFunctional& phi, std::size_t h) {
  require_node(inst, h);
  if (phi.evaluations.size() != inst.stored_grade().dimension()) throw ShapeError("file functional of wrong length");
  const auto& f = inst.field;
  const auto u = inst.stars.star(h);
  const auto sd = block_dims(inst.share_grade());
  const auto ud = block_dims(inst.stored_grade());
  const std::size_t dd = static_cast<std::size_t>(inst.d());
  NodeContent out{h, std::vector<Element>(inst.params.alpha, 0)};
  for (std::size_t p = 0; p < sd.size(); ++p) {
    for (std::size_t vi = 0; vi < sd[p].vcount; ++vi)
      for (std::size_t wr = 0; wr < sd[p].wcount; ++wr) {
        std::uint64_t acc = 0;
        for (std::size_t m = 0; m < dd; ++m)
          acc += std::uint64_t{u[m]} * phi.evaluations[ud[p].offset + (vi * dd + m) * ud[p].wcount + wr] % f.modulus();
        out.symbols[sd[p].offset + vi * sd[p].wcount + wr] = static_cast<Element>(acc % f.modulus());
      }
  }
  return out;
}

FileFunctional download(const CodeInstance& inst, std::span<const NodeContent> shares) {
  const auto& f = inst.field;
  const std::size_t k = static_cast<std::size_t>(inst.k());
  if (shares.size() != k) throw CodingError("download needs exactly k shares");
  std::vector<std::size_t> nodes;
  for (const auto& sh : shares) {
    require_node(inst, sh.node);
    if (sh.symbols.size() != inst.params.alpha) throw CodingError("share of wrong length");
    nodes.push_back(sh.node);
  }
  if (std::set<std::size_t>(nodes.begin(), nodes.end()).size() != nodes.size())
    throw CodingError("download shares must come from distinct nodes");

  FieldMatrix w_inv;
  try {
    w_inv = inverse(f, rows_of(inst.stars, nodes, true));
  } catch (const NoSolutionError&) {
    throw CodingError("w-parts of the downloaded stars are dependent (violates (Sk))");
  }

  const auto sd = block_dims(inst.share_grade());
  const auto ud = block_dims(inst.stored_grade());
  const std::size_t dd = static_cast<std::size_t>(inst.d());
  const std::size_t l = static_cast<std::size_t>(inst.l());
  FileFunctional phi{std::vector<Element>(inst.stored_grade().dimension(), 0)};
  auto& ev = phi.evaluations;

  // V-middle coordinates grouped by block.
  std::vector<std::vector<const std::pair<std::size_t, SparseRow>*>> rules(ud.size());
  for (const auto& rule : inst.v_coordinate_rules) {
    std::size_t p = ud.size() - 1;
    while (ud[p].offset > rule.first) --p;
    rules[p].push_back(&rule);
  }

  std::vector<Element> rhs(k);
  for (std::size_t p = ud.size(); p-- > 0;) {
    for (const auto* rule : rules[p]) {
      std::uint64_t acc = 0;
      for (const auto& [col, c] : rule->second) acc += std::uint64_t{c} * ev[col] % f.modulus();
      ev[rule->first] = static_cast<Element>(acc % f.modulus());
    }
    for (std::size_t vi = 0; vi < sd[p].vcount; ++vi)
      for (std::size_t wr = 0; wr < sd[p].wcount; ++wr) {
        const std::size_t base = ud[p].offset + vi * dd * ud[p].wcount + wr;
        for (std::size_t i = 0; i < k; ++i) {
          const auto vpart = inst.stars.v_part(nodes[i]);
          Element acc = shares[i].symbols[sd[p].offset + vi * sd[p].wcount + wr];
          for (std::size_t r = 0; r < l; ++r)
            acc = f.sub(acc, f.mul(vpart[r], ev[base + (k + r) * ud[p].wcount]));
          rhs[i] = acc;
        }
        const auto z = multiply(f, w_inv, rhs);
        for (std::size_t m = 0; m < k; ++m) ev[base + m * ud[p].wcount] = z[m];
      }
  }
  return phi;
}

// ---------------------------------------------------------------------------
// Repair

FieldMatrix ComplementChain::complement(std::size_t j) const {
  std::vector<std::size_t> cols;
  for (std::size_t i = j + 1; i < basis.cols(); ++i) cols.push_back(i);
  return basis.select_columns(cols);
}

ComplementChain complement_chain(const CodeInstance& inst, std::vector<std::size_t> failing) {
  std::ranges::sort(failing);
  if (std::ranges::adjacent_find(failing) != failing.end()) throw CodingError("failing set has duplicates");
  for (auto f : failing) require_node(inst, f);
  const std::size_t k = static_cast<std::size_t>(inst.k());
  if (failing.empty()) throw CodingError("failing set is empty");
  if (failing.size() >= k) throw CodingError("c >= k: repair needs the whole-share fallback");

  const auto& f = inst.field;
  std::vector<std::vector<Element>> cols;
  for (auto node : failing) cols.emplace_back(inst.stars.w_part(node).begin(), inst.stars.w_part(node).end());
  auto as_matrix = [&] {
    FieldMatrix m(k, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (std::size_t r = 0; r < k; ++r) m(r, c) = cols[c][r];
    return m;
  };
  if (rank(f, as_matrix()) != cols.size()) throw CodingError("failing w-parts are dependent");
  for (std::size_t e = 0; e < k && cols.size() < k; ++e) {
    cols.emplace_back(k, 0);
    cols.back()[e] = 1;
    if (rank(f, as_matrix()) != cols.size()) cols.pop_back();
  }
  ComplementChain chain;
  chain.failing = std::move(failing);
  chain.basis = as_matrix();
  chain.basis_inverse = inverse(f, chain.basis);
  return chain;
}

namespace {

/// Recursive rewriting of phi o d_{f_j} on chain-basis tensors into transmitted symbols.
class Decompressor {
 public:
  Decompressor(const CodeInstance& inst, const ComplementChain& chain, const Grade& help,
               const std::vector<std::vector<std::int64_t>>& transmitted, std::size_t width)
      : inst_(inst), chain_(chain), help_(help), transmitted_(transmitted), width_(width),
        dims_(block_dims(help)), memo_(chain.size(), std::vector<std::optional<std::vector<Element>>>(help.dimension())) {}

  /// Coefficients over the transmitted symbols of phi(d_{f_j}(unit idx)).
  const std::vector<Element>& resolve(std::size_t j, std::size_t idx) {
    auto& slot = memo_[j][idx];
    if (slot) return *slot;
    slot = compute(j, idx);
    return *slot;
  }

 private:
  std::vector<Element> combine(std::size_t j, const Tensor& t) {
    std::vector<Element> out(width_, 0);
    const auto c = t.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0) continue;
      const auto& part = resolve(j, i);
      for (std::size_t x = 0; x < width_; ++x) out[x] = inst_.field.mul_add(out[x], c[i], part[x]);
    }
    return out;
  }

  std::vector<Element> compute(std::size_t j, std::size_t idx) {
    const auto& f = inst_.field;
    if (transmitted_[j][idx] >= 0) {
      std::vector<Element> out(width_, 0);
      out[static_cast<std::size_t>(transmitted_[j][idx])] = 1;
      return out;
    }
    int p = 0;
    while (p + 1 < static_cast<int>(dims_.size()) && dims_[static_cast<std::size_t>(p) + 1].offset <= idx) ++p;
    const auto& b = dims_[static_cast<std::size_t>(p)];
    const std::size_t local = idx - b.offset;
    const std::size_t vi = local / b.wcount;
    const int q = help_.degree - p;
    const WedgeBasis wb(help_.dim_w, q);
    const std::uint32_t mask = wb.mask(local % b.wcount);

    const std::uint32_t low = (2u << j) - 1;  // chain positions 0..j
    const bool has_own = (mask >> j) & 1u;
    const int x = has_own ? static_cast<int>(j) : std::countr_zero(mask & low);
    const long move = popcount(mask >> (x + 1));
    const Element sgn = f.mul(f.sign(move), f.sign(p + q));

    const Grade lower{Middle::star, help_.degree - 1, help_.dim_v, help_.dim_w};
    const WedgeBasis wl(help_.dim_w, q - 1);
    const std::size_t lower_pos = vi * wl.size() + wl.rank_of(mask & ~(1u << x));
    const Tensor y = Tensor::unit(lower, p, lower_pos);

    if (has_own) return scaled(sgn, combine(j, cobound_v(f, inst_.stars.v_part(chain_.failing[j]), y)));

    const auto i = static_cast<std::size_t>(x);
    std::vector<Element> e_j(static_cast<std::size_t>(help_.dim_w), 0);
    e_j[j] = 1;
    const Tensor du = add(f, cobound_v(f, inst_.stars.v_part(chain_.failing[j]), y), cobound_w(f, e_j, y));
    auto out = combine(i, du);
    const auto rest = combine(j, cobound_v(f, inst_.stars.v_part(chain_.failing[i]), y));
    for (std::size_t t = 0; t < width_; ++t) out[t] = f.add(out[t], rest[t]);
    return scaled(sgn, std::move(out));
  }

  std::vector<Element> scaled(Element c, std::vector<Element> v) const {
    for (auto& e : v) e = inst_.field.mul(e, c);
    return v;
  }

  const CodeInstance& inst_;
  const ComplementChain& chain_;
  Grade help_;
  const std::vector<std::vector<std::int64_t>>& transmitted_;
  std::size_t width_;
  std::vector<BlockDims> dims_;
  std::vector<std::vector<std::optional<std::vector<Element>>>> memo_;
};

}  // namespace

RepairPlan plan_repair(const CodeInstance& inst, const ComplementChain& chain) {
  const auto& f = inst.field;
  const Grade help = inst.help_grade();
  const auto dims = block_dims(help);
  const int k = inst.k();
  const std::size_t c = chain.size();
  if (c == 0 || c >= static_cast<std::size_t>(k)) throw CodingError("chain must hold 1 <= c < k failing nodes");

  RepairPlan plan;
  plan.chain = chain;

  // Transmitted symbols: chain position, then p, then v-tuple, then wedge.
  std::vector<std::vector<std::int64_t>> transmitted(c, std::vector<std::int64_t>(help.dimension(), -1));
  for (std::size_t j = 0; j < c; ++j)
    for (int p = 0; p <= help.degree; ++p) {
      const int q = help.degree - p;
      const auto& b = dims[static_cast<std::size_t>(p)];
      if (b.wcount == 0) continue;
      const WedgeBasis full(k, q);
      const int avail = k - 1 - static_cast<int>(j);
      if (q > avail) continue;
      const WedgeBasis sub(avail, q);
      for (std::size_t vi = 0; vi < b.vcount; ++vi)
        for (std::size_t r = 0; r < sub.size(); ++r) {
          const std::uint32_t mask = sub.mask(r) << (j + 1);
          HelpSymbol sym{j, p, vi, {}};
          for (std::uint32_t m = mask; m != 0; m &= m - 1) sym.wedge.push_back(std::countr_zero(m));
          transmitted[j][b.offset + vi * b.wcount + full.rank_of(mask)] = static_cast<std::int64_t>(plan.symbols.size());
          plan.symbols.push_back(std::move(sym));
        }
    }
  if (plan.symbols.size() != inst.params.beta_for(static_cast<int>(c)))
    throw CodingError("compressed symbol count differs from beta_c");

  // Compression rows in standard coordinates.
  std::vector<FieldMatrix> wedge_of_basis;      // Lambda^q(B)
  std::vector<FieldMatrix> wedge_of_inverse;    // Lambda^q(B^-1)
  for (int q = 0; q <= help.degree; ++q) {
    wedge_of_basis.push_back(exterior_power(f, chain.basis, q));
    wedge_of_inverse.push_back(exterior_power(f, chain.basis_inverse, q));
  }
  const Grade shares = inst.share_grade();
  plan.compression = FieldMatrix(plan.symbols.size(), shares.dimension());
  for (std::size_t t = 0; t < plan.symbols.size(); ++t) {
    const auto& sym = plan.symbols[t];
    const int q = help.degree - sym.p;
    const auto& b = dims[static_cast<std::size_t>(sym.p)];
    const WedgeBasis wb(k, q);
    std::uint32_t mask = 0;
    for (int w : sym.wedge) mask |= 1u << w;
    const std::size_t s_rank = wb.rank_of(mask);
    Tensor y(help);
    auto blk = y.block(sym.p);
    for (std::size_t tr = 0; tr < wb.size(); ++tr) blk[sym.v_index * b.wcount + tr] = wedge_of_basis[static_cast<std::size_t>(q)](tr, s_rank);
    const Tensor row = cobound_u(f, inst.stars.star(chain.failing[sym.chain_pos]), y);
    std::copy(row.coeffs().begin(), row.coeffs().end(), plan.compression.row(t).begin());
  }

  // Decompression: rewrite in chain coordinates, then change back to standard wedges.
  Decompressor dec(inst, plan.chain, help, transmitted, plan.symbols.size());
  for (std::size_t j = 0; j < c; ++j) {
    FieldMatrix e(help.dimension(), plan.symbols.size());
    for (int p = 0; p <= help.degree; ++p) {
      const int q = help.degree - p;
      const auto& b = dims[static_cast<std::size_t>(p)];
      const auto& lam = wedge_of_inverse[static_cast<std::size_t>(q)];
      for (std::size_t vi = 0; vi < b.vcount; ++vi)
        for (std::size_t sr = 0; sr < b.wcount; ++sr) {
          const auto& coeffs = dec.resolve(j, b.offset + vi * b.wcount + sr);
          for (std::size_t tr = 0; tr < b.wcount; ++tr) {
            const Element lt = lam(sr, tr);
            if (lt == 0) continue;
            auto row = e.row(b.offset + vi * b.wcount + tr);
            for (std::size_t x = 0; x < coeffs.size(); ++x) row[x] = f.mul_add(row[x], lt, coeffs[x]);
          }
        }
    }
    plan.decompression.push_back(std::move(e));
  }
  return plan;
}

HelpMessage help_message(const CodeInstance& inst, const RepairPlan& plan, const NodeContent& content) {
  require_node(inst, content.node);
  if (std::ranges::find(plan.chain.failing, content.node) != plan.chain.failing.end())
    throw CodingError("a failing node cannot help");
  if (content.symbols.size() != inst.params.alpha) throw CodingError("share of wrong length");
  return {content.node, plan.chain.failing, multiply(inst.field, plan.compression, content.symbols)};
}

std::vector<Element> decompress(const CodeInstance& inst, const RepairPlan& plan, const HelpMessage& msg,
                                std::size_t chain_pos) {
  if (chain_pos >= plan.decompression.size()) throw CodingError("chain position out of range");
  if (msg.symbols.size() != plan.symbols.size()) throw CodingError("help message of wrong length");
  return multiply(inst.field, plan.decompression[chain_pos], msg.symbols);
}

std::vector<NodeContent> repair(const CodeInstance& inst, const RepairPlan& plan, std::span<const HelpMessage> messages) {
  const auto& f = inst.field;
  const std::size_t dd = static_cast<std::size_t>(inst.d());
  if (messages.size() != dd) throw CodingError("repair needs exactly d help messages");
  std::vector<std::size_t> helpers;
  for (const auto& m : messages) {
    require_node(inst, m.helper);
    if (m.failing != plan.chain.failing) throw CodingError("help message was computed for another failing set");
    if (std::ranges::find(plan.chain.failing, m.helper) != plan.chain.failing.end())
      throw CodingError("a failing node cannot help");
    helpers.push_back(m.helper);
  }
  if (std::set<std::size_t>(helpers.begin(), helpers.end()).size() != helpers.size())
    throw CodingError("helpers must be distinct");
  FieldMatrix u_inv;
  try {
    u_inv = inverse(f, rows_of(inst.stars, helpers, false));
  } catch (const NoSolutionError&) {
    throw CodingError("helper stars do not span U (violates (Sd))");
  }

  const auto hd = block_dims(inst.help_grade());
  const auto ld = block_dims(inst.lifted_help_grade());
  std::vector<NodeContent> out;
  std::vector<Element> vals(dd);
  for (std::size_t j = 0; j < plan.chain.size(); ++j) {
    std::vector<std::vector<Element>> psi;
    for (const auto& m : messages) psi.push_back(decompress(inst, plan, m, j));
    std::vector<Element> lifted(inst.lifted_help_grade().dimension(), 0);
    for (std::size_t p = 0; p < hd.size(); ++p)
      for (std::size_t vi = 0; vi < hd[p].vcount; ++vi)
        for (std::size_t wr = 0; wr < hd[p].wcount; ++wr) {
          const std::size_t x = hd[p].offset + vi * hd[p].wcount + wr;
          for (std::size_t h = 0; h < dd; ++h) vals[h] = psi[h][x];
          const auto z = multiply(f, u_inv, vals);
          for (std::size_t m = 0; m < dd; ++m) lifted[ld[p].offset + (vi * dd + m) * ld[p].wcount + wr] = z[m];
        }
    out.push_back({plan.chain.failing[j], multiply(f, inst.assign_matrix, lifted)});
  }
  return out;
}

std::size_t help_space_rank(const CodeInstance& inst, const std::vector<std::size_t>& failing) {
  const Grade help = inst.help_grade();
  const std::size_t dim = help.dimension();
  FieldMatrix rows(failing.size() * dim, inst.share_grade().dimension());
  std::size_t r = 0;
  for (auto node : failing) {
    require_node(inst, node);
    for (int p = 0; p <= help.degree; ++p)
      for (std::size_t i = 0; i < help.block(p).dimension(); ++i, ++r) {
        const Tensor t = cobound_u(inst.field, inst.stars.star(node), Tensor::unit(help, p, i));
        std::copy(t.coeffs().begin(), t.coeffs().end(), rows.row(r).begin());
      }
  }
  return rank(inst.field, rows);
}

std::vector<NodeContent> repair_by_download(const CodeInstance& inst, const std::vector<std::size_t>& failing,
                                            std::span<const NodeContent> helper_shares) {
  const std::size_t k = static_cast<std::size_t>(inst.k());
  if (helper_shares.size() < k) throw CodingError("whole-share repair needs at least k helpers");
  for (const auto& sh : helper_shares)
    if (std::ranges::find(failing, sh.node) != failing.end()) throw CodingError("a failing node cannot help");
  const auto phi = download(inst, helper_shares.first(k));
  std::vector<NodeContent> out;
  for (auto node : failing) out.push_back(extract_node(inst, phi, node));
  return out;
}

}  // namespace moulin
