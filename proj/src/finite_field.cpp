#include "moulin/finite_field.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace moulin {

bool is_prime(std::uint64_t value) noexcept {
  if (value < 2) return false;
  if (value < 4) return true;
  if (value % 2 == 0) return false;
  for (std::uint64_t f = 3; f * f <= value; f += 2)
    if (value % f == 0) return false;
  return true;
}

PrimeField::PrimeField(std::uint32_t modulus) : modulus_(modulus) {
  if (modulus >= (1u << 31)) throw ParameterError("field modulus must be below 2^31");
  if (!is_prime(modulus)) throw ParameterError("field modulus " + std::to_string(modulus) + " is not prime");
}

PrimeField PrimeField::at_least(std::uint32_t size) {
  std::uint32_t p = std::max<std::uint32_t>(size, 2);
  while (!is_prime(p)) ++p;
  return PrimeField(p);
}

Element PrimeField::pow(Element base, std::uint64_t exponent) const noexcept {
  Element result = 1 % modulus_;
  while (exponent > 0) {
    if (exponent & 1) result = mul(result, base);
    base = mul(base, base);
    exponent >>= 1;
  }
  return result;
}

Element PrimeField::inv(Element a) const {
  if (a % modulus_ == 0) throw NoSolutionError("zero has no inverse");
  return pow(a, modulus_ - 2);
}

FieldMatrix::FieldMatrix(std::size_t rows, std::size_t cols, std::vector<Element> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows * cols) throw ShapeError("matrix entry count does not match rows*cols");
}

FieldMatrix FieldMatrix::identity(std::size_t n) {
  FieldMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

std::vector<Element> FieldMatrix::column(std::size_t c) const {
  std::vector<Element> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

FieldMatrix FieldMatrix::transpose() const {
  FieldMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

FieldMatrix FieldMatrix::select_columns(std::span<const std::size_t> cols) const {
  FieldMatrix out(rows_, cols.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t j = 0; j < cols.size(); ++j) out(r, j) = (*this)(r, cols[j]);
  return out;
}

FieldMatrix FieldMatrix::select_rows(std::span<const std::size_t> rows) const {
  FieldMatrix out(rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i) std::ranges::copy(row(rows[i]), out.row(i).begin());
  return out;
}

FieldMatrix multiply(const PrimeField& field, const FieldMatrix& a, const FieldMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("matrix product shape mismatch");
  FieldMatrix out(a.rows(), b.cols());
  const std::uint64_t p = field.modulus();
  std::vector<std::uint64_t> acc(b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::ranges::fill(acc, 0);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const std::uint64_t x = a(r, i);
      if (x == 0) continue;
      auto brow = b.row(i);
      for (std::size_t c = 0; c < b.cols(); ++c) acc[c] = (acc[c] + x * brow[c]) % p;
    }
    for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) = static_cast<Element>(acc[c]);
  }
  return out;
}

std::vector<Element> multiply(const PrimeField& field, const FieldMatrix& a, std::span<const Element> x) {
  if (a.cols() != x.size()) throw ShapeError("matrix-vector shape mismatch");
  std::vector<Element> out(a.rows());
  const std::uint64_t p = field.modulus();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::uint64_t acc = 0;
    auto row = a.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) acc = (acc + std::uint64_t{row[c]} * x[c]) % p;
    out[r] = static_cast<Element>(acc);
  }
  return out;
}

EchelonForm reduced_row_echelon(const PrimeField& field, FieldMatrix m) {
  EchelonForm out;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  const std::uint64_t p = field.modulus();
  std::size_t lead = 0;
  std::vector<std::size_t> support;
  for (std::size_t c = 0; c < cols && lead < rows; ++c) {
    std::size_t pivot = lead;
    while (pivot < rows && m(pivot, c) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != lead) std::swap_ranges(m.row(pivot).begin(), m.row(pivot).end(), m.row(lead).begin());

    auto prow = m.row(lead);
    const Element scale = field.inv(prow[c]);
    support.clear();
    for (std::size_t j = c; j < cols; ++j) {
      if (prow[j] == 0) continue;
      prow[j] = field.mul(prow[j], scale);
      support.push_back(j);
    }
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == lead) continue;
      auto row = m.row(r);
      const Element factor = row[c];
      if (factor == 0) continue;
      const std::uint64_t negf = p - factor;
      for (std::size_t j : support) row[j] = static_cast<Element>((row[j] + negf * prow[j]) % p);
    }
    out.pivot_cols.push_back(c);
    ++lead;
  }
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const PrimeField& field, const FieldMatrix& m) {
  return reduced_row_echelon(field, m).pivot_cols.size();
}

NullSpace null_space(const PrimeField& field, const FieldMatrix& m) {
  const auto ech = reduced_row_echelon(field, m);
  const std::size_t cols = m.cols();
  std::vector<bool> is_pivot(cols, false);
  for (auto c : ech.pivot_cols) is_pivot[c] = true;
  NullSpace out;
  out.rank = ech.pivot_cols.size();
  for (std::size_t c = 0; c < cols; ++c)
    if (!is_pivot[c]) out.free_cols.push_back(c);

  out.basis = FieldMatrix(cols, out.free_cols.size());
  for (std::size_t j = 0; j < out.free_cols.size(); ++j) {
    const auto f = out.free_cols[j];
    out.basis(f, j) = 1;
    for (std::size_t i = 0; i < ech.pivot_cols.size(); ++i)
      out.basis(ech.pivot_cols[i], j) = field.neg(ech.reduced(i, f));
  }
  return out;
}

FieldMatrix null_space_basis(const PrimeField& field, const FieldMatrix& m) { return null_space(field, m).basis; }

std::vector<Element> solve(const PrimeField& field, const FieldMatrix& m, std::span<const Element> b) {
  if (b.size() != m.rows()) throw ShapeError("right-hand side length does not match row count");
  FieldMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::ranges::copy(m.row(r), aug.row(r).begin());
    aug(r, m.cols()) = b[r] % field.modulus();
  }
  const auto ech = reduced_row_echelon(field, std::move(aug));
  std::vector<Element> x(m.cols(), 0);
  for (std::size_t i = 0; i < ech.pivot_cols.size(); ++i) {
    const auto c = ech.pivot_cols[i];
    if (c == m.cols()) throw NoSolutionError("inconsistent linear system");
    x[c] = ech.reduced(i, m.cols());
  }
  return x;
}

FieldMatrix inverse(const PrimeField& field, const FieldMatrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw ShapeError("inverse of a non-square matrix");
  FieldMatrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    std::ranges::copy(m.row(r), aug.row(r).begin());
    aug(r, n + r) = 1;
  }
  const auto ech = reduced_row_echelon(field, std::move(aug));
  if (ech.pivot_cols.size() < n || ech.pivot_cols[n - 1] != n - 1) throw NoSolutionError("matrix is singular");
  FieldMatrix out(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out(r, c) = ech.reduced(r, n + c);
  return out;
}

Element determinant(const PrimeField& field, FieldMatrix m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw ShapeError("determinant of a non-square matrix");
  Element det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && m(pivot, c) == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != c) {
      std::swap_ranges(m.row(pivot).begin(), m.row(pivot).end(), m.row(c).begin());
      det = field.neg(det);
    }
    det = field.mul(det, m(c, c));
    const Element inv = field.inv(m(c, c));
    for (std::size_t r = c + 1; r < n; ++r) {
      const Element factor = field.mul(m(r, c), inv);
      if (factor == 0) continue;
      for (std::size_t j = c; j < n; ++j) m(r, j) = field.sub(m(r, j), field.mul(factor, m(c, j)));
    }
  }
  return det;
}

// ---------------------------------------------------------------------------

namespace {

void require_shape(std::size_t n, std::size_t k, std::size_t d) {
  if (k < 1 || d < k || n < d + 1)
    throw ParameterError("star configuration needs n-1 >= d >= k >= 1, got n=" + std::to_string(n) +
                         " k=" + std::to_string(k) + " d=" + std::to_string(d));
}

}  // namespace

StarConfig make_vandermonde_stars(std::size_t n, std::size_t k, std::size_t d, const PrimeField& field) {
  if (field.modulus() < n)
    throw FieldTooSmallError("GF(" + std::to_string(field.modulus()) + ") has fewer than n=" + std::to_string(n) +
                             " distinct star scalars");
  std::vector<Element> scalars(n);
  for (std::size_t h = 0; h < n; ++h) scalars[h] = static_cast<Element>(h);
  return make_vandermonde_stars(scalars, k, d, field);
}

StarConfig make_vandermonde_stars(std::span<const Element> scalars, std::size_t k, std::size_t d,
                                  const PrimeField& field) {
  const std::size_t n = scalars.size();
  require_shape(n, k, d);
  if (field.modulus() < n)
    throw FieldTooSmallError("GF(" + std::to_string(field.modulus()) + ") has fewer than n=" + std::to_string(n) +
                             " distinct star scalars");
  std::vector<Element> sorted(scalars.begin(), scalars.end());
  for (auto& a : sorted) {
    if (a >= field.modulus()) throw ParameterError("star scalar is not a reduced field element");
  }
  std::ranges::sort(sorted);
  if (std::ranges::adjacent_find(sorted) != sorted.end()) throw ParameterError("star scalars must be distinct");

  StarConfig cfg;
  cfg.n = n;
  cfg.k = k;
  cfg.d = d;
  cfg.star_scalars.assign(scalars.begin(), scalars.end());
  cfg.star_vectors.resize(n);
  for (std::size_t h = 0; h < n; ++h) {
    auto& u = cfg.star_vectors[h];
    u.resize(d);
    Element power = 1;
    for (std::size_t m = 0; m < d; ++m) {
      u[m] = power;
      power = field.mul(power, scalars[h]);
    }
  }
  return cfg;
}

StarConfig make_layered_stars(std::size_t k) {
  if (k < 1) throw ParameterError("layered stars need k >= 1");
  StarConfig cfg;
  cfg.n = k + 1;
  cfg.k = k;
  cfg.d = k;
  cfg.star_vectors.assign(k + 1, std::vector<Element>(k, 0));
  for (std::size_t h = 0; h < k; ++h) cfg.star_vectors[h][h] = 1;
  std::ranges::fill(cfg.star_vectors[k], 1);
  return cfg;
}

SpanReport check_sd_sk(const PrimeField& field, const StarConfig& cfg) {
  SpanReport report;
  auto full_rank = [&](std::span<const std::size_t> subset, std::size_t width) {
    FieldMatrix m(subset.size(), width);
    for (std::size_t i = 0; i < subset.size(); ++i)
      for (std::size_t c = 0; c < width; ++c) m(i, c) = cfg.star_vectors[subset[i]][c] % field.modulus();
    return rank(field, m) == width;
  };
  for_each_combination(cfg.n, cfg.d, [&](std::span<const std::size_t> subset) {
    if (full_rank(subset, cfg.d)) return true;
    report.sd_ok = false;
    if (!report.first_failing_subset) report.first_failing_subset.emplace(subset.begin(), subset.end());
    return false;
  });
  for_each_combination(cfg.n, cfg.k, [&](std::span<const std::size_t> subset) {
    if (full_rank(subset, cfg.k)) return true;
    report.sk_ok = false;
    if (!report.first_failing_subset) report.first_failing_subset.emplace(subset.begin(), subset.end());
    return false;
  });
  return report;
}

}  // namespace moulin
