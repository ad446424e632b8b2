#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "moulin/errors.hpp"

namespace moulin {

/// A field element, always reduced into [0, modulus).
using Element = std::uint32_t;

bool is_prime(std::uint64_t value) noexcept;

/// Arithmetic in GF(p) for a prime p < 2^31.
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t modulus);

  /// The smallest prime field with at least `size` elements.
  static PrimeField at_least(std::uint32_t size);

  std::uint32_t modulus() const noexcept { return modulus_; }

  Element reduce(std::int64_t value) const noexcept {
    const auto m = static_cast<std::int64_t>(modulus_);
    auto r = value % m;
    return static_cast<Element>(r < 0 ? r + m : r);
  }
  Element add(Element a, Element b) const noexcept {
    const std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<Element>(s >= modulus_ ? s - modulus_ : s);
  }
  Element sub(Element a, Element b) const noexcept {
    return a >= b ? a - b : static_cast<Element>(std::uint64_t{a} + modulus_ - b);
  }
  Element neg(Element a) const noexcept { return a == 0 ? 0 : modulus_ - a; }
  Element mul(Element a, Element b) const noexcept {
    return static_cast<Element>((std::uint64_t{a} * b) % modulus_);
  }
  /// a + b*c
  Element mul_add(Element a, Element b, Element c) const noexcept {
    return static_cast<Element>((std::uint64_t{a} + std::uint64_t{b} * c) % modulus_);
  }
  Element pow(Element base, std::uint64_t exponent) const noexcept;
  /// Throws NoSolutionError on zero.
  Element inv(Element a) const;
  Element div(Element a, Element b) const { return mul(a, inv(b)); }
  /// (-1)^exponent
  Element sign(long exponent) const noexcept { return (exponent % 2 == 0) ? 1 : modulus_ - 1; }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint32_t modulus_;
};

/// Dense row-major matrix of field elements.
class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols, 0) {}
  FieldMatrix(std::size_t rows, std::size_t cols, std::vector<Element> entries);

  static FieldMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Element& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  Element operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<Element> row(std::size_t r) { return {entries_.data() + r * cols_, cols_}; }
  std::span<const Element> row(std::size_t r) const { return {entries_.data() + r * cols_, cols_}; }
  std::vector<Element> column(std::size_t c) const;

  const std::vector<Element>& entries() const noexcept { return entries_; }

  FieldMatrix transpose() const;
  /// Keep only the listed columns, in the given order.
  FieldMatrix select_columns(std::span<const std::size_t> cols) const;
  FieldMatrix select_rows(std::span<const std::size_t> rows) const;

  friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Element> entries_;
};

FieldMatrix multiply(const PrimeField& field, const FieldMatrix& a, const FieldMatrix& b);
std::vector<Element> multiply(const PrimeField& field, const FieldMatrix& a, std::span<const Element> x);

struct EchelonForm {
  FieldMatrix reduced;
  std::vector<std::size_t> pivot_cols;
};

/// Gauss-Jordan elimination with the first nonzero entry of each column as
/// pivot. Deterministic for a given input.
EchelonForm reduced_row_echelon(const PrimeField& field, FieldMatrix m);

std::size_t rank(const PrimeField& field, const FieldMatrix& m);

/// Columns form a basis of {x : m x = 0}. One column per free variable, free
/// columns in ascending order, that free variable set to 1 and the others to 0.
FieldMatrix null_space_basis(const PrimeField& field, const FieldMatrix& m);

struct NullSpace {
  FieldMatrix basis;
  std::vector<std::size_t> free_cols;
  std::size_t rank = 0;
};

/// null_space_basis together with the free columns and the rank.
NullSpace null_space(const PrimeField& field, const FieldMatrix& m);

/// Some x with m x = b (free variables set to 0). Throws NoSolutionError if
/// the system is inconsistent.
std::vector<Element> solve(const PrimeField& field, const FieldMatrix& m, std::span<const Element> b);

/// Throws NoSolutionError if m is singular, ShapeError if not square.
FieldMatrix inverse(const PrimeField& field, const FieldMatrix& m);

Element determinant(const PrimeField& field, FieldMatrix m);

/// Calls fn(indices) for every r-subset of {0..n-1}, lexicographic order.
/// Stops early when fn returns false.
template <typename Fn>
void for_each_combination(std::size_t n, std::size_t r, Fn&& fn) {
  if (r > n) return;
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    if (!fn(std::span<const std::size_t>(idx))) return;
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// ---------------------------------------------------------------------------
// Star vectors

/// The n node directions u_h in U = F^d. Coordinates 0..k-1 span W and
/// coordinates k..d-1 span V.
struct StarConfig {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t d = 0;
  /// a_h for the Vandermonde family; empty for the layered family.
  std::vector<Element> star_scalars;
  std::vector<std::vector<Element>> star_vectors;

  std::span<const Element> star(std::size_t h) const { return star_vectors.at(h); }
  std::span<const Element> w_part(std::size_t h) const { return star(h).first(k); }
  std::span<const Element> v_part(std::size_t h) const { return star(h).subspan(k); }
};

/// u_h = (1, a_h, a_h^2, ..., a_h^{d-1}) with a_h = h.
StarConfig make_vandermonde_stars(std::size_t n, std::size_t k, std::size_t d, const PrimeField& field);
/// Same with caller-chosen distinct scalars.
StarConfig make_vandermonde_stars(std::span<const Element> scalars, std::size_t k, std::size_t d,
                                  const PrimeField& field);
/// n = k+1, d = k: the k unit vectors followed by the all-one vector.
StarConfig make_layered_stars(std::size_t k);

struct SpanReport {
  bool sd_ok = true;
  bool sk_ok = true;
  /// Star indices of the first subset that failed, (Sd) checked first.
  std::optional<std::vector<std::size_t>> first_failing_subset;
};

/// Exhaustive test: every d stars span F^d and every k w-parts span F^k.
SpanReport check_sd_sk(const PrimeField& field, const StarConfig& cfg);

}  // namespace moulin
