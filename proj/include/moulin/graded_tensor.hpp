#pragma once

// Coefficient-vector tensors over T^pV (x) {U|V|W|*} (x) Lambda^qW.
//
// U = F^d splits as W (coordinates 0..k-1) plus V (coordinates k..d-1), so
// dim V = d-k. Basis tensors are v_{i1}(x)...(x)v_{ip} (x) e_m (x) w_S with S a
// strictly increasing index set; they are enumerated with the V-tuple slowest
// (lexicographic), then the middle coordinate, then S (lexicographic among
// subsets of equal size).
//
// A Tensor lives in a homogeneous grade: a fixed middle factor and a fixed
// total degree t = p+q, stored as the direct sum of its blocks p = 0..t. The
// coboundary d_u = d_v + d_w raises p or q by one, so it maps one grade to the
// next grade rather than one (p,q) block to another.
//
// Middle::none is the V-space T^pV (x) Lambda^qW; its last V factor plays the
// role of the middle, so it behaves like T^{p-1}V (x) V (x) Lambda^qW.
// Middle::star is a one-dimensional middle: a node's own direction u_h held
// symbolically, giving T^pV (x) u_h (x) Lambda^qW.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "moulin/finite_field.hpp"

namespace moulin {

enum class Middle : std::uint8_t { none, U, V, W, star };

std::string to_string(Middle m);

/// One (p, middle, q) block.
struct SpaceSig {
  int p = 0;
  Middle middle = Middle::none;
  int q = 0;
  int dim_v = 0;  // d-k
  int dim_w = 0;  // k

  std::size_t middle_dim() const noexcept;
  /// (d-k)^p * middle_dim * C(k,q), zero when q > k or either degree is negative.
  std::size_t dimension() const noexcept;

  friend bool operator==(const SpaceSig&, const SpaceSig&) = default;
};

/// Direct sum of the blocks p = 0..degree with q = degree - p.
struct Grade {
  Middle middle = Middle::none;
  int degree = 0;
  int dim_v = 0;
  int dim_w = 0;

  SpaceSig block(int p) const noexcept { return {p, middle, degree - p, dim_v, dim_w}; }
  std::size_t block_offset(int p) const noexcept;
  std::size_t dimension() const noexcept;

  friend bool operator==(const Grade&, const Grade&) = default;
};

struct BasisIndex {
  std::vector<int> v_tuple;
  int middle_idx = -1;  // -1 for Middle::none
  std::vector<int> w_subset;

  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

std::vector<BasisIndex> enumerate_basis(const SpaceSig& sig);
std::size_t basis_position(const SpaceSig& sig, const BasisIndex& index);

std::int64_t binomial(std::int64_t n, std::int64_t r) noexcept;
std::size_t int_power(std::size_t base, int exponent) noexcept;

/// The C(k,q) strictly increasing q-subsets of {0..k-1} as bitmasks, in
/// lexicographic order, with the inverse lookup.
class WedgeBasis {
 public:
  WedgeBasis(int k, int q);

  std::size_t size() const noexcept { return masks_.size(); }
  std::uint32_t mask(std::size_t rank) const { return masks_[rank]; }
  /// Rank of a q-subset mask; the mask must have exactly q bits below k.
  std::size_t rank_of(std::uint32_t mask) const { return static_cast<std::size_t>(rank_[mask]); }

 private:
  std::vector<std::uint32_t> masks_;
  std::vector<std::int32_t> rank_;
};

class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Grade grade);
  Tensor(Grade grade, std::vector<Element> coeffs);

  /// A tensor supported on the single block `sig`.
  static Tensor in_block(const SpaceSig& sig, std::span<const Element> block_coeffs);
  /// The basis tensor at `position` of block p.
  static Tensor unit(const Grade& grade, int p, std::size_t position);

  const Grade& grade() const noexcept { return grade_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  std::span<const Element> coeffs() const noexcept { return coeffs_; }
  std::span<Element> coeffs() noexcept { return coeffs_; }
  std::span<const Element> block(int p) const;
  std::span<Element> block(int p);
  bool is_zero() const noexcept;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Grade grade_;
  std::vector<Element> coeffs_;
};

Tensor add(const PrimeField& field, const Tensor& a, const Tensor& b);
Tensor sub(const PrimeField& field, const Tensor& a, const Tensor& b);
Tensor scale(const PrimeField& field, Element c, const Tensor& t);
/// a + c*b
Tensor axpy(const PrimeField& field, const Tensor& a, Element c, const Tensor& b);

/// Simple tensor given by factor vectors.
struct Rank1 {
  std::vector<std::vector<Element>> v_factors;  // each in F^{d-k}
  std::optional<std::vector<Element>> middle;   // in F^{middle_dim}
  std::vector<std::vector<Element>> w_factors;  // each in F^k
  Element scalar = 1;
};

/// Multilinear expansion onto the canonical basis of `sig`; the W factors are
/// multiplied through the wedge product.
Tensor expand_rank1(const PrimeField& field, const Rank1& r, const SpaceSig& sig);

/// An element of T^qW (no antisymmetry), indexed by q-tuples over {0..k-1}
/// with the first index most significant.
struct TensorPower {
  int dim_w = 0;
  int degree = 0;
  std::vector<Element> coeffs;
};

/// The wedge multiplication T^qW -> Lambda^qW: a basis tuple with a repeated
/// index maps to zero, otherwise to (-1)^inversions times its sorted wedge.
Tensor wedge_multiply(const PrimeField& field, const TensorPower& t);

/// Cowedge multiplication on V-spaces, T^pV (x) Lambda^{q+1}W -> T^pV (x) W (x) Lambda^qW:
/// nu (x) w_{j1} ^ ... ^ w_{j(q+1)} maps to sum_i (-1)^(i-1) nu (x) w_{ji} (x) (the rest).
/// Grade(none, t) -> Grade(W, t-1). The q = 0 block maps to zero.
Tensor cowedge(const PrimeField& field, const Tensor& t);

/// d_v inserts v into each gap of the V-segment ahead of the middle with
/// alternating signs, leaving the middle and the wedge untouched.
/// Grade(m, t) -> Grade(m, t+1). On Middle::none the last V factor acts as
/// the middle, so Lambda^qW (p = 0) maps to zero.
Tensor cobound_v(const PrimeField& field, std::span<const Element> v, const Tensor& t);

/// d_w appends ^w with sign (-1)^(p+q), where p counts the V factors ahead of
/// the middle (p-1 on Middle::none). Grade(m, t) -> Grade(m, t+1).
Tensor cobound_w(const PrimeField& field, std::span<const Element> w, const Tensor& t);

/// d_u = d_v + d_w for u = (w-part, v-part).
Tensor cobound_u(const PrimeField& field, std::span<const Element> u, const Tensor& t);

/// V-middle or W-middle into U-middle; U-middle into V-middle or W-middle.
Tensor include(const Tensor& t, Middle target);
Tensor project(const Tensor& t, Middle target);

/// T^pV (x) Lambda^qW seen as T^{p-1}V (x) V (x) Lambda^qW and then included in
/// the U-middle grade one lower. The p = 0 block has no such inclusion and is
/// dropped. Grade(none, t) -> Grade(U, t-1).
Tensor include_v_space(const Tensor& t);

/// nu (x) omega -> nu (x) v (x) omega on V-spaces. Grade(none, t) -> Grade(none, t+1).
Tensor append_v(const PrimeField& field, const Tensor& t, std::span<const Element> v);
/// nu (x) omega -> nu (x) w (x) omega. Grade(none, t) -> Grade(W, t).
Tensor with_w_middle(const PrimeField& field, const Tensor& t, std::span<const Element> w);
/// x (x) omega' -> x ^ omega' on the wedge segment, for omega' in Lambda^rW
/// (a Grade(none, r) tensor supported on block 0). Grade(m, t) -> Grade(m, t+r).
Tensor wedge_right(const PrimeField& field, const Tensor& t, const Tensor& omega);

/// Matrix of q x q minors of a k x k matrix, rows and columns indexed by the
/// WedgeBasis(k, q) ranks: entry (S, T) = det(m[S rows, T cols]).
FieldMatrix exterior_power(const PrimeField& field, const FieldMatrix& m, int q);

}  // namespace moulin
