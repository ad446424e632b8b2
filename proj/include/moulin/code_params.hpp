#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace moulin {

using BigInt = boost::multiprecision::cpp_int;

/// Validates n-1 >= d >= k >= s-1 >= 1; throws ParameterError otherwise.
void require_admissible(int n, int k, int d, int s);

struct CodeParams {
  int n = 0;
  int k = 0;
  int d = 0;
  int s = 0;
  std::uint64_t alpha = 0;
  std::uint64_t beta = 0;
  std::uint64_t file_size = 0;
  /// c -> symbols per helper when c nodes are repaired jointly, 1 <= c <= k.
  std::map<int, std::uint64_t> beta_c;

  std::uint64_t beta_for(int c) const { return beta_c.at(c); }

  friend bool operator==(const CodeParams&, const CodeParams&) = default;
};

/// Formal power series truncated after x^order, exact integer coefficients.
class TruncatedSeries {
 public:
  explicit TruncatedSeries(int order);
  TruncatedSeries(int order, std::vector<BigInt> coeffs);

  static TruncatedSeries monomial(int order, int exponent, BigInt coeff = 1);
  /// (1 + x)^e for e >= 0.
  static TruncatedSeries one_plus_x_pow(int order, int e);
  /// 1 / (1 - a x) = sum a^i x^i.
  static TruncatedSeries geometric(int order, const BigInt& a);

  int order() const noexcept { return order_; }
  const BigInt& operator[](int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }
  /// Zero beyond the truncation order is not representable; throws out_of_range.
  BigInt coefficient(int i) const;
  const std::vector<BigInt>& coefficients() const noexcept { return coeffs_; }

  TruncatedSeries operator+(const TruncatedSeries& o) const;
  TruncatedSeries operator-(const TruncatedSeries& o) const;
  TruncatedSeries operator*(const TruncatedSeries& o) const;
  TruncatedSeries operator*(const BigInt& c) const;
  /// Exact division by a series whose constant term divides every step
  /// (in practice +-1). Throws std::domain_error when the quotient is not integral.
  TruncatedSeries operator/(const TruncatedSeries& o) const;

  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

 private:
  void require_same_order(const TruncatedSeries& o) const;

  int order_;
  std::vector<BigInt> coeffs_;
};

/// Sums over p+q with the convention 0^0 = 1. No admissibility check, so the
/// values are defined for any d >= k >= 1 and s >= 2.
CodeParams closed_form_values(int k, int d, int s);
CodeParams closed_form_params(int n, int k, int d, int s);

/// x^s coefficients of the generating functions for alpha, beta, M and beta_c.
/// `order` defaults to s + 4.
CodeParams ogf_params(int n, int k, int d, int s, int order = -1);

/// Coefficients of 1 / ((1 - l x)(1 + x)^l) for x^0..x^(depth-1).
std::vector<std::int64_t> reciprocal_series(int d_minus_k, int depth);

/// The n = k+1, d = k family: alpha = C(k,s-1), beta = C(k-1,s-2), M = k C(k,s-1) - C(k,s).
CodeParams layered_params(int k, int s);

/// Human-readable differences between two parameter sets (empty when equal).
std::vector<std::string> compare_params(const CodeParams& a, const CodeParams& b);

}  // namespace moulin
