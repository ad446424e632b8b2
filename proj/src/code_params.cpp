#include "moulin/code_params.hpp"

#include <stdexcept>

#include "moulin/errors.hpp"

namespace moulin {

namespace {

BigInt big_binomial(int n, int r) {
  if (r < 0 || n < 0 || r > n) return 0;
  BigInt out = 1;
  for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

BigInt big_power(int base, int e) {
  BigInt out = 1;  // 0^0 = 1
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

std::uint64_t to_u64(const BigInt& v, const char* what) {
  if (v < 0 || v > std::numeric_limits<std::uint64_t>::max())
    throw ParameterError(std::string(what) + " does not fit in 64 bits");
  return v.convert_to<std::uint64_t>();
}

}  // namespace

void require_admissible(int n, int k, int d, int s) {
  if (!(n - 1 >= d && d >= k && k >= s - 1 && s - 1 >= 1))
    throw ParameterError("parameters must satisfy n-1 >= d >= k >= s-1 >= 1 (got n=" + std::to_string(n) +
                         " k=" + std::to_string(k) + " d=" + std::to_string(d) + " s=" + std::to_string(s) + ")");
}

// ---------------------------------------------------------------------------

TruncatedSeries::TruncatedSeries(int order) : order_(order), coeffs_(static_cast<std::size_t>(order + 1), 0) {
  if (order < 0) throw std::invalid_argument("negative truncation order");
}

TruncatedSeries::TruncatedSeries(int order, std::vector<BigInt> coeffs) : TruncatedSeries(order) {
  if (coeffs.size() > coeffs_.size()) coeffs.resize(coeffs_.size());
  std::copy(coeffs.begin(), coeffs.end(), coeffs_.begin());
}

TruncatedSeries TruncatedSeries::monomial(int order, int exponent, BigInt coeff) {
  TruncatedSeries out(order);
  if (exponent >= 0 && exponent <= order) out.coeffs_[static_cast<std::size_t>(exponent)] = std::move(coeff);
  return out;
}

TruncatedSeries TruncatedSeries::one_plus_x_pow(int order, int e) {
  if (e < 0) throw std::invalid_argument("negative binomial exponent");
  TruncatedSeries out(order);
  for (int i = 0; i <= std::min(order, e); ++i) out.coeffs_[static_cast<std::size_t>(i)] = big_binomial(e, i);
  return out;
}

TruncatedSeries TruncatedSeries::geometric(int order, const BigInt& a) {
  TruncatedSeries out(order);
  BigInt term = 1;
  for (auto& c : out.coeffs_) {
    c = term;
    term *= a;
  }
  return out;
}

BigInt TruncatedSeries::coefficient(int i) const {
  if (i < 0) return 0;
  if (i > order_) throw std::out_of_range("coefficient beyond the truncation order");
  return coeffs_[static_cast<std::size_t>(i)];
}

void TruncatedSeries::require_same_order(const TruncatedSeries& o) const {
  if (o.order_ != order_) throw std::invalid_argument("series truncated at different orders");
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
  require_same_order(o);
  TruncatedSeries out = *this;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] += o.coeffs_[i];
  return out;
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const {
  require_same_order(o);
  TruncatedSeries out = *this;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] -= o.coeffs_[i];
  return out;
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
  require_same_order(o);
  TruncatedSeries out(order_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    for (std::size_t j = 0; i + j < coeffs_.size(); ++j) out.coeffs_[i + j] += coeffs_[i] * o.coeffs_[j];
  }
  return out;
}

TruncatedSeries TruncatedSeries::operator*(const BigInt& c) const {
  TruncatedSeries out = *this;
  for (auto& x : out.coeffs_) x *= c;
  return out;
}

TruncatedSeries TruncatedSeries::operator/(const TruncatedSeries& o) const {
  require_same_order(o);
  const BigInt& lead = o.coeffs_[0];
  if (lead == 0) throw std::domain_error("division by a series without constant term");
  TruncatedSeries out(order_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    BigInt acc = coeffs_[i];
    for (std::size_t j = 1; j <= i; ++j) acc -= o.coeffs_[j] * out.coeffs_[i - j];
    if (acc % lead != 0) throw std::domain_error("series quotient is not integral");
    out.coeffs_[i] = acc / lead;
  }
  return out;
}

// ---------------------------------------------------------------------------

CodeParams closed_form_values(int k, int d, int s) {
  if (k < 1 || d < k || s < 2) throw ParameterError("closed forms need d >= k >= 1 and s >= 2");
  const int l = d - k;
  BigInt alpha = 0;
  BigInt beta = 0;
  BigInt m_pos = 0;
  BigInt m_neg = 0;
  for (int p = 0; p <= s - 1; ++p) alpha += big_power(l, p) * big_binomial(k, s - 1 - p);
  for (int p = 0; p <= s - 2; ++p) beta += big_power(l, p) * big_binomial(k - 1, s - 2 - p);
  m_pos = alpha * d;
  for (int p = 0; p <= s; ++p) m_neg += big_power(l, p) * big_binomial(k, s - p);

  CodeParams out;
  out.k = k;
  out.d = d;
  out.s = s;
  out.alpha = to_u64(alpha, "alpha");
  out.beta = to_u64(beta, "beta");
  out.file_size = to_u64(m_pos - m_neg, "M");
  for (int c = 1; c <= k; ++c) {
    BigInt bc = 0;
    for (int p = 0; p <= s - 2; ++p)
      bc += big_power(l, p) * (big_binomial(k, s - 1 - p) - big_binomial(k - c, s - 1 - p));
    out.beta_c[c] = to_u64(bc, "beta_c");
  }
  return out;
}

CodeParams closed_form_params(int n, int k, int d, int s) {
  require_admissible(n, k, d, s);
  auto out = closed_form_values(k, d, s);
  out.n = n;
  return out;
}

CodeParams ogf_params(int n, int k, int d, int s, int order) {
  require_admissible(n, k, d, s);
  if (order < 0) order = s + 4;
  if (order < s) throw std::invalid_argument("truncation order below s");
  const int l = d - k;
  const auto geo = TruncatedSeries::geometric(order, l);
  const auto x = TruncatedSeries::monomial(order, 1);
  const auto a_series = x * TruncatedSeries::one_plus_x_pow(order, k) * geo;
  const auto b_series = x * x * TruncatedSeries::one_plus_x_pow(order, k - 1) * geo;
  const auto lin = TruncatedSeries::monomial(order, 0, -1) + TruncatedSeries::monomial(order, 1, d);
  const auto m_series = lin * TruncatedSeries::one_plus_x_pow(order, k) * geo;

  CodeParams out;
  out.n = n;
  out.k = k;
  out.d = d;
  out.s = s;
  out.alpha = to_u64(a_series.coefficient(s), "alpha");
  out.beta = to_u64(b_series.coefficient(s), "beta");
  out.file_size = to_u64(m_series.coefficient(s), "M");
  const auto one = TruncatedSeries::monomial(order, 0);
  for (int c = 1; c <= k; ++c) {
    const auto bc = a_series * (one - one / TruncatedSeries::one_plus_x_pow(order, c));
    out.beta_c[c] = to_u64(bc.coefficient(s), "beta_c");
  }
  return out;
}

std::vector<std::int64_t> reciprocal_series(int d_minus_k, int depth) {
  if (d_minus_k < 0) throw ParameterError("d-k must be nonnegative");
  if (depth <= 0) return {};
  const int order = depth - 1;
  const auto one = TruncatedSeries::monomial(order, 0);
  const auto series = one / (TruncatedSeries::one_plus_x_pow(order, d_minus_k) *
                             (one - TruncatedSeries::monomial(order, 1, d_minus_k)));
  std::vector<std::int64_t> out;
  for (int i = 0; i <= order; ++i) out.push_back(series.coefficient(i).convert_to<std::int64_t>());
  return out;
}

CodeParams layered_params(int k, int s) {
  require_admissible(k + 1, k, k, s);
  CodeParams out;
  out.n = k + 1;
  out.k = k;
  out.d = k;
  out.s = s;
  out.alpha = to_u64(big_binomial(k, s - 1), "alpha");
  out.beta = to_u64(big_binomial(k - 1, s - 2), "beta");
  out.file_size = to_u64(big_binomial(k, s - 1) * k - big_binomial(k, s), "M");
  for (int c = 1; c <= k; ++c)
    out.beta_c[c] = to_u64(big_binomial(k, s - 1) - big_binomial(k - c, s - 1), "beta_c");
  return out;
}

std::vector<std::string> compare_params(const CodeParams& a, const CodeParams& b) {
  std::vector<std::string> out;
  auto field = [&](const char* name, std::uint64_t x, std::uint64_t y) {
    if (x != y) out.push_back(std::string(name) + ": " + std::to_string(x) + " vs " + std::to_string(y));
  };
  field("alpha", a.alpha, b.alpha);
  field("beta", a.beta, b.beta);
  field("M", a.file_size, b.file_size);
  for (const auto& [c, v] : a.beta_c) {
    const auto it = b.beta_c.find(c);
    if (it == b.beta_c.end())
      out.push_back("beta_" + std::to_string(c) + " missing");
    else
      field(("beta_" + std::to_string(c)).c_str(), v, it->second);
  }
  return out;
}

}  // namespace moulin
