#include "doctest.h"

#include "moulin/code_params.hpp"
#include "moulin/errors.hpp"

using namespace moulin;

namespace {

// Plain int64 polynomial arithmetic, independent of TruncatedSeries.
using Poly = std::vector<std::int64_t>;

Poly poly_mul(const Poly& a, const Poly& b, std::size_t n) {
  Poly out(n, 0);
  for (std::size_t i = 0; i < a.size() && i < n; ++i)
    for (std::size_t j = 0; j < b.size() && i + j < n; ++j) out[i + j] += a[i] * b[j];
  return out;
}

Poly binom_poly(int e, std::size_t n) {
  Poly out{1};
  for (int i = 0; i < e; ++i) out = poly_mul(out, Poly{1, 1}, n);
  out.resize(n, 0);
  return out;
}

Poly geometric_poly(std::int64_t a, std::size_t n) {
  Poly out(n, 0);
  std::int64_t t = 1;
  for (auto& c : out) {
    c = t;
    t *= a;
  }
  return out;
}

// 1 / (1+x)^c = sum (-1)^i C(c+i-1, i) x^i.
Poly inverse_binom_poly(int c, std::size_t n) {
  Poly out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t b = 1;
    for (std::size_t j = 1; j <= i; ++j) b = b * (c + static_cast<std::int64_t>(j) - 1) / static_cast<std::int64_t>(j);
    out[i] = (i % 2 == 0) ? b : -b;
  }
  return out;
}

std::int64_t choose(int n, int r) {
  if (r < 0 || n < 0 || r > n) return 0;
  std::int64_t out = 1;
  for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t out = 1;
  while (e-- > 0) out *= b;
  return out;
}

}  // namespace

TEST_CASE("closed forms at fixed points") {
  const auto a = closed_form_params(4, 3, 3, 2);
  CHECK(a.alpha == 3);
  CHECK(a.beta == 1);
  CHECK(a.file_size == 6);
  const auto b = closed_form_params(7, 4, 6, 5);
  CHECK(b.alpha == 81);
  CHECK(b.beta == 27);
  CHECK(b.file_size == 324);
  CHECK(b.beta_for(2) == 45);
  CHECK(b.beta_for(1) == b.beta);
  for (int k = 1; k <= 6; ++k)
    for (int d = k; d <= 8; ++d) {
      const auto p = closed_form_params(d + 1, k, d, 2);
      CHECK(p.alpha == static_cast<std::uint64_t>(d));
      CHECK(p.beta == 1);
      CHECK(p.file_size == static_cast<std::uint64_t>(k * d - k * (k - 1) / 2));
    }
}

TEST_CASE("admissibility") {
  CHECK_THROWS_AS(closed_form_params(3, 3, 3, 2), ParameterError);
  CHECK_THROWS_AS(closed_form_params(5, 3, 4, 1), ParameterError);
  CHECK_THROWS_AS(closed_form_params(5, 3, 4, 5), ParameterError);
  CHECK_THROWS_AS(ogf_params(5, 4, 3, 2), ParameterError);
  CHECK_NOTHROW(closed_form_params(5, 3, 4, 4));
}

TEST_CASE("generating functions agree with closed forms") {
  CHECK(ogf_params(4, 3, 3, 2) == closed_form_params(4, 3, 3, 2));
  for (int k = 1; k <= 6; ++k)
    for (int d = k; d <= 9; ++d)
      for (int s = 2; s <= k + 1; ++s) {
        const auto cf = closed_form_params(d + 1, k, d, s);
        const auto og = ogf_params(d + 1, k, d, s);
        CHECK(compare_params(cf, og).empty());

        // hand expansion with int64 polynomials
        const std::size_t n = static_cast<std::size_t>(s) + 1;
        const int l = d - k;
        const Poly a_poly = poly_mul(poly_mul(Poly{0, 1}, binom_poly(k, n), n), geometric_poly(l, n), n);
        const Poly b_poly = poly_mul(poly_mul(Poly{0, 0, 1}, binom_poly(k - 1, n), n), geometric_poly(l, n), n);
        const Poly m_poly = poly_mul(poly_mul(Poly{-1, d}, binom_poly(k, n), n), geometric_poly(l, n), n);
        const auto su = static_cast<std::size_t>(s);
        CHECK(cf.alpha == static_cast<std::uint64_t>(a_poly[su]));
        CHECK(cf.beta == static_cast<std::uint64_t>(b_poly[su]));
        CHECK(cf.file_size == static_cast<std::uint64_t>(m_poly[su]));
        for (int c = 1; c <= k; ++c) {
          Poly factor = inverse_binom_poly(c, n);
          for (auto& x : factor) x = -x;
          factor[0] += 1;
          CHECK(cf.beta_for(c) == static_cast<std::uint64_t>(poly_mul(a_poly, factor, n)[su]));

          // telescoping Pascal form: sum_{j=1..c} sum_{p+q=s-2} l^p C(k-j, q)
          std::int64_t tele = 0;
          for (int j = 1; j <= c; ++j)
            for (int p = 0; p <= s - 2; ++p) tele += ipow(l, p) * choose(k - j, s - 2 - p);
          CHECK(cf.beta_for(c) == static_cast<std::uint64_t>(tele));
        }
        // M equals k [x^s]A - C(k, s)
        CHECK(static_cast<std::int64_t>(og.file_size) ==
              k * static_cast<std::int64_t>(og.alpha) - choose(k, s));
      }
}

TEST_CASE("beta_c is nondecreasing and starts at beta") {
  for (int k = 1; k <= 6; ++k)
    for (int d = k; d <= 9; ++d)
      for (int s = 2; s <= k + 1; ++s) {
        const auto p = closed_form_params(d + 1, k, d, s);
        CHECK(p.beta_for(1) == p.beta);
        for (int c = 2; c <= k; ++c) CHECK(p.beta_for(c) >= p.beta_for(c - 1));
      }
}

TEST_CASE("MBR and MSR identities") {
  for (int k = 1; k <= 6; ++k)
    for (int d = k; d <= 9; ++d) {
      const auto mbr = closed_form_params(d + 1, k, d, 2);
      CHECK(mbr.alpha == static_cast<std::uint64_t>(d) * mbr.beta);
      const auto msr = closed_form_params(d + 1, k, d, k + 1);
      CHECK(msr.file_size == static_cast<std::uint64_t>(k) * msr.alpha);
      CHECK(msr.alpha == static_cast<std::uint64_t>(d - k + 1) * msr.beta);
    }
}

TEST_CASE("past s = k+1 the parameters scale by d-k") {
  for (int k = 1; k <= 5; ++k)
    for (int d = k; d <= 8; ++d) {
      const auto top = closed_form_values(k, d, k + 1);
      const auto next = closed_form_values(k, d, k + 2);
      const auto l = static_cast<std::uint64_t>(d - k);
      CHECK(next.alpha == l * top.alpha);
      CHECK(next.beta == l * top.beta);
      CHECK(next.file_size == l * top.file_size);
      if (d - k == 1) CHECK(compare_params(top, next).empty());
    }
}

TEST_CASE("reciprocal series coefficients") {
  CHECK(reciprocal_series(2, 8) == std::vector<std::int64_t>{1, 0, 3, 2, 9, 12, 31, 54});
  CHECK(reciprocal_series(0, 5) == std::vector<std::int64_t>{1, 0, 0, 0, 0});
  CHECK(reciprocal_series(1, 4) == std::vector<std::int64_t>{1, 0, 1, 0});
  CHECK(reciprocal_series(3, 0).empty());
  CHECK_THROWS_AS(reciprocal_series(-1, 3), ParameterError);
}

TEST_CASE("layered parameters") {
  const auto a = layered_params(4, 3);
  CHECK(a.alpha == 6);
  CHECK(a.beta == 3);
  CHECK(a.file_size == 20);
  const auto b = layered_params(3, 4);
  CHECK(b.alpha == 1);
  CHECK(b.beta == 1);
  CHECK(b.file_size == 3);
  for (int k = 1; k <= 6; ++k) {
    const auto mbr = layered_params(k, 2);
    CHECK(mbr.alpha == static_cast<std::uint64_t>(k));
    CHECK(mbr.beta == 1);
    CHECK(mbr.file_size == static_cast<std::uint64_t>(k * k - choose(k, 2)));
    for (int s = 2; s <= k + 1; ++s) CHECK(layered_params(k, s) == closed_form_params(k + 1, k, k, s));
  }
}

TEST_CASE("truncated series arithmetic") {
  const auto one = TruncatedSeries::monomial(6, 0);
  const auto p = TruncatedSeries::one_plus_x_pow(6, 3);
  CHECK((p / p) == one);
  CHECK(((one / p) * p) == one);
  const auto g = TruncatedSeries::geometric(6, 2);
  CHECK((g * (one - TruncatedSeries::monomial(6, 1, 2))) == one);
  CHECK_THROWS_AS(one / TruncatedSeries::monomial(6, 1), std::domain_error);
  CHECK_THROWS_AS(one / TruncatedSeries::monomial(6, 0, 2), std::domain_error);
  CHECK_THROWS_AS(p.coefficient(7), std::out_of_range);
}
