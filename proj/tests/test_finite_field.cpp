#include "doctest.h"

#include <random>
#include <set>

#include "moulin/finite_field.hpp"

using namespace moulin;

namespace {

FieldMatrix random_matrix(const PrimeField& f, std::size_t r, std::size_t c, std::mt19937_64& rng) {
  FieldMatrix m(r, c);
  std::uniform_int_distribution<Element> dist(0, f.modulus() - 1);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
  return m;
}

// Rank by counting the distinct vectors in the row span: |span| = p^rank.
std::size_t brute_force_rank(const PrimeField& f, const FieldMatrix& m) {
  std::set<std::vector<Element>> span;
  std::vector<Element> coeff(m.rows(), 0);
  while (true) {
    std::vector<Element> v(m.cols(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) v[j] = f.mul_add(v[j], coeff[i], m(i, j));
    span.insert(v);
    std::size_t i = 0;
    while (i < coeff.size() && ++coeff[i] == f.modulus()) coeff[i++] = 0;
    if (i == coeff.size()) break;
  }
  std::size_t rank = 0;
  for (std::size_t size = 1; size < span.size(); size *= f.modulus()) ++rank;
  return rank;
}

// Determinant by cofactor expansion.
Element cofactor_det(const PrimeField& f, const std::vector<std::vector<Element>>& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  Element out = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<Element>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Element> row;
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(a[r][j]);
      minor.push_back(row);
    }
    out = f.add(out, f.mul(f.sign(static_cast<long>(c)), f.mul(a[0][c], cofactor_det(f, minor))));
  }
  return out;
}

bool all_subsets_invertible(const PrimeField& f, const std::vector<std::vector<Element>>& vecs, std::size_t dim) {
  bool ok = true;
  for_each_combination(vecs.size(), dim, [&](std::span<const std::size_t> idx) {
    std::vector<std::vector<Element>> m(dim, std::vector<Element>(dim));
    for (std::size_t c = 0; c < dim; ++c)
      for (std::size_t r = 0; r < dim; ++r) m[r][c] = vecs[idx[c]][r];
    ok = cofactor_det(f, m) != 0;
    return ok;
  });
  return ok;
}

std::vector<std::vector<Element>> w_parts(const StarConfig& cfg) {
  std::vector<std::vector<Element>> out;
  for (std::size_t h = 0; h < cfg.n; ++h) out.emplace_back(cfg.w_part(h).begin(), cfg.w_part(h).end());
  return out;
}

}  // namespace

TEST_CASE("field axioms hold exhaustively for small moduli") {
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u}) {
    const PrimeField f(p);
    for (Element a = 0; a < p; ++a) {
      CHECK(f.add(a, f.neg(a)) == 0);
      if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1);
      for (Element b = 0; b < p; ++b) {
        CHECK(f.add(a, b) == f.add(b, a));
        CHECK(f.mul(a, b) == f.mul(b, a));
        CHECK(f.sub(f.add(a, b), b) == a);
        for (Element c = 0; c < p; ++c) {
          CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
          CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
          CHECK(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
        }
      }
    }
  }
}

TEST_CASE("field construction and helpers") {
  CHECK_THROWS_AS(PrimeField(4), ParameterError);
  CHECK_THROWS_AS(PrimeField(1), ParameterError);
  CHECK(PrimeField::at_least(8).modulus() == 11);
  CHECK(PrimeField::at_least(257).modulus() == 257);
  const PrimeField f(7);
  CHECK(f.reduce(-1) == 6);
  CHECK(f.pow(3, 6) == 1);
  CHECK_THROWS_AS(f.inv(0), NoSolutionError);
  CHECK(f.sign(3) == 6);
}

TEST_CASE("vandermonde stars") {
  SUBCASE("(4,3,3) over GF(5)") {
    const PrimeField f(5);
    const auto cfg = make_vandermonde_stars(4, 3, 3, f);
    REQUIRE(cfg.star_vectors.size() == 4);
    for (std::size_t h = 0; h < 4; ++h) {
      const Element a = static_cast<Element>(h);
      CHECK(cfg.star_vectors[h] == std::vector<Element>{1, a, f.mul(a, a)});
    }
    CHECK(all_subsets_invertible(f, cfg.star_vectors, 3));
    const auto rep = check_sd_sk(f, cfg);
    CHECK(rep.sd_ok);
    CHECK(rep.sk_ok);
  }
  SUBCASE("(2,1,1) over GF(2)") {
    const PrimeField f(2);
    const auto cfg = make_vandermonde_stars(2, 1, 1, f);
    CHECK(cfg.star_vectors == std::vector<std::vector<Element>>{{1}, {1}});
    CHECK(check_sd_sk(f, cfg).sd_ok);
  }
  SUBCASE("(8,4,7) over GF(11)") {
    const PrimeField f(11);
    const auto cfg = make_vandermonde_stars(8, 4, 7, f);
    CHECK(all_subsets_invertible(f, cfg.star_vectors, 7));
    CHECK(all_subsets_invertible(f, w_parts(cfg), 4));
    const auto rep = check_sd_sk(f, cfg);
    CHECK(rep.sd_ok);
    CHECK(rep.sk_ok);
    CHECK_FALSE(rep.first_failing_subset.has_value());
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(make_vandermonde_stars(8, 4, 7, PrimeField(7)), FieldTooSmallError);
    CHECK_THROWS_AS(make_vandermonde_stars(4, 3, 4, PrimeField(5)), ParameterError);
    CHECK_THROWS_AS(make_vandermonde_stars(4, 3, 2, PrimeField(5)), ParameterError);
    const std::vector<Element> dup{1, 2, 2, 3};
    CHECK_THROWS_AS(make_vandermonde_stars(dup, 2, 3, PrimeField(5)), ParameterError);
  }
}

TEST_CASE("layered stars") {
  const PrimeField f(2);
  for (std::size_t k = 1; k <= 4; ++k) {
    const auto cfg = make_layered_stars(k);
    CHECK(cfg.n == k + 1);
    CHECK(cfg.d == k);
    CHECK(cfg.star_scalars.empty());
    for (std::size_t h = 0; h < k; ++h)
      for (std::size_t j = 0; j < k; ++j) CHECK(cfg.star_vectors[h][j] == (h == j ? 1u : 0u));
    CHECK(cfg.star_vectors[k] == std::vector<Element>(k, 1));
    CHECK(all_subsets_invertible(f, cfg.star_vectors, k));
    const auto rep = check_sd_sk(f, cfg);
    CHECK(rep.sd_ok);
    CHECK(rep.sk_ok);
  }
  CHECK_THROWS_AS(make_layered_stars(0), ParameterError);
}

TEST_CASE("check_sd_sk reports a repeated star") {
  const PrimeField f(5);
  auto cfg = make_vandermonde_stars(4, 2, 3, f);
  cfg.star_vectors[2] = cfg.star_vectors[1];
  const auto rep = check_sd_sk(f, cfg);
  CHECK_FALSE(rep.sd_ok);
  REQUIRE(rep.first_failing_subset.has_value());
  CHECK(*rep.first_failing_subset == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("rank and null space on fixed matrices") {
  const PrimeField f(5);
  CHECK(rank(f, FieldMatrix::identity(3)) == 3);
  CHECK(null_space_basis(f, FieldMatrix::identity(3)).cols() == 0);
  const FieldMatrix zero(2, 5);
  CHECK(rank(f, zero) == 0);
  const auto ns = null_space_basis(f, zero);
  CHECK(ns.rows() == 5);
  CHECK(ns.cols() == 5);
  CHECK(ns == FieldMatrix::identity(5));

  FieldMatrix vdm(3, 4);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 4; ++c) vdm(r, c) = f.pow(static_cast<Element>(c), r);
  CHECK(rank(f, vdm) == brute_force_rank(f, vdm));
  CHECK(rank(f, vdm) == 3);
  const auto vns = null_space_basis(f, vdm);
  CHECK(vns.cols() == 1);
  CHECK(multiply(f, vdm, vns).entries() == std::vector<Element>(3, 0));
  CHECK(vns(3, 0) == 1);
}

TEST_CASE("rank-nullity, solve and inverse on random matrices") {
  std::mt19937_64 rng(12345);
  const PrimeField f(7);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t r = 1 + rng() % 4;
    const std::size_t c = 1 + rng() % 4;
    auto m = random_matrix(f, r, c, rng);
    if (trial % 3 == 0 && r > 1) std::copy(m.row(0).begin(), m.row(0).end(), m.row(r - 1).begin());
    const auto rk = rank(f, m);
    CHECK(rk == brute_force_rank(f, m));
    const auto ns = null_space_basis(f, m);
    CHECK(rk + ns.cols() == c);
    CHECK(rank(f, ns) == ns.cols());
    const auto zero = multiply(f, m, ns);
    for (Element e : zero.entries()) CHECK(e == 0);

    const auto x = random_matrix(f, c, 1, rng).column(0);
    const auto b = multiply(f, m, std::span<const Element>(x));
    const auto sol = solve(f, m, b);
    CHECK(multiply(f, m, std::span<const Element>(sol)) == b);
  }
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    const auto m = random_matrix(f, n, n, rng);
    if (determinant(f, m) == 0) {
      CHECK_THROWS_AS(inverse(f, m), NoSolutionError);
      continue;
    }
    CHECK(multiply(f, m, inverse(f, m)) == FieldMatrix::identity(n));
  }
}

TEST_CASE("solve rejects an inconsistent system") {
  const PrimeField f(5);
  const FieldMatrix m(2, 2, {1, 1, 1, 1});
  const std::vector<Element> b{1, 2};
  CHECK_THROWS_AS(solve(f, m, b), NoSolutionError);
}

TEST_CASE("determinant matches cofactor expansion") {
  std::mt19937_64 rng(7);
  const PrimeField f(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    const auto m = random_matrix(f, n, n, rng);
    std::vector<std::vector<Element>> a(n, std::vector<Element>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
    CHECK(determinant(f, m) == cofactor_det(f, a));
  }
}

TEST_CASE("combinations are lexicographic") {
  std::vector<std::vector<std::size_t>> seen;
  for_each_combination(4, 2, [&](std::span<const std::size_t> c) {
    seen.emplace_back(c.begin(), c.end());
    return true;
  });
  CHECK(seen == std::vector<std::vector<std::size_t>>{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  int calls = 0;
  for_each_combination(3, 0, [&](std::span<const std::size_t>) { return ++calls, true; });
  CHECK(calls == 1);
}
