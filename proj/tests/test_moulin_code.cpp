#include "doctest.h"

#include <random>

#include "moulin/errors.hpp"
#include "moulin/moulin_code.hpp"

using namespace moulin;

namespace {

std::vector<Element> random_message(const CodeInstance& inst, std::mt19937_64& rng) {
  std::vector<Element> m(inst.params.file_size);
  for (auto& x : m) x = static_cast<Element>(rng() % inst.field.modulus());
  return m;
}

std::vector<NodeContent> all_shares(const CodeInstance& inst, const FileFunctional& phi) {
  std::vector<NodeContent> out;
  for (int h = 0; h < inst.n(); ++h) out.push_back(extract_node(inst, phi, static_cast<std::size_t>(h)));
  return out;
}

std::size_t expected_check_rank(int k, int d, int s) {
  std::size_t out = 0;
  for (int p = 0; p <= s; ++p)
    out += int_power(static_cast<std::size_t>(d - k), p) * static_cast<std::size_t>(binomial(k, s - p));
  return out;
}

// Row h of the share map: share_h = extraction(h) * phi.
FieldMatrix extraction_matrix(const CodeInstance& inst, std::size_t h) {
  const std::size_t dim = inst.stored_grade().dimension();
  FieldMatrix m(inst.params.alpha, dim);
  for (std::size_t c = 0; c < dim; ++c) {
    FileFunctional e{std::vector<Element>(dim, 0)};
    e.evaluations[c] = 1;
    const auto col = extract_node(inst, e, h).symbols;
    for (std::size_t r = 0; r < col.size(); ++r) m(r, c) = col[r];
  }
  return m;
}

FieldMatrix stack(const std::vector<const FieldMatrix*>& parts) {
  std::size_t rows = 0;
  for (const auto* p : parts) rows += p->rows();
  FieldMatrix out(rows, parts.front()->cols());
  std::size_t r = 0;
  for (const auto* p : parts)
    for (std::size_t i = 0; i < p->rows(); ++i, ++r) std::copy(p->row(i).begin(), p->row(i).end(), out.row(r).begin());
  return out;
}

// phi o d_f evaluated directly from a share: the uncompressed help values.
std::vector<Element> direct_help_values(const CodeInstance& inst, const NodeContent& share, std::size_t f) {
  const Grade help = inst.help_grade();
  std::vector<Element> out;
  for (int p = 0; p <= help.degree; ++p)
    for (std::size_t i = 0; i < help.block(p).dimension(); ++i) {
      const Tensor t = cobound_u(inst.field, inst.stars.star(f), Tensor::unit(help, p, i));
      std::uint64_t acc = 0;
      for (std::size_t x = 0; x < t.size(); ++x) acc += std::uint64_t{t.coeffs()[x]} * share.symbols[x] % inst.field.modulus();
      out.push_back(static_cast<Element>(acc % inst.field.modulus()));
    }
  return out;
}

std::vector<NodeContent> run_repair(const CodeInstance& inst, const std::vector<NodeContent>& shares,
                                    const std::vector<std::size_t>& failing, const std::vector<std::size_t>& helpers) {
  const auto chain = complement_chain(inst, failing);
  const auto plan = plan_repair(inst, chain);
  std::vector<HelpMessage> msgs;
  for (auto h : helpers) msgs.push_back(help_message(inst, plan, shares[h]));
  return repair(inst, plan, msgs);
}

}  // namespace

TEST_CASE("check matrix rank and file size") {
  struct Case {
    int n, k, d, s;
  };
  for (auto [n, k, d, s] : std::vector<Case>{{4, 3, 3, 2}, {5, 3, 4, 2}, {5, 3, 4, 3}, {6, 4, 5, 3}, {5, 4, 4, 5}, {6, 2, 4, 3}}) {
    const auto inst = build_vandermonde_instance(n, k, d, s);
    CHECK(rank(inst.field, inst.check_matrix) == expected_check_rank(k, d, s));
    CHECK(inst.check_matrix.rows() == expected_check_rank(k, d, s));
    CHECK(inst.encoder_basis.cols() == inst.params.file_size);
    CHECK(rank(inst.field, inst.encoder_basis) == inst.params.file_size);
  }
  const auto small = build_vandermonde_instance(4, 3, 3, 2);
  CHECK(small.check_matrix.rows() == 3);
  CHECK(small.check_matrix.cols() == 9);
  CHECK(small.params.file_size == 6);
  const auto mbr = build_vandermonde_instance(5, 3, 4, 2);
  CHECK(mbr.check_matrix.cols() == 16);
  CHECK(mbr.check_matrix.rows() == 7);
  CHECK(mbr.params.file_size == 9);
}

TEST_CASE("instance preconditions") {
  CHECK_THROWS_AS(build_vandermonde_instance(5, 3, 4, 1), ParameterError);
  CHECK_THROWS_AS(build_vandermonde_instance(5, 3, 4, 3, 3), FieldTooSmallError);
  const PrimeField f(7);
  auto stars = make_vandermonde_stars(5, 3, 4, f);
  stars.star_vectors[3] = stars.star_vectors[2];
  CHECK_THROWS_AS(build_instance(5, 3, 4, 3, f, stars), ParameterError);
}

TEST_CASE("encoding") {
  std::mt19937_64 rng(11);
  const auto inst = build_vandermonde_instance(4, 3, 3, 2, 7);
  const std::vector<Element> zero(inst.params.file_size, 0);
  const auto phi0 = encode(inst, zero);
  CHECK(std::ranges::all_of(phi0.evaluations, [](Element e) { return e == 0; }));
  for (const auto& sh : all_shares(inst, phi0)) CHECK(std::ranges::all_of(sh.symbols, [](Element e) { return e == 0; }));
  for (std::size_t i = 0; i < inst.params.file_size; ++i) {
    std::vector<Element> e(inst.params.file_size, 0);
    e[i] = 1;
    CHECK(encode(inst, e).evaluations == inst.encoder_basis.column(i));
  }
  for (int t = 0; t < 20; ++t) {
    const auto m = random_message(inst, rng);
    const auto phi = encode(inst, m);
    CHECK(satisfies_checks(inst, phi));
    CHECK(decode_message(inst, phi) == m);
  }
  CHECK_THROWS_AS(encode(inst, std::vector<Element>(5, 0)), ShapeError);
}

TEST_CASE("shares of unit stars are slices of phi") {
  std::mt19937_64 rng(5);
  const auto inst = build_layered_instance(3, 3);
  const auto phi = encode(inst, random_message(inst, rng));
  const Grade stored = inst.stored_grade();
  for (std::size_t h = 0; h < 3; ++h) {
    const auto share = extract_node(inst, phi, h);
    CHECK(share.symbols.size() == inst.params.alpha);
    std::size_t idx = 0;
    for (int p = 0; p <= stored.degree; ++p)
      for (const auto& b : enumerate_basis(stored.block(p)))
        if (b.middle_idx == static_cast<int>(h)) {
          CHECK(share.symbols[idx++] == phi.evaluations[stored.block_offset(p) + basis_position(stored.block(p), b)]);
        }
    CHECK(idx == inst.params.alpha);
  }
  CHECK(extract_node(build_vandermonde_instance(4, 3, 3, 2), FileFunctional{std::vector<Element>(9, 0)}, 1).symbols.size() == 3);
  CHECK_THROWS_AS(extract_node(inst, phi, 4), CodingError);
}

TEST_CASE("download recovers the message from every k-subset") {
  std::mt19937_64 rng(77);
  for (auto inst : {build_vandermonde_instance(5, 3, 4, 3, 5), build_vandermonde_instance(4, 3, 3, 2),
                    build_vandermonde_instance(6, 4, 5, 3), build_layered_instance(4, 3)}) {
    const auto msg = random_message(inst, rng);
    const auto phi = encode(inst, msg);
    const auto shares = all_shares(inst, phi);
    for_each_combination(static_cast<std::size_t>(inst.n()), static_cast<std::size_t>(inst.k()),
                         [&](std::span<const std::size_t> idx) {
                           std::vector<NodeContent> pick;
                           for (auto i : idx) pick.push_back(shares[i]);
                           const auto rec = download(inst, pick);
                           CHECK(rec == phi);
                           CHECK(decode_message(inst, rec) == msg);
                           return true;
                         });
  }
}

TEST_CASE("download agrees with a direct linear solve") {
  std::mt19937_64 rng(3);
  const auto inst = build_vandermonde_instance(6, 3, 5, 3);
  const auto phi = encode(inst, random_message(inst, rng));
  const std::vector<std::size_t> nodes{1, 3, 4};
  std::vector<FieldMatrix> ext;
  std::vector<Element> rhs(inst.check_matrix.rows(), 0);
  std::vector<NodeContent> shares;
  for (auto h : nodes) {
    ext.push_back(extraction_matrix(inst, h));
    shares.push_back(extract_node(inst, phi, h));
    rhs.insert(rhs.end(), shares.back().symbols.begin(), shares.back().symbols.end());
  }
  const auto system = stack({&inst.check_matrix, &ext[0], &ext[1], &ext[2]});
  CHECK(rank(inst.field, system) == system.cols());
  CHECK(solve(inst.field, system, rhs) == download(inst, shares).evaluations);
}

TEST_CASE("check directions plus any k star slices span the stored grade") {
  const auto inst = build_vandermonde_instance(7, 4, 6, 4);
  std::vector<FieldMatrix> ext;
  for (std::size_t h : {0u, 2u, 5u, 6u}) ext.push_back(extraction_matrix(inst, h));
  const auto system = stack({&inst.check_matrix, &ext[0], &ext[1], &ext[2], &ext[3]});
  CHECK(rank(inst.field, system) == inst.stored_grade().dimension());
}

TEST_CASE("download preconditions") {
  const auto inst = build_vandermonde_instance(5, 3, 4, 3);
  const auto phi = encode(inst, std::vector<Element>(inst.params.file_size, 1));
  auto shares = all_shares(inst, phi);
  CHECK_THROWS_AS(download(inst, std::span(shares).first(2)), CodingError);
  std::vector<NodeContent> dup{shares[0], shares[0], shares[1]};
  CHECK_THROWS_AS(download(inst, dup), CodingError);
  const std::vector<NodeContent> zero_shares{{0, std::vector<Element>(inst.params.alpha, 0)},
                                             {2, std::vector<Element>(inst.params.alpha, 0)},
                                             {4, std::vector<Element>(inst.params.alpha, 0)}};
  CHECK(std::ranges::all_of(download(inst, zero_shares).evaluations, [](Element e) { return e == 0; }));
}

TEST_CASE("repair identity holds numerically") {
  std::mt19937_64 rng(8);
  for (auto inst : {build_vandermonde_instance(5, 3, 4, 3), build_vandermonde_instance(7, 3, 5, 4)}) {
    const auto& f = inst.field;
    const auto phi = encode(inst, random_message(inst, rng));
    auto eval = [&](const Tensor& t) {
      std::uint64_t acc = 0;
      for (std::size_t i = 0; i < t.size(); ++i) acc += std::uint64_t{t.coeffs()[i]} * phi.evaluations[i] % f.modulus();
      return static_cast<Element>(acc % f.modulus());
    };
    const Grade vs{Middle::none, inst.s() - 1, inst.l(), inst.k()};
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t node = rng() % static_cast<std::size_t>(inst.n());
      const int p = static_cast<int>(rng() % static_cast<std::uint64_t>(inst.s()));
      const std::size_t bd = vs.block(p).dimension();
      if (bd == 0) continue;
      const std::size_t pos = rng() % bd;
      const Tensor x = Tensor::unit(vs, p, pos);
      const auto u = inst.stars.star(node);
      const Element lhs = f.sub(eval(cobound_u(f, u, include(cowedge(f, x), Middle::U))),
                                eval(cobound_u(f, u, include_v_space(x))));
      const auto share = extract_node(inst, phi, node);
      CHECK(lhs == f.mul(f.sign(p), share.symbols[vs.block_offset(p) + pos]));
    }
  }
}

TEST_CASE("single repair is exact from every helper subset") {
  std::mt19937_64 rng(21);
  const auto inst = build_vandermonde_instance(5, 3, 4, 3);
  const auto phi = encode(inst, random_message(inst, rng));
  const auto shares = all_shares(inst, phi);
  for (std::size_t f = 0; f < 5; ++f) {
    const auto chain = complement_chain(inst, {f});
    const auto plan = plan_repair(inst, chain);
    CHECK(plan.symbols.size() == inst.params.beta);
    std::vector<std::size_t> survivors;
    for (std::size_t h = 0; h < 5; ++h)
      if (h != f) survivors.push_back(h);
    for (auto h : survivors) {
      const auto msg = help_message(inst, plan, shares[h]);
      CHECK(msg.symbols.size() == inst.params.beta);
      CHECK(decompress(inst, plan, msg, 0) == direct_help_values(inst, shares[h], f));
    }
    for_each_combination(survivors.size(), 4, [&](std::span<const std::size_t> idx) {
      std::vector<std::size_t> helpers;
      for (auto i : idx) helpers.push_back(survivors[i]);
      const auto rebuilt = run_repair(inst, shares, {f}, helpers);
      REQUIRE(rebuilt.size() == 1);
      CHECK(rebuilt[0] == shares[f]);
      return true;
    });
    CHECK(help_space_rank(inst, {f}) <= inst.params.beta);
  }
}

TEST_CASE("repair across the parameter range") {
  std::mt19937_64 rng(4);
  struct Case {
    int n, k, d, s;
  };
  for (auto [n, k, d, s] : std::vector<Case>{{4, 3, 3, 2}, {5, 3, 4, 2}, {6, 3, 5, 4}, {6, 4, 5, 5}, {7, 2, 6, 3}, {8, 4, 7, 5}}) {
    const auto inst = build_vandermonde_instance(n, k, d, s);
    const auto phi = encode(inst, random_message(inst, rng));
    const auto shares = all_shares(inst, phi);
    for (std::size_t f = 0; f < static_cast<std::size_t>(n); ++f) {
      std::vector<std::size_t> helpers;
      for (std::size_t h = 0; h < static_cast<std::size_t>(n) && helpers.size() < static_cast<std::size_t>(d); ++h)
        if (h != f) helpers.push_back(h);
      CHECK(run_repair(inst, shares, {f}, helpers)[0] == shares[f]);
    }
  }
  for (int k = 1; k <= 4; ++k)
    for (int s = 2; s <= k + 1; ++s) {
      const auto inst = build_layered_instance(k, s);
      const auto phi = encode(inst, random_message(inst, rng));
      const auto shares = all_shares(inst, phi);
      for (std::size_t f = 0; f <= static_cast<std::size_t>(k); ++f) {
        std::vector<std::size_t> helpers;
        for (std::size_t h = 0; h <= static_cast<std::size_t>(k); ++h)
          if (h != f) helpers.push_back(h);
        if (k == 1) {
          CHECK_THROWS_AS(complement_chain(inst, {f}), CodingError);
          continue;
        }
        CHECK(run_repair(inst, shares, {f}, helpers)[0] == shares[f]);
      }
    }
}

TEST_CASE("joint repair of several failures") {
  std::mt19937_64 rng(99);
  struct Case {
    int n, k, d, s;
    std::vector<std::size_t> failing;
  };
  for (const auto& cs : std::vector<Case>{{7, 4, 5, 3, {1, 4}},
                                          {8, 4, 5, 3, {0, 3, 6}},
                                          {9, 4, 7, 5, {2, 8}},
                                          {10, 4, 7, 5, {0, 5, 9}},
                                          {6, 3, 4, 4, {1, 2}}}) {
    const auto inst = build_vandermonde_instance(cs.n, cs.k, cs.d, cs.s);
    const auto phi = encode(inst, random_message(inst, rng));
    const auto shares = all_shares(inst, phi);
    std::vector<std::size_t> helpers;
    for (std::size_t h = 0; h < static_cast<std::size_t>(cs.n); ++h)
      if (std::ranges::find(cs.failing, h) == cs.failing.end()) helpers.push_back(h);
    helpers.resize(static_cast<std::size_t>(cs.d));

    const auto chain = complement_chain(inst, cs.failing);
    const auto plan = plan_repair(inst, chain);
    const int c = static_cast<int>(cs.failing.size());
    CHECK(plan.symbols.size() == inst.params.beta_for(c));
    for (auto h : helpers) {
      const auto msg = help_message(inst, plan, shares[h]);
      for (std::size_t j = 0; j < chain.size(); ++j)
        CHECK(decompress(inst, plan, msg, j) == direct_help_values(inst, shares[h], chain.failing[j]));
    }
    const auto rebuilt = run_repair(inst, shares, cs.failing, helpers);
    REQUIRE(rebuilt.size() == cs.failing.size());
    for (const auto& r : rebuilt) CHECK(r == shares[r.node]);
    CHECK(help_space_rank(inst, cs.failing) <= inst.params.beta_for(c));
  }
}

TEST_CASE("complement chain structure") {
  const auto inst = build_vandermonde_instance(7, 4, 5, 3);
  const auto chain = complement_chain(inst, {5, 2});
  CHECK(chain.failing == std::vector<std::size_t>{2, 5});
  CHECK(multiply(inst.field, chain.basis, chain.basis_inverse) == FieldMatrix::identity(4));
  for (std::size_t j = 0; j < 2; ++j) {
    const auto w = inst.stars.w_part(chain.failing[j]);
    CHECK(chain.basis.column(j) == std::vector<Element>(w.begin(), w.end()));
    CHECK(chain.complement(j).cols() == 3 - j);
  }
  // the failing w-part is outside the complement that follows it
  FieldMatrix aug(4, 4);
  const auto comp = chain.complement(0);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 3; ++c) aug(r, c) = comp(r, c);
    aug(r, 3) = inst.stars.w_part(2)[r];
  }
  CHECK(rank(inst.field, aug) == 4);

  const auto layered = build_layered_instance(4, 3);
  CHECK(complement_chain(layered, {0, 1, 2}).complement(2).cols() == 1);
  CHECK_THROWS_AS(complement_chain(inst, {1, 1}), CodingError);
  CHECK_THROWS_AS(complement_chain(inst, {0, 1, 2, 3}), CodingError);
}

TEST_CASE("help messages and repair preconditions") {
  const auto inst = build_vandermonde_instance(5, 3, 4, 3);
  const auto phi = encode(inst, std::vector<Element>(inst.params.file_size, 0));
  const auto shares = all_shares(inst, phi);
  const auto plan = plan_repair(inst, complement_chain(inst, {0}));
  CHECK_THROWS_AS(help_message(inst, plan, shares[0]), CodingError);
  std::vector<HelpMessage> msgs;
  for (std::size_t h = 1; h < 5; ++h) msgs.push_back(help_message(inst, plan, shares[h]));
  CHECK(std::ranges::all_of(msgs[0].symbols, [](Element e) { return e == 0; }));
  CHECK(repair(inst, plan, msgs)[0].symbols == std::vector<Element>(inst.params.alpha, 0));
  CHECK_THROWS_AS(repair(inst, plan, std::span(msgs).first(3)), CodingError);
  msgs[1] = msgs[0];
  CHECK_THROWS_AS(repair(inst, plan, msgs), CodingError);
}

TEST_CASE("whole-share fallback") {
  std::mt19937_64 rng(6);
  const auto inst = build_vandermonde_instance(8, 3, 5, 3);
  const auto phi = encode(inst, random_message(inst, rng));
  const auto shares = all_shares(inst, phi);
  const std::vector<std::size_t> failing{0, 1, 2};
  const std::vector<NodeContent> helpers(shares.begin() + 3, shares.end());
  const auto rebuilt = repair_by_download(inst, failing, helpers);
  for (std::size_t i = 0; i < 3; ++i) CHECK(rebuilt[i] == shares[i]);
  CHECK_THROWS_AS(repair_by_download(inst, failing, std::span(helpers).first(2)), CodingError);
}

TEST_CASE("help space rank at the bandwidth point") {
  for (int k = 2; k <= 4; ++k)
    for (int d = k; d <= k + 2; ++d) {
      const auto inst = build_vandermonde_instance(d + 1, k, d, 2);
      CHECK(help_space_rank(inst, {0}) == 1);
    }
  const auto inst = build_vandermonde_instance(8, 4, 5, 3);
  CHECK(help_space_rank(inst, {0, 1}) <= inst.params.beta_for(2));
}
