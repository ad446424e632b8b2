#include "moulin/verify.hpp"

#include <chrono>
#include <random>
#include <sstream>

#include "moulin/graded_tensor.hpp"
#include "moulin/moulin_code.hpp"

namespace moulin {

namespace {

class Recorder {
 public:
  explicit Recorder(std::string name) : start_(std::chrono::steady_clock::now()) { result_.name = std::move(name); }

  template <typename Describe>
  void check(bool ok, Describe&& describe) {
    ++result_.checks;
    if (ok) return;
    ++result_.failures;
    if (!result_.first_failure) result_.first_failure = describe();
  }

  SuiteResult finish() {
    result_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return result_;
  }

 private:
  SuiteResult result_;
  std::chrono::steady_clock::time_point start_;
};

std::vector<Element> random_vec(const PrimeField& f, int dim, std::mt19937_64& rng) {
  std::vector<Element> v(static_cast<std::size_t>(dim));
  std::uniform_int_distribution<Element> dist(0, f.modulus() - 1);
  for (auto& x : v) x = dist(rng);
  return v;
}

Tensor random_block(const PrimeField& f, const SpaceSig& sig, std::mt19937_64& rng) {
  return Tensor::in_block(sig, random_vec(f, static_cast<int>(sig.dimension()), rng));
}

std::string describe(const char* what, std::uint32_t p, const SpaceSig& sig) {
  std::ostringstream os;
  os << what << " over GF(" << p << ") at p=" << sig.p << " q=" << sig.q << " middle=" << to_string(sig.middle)
     << " d-k=" << sig.dim_v << " k=" << sig.dim_w;
  return os.str();
}

// Calls body(field, sig) for every nonempty signature of the grid.
template <typename Body>
void for_each_signature(const VerifyOptions& opt, std::initializer_list<Middle> middles, Body&& body) {
  const int max_k = 4;
  const int max_l = opt.deep ? 3 : 2;
  const int max_t = opt.deep ? 5 : 4;
  for (std::uint32_t p : {5u, 7u}) {
    const PrimeField f(p);
    for (int k = 1; k <= max_k; ++k)
      for (int l = 0; l <= max_l; ++l)
        for (Middle m : middles)
          for (int t = 0; t <= max_t; ++t)
            for (int pp = 0; pp <= t; ++pp) {
              const SpaceSig sig{pp, m, t - pp, l, k};
              if (sig.dimension() == 0) continue;
              body(f, sig);
            }
  }
}

int trials(const VerifyOptions& opt) { return opt.deep ? 3 * opt.trials : opt.trials; }

struct InstanceSpec {
  int n, k, d, s;
};

std::vector<InstanceSpec> rank_grid(const VerifyOptions& opt) {
  std::vector<InstanceSpec> out{{4, 3, 3, 2}, {5, 3, 4, 2}, {5, 3, 4, 3}, {6, 4, 5, 3}};
  if (opt.deep) out.insert(out.end(), {{8, 4, 7, 5}, {7, 4, 6, 5}, {6, 3, 5, 4}});
  return out;
}

std::vector<Element> random_message(const CodeInstance& inst, std::mt19937_64& rng) {
  return random_vec(inst.field, static_cast<int>(inst.params.file_size), rng);
}

std::string instance_name(const CodeInstance& inst) {
  return "(" + std::to_string(inst.n()) + "," + std::to_string(inst.k()) + "," + std::to_string(inst.d()) + "," +
         std::to_string(inst.s()) + ")";
}

}  // namespace

bool VerifyReport::ok() const noexcept {
  return !suites.empty() && std::ranges::all_of(suites, [](const SuiteResult& s) { return s.ok(); });
}

SuiteResult verify_squares(const VerifyOptions& opt) {
  Recorder rec("coboundary squares and anticommutation");
  std::mt19937_64 rng(opt.seed);
  for_each_signature(opt, {Middle::none, Middle::U, Middle::V, Middle::W}, [&](const PrimeField& f, const SpaceSig& sig) {
    const int l = sig.dim_v;
    const int k = sig.dim_w;
    for (int trial = 0; trial < trials(opt); ++trial) {
      const Tensor x = random_block(f, sig, rng);
      const auto v = random_vec(f, l, rng);
      const auto v2 = random_vec(f, l, rng);
      const auto w = random_vec(f, k, rng);
      const auto w2 = random_vec(f, k, rng);
      const auto u = random_vec(f, k + l, rng);
      const auto p = f.modulus();
      rec.check(cobound_v(f, v, cobound_v(f, v, x)).is_zero(), [&] { return describe("d_v d_v", p, sig); });
      rec.check(cobound_w(f, w, cobound_w(f, w, x)).is_zero(), [&] { return describe("d_w d_w", p, sig); });
      rec.check(add(f, cobound_v(f, v, cobound_v(f, v2, x)), cobound_v(f, v2, cobound_v(f, v, x))).is_zero(),
                [&] { return describe("d_v anticommutation", p, sig); });
      rec.check(add(f, cobound_w(f, w, cobound_w(f, w2, x)), cobound_w(f, w2, cobound_w(f, w, x))).is_zero(),
                [&] { return describe("d_w anticommutation", p, sig); });
      rec.check(add(f, cobound_v(f, v, cobound_w(f, w, x)), cobound_w(f, w, cobound_v(f, v, x))).is_zero(),
                [&] { return describe("d_v d_w anticommutation", p, sig); });
      rec.check(cobound_u(f, u, cobound_u(f, u, x)).is_zero(), [&] { return describe("d_u d_u", p, sig); });
    }
  });
  return rec.finish();
}

SuiteResult verify_cowedge_commutators(const VerifyOptions& opt) {
  Recorder rec("cowedge commutators");
  std::mt19937_64 rng(opt.seed + 1);
  auto nabla = [&](const PrimeField& f, const Tensor& t) {
    const Tensor out = cowedge(f, t);
    return opt.flip_cowedge_sign ? scale(f, f.neg(1), out) : out;
  };
  for_each_signature(opt, {Middle::none}, [&](const PrimeField& f, const SpaceSig& sig) {
    for (int trial = 0; trial < trials(opt); ++trial) {
      const Tensor x = random_block(f, sig, rng);
      const auto v = random_vec(f, sig.dim_v, rng);
      const auto w = random_vec(f, sig.dim_w, rng);
      const Element sign = f.sign(sig.p);
      const Tensor lhs_v = sub(f, cobound_v(f, v, nabla(f, x)), nabla(f, cobound_v(f, v, x)));
      rec.check(lhs_v == scale(f, sign, nabla(f, append_v(f, x, v))),
                [&] { return describe("d_v commutator", f.modulus(), sig); });
      const Tensor lhs_w = sub(f, cobound_w(f, w, nabla(f, x)), nabla(f, cobound_w(f, w, x)));
      rec.check(lhs_w == scale(f, sign, with_w_middle(f, x, w)),
                [&] { return describe("d_w commutator", f.modulus(), sig); });
    }
  });
  return rec.finish();
}

SuiteResult verify_wedge_compatibility(const VerifyOptions& opt) {
  Recorder rec("d_v commutes with right wedging");
  std::mt19937_64 rng(opt.seed + 2);
  for_each_signature(opt, {Middle::U}, [&](const PrimeField& f, const SpaceSig& sig) {
    // split x = x0 ^ omega with x0 of wedge degree 0
    const SpaceSig head{sig.p, Middle::U, 0, sig.dim_v, sig.dim_w};
    const SpaceSig tail{0, Middle::none, sig.q, 0, sig.dim_w};
    if (head.dimension() == 0 || tail.dimension() == 0) return;
    for (int trial = 0; trial < trials(opt); ++trial) {
      const Tensor x0 = random_block(f, head, rng);
      const Tensor omega = random_block(f, tail, rng);
      const auto v = random_vec(f, sig.dim_v, rng);
      rec.check(cobound_v(f, v, wedge_right(f, x0, omega)) == wedge_right(f, cobound_v(f, v, x0), omega),
                [&] { return describe("d_v with wedge", f.modulus(), sig); });
    }
  });
  return rec.finish();
}

SuiteResult verify_star_relation(const VerifyOptions& opt) {
  Recorder rec("star coboundary relation");
  std::mt19937_64 rng(opt.seed + 3);
  for_each_signature(opt, {Middle::U}, [&](const PrimeField& f, const SpaceSig& sig) {
    const int k = sig.dim_w;
    for (int trial = 0; trial < trials(opt); ++trial) {
      const Tensor x = random_block(f, sig, rng);
      const auto u = random_vec(f, k + sig.dim_v, rng);
      const std::span<const Element> uw(u.data(), static_cast<std::size_t>(k));
      const std::span<const Element> uv(u.data() + k, u.size() - static_cast<std::size_t>(k));
      const Tensor lhs = add(f, cobound_u(f, u, cobound_w(f, uw, x)), cobound_u(f, u, cobound_v(f, uv, x)));
      rec.check(lhs.is_zero(), [&] { return describe("d_u d_w + d_u d_v", f.modulus(), sig); });
    }
  });
  return rec.finish();
}

SuiteResult verify_ranks(const VerifyOptions& opt) {
  Recorder rec("check matrix rank and file size");
  for (auto [n, k, d, s] : rank_grid(opt)) {
    const auto inst = build_vandermonde_instance(n, k, d, s);
    std::size_t expected = 0;
    for (int p = 0; p <= s; ++p)
      expected += int_power(static_cast<std::size_t>(d - k), p) * static_cast<std::size_t>(binomial(k, s - p));
    const auto r = rank(inst.field, inst.check_matrix);
    rec.check(r == expected, [&] {
      return "rank " + std::to_string(r) + " != " + std::to_string(expected) + " at " + instance_name(inst);
    });
    rec.check(inst.check_matrix.cols() - r == inst.params.file_size,
              [&] { return "null space dimension != M at " + instance_name(inst); });
  }
  return rec.finish();
}

SuiteResult verify_round_trips(const VerifyOptions& opt) {
  Recorder rec("download round trips");
  std::mt19937_64 rng(opt.seed + 4);
  for (auto [n, k, d, s] : rank_grid(opt)) {
    const auto inst = build_vandermonde_instance(n, k, d, s);
    const auto msg = random_message(inst, rng);
    const auto phi = encode(inst, msg);
    std::vector<NodeContent> shares;
    for (int h = 0; h < n; ++h) shares.push_back(extract_node(inst, phi, static_cast<std::size_t>(h)));
    for_each_combination(static_cast<std::size_t>(n), static_cast<std::size_t>(k), [&](std::span<const std::size_t> idx) {
      std::vector<NodeContent> pick;
      for (auto i : idx) pick.push_back(shares[i]);
      rec.check(decode_message(inst, download(inst, pick)) == msg,
                [&] { return "download mismatch at " + instance_name(inst); });
      return true;
    });
  }
  return rec.finish();
}

SuiteResult verify_repairs(const VerifyOptions& opt) {
  Recorder rec("exact repair");
  std::mt19937_64 rng(opt.seed + 5);
  struct Case {
    int n, k, d, s;
    std::vector<std::vector<std::size_t>> failing_sets;
  };
  std::vector<Case> cases{{5, 3, 4, 3, {{0}, {1}, {2}, {3}, {4}}}, {7, 4, 5, 3, {{1, 4}}}, {6, 3, 4, 2, {{0, 5}}}};
  if (opt.deep) cases.insert(cases.end(), {{8, 4, 7, 5, {{0}, {7}}}, {10, 4, 7, 5, {{2, 3, 9}}}, {9, 4, 7, 5, {{2, 8}}}});
  for (const auto& cs : cases) {
    const auto inst = build_vandermonde_instance(cs.n, cs.k, cs.d, cs.s);
    const auto phi = encode(inst, random_message(inst, rng));
    std::vector<NodeContent> shares;
    for (int h = 0; h < cs.n; ++h) shares.push_back(extract_node(inst, phi, static_cast<std::size_t>(h)));
    for (const auto& failing : cs.failing_sets) {
      const auto plan = plan_repair(inst, complement_chain(inst, failing));
      std::vector<HelpMessage> msgs;
      for (std::size_t h = 0; h < shares.size() && msgs.size() < static_cast<std::size_t>(cs.d); ++h)
        if (std::ranges::find(failing, h) == failing.end()) msgs.push_back(help_message(inst, plan, shares[h]));
      const auto beta_c = inst.params.beta_for(static_cast<int>(failing.size()));
      rec.check(msgs.front().symbols.size() == beta_c, [&] { return "help length != beta_c at " + instance_name(inst); });
      for (const auto& r : repair(inst, plan, msgs))
        rec.check(r == shares[r.node], [&] { return "repaired share differs at " + instance_name(inst); });
    }
  }
  return rec.finish();
}

VerifyReport run_verify(const VerifyOptions& opt) {
  VerifyReport out;
  out.suites.push_back(verify_squares(opt));
  out.suites.push_back(verify_cowedge_commutators(opt));
  out.suites.push_back(verify_wedge_compatibility(opt));
  out.suites.push_back(verify_star_relation(opt));
  out.suites.push_back(verify_ranks(opt));
  out.suites.push_back(verify_round_trips(opt));
  out.suites.push_back(verify_repairs(opt));
  return out;
}

nlohmann::json to_json(const VerifyReport& report) {
  nlohmann::json suites = nlohmann::json::array();
  for (const auto& s : report.suites) {
    nlohmann::json j{{"name", s.name}, {"checks", s.checks}, {"failures", s.failures}, {"seconds", s.seconds}};
    j["first_failure"] = s.first_failure ? nlohmann::json(*s.first_failure) : nlohmann::json(nullptr);
    suites.push_back(j);
  }
  return {{"ok", report.ok()}, {"suites", suites}};
}

}  // namespace moulin
