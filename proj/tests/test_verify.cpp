#include "doctest.h"

#include "moulin/verify.hpp"

using namespace moulin;

namespace {

VerifyOptions quick(std::uint64_t seed) {
  VerifyOptions opt;
  opt.seed = seed;
  opt.trials = 5;
  return opt;
}

}  // namespace

TEST_CASE("suites pass on the default grid") {
  const auto report = run_verify(quick(3));
  CHECK(report.ok());
  CHECK(report.suites.size() == 7);
  for (const auto& s : report.suites) {
    CHECK(s.checks > 0);
    CHECK_FALSE(s.first_failure.has_value());
  }
}

TEST_CASE("seeded runs are reproducible") {
  auto strip = [](nlohmann::json j) {
    for (auto& s : j["suites"]) s.erase("seconds");
    return j;
  };
  CHECK(strip(to_json(run_verify(quick(11)))) == strip(to_json(run_verify(quick(11)))));
}

TEST_CASE("a sign-flipped cowedge is caught") {
  auto opt = quick(4);
  opt.flip_cowedge_sign = true;
  const auto r = verify_cowedge_commutators(opt);
  CHECK(r.failures > 0);
  REQUIRE(r.first_failure.has_value());
  CHECK(r.first_failure->find("commutator") != std::string::npos);
  CHECK(verify_squares(opt).ok());
}

TEST_CASE("an empty report is not a pass") { CHECK_FALSE(VerifyReport{}.ok()); }
