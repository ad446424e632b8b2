#pragma once

// Self-verification suites: coboundary identities on random tensors, rank
// and round-trip checks on small instances, repair exactness.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace moulin {

struct VerifyOptions {
  bool deep = false;
  std::uint64_t seed = 1;
  int trials = 100;
  /// Mutation hook: negates the cowedge inside the suites.
  bool flip_cowedge_sign = false;
};

struct SuiteResult {
  std::string name;
  std::uint64_t checks = 0;
  std::uint64_t failures = 0;
  std::optional<std::string> first_failure;
  double seconds = 0;

  bool ok() const noexcept { return failures == 0 && checks > 0; }
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool ok() const noexcept;
};

/// d^2 = 0 and pairwise anticommutation for d_v, d_w, d_u.
SuiteResult verify_squares(const VerifyOptions& opt);
/// Commutators of d_v and d_w with the cowedge.
SuiteResult verify_cowedge_commutators(const VerifyOptions& opt);
/// d_v commutes with wedging on the right.
SuiteResult verify_wedge_compatibility(const VerifyOptions& opt);
/// d_f^U d_f^W + d_f^U d_f^V = 0 for node stars.
SuiteResult verify_star_relation(const VerifyOptions& opt);
/// Check matrix rank and null-space dimension equal the closed forms.
SuiteResult verify_ranks(const VerifyOptions& opt);
/// Encode then download from every k-subset.
SuiteResult verify_round_trips(const VerifyOptions& opt);
/// Single and joint repairs rebuild shares exactly with beta_c symbols.
SuiteResult verify_repairs(const VerifyOptions& opt);

VerifyReport run_verify(const VerifyOptions& opt);

nlohmann::json to_json(const VerifyReport& report);

}  // namespace moulin
