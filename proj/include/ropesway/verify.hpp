#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ropesway {

// Knobs the verification suite exposes. The defaults are the canonical gate;
// dt and fd_cells exist so coarse-step/coarse-grid misbehaviour is reachable
// in tests, and basis_scale deliberately corrupts the shape family to prove
// the orthonormality check can fail.
struct VerifyOptions {
  double dt = 1e-3;
  int fd_cells = 400;
  std::uint64_t seed = 0;
  double basis_scale = 1.0;
};

struct CheckResult {
  std::string id;
  bool pass = false;
  std::string detail;
};

// Check ids in report order: "orthonormality", then "A1".."A11".
const std::vector<std::string>& verification_ids();

// Runs a single check (throws ConfigError for unknown ids) or all of them.
CheckResult run_check(const std::string& id, const VerifyOptions& opts);
std::vector<CheckResult> run_verification(const VerifyOptions& opts);

// Fixed-width pass/fail table with one line per check.
std::string verification_report(const std::vector<CheckResult>& checks);

bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace ropesway
