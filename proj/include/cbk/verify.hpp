#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cbk/io.hpp"

namespace cbk {

struct VerifyConfig {
  std::size_t n = 2;
  std::size_t p = 2;
  std::size_t q = 2;
  std::size_t trials = 5;
  std::uint64_t seed = 1;
  /// Tolerance for positivity checks on solver output.
  double eps = 1e-7;
  sdp::SolverOptions solver;
  /// Negates the first positive-suite instance so the harness itself is checked.
  bool inject_corruption = false;
};

struct SuiteResult {
  std::string name;
  std::size_t passed = 0;
  std::size_t failed = 0;
  double worst_residual = 0.0;
  std::vector<std::string> failures;
};

inline constexpr int kReportSchemaVersion = 1;

std::vector<SuiteResult> verify_theorems(const VerifyConfig& cfg);

/// {"schema_version", "config", "suites": [...], "passed"}.
io::json verify_report(const VerifyConfig& cfg, const std::vector<SuiteResult>& suites);

}  // namespace cbk
