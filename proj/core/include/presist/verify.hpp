#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "presist/solver.hpp"

namespace presist {

/// Outcome of one property over all generated instances.
struct PropertyResult {
  std::string suite;
  std::string property;
  bool passed = true;
  std::size_t checks = 0;
  std::size_t failures = 0;
  /// Largest observed violation measure (relative error, residual, ...).
  double worst = 0.0;
  double tolerance = 0.0;
  /// Measured but never failing (e.g. triangle defect of the approximation).
  bool informational = false;
  /// First failing instance, or a short summary.
  std::string detail;
};

struct VerifyOptions {
  /// Suites to run; empty means all.
  std::vector<std::string> suites;
  /// Size of generated graphs (upper bound where a suite needs small graphs).
  std::size_t n = 10;
  /// Random instances per suite.
  std::size_t instances = 3;
  std::uint64_t seed = 0;
  /// Test hook: evaluate the approximation with L+e_i + L+e_j instead of
  /// L+e_i - L+e_j so that the approximation suites must fail.
  bool inject_fault = false;
  SolverConfig solver;
};

struct VerifyReport {
  std::vector<PropertyResult> results;
  bool passed() const noexcept;
  /// Failed property names as "suite/property".
  std::vector<std::string> failed() const;
  /// {passed, options, results} as JSON text; `options_json` is embedded verbatim.
  std::string to_json(std::string_view options_json = "{}") const;
};

/// Names accepted in VerifyOptions::suites, in run order.
const std::vector<std::string>& verify_suite_names();

/// Runs the selected invariant suites on generated graphs.
/// Throws Error{InvalidParams} for unknown suites, n < 4 or zero instances.
VerifyReport run_verify(const VerifyOptions& options);

}  // namespace presist
