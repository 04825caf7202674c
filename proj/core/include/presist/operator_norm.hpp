#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

namespace presist {

struct EstimatorSettings {
  /// Random starting vectors in addition to the deterministic ones.
  std::size_t restarts = 5;
  std::size_t max_iter = 100;
  std::uint64_t seed = 0;
};

struct PNormEstimate {
  double value = 0.0;
  double p = 2.0;
  std::size_t restarts = 0;
  /// Total power iterations across all starts.
  std::size_t iterations = 0;
  /// True for p = 1 and p = infinity, where the closed form is used.
  bool exact = false;
};

/// Maximum absolute column sum.
double matrix_one_norm(const Eigen::Ref<const Eigen::MatrixXd>& m);
/// Maximum absolute row sum.
double matrix_inf_norm(const Eigen::Ref<const Eigen::MatrixXd>& m);

/// Operator p-norm of a dense matrix.
///
/// p = 1 and p = infinity are exact. Otherwise a dual-norm power iteration
/// is run from the ones vector, a deterministic column sweep, every unit
/// vector (up to 256 columns) and `settings.restarts` seeded random
/// vectors; every iterate satisfies ||x||_p = 1, so the returned maximum is
/// a lower bound on the true norm. Random start r depends only on
/// (seed, r), so raising `restarts` never lowers the estimate.
/// Throws Error{NonFinite} or Error{InvalidP}.
PNormEstimate matrix_op_pnorm(const Eigen::Ref<const Eigen::MatrixXd>& m, double p,
                              const EstimatorSettings& settings = {});

}  // namespace presist
