#pragma once

#include <Eigen/Dense>

#include "presist/graph.hpp"
#include "presist/operator_norm.hpp"

namespace presist {

/// Looseness factor of the pseudoinverse approximation for one (graph, p).
struct AlphaBound {
  GraphFingerprint graph;
  double p = 2.0;
  /// Lower estimate of |||W^{1/p} C C+ W^{-1/p}|||_p.
  double alpha_estimate = 1.0;
  PNormEstimate estimate;
  /// m^{|1/2 - 1/p|}, the worst-case bound on alpha.
  double worst_case = 1.0;
  /// Riesz-Thorin interpolation |||M|||_1^{1/p} |||M|||_inf^{1-1/p}, a
  /// guaranteed upper bound on alpha for any weights.
  double ceiling = 1.0;
  /// |||C C+|||_1 of the unweighted edge projector (exact).
  double cc_pinv_one_norm = 1.0;

  bool within_worst_case(double slack = 1e-9) const noexcept { return alpha_estimate <= worst_case + slack; }
};

/// Pseudoinverse of the incidence matrix in the W-weighted edge inner
/// product, n x m, computed as L+ C^T W. Reduces to the Moore-Penrose
/// pseudoinverse on unweighted graphs.
Eigen::MatrixXd incidence_pinv(const Graph& g);

/// C C+, the W-orthogonal projector onto the range of C (m x m).
Eigen::MatrixXd edge_projector(const Graph& g);

/// W^{1/p} C C+ W^{-1/p}.
Eigen::MatrixXd weighted_edge_projector(const Graph& g, double p);

/// Throws Error{InvalidP} for p <= 1; estimator errors propagate.
AlphaBound alpha_gp(const Graph& g, double p, const EstimatorSettings& settings = {});

}  // namespace presist
