#include "presist/alpha.hpp"

#include <cmath>

#include "presist/laplacian_pinv.hpp"
#include "presist/norms.hpp"

namespace presist {

Eigen::MatrixXd incidence_pinv(const Graph& g) {
  const auto c = incidence(g);
  return laplacian_pinv(g).matrix() * c.transpose() * g.weights().asDiagonal();
}

Eigen::MatrixXd edge_projector(const Graph& g) { return incidence(g) * incidence_pinv(g); }

Eigen::MatrixXd weighted_edge_projector(const Graph& g, double p) {
  const Eigen::VectorXd w = g.weights();
  const Eigen::VectorXd left = w.array().pow(1.0 / p);
  return left.asDiagonal() * edge_projector(g) * left.cwiseInverse().asDiagonal();
}

AlphaBound alpha_gp(const Graph& g, double p, const EstimatorSettings& settings) {
  require_p_above_one(p);
  AlphaBound out;
  out.graph = g.fingerprint();
  out.p = p;

  const auto projector = edge_projector(g);
  out.cc_pinv_one_norm = g.is_unweighted() ? matrix_one_norm(projector) : matrix_one_norm(edge_projector(g.unweighted()));

  const Eigen::VectorXd w = g.weights();
  const Eigen::VectorXd left = w.array().pow(1.0 / p);
  const Eigen::MatrixXd m = left.asDiagonal() * projector * left.cwiseInverse().asDiagonal();
  out.estimate = matrix_op_pnorm(m, p, settings);
  out.alpha_estimate = out.estimate.value;
  out.worst_case = std::pow(static_cast<double>(g.num_edges()), std::abs(0.5 - 1.0 / p));
  out.ceiling = std::pow(matrix_one_norm(m), 1.0 / p) * std::pow(matrix_inf_norm(m), 1.0 - 1.0 / p);
  return out;
}

}  // namespace presist
