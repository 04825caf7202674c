#pragma once

#include <Eigen/Dense>

#include "presist/graph.hpp"

namespace presist {

/// S(x) = sum over edges w_l |x_i - x_j|^p.
double p_energy(const Graph& g, const Eigen::Ref<const Eigen::VectorXd>& x, double p);

/// log S(x), evaluated term-wise in log space so that large p neither
/// underflows nor overflows. Returns -infinity for constant x.
double log_p_energy(const Graph& g, const Eigen::Ref<const Eigen::VectorXd>& x, double p);

/// (Delta_p x)_i = sum_j w_ij |x_i - x_j|^{p-2} (x_i - x_j).
Eigen::VectorXd p_laplacian(const Graph& g, const Eigen::Ref<const Eigen::VectorXd>& x, double p);

/// dS/dx = p Delta_p x.
Eigen::VectorXd p_energy_gradient(const Graph& g, const Eigen::Ref<const Eigen::VectorXd>& x, double p);

}  // namespace presist
