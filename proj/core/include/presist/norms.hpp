#pragma once

#include <limits>

#include <Eigen/Dense>

#include "presist/graph.hpp"

namespace presist {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Conjugate exponent p/(p-1). Throws Error{InvalidP} unless p > 1 + 1e-9.
double conjugate_exponent(double p);

/// Throws Error{InvalidP} unless p > 1 + 1e-9 and finite.
void require_p_above_one(double p);

/// (sum_i w_i |x_i|^p)^(1/p) for p >= 1; max_i |x_i| for p = infinity.
///
/// Evaluated with max-abs scaling so large p neither overflows nor
/// underflows. Throws Error{DimensionMismatch} or Error{InvalidP}.
double weighted_p_norm(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& w,
                       double p);

/// Unweighted p-norm with the same conventions.
double p_norm(const Eigen::Ref<const Eigen::VectorXd>& x, double p);

/// ||Cx||_{w,p} = (sum over edges w_l |x_i - x_j|^p)^(1/p).
double graph_p_seminorm(const Graph& g, const Eigen::Ref<const Eigen::VectorXd>& x, double p);

/// sum over edges w_l |x_i - x_j|^p (the p-energy, seminorm to the p).
double graph_p_energy(const Graph& g, const Eigen::Ref<const Eigen::VectorXd>& x, double p);

/// <x, y>_L = x^T L y evaluated edge-wise.
double laplacian_inner(const Graph& g, const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Eigen::Ref<const Eigen::VectorXd>& y);

}  // namespace presist
