#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "presist/graph.hpp"

namespace presist {

struct PairQuery {
  Vertex i = 0;
  Vertex j = 1;
  double p = 2.0;
};

enum class SolverInit { P2Warmstart, Zeros };

enum class SolverMethod {
  /// Damped Newton steps (the Hessian is a weighted Laplacian) with Armijo
  /// backtracking.
  Newton,
  /// Steepest descent with Armijo backtracking and Barzilai-Borwein step
  /// proposals.
  GradientDescent,
};

struct SolverConfig {
  /// Stop when ||grad||_inf <= grad_tol * p * S(x), i.e. the gradient
  /// measured relative to the energy scale.
  double grad_tol = 1e-8;
  /// Stop (unconverged) after 20 consecutive steps that each lower the
  /// energy by less than this fraction.
  double rel_energy_tol = 1e-12;
  std::size_t max_iter = 100000;
  /// Huber radius for p < 2: edge differences below it use a quadratic
  /// with matching value and slope.
  double smoothing_eps = 1e-8;
  SolverInit init = SolverInit::P2Warmstart;
  SolverMethod method = SolverMethod::Newton;
  /// Keep the objective after every iteration in SolverReport::energy_trace.
  bool record_trace = false;

  /// Throws Error{InvalidParams}.
  void validate() const;
};

struct SolverReport {
  /// Unsmoothed S(x*) at the returned potentials.
  double energy = 0.0;
  /// log S(x*); finite even when `energy` underflows at large p.
  double log_energy = 0.0;
  std::size_t iterations = 0;
  /// Relative gradient ||grad||_inf / (p S) at the returned point.
  double final_grad_norm = 0.0;
  bool converged = false;
  /// Why the iteration ended: "gradient" (converged), "resolution" (the
  /// Newton step is below double resolution with the gradient within 100x
  /// of the tolerance), "stagnation", "line_search" or "max_iter".
  std::string stop_reason;
  /// x*, with x_i = 1 and x_j = 0.
  Eigen::VectorXd potentials;
  /// Objective (smoothed for p < 2) after each iteration, when requested.
  std::vector<double> energy_trace;
};

struct ExactResult {
  /// 1 / S(x*). May overflow to infinity for huge p; prefer `metric`.
  double resistance = 0.0;
  /// resistance^{1/(p-1)}, computed from the log energy.
  double metric = 0.0;
  SolverReport report;
};

/// Minimises S(x) subject to x_i = 1, x_j = 0 over the remaining vertices.
///
/// Does not throw on non-convergence: the best point found is returned
/// with converged = false. Throws Error{InvalidP} for p <= 1 and
/// Error{InvalidParams} for bad vertices or config.
SolverReport ssl_solve(const Graph& g, double p, Vertex i, Vertex j, const SolverConfig& cfg = {});

/// Exact p-resistance 1 / min S(x) with x_i - x_j = 1.
ExactResult exact_presistance(const Graph& g, const PairQuery& q, const SolverConfig& cfg = {});

}  // namespace presist
