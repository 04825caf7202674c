#include "presist/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "presist/energy.hpp"
#include "presist/error.hpp"
#include "presist/norms.hpp"

namespace presist {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-20;
// Consecutive steps below rel_energy_tol before giving up. Newton's
// decrease is quadratic in the gradient, so a single flat step is normal
// just before convergence.
constexpr int kStagnationWindow = 20;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Predicted relative decrease below which a sum over thousands of edges can
// no longer certify progress in double precision; also the rounding slack
// allowed there. Such steps are judged by the gradient instead.
constexpr double kResolution = 1e-10;
// A Newton step at most this many ulps long ends the solve (unconverged)
// when the gradient is within kResolutionSlack of the tolerance.
constexpr double kPotentialUlps = 8.0;
constexpr double kResolutionSlack = 100.0;

// Objective phi(d) per unit weight: |d|^p, replaced below `eps` by the
// quadratic (p/2) eps^{p-2} d^2 + (1 - p/2) eps^p when p < 2. Everything is
// evaluated in log space and rescaled by exp(-kappa) so that large p stays
// representable.
class PairProblem {
 public:
  PairProblem(const Graph& g, double p, double eps, Vertex hi, Vertex lo)
      : g_(g), p_(p), eps_(p < 2.0 ? eps : 0.0), free_index_(g.num_vertices(), -1) {
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      if (v == hi || v == lo) continue;
      free_index_[v] = static_cast<Eigen::Index>(free_.size());
      free_.push_back(v);
    }
    log_p_ = std::log(p);
    log_pp1_ = p > 1.0 ? std::log(p * (p - 1.0)) : kNegInf;
    if (eps_ > 0.0) {
      log_eps_ = std::log(eps_);
      quad_coef_ = 0.5 * p * std::pow(eps_, p - 2.0);
      quad_const_ = (1.0 - 0.5 * p) * std::pow(eps_, p);
    }
  }

  Eigen::Index num_free() const { return static_cast<Eigen::Index>(free_.size()); }
  const std::vector<Vertex>& free_vertices() const { return free_; }

  // log of sum_l w_l phi(d_l).
  double log_objective(const Eigen::VectorXd& x) const {
    double top = kNegInf;
    buffer_.clear();
    for (const auto& e : g_.edges()) {
      const double t = std::log(e.w) + log_phi(std::abs(x[idx(e.i)] - x[idx(e.j)]));
      buffer_.push_back(t);
      top = std::max(top, t);
    }
    if (top == kNegInf) return top;
    double sum = 0.0;
    for (double t : buffer_) sum += std::exp(t - top);
    return top + std::log(sum);
  }

  double scaled_objective(const Eigen::VectorXd& x, double kappa) const {
    double sum = 0.0;
    for (const auto& e : g_.edges()) {
      sum += std::exp(std::log(e.w) + log_phi(std::abs(x[idx(e.i)] - x[idx(e.j)])) - kappa);
    }
    return sum;
  }

  // Gradient over free vertices, scaled by exp(-kappa).
  Eigen::VectorXd scaled_gradient(const Eigen::VectorXd& x, double kappa) const {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(num_free());
    for (const auto& e : g_.edges()) {
      const double d = x[idx(e.i)] - x[idx(e.j)];
      if (d == 0.0) continue;
      const double flux = std::copysign(std::exp(std::log(e.w) + log_slope(std::abs(d)) - kappa), d);
      if (const auto a = free_index_[e.i]; a >= 0) grad[a] += flux;
      if (const auto b = free_index_[e.j]; b >= 0) grad[b] -= flux;
    }
    return grad;
  }

  // Hessian over free vertices, scaled by exp(-kappa): a weighted Laplacian
  // with Dirichlet rows removed.
  Eigen::MatrixXd scaled_hessian(const Eigen::VectorXd& x, double kappa) const {
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(num_free(), num_free());
    for (const auto& e : g_.edges()) {
      const double d = std::abs(x[idx(e.i)] - x[idx(e.j)]);
      const double h = std::exp(std::log(e.w) + log_curvature(d) - kappa);
      if (h == 0.0) continue;
      const auto a = free_index_[e.i];
      const auto b = free_index_[e.j];
      if (a >= 0) hess(a, a) += h;
      if (b >= 0) hess(b, b) += h;
      if (a >= 0 && b >= 0) {
        hess(a, b) -= h;
        hess(b, a) -= h;
      }
    }
    return hess;
  }

  void scatter(Eigen::VectorXd& x, const Eigen::VectorXd& free_values) const {
    for (Eigen::Index k = 0; k < num_free(); ++k) x[idx(free_[static_cast<std::size_t>(k)])] = free_values[k];
  }

  Eigen::VectorXd gather(const Eigen::VectorXd& x) const {
    Eigen::VectorXd out(num_free());
    for (Eigen::Index k = 0; k < num_free(); ++k) out[k] = x[idx(free_[static_cast<std::size_t>(k)])];
    return out;
  }

 private:
  static Eigen::Index idx(Vertex v) { return static_cast<Eigen::Index>(v); }

  double log_phi(double ad) const {
    if (ad >= eps_) return ad == 0.0 ? kNegInf : p_ * std::log(ad);
    return std::log(quad_coef_ * ad * ad + quad_const_);
  }

  // log of phi'(|d|): the edge flux magnitude per unit weight.
  double log_slope(double ad) const {
    if (ad >= eps_) return log_p_ + (p_ - 1.0) * std::log(ad);
    return log_p_ + (p_ - 2.0) * log_eps_ + std::log(ad);
  }

  double log_curvature(double ad) const {
    if (ad >= eps_) {
      if (p_ == 2.0) return log_pp1_;
      return ad == 0.0 ? (p_ > 2.0 ? kNegInf : std::numeric_limits<double>::infinity())
                       : log_pp1_ + (p_ - 2.0) * std::log(ad);
    }
    return log_p_ + (p_ - 2.0) * log_eps_;
  }

  const Graph& g_;
  double p_;
  double eps_;
  double log_p_ = 0.0;
  double log_pp1_ = 0.0;
  double log_eps_ = 0.0;
  double quad_coef_ = 0.0;
  double quad_const_ = 0.0;
  std::vector<Eigen::Index> free_index_;
  std::vector<Vertex> free_;
  mutable std::vector<double> buffer_;
};

// Harmonic (p = 2) potentials with x_hi = 1, x_lo = 0.
Eigen::VectorXd harmonic_start(const Graph& g, const PairProblem& problem, Vertex hi) {
  const auto nf = problem.num_free();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.num_vertices()));
  x[static_cast<Eigen::Index>(hi)] = 1.0;
  if (nf == 0) return x;
  std::vector<Eigen::Index> pos(g.num_vertices(), -1);
  for (Eigen::Index k = 0; k < nf; ++k) pos[problem.free_vertices()[static_cast<std::size_t>(k)]] = k;
  Eigen::MatrixXd lff = Eigen::MatrixXd::Zero(nf, nf);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
  for (const auto& e : g.edges()) {
    const auto a = pos[e.i];
    const auto b = pos[e.j];
    if (a >= 0) lff(a, a) += e.w;
    if (b >= 0) lff(b, b) += e.w;
    if (a >= 0 && b >= 0) {
      lff(a, b) -= e.w;
      lff(b, a) -= e.w;
    } else if (a >= 0 && e.j == hi) {
      rhs[a] += e.w;
    } else if (b >= 0 && e.i == hi) {
      rhs[b] += e.w;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(lff);
  if (llt.info() != Eigen::Success) return x;
  problem.scatter(x, llt.solve(rhs));
  return x;
}

}  // namespace

void SolverConfig::validate() const {
  std::ostringstream msg;
  if (!(grad_tol > 0.0)) msg << "grad_tol must be positive; ";
  if (!(rel_energy_tol > 0.0)) msg << "rel_energy_tol must be positive; ";
  if (!(smoothing_eps > 0.0)) msg << "smoothing_eps must be positive; ";
  if (max_iter < 1) msg << "max_iter must be at least 1; ";
  if (!msg.str().empty()) throw Error(ErrorKind::InvalidParams, msg.str());
}

SolverReport ssl_solve(const Graph& g, double p, Vertex i, Vertex j, const SolverConfig& cfg) {
  require_p_above_one(p);
  cfg.validate();
  const auto n = g.num_vertices();
  if (i >= n || j >= n || i == j) {
    std::ostringstream msg;
    msg << "pair (" << i << ", " << j << ") must be two distinct vertices below " << n;
    throw Error(ErrorKind::InvalidParams, msg.str());
  }

  PairProblem problem(g, p, cfg.smoothing_eps, i, j);
  Eigen::VectorXd x;
  if (cfg.init == SolverInit::P2Warmstart) {
    x = harmonic_start(g, problem, i);
  } else {
    x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    x[static_cast<Eigen::Index>(i)] = 1.0;
  }

  SolverReport report;
  Eigen::VectorXd free_x = problem.gather(x);
  Eigen::VectorXd prev_step;
  Eigen::VectorXd prev_grad;
  int flat_steps = 0;
  double kappa = problem.log_objective(x);

  while (true) {
    const Eigen::VectorXd grad = problem.scaled_gradient(x, kappa);
    report.final_grad_norm = grad.size() ? grad.cwiseAbs().maxCoeff() / p : 0.0;
    if (report.final_grad_norm <= cfg.grad_tol) {
      report.converged = true;
      report.stop_reason = "gradient";
      break;
    }
    if (flat_steps >= kStagnationWindow) {
      report.stop_reason = "stagnation";
      break;
    }
    if (report.iterations >= cfg.max_iter) {
      report.stop_reason = "max_iter";
      break;
    }

    Eigen::VectorXd dir;
    if (cfg.method == SolverMethod::Newton) {
      Eigen::MatrixXd hess = problem.scaled_hessian(x, kappa);
      // Symmetric Jacobi scaling so that vertices with a tiny Hessian
      // diagonal (weak edges, or flat neighbourhoods at p > 2) still move.
      const double floor = 1e-300 + 1e-14 * hess.diagonal().maxCoeff();
      const Eigen::VectorXd scale = hess.diagonal().cwiseMax(floor).cwiseSqrt().cwiseInverse();
      hess = scale.asDiagonal() * hess * scale.asDiagonal();
      hess.diagonal().array() += 1e-12;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
      if (ldlt.info() == Eigen::Success) dir = scale.cwiseProduct(ldlt.solve(-scale.cwiseProduct(grad)));
      if (dir.size() == 0 || !dir.allFinite() || dir.dot(grad) >= 0.0) {
        dir = -grad;
      } else if (dir.cwiseAbs().maxCoeff() <= kPotentialUlps * std::numeric_limits<double>::epsilon() &&
                 report.final_grad_norm <= kResolutionSlack * cfg.grad_tol) {
        // Potentials lie in [0, 1]; a Newton step of a few ulps cannot be
        // represented, so the residual gradient is rounding on stiff edges.
        report.stop_reason = "resolution";
        break;
      }
    } else {
      double step = 1.0 / std::max(grad.cwiseAbs().maxCoeff(), 1e-300);
      if (prev_step.size() > 0) {
        const Eigen::VectorXd dg = grad - prev_grad;
        const double sy = prev_step.dot(dg);
        if (sy > 0.0) step = prev_step.squaredNorm() / sy;
      }
      dir = -step * grad;
    }

    // Armijo backtracking in units of the current energy, so f(x) = 1.
    const double slope = grad.dot(dir);
    double t = 1.0;
    double f_new = 0.0;
    Eigen::VectorXd trial = x;
    while (true) {
      problem.scatter(trial, free_x + t * dir);
      f_new = problem.scaled_objective(trial, kappa);
      if (f_new <= 1.0 + kArmijo * t * slope) break;
      if (t == 1.0 && -slope < kResolution && f_new <= 1.0 + kResolution) {
        // Below energy resolution: take the full step if it shrinks the gradient.
        const Eigen::VectorXd trial_grad = problem.scaled_gradient(trial, kappa);
        if (trial_grad.cwiseAbs().maxCoeff() < grad.cwiseAbs().maxCoeff()) break;
      }
      t *= 0.5;
      if (t < kMinStep) break;
    }
    if (t < kMinStep) {
      report.stop_reason = "line_search";
      break;
    }
    if (t == 1.0) {
      // Expand while the objective keeps dropping by more than rounding;
      // helps where the energy is flat to high order (large p).
      Eigen::VectorXd wider = trial;
      for (int k = 0; k < 30; ++k) {
        problem.scatter(wider, free_x + 2.0 * t * dir);
        const double f_wide = problem.scaled_objective(wider, kappa);
        if (!(f_wide < f_new - 1e-14) || f_wide > 1.0 + kArmijo * 2.0 * t * slope) break;
        t *= 2.0;
        f_new = f_wide;
        trial = wider;
      }
    }
    if (p < 2.0) {
      // A full Newton step maps an edge difference d of |d|^p to
      // d (p-2)/(p-1), past zero for p < 2, so shorten while that pays off.
      Eigen::VectorXd shorter = trial;
      for (int k = 0; k < 30; ++k) {
        problem.scatter(shorter, free_x + 0.5 * t * dir);
        const double f_short = problem.scaled_objective(shorter, kappa);
        if (!(f_short < f_new - 1e-14)) break;
        t *= 0.5;
        f_new = f_short;
        trial = shorter;
      }
    }

    const Eigen::VectorXd new_free = free_x + t * dir;
    prev_step = new_free - free_x;
    prev_grad = grad;
    free_x = new_free;
    x = trial;
    ++report.iterations;
    flat_steps = (1.0 - f_new) < cfg.rel_energy_tol ? flat_steps + 1 : 0;
    kappa = problem.log_objective(x);
    if (cfg.record_trace) report.energy_trace.push_back(std::exp(kappa));
  }

  report.potentials = std::move(x);
  report.log_energy = log_p_energy(g, report.potentials, p);
  report.energy = std::exp(report.log_energy);
  return report;
}

ExactResult exact_presistance(const Graph& g, const PairQuery& q, const SolverConfig& cfg) {
  ExactResult out;
  out.report = ssl_solve(g, q.p, q.i, q.j, cfg);
  out.resistance = std::exp(-out.report.log_energy);
  out.metric = std::exp(-out.report.log_energy / (q.p - 1.0));
  return out;
}

}  // namespace presist
