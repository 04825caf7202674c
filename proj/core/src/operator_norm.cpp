#include "presist/operator_norm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "presist/error.hpp"
#include "presist/norms.hpp"

namespace presist {

namespace {

// Up to this many columns every unit vector is also tried as a start.
constexpr Eigen::Index kBasisStartLimit = 256;

// sign(y) |y|^{p-1} / ||y||_p^{p-1}: the unit q-norm vector attaining the
// dual pairing <dual(y), y> = ||y||_p.
Eigen::VectorXd dual_vector(const Eigen::VectorXd& y, double p) {
  const double norm = p_norm(y, p);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(y.size());
  if (norm == 0.0) return out;
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    const double a = std::abs(y[k]) / norm;
    if (a > 0.0) out[k] = std::copysign(std::pow(a, p - 1.0), y[k]);
  }
  return out;
}

struct PowerRun {
  double value = 0.0;
  std::size_t iterations = 0;
};

PowerRun power_iteration(const Eigen::Ref<const Eigen::MatrixXd>& m, Eigen::VectorXd x, double p, double q,
                         std::size_t max_iter) {
  PowerRun run;
  const double xn = p_norm(x, p);
  if (xn == 0.0) return run;
  x /= xn;
  for (std::size_t it = 0; it < max_iter; ++it) {
    ++run.iterations;
    const Eigen::VectorXd y = m * x;
    run.value = std::max(run.value, p_norm(y, p));
    const Eigen::VectorXd z = m.transpose() * dual_vector(y, p);
    const double zq = p_norm(z, q);
    if (zq == 0.0 || zq <= z.dot(x) * (1.0 + 1e-14)) break;
    x = dual_vector(z, q);
  }
  return run;
}

// Builds a start vector one column at a time, choosing each new entry's
// share of a unit p-norm budget (over a grid of angles) to maximise
// ||M x||_p / ||x||_p.
Eigen::VectorXd column_sweep_start(const Eigen::Ref<const Eigen::MatrixXd>& m, double p) {
  constexpr int kAngles = 36;
  const double pi = std::acos(-1.0);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m.cols());
  x[0] = 1.0;
  Eigen::VectorXd y = m.col(0);
  double xp = 1.0;  // ||x||_p^p
  for (Eigen::Index k = 1; k < m.cols(); ++k) {
    double best = -1.0, best_c = 1.0, best_s = 0.0;
    for (int a = 0; a < kAngles; ++a) {
      const double theta = pi * a / kAngles;
      const double c = std::cos(theta), s = std::sin(theta);
      const double denom = std::pow(std::abs(c), p) * xp + std::pow(std::abs(s), p);
      const double value = p_norm(c * y + s * m.col(k), p) / std::pow(denom, 1.0 / p);
      if (value > best) {
        best = value;
        best_c = c;
        best_s = s;
      }
    }
    x.head(k) *= best_c;
    x[k] = best_s;
    y = best_c * y + best_s * m.col(k);
    xp = std::pow(std::abs(best_c), p) * xp + std::pow(std::abs(best_s), p);
  }
  return x;
}

}  // namespace

double matrix_one_norm(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

double matrix_inf_norm(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

PNormEstimate matrix_op_pnorm(const Eigen::Ref<const Eigen::MatrixXd>& m, double p,
                              const EstimatorSettings& settings) {
  if (!m.allFinite()) throw Error(ErrorKind::NonFinite, "matrix contains NaN or Inf");
  if (!(p >= 1.0)) {
    std::ostringstream msg;
    msg << "operator norm needs p >= 1 or infinity, got " << p;
    throw Error(ErrorKind::InvalidP, msg.str());
  }
  PNormEstimate est;
  est.p = p;
  if (p == 1.0) {
    est.value = matrix_one_norm(m);
    est.exact = true;
    return est;
  }
  if (std::isinf(p)) {
    est.value = matrix_inf_norm(m);
    est.exact = true;
    return est;
  }
  if (m.size() == 0) return est;

  const double q = p / (p - 1.0);
  auto run = power_iteration(m, Eigen::VectorXd::Ones(m.cols()), p, q, settings.max_iter);
  est.value = run.value;
  est.iterations = run.iterations;
  run = power_iteration(m, column_sweep_start(m, p), p, q, settings.max_iter);
  est.value = std::max(est.value, run.value);
  est.iterations += run.iterations;
  if (m.cols() <= kBasisStartLimit) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      run = power_iteration(m, Eigen::VectorXd::Unit(m.cols(), k), p, q, settings.max_iter);
      est.value = std::max(est.value, run.value);
      est.iterations += run.iterations;
    }
  }
  for (std::size_t r = 0; r < settings.restarts; ++r) {
    std::mt19937_64 rng(settings.seed ^ (0x9e3779b97f4a7c15ULL * (r + 1)));
    std::normal_distribution<double> normal;
    Eigen::VectorXd x(m.cols());
    for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = normal(rng);
    run = power_iteration(m, std::move(x), p, q, settings.max_iter);
    est.value = std::max(est.value, run.value);
    est.iterations += run.iterations;
    ++est.restarts;
  }
  return est;
}

}  // namespace presist
