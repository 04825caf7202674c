#include "presist/approx.hpp"

#include <cmath>
#include <sstream>

#include "presist/error.hpp"
#include "presist/norms.hpp"

namespace presist {

namespace {

void check_inputs(const LaplacianPinv& pinv, const Graph& g, const PairQuery& q) {
  if (!(pinv.fingerprint() == g.fingerprint())) {
    throw Error(ErrorKind::FingerprintMismatch, "pseudoinverse was computed for a different graph");
  }
  require_p_above_one(q.p);
  if (q.i >= g.num_vertices() || q.j >= g.num_vertices()) {
    std::ostringstream msg;
    msg << "pair (" << q.i << ", " << q.j << ") out of range for " << g.num_vertices() << " vertices";
    throw Error(ErrorKind::InvalidParams, msg.str());
  }
}

}  // namespace

double approx_seminorm(const LaplacianPinv& pinv, const Graph& g, const PairQuery& q) {
  check_inputs(pinv, g, q);
  if (q.i == q.j) return 0.0;
  const auto& lp = pinv.matrix();
  const auto i = static_cast<Eigen::Index>(q.i);
  const auto j = static_cast<Eigen::Index>(q.j);
  Eigen::VectorXd diff(static_cast<Eigen::Index>(g.num_edges()));
  for (std::size_t l = 0; l < g.num_edges(); ++l) {
    const auto a = static_cast<Eigen::Index>(g.edge(l).i);
    const auto b = static_cast<Eigen::Index>(g.edge(l).j);
    diff[static_cast<Eigen::Index>(l)] = (lp(a, i) - lp(a, j)) - (lp(b, i) - lp(b, j));
  }
  return weighted_p_norm(diff, g.weights(), conjugate_exponent(q.p));
}

double approx_presistance(const LaplacianPinv& pinv, const Graph& g, const PairQuery& q) {
  const double norm = approx_seminorm(pinv, g, q);
  return norm == 0.0 ? 0.0 : std::exp(q.p * std::log(norm));
}

double approx_metric(const LaplacianPinv& pinv, const Graph& g, const PairQuery& q) {
  const double norm = approx_seminorm(pinv, g, q);
  return norm == 0.0 ? 0.0 : std::exp(conjugate_exponent(q.p) * std::log(norm));
}

}  // namespace presist
