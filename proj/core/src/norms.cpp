#include "presist/norms.hpp"

#include <cmath>
#include <sstream>

#include "presist/error.hpp"

namespace presist {

namespace {

void require_norm_exponent(double p) {
  if (!(p >= 1.0)) {
    std::ostringstream msg;
    msg << "norm exponent must be >= 1 or infinity, got " << p;
    throw Error(ErrorKind::InvalidP, msg.str());
  }
}

void require_vertex_vector(const Graph& g, Eigen::Index size) {
  if (static_cast<std::size_t>(size) != g.num_vertices()) {
    std::ostringstream msg;
    msg << "vector has " << size << " entries, graph has " << g.num_vertices() << " vertices";
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
}

}  // namespace

void require_p_above_one(double p) {
  if (!(p > 1.0 + 1e-9) || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << "p must be finite and exceed 1, got " << p;
    throw Error(ErrorKind::InvalidP, msg.str());
  }
}

double conjugate_exponent(double p) {
  require_p_above_one(p);
  return p / (p - 1.0);
}

double weighted_p_norm(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& w,
                       double p) {
  if (x.size() != w.size()) {
    std::ostringstream msg;
    msg << "vector has " << x.size() << " entries but " << w.size() << " weights";
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  require_norm_exponent(p);
  if (x.size() == 0) return 0.0;
  const double scale = x.cwiseAbs().maxCoeff();
  if (std::isinf(p)) return scale;
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) sum += w[k] * std::pow(std::abs(x[k]) / scale, p);
  return scale * std::pow(sum, 1.0 / p);
}

double p_norm(const Eigen::Ref<const Eigen::VectorXd>& x, double p) {
  return weighted_p_norm(x, Eigen::VectorXd::Ones(x.size()), p);
}

double graph_p_seminorm(const Graph& g, const Eigen::Ref<const Eigen::VectorXd>& x, double p) {
  require_vertex_vector(g, x.size());
  Eigen::VectorXd diff(static_cast<Eigen::Index>(g.num_edges()));
  for (std::size_t l = 0; l < g.num_edges(); ++l) {
    const auto& e = g.edge(l);
    diff[static_cast<Eigen::Index>(l)] = x[static_cast<Eigen::Index>(e.i)] - x[static_cast<Eigen::Index>(e.j)];
  }
  return weighted_p_norm(diff, g.weights(), p);
}

double graph_p_energy(const Graph& g, const Eigen::Ref<const Eigen::VectorXd>& x, double p) {
  require_vertex_vector(g, x.size());
  require_norm_exponent(p);
  double sum = 0.0;
  for (const auto& e : g.edges()) {
    sum += e.w * std::pow(std::abs(x[static_cast<Eigen::Index>(e.i)] - x[static_cast<Eigen::Index>(e.j)]), p);
  }
  return sum;
}

double laplacian_inner(const Graph& g, const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Eigen::Ref<const Eigen::VectorXd>& y) {
  require_vertex_vector(g, x.size());
  require_vertex_vector(g, y.size());
  double sum = 0.0;
  for (const auto& e : g.edges()) {
    const auto i = static_cast<Eigen::Index>(e.i);
    const auto j = static_cast<Eigen::Index>(e.j);
    sum += e.w * (x[i] - x[j]) * (y[i] - y[j]);
  }
  return sum;
}

}  // namespace presist
