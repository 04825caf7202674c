#include "presist/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "presist/error.hpp"
#include "presist/norms.hpp"

namespace presist {

double p_energy(const Graph& g, const Eigen::Ref<const Eigen::VectorXd>& x, double p) {
  return graph_p_energy(g, x, p);
}

double log_p_energy(const Graph& g, const Eigen::Ref<const Eigen::VectorXd>& x, double p) {
  if (static_cast<std::size_t>(x.size()) != g.num_vertices()) {
    throw Error(ErrorKind::DimensionMismatch, "potential vector does not match the vertex count");
  }
  std::vector<double> terms;
  terms.reserve(g.num_edges());
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& e : g.edges()) {
    const double d = std::abs(x[static_cast<Eigen::Index>(e.i)] - x[static_cast<Eigen::Index>(e.j)]);
    if (d == 0.0) continue;
    terms.push_back(std::log(e.w) + p * std::log(d));
    top = std::max(top, terms.back());
  }
  if (terms.empty()) return top;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - top);
  return top + std::log(sum);
}

Eigen::VectorXd p_laplacian(const Graph& g, const Eigen::Ref<const Eigen::VectorXd>& x, double p) {
  if (static_cast<std::size_t>(x.size()) != g.num_vertices()) {
    throw Error(ErrorKind::DimensionMismatch, "potential vector does not match the vertex count");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
  for (const auto& e : g.edges()) {
    const auto i = static_cast<Eigen::Index>(e.i);
    const auto j = static_cast<Eigen::Index>(e.j);
    const double d = x[i] - x[j];
    if (d == 0.0) continue;
    const double flux = e.w * std::copysign(std::pow(std::abs(d), p - 1.0), d);
    out[i] += flux;
    out[j] -= flux;
  }
  return out;
}

Eigen::VectorXd p_energy_gradient(const Graph& g, const Eigen::Ref<const Eigen::VectorXd>& x, double p) {
  return p * p_laplacian(g, x, p);
}

}  // namespace presist
