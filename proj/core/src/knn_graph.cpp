#include "presist/knn_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "presist/error.hpp"

namespace presist {

namespace {

constexpr double kWeightFloor = 1e-300;

}  // namespace

std::string_view to_string(Symmetrization s) noexcept { return s == Symmetrization::Union ? "union" : "mutual"; }

std::string_view to_string(OnDisconnect d) noexcept {
  return d == OnDisconnect::Fail ? "fail" : "largest_component";
}

std::optional<Symmetrization> parse_symmetrization(std::string_view name) noexcept {
  if (name == "union") return Symmetrization::Union;
  if (name == "mutual") return Symmetrization::Mutual;
  return std::nullopt;
}

std::optional<OnDisconnect> parse_on_disconnect(std::string_view name) noexcept {
  if (name == "fail") return OnDisconnect::Fail;
  if (name == "largest_component") return OnDisconnect::LargestComponent;
  return std::nullopt;
}

std::size_t GraphBuildParams::neighbours(std::size_t n) const {
  const auto k = static_cast<std::size_t>(std::floor(mu * static_cast<double>(n)));
  return std::min(k, n > 0 ? n - 1 : 0);
}

void GraphBuildParams::validate(std::size_t n) const {
  std::ostringstream msg;
  if (!(mu > 0.0 && mu <= 1.0)) msg << "mu must be in (0, 1], got " << mu << "; ";
  if (!(sigma > 0.0) || !std::isfinite(sigma)) msg << "sigma must be positive, got " << sigma << "; ";
  if (n < 2) msg << "need at least 2 points, got " << n << "; ";
  if (msg.str().empty() && neighbours(n) < 1) msg << "floor(mu * n) = 0 neighbours for mu = " << mu << ", n = " << n;
  if (!msg.str().empty()) throw Error(ErrorKind::InvalidParams, msg.str());
}

KnnGraph knn_gaussian_graph(const FeatureDataset& ds, const GraphBuildParams& params) {
  const std::size_t n = ds.size();
  params.validate(n);
  const std::size_t k = params.neighbours(n);

  Eigen::MatrixXd sq(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index a = 0; a < sq.rows(); ++a) {
    for (Eigen::Index b = 0; b <= a; ++b) {
      const double d2 = (ds.x.row(a) - ds.x.row(b)).squaredNorm();
      sq(a, b) = d2;
      sq(b, a) = d2;
    }
  }

  std::vector<std::vector<bool>> chosen(n, std::vector<bool>(n, false));
  std::vector<std::size_t> order;
  for (std::size_t a = 0; a < n; ++a) {
    order.resize(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    order.erase(order.begin() + static_cast<std::ptrdiff_t>(a));
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](std::size_t u, std::size_t v) {
                        const double du = sq(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(u));
                        const double dv = sq(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(v));
                        return du < dv || (du == dv && u < v);
                      });
    for (std::size_t r = 0; r < k; ++r) chosen[a][order[r]] = true;
  }

  std::size_t underflow = 0;
  std::vector<Edge> edges;
  for (std::size_t a = 1; a < n; ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      const bool linked = params.symmetrization == Symmetrization::Union ? (chosen[a][b] || chosen[b][a])
                                                                         : (chosen[a][b] && chosen[b][a]);
      if (!linked) continue;
      const double w = std::exp(-params.sigma * sq(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
      if (w <= kWeightFloor) {
        ++underflow;
        continue;
      }
      edges.push_back({a, b, w});
    }
  }
  if (edges.empty()) {
    throw Error(ErrorKind::DegenerateKernel, "every k-NN edge weight is below 1e-300; decrease sigma");
  }
  BuildOptions opts;
  opts.largest_component = params.on_disconnect == OnDisconnect::LargestComponent;
  auto restricted = build_graph_restricted(n, std::move(edges), opts);
  return KnnGraph{std::move(restricted.graph), std::move(restricted.kept), k, underflow};
}

}  // namespace presist
