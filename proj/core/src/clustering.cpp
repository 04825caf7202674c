#include "presist/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "presist/error.hpp"

namespace presist {

namespace {

constexpr double kImprovement = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_k(std::size_t k, std::size_t n, std::size_t min_k) {
  if (k < min_k || k > n) {
    std::ostringstream msg;
    msg << "k must be in [" << min_k << ", " << n << "], got " << k;
    throw Error(ErrorKind::InvalidK, msg.str());
  }
}

class Pam {
 public:
  Pam(const Eigen::MatrixXd& d, std::size_t k) : d_(d), n_(static_cast<std::size_t>(d.rows())), k_(k) {}

  std::vector<Vertex> build() const {
    std::vector<Vertex> medoids;
    std::vector<double> nearest(n_, kInf);
    for (std::size_t round = 0; round < k_; ++round) {
      Vertex best = 0;
      double best_gain = -kInf;
      for (Vertex c = 0; c < n_; ++c) {
        if (std::find(medoids.begin(), medoids.end(), c) != medoids.end()) continue;
        double gain = 0.0;
        for (Vertex j = 0; j < n_; ++j) {
          const double dj = dist(j, c);
          gain += round == 0 ? -dj : std::max(0.0, nearest[j] - dj);
        }
        if (gain > best_gain) {
          best_gain = gain;
          best = c;
        }
      }
      medoids.push_back(best);
      for (Vertex j = 0; j < n_; ++j) nearest[j] = std::min(nearest[j], dist(j, best));
    }
    return medoids;
  }

  std::vector<Vertex> random_init(std::mt19937_64& rng) const {
    std::vector<Vertex> all(n_);
    std::iota(all.begin(), all.end(), Vertex{0});
    for (std::size_t a = 0; a < k_; ++a) {
      std::uniform_int_distribution<std::size_t> pick(a, n_ - 1);
      std::swap(all[a], all[pick(rng)]);
    }
    all.resize(k_);
    return all;
  }

  // Best-improvement SWAP until no strict improvement. Returns passes.
  std::size_t swap(std::vector<Vertex>& medoids, std::size_t max_swaps, std::vector<double>& history) {
    refresh(medoids);
    history.push_back(objective());
    std::size_t passes = 0;
    while (passes < max_swaps) {
      double best_delta = -kImprovement;
      std::size_t best_slot = k_;
      Vertex best_h = 0;
      for (std::size_t slot = 0; slot < k_; ++slot) {
        for (Vertex h = 0; h < n_; ++h) {
          if (is_medoid_[h]) continue;
          double delta = 0.0;
          for (Vertex j = 0; j < n_; ++j) {
            const double dh = dist(j, h);
            const double keep = owner_[j] == slot ? second_[j] : nearest_[j];
            delta += std::min(keep, dh) - nearest_[j];
          }
          if (delta < best_delta) {
            best_delta = delta;
            best_slot = slot;
            best_h = h;
          }
        }
      }
      if (best_slot == k_) break;
      medoids[best_slot] = best_h;
      refresh(medoids);
      history.push_back(objective());
      ++passes;
    }
    return passes;
  }

  double objective() const { return std::accumulate(nearest_.begin(), nearest_.end(), 0.0); }

 private:
  double dist(Vertex a, Vertex b) const { return d_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)); }

  void refresh(const std::vector<Vertex>& medoids) {
    is_medoid_.assign(n_, false);
    for (auto m : medoids) is_medoid_[m] = true;
    nearest_.assign(n_, kInf);
    second_.assign(n_, kInf);
    owner_.assign(n_, k_);
    for (Vertex j = 0; j < n_; ++j) {
      for (std::size_t slot = 0; slot < k_; ++slot) {
        const double dj = dist(j, medoids[slot]);
        if (dj < nearest_[j]) {
          second_[j] = nearest_[j];
          nearest_[j] = dj;
          owner_[j] = slot;
        } else if (dj < second_[j]) {
          second_[j] = dj;
        }
      }
    }
  }

  const Eigen::MatrixXd& d_;
  std::size_t n_;
  std::size_t k_;
  std::vector<bool> is_medoid_;
  std::vector<double> nearest_;
  std::vector<double> second_;
  std::vector<std::size_t> owner_;
};

double assignment_cost(const DistanceMatrix& d, const std::vector<Vertex>& centers,
                       const std::vector<std::size_t>& assignments) {
  double total = 0.0;
  for (Vertex j = 0; j < assignments.size(); ++j) total += d(j, centers[assignments[j]]);
  return total;
}

struct KMeansRun {
  std::vector<std::size_t> labels;
  Eigen::MatrixXd centroids;
  double inertia = kInf;
  std::size_t iterations = 0;
};

KMeansRun kmeans_once(const Eigen::MatrixXd& x, std::size_t k, std::mt19937_64& rng, std::size_t max_iter) {
  const auto n = static_cast<std::size_t>(x.rows());
  KMeansRun run;
  run.centroids.resize(static_cast<Eigen::Index>(k), x.cols());

  // k-means++ seeding.
  std::vector<double> closest(n, kInf);
  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  std::size_t pick = first(rng);
  for (std::size_t c = 0; c < k; ++c) {
    run.centroids.row(static_cast<Eigen::Index>(c)) = x.row(static_cast<Eigen::Index>(pick));
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      closest[i] = std::min(closest[i],
                            (x.row(static_cast<Eigen::Index>(i)) - run.centroids.row(static_cast<Eigen::Index>(c)))
                                .squaredNorm());
      total += closest[i];
    }
    if (c + 1 == k) break;
    if (total <= 0.0) {
      pick = first(rng);
      continue;
    }
    std::uniform_real_distribution<double> u(0.0, total);
    double target = u(rng);
    pick = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      target -= closest[i];
      if (target <= 0.0) {
        pick = i;
        break;
      }
    }
  }

  run.labels.assign(n, 0);
  for (std::size_t it = 0; it < max_iter; ++it) {
    ++run.iterations;
    bool changed = it == 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = kInf;
      for (std::size_t c = 0; c < k; ++c) {
        const double dc =
            (x.row(static_cast<Eigen::Index>(i)) - run.centroids.row(static_cast<Eigen::Index>(c))).squaredNorm();
        if (dc < best_d) {
          best_d = dc;
          best = c;
        }
      }
      if (run.labels[i] != best) changed = true;
      run.labels[i] = best;
    }
    if (!changed) break;
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), x.cols());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sums.row(static_cast<Eigen::Index>(run.labels[i])) += x.row(static_cast<Eigen::Index>(i));
      ++counts[run.labels[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        run.centroids.row(static_cast<Eigen::Index>(c)) = sums.row(static_cast<Eigen::Index>(c)) / counts[c];
        continue;
      }
      // Empty cluster: move its centroid to the worst-served point.
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double di = (x.row(static_cast<Eigen::Index>(i)) -
                           run.centroids.row(static_cast<Eigen::Index>(run.labels[i])))
                              .squaredNorm();
        if (di > far_d) {
          far_d = di;
          far = i;
        }
      }
      run.centroids.row(static_cast<Eigen::Index>(c)) = x.row(static_cast<Eigen::Index>(far));
    }
  }
  run.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    run.inertia +=
        (x.row(static_cast<Eigen::Index>(i)) - run.centroids.row(static_cast<Eigen::Index>(run.labels[i]))).squaredNorm();
  }
  return run;
}

}  // namespace

std::vector<std::size_t> assign_nearest(const DistanceMatrix& d, const std::vector<Vertex>& centers) {
  std::vector<std::size_t> out(d.size(), 0);
  for (Vertex j = 0; j < d.size(); ++j) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < centers.size(); ++c) {
      const double dc = d(j, centers[c]);
      const double db = d(j, centers[best]);
      if (dc < db || (dc == db && centers[c] < centers[best])) best = c;
    }
    out[j] = best;
  }
  // A center always belongs to its own cluster, even when a duplicate
  // point at distance zero has a lower index.
  for (std::size_t c = 0; c < centers.size(); ++c) out[centers[c]] = c;
  return out;
}

ClusterResult k_medoids(const DistanceMatrix& d, std::size_t k, std::uint64_t seed, const KMedoidsOptions& options) {
  const auto n = d.size();
  require_k(k, n, 2);
  if (options.restarts == 0) throw Error(ErrorKind::InvalidParams, "k_medoids needs at least one restart");

  ClusterResult best;
  best.objective = kInf;
  for (std::size_t r = 0; r < options.restarts; ++r) {
    Pam pam(d.values, k);
    std::vector<Vertex> medoids;
    if (r == 0) {
      medoids = pam.build();
    } else {
      std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * r);
      medoids = pam.random_init(rng);
    }
    std::vector<double> history;
    const auto passes = pam.swap(medoids, options.max_swaps, history);
    const double objective = pam.objective();
    if (objective < best.objective) {
      best.objective = objective;
      best.centers = medoids;
      best.iterations = passes;
      best.objective_history = std::move(history);
    }
  }
  std::sort(best.centers.begin(), best.centers.end());
  best.assignments = assign_nearest(d, best.centers);
  best.objective = assignment_cost(d, best.centers, best.assignments);
  best.seed = seed;
  best.method = "k_medoids";
  return best;
}

ClusterResult farthest_first(const DistanceMatrix& d, std::size_t k, Vertex start) {
  const auto n = d.size();
  require_k(k, n, 1);
  if (start >= n) throw Error(ErrorKind::InvalidParams, "farthest_first start is out of range");
  ClusterResult out;
  out.method = "farthest_first";
  out.centers.push_back(start);
  std::vector<double> nearest(n);
  for (Vertex j = 0; j < n; ++j) nearest[j] = d(j, start);
  while (out.centers.size() < k) {
    Vertex far = 0;
    for (Vertex j = 1; j < n; ++j) {
      if (nearest[j] > nearest[far]) far = j;
    }
    out.centers.push_back(far);
    for (Vertex j = 0; j < n; ++j) nearest[j] = std::min(nearest[j], d(j, far));
  }
  out.assignments = assign_nearest(d, out.centers);
  out.objective = 0.0;
  for (Vertex j = 0; j < n; ++j) out.objective = std::max(out.objective, d(j, out.centers[out.assignments[j]]));
  out.iterations = k;
  return out;
}

ClusterResult sc2_baseline(const Graph& g, std::size_t k, std::uint64_t seed) {
  const auto n = g.num_vertices();
  require_k(k, n, 1);
  ClusterResult out;
  out.method = "sc2";
  out.seed = seed;
  if (k == 1) {
    out.assignments.assign(n, 0);
    out.centers = {0};
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(laplacian(g));
  if (eig.info() != Eigen::Success) throw Error(ErrorKind::EigenFailure, "Laplacian eigendecomposition failed");
  const Eigen::MatrixXd embedding = eig.eigenvectors().leftCols(static_cast<Eigen::Index>(k));

  constexpr std::size_t kRestarts = 10;
  constexpr std::size_t kMaxIter = 100;
  KMeansRun best;
  for (std::size_t r = 0; r < kRestarts; ++r) {
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * r);
    auto run = kmeans_once(embedding, k, rng, kMaxIter);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  out.assignments = best.labels;
  out.objective = best.inertia;
  out.iterations = best.iterations;
  for (std::size_t c = 0; c < k; ++c) {
    Vertex pick = 0;
    double pick_d = kInf;
    for (Vertex i = 0; i < n; ++i) {
      const double di =
          (embedding.row(static_cast<Eigen::Index>(i)) - best.centroids.row(static_cast<Eigen::Index>(c))).squaredNorm();
      if (di < pick_d) {
        pick_d = di;
        pick = i;
      }
    }
    out.centers.push_back(pick);
  }
  return out;
}

std::string to_json(const ClusterResult& result, std::string_view params_json) {
  nlohmann::ordered_json doc;
  doc["method"] = result.method;
  doc["assignments"] = result.assignments;
  doc["centers"] = result.centers;
  doc["objective"] = result.objective;
  doc["seed"] = result.seed;
  doc["iterations"] = result.iterations;
  try {
    doc["params"] = nlohmann::ordered_json::parse(params_json);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidParams, std::string("params are not valid JSON: ") + e.what());
  }
  return doc.dump(2);
}

ClusterResult cluster_result_from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    ClusterResult out;
    out.method = doc.value("method", std::string{});
    out.assignments = doc.at("assignments").get<std::vector<std::size_t>>();
    out.centers = doc.at("centers").get<std::vector<Vertex>>();
    out.objective = doc.at("objective").get<double>();
    out.seed = doc.at("seed").get<std::uint64_t>();
    out.iterations = doc.value("iterations", std::size_t{0});
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(ErrorKind::ParseError, 0, 0, std::string("invalid cluster result: ") + e.what());
  }
}

}  // namespace presist
