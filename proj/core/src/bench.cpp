#include "presist/bench.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <random>

#include <nlohmann/json.hpp>

#include "presist/approx.hpp"
#include "presist/clustering.hpp"
#include "presist/distance_matrix.hpp"
#include "presist/error.hpp"
#include "presist/parallel.hpp"

namespace presist {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::array<std::pair<BenchMethod, std::string_view>, 7> kMethodNames{{
    {BenchMethod::KMedoidsApprox, "kmedoids_approx"},
    {BenchMethod::KMedoidsExact, "kmedoids_exact"},
    {BenchMethod::KMedoidsP2, "kmedoids_p2"},
    {BenchMethod::FarthestFirstApprox, "ff_approx"},
    {BenchMethod::FarthestFirstExact, "ff_exact"},
    {BenchMethod::FarthestFirstP2, "ff_p2"},
    {BenchMethod::Sc2, "sc2"},
}};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::uint64_t repetition_seed(std::uint64_t base, std::size_t rep) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(rep)};
  std::array<std::uint64_t, 1> out{};
  seq.generate(reinterpret_cast<std::uint32_t*>(out.data()), reinterpret_cast<std::uint32_t*>(out.data() + 1));
  return out[0];
}

bool uses_exact(BenchMethod m) {
  return m == BenchMethod::KMedoidsExact || m == BenchMethod::FarthestFirstExact;
}

bool uses_kmedoids(BenchMethod m) {
  return m == BenchMethod::KMedoidsApprox || m == BenchMethod::KMedoidsExact || m == BenchMethod::KMedoidsP2;
}

void fail_all(std::vector<BenchRecord>& out, const BenchConfig& config, double mu, double sigma,
              const std::string& status) {
  for (auto method : config.methods) {
    const std::vector<double> ps = is_p_independent(method) ? std::vector<double>{2.0} : config.p_grid;
    for (double p : ps) {
      for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
        BenchRecord r;
        r.mu = mu;
        r.sigma = sigma;
        r.p = p;
        r.method = method;
        r.repetition = rep;
        r.seed = repetition_seed(config.seed, rep);
        r.error_rate = std::numeric_limits<double>::quiet_NaN();
        r.status = status;
        out.push_back(std::move(r));
      }
    }
  }
}

std::vector<BenchRecord> run_cell(const FeatureDataset& ds, const BenchConfig& config, double mu, double sigma) {
  std::vector<BenchRecord> out;
  GraphBuildParams params;
  params.mu = mu;
  params.sigma = sigma;
  params.symmetrization = config.symmetrization;
  params.on_disconnect = config.on_disconnect;

  std::optional<KnnGraph> knn;
  try {
    knn.emplace(knn_gaussian_graph(ds, params));
  } catch (const std::exception& e) {
    fail_all(out, config, mu, sigma, e.what());
    return out;
  }
  const Graph& g = knn->graph;
  std::vector<std::size_t> truth;
  for (auto row : knn->kept) truth.push_back((*ds.labels)[row]);
  const std::size_t k = std::min(ds.num_classes(), g.num_vertices());

  std::optional<LaplacianPinv> pinv;
  double pinv_seconds = 0.0;
  try {
    const auto start = Clock::now();
    pinv.emplace(laplacian_pinv(g));
    pinv_seconds = seconds_since(start);
  } catch (const std::exception& e) {
    fail_all(out, config, mu, sigma, e.what());
    return out;
  }

  // Distance matrices are shared by all methods and repetitions of a cell.
  std::map<std::pair<double, bool>, std::pair<DistanceMatrix, double>> cache;
  auto distances = [&](double p, bool exact) -> const std::pair<DistanceMatrix, double>& {
    const auto key = std::make_pair(p, exact);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    DistanceOptions opts;
    opts.solver = config.solver;
    opts.pinv = &*pinv;
    DistanceTiming timing;
    auto dm = distance_matrix(g, p, exact ? DistanceMode::Exact : DistanceMode::Approx, DistanceForm::Metric, opts,
                              &timing);
    const double seconds = timing.pair_seconds + (exact ? 0.0 : pinv_seconds);
    return cache.emplace(key, std::make_pair(std::move(dm), seconds)).first->second;
  };

  for (auto method : config.methods) {
    const std::vector<double> ps = is_p_independent(method) ? std::vector<double>{2.0} : config.p_grid;
    for (double p : ps) {
      for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
        BenchRecord r;
        r.mu = mu;
        r.sigma = sigma;
        r.p = p;
        r.method = method;
        r.repetition = rep;
        r.seed = repetition_seed(config.seed, rep);
        r.points = g.num_vertices();
        try {
          ClusterResult cr;
          double dist_seconds = 0.0;
          const auto start = Clock::now();
          if (method == BenchMethod::Sc2) {
            cr = sc2_baseline(g, k, r.seed);
          } else {
            const auto& [dm, seconds] = distances(p, uses_exact(method));
            dist_seconds = seconds;
            if (!dm.warnings.empty()) r.status = "ok (" + std::to_string(dm.warnings.size()) + " unconverged pairs)";
            if (uses_kmedoids(method)) {
              KMedoidsOptions opts;
              opts.restarts = config.kmedoids_restarts;
              cr = k_medoids(dm, k, r.seed, opts);
            } else {
              std::mt19937_64 rng(r.seed);
              const auto start_vertex = std::uniform_int_distribution<Vertex>(0, g.num_vertices() - 1)(rng);
              cr = farthest_first(dm, k, start_vertex);
            }
          }
          r.wall_seconds = dist_seconds + seconds_since(start);
          r.error_rate = error_rate(cr.assignments, truth).error_rate;
        } catch (const std::exception& e) {
          r.error_rate = std::numeric_limits<double>::quiet_NaN();
          r.status = e.what();
        }
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(BenchMethod m) noexcept {
  for (const auto& [method, name] : kMethodNames) {
    if (method == m) return name;
  }
  return "unknown";
}

std::optional<BenchMethod> parse_bench_method(std::string_view name) noexcept {
  for (const auto& [method, candidate] : kMethodNames) {
    if (candidate == name) return method;
  }
  return std::nullopt;
}

bool is_p_independent(BenchMethod m) noexcept {
  return m == BenchMethod::KMedoidsP2 || m == BenchMethod::FarthestFirstP2 || m == BenchMethod::Sc2;
}

BenchResult bench_grid(const FeatureDataset& ds, const BenchConfig& config) {
  if (!ds.labels) throw Error(ErrorKind::InvalidParams, "bench_grid needs a labeled dataset");
  if (config.mu_grid.empty() || config.sigma_grid.empty() || config.methods.empty() || config.repetitions == 0) {
    throw Error(ErrorKind::InvalidParams, "bench grids, methods and repetitions must be non-empty");
  }
  bool needs_p = false;
  for (auto m : config.methods) needs_p = needs_p || !is_p_independent(m);
  if (needs_p && config.p_grid.empty()) throw Error(ErrorKind::InvalidParams, "p grid is empty");
  for (double p : config.p_grid) {
    if (!(p > 1.0 + 1e-9) || !std::isfinite(p)) {
      throw Error(ErrorKind::InvalidP, "every p in the grid must be finite and exceed 1");
    }
  }

  std::vector<std::pair<double, double>> jobs;
  for (double mu : config.mu_grid) {
    for (double sigma : config.sigma_grid) jobs.emplace_back(mu, sigma);
  }
  std::vector<std::vector<BenchRecord>> per_job(jobs.size());
  parallel_for(jobs.size(), config.workers,
               [&](std::size_t j) { per_job[j] = run_cell(ds, config, jobs[j].first, jobs[j].second); });

  BenchResult result;
  for (auto& recs : per_job) {
    for (auto& r : recs) result.records.push_back(std::move(r));
  }

  // Records are grouped by cell in order, so summarise consecutive runs.
  for (std::size_t a = 0; a < result.records.size();) {
    const auto& head = result.records[a];
    std::size_t b = a;
    BenchSummary s{head.mu, head.sigma, head.p, head.method, 0.0, 0.0, 0};
    double sum = 0.0;
    std::vector<double> values;
    while (b < result.records.size() && result.records[b].mu == head.mu && result.records[b].sigma == head.sigma &&
           result.records[b].p == head.p && result.records[b].method == head.method) {
      if (!std::isnan(result.records[b].error_rate)) {
        values.push_back(result.records[b].error_rate);
        sum += values.back();
      }
      ++b;
    }
    s.runs = values.size();
    if (s.runs > 0) {
      s.mean_error = sum / static_cast<double>(s.runs);
      double ss = 0.0;
      for (double v : values) ss += (v - s.mean_error) * (v - s.mean_error);
      s.sd_error = s.runs > 1 ? std::sqrt(ss / static_cast<double>(s.runs - 1)) : 0.0;
      result.cells.push_back(s);
    }
    a = b;
  }

  for (auto method : config.methods) {
    std::optional<BenchSummary> best;
    for (const auto& c : result.cells) {
      if (c.method == method && (!best || c.mean_error < best->mean_error)) best = c;
    }
    if (best) result.best.push_back(*best);
  }
  return result;
}

void write_bench_records_csv(std::ostream& out, const BenchResult& result, bool include_timing) {
  out << "mu,sigma,p,method,repetition,seed,points,error_rate,status";
  if (include_timing) out << ",wall_seconds";
  out << '\n';
  for (const auto& r : result.records) {
    std::string status = r.status;
    for (auto& ch : status) {
      if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
    }
    out << format_double(r.mu) << ',' << format_double(r.sigma) << ',' << format_double(r.p) << ','
        << to_string(r.method) << ',' << r.repetition << ',' << r.seed << ',' << r.points << ','
        << format_double(r.error_rate) << ',' << status;
    if (include_timing) out << ',' << format_double(r.wall_seconds);
    out << '\n';
  }
}

void write_bench_timing_csv(std::ostream& out, const BenchResult& result) {
  out << "mu,sigma,p,method,repetition,wall_seconds\n";
  for (const auto& r : result.records) {
    out << format_double(r.mu) << ',' << format_double(r.sigma) << ',' << format_double(r.p) << ','
        << to_string(r.method) << ',' << r.repetition << ',' << format_double(r.wall_seconds) << '\n';
  }
}

std::string bench_summary_json(const BenchResult& result, const BenchConfig& config) {
  using nlohmann::ordered_json;
  auto summary = [](const BenchSummary& s) {
    ordered_json j;
    j["method"] = to_string(s.method);
    j["mu"] = s.mu;
    j["sigma"] = s.sigma;
    j["p"] = s.p;
    j["mean_error"] = s.mean_error;
    j["sd_error"] = s.sd_error;
    j["runs"] = s.runs;
    return j;
  };
  ordered_json doc;
  ordered_json cfg;
  cfg["mu_grid"] = config.mu_grid;
  cfg["sigma_grid"] = config.sigma_grid;
  cfg["p_grid"] = config.p_grid;
  std::vector<std::string> methods;
  for (auto m : config.methods) methods.emplace_back(to_string(m));
  cfg["methods"] = methods;
  cfg["repetitions"] = config.repetitions;
  cfg["seed"] = config.seed;
  cfg["kmedoids_restarts"] = config.kmedoids_restarts;
  cfg["symmetrization"] = to_string(config.symmetrization);
  cfg["on_disconnect"] = to_string(config.on_disconnect);
  cfg["standardized"] = config.standardized;
  doc["config"] = cfg;
  doc["best"] = ordered_json::array();
  for (const auto& b : result.best) doc["best"].push_back(summary(b));
  doc["cells"] = ordered_json::array();
  for (const auto& c : result.cells) doc["cells"].push_back(summary(c));
  std::size_t failed = 0;
  for (const auto& r : result.records) failed += std::isnan(r.error_rate) ? 1 : 0;
  doc["records"] = result.records.size();
  doc["failed_records"] = failed;
  return doc.dump(2);
}

PairTiming compare_pair_timing(const Graph& g, double p, std::size_t pairs, std::uint64_t seed,
                               const SolverConfig& solver) {
  const auto n = g.num_vertices();
  if (n < 2 || pairs == 0) throw Error(ErrorKind::InvalidParams, "timing needs n >= 2 and at least one pair");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Vertex> pick(0, n - 1);
  std::vector<std::pair<Vertex, Vertex>> sample;
  while (sample.size() < pairs) {
    const Vertex a = pick(rng);
    const Vertex b = pick(rng);
    if (a != b) sample.emplace_back(a, b);
  }

  PairTiming out;
  out.pairs = pairs;
  auto start = Clock::now();
  const auto pinv = laplacian_pinv(g);
  out.pinv_seconds = seconds_since(start);

  start = Clock::now();
  // Keeps the timed calls from being optimised away.
  volatile double sink = 0.0;
  for (const auto& [a, b] : sample) sink = sink + approx_metric(pinv, g, {a, b, p});
  const double approx_total = seconds_since(start);
  out.approx_per_pair = approx_total / static_cast<double>(pairs);
  out.approx_amortized_per_pair = (out.pinv_seconds + approx_total) / static_cast<double>(pairs);

  start = Clock::now();
  for (const auto& [a, b] : sample) {
    const auto r = exact_presistance(g, {a, b, p}, solver);
    sink = sink + r.metric;
    out.exact_unconverged += r.report.converged ? 0 : 1;
  }
  out.exact_per_pair = seconds_since(start) / static_cast<double>(pairs);
  return out;
}

}  // namespace presist
