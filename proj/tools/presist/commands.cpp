#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "presist/alpha.hpp"
#include "presist/bench.hpp"
#include "presist/clustering.hpp"
#include "presist/dataset.hpp"
#include "presist/distance_matrix.hpp"
#include "presist/edge_list_io.hpp"
#include "presist/error.hpp"
#include "presist/knn_graph.hpp"
#include "presist/laplacian_pinv.hpp"
#include "presist/norms.hpp"
#include "presist/ratio_sweep.hpp"
#include "presist/verify.hpp"

namespace presist::cli {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::ofstream open_file(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  return out;
}

void write_comment_lines(std::ostream& out, const RunConfig& cfg) {
  for (const auto& line : provenance_lines(cfg)) out << "# " << line << '\n';
}

/// Writes through `fn` to the file at `path`, or to stdout when empty.
template <typename Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  auto out = open_file(path);
  fn(out);
}

LoadOptions dataset_options(const RunConfig& cfg) {
  LoadOptions o;
  o.has_labels = cfg.has_labels;
  o.label_column = cfg.label_column == "first" ? LabelColumn::First : LabelColumn::Last;
  o.skip_rows = cfg.skip_rows;
  o.delimiter = cfg.delimiter.front();
  return o;
}

FeatureDataset load_dataset(const RunConfig& cfg) {
  auto ds = load_features(fs::path(cfg.features), dataset_options(cfg));
  return cfg.standardize ? standardize(std::move(ds)) : ds;
}

GraphBuildParams build_params(const RunConfig& cfg) {
  GraphBuildParams params;
  params.mu = cfg.mu;
  params.sigma = cfg.sigma;
  params.symmetrization = *parse_symmetrization(cfg.symmetrization);
  params.on_disconnect = *parse_on_disconnect(cfg.on_disconnect);
  return params;
}

Graph input_graph(const RunConfig& cfg) {
  if (!cfg.graph.empty()) return load_graph(cfg.graph);
  return generate(*parse_graph_family(cfg.family), cfg.generator, cfg.graph_seed);
}

EstimatorSettings estimator(const RunConfig& cfg) {
  EstimatorSettings es;
  es.restarts = cfg.estimator_restarts;
  es.seed = cfg.seed;
  return es;
}

/// One label per non-comment line; with delimited rows the first or last
/// field is used. Labels are densified in first-appearance order.
std::vector<std::size_t> read_labels(const RunConfig& cfg) {
  std::ifstream in(cfg.labels);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + cfg.labels + "'");
  std::unordered_map<std::string, std::size_t> ids;
  std::vector<std::size_t> labels;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (row <= cfg.skip_rows) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const char delim = cfg.delimiter.front();
    std::string field = line;
    if (cfg.label_column == "first") {
      field = line.substr(0, line.find(delim));
    } else if (const auto pos = line.rfind(delim); pos != std::string::npos) {
      field = line.substr(pos + 1);
    }
    const auto [it, inserted] = ids.emplace(field, ids.size());
    labels.push_back(it->second);
  }
  return labels;
}

void check_p(double p, const char* flag) {
  try {
    require_p_above_one(p);
  } catch (const Error&) {
    std::ostringstream msg;
    msg << "p must exceed 1 (and be finite), got " << p;
    throw UsageError(flag, msg.str());
  }
}

void check_mu(double mu, const char* flag) {
  if (!(mu > 0.0 && mu <= 1.0)) throw UsageError(flag, "mu must be in (0, 1], got " + std::to_string(mu));
}

void check_sigma(double sigma, const char* flag) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw UsageError(flag, "sigma must be positive, got " + std::to_string(sigma));
  }
}

void check_graph_input(const RunConfig& cfg) {
  if (cfg.graph.empty() && cfg.family.empty()) throw UsageError("--graph", "an edge list or --family is required");
  if (!cfg.graph.empty() && !cfg.family.empty()) throw UsageError("--family", "give either --graph or --family");
  if (!cfg.family.empty() && !parse_graph_family(cfg.family)) {
    throw UsageError("--family", "unknown graph family '" + cfg.family + "'");
  }
}

void check_dataset(const RunConfig& cfg) {
  if (cfg.features.empty()) throw UsageError("--features", "a feature CSV is required");
  if (cfg.label_column != "first" && cfg.label_column != "last") {
    throw UsageError("--label-column", "must be first or last");
  }
  if (cfg.delimiter.size() != 1) throw UsageError("--delimiter", "must be a single character");
}

Json warnings_json(const DistanceMatrix& dm) {
  Json list = Json::array();
  for (const auto& w : dm.warnings) list.push_back({{"i", w.i}, {"j", w.j}, {"message", w.message}});
  return list;
}

}  // namespace

void validate(const RunConfig& cfg) {
  cfg.solver.validate();
  const auto& s = cfg.subcommand;
  if (s == "build-graph") {
    check_dataset(cfg);
    check_mu(cfg.mu, "--mu");
    check_sigma(cfg.sigma, "--sigma");
    if (!parse_symmetrization(cfg.symmetrization)) throw UsageError("--symmetrization", "must be union or mutual");
    if (!parse_on_disconnect(cfg.on_disconnect)) {
      throw UsageError("--on-disconnect", "must be fail or largest_component");
    }
  } else if (s == "distances") {
    check_graph_input(cfg);
    check_p(cfg.p, "--p");
    if (!parse_distance_mode(cfg.mode)) throw UsageError("--mode", "must be approx or exact");
    if (!parse_distance_form(cfg.form)) throw UsageError("--form", "must be resistance or metric");
    if (!cfg.pinv_cache.empty() && cfg.mode != "approx") {
      throw UsageError("--pinv-cache", "only used in approx mode");
    }
  } else if (s == "cluster") {
    if (cfg.distances.empty()) throw UsageError("--distances", "a distance matrix is required");
    if (cfg.method != "kmedoids" && cfg.method != "farthest-first") {
      throw UsageError("--method", "must be kmedoids or farthest-first");
    }
    if (cfg.k < 1) throw UsageError("--k", "must be at least 1");
    if (cfg.delimiter.size() != 1) throw UsageError("--delimiter", "must be a single character");
    if (cfg.restarts < 1) throw UsageError("--restarts", "must be at least 1");
  } else if (s == "bench") {
    check_dataset(cfg);
    if (!cfg.has_labels) throw UsageError("--no-labels", "bench needs labels");
    for (double mu : cfg.mu_grid) check_mu(mu, "--mu-grid");
    for (double sigma : cfg.sigma_grid) check_sigma(sigma, "--sigma-grid");
    for (double p : cfg.p_grid) check_p(p, "--p-grid");
    for (const auto& m : cfg.methods) {
      if (!parse_bench_method(m)) throw UsageError("--methods", "unknown method '" + m + "'");
    }
    if (cfg.repetitions < 1) throw UsageError("--repetitions", "must be at least 1");
    if (cfg.restarts < 1) throw UsageError("--restarts", "must be at least 1");
    if (!parse_symmetrization(cfg.symmetrization)) throw UsageError("--symmetrization", "must be union or mutual");
    if (!parse_on_disconnect(cfg.on_disconnect)) {
      throw UsageError("--on-disconnect", "must be fail or largest_component");
    }
  } else if (s == "bound" || s == "ratio") {
    check_graph_input(cfg);
    for (double p : cfg.p_grid) check_p(p, "--p-grid");
    if (s == "ratio" && cfg.pairs < 1) throw UsageError("--pairs", "must be at least 1");
  } else if (s == "verify") {
    const auto& names = verify_suite_names();
    for (const auto& suite : cfg.suites) {
      if (std::find(names.begin(), names.end(), suite) == names.end()) {
        throw UsageError("--suite", "unknown suite '" + suite + "'");
      }
    }
    if (cfg.verify_n < 4) throw UsageError("--n", "must be at least 4");
    if (cfg.instances < 1) throw UsageError("--instances", "must be at least 1");
  } else {
    throw UsageError("", "unknown subcommand '" + s + "'");
  }
}

int cmd_build_graph(const RunConfig& cfg) {
  const auto ds = load_dataset(cfg);
  const auto built = knn_gaussian_graph(ds, build_params(cfg));
  const auto& g = built.graph;

  emit(cfg.output, [&](std::ostream& out) { write_edge_list(out, g, provenance_lines(cfg)); });

  if (!cfg.labels_out.empty()) {
    if (!ds.labels) throw UsageError("--labels-out", "the dataset has no labels");
    auto out = open_file(cfg.labels_out);
    write_comment_lines(out, cfg);
    for (auto row : built.kept) out << ds.class_names[(*ds.labels)[row]] << '\n';
  }

  Json report;
  report["points"] = ds.size();
  report["vertices"] = g.num_vertices();
  report["edges"] = g.num_edges();
  report["k"] = built.k;
  report["connected"] = built.kept.size() == ds.size();
  report["dropped_vertices"] = ds.size() - built.kept.size();
  report["min_weight"] = g.min_weight();
  report["max_weight"] = g.max_weight();
  report["underflow_edges"] = built.underflow_edges;
  report["provenance"] = provenance(cfg);
  if (!cfg.report.empty()) {
    auto out = open_file(cfg.report);
    out << report.dump(2) << '\n';
  }
  // Keep stdout for the edge list when no output file was given.
  (cfg.output.empty() ? std::cerr : std::cout) << report.dump(2) << '\n';
  return 0;
}

int cmd_distances(const RunConfig& cfg) {
  const auto g = input_graph(cfg);
  const auto mode = *parse_distance_mode(cfg.mode);
  const auto form = *parse_distance_form(cfg.form);

  DistanceOptions opts;
  opts.solver = cfg.solver;
  opts.workers = cfg.workers;
  std::optional<LaplacianPinv> pinv;
  double pinv_seconds = 0.0;
  bool pinv_reused = false;
  if (mode == DistanceMode::Approx && !cfg.pinv_cache.empty()) {
    const auto t0 = std::chrono::steady_clock::now();
    if (fs::exists(cfg.pinv_cache)) {
      pinv = LaplacianPinv::load(cfg.pinv_cache, g.fingerprint());
      pinv_reused = true;
    } else {
      pinv = laplacian_pinv(g);
      pinv->save(cfg.pinv_cache);
    }
    pinv_seconds = seconds_since(t0);
    opts.pinv = &*pinv;
  }

  DistanceTiming timing;
  auto dm = distance_matrix(g, cfg.p, mode, form, opts, &timing);
  if (pinv) timing.pinv_seconds = pinv_seconds;
  dm.metadata = provenance(cfg).dump();

  const bool csv = cfg.output.empty() || fs::path(cfg.output).extension() == ".csv";
  if (cfg.output.empty()) {
    write_distance_csv(std::cout, dm);
  } else if (csv) {
    write_distance_csv(fs::path(cfg.output), dm);
  } else {
    save_distance_matrix(cfg.output, dm);
  }

  const double pairs = static_cast<double>(std::max<std::size_t>(timing.pairs, 1));
  Json report;
  report["n"] = dm.size();
  report["p"] = cfg.p;
  report["mode"] = cfg.mode;
  report["form"] = cfg.form;
  report["pairs"] = timing.pairs;
  report["pinv_seconds"] = timing.pinv_seconds;
  report["pinv_reused"] = pinv_reused;
  report["pair_seconds"] = timing.pair_seconds;
  report["per_pair_seconds"] = timing.pair_seconds / pairs;
  report["amortized_per_pair_seconds"] = (timing.pinv_seconds + timing.pair_seconds) / pairs;
  report["unconverged_pairs"] = dm.warnings.size();
  report["warnings"] = warnings_json(dm);
  (cfg.output.empty() ? std::cerr : std::cout) << report.dump(2) << '\n';
  if (!dm.warnings.empty()) {
    std::cerr << "presist: " << dm.warnings.size() << " pair(s) did not converge\n";
    return 1;
  }
  return 0;
}

int cmd_cluster(const RunConfig& cfg) {
  const auto dm = load_distance_any(cfg.distances);
  ClusterResult result;
  if (cfg.method == "kmedoids") {
    KMedoidsOptions opts;
    opts.restarts = cfg.restarts;
    result = k_medoids(dm, cfg.k, cfg.seed, opts);
  } else {
    result = farthest_first(dm, cfg.k, cfg.start);
  }
  auto doc = Json::parse(to_json(result, provenance(cfg).dump()));
  if (!cfg.labels.empty()) {
    const auto truth = read_labels(cfg);
    if (truth.size() != dm.size()) {
      throw Error(ErrorKind::LengthMismatch, "label file has " + std::to_string(truth.size()) +
                                                 " labels for a " + std::to_string(dm.size()) + "-point matrix");
    }
    const auto eval = error_rate(result.assignments, truth);
    doc["evaluation"] = {{"error_rate", eval.error_rate}, {"matching", eval.matching}};
  }
  emit(cfg.output, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
  return 0;
}

int cmd_bench(const RunConfig& cfg) {
  const auto ds = load_dataset(cfg);
  BenchConfig bc;
  if (!cfg.mu_grid.empty()) bc.mu_grid = cfg.mu_grid;
  if (!cfg.sigma_grid.empty()) bc.sigma_grid = cfg.sigma_grid;
  if (!cfg.p_grid.empty()) bc.p_grid = cfg.p_grid;
  if (!cfg.methods.empty()) {
    bc.methods.clear();
    for (const auto& m : cfg.methods) bc.methods.push_back(*parse_bench_method(m));
  }
  bc.repetitions = cfg.repetitions;
  bc.seed = cfg.seed;
  bc.workers = cfg.workers;
  bc.kmedoids_restarts = cfg.restarts;
  bc.symmetrization = *parse_symmetrization(cfg.symmetrization);
  bc.on_disconnect = *parse_on_disconnect(cfg.on_disconnect);
  bc.standardized = cfg.standardize;
  bc.solver = cfg.solver;

  const auto result = bench_grid(ds, bc);

  emit(cfg.output, [&](std::ostream& out) {
    write_comment_lines(out, cfg);
    write_bench_records_csv(out, result);
  });
  if (!cfg.timing.empty()) {
    auto out = open_file(cfg.timing);
    write_bench_timing_csv(out, result);
  }
  auto summary = Json::parse(bench_summary_json(result, bc));
  summary["provenance"] = provenance(cfg);
  if (!cfg.summary.empty()) {
    auto out = open_file(cfg.summary);
    out << summary.dump(2) << '\n';
  }
  auto& log = cfg.output.empty() ? std::cerr : std::cout;
  for (const auto& b : result.best) {
    log << "best " << to_string(b.method) << ": error " << b.mean_error << " +- " << b.sd_error << " (mu=" << b.mu
        << ", sigma=" << b.sigma << ", p=" << b.p << ", runs=" << b.runs << ")\n";
  }
  return 0;
}

int cmd_bound(const RunConfig& cfg) {
  const auto g = input_graph(cfg);
  const std::vector<double> grid = cfg.p_grid.empty() ? std::vector<double>{1.1, 1.5, 2.0, 3.0, 5.0, 10.0} : cfg.p_grid;
  std::vector<AlphaBound> rows;
  for (double p : grid) rows.push_back(alpha_gp(g, p, estimator(cfg)));
  emit(cfg.output, [&](std::ostream& out) {
    write_comment_lines(out, cfg);
    out << std::setprecision(17);
    out << "p,alpha_estimate,worst_case,ceiling,cc_pinv_one_norm,estimator_iterations,within_worst_case\n";
    for (const auto& b : rows) {
      out << b.p << ',' << b.alpha_estimate << ',' << b.worst_case << ',' << b.ceiling << ',' << b.cc_pinv_one_norm
          << ',' << b.estimate.iterations << ',' << (b.within_worst_case() ? 1 : 0) << '\n';
    }
  });
  return 0;
}

int cmd_ratio(const RunConfig& cfg) {
  const auto g = input_graph(cfg);
  const std::vector<double> grid = cfg.p_grid.empty() ? std::vector<double>{1.5, 2.0, 3.0, 5.0, 10.0} : cfg.p_grid;
  RatioSweepOptions opts;
  opts.sample_pairs = cfg.pairs;
  opts.seed = cfg.seed;
  opts.solver = cfg.solver;
  opts.estimator = estimator(cfg);
  opts.workers = cfg.workers;
  const auto rows = ratio_sweep(g, grid, opts);
  emit(cfg.output, [&](std::ostream& out) {
    write_comment_lines(out, cfg);
    write_ratio_csv(out, rows);
  });
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  VerifyOptions opts;
  opts.suites = cfg.suites;
  opts.n = cfg.verify_n;
  opts.instances = cfg.instances;
  opts.seed = cfg.seed;
  opts.inject_fault = cfg.inject_fault;
  opts.solver = cfg.solver;
  const auto report = run_verify(opts);
  emit(cfg.output, [&](std::ostream& out) { out << report.to_json(provenance(cfg).dump()) << '\n'; });
  std::size_t passed = 0;
  for (const auto& r : report.results) passed += r.passed ? 1 : 0;
  std::cerr << "verify: " << passed << "/" << report.results.size() << " properties passed\n";
  for (const auto& name : report.failed()) std::cerr << "FAILED " << name << '\n';
  return report.passed() ? 0 : 1;
}

}  // namespace presist::cli
