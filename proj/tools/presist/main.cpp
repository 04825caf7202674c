#include <cstring>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "presist/error.hpp"
#include "presist/verify.hpp"
#include "presist/version.hpp"

namespace {

using presist::cli::RunConfig;
using presist::cli::UsageError;

/// Value of --config, found before the real parse so that the file can
/// supply defaults which explicit flags then override.
std::string find_config(int argc, char** argv) {
  for (int a = 1; a < argc; ++a) {
    const std::string arg = argv[a];
    if (arg == "--config" && a + 1 < argc) return argv[a + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(std::strlen("--config="));
  }
  return {};
}

struct Extras {
  std::string config;
  bool no_labels = false;
  std::string solver_init;
  std::string solver_method;
};

void add_dataset(CLI::App& sub, RunConfig& c, Extras& x) {
  sub.add_option("--features", c.features, "Feature CSV");
  sub.add_flag("--no-labels", x.no_labels, "The CSV has no label column");
  sub.add_option("--label-column", c.label_column, "Label column: first or last")->capture_default_str();
  sub.add_option("--skip-rows", c.skip_rows, "Leading lines to skip")->capture_default_str();
  sub.add_option("--delimiter", c.delimiter, "Field delimiter")->capture_default_str();
  sub.add_flag("--standardize", c.standardize, "Scale features to zero mean, unit variance");
  sub.add_option("--symmetrization", c.symmetrization, "union or mutual")->capture_default_str();
  sub.add_option("--on-disconnect", c.on_disconnect, "fail or largest_component")->capture_default_str();
}

void add_graph_input(CLI::App& sub, RunConfig& c) {
  sub.add_option("--graph", c.graph, "Edge list file");
  sub.add_option("--family", c.family, "Generated graph family instead of --graph");
  sub.add_option("--n", c.generator.n, "Vertices of the generated graph")->capture_default_str();
  sub.add_option("--edge-probability", c.generator.edge_probability, "gnp_connected edge probability")
      ->capture_default_str();
  sub.add_option("--delta", c.generator.delta, "Broom lines")->capture_default_str();
  sub.add_option("--zeta", c.generator.zeta, "Broom line length")->capture_default_str();
  sub.add_option("--epsilon", c.generator.epsilon, "Weak edge weight of example_g3")->capture_default_str();
  sub.add_option("--weight-min", c.generator.weight_min, "Lower random weight")->capture_default_str();
  sub.add_option("--weight-max", c.generator.weight_max, "Upper random weight")->capture_default_str();
  sub.add_option("--graph-seed", c.graph_seed, "Generator seed")->capture_default_str();
}

void add_solver(CLI::App& sub, RunConfig& c, Extras& x) {
  sub.add_option("--grad-tol", c.solver.grad_tol, "Relative gradient tolerance")->capture_default_str();
  sub.add_option("--rel-energy-tol", c.solver.rel_energy_tol, "Stagnation threshold")->capture_default_str();
  sub.add_option("--max-iter", c.solver.max_iter, "Solver iteration cap")->capture_default_str();
  sub.add_option("--smoothing-eps", c.solver.smoothing_eps, "Smoothing radius for p < 2")->capture_default_str();
  sub.add_option("--solver-init", x.solver_init, "p2_warmstart or zeros");
  sub.add_option("--solver-method", x.solver_method, "newton or gradient_descent");
}

void add_common(CLI::App& sub, RunConfig& c, Extras& x) {
  sub.add_option("--config", x.config, "JSON config or an artifact to replay");
  sub.add_option("--output,-o", c.output, "Output file (default stdout)");
  sub.add_option("--workers", c.workers, "Worker threads, 0 for all cores")->capture_default_str();
}

void finish(RunConfig& c, const Extras& x) {
  if (x.no_labels) c.has_labels = false;
  if (!x.solver_init.empty()) {
    if (x.solver_init != "p2_warmstart" && x.solver_init != "zeros") {
      throw UsageError("--solver-init", "must be p2_warmstart or zeros");
    }
    c.solver.init = x.solver_init == "zeros" ? presist::SolverInit::Zeros : presist::SolverInit::P2Warmstart;
  }
  if (!x.solver_method.empty()) {
    if (x.solver_method != "newton" && x.solver_method != "gradient_descent") {
      throw UsageError("--solver-method", "must be newton or gradient_descent");
    }
    c.solver.method =
        x.solver_method == "newton" ? presist::SolverMethod::Newton : presist::SolverMethod::GradientDescent;
  }
}

int run(int argc, char** argv) {
  RunConfig cfg;
  Extras extras;
  cfg.workers = presist::cli::default_workers();
  if (const auto path = find_config(argc, argv); !path.empty()) presist::cli::apply_config_file(cfg, path);

  CLI::App app{"Effective p-resistance on graphs: distances, clustering and diagnostics", "presist"};
  app.set_version_flag("--version", std::string(presist::kVersion));
  app.require_subcommand(1);

  auto* build = app.add_subcommand("build-graph", "Build a Gaussian k-NN graph from a feature CSV");
  add_common(*build, cfg, extras);
  add_dataset(*build, cfg, extras);
  build->add_option("--mu", cfg.mu, "Neighbour fraction in (0, 1]")->capture_default_str();
  build->add_option("--sigma", cfg.sigma, "Gaussian bandwidth")->capture_default_str();
  build->add_option("--report", cfg.report, "Also write the graph report JSON here");
  build->add_option("--labels-out", cfg.labels_out, "Write labels of the kept rows");

  auto* dist = app.add_subcommand("distances", "All-pairs p-resistance matrix");
  add_common(*dist, cfg, extras);
  add_graph_input(*dist, cfg);
  add_solver(*dist, cfg, extras);
  dist->add_option("--p", cfg.p, "Exponent p > 1")->capture_default_str();
  dist->add_option("--mode", cfg.mode, "approx or exact")->capture_default_str();
  dist->add_option("--form", cfg.form, "metric or resistance")->capture_default_str();
  dist->add_option("--pinv-cache", cfg.pinv_cache, "Reuse or create a cached Laplacian pseudoinverse");

  auto* cluster = app.add_subcommand("cluster", "Cluster a distance matrix");
  add_common(*cluster, cfg, extras);
  cluster->add_option("--distances", cfg.distances, "Distance matrix (binary or CSV)");
  cluster->add_option("--k", cfg.k, "Number of clusters")->capture_default_str();
  cluster->add_option("--method", cfg.method, "kmedoids or farthest-first")->capture_default_str();
  cluster->add_option("--start", cfg.start, "First center for farthest-first")->capture_default_str();
  cluster->add_option("--seed", cfg.seed, "Seed")->capture_default_str();
  cluster->add_option("--restarts", cfg.restarts, "k-medoids restarts")->capture_default_str();
  cluster->add_option("--labels", cfg.labels, "Ground-truth labels for scoring");
  cluster->add_option("--label-column", cfg.label_column, "first or last field of each label row")
      ->capture_default_str();
  cluster->add_option("--skip-rows", cfg.skip_rows, "Leading label lines to skip")->capture_default_str();
  cluster->add_option("--delimiter", cfg.delimiter, "Label field delimiter")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Grid search over mu, sigma, p and methods");
  add_common(*bench, cfg, extras);
  add_dataset(*bench, cfg, extras);
  add_solver(*bench, cfg, extras);
  bench->add_option("--mu-grid", cfg.mu_grid, "Neighbour fractions")->delimiter(',');
  bench->add_option("--sigma-grid", cfg.sigma_grid, "Bandwidths")->delimiter(',');
  bench->add_option("--p-grid", cfg.p_grid, "Exponents")->delimiter(',');
  bench->add_option("--methods", cfg.methods, "Methods to run")->delimiter(',');
  bench->add_option("--repetitions", cfg.repetitions, "Repetitions per cell")->capture_default_str();
  bench->add_option("--seed", cfg.seed, "Seed")->capture_default_str();
  bench->add_option("--restarts", cfg.restarts, "k-medoids restarts")->capture_default_str();
  bench->add_option("--timing", cfg.timing, "Per-record wall time CSV");
  bench->add_option("--summary", cfg.summary, "Summary JSON");

  auto* bound = app.add_subcommand("bound", "Looseness factor of the approximation over a p grid");
  add_common(*bound, cfg, extras);
  add_graph_input(*bound, cfg);
  bound->add_option("--p-grid", cfg.p_grid, "Exponents")->delimiter(',');
  bound->add_option("--estimator-restarts", cfg.estimator_restarts, "Random power-iteration starts")
      ->capture_default_str();
  bound->add_option("--seed", cfg.seed, "Seed")->capture_default_str();

  auto* ratio = app.add_subcommand("ratio", "Approximate against exact metric on sampled pairs");
  add_common(*ratio, cfg, extras);
  add_graph_input(*ratio, cfg);
  add_solver(*ratio, cfg, extras);
  ratio->add_option("--p-grid", cfg.p_grid, "Exponents")->delimiter(',');
  ratio->add_option("--pairs", cfg.pairs, "Sampled pairs")->capture_default_str();
  ratio->add_option("--estimator-restarts", cfg.estimator_restarts, "Random power-iteration starts")
      ->capture_default_str();
  ratio->add_option("--seed", cfg.seed, "Seed")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Check invariants on generated graphs");
  add_common(*verify, cfg, extras);
  add_solver(*verify, cfg, extras);
  verify->add_option("--suite", cfg.suites, "Suites to run (default all)")
      ->check(CLI::IsMember(presist::verify_suite_names()));
  verify->add_option("--n", cfg.verify_n, "Largest graph size")->capture_default_str();
  verify->add_option("--instances", cfg.instances, "Graphs per suite")->capture_default_str();
  verify->add_option("--seed", cfg.seed, "Seed")->capture_default_str();
  verify->add_flag("--inject-fault", cfg.inject_fault, "Corrupt the approximation to test the harness");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  finish(cfg, extras);
  presist::cli::validate(cfg);

  if (cfg.subcommand == "build-graph") return presist::cli::cmd_build_graph(cfg);
  if (cfg.subcommand == "distances") return presist::cli::cmd_distances(cfg);
  if (cfg.subcommand == "cluster") return presist::cli::cmd_cluster(cfg);
  if (cfg.subcommand == "bench") return presist::cli::cmd_bench(cfg);
  if (cfg.subcommand == "bound") return presist::cli::cmd_bound(cfg);
  if (cfg.subcommand == "ratio") return presist::cli::cmd_ratio(cfg);
  return presist::cli::cmd_verify(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "presist: " << e.what() << '\n';
    return 2;
  } catch (const presist::Error& e) {
    std::cerr << "presist: " << e.what() << '\n';
    return e.kind() == presist::ErrorKind::NotConverged ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "presist: " << e.what() << '\n';
    return 2;
  }
}
