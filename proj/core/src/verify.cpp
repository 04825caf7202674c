#include "presist/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "presist/alpha.hpp"
#include "presist/approx.hpp"
#include "presist/clustering.hpp"
#include "presist/distance_matrix.hpp"
#include "presist/energy.hpp"
#include "presist/error.hpp"
#include "presist/generators.hpp"
#include "presist/knn_graph.hpp"
#include "presist/laplacian_pinv.hpp"
#include "presist/limits.hpp"
#include "presist/norms.hpp"
#include "presist/operator_norm.hpp"
#include "presist/ratio_sweep.hpp"
#include "presist/version.hpp"

namespace presist {

namespace {

class Property {
 public:
  Property(std::string suite, std::string name, double tolerance) {
    result_.suite = std::move(suite);
    result_.property = std::move(name);
    result_.tolerance = tolerance;
  }

  /// `measure` is the violation size compared against the tolerance.
  void check(double measure, const std::function<std::string()>& where) {
    ++result_.checks;
    if (std::isnan(measure) || measure > result_.worst) result_.worst = measure;
    if (!(measure <= result_.tolerance)) {
      ++result_.failures;
      if (result_.detail.empty()) result_.detail = where();
    }
  }

  void fail(const std::string& why) {
    ++result_.checks;
    ++result_.failures;
    if (result_.detail.empty()) result_.detail = why;
  }

  void observe(double value) {
    ++result_.checks;
    result_.worst = std::max(result_.worst, value);
  }

  PropertyResult finish(bool informational = false) {
    result_.informational = informational;
    result_.passed = informational || result_.failures == 0;
    if (result_.detail.empty()) {
      std::ostringstream s;
      s << result_.checks << " checks, worst " << result_.worst;
      result_.detail = s.str();
    }
    return result_;
  }

 private:
  PropertyResult result_;
};

std::string where(const char* what, std::uint64_t seed, double p, Vertex i, Vertex j) {
  std::ostringstream s;
  s << what << " seed=" << seed << " p=" << p << " pair=(" << i << "," << j << ")";
  return s.str();
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Context {
  const VerifyOptions& options;
  std::vector<PropertyResult>& out;

  std::uint64_t instance_seed(std::size_t k) const { return options.seed * 1000003ULL + k; }

  std::size_t size_for(std::size_t k, std::size_t cap) const {
    const std::size_t hi = std::max<std::size_t>(4, std::min(options.n, cap));
    const std::size_t lo = std::max<std::size_t>(4, hi / 2);
    std::mt19937_64 rng(instance_seed(k) ^ 0x51ed2701ULL);
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  }

  Graph random_graph(std::size_t k, std::size_t cap, bool weighted) const {
    GeneratorParams gp;
    gp.n = size_for(k, cap);
    gp.edge_probability = 0.4;
    if (weighted) {
      gp.weight_min = 0.5;
      gp.weight_max = 2.0;
    }
    return generate(GraphFamily::GnpConnected, gp, instance_seed(k));
  }

  Graph random_tree(std::size_t k) const {
    GeneratorParams gp;
    gp.n = options.n;
    gp.weight_min = 0.5;
    gp.weight_max = 2.0;
    return generate(GraphFamily::RandomTree, gp, instance_seed(k));
  }

  SolverConfig tight_solver() const {
    auto cfg = options.solver;
    cfg.grad_tol = std::min(cfg.grad_tol, 1e-10);
    return cfg;
  }

  /// log of the approximate p-resistance, honouring the fault hook.
  double log_approx_resistance(const LaplacianPinv& pinv, const Graph& g, Vertex i, Vertex j, double p) const {
    if (!options.inject_fault) return p * std::log(approx_seminorm(pinv, g, {i, j, p}));
    const Eigen::VectorXd v = pinv.column(i) + pinv.column(j);
    return p * std::log(graph_p_seminorm(g, v, conjugate_exponent(p)));
  }
};

std::vector<std::pair<Vertex, Vertex>> all_pairs(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  }
  return pairs;
}

std::vector<std::pair<Vertex, Vertex>> sample_pairs(std::size_t n, std::size_t count, std::uint64_t seed) {
  auto pairs = all_pairs(n);
  if (count < pairs.size()) {
    std::mt19937_64 rng(seed);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    pairs.resize(count);
    std::sort(pairs.begin(), pairs.end());
  }
  return pairs;
}

Eigen::VectorXd random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd x(static_cast<Eigen::Index>(n));
  for (auto& v : x) v = normal(rng);
  return x;
}

void suite_laplacian(Context& ctx) {
  Property dw("laplacian", "degree_minus_adjacency_equals_incidence_form", 1e-12);
  Property rows("laplacian", "incidence_rows_sum_to_zero", 0.0);
  Property kernel("laplacian", "laplacian_annihilates_ones", 1e-12);
  Property tree("laplacian", "random_tree_is_tree", 0.0);
  for (std::size_t k = 0; k < ctx.options.instances; ++k) {
    const auto g = ctx.random_graph(k, ctx.options.n, true);
    const auto l = laplacian(g);
    const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
    dw.check((l - laplacian_from_incidence(g)).cwiseAbs().maxCoeff() / scale,
             [&] { return where("laplacian", ctx.instance_seed(k), 0, 0, 0); });
    rows.check(incidence(g).rowwise().sum().cwiseAbs().maxCoeff(),
               [&] { return where("incidence", ctx.instance_seed(k), 0, 0, 0); });
    kernel.check((l * Eigen::VectorXd::Ones(l.cols())).cwiseAbs().maxCoeff() / scale,
                 [&] { return where("kernel", ctx.instance_seed(k), 0, 0, 0); });
    tree.check(is_tree(ctx.random_tree(k)) ? 0.0 : 1.0,
               [&] { return where("random_tree", ctx.instance_seed(k), 0, 0, 0); });
  }
  for (auto* p : {&dw, &rows, &kernel, &tree}) ctx.out.push_back(p->finish());
}

void suite_moore_penrose(Context& ctx) {
  Property prop("moore-penrose", "pseudoinverse_identities", 1e-9);
  for (std::size_t k = 0; k < ctx.options.instances; ++k) {
    const auto g = ctx.random_graph(k, ctx.options.n, true);
    const auto l = laplacian(g);
    const Eigen::MatrixXd lp = laplacian_pinv(g).matrix();
    const double r1 = (l * lp * l - l).cwiseAbs().maxCoeff() / l.cwiseAbs().maxCoeff();
    const double r2 = (lp * l * lp - lp).cwiseAbs().maxCoeff() / lp.cwiseAbs().maxCoeff();
    const Eigen::MatrixXd a = l * lp;
    const Eigen::MatrixXd b = lp * l;
    const double r3 = (a - a.transpose()).cwiseAbs().maxCoeff();
    const double r4 = (b - b.transpose()).cwiseAbs().maxCoeff();
    prop.check(std::max({r1, r2, r3, r4}), [&] { return where("pinv", ctx.instance_seed(k), 0, 0, 0); });
  }
  ctx.out.push_back(prop.finish());
}

void suite_seminorm(Context& ctx) {
  Property two("seminorm", "p2_seminorm_squared_is_laplacian_form", 1e-10);
  Property holder("seminorm", "holder_inequality", 1e-10);
  for (std::size_t k = 0; k < ctx.options.instances; ++k) {
    const auto g = ctx.random_graph(k, ctx.options.n, true);
    std::mt19937_64 rng(ctx.instance_seed(k));
    for (int t = 0; t < 5; ++t) {
      const auto x = random_vector(g.num_vertices(), rng);
      const auto y = random_vector(g.num_vertices(), rng);
      const double s = graph_p_seminorm(g, x, 2.0);
      const double form = laplacian_inner(g, x, x);
      two.check(std::abs(s * s - form) / std::max(1.0, form),
                [&] { return where("p2", ctx.instance_seed(k), 2, 0, 0); });
      for (double p : {1.2, 1.5, 3.0, 5.0, 10.0}) {
        const double lhs = laplacian_inner(g, x, y);
        const double rhs = graph_p_seminorm(g, x, p) * graph_p_seminorm(g, y, conjugate_exponent(p));
        holder.check((lhs - rhs) / std::max(1.0, rhs), [&] { return where("holder", ctx.instance_seed(k), p, 0, 0); });
      }
    }
  }
  ctx.out.push_back(two.finish());
  ctx.out.push_back(holder.finish());
}

void suite_estimator(Context& ctx) {
  Property mono("estimator", "monotone_in_restarts", 0.0);
  Property cap("estimator", "symmetric_below_one_norm", 1e-12);
  for (std::size_t k = 0; k < ctx.options.instances; ++k) {
    const auto g = ctx.random_graph(k, ctx.options.n, false);
    std::mt19937_64 rng(ctx.instance_seed(k));
    const Eigen::MatrixXd proj = edge_projector(g);
    Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(8, 8);
    for (Eigen::Index c = 0; c < 8; ++c) sym.col(c) = random_vector(8, rng);
    sym = (sym + sym.transpose()).eval();
    for (const Eigen::MatrixXd* m : std::initializer_list<const Eigen::MatrixXd*>{&proj, &sym}) {
      const double bound = std::max(matrix_one_norm(*m), matrix_inf_norm(*m));
      for (double p : {1.5, 3.0, 7.0}) {
        double previous = 0.0;
        for (std::size_t r = 0; r <= 6; ++r) {
          EstimatorSettings es;
          es.restarts = r;
          es.seed = ctx.instance_seed(k);
          const double v = matrix_op_pnorm(*m, p, es).value;
          mono.check(previous - v, [&] { return where("restarts", ctx.instance_seed(k), p, r, 0); });
          cap.check((v - bound) / bound, [&] { return where("one_norm_cap", ctx.instance_seed(k), p, r, 0); });
          previous = v;
        }
      }
    }
  }
  ctx.out.push_back(mono.finish());
  ctx.out.push_back(cap.finish());
}

void suite_alpha(Context& ctx) {
  Property range("alpha", "estimate_within_worst_case", 1e-9);
  Property ceiling("alpha", "estimate_within_interpolation_ceiling", 1e-9);
  Property at_two("alpha", "p2_projector_has_unit_norm", 1e-6);
  for (std::size_t k = 0; k < ctx.options.instances; ++k) {
    const auto plain = ctx.random_graph(k, ctx.options.n, false);
    const auto weighted = ctx.random_graph(k, ctx.options.n, true);
    for (double p : {1.5, 3.0, 5.0, 10.0}) {
      for (const Graph* g : std::initializer_list<const Graph*>{&plain, &weighted}) {
        const auto a = alpha_gp(*g, p);
        range.check(std::max(1.0 - a.alpha_estimate, a.alpha_estimate - a.worst_case),
                    [&] { return where("worst_case", ctx.instance_seed(k), p, 0, 0); });
        ceiling.check(a.alpha_estimate - a.ceiling, [&] { return where("ceiling", ctx.instance_seed(k), p, 0, 0); });
      }
    }
    at_two.check(std::abs(alpha_gp(weighted, 2.0).alpha_estimate - 1.0),
                 [&] { return where("p2", ctx.instance_seed(k), 2, 0, 0); });
  }
  for (auto* p : {&range, &ceiling, &at_two}) ctx.out.push_back(p->finish());
}

void suite_tree_exactness(Context& ctx) {
  Property prop("tree-exactness", "approximation_exact_on_trees", 1e-4);
  const auto cfg = ctx.tight_solver();
  for (std::size_t k = 0; k < ctx.options.instances; ++k) {
    const auto g = ctx.random_tree(k);
    const auto pinv = laplacian_pinv(g);
    for (double p : {1.5, 2.0, 3.0, 10.0}) {
      for (auto [i, j] : sample_pairs(g.num_vertices(), 20, ctx.instance_seed(k))) {
        const auto report = ssl_solve(g, p, i, j, cfg);
        const double gap = std::abs(std::expm1(ctx.log_approx_resistance(pinv, g, i, j, p) + report.log_energy));
        prop.check(gap, [&] { return where("tree", ctx.instance_seed(k), p, i, j); });
      }
    }
  }
  ctx.out.push_back(prop.finish());
}

void suite_sandwich(Context& ctx) {
  Property lower("sandwich", "exact_below_approximation", 1e-6);
  Property upper("sandwich", "approximation_below_alpha_power_times_exact", 1e-6);
  const auto cfg = ctx.tight_solver();
  for (std::size_t k = 0; k < ctx.options.instances; ++k) {
    const auto g = ctx.random_graph(k, 12, true);
    const auto pinv = laplacian_pinv(g);
    for (double p : {1.5, 2.0, 3.0, 5.0}) {
      const double log_alpha_p = p * std::log(alpha_gp(g, p).alpha_estimate);
      for (auto [i, j] : all_pairs(g.num_vertices())) {
        const auto report = ssl_solve(g, p, i, j, cfg);
        // log(approx / exact)
        const double log_ratio = ctx.log_approx_resistance(pinv, g, i, j, p) + report.log_energy;
        lower.check(-std::expm1(log_ratio), [&] { return where("lower", ctx.instance_seed(k), p, i, j); });
        upper.check(std::expm1(log_ratio - log_alpha_p), [&] { return where("upper", ctx.instance_seed(k), p, i, j); });
      }
    }
  }
  ctx.out.push_back(lower.finish());
  ctx.out.push_back(upper.finish());
}

void suite_p2_reduction(Context& ctx) {
  Property prop("p2-reduction", "p2_approximation_is_effective_resistance", 1e-10);
  for (std::size_t k = 0; k < ctx.options.instances; ++k) {
    const auto g = ctx.random_graph(k, ctx.options.n, true);
    const auto pinv = laplacian_pinv(g);
    for (auto [i, j] : all_pairs(g.num_vertices())) {
      const double approx = std::exp(ctx.log_approx_resistance(pinv, g, i, j, 2.0));
      const double classic = pinv.resistance2(i, j);
      prop.check(std::abs(approx - classic) / std::max(1.0, classic),
                 [&] { return where("p2", ctx.instance_seed(k), 2, i, j); });
    }
  }
  ctx.out.push_back(prop.finish());
}

void suite_triangle(Context& ctx) {
  Property exact("triangle", "exact_metric_triangle_inequality", 1e-8);
  Property approx("triangle", "approximate_metric_triangle_defect", 0.0);
  DistanceOptions opts;
  opts.solver = ctx.tight_solver();
  for (std::size_t k = 0; k < ctx.options.instances; ++k) {
    const auto g = ctx.random_graph(k, 10, true);
    const std::size_t n = g.num_vertices();
    for (double p : {1.5, 3.0}) {
      const auto d = distance_matrix(g, p, DistanceMode::Exact, DistanceForm::Metric, opts);
      const auto a = distance_matrix(g, p, DistanceMode::Approx, DistanceForm::Metric, opts);
      for (Vertex x = 0; x < n; ++x) {
        for (Vertex y = 0; y < n; ++y) {
          for (Vertex z = 0; z < n; ++z) {
            if (x == y || y == z || x == z) continue;
            exact.check(d(x, y) - d(x, z) - d(z, y), [&] { return where("triangle", ctx.instance_seed(k), p, x, y); });
            approx.observe(std::max(0.0, (a(x, y) - a(x, z) - a(z, y)) / a(x, y)));
          }
        }
      }
    }
  }
  ctx.out.push_back(exact.finish());
  ctx.out.push_back(approx.finish(true));
}

void suite_monotonicity(Context& ctx) {
  Property prop("monotonicity", "adding_an_edge_never_increases_resistance", 1e-6);
  const auto cfg = ctx.tight_solver();
  for (std::size_t k = 0; k < ctx.options.instances; ++k) {
    const auto g = ctx.random_graph(k, ctx.options.n, true);
    const std::size_t n = g.num_vertices();
    std::vector<std::vector<bool>> present(n, std::vector<bool>(n, false));
    for (const auto& e : g.edges()) present[e.i][e.j] = present[e.j][e.i] = true;
    std::vector<Edge> missing;
    for (Vertex a = 1; a < n; ++a) {
      for (Vertex b = 0; b < a; ++b) {
        if (!present[a][b]) missing.push_back({a, b, 1.0});
      }
    }
    if (missing.empty()) continue;
    std::mt19937_64 rng(ctx.instance_seed(k));
    auto edges = g.edges();
    edges.push_back(missing[std::uniform_int_distribution<std::size_t>(0, missing.size() - 1)(rng)]);
    const auto denser = build_graph(n, edges);
    for (double p : {1.5, 3.0}) {
      for (auto [i, j] : sample_pairs(n, 10, ctx.instance_seed(k))) {
        // r = exp(-log_energy); the check is log r_denser - log r_sparse <= slack.
        const double before = -ssl_solve(g, p, i, j, cfg).log_energy;
        const double after = -ssl_solve(denser, p, i, j, cfg).log_energy;
        prop.check(std::expm1(after - before), [&] { return where("monotone", ctx.instance_seed(k), p, i, j); });
      }
    }
  }
  ctx.out.push_back(prop.finish());
}

void suite_gradient(Context& ctx) {
  Property prop("gradient", "analytic_gradient_matches_central_differences", 1e-5);
  for (std::size_t k = 0; k < ctx.options.instances; ++k) {
    const auto g = ctx.random_graph(k, ctx.options.n, true);
    std::mt19937_64 rng(ctx.instance_seed(k));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double p : {1.5, 2.0, 3.0}) {
      Eigen::VectorXd x(static_cast<Eigen::Index>(g.num_vertices()));
      // Redraw until every edge difference is clear of zero.
      for (int attempt = 0; attempt < 1000; ++attempt) {
        for (auto& v : x) v = unit(rng);
        double closest = kInfinity;
        for (const auto& e : g.edges()) {
          closest = std::min(closest, std::abs(x(static_cast<Eigen::Index>(e.i)) - x(static_cast<Eigen::Index>(e.j))));
        }
        if (closest > 1e-3) break;
      }
      const Eigen::VectorXd grad = p_energy_gradient(g, x, p);
      Eigen::VectorXd fd(x.size());
      const double h = 1e-6;
      for (Eigen::Index c = 0; c < x.size(); ++c) {
        Eigen::VectorXd up = x, down = x;
        up(c) += h;
        down(c) -= h;
        fd(c) = (p_energy(g, up, p) - p_energy(g, down, p)) / (2 * h);
      }
      prop.check((grad - fd).cwiseAbs().maxCoeff() / std::max(grad.cwiseAbs().maxCoeff(), 1e-12),
                 [&] { return where("gradient", ctx.instance_seed(k), p, 0, 0); });
    }
  }
  ctx.out.push_back(prop.finish());
}

void suite_ssl(Context& ctx) {
  // The order equivalence is a theorem at p = 2. For other p it has
  // counterexamples, so only the disagreement rate is reported there.
  Property two("ssl", "potential_order_matches_resistance_order_p2", 0.0);
  Property other("ssl", "order_disagreement_fraction_other_p", 0.0);
  const auto cfg = ctx.tight_solver();
  DistanceOptions opts;
  opts.solver = cfg;
  std::size_t compared = 0, disagreements = 0;
  for (std::size_t k = 0; k < ctx.options.instances; ++k) {
    const auto g = ctx.random_graph(k, 10, true);
    const std::size_t n = g.num_vertices();
    for (double p : {1.5, 2.0, 3.0}) {
      const auto r = distance_matrix(g, p, DistanceMode::Exact, DistanceForm::Metric, opts);
      for (Vertex i = 0; i < n; ++i) {
        for (Vertex j = 0; j < n; ++j) {
          if (i == j) continue;
          const auto x = ssl_solve(g, p, i, j, cfg).potentials;
          for (Vertex l = 0; l < n; ++l) {
            if (l == i || l == j) continue;
            const auto li = static_cast<Eigen::Index>(l);
            const double dx = (x(li) - x(static_cast<Eigen::Index>(j))) - (x(static_cast<Eigen::Index>(i)) - x(li));
            const double dr = r(j, l) - r(l, i);
            if (std::abs(dx) <= 1e-6 || std::abs(dr) <= 1e-6 * std::max(r(j, l), r(l, i))) continue;
            const bool agree = (dx > 0) == (dr > 0);
            if (p == 2.0) {
              two.check(agree ? 0.0 : 1.0, [&] {
                std::ostringstream s;
                s << where("ssl", ctx.instance_seed(k), p, i, j) << " l=" << l;
                return s.str();
              });
            } else {
              ++compared;
              if (!agree) ++disagreements;
            }
          }
        }
      }
    }
  }
  if (compared > 0) other.observe(static_cast<double>(disagreements) / static_cast<double>(compared));
  ctx.out.push_back(two.finish());
  ctx.out.push_back(other.finish(true));
}

void suite_limits(Context& ctx) {
  Property cut("limits", "near_one_resistance_is_inverse_mincut", 0.1);
  Property hops("limits", "large_p_metric_is_hop_distance", 0.1);
  const auto cfg = ctx.options.solver;

  struct Case {
    Graph g;
    std::vector<std::pair<Vertex, Vertex>> pairs;
    std::string name;
  };
  std::vector<Case> cases;
  for (std::size_t k = 0; k < ctx.options.instances; ++k) {
    auto g = ctx.random_graph(k, 15, false);
    auto pairs = sample_pairs(g.num_vertices(), 5, ctx.instance_seed(k));
    cases.push_back({std::move(g), std::move(pairs), "gnp seed " + std::to_string(ctx.instance_seed(k))});
  }
  GeneratorParams broom;
  broom.delta = 3;
  broom.zeta = 3;
  cases.push_back({generate(GraphFamily::BroomA, broom), {{kBroomStart, kBroomEnd}}, "broom_a(3,3)"});
  for (auto family : {GraphFamily::ExampleG1, GraphFamily::ExampleG2, GraphFamily::ExampleG3}) {
    auto g = generate(family);
    auto pairs = sample_pairs(g.num_vertices(), 6, 7);
    cases.push_back({std::move(g), std::move(pairs), std::string(to_string(family))});
  }

  for (const auto& c : cases) {
    for (auto [i, j] : c.pairs) {
      const double r = exact_presistance(c.g, {i, j, 1.05}, cfg).resistance;
      const double target = 1.0 / mincut(c.g, i, j);
      cut.check(relative_gap(r, target), [&] { return c.name + where(" mincut", 0, 1.05, i, j); });
      const double metric = exact_presistance(c.g, {i, j, 50.0}, cfg).metric;
      const double path = shortest_path(c.g, i, j, false);
      hops.check(relative_gap(metric, path), [&] { return c.name + where(" hops", 0, 50, i, j); });
    }
  }
  ctx.out.push_back(cut.finish());
  ctx.out.push_back(hops.finish());
}

void suite_clustering(Context& ctx) {
  Property history("clustering", "kmedoids_objective_never_increases", 0.0);
  Property nearest("clustering", "assignments_are_nearest_centers", 1e-12);
  Property members("clustering", "centers_are_input_points", 0.0);
  Property gonzalez("clustering", "farthest_first_within_twice_optimal_radius", 1e-12);
  Property relabel("clustering", "error_rate_invariant_under_relabelling", 1e-15);
  DistanceOptions opts;
  opts.solver = ctx.tight_solver();
  for (std::size_t k = 0; k < ctx.options.instances; ++k) {
    const auto g = ctx.random_graph(k, 12, true);
    const std::size_t n = g.num_vertices();
    const auto d = distance_matrix(g, 3.0, DistanceMode::Exact, DistanceForm::Metric, opts);
    for (std::size_t clusters : {std::size_t{2}, std::size_t{3}}) {
      const auto seed = ctx.instance_seed(k);
      for (const auto& res : {k_medoids(d, clusters, seed), farthest_first(d, clusters, 0)}) {
        for (std::size_t s = 1; s < res.objective_history.size(); ++s) {
          history.check(res.objective_history[s] - res.objective_history[s - 1],
                        [&] { return where("history", seed, 3, s, 0); });
        }
        for (Vertex c : res.centers) {
          members.check(c < n ? 0.0 : 1.0, [&] { return where("center", seed, 3, c, 0); });
        }
        for (Vertex v = 0; v < n; ++v) {
          double best = kInfinity;
          for (Vertex c : res.centers) best = std::min(best, d(v, c));
          nearest.check(d(v, res.centers[res.assignments[v]]) - best, [&] { return where("nearest", seed, 3, v, 0); });
        }
      }

      // Optimal k-center radius by enumerating all center subsets.
      double optimal = kInfinity;
      std::vector<bool> pick(n, false);
      std::fill(pick.end() - static_cast<std::ptrdiff_t>(clusters), pick.end(), true);
      do {
        double radius = 0.0;
        for (Vertex v = 0; v < n; ++v) {
          double best = kInfinity;
          for (Vertex c = 0; c < n; ++c) {
            if (pick[c]) best = std::min(best, d(v, c));
          }
          radius = std::max(radius, best);
        }
        optimal = std::min(optimal, radius);
      } while (std::next_permutation(pick.begin(), pick.end()));
      const auto ff = farthest_first(d, clusters, 0);
      gonzalez.check((ff.objective - 2.0 * optimal) / std::max(optimal, 1e-300),
                     [&] { return where("gonzalez", ctx.instance_seed(k), 3, clusters, 0); });
    }

    std::mt19937_64 rng(ctx.instance_seed(k));
    std::vector<std::size_t> pred(40), truth(40);
    std::uniform_int_distribution<std::size_t> label(0, 3);
    for (std::size_t t = 0; t < pred.size(); ++t) {
      pred[t] = label(rng);
      truth[t] = label(rng);
    }
    std::vector<std::size_t> sigma{0, 1, 2, 3}, tau{0, 1, 2, 3};
    std::shuffle(sigma.begin(), sigma.end(), rng);
    std::shuffle(tau.begin(), tau.end(), rng);
    auto pred2 = pred, truth2 = truth;
    for (auto& v : pred2) v = sigma[v];
    for (auto& v : truth2) v = tau[v];
    relabel.check(std::abs(error_rate(pred, truth).error_rate - error_rate(pred2, truth2).error_rate),
                  [&] { return where("relabel", ctx.instance_seed(k), 0, 0, 0); });
  }
  for (auto* p : {&history, &nearest, &members, &gonzalez, &relabel}) ctx.out.push_back(p->finish());
}

void suite_knn(Context& ctx) {
  Property symmetric("knn", "adjacency_is_symmetric", 0.0);
  Property degree("knn", "union_graph_has_no_isolated_vertex", 0.0);
  for (std::size_t k = 0; k < ctx.options.instances; ++k) {
    std::mt19937_64 rng(ctx.instance_seed(k));
    FeatureDataset ds;
    const auto n = static_cast<Eigen::Index>(std::max<std::size_t>(ctx.options.n, 8) * 3);
    ds.x.resize(n, 3);
    std::normal_distribution<double> normal;
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < 3; ++c) ds.x(r, c) = normal(rng) + 4.0 * static_cast<double>(r % 3);
    }
    for (double mu : {0.05, 0.2, 1.0}) {
      GraphBuildParams params;
      params.mu = mu;
      params.sigma = 0.5;
      params.on_disconnect = OnDisconnect::LargestComponent;
      const auto built = knn_gaussian_graph(ds, params);
      const auto a = laplacian(built.graph);
      symmetric.check((a - a.transpose()).cwiseAbs().maxCoeff(),
                      [&] { return where("symmetric", ctx.instance_seed(k), mu, 0, 0); });
      for (Vertex v = 0; v < built.graph.num_vertices(); ++v) {
        degree.check(built.graph.degree(v) >= 1 ? 0.0 : 1.0,
                     [&] { return where("degree", ctx.instance_seed(k), mu, v, 0); });
      }
    }
  }
  ctx.out.push_back(symmetric.finish());
  ctx.out.push_back(degree.finish());
}

void suite_ratio(Context& ctx) {
  Property lower("ratio", "converged_ratios_at_least_one", 1e-6);
  Property unit("ratio", "ratio_one_at_p2", 1e-9);
  Property ceiling("ratio", "ratios_below_ceiling", 1e-6);
  for (std::size_t k = 0; k < ctx.options.instances; ++k) {
    const auto g = ctx.random_graph(k, 12, true);
    RatioSweepOptions opts;
    opts.seed = ctx.instance_seed(k);
    opts.solver = ctx.tight_solver();
    for (const auto& row : ratio_sweep(g, {1.5, 2.0, 3.0, 5.0}, opts)) {
      if (!row.converged) continue;
      lower.check(1.0 - row.ratio, [&] { return where("lower", opts.seed, row.p, row.i, row.j); });
      if (row.p == 2.0) unit.check(std::abs(row.ratio - 1.0), [&] { return where("p2", opts.seed, 2, row.i, row.j); });
      ceiling.check(row.ratio / row.ceiling_q - 1.0, [&] { return where("ceiling", opts.seed, row.p, row.i, row.j); });
    }
  }
  for (auto* p : {&lower, &unit, &ceiling}) ctx.out.push_back(p->finish());
}

using SuiteFn = void (*)(Context&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites{
      {"laplacian", suite_laplacian},
      {"moore-penrose", suite_moore_penrose},
      {"seminorm", suite_seminorm},
      {"estimator", suite_estimator},
      {"alpha", suite_alpha},
      {"tree-exactness", suite_tree_exactness},
      {"sandwich", suite_sandwich},
      {"p2-reduction", suite_p2_reduction},
      {"triangle", suite_triangle},
      {"monotonicity", suite_monotonicity},
      {"gradient", suite_gradient},
      {"ssl", suite_ssl},
      {"limits", suite_limits},
      {"clustering", suite_clustering},
      {"knn", suite_knn},
      {"ratio", suite_ratio},
  };
  return suites;
}

}  // namespace

bool VerifyReport::passed() const noexcept {
  return std::all_of(results.begin(), results.end(), [](const PropertyResult& r) { return r.passed; });
}

std::vector<std::string> VerifyReport::failed() const {
  std::vector<std::string> names;
  for (const auto& r : results) {
    if (!r.passed) names.push_back(r.suite + "/" + r.property);
  }
  return names;
}

std::string VerifyReport::to_json(std::string_view options_json) const {
  nlohmann::ordered_json doc;
  doc["version"] = std::string(kVersion);
  doc["passed"] = passed();
  doc["options"] = nlohmann::ordered_json::parse(options_json);
  doc["failed"] = failed();
  auto& list = doc["results"] = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json item;
    item["suite"] = r.suite;
    item["property"] = r.property;
    item["passed"] = r.passed;
    item["informational"] = r.informational;
    item["checks"] = r.checks;
    item["failures"] = r.failures;
    item["worst"] = std::isfinite(r.worst) ? nlohmann::ordered_json(r.worst) : nlohmann::ordered_json(nullptr);
    item["tolerance"] = r.tolerance;
    item["detail"] = r.detail;
    list.push_back(std::move(item));
  }
  return doc.dump(2);
}

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

VerifyReport run_verify(const VerifyOptions& options) {
  if (options.n < 4) throw Error(ErrorKind::InvalidParams, "verify needs n >= 4");
  if (options.instances == 0) throw Error(ErrorKind::InvalidParams, "verify needs at least one instance");
  options.solver.validate();
  for (const auto& s : options.suites) {
    const auto& names = verify_suite_names();
    if (std::find(names.begin(), names.end(), s) == names.end()) {
      throw Error(ErrorKind::InvalidParams, "unknown suite '" + s + "'");
    }
  }
  VerifyReport report;
  Context ctx{options, report.results};
  for (const auto& [name, fn] : registry()) {
    if (!options.suites.empty() && std::find(options.suites.begin(), options.suites.end(), name) == options.suites.end()) {
      continue;
    }
    try {
      fn(ctx);
    } catch (const std::exception& e) {
      PropertyResult r;
      r.suite = name;
      r.property = "suite_completed";
      r.passed = false;
      r.failures = 1;
      r.detail = e.what();
      report.results.push_back(std::move(r));
    }
  }
  return report;
}

}  // namespace presist
