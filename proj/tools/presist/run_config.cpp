#include "run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string_view>

#include "presist/distance_matrix.hpp"
#include "presist/version.hpp"

namespace presist::cli {

namespace {

using Json = nlohmann::json;
using Ordered = nlohmann::ordered_json;

constexpr const char* kConfigPrefix = "# config ";

std::string init_name(SolverInit init) { return init == SolverInit::Zeros ? "zeros" : "p2_warmstart"; }

std::string method_name(SolverMethod m) { return m == SolverMethod::GradientDescent ? "gradient_descent" : "newton"; }

template <typename T>
void read(const Json& doc, const char* key, T& into, const std::string& where) {
  if (!doc.contains(key)) return;
  try {
    into = doc.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw UsageError("--config", "bad value for '" + where + key + "': " + e.what());
  }
}

void reject_unknown(const Json& doc, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& item : doc.items()) {
    bool found = false;
    for (const char* k : known) found = found || item.key() == k;
    if (!found) throw UsageError("--config", "unknown key '" + where + item.key() + "'");
  }
}

void require_object(const Json& doc, const std::string& where) {
  if (!doc.is_object()) throw UsageError("--config", "'" + where + "' must be an object");
}

}  // namespace

Ordered to_json(const RunConfig& c) {
  Ordered j;
  j["subcommand"] = c.subcommand;
  j["inputs"] = {{"features", c.features},
                 {"graph", c.graph},
                 {"distances", c.distances},
                 {"labels", c.labels},
                 {"pinv_cache", c.pinv_cache}};
  j["dataset"] = {{"has_labels", c.has_labels},
                  {"label_column", c.label_column},
                  {"skip_rows", c.skip_rows},
                  {"delimiter", c.delimiter},
                  {"standardize", c.standardize}};
  j["graph_build"] = {{"mu", c.mu},
                      {"sigma", c.sigma},
                      {"symmetrization", c.symmetrization},
                      {"on_disconnect", c.on_disconnect}};
  j["generator"] = {{"family", c.family},
                    {"n", c.generator.n},
                    {"edge_probability", c.generator.edge_probability},
                    {"delta", c.generator.delta},
                    {"zeta", c.generator.zeta},
                    {"epsilon", c.generator.epsilon},
                    {"weight_min", c.generator.weight_min},
                    {"weight_max", c.generator.weight_max},
                    {"seed", c.graph_seed}};
  j["p"] = c.p;
  j["mode"] = c.mode;
  j["form"] = c.form;
  j["k"] = c.k;
  j["method"] = c.method;
  j["start"] = c.start;
  j["seed"] = c.seed;
  j["restarts"] = c.restarts;
  j["p_grid"] = c.p_grid;
  j["mu_grid"] = c.mu_grid;
  j["sigma_grid"] = c.sigma_grid;
  j["methods"] = c.methods;
  j["repetitions"] = c.repetitions;
  j["estimator_restarts"] = c.estimator_restarts;
  j["pairs"] = c.pairs;
  j["verify"] = {{"suites", c.suites}, {"n", c.verify_n}, {"instances", c.instances}, {"inject_fault", c.inject_fault}};
  j["solver"] = {{"grad_tol", c.solver.grad_tol},
                 {"rel_energy_tol", c.solver.rel_energy_tol},
                 {"max_iter", c.solver.max_iter},
                 {"smoothing_eps", c.solver.smoothing_eps},
                 {"init", init_name(c.solver.init)},
                 {"method", method_name(c.solver.method)}};
  j["outputs"] = {{"output", c.output},
                  {"report", c.report},
                  {"timing", c.timing},
                  {"summary", c.summary},
                  {"labels_out", c.labels_out}};
  return j;
}

void apply_json(RunConfig& c, const Json& input) {
  const Json& doc = input.contains("config") && input.contains("tool") ? input.at("config") : input;
  require_object(doc, "config");
  reject_unknown(doc,
                 {"subcommand", "inputs", "dataset", "graph_build", "generator", "p", "mode", "form", "k", "method",
                  "start", "seed", "restarts", "p_grid", "mu_grid", "sigma_grid", "methods", "repetitions",
                  "estimator_restarts", "pairs", "verify", "solver", "outputs"},
                 "");
  read(doc, "subcommand", c.subcommand, "");
  if (doc.contains("inputs")) {
    const auto& s = doc.at("inputs");
    require_object(s, "inputs");
    reject_unknown(s, {"features", "graph", "distances", "labels", "pinv_cache"}, "inputs.");
    read(s, "features", c.features, "inputs.");
    read(s, "graph", c.graph, "inputs.");
    read(s, "distances", c.distances, "inputs.");
    read(s, "labels", c.labels, "inputs.");
    read(s, "pinv_cache", c.pinv_cache, "inputs.");
  }
  if (doc.contains("dataset")) {
    const auto& s = doc.at("dataset");
    require_object(s, "dataset");
    reject_unknown(s, {"has_labels", "label_column", "skip_rows", "delimiter", "standardize"}, "dataset.");
    read(s, "has_labels", c.has_labels, "dataset.");
    read(s, "label_column", c.label_column, "dataset.");
    read(s, "skip_rows", c.skip_rows, "dataset.");
    read(s, "delimiter", c.delimiter, "dataset.");
    read(s, "standardize", c.standardize, "dataset.");
  }
  if (doc.contains("graph_build")) {
    const auto& s = doc.at("graph_build");
    require_object(s, "graph_build");
    reject_unknown(s, {"mu", "sigma", "symmetrization", "on_disconnect"}, "graph_build.");
    read(s, "mu", c.mu, "graph_build.");
    read(s, "sigma", c.sigma, "graph_build.");
    read(s, "symmetrization", c.symmetrization, "graph_build.");
    read(s, "on_disconnect", c.on_disconnect, "graph_build.");
  }
  if (doc.contains("generator")) {
    const auto& s = doc.at("generator");
    require_object(s, "generator");
    reject_unknown(s, {"family", "n", "edge_probability", "delta", "zeta", "epsilon", "weight_min", "weight_max", "seed"},
                   "generator.");
    read(s, "family", c.family, "generator.");
    read(s, "n", c.generator.n, "generator.");
    read(s, "edge_probability", c.generator.edge_probability, "generator.");
    read(s, "delta", c.generator.delta, "generator.");
    read(s, "zeta", c.generator.zeta, "generator.");
    read(s, "epsilon", c.generator.epsilon, "generator.");
    read(s, "weight_min", c.generator.weight_min, "generator.");
    read(s, "weight_max", c.generator.weight_max, "generator.");
    read(s, "seed", c.graph_seed, "generator.");
  }
  read(doc, "p", c.p, "");
  read(doc, "mode", c.mode, "");
  read(doc, "form", c.form, "");
  read(doc, "k", c.k, "");
  read(doc, "method", c.method, "");
  read(doc, "start", c.start, "");
  read(doc, "seed", c.seed, "");
  read(doc, "restarts", c.restarts, "");
  read(doc, "p_grid", c.p_grid, "");
  read(doc, "mu_grid", c.mu_grid, "");
  read(doc, "sigma_grid", c.sigma_grid, "");
  read(doc, "methods", c.methods, "");
  read(doc, "repetitions", c.repetitions, "");
  read(doc, "estimator_restarts", c.estimator_restarts, "");
  read(doc, "pairs", c.pairs, "");
  if (doc.contains("verify")) {
    const auto& s = doc.at("verify");
    require_object(s, "verify");
    reject_unknown(s, {"suites", "n", "instances", "inject_fault"}, "verify.");
    read(s, "suites", c.suites, "verify.");
    read(s, "n", c.verify_n, "verify.");
    read(s, "instances", c.instances, "verify.");
    read(s, "inject_fault", c.inject_fault, "verify.");
  }
  if (doc.contains("solver")) {
    const auto& s = doc.at("solver");
    require_object(s, "solver");
    reject_unknown(s, {"grad_tol", "rel_energy_tol", "max_iter", "smoothing_eps", "init", "method"}, "solver.");
    read(s, "grad_tol", c.solver.grad_tol, "solver.");
    read(s, "rel_energy_tol", c.solver.rel_energy_tol, "solver.");
    read(s, "max_iter", c.solver.max_iter, "solver.");
    read(s, "smoothing_eps", c.solver.smoothing_eps, "solver.");
    std::string init = init_name(c.solver.init), method = method_name(c.solver.method);
    read(s, "init", init, "solver.");
    read(s, "method", method, "solver.");
    if (init != "zeros" && init != "p2_warmstart") throw UsageError("--config", "solver.init must be zeros or p2_warmstart");
    if (method != "newton" && method != "gradient_descent") {
      throw UsageError("--config", "solver.method must be newton or gradient_descent");
    }
    c.solver.init = init == "zeros" ? SolverInit::Zeros : SolverInit::P2Warmstart;
    c.solver.method = method == "newton" ? SolverMethod::Newton : SolverMethod::GradientDescent;
  }
  if (doc.contains("outputs")) {
    const auto& s = doc.at("outputs");
    require_object(s, "outputs");
    reject_unknown(s, {"output", "report", "timing", "summary", "labels_out"}, "outputs.");
    read(s, "output", c.output, "outputs.");
    read(s, "report", c.report, "outputs.");
    read(s, "timing", c.timing, "outputs.");
    read(s, "summary", c.summary, "outputs.");
    read(s, "labels_out", c.labels_out, "outputs.");
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("--config", "cannot open '" + path + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::string json_text = text;
  if (text.rfind("PRDM", 0) == 0) {
    json_text = load_distance_matrix(path).metadata;
  } else if (!text.empty() && text.front() == '#') {
    // Text artifact: the configuration sits on its "# config " line.
    std::istringstream lines(text);
    std::string line;
    json_text.clear();
    while (std::getline(lines, line)) {
      if (line.rfind(kConfigPrefix, 0) == 0) {
        json_text = line.substr(std::string_view(kConfigPrefix).size());
        break;
      }
    }
    if (json_text.empty()) throw UsageError("--config", "no '# config' line in '" + path + "'");
  }
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw UsageError("--config", std::string("invalid JSON: ") + e.what());
  }
  apply_json(cfg, doc);
}

Ordered provenance(const RunConfig& cfg) {
  Ordered j;
  j["tool"] = "presist";
  j["version"] = std::string(kVersion);
  j["config"] = to_json(cfg);
  return j;
}

std::vector<std::string> provenance_lines(const RunConfig& cfg) {
  return {"presist " + std::string(kVersion), std::string(kConfigPrefix).substr(2) + provenance(cfg).dump()};
}

std::size_t default_workers() {
  const char* env = std::getenv("PRESIST_WORKERS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long long v = std::strtoll(env, &end, 10);
  if (*end != '\0' || v < 0) throw UsageError("PRESIST_WORKERS", std::string("not a worker count: '") + env + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace presist::cli
