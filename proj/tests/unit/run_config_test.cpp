#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "run_config.hpp"

namespace presist::cli {
namespace {

RunConfig sample() {
  RunConfig c;
  c.subcommand = "distances";
  c.features = "iris.csv";
  c.skip_rows = 1;
  c.mu = 0.5;
  c.sigma = 2.0;
  c.symmetrization = "mutual";
  c.p = 1.7;
  c.mode = "exact";
  c.form = "resistance";
  c.p_grid = {1.5, 3.0};
  c.methods = {"kmedoids_approx"};
  c.solver.grad_tol = 1e-9;
  c.solver.max_iter = 77;
  c.solver.init = SolverInit::Zeros;
  c.solver.method = SolverMethod::GradientDescent;
  c.output = "out.bin";
  return c;
}

TEST(RunConfig, JsonRoundTrip) {
  const auto original = sample();
  RunConfig back;
  apply_json(back, nlohmann::json::parse(to_json(original).dump()));
  EXPECT_EQ(to_json(back), to_json(original));
  EXPECT_EQ(back.solver.max_iter, 77u);
  EXPECT_EQ(back.solver.method, SolverMethod::GradientDescent);
  EXPECT_EQ(back.p_grid, original.p_grid);
}

TEST(RunConfig, AcceptsProvenanceEnvelope) {
  RunConfig back;
  apply_json(back, nlohmann::json::parse(provenance(sample()).dump()));
  EXPECT_EQ(back.p, 1.7);
  EXPECT_EQ(back.mode, "exact");
}

TEST(RunConfig, RejectsUnknownKeysAndBadValues) {
  RunConfig c;
  EXPECT_THROW(apply_json(c, nlohmann::json::parse(R"({"bogus": 1})")), UsageError);
  EXPECT_THROW(apply_json(c, nlohmann::json::parse(R"({"solver": {"tol": 1}})")), UsageError);
  EXPECT_THROW(apply_json(c, nlohmann::json::parse(R"({"p": "two"})")), UsageError);
  EXPECT_THROW(apply_json(c, nlohmann::json::parse(R"({"solver": {"init": "random"}})")), UsageError);
  EXPECT_THROW(apply_json(c, nlohmann::json::parse("[1, 2]")), UsageError);
}

TEST(RunConfig, ReadsConfigLineFromTextArtifacts) {
  const auto path = std::filesystem::temp_directory_path() / "presist_cfg_test.csv";
  {
    std::ofstream out(path);
    for (const auto& line : provenance_lines(sample())) out << "# " << line << "\n";
    out << "1,2\n";
  }
  RunConfig c;
  apply_config_file(c, path.string());
  EXPECT_EQ(c.sigma, 2.0);
  EXPECT_EQ(c.symmetrization, "mutual");
  std::filesystem::remove(path);
  EXPECT_THROW(apply_config_file(c, path.string()), UsageError);
}

}  // namespace
}  // namespace presist::cli
