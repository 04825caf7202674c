#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "presist/alpha.hpp"
#include "presist/error.hpp"
#include "presist/laplacian_pinv.hpp"
#include "presist/norms.hpp"
#include "presist/operator_norm.hpp"

namespace presist {
namespace {

namespace fs = std::filesystem;

TEST(Norms, ConjugateExponent) {
  EXPECT_DOUBLE_EQ(conjugate_exponent(2.0), 2.0);
  EXPECT_DOUBLE_EQ(conjugate_exponent(3.0), 1.5);
  EXPECT_DOUBLE_EQ(conjugate_exponent(1.5), 3.0);
  EXPECT_THROW(conjugate_exponent(1.0), Error);
  EXPECT_THROW(require_p_above_one(0.5), Error);
  EXPECT_THROW(require_p_above_one(std::nan("")), Error);
  EXPECT_THROW(require_p_above_one(kInfinity), Error);
}

TEST(Norms, WeightedPNormMatchesDefinition) {
  Eigen::VectorXd x(3), w(3);
  x << 1.0, -2.0, 3.0;
  w << 1.0, 0.5, 2.0;
  EXPECT_NEAR(weighted_p_norm(x, w, 3.0), std::cbrt(1.0 + 0.5 * 8.0 + 2.0 * 27.0), 1e-12);
  EXPECT_DOUBLE_EQ(p_norm(x, kInfinity), 3.0);
  EXPECT_NEAR(p_norm(x, 2.0), std::sqrt(14.0), 1e-12);
  // Max-abs scaling keeps large p finite.
  Eigen::VectorXd big = Eigen::VectorXd::Constant(4, 1e200);
  EXPECT_NEAR(p_norm(big, 50.0) / 1e200, std::pow(4.0, 1.0 / 50.0), 1e-12);
  EXPECT_THROW(weighted_p_norm(x, Eigen::VectorXd::Ones(2), 2.0), Error);
}

TEST(Norms, SeminormVanishesOnConstantsAndIsHomogeneous) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = oracle::random_graph(8, seed);
    for (double p : {1.5, 2.0, 3.0, 7.0}) {
      EXPECT_NEAR(graph_p_seminorm(g, Eigen::VectorXd::Constant(8, 4.2), p), 0.0, 1e-12);
      Eigen::VectorXd x(8), y(8);
      for (int k = 0; k < 8; ++k) {
        x[k] = gauss(rng);
        y[k] = gauss(rng);
      }
      const double nx = graph_p_seminorm(g, x, p);
      EXPECT_NEAR(graph_p_seminorm(g, -2.5 * x, p), 2.5 * nx, 1e-10 * nx);
      EXPECT_NEAR(graph_p_seminorm(g, x + Eigen::VectorXd::Constant(8, 7.0), p), nx, 1e-10 * nx);
      EXPECT_LE(graph_p_seminorm(g, x + y, p), nx + graph_p_seminorm(g, y, p) + 1e-12);
      EXPECT_NEAR(graph_p_energy(g, x, p), oracle::energy(g, x, p), 1e-10 * oracle::energy(g, x, p));
    }
  }
}

TEST(Norms, LaplacianInnerProduct) {
  const auto g = oracle::random_graph(7, 11);
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(7, -1.0, 2.0);
  const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(7, 3.0, 0.5).array().square();
  EXPECT_NEAR(laplacian_inner(g, x, y), x.dot(oracle::dense_laplacian(g) * y), 1e-12);
  EXPECT_NEAR(laplacian_inner(g, x, x), std::pow(graph_p_seminorm(g, x, 2.0), 2.0), 1e-12);
}

TEST(LaplacianPinv, MoorePenroseConditions) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto g = oracle::random_graph(10, seed);
    const Eigen::MatrixXd l = oracle::dense_laplacian(g);
    for (auto method : {PinvMethod::Auto, PinvMethod::Shift, PinvMethod::Eigen}) {
      const Eigen::MatrixXd lp = laplacian_pinv(g, method).matrix();
      EXPECT_LT((l * lp * l - l).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LT((lp * l * lp - lp).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LT((l * lp - (l * lp).transpose()).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LT((lp - oracle::svd_pinv(l)).cwiseAbs().maxCoeff(), 1e-9);
      EXPECT_LT((lp * Eigen::VectorXd::Ones(10)).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(LaplacianPinv, ClassicResistanceOnPathAndCycle) {
  GeneratorParams p;
  p.n = 6;
  const auto path = laplacian_pinv(generate(GraphFamily::Path, p));
  EXPECT_NEAR(path.resistance2(0, 5), 5.0, 1e-10);
  EXPECT_NEAR(path.resistance2(2, 4), 2.0, 1e-10);
  const auto cycle = laplacian_pinv(generate(GraphFamily::Cycle, p));
  // Two parallel paths of lengths k and n - k.
  EXPECT_NEAR(cycle.resistance2(0, 2), 2.0 * 4.0 / 6.0, 1e-10);
  EXPECT_NEAR(cycle.resistance2(0, 3), 3.0 * 3.0 / 6.0, 1e-10);
}

TEST(LaplacianPinv, SaveLoadRoundTripAndFingerprintCheck) {
  const auto g = oracle::random_graph(9, 2);
  const auto lp = laplacian_pinv(g);
  const auto path = fs::temp_directory_path() / "presist_pinv_test.bin";
  lp.save(path);
  const auto back = LaplacianPinv::load(path, g.fingerprint());
  EXPECT_EQ(back.matrix(), lp.matrix());
  try {
    LaplacianPinv::load(path, oracle::random_graph(9, 3).fingerprint());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FingerprintMismatch);
  }
  fs::resize_file(path, 40);
  EXPECT_THROW(LaplacianPinv::load(path, g.fingerprint()), Error);
  fs::remove(path);
}

Eigen::MatrixXd random_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = gauss(rng);
  }
  return m;
}

TEST(OperatorNorm, ClosedFormsAtOneTwoAndInfinity) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto m = random_matrix(7, 7, seed);
    EXPECT_DOUBLE_EQ(matrix_op_pnorm(m, 1.0).value, m.cwiseAbs().colwise().sum().maxCoeff());
    EXPECT_DOUBLE_EQ(matrix_op_pnorm(m, kInfinity).value, m.cwiseAbs().rowwise().sum().maxCoeff());
    EXPECT_TRUE(matrix_op_pnorm(m, 1.0).exact);
    const double spectral = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()[0];
    EXPECT_NEAR(matrix_op_pnorm(m, 2.0).value, spectral, 1e-8 * spectral);
  }
}

TEST(OperatorNorm, EstimateIsAttainedLowerBoundBelowInterpolationCeiling) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto m = random_matrix(6, 6, seed + 100);
    for (double p : {1.3, 1.7, 3.0, 6.0}) {
      const double est = matrix_op_pnorm(m, p).value;
      const double ceiling = std::pow(matrix_one_norm(m), 1.0 / p) * std::pow(matrix_inf_norm(m), 1.0 - 1.0 / p);
      EXPECT_LE(est, ceiling * (1.0 + 1e-12));
      // Random sampling never beats the estimator by more than a little.
      double sampled = 0.0;
      for (int t = 0; t < 2000; ++t) {
        Eigen::VectorXd x(6);
        for (int k = 0; k < 6; ++k) x[k] = gauss(rng);
        sampled = std::max(sampled, p_norm(m * x, p) / p_norm(x, p));
      }
      EXPECT_GE(est, sampled * (1.0 - 1e-9));
    }
  }
}

TEST(OperatorNorm, DeterministicForSeed) {
  const auto m = random_matrix(5, 5, 4);
  EstimatorSettings s;
  s.seed = 17;
  EXPECT_EQ(matrix_op_pnorm(m, 1.7, s).value, matrix_op_pnorm(m, 1.7, s).value);
}

TEST(Alpha, EdgeProjectorIsIdempotentAndMatchesPseudoinverseOnUnweighted) {
  GeneratorParams p;
  p.n = 7;
  const auto g = generate(GraphFamily::Complete, p);
  const Eigen::MatrixXd c = incidence(g);
  const Eigen::MatrixXd proj = edge_projector(g);
  EXPECT_LT((proj * proj - proj).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((proj - c * oracle::svd_pinv(c)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((proj * c - c).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Alpha, WeightedProjectorIsOrthogonalInWeightedInnerProduct) {
  const auto g = oracle::random_graph(8, 5);
  const Eigen::MatrixXd proj = edge_projector(g);
  const Eigen::VectorXd w = g.weights();
  // W P symmetric means P is self-adjoint for <a, b>_W.
  const Eigen::MatrixXd wp = w.asDiagonal() * proj;
  EXPECT_LT((wp - wp.transpose()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((proj * proj - proj).cwiseAbs().maxCoeff(), 1e-10);
  // Weighted projector at p = 2 is symmetric, so its 2-norm is one.
  const Eigen::MatrixXd m = weighted_edge_projector(g, 2.0);
  EXPECT_LT((m - m.transpose()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Alpha, OneOnTreesAndAtPTwo) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto tree = oracle::random_tree(9, seed);
    for (double p : {1.5, 3.0, 8.0}) EXPECT_NEAR(alpha_gp(tree, p).alpha_estimate, 1.0, 1e-9);
    const auto g = oracle::random_graph(9, seed);
    EXPECT_NEAR(alpha_gp(g, 2.0).alpha_estimate, 1.0, 1e-8);
  }
}

TEST(Alpha, WithinWorstCaseAndAtLeastOne) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    for (const auto& g : {oracle::random_graph(10, seed), oracle::random_graph(10, seed, 0.4, 1.0, 1.0)}) {
      for (double p : {1.2, 1.5, 3.0, 5.0, 12.0}) {
        const auto b = alpha_gp(g, p);
        EXPECT_GE(b.alpha_estimate, 1.0 - 1e-9);
        EXPECT_TRUE(b.within_worst_case()) << "p=" << p << " seed=" << seed;
        EXPECT_LE(b.alpha_estimate, b.ceiling * (1.0 + 1e-12));
        EXPECT_NEAR(b.worst_case, std::pow(static_cast<double>(g.num_edges()), std::abs(0.5 - 1.0 / p)), 1e-12);
      }
    }
  }
}

TEST(Alpha, CycleProjectorOneNorm) {
  // Oracle: the projector onto range(C) for a cycle is I - 11^T/n in the
  // edge basis (the kernel of C^T is the single circulation), so its
  // one-norm is (1 - 1/n) + (n - 1)/n.
  for (std::size_t n : {5, 10, 20, 40}) {
    GeneratorParams p;
    p.n = n;
    const auto b = alpha_gp(generate(GraphFamily::Cycle, p), 3.0);
    const double nn = static_cast<double>(n);
    EXPECT_NEAR(b.cc_pinv_one_norm, 2.0 - 2.0 / nn, 1e-10);
  }
}

TEST(Alpha, CompleteGraphProjectorNormsAtMostFour) {
  for (std::size_t n : {5, 10, 20, 40}) {
    GeneratorParams p;
    p.n = n;
    const auto g = generate(GraphFamily::Complete, p);
    const Eigen::MatrixXd c = incidence(g);
    const Eigen::MatrixXd proj = c * oracle::svd_pinv(c);
    EXPECT_LE(matrix_inf_norm(proj), 4.0 + 1e-10);
    EXPECT_LE(matrix_one_norm(proj), 4.0 + 1e-10);
    for (double q : {1.5, 3.0}) EXPECT_LE(alpha_gp(g, q).alpha_estimate, 4.0);
  }
}

TEST(Alpha, RejectsPAtMostOne) { EXPECT_THROW(alpha_gp(oracle::random_graph(5, 1), 1.0), Error); }

}  // namespace
}  // namespace presist
