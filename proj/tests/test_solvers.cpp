// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ddfr/solvers.hpp"

namespace {

using namespace ddfr;

ComplexMatrix gaussian_dictionary(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  ComplexMatrix a(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) a(i, j) = {nd(rng), nd(rng)};
    a.col(j).normalize();
  }
  return a;
}

// Instance solved once offline with cvxpy (CLARABEL) by tests/oracles/bpdn_reference.py.
struct BpdnReference {
  ComplexMatrix a;
  ComplexVector y;
};

BpdnReference bpdn_instance() {
  constexpr int m = 12, n = 30;
  BpdnReference r{ComplexMatrix(m, n), ComplexVector(m)};
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < n; ++k) {
      r.a(i, k) = unit_phasor(0.37 * (i + 1) * (k + 1) + 0.11 * (k + 1) * (k + 1)) / std::sqrt(double(m));
    }
  }
  r.y = 1.5 * r.a.col(3) + Complex(-0.7, 0.4) * r.a.col(17) + Complex(0.0, 0.3) * r.a.col(25);
  for (int i = 0; i < m; ++i) r.y(i) += Complex(0.05 * std::cos(1.3 * i), 0.05 * std::sin(0.7 * i));
  return r;
}

TEST(Omp, RecoversSparseNoiselessSupports) {
  const ComplexMatrix a = gaussian_dictionary(60, 120, 5);
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> pick(0, 119);
  std::uniform_real_distribution<double> mag(0.5, 1.5), ph(0.0, kTwoPi);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Index> support;
    while (support.size() < 3) {
      const Index q = pick(rng);
      if (std::find(support.begin(), support.end(), q) == support.end()) support.push_back(q);
    }
    ComplexVector z = ComplexVector::Zero(120);
    for (Index q : support) z(q) = mag(rng) * unit_phasor(ph(rng));
    const SolverResult r = omp(a, a * z, 3, 1e-10);
    std::sort(support.begin(), support.end());
    ASSERT_EQ(r.support, support) << "trial " << trial;
    EXPECT_LT((r.coefficients - z).norm(), 1e-9);
    EXPECT_TRUE(r.converged);
  }
}

TEST(Omp, TiesGoToLowestIndexAndZeroInputStops) {
  ComplexMatrix a(3, 3);
  a << 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0;
  ComplexVector y(3);
  y << 2.0, 0.0, 0.0;
  const SolverResult r = omp(a, y, 1, 0.0);
  ASSERT_EQ(r.support, std::vector<Index>{0});
  const SolverResult zero = omp(a, ComplexVector::Zero(3), 2, 1e-12);
  EXPECT_TRUE(zero.support.empty());
  EXPECT_EQ(zero.iterations, 0);
}

TEST(Omp, ResidualDecreasesMonotonically) {
  const ComplexMatrix a = gaussian_dictionary(20, 50, 9);
  std::mt19937_64 rng(10);
  std::normal_distribution<double> nd;
  ComplexVector y(20);
  for (Index i = 0; i < 20; ++i) y(i) = {nd(rng), nd(rng)};
  double prev = y.norm();
  for (Index k = 1; k <= 8; ++k) {
    const double res = omp(a, y, k, 0.0).residual_norm;
    EXPECT_LE(res, prev + 1e-12);
    prev = res;
  }
}

TEST(Bpdn, MatchesFrozenConvexOptimum) {
  const auto inst = bpdn_instance();
  const struct {
    double eps;
    double optimum;
  } cases[] = {{0.1, 2.5955134846578343}, {0.3, 2.128710240226785}};
  for (const auto& c : cases) {
    BpdnOptions opts;
    opts.max_iterations = 20000;
    opts.tolerance = 1e-12;
    opts.bisection_steps = 30;
    const SolverResult r = bpdn_l1(inst.a, inst.y, c.eps, opts);
    EXPECT_LE(r.residual_norm, c.eps * (1.0 + 1e-3));
    EXPECT_NEAR(r.coefficients.cwiseAbs().sum(), c.optimum, 5e-3 * c.optimum) << "eps " << c.eps;
  }
}

TEST(Bpdn, LargeEpsilonGivesZeroAndNegativeRejected) {
  const auto inst = bpdn_instance();
  const SolverResult r = bpdn_l1(inst.a, inst.y, inst.y.norm() * 1.01);
  EXPECT_TRUE(r.support.empty());
  EXPECT_TRUE(r.converged);
  EXPECT_THROW(bpdn_l1(inst.a, inst.y, -1.0), ParameterError);
  EXPECT_THROW(bpdn_l1(inst.a, ComplexVector::Zero(3), 0.1), ParameterError);
}

TEST(Bpdn, ShrinkingEpsilonNeverLowersL1Norm) {
  const auto inst = bpdn_instance();
  double prev = 0.0;
  for (double eps : {0.6, 0.4, 0.2, 0.1}) {
    const double l1 = bpdn_l1(inst.a, inst.y, eps).coefficients.cwiseAbs().sum();
    EXPECT_GE(l1, prev * (1.0 - 1e-3));
    prev = l1;
  }
}

TEST(DefaultEpsilon, Formula) {
  EXPECT_NEAR(default_epsilon(2.0, 800), 2.0 * std::sqrt(800.0 + 2.0 * std::sqrt(1600.0)), 1e-12);
}

TEST(Tsvd, FullRankEqualsPseudoInverse) {
  const ComplexMatrix a = gaussian_dictionary(8, 20, 12);
  const ComplexVector y = a * ComplexVector::Ones(20);
  const SolverResult r = tsvd_solve(a, y, RelativeThreshold{1e-12});
  const ComplexVector want = a.completeOrthogonalDecomposition().solve(y);
  EXPECT_LT((r.coefficients - want).norm(), 1e-10 * want.norm());
  EXPECT_LT(r.residual_norm, 1e-10);
}

TEST(Tsvd, TruncationFollowsSvdFormula) {
  const ComplexMatrix a = gaussian_dictionary(10, 14, 13);
  const ComplexVector y = a.col(2) + 0.5 * a.col(7);
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Index t = 4;
  ComplexVector want = ComplexVector::Zero(14);
  for (Index i = 0; i < t; ++i) {
    want += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(y) / svd.singularValues()(i));
  }
  const TsvdSolver solver(a);
  EXPECT_EQ(solver.kept_rank(TruncationRank{t}), t);
  const SolverResult r = solver.solve(y, TruncationRank{t});
  EXPECT_LT((r.coefficients - want).norm(), 1e-10 * want.norm());
  // threshold picks every sigma above threshold * sigma_1
  const auto& s = solver.singular_values();
  const double thr = 0.5 * (s(3) + s(4)) / s(0);
  EXPECT_EQ(solver.kept_rank(RelativeThreshold{thr}), 4);
}

TEST(Correlator, IsAdjointProduct) {
  const ComplexMatrix a = gaussian_dictionary(6, 9, 14);
  const ComplexVector y = ComplexVector::Random(6);
  const SolverResult r = correlator_solve(a, y);
  EXPECT_LT((r.coefficients - a.adjoint() * y).norm(), 1e-13);
  EXPECT_NEAR(r.residual_norm, (y - a * r.coefficients).norm(), 1e-12);
}

TEST(ResultIo, JsonRoundTrip) {
  SolverResult r;
  r.solver = "omp";
  r.coefficients = ComplexVector::Zero(4);
  r.coefficients(2) = {1.5, -0.25};
  r.support = {2};
  r.residual_norm = 0.125;
  r.iterations = 3;
  r.converged = true;
  r.lambda = 0.5;
  const SolverResult back = result_from_json(result_to_json(r));
  EXPECT_EQ(back.solver, "omp");
  EXPECT_EQ(back.coefficients, r.coefficients);
  EXPECT_EQ(back.support, r.support);
  EXPECT_EQ(back.iterations, 3);
  EXPECT_TRUE(back.converged);
  EXPECT_DOUBLE_EQ(back.lambda, 0.5);
  EXPECT_THROW(result_from_json(nlohmann::json{{"solver", 3}}), ConfigError);
}

}  // namespace
