// SPDX-License-Identifier: Apache-2.0
#include <random>

#include <gtest/gtest.h>

#include "ddfr/operator.hpp"

namespace {

using namespace ddfr;

ComplexVector random_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  ComplexVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = {nd(rng), nd(rng)};
  return v;
}

class FactoredVsDense : public ::testing::TestWithParam<int> {};

GDictionary make_dict(int kind) {
  const auto geometry = ArrayGeometry::ula(5, 15.0, 1500.0);
  const SamplingGrid grid(0.2, 120.0, 24);
  if (kind == 0) return build_g_direct(geometry, grid, {10.0, 17.5, 40.0}, {-80.0, -10.0, 0.0, 33.0});
  return build_g_constant_delta(geometry, grid, 10.0, 50.0, 6, 11);
}

TEST_P(FactoredVsDense, ProductsMatchDenseMatrix) {
  const auto dict = make_dict(GetParam());
  const ComplexMatrix g = dict.atoms();
  const FactoredOperator op(dict);
  ASSERT_EQ(op.rows(), g.rows());
  ASSERT_EQ(op.cols(), g.cols());
  const ComplexVector z = random_vector(op.cols(), 1);
  const ComplexVector y = random_vector(op.rows(), 2);
  EXPECT_LT((op.apply(z) - g * z).norm(), 1e-11 * (g * z).norm());
  EXPECT_LT((op.adjoint(y) - g.adjoint() * y).norm(), 1e-11 * (g.adjoint() * y).norm());
  for (Index q = 0; q < op.cols(); ++q) EXPECT_LT((op.column(q) - g.col(q)).norm(), 1e-12);
  EXPECT_LT((op.column_norms() - g.colwise().norm().transpose()).norm(), 1e-12);
  EXPECT_LT((op.dense() - g).norm(), 1e-11);
}

TEST_P(FactoredVsDense, AdjointIdentity) {
  const FactoredOperator op(make_dict(GetParam()));
  const ComplexVector z = random_vector(op.cols(), 3);
  const ComplexVector y = random_vector(op.rows(), 4);
  const Complex lhs = y.dot(op.apply(z));
  const Complex rhs = op.adjoint(y).dot(z);
  EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::abs(lhs));
}

INSTANTIATE_TEST_SUITE_P(Dictionaries, FactoredVsDense, ::testing::Values(0, 1));

TEST(DenseOperator, ColumnsGather) {
  const ComplexMatrix a = ComplexMatrix::Random(4, 6);
  const DenseOperator op(a);
  const ComplexMatrix sub = op.columns({5, 1});
  EXPECT_EQ(sub.col(0), a.col(5));
  EXPECT_EQ(sub.col(1), a.col(1));
}

TEST(OperatorNorm, MatchesLargestSingularValue) {
  const auto dict = make_dict(1);
  const ComplexMatrix g = dict.atoms();
  const double sigma1 = Eigen::JacobiSVD<ComplexMatrix>(g).singularValues()(0);
  EXPECT_NEAR(operator_norm_squared(FactoredOperator(dict)), sigma1 * sigma1, 1e-6 * sigma1 * sigma1);
  EXPECT_NEAR(operator_norm_squared(DenseOperator(g)), sigma1 * sigma1, 1e-6 * sigma1 * sigma1);
}

}  // namespace
