// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ddfr/solvers.hpp"
#include "ddfr/spectrum.hpp"

namespace {

using namespace ddfr;

GroupPartition blocks(Index count, Index size) {
  GroupPartition p;
  for (Index g = 0; g < count; ++g) {
    p.groups.emplace_back(g * size, (g + 1) * size);
    p.labels.push_back(static_cast<double>(g));
  }
  return p;
}

struct Kkt {
  double active = 0.0;    // max |G_g^H r - lambda z_g / |z_g|| over nonzero groups, relative to lambda
  double inactive = 0.0;  // max |G_g^H r| / lambda over zero groups
  int nonzero = 0;
};

Kkt kkt(const ComplexMatrix& a, const ComplexVector& y, const GroupPartition& p, const SolverResult& r,
        double lambda) {
  const ComplexVector corr = a.adjoint() * (y - a * r.coefficients);
  Kkt k;
  for (const auto& [b, e] : p.groups) {
    const ComplexVector zg = r.coefficients.segment(b, e - b);
    const ComplexVector cg = corr.segment(b, e - b);
    if (zg.norm() > 0.0) {
      ++k.nonzero;
      k.active = std::max(k.active, (cg - lambda * zg / zg.norm()).norm() / lambda);
    } else {
      k.inactive = std::max(k.inactive, cg.norm() / lambda);
    }
  }
  return k;
}

TEST(Partition, ValidateRejectsOverlapGapsAndRange) {
  auto p = blocks(3, 2);
  EXPECT_NO_THROW(p.validate(6, true));
  EXPECT_THROW(p.validate(7, true), ParameterError);  // column 6 uncovered
  EXPECT_NO_THROW(p.validate(7, false));
  EXPECT_THROW(p.validate(5, false), ParameterError);
  p.groups[1] = {1, 4};
  EXPECT_THROW(p.validate(6, false), ParameterError);
  p.groups[1] = {2, 2};
  EXPECT_THROW(p.validate(6, false), ParameterError);
  auto q = blocks(2, 2);
  q.labels.pop_back();
  EXPECT_THROW(q.validate(4, true), ParameterError);
}

TEST(Partition, ByDoaGivesOneGroupPerThetaOnDirectDictionaries) {
  const auto geometry = ArrayGeometry::ula(4, 1.0, 340.0);
  const SamplingGrid grid(0.0, 100.0, 8);
  const auto dict = build_g_direct(geometry, grid, {10.0, 20.0, 30.0}, {-10.0, 0.0, 10.0, 20.0});
  const auto p = GroupPartition::by_doa(dict);
  ASSERT_EQ(p.num_groups(), 4);
  for (Index g = 0; g < 4; ++g) {
    EXPECT_EQ(p.groups[static_cast<std::size_t>(g)], std::make_pair(3 * g, 3 * g + 3));
  }
  EXPECT_EQ(p.labels, (std::vector<double>{-10.0, 0.0, 10.0, 20.0}));
  EXPECT_NO_THROW(p.validate(dict.cols(), true));
}

TEST(GroupLasso, KktResidualsOnRandomInstances) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> nd;
  GroupLassoOptions opts;
  opts.max_iterations = 20000;
  opts.tolerance = 1e-14;
  for (int inst = 0; inst < 20; ++inst) {
    const Index rows = 24, groups = 10, size = 4;
    ComplexMatrix a(rows, groups * size);
    for (Index i = 0; i < a.size(); ++i) a(i) = {nd(rng), nd(rng)};
    ComplexVector y(rows);
    for (Index i = 0; i < rows; ++i) y(i) = {nd(rng), nd(rng)};
    const auto p = blocks(groups, size);
    double lam_max = 0.0;
    const ComplexVector c = a.adjoint() * y;
    for (const auto& [b, e] : p.groups) lam_max = std::max(lam_max, c.segment(b, e - b).norm());
    const double lambda = 0.3 * lam_max;
    const SolverResult r = group_lasso(a, y, p, lambda, opts);
    const Kkt k = kkt(a, y, p, r, lambda);
    EXPECT_GT(k.nonzero, 0);
    EXPECT_LT(k.active, 1e-4) << "instance " << inst;
    EXPECT_LE(k.inactive, 1.0 + 1e-4) << "instance " << inst;
  }
}

TEST(GroupLasso, LambdaAboveMaxGivesZero) {
  const ComplexMatrix a = ComplexMatrix::Random(6, 8);
  const ComplexVector y = ComplexVector::Random(6);
  const auto p = blocks(4, 2);
  double lam_max = 0.0;
  const ComplexVector c = a.adjoint() * y;
  for (const auto& [b, e] : p.groups) lam_max = std::max(lam_max, c.segment(b, e - b).norm());
  const SolverResult r = group_lasso(a, y, p, 1.01 * lam_max);
  EXPECT_TRUE(r.support.empty());
  EXPECT_THROW(group_lasso(a, y, p, 0.0), ParameterError);
  EXPECT_THROW(group_lasso(a, y, blocks(3, 2), 1.0), ParameterError);  // does not cover
}

TEST(GroupGp, PicksTheTrueGroupsOnOrthogonalBlocks) {
  const ComplexMatrix a = ComplexMatrix::Identity(12, 12);
  const auto p = blocks(6, 2);
  ComplexVector z = ComplexVector::Zero(12);
  z(4) = 3.0;
  z(5) = {0.0, 1.0};
  z(10) = 2.0;
  const SolverResult r = group_gp(a, a * z, p, 2, 1e-12);
  EXPECT_EQ(r.support, (std::vector<Index>{4, 5, 10}));
  EXPECT_LT((r.coefficients - z).norm(), 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_THROW(group_gp(a, a * z, p, 7, 0.0), ParameterError);
}

TEST(GroupGp, SpectrumHasExactlySelectedGroups) {
  const auto geometry = ArrayGeometry::ula(6, 1.0, 340.0);
  const SamplingGrid grid(0.0, 200.0, 20);
  const auto dict = build_g_direct(geometry, grid, {40.0, 50.0, 60.0}, {-60.0, -30.0, 0.0, 30.0, 60.0});
  const auto p = GroupPartition::by_doa(dict);
  const ComplexMatrix g = dict.atoms();
  const ComplexVector y = g.col(0) + g.col(1) + 0.5 * g.col(13);  // theta -60 and +60
  const SolverResult r = group_gp(g, y, p, 2, 1e-10);
  const DoaSpectrum s = group_spectrum(dict, r, p);
  int nonzero = 0;
  for (double v : s.power) nonzero += v > 0.0;
  EXPECT_EQ(nonzero, 2);
  EXPECT_GT(s.power[0], 0.0);
  EXPECT_GT(s.power[4], 0.0);
}

}  // namespace
