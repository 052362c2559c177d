// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "ddfr/reconstruct.hpp"
#include "ddfr/solvers.hpp"
#include "oracles.hpp"

namespace {

using namespace ddfr;

const ArrayGeometry kUla = ArrayGeometry::ula(8, 15.0, 1500.0);
const SamplingGrid kGrid(0.0, 120.0, 100);

GDictionary dict_small() { return build_g_direct(kUla, kGrid, {10.0, 20.0, 30.0}, {-20.0, 0.0, 50.0}); }

SolverResult coefficients(const ComplexVector& z) {
  SolverResult r;
  r.coefficients = z;
  return r;
}

ComplexVector random_coefficients(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  ComplexVector z(n);
  for (Index i = 0; i < n; ++i) z(i) = {nd(rng), nd(rng)};
  return z;
}

TEST(Extract, SingleCoefficientIsOneScaledTone) {
  const auto dict = dict_small();
  ComplexVector z = ComplexVector::Zero(dict.cols());
  z(4) = {2.0, -1.0};  // theta 0, f 20
  auto region = region_on_grid(dict, {-1.0, 1.0}, {19.0, 21.0});
  region.resample_rate = 37.0;
  const auto e = extract_source(dict, coefficients(z), region);
  ASSERT_EQ(e.selected, std::vector<Index>{4});
  for (Index i = 0; i < e.times.size(); ++i) {
    const Complex want = z(4) / 10.0 * oracle::expj(2.0 * oracle::pi * 20.0 * e.times(i));
    EXPECT_NEAR(std::abs(e.signal(i) - want), 0.0, 1e-13);
  }
  EXPECT_FALSE(e.empty_selection);
  EXPECT_FALSE(e.outside_span);
}

TEST(Extract, ThresholdAboveAllGivesFlaggedZero) {
  const auto dict = dict_small();
  const ComplexVector z = random_coefficients(dict.cols(), 1);
  const auto e = extract_source(dict, coefficients(z), region_on_grid(dict, {-90, 90}, {0, 60}, 1e6));
  EXPECT_TRUE(e.empty_selection);
  EXPECT_EQ(e.signal.norm(), 0.0);
}

TEST(Extract, ClosedIntervalsIncludeBounds) {
  const auto dict = dict_small();
  const ComplexVector z = ComplexVector::Ones(dict.cols());
  const auto e = extract_source(dict, coefficients(z), region_on_grid(dict, {-20.0, 0.0}, {10.0, 20.0}));
  EXPECT_EQ(e.selected, (std::vector<Index>{0, 1, 3, 4}));
}

TEST(Extract, LinearInCoefficients) {
  const auto dict = dict_small();
  const auto region = region_on_grid(dict, {-30.0, 10.0}, {0.0, 25.0});
  const ComplexVector a = random_coefficients(dict.cols(), 2);
  const ComplexVector b = random_coefficients(dict.cols(), 3);
  const Complex alpha{0.3, -1.2};
  const auto ea = extract_source(dict, coefficients(a), region);
  const auto eb = extract_source(dict, coefficients(b), region);
  const auto eab = extract_source(dict, coefficients(alpha * a + b), region);
  EXPECT_LT((eab.signal - (alpha * ea.signal + eb.signal)).norm(), 1e-12 * eab.signal.norm());
}

TEST(Extract, RaisingThresholdNeverAddsTerms) {
  const auto dict = dict_small();
  const ComplexVector z = random_coefficients(dict.cols(), 4);
  std::vector<Index> prev;
  for (double eta : {0.0, 0.5, 1.0, 1.5, 3.0}) {
    const auto e = extract_source(dict, coefficients(z), region_on_grid(dict, {-90, 90}, {0, 60}, eta));
    if (eta > 0.0) {
      EXPECT_TRUE(std::includes(prev.begin(), prev.end(), e.selected.begin(), e.selected.end()));
    }
    prev = e.selected;
  }
}

TEST(Extract, RealDataDoublesRealPart) {
  const auto dict = dict_small();
  const ComplexVector z = random_coefficients(dict.cols(), 5);
  const auto region = region_on_grid(dict, {-90, 90}, {0, 60});
  const auto c = extract_source(dict, coefficients(z), region);
  const auto r = extract_source(dict, coefficients(z), region, true);
  EXPECT_LT((r.signal - (2.0 * c.signal.real()).cast<Complex>()).norm(), 1e-13);
  EXPECT_EQ(r.signal.imag().norm(), 0.0);
}

TEST(Extract, UnionOfRegionsCountsColumnsOnce) {
  const auto dict = dict_small();
  const ComplexVector z = ComplexVector::Ones(dict.cols());
  const auto a = region_on_grid(dict, {-20.0, 0.0}, {10.0, 10.0});
  const auto b = region_on_grid(dict, {0.0, 0.0}, {10.0, 30.0});
  const auto e = extract_source(dict, coefficients(z), std::vector<ExtractionRegion>{a, b});
  EXPECT_EQ(e.selected, (std::vector<Index>{0, 3, 4, 5}));
  auto c = b;
  c.resample_rate = 10.0;
  EXPECT_THROW(extract_source(dict, coefficients(z), std::vector<ExtractionRegion>{a, c}), ParameterError);
}

TEST(Extract, SpanFlagAndValidation) {
  const auto dict = dict_small();
  const ComplexVector z = ComplexVector::Ones(dict.cols());
  auto region = region_on_grid(dict, {-90, 90}, {0, 60});
  region.t_end += 1.0;
  EXPECT_TRUE(extract_source(dict, coefficients(z), region).outside_span);
  region.theta = {5.0, 1.0};
  EXPECT_THROW(extract_source(dict, coefficients(z), region), ParameterError);
  EXPECT_THROW(extract_source(dict, coefficients(ComplexVector::Ones(2)), region_on_grid(dict, {0, 1}, {0, 1})),
               ParameterError);
}

TEST(Extract, OmpRoundTripOnNoiselessOnGridTone) {
  const auto dict = build_g_direct(kUla, kGrid, {10.0, 12.0, 14.0, 16.0}, {-30.0, -20.0, -10.0, 0.0, 10.0});
  const SourceSpec src{-20.0, Multitone{{{14.0, {0.6, 0.8}}}}, 10.0};
  const auto sim = simulate_scene(kUla, kGrid, {src}, 9, 0.0);
  const ComplexVector y = concatenate(sim.snapshots);
  const SolverResult r = omp(dict.atoms(), y, 3, 1e-12 * y.norm());
  const auto e = extract_source(dict, r, region_on_grid(dict, {-25.0, -15.0}, {13.0, 15.0}));
  const ComplexVector truth = source_waveform(sim.sources[0], kGrid.times());
  EXPECT_LT((e.signal - truth).norm(), 1e-8 * truth.norm());
}

TEST(Extract, CorrelatorOnOrthogonalDictionaryProjectsSensorAverage) {
  // broadside atoms on every DFT bin: columns are orthogonal with norm sqrt(N_S)
  const SamplingGrid grid(0.0, 16.0, 16);
  const auto geometry = ArrayGeometry::ula(3, 1.0, 340.0);
  std::vector<double> bins;
  for (int k = 1; k <= 7; ++k) bins.push_back(k);
  const auto dict = build_g_direct(geometry, grid, bins, {0.0});
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  ComplexMatrix data(16, 3);
  for (Index i = 0; i < data.size(); ++i) data(i) = {nd(rng), nd(rng)};
  const SolverResult r = correlator_solve(dict.atoms(), concatenate(data));
  const auto e = extract_source(dict, r, region_on_grid(dict, {-90, 90}, {0, 8}));
  const ComplexMatrix d = fourier_dictionary(grid, bins);
  const ComplexVector avg = data.rowwise().mean();
  const ComplexVector projection = d * (d.adjoint() * avg);
  EXPECT_LT((e.signal - 3.0 * projection).norm(), 1e-12 * projection.norm());
}

TEST(ArrayGain, Sentinels) {
  const ComplexVector s = ComplexVector::Ones(4);
  ComplexVector y = s;
  y(0) += 1.0;
  EXPECT_NEAR(array_gain(y, y, s), 0.0, 1e-14);
  EXPECT_EQ(array_gain(y, s, s), std::numeric_limits<double>::infinity());
  ComplexVector half = s;
  half(0) += 0.5;
  EXPECT_NEAR(array_gain(y, half, s), 10.0 * std::log10(4.0), 1e-12);
  EXPECT_THROW(array_gain(y, ComplexVector::Ones(3), s), ParameterError);
}

}  // namespace
