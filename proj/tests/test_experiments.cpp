// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "ddfr/experiments.hpp"
#include "ddfr/reconstruct.hpp"

namespace {

using namespace ddfr;
using nlohmann::json;

constexpr Scenario kAll[] = {Scenario::MultitoneImage, Scenario::SeparationVsSnr,
                             Scenario::ArrayGainVsDeltaTheta, Scenario::RuntimeBench};

MethodSpec snapshot_method(const std::string& solver, json options = json::object()) {
  return method_spec_from_json(json{{"solver", solver}, {"options", options}});
}

TEST(Config, DefaultsValidateAndRoundTrip) {
  for (Scenario s : kAll) {
    const ExperimentConfig c = default_config(s);
    EXPECT_NO_THROW(c.validate()) << scenario_name(s);
    const json doc = config_to_json(c);
    EXPECT_EQ(config_to_json(config_from_json(doc)), doc) << scenario_name(s);
    EXPECT_EQ(scenario_from_name(scenario_name(s)), s);
  }
  EXPECT_THROW(scenario_from_name("bogus"), ConfigError);
}

TEST(Config, PartialDocumentOverridesDefaults) {
  const ExperimentConfig c = config_from_json(json{{"scenario", "separation"}, {"trials", 7}, {"snr_db", {3.0}}});
  EXPECT_EQ(c.trials, 7);
  EXPECT_EQ(c.snr_db, std::vector<double>{3.0});
  EXPECT_EQ(c.methods.size(), default_config(Scenario::SeparationVsSnr).methods.size());
}

TEST(Config, RejectsInconsistentSettings) {
  auto c = default_config(Scenario::SeparationVsSnr);
  c.trials = 0;
  EXPECT_THROW(c.validate(), ConfigError);

  c = default_config(Scenario::ArrayGainVsDeltaTheta);
  c.scene.sources.pop_back();
  EXPECT_THROW(c.validate(), ConfigError);

  c = default_config(Scenario::ArrayGainVsDeltaTheta);
  c.delta_theta = {0.0};
  EXPECT_THROW(c.validate(), ConfigError);

  c = default_config(Scenario::MultitoneImage);
  c.methods.push_back(c.methods.front());
  EXPECT_THROW(c.validate(), ConfigError);  // duplicate label

  EXPECT_THROW(config_from_json(json{{"methods", {{{"solver", "omp"}, {"dictionary", "nope"}}}}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"methods", {{{"solver", "magic"}}}}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"trials", "many"}}), ConfigError);
}

TEST(Separation, SuccessNeedsBothTruthsWithinTolerance) {
  const std::vector<double> truth{-5.0, 5.0};
  EXPECT_TRUE(separation_success({5.0, -5.0}, truth, 2.5));
  EXPECT_TRUE(separation_success({-2.5, 7.5}, truth, 2.5));
  EXPECT_FALSE(separation_success({-5.0, -4.0}, truth, 2.5));
  EXPECT_FALSE(separation_success({0.0}, truth, 2.5));
  EXPECT_FALSE(separation_success({-5.0, 8.0}, truth, 2.5));
}

TEST(Separation, WellSeparatedHighSnrIsAlwaysResolved) {
  auto c = default_config(Scenario::SeparationVsSnr);
  c.scene = wideband_scene({-20.0, 20.0}, 60.0);
  c.snr_db = {60.0};
  c.trials = 20;
  c.methods = {snapshot_method("cbf")};
  EXPECT_EQ(run_separation_vs_snr(c).probability("cbf", 60.0), 1.0);

  c.trials = 3;
  c.methods = {default_config(Scenario::SeparationVsSnr).methods.front()};
  const auto g = run_separation_vs_snr(c);
  EXPECT_EQ(g.probability(c.methods.front().label, 60.0), 1.0);
}

TEST(Separation, ResultsDoNotDependOnThreadCount) {
  auto c = default_config(Scenario::SeparationVsSnr);
  c.snr_db = {0.0, 10.0};
  c.trials = 6;
  c.methods = {snapshot_method("cbf"), snapshot_method("imusic", {{"order", 2}})};
  c.threads = 1;
  const auto a = run_separation_vs_snr(c);
  c.threads = 3;
  const auto b = run_separation_vs_snr(c);
  EXPECT_EQ(a.successes, b.successes);
}

TEST(DelaySum, WhiteNoiseGainMatchesSensorCountAndBandFraction) {
  // noise power drops by N_S from averaging and by M/K from keeping K of M bins;
  // on-bin tones pass the band filter unchanged
  auto scene = wideband_scene({0.0}, 0.0);
  scene.sources[0].kind = Multitone{{{200.0, {1.0, 0.0}}, {310.0, {0.0, 1.0}}, {440.0, {0.5, 0.5}}}};
  const Band band{150.0, 450.0};
  const int m = scene.grid.num_snapshots;
  int kept = 0;
  for (int j = 0; j < m; ++j) {
    const double f = (2 * j <= m ? j : j - m) * scene.grid.sample_rate / m;
    kept += f >= band.f_low && f <= band.f_high;
  }
  const double expected = 10.0 * std::log10(8.0 * m / kept);
  double mean = 0.0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    const auto sim = simulate_scene(scene.geometry, scene.grid, scene.sources, 100 + t, scene.noise_variance);
    const ComplexVector truth = source_waveform(sim.sources[0], scene.grid.times());
    const ComplexVector est = delay_sum_extract(sim.snapshots, 0.0, band);
    mean += array_gain(sim.snapshots.data.col(0), est, truth) / trials;
  }
  EXPECT_NEAR(mean, expected, 0.5);
}

ExperimentConfig small_multitone() {
  auto c = default_config(Scenario::MultitoneImage);
  c.trials = 2;
  c.random_tone_phases = true;
  c.dictionaries.erase("Gdelta");
  c.methods = {snapshot_method("delay_sum"),
               method_spec_from_json(json{{"solver", "omp"}, {"dictionary", "Gd"},
                                          {"options", {{"max_atoms", 40}, {"tol_scale", 1.0}}}})};
  return c;
}

TEST(Multitone, SeededRunsAreIdentical) {
  const auto c = small_multitone();
  const auto a = run_multitone_image(c);
  const auto b = run_multitone_image(c);
  ASSERT_EQ(a.gains.size(), b.gains.size());
  for (std::size_t i = 0; i < a.gains.size(); ++i) EXPECT_EQ(a.gains[i].gain_db, b.gains[i].gain_db);
  ASSERT_EQ(a.methods[1].first_image.pixels.size(), b.methods[1].first_image.pixels.size());
  for (std::size_t i = 0; i < a.methods[1].first_image.pixels.size(); ++i) {
    EXPECT_EQ(a.methods[1].first_image.pixels[i].value, b.methods[1].first_image.pixels[i].value);
  }
  auto shifted = c;
  shifted.rng_seed += 1;
  EXPECT_NE(run_multitone_image(shifted).gains[0].gain_db, a.gains[0].gain_db);
}

TEST(Multitone, DelaySumGainIsFinitePerSource) {
  const auto r = run_multitone_image(small_multitone());
  const auto& ds = r.method("delay_sum");
  ASSERT_EQ(ds.mean_gain_db.size(), 4u);
  for (double g : ds.mean_gain_db) {
    EXPECT_TRUE(std::isfinite(g));
    EXPECT_GT(g, 0.0);
  }
  EXPECT_THROW(r.method("missing"), ParameterError);
}

TEST(Runtime, FastestMethodIsNormalizedToOne) {
  auto c = default_config(Scenario::RuntimeBench);
  c.snapshot_counts = {64, 128};
  c.repeats = 2;
  c.methods = {snapshot_method("cbf"), snapshot_method("imusic", {{"order", 2}})};
  const auto r = run_runtime_bench(c);
  ASSERT_EQ(r.rows.size(), 4u);
  for (int m : c.snapshot_counts) {
    const double a = r.row(m, "cbf").normalized;
    const double b = r.row(m, "imusic").normalized;
    EXPECT_DOUBLE_EQ(std::min(a, b), 1.0);
    EXPECT_GE(std::max(a, b), 1.0);
  }
  EXPECT_THROW(r.row(999, "cbf"), ParameterError);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<int> hits(37, 0);
  parallel_for(37, 4, [&](int i) { hits[static_cast<std::size_t>(i)] += 1; });
  EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}

}  // namespace
