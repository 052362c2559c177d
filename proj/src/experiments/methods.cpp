// SPDX-License-Identifier: Apache-2.0
#include "methods.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace ddfr::detail {

namespace {

double min_spacing(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  double best = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double d = v[i] - v[i - 1];
    if (best == 0.0 || d < best) best = d;
  }
  return best;
}

double option(const MethodSpec& m, const char* key, double fallback) {
  return m.options.contains(key) ? m.options.at(key).get<double>() : fallback;
}

}  // namespace

PreparedDictionary::PreparedDictionary(GDictionary d)
    : dict(std::move(d)), op(dict), partition(GroupPartition::by_doa(dict)) {
  freq_cell = min_spacing(dict.freq_labels());
  if (const auto* ds = std::get_if<DirectSynthesis>(&dict.construction())) theta_cell = min_spacing(ds->theta_grid);
}

const TsvdSolver& PreparedDictionary::tsvd() const {
  std::call_once(tsvd_once_, [this] { tsvd_ = std::make_unique<TsvdSolver>(op); });
  return *tsvd_;
}

std::pair<double, double> PreparedDictionary::cell(double freq, double theta_deg) const {
  if (const auto* cd = std::get_if<ConstantDelta>(&dict.construction())) {
    const double dtheta = std::abs(theta_deg) < 90.0 ? theta_resolution(cd->delta_step, freq, theta_deg) : 180.0;
    return {cd->freq_step, dtheta};
  }
  return {freq_cell, theta_cell};
}

DictionarySet prepare_dictionaries(const ExperimentConfig& config, const ArrayGeometry& geometry,
                                   const SamplingGrid& grid) {
  DictionarySet out;
  for (const auto& m : config.methods) {
    if (!m.uses_dictionary() || out.count(m.dictionary)) continue;
    out[m.dictionary] = std::make_unique<PreparedDictionary>(
        build_dictionary(config.dictionaries.at(m.dictionary), geometry, grid));
  }
  return out;
}

SolverResult run_dictionary_method(const MethodSpec& m, const PreparedDictionary& p, const ComplexVector& y,
                                   double sigma) {
  const double eps = default_epsilon(sigma, p.op.rows());
  if (m.solver == "l1") {
    BpdnOptions opts;
    opts.max_iterations = static_cast<int>(option(m, "max_iterations", opts.max_iterations));
    opts.tolerance = option(m, "tolerance", opts.tolerance);
    return bpdn_l1(p.op, y, option(m, "epsilon_scale", 1.0) * eps, opts);
  }
  if (m.solver == "omp") {
    const auto cap = std::min<Index>(static_cast<Index>(option(m, "max_atoms", 100)), p.op.cols());
    return omp(p.op, y, cap, option(m, "tol_scale", 1.0) * eps);
  }
  if (m.solver == "tsvd") {
    if (m.options.contains("rank")) return p.tsvd().solve(y, TruncationRank{m.options.at("rank").get<Index>()});
    return p.tsvd().solve(y, RelativeThreshold{option(m, "threshold", 1e-3)});
  }
  if (m.solver == "correlator") return correlator_solve(p.op, y);
  if (m.solver == "group_lasso") {
    // noise level of one group's correlation plus a union bound over groups
    Index largest = 0;
    for (const auto& [b, e] : p.partition.groups) largest = std::max(largest, e - b);
    const double ns = p.dict.geometry().num_sensors();
    const double groups = static_cast<double>(p.partition.num_groups());
    const double lambda = option(m, "lambda_scale", 1.0) * sigma * std::sqrt(ns) *
                          (std::sqrt(static_cast<double>(largest)) + std::sqrt(2.0 * std::log(std::max(groups, 2.0))));
    GroupLassoOptions opts;
    opts.max_iterations = static_cast<int>(option(m, "max_iterations", opts.max_iterations));
    opts.tolerance = option(m, "tolerance", opts.tolerance);
    return group_lasso(p.op, y, p.partition, lambda, opts);
  }
  if (m.solver == "group_gp") {
    const auto cap = std::min<Index>(static_cast<Index>(option(m, "max_groups", 2)), p.partition.num_groups());
    return group_gp(p.op, y, p.partition, cap, option(m, "tol_scale", 1.0) * eps);
  }
  throw ConfigError("solver '" + m.solver + "' does not use a dictionary");
}

std::vector<double> doa_grid(double step) {
  std::vector<double> g;
  const int n = static_cast<int>(std::floor(180.0 / step + 1e-9));
  for (int k = 0; k <= n; ++k) g.push_back(-90.0 + k * step);
  return g;
}

DoaSpectrum method_spectrum(const MethodSpec& m, const PreparedDictionary* p, const SnapshotMatrix& snapshots,
                            double sigma, const ExperimentConfig& config) {
  if (m.uses_dictionary()) {
    const SolverResult r = run_dictionary_method(m, *p, concatenate(snapshots), sigma);
    return group_spectrum(p->dict, r, p->partition);
  }
  const auto thetas = doa_grid(config.doa_step);
  const SubbandData sub = subband_transform(snapshots, config.section_length);
  const std::vector<int> bins = bins_in_band(sub, config.band.f_low, config.band.f_high);
  if (bins.empty()) throw ConfigError("no subband bin inside the configured band");
  if (m.solver == "cbf") return band_average(cbf_spectrum(sub, bins, snapshots.geometry, thetas));
  const SubbandCovariance cov = subband_covariance(sub, bins);
  if (m.solver == "icapon") {
    return band_average(icapon_spectrum(cov, snapshots.geometry, thetas, option(m, "loading", 1e-3)));
  }
  if (m.solver == "imusic") {
    const int order = static_cast<int>(option(m, "order", static_cast<double>(config.scene.sources.size())));
    return band_average(imusic_spectrum(cov, snapshots.geometry, thetas, std::vector<int>(bins.size(), order)));
  }
  throw ConfigError("solver '" + m.solver + "' has no DOA spectrum");
}

std::vector<SourceSpec> rephase_tones(const std::vector<SourceSpec>& sources, std::uint64_t seed) {
  auto rng = seeded_stream(seed, 3);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::vector<SourceSpec> out = sources;
  for (auto& s : out) {
    if (auto* mt = std::get_if<Multitone>(&s.kind)) {
      for (auto& t : mt->tones) t.amplitude = std::abs(t.amplitude) * unit_phasor(phase(rng));
    }
  }
  return out;
}

std::vector<ExtractionRegion> cell_regions(const PreparedDictionary& p,
                                           const std::vector<std::pair<double, double>>& targets) {
  std::vector<ExtractionRegion> regions;
  for (const auto& [f, th] : targets) {
    const auto [df, dth] = p.cell(f, th);
    regions.push_back(region_on_grid(p.dict, {th - dth, th + dth}, {f - df, f + df}));
  }
  return regions;
}

}  // namespace ddfr::detail
