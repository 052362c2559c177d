// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "methods.hpp"

namespace ddfr {

bool separation_success(const std::vector<double>& peaks, const std::vector<double>& truth, double tolerance) {
  if (peaks.size() < 2 || truth.size() != 2) return false;
  auto near = [tolerance](double a, double b) { return std::abs(a - b) <= tolerance + 1e-9; };
  return (near(peaks[0], truth[0]) && near(peaks[1], truth[1])) ||
         (near(peaks[0], truth[1]) && near(peaks[1], truth[0]));
}

double SeparationReport::probability(const std::string& method, double snr) const {
  for (std::size_t m = 0; m < methods.size(); ++m) {
    if (methods[m] != method) continue;
    for (std::size_t s = 0; s < snr_db.size(); ++s) {
      if (snr_db[s] == snr) return static_cast<double>(successes[m][s]) / trials;
    }
  }
  throw ParameterError("separation report: no entry for " + method);
}

SeparationReport run_separation_vs_snr(const ExperimentConfig& config) {
  config.validate();
  const SceneDescription& scene = config.scene;
  const auto dicts = detail::prepare_dictionaries(config, scene.geometry, scene.grid);
  const double sigma = std::sqrt(scene.noise_variance);
  std::vector<double> truth;
  for (const auto& s : scene.sources) truth.push_back(s.doa_deg);

  const std::size_t nm = config.methods.size();
  const std::size_t nsnr = config.snr_db.size();
  const int jobs = static_cast<int>(nsnr) * config.trials;
  std::vector<std::vector<char>> ok(static_cast<std::size_t>(jobs), std::vector<char>(nm, 0));

  parallel_for(jobs, config.threads, [&](int job) {
    const std::size_t si = static_cast<std::size_t>(job / config.trials);
    const int trial = job % config.trials;
    std::vector<SourceSpec> sources = scene.sources;
    for (auto& s : sources) s.snr_db = config.snr_db[si];
    const SnapshotMatrix snaps = simulate_snapshots(scene.geometry, scene.grid, sources,
                                                    config.rng_seed + static_cast<std::uint64_t>(trial),
                                                    scene.noise_variance);
    for (std::size_t mi = 0; mi < nm; ++mi) {
      const MethodSpec& m = config.methods[mi];
      const detail::PreparedDictionary* p = m.uses_dictionary() ? dicts.at(m.dictionary).get() : nullptr;
      const DoaSpectrum spec = detail::method_spectrum(m, p, snaps, sigma, config);
      ok[static_cast<std::size_t>(job)][mi] = separation_success(peak_find(spec, 2), truth, config.doa_tolerance);
    }
  });

  SeparationReport report;
  report.snr_db = config.snr_db;
  report.trials = config.trials;
  for (const auto& m : config.methods) report.methods.push_back(m.label);
  report.successes.assign(nm, std::vector<int>(nsnr, 0));
  for (int job = 0; job < jobs; ++job) {
    for (std::size_t mi = 0; mi < nm; ++mi) {
      report.successes[mi][static_cast<std::size_t>(job / config.trials)] += ok[static_cast<std::size_t>(job)][mi];
    }
  }
  return report;
}

}  // namespace ddfr
