// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "methods.hpp"

namespace ddfr {

const RuntimeRow& RuntimeReport::row(int snapshots, const std::string& method) const {
  for (const auto& r : rows) {
    if (r.snapshots == snapshots && r.method == method) return r;
  }
  throw ParameterError("runtime report: no row for " + method);
}

RuntimeReport run_runtime_bench(const ExperimentConfig& config) {
  config.validate();
  using Clock = std::chrono::steady_clock;
  const double sigma = std::sqrt(config.scene.noise_variance);
  RuntimeReport report;

  // Timings run sequentially: concurrent trials would distort wall-clock.
  for (int m_count : config.snapshot_counts) {
    SamplingGrid grid = config.scene.grid;
    grid.num_snapshots = m_count;
    std::vector<RuntimeRow> rows;
    for (const auto& m : config.methods) {
      std::vector<double> ms;
      for (int rep = 0; rep < config.repeats; ++rep) {
        const SnapshotMatrix snaps = simulate_snapshots(config.scene.geometry, grid, config.scene.sources,
                                                        config.rng_seed + static_cast<std::uint64_t>(rep),
                                                        config.scene.noise_variance);
        const auto start = Clock::now();
        if (m.uses_dictionary()) {
          const detail::PreparedDictionary p(build_dictionary(config.dictionaries.at(m.dictionary), snaps.geometry, grid));
          (void)detail::method_spectrum(m, &p, snaps, sigma, config);
        } else {
          (void)detail::method_spectrum(m, nullptr, snaps, sigma, config);
        }
        ms.push_back(std::chrono::duration<double, std::milli>(Clock::now() - start).count());
      }
      RuntimeRow row;
      row.snapshots = m_count;
      row.method = m.label;
      for (double v : ms) row.mean_ms += v / static_cast<double>(ms.size());
      for (double v : ms) row.std_ms += (v - row.mean_ms) * (v - row.mean_ms);
      row.std_ms = ms.size() > 1 ? std::sqrt(row.std_ms / static_cast<double>(ms.size() - 1)) : 0.0;
      rows.push_back(row);
    }
    double fastest = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) fastest = std::min(fastest, r.mean_ms);
    for (auto& r : rows) {
      r.normalized = fastest > 0.0 ? r.mean_ms / fastest : 1.0;
      report.rows.push_back(r);
    }
  }
  return report;
}

}  // namespace ddfr
