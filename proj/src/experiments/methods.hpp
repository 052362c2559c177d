// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "ddfr/experiments.hpp"
#include "ddfr/operator.hpp"
#include "ddfr/reconstruct.hpp"

namespace ddfr::detail {

/// A dictionary with everything solvers reuse across trials.
struct PreparedDictionary {
  explicit PreparedDictionary(GDictionary d);

  GDictionary dict;
  FactoredOperator op;
  GroupPartition partition;
  double freq_cell = 0.0;   // frequency grid step
  double theta_cell = 0.0;  // DOA grid step of direct dictionaries

  /// Truncated SVD, built on first use and shared between threads.
  const TsvdSolver& tsvd() const;

  /// Half-widths (f, theta) of one grid cell around (f, theta).
  std::pair<double, double> cell(double freq, double theta_deg) const;

 private:
  mutable std::once_flag tsvd_once_;
  mutable std::unique_ptr<TsvdSolver> tsvd_;
};

using DictionarySet = std::map<std::string, std::unique_ptr<PreparedDictionary>>;

/// Builds every dictionary referenced by the configured methods on (geometry, grid).
DictionarySet prepare_dictionaries(const ExperimentConfig& config, const ArrayGeometry& geometry,
                                   const SamplingGrid& grid);

/// Runs a dictionary-based method on y = vec(Y). `sigma` is the noise standard deviation.
SolverResult run_dictionary_method(const MethodSpec& method, const PreparedDictionary& prepared,
                                   const ComplexVector& y, double sigma);

/// Uniform DOA grid over [-90, 90].
std::vector<double> doa_grid(double step);

/// DOA spectrum of any method: group norms for dictionary methods, band
/// averaged subband spectra for cbf/icapon/imusic.
DoaSpectrum method_spectrum(const MethodSpec& method, const PreparedDictionary* prepared,
                            const SnapshotMatrix& snapshots, double sigma, const ExperimentConfig& config);

/// Sources with every tone phase redrawn uniformly from `seed`; magnitudes kept.
std::vector<SourceSpec> rephase_tones(const std::vector<SourceSpec>& sources, std::uint64_t seed);

/// Union of closed rectangles around each (f, theta) target, one grid cell wide on each side.
std::vector<ExtractionRegion> cell_regions(const PreparedDictionary& prepared,
                                           const std::vector<std::pair<double, double>>& targets);

}  // namespace ddfr::detail
