// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "ddfr/dictionary.hpp"
#include "ddfr/solvers.hpp"
#include "ddfr/types.hpp"

namespace ddfr {

struct Interval {
  double low = 0.0;
  double high = 0.0;
  bool contains(double x) const { return x >= low && x <= high; }
};

/// Rectangle in (theta, f), magnitude threshold and output time grid
/// t' = t_start + k / resample_rate for every t' <= t_end.
struct ExtractionRegion {
  Interval theta;           // degrees
  Interval freq;            // Hz
  double amplitude_threshold = 0.0;
  double resample_rate = 1.0;
  double t_start = 0.0;
  double t_end = 0.0;

  void validate() const;
  RealVector times() const;
};

struct Extraction {
  RealVector times;
  ComplexVector signal;
  std::vector<Index> selected;   // ascending column indices
  bool empty_selection = false;  // nothing selected: signal is zero
  bool outside_span = false;     // output grid leaves the observation span
};

/// s(t') = sum over selected columns of (z_k / sqrt(M)) exp(j 2 pi f_k t'),
/// returned as 2 Re{s} when `real_data` is set.
Extraction extract_source(const GDictionary& dict, const SolverResult& result,
                          const ExtractionRegion& region, bool real_data = false);

/// Same synthesis over the union of several regions; each column counts once.
/// All regions must share one output time grid.
Extraction extract_source(const GDictionary& dict, const SolverResult& result,
                          const std::vector<ExtractionRegion>& regions, bool real_data = false);

/// Region spanning the dictionary's observation grid.
ExtractionRegion region_on_grid(const GDictionary& dict, Interval theta, Interval freq,
                                double amplitude_threshold = 0.0);

/// 10 log10(|y - s|^2 / |s_hat - s|^2) in dB; +infinity when s_hat == s.
double array_gain(const ComplexVector& reference, const ComplexVector& extracted, const ComplexVector& truth);

nlohmann::json extraction_to_json(const Extraction& extraction);
void write_extraction_csv(std::ostream& os, const Extraction& extraction);
void write_extraction_csv(const std::filesystem::path& path, const Extraction& extraction);

}  // namespace ddfr
