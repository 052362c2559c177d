// SPDX-License-Identifier: Apache-2.0
#include "ddfr/reconstruct.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

namespace ddfr {

void ExtractionRegion::validate() const {
  if (!(theta.low <= theta.high) || !(freq.low <= freq.high)) {
    throw ParameterError("extraction region: empty interval");
  }
  if (!(amplitude_threshold >= 0.0)) throw ParameterError("extraction region: threshold must be nonnegative");
  if (!(resample_rate > 0.0)) throw ParameterError("extraction region: resample rate must be positive");
  if (!(t_start <= t_end)) throw ParameterError("extraction region: time span reversed");
}

RealVector ExtractionRegion::times() const {
  const auto count = static_cast<Index>(std::floor((t_end - t_start) * resample_rate + 1e-9)) + 1;
  RealVector t(count);
  for (Index k = 0; k < count; ++k) t(k) = t_start + static_cast<double>(k) / resample_rate;
  return t;
}

Extraction extract_source(const GDictionary& dict, const SolverResult& result,
                          const std::vector<ExtractionRegion>& regions, bool real_data) {
  if (regions.empty()) throw ParameterError("extract_source: no region");
  if (result.coefficients.size() != dict.cols()) {
    throw ParameterError("extract_source: coefficient count differs from the dictionary width");
  }
  const ExtractionRegion& first = regions.front();
  for (const auto& r : regions) {
    r.validate();
    if (r.resample_rate != first.resample_rate || r.t_start != first.t_start || r.t_end != first.t_end) {
      throw ParameterError("extract_source: regions must share one time grid");
    }
  }

  Extraction out;
  out.times = first.times();
  out.signal = ComplexVector::Zero(out.times.size());
  const double tol = 1e-9 / dict.grid().sample_rate;
  out.outside_span = first.t_start < dict.grid().start_time - tol || first.t_end > dict.grid().end_time() + tol;

  for (Index q = 0; q < dict.cols(); ++q) {
    const auto k = static_cast<std::size_t>(q);
    const double f = dict.freq_labels()[k];
    const double th = dict.doa_labels()[k];
    const double mag = std::abs(result.coefficients(q));
    for (const auto& r : regions) {
      if (mag >= r.amplitude_threshold && r.freq.contains(f) && r.theta.contains(th)) {
        out.selected.push_back(q);
        break;
      }
    }
  }

  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(dict.grid().num_snapshots));
  for (Index q : out.selected) {
    const Complex c = result.coefficients(q) * inv_sqrt_m;
    const double f = dict.freq_labels()[static_cast<std::size_t>(q)];
    for (Index i = 0; i < out.times.size(); ++i) out.signal(i) += c * unit_phasor(kTwoPi * f * out.times(i));
  }
  if (real_data) out.signal = (2.0 * out.signal.real()).cast<Complex>();
  out.empty_selection = out.selected.empty();
  return out;
}

Extraction extract_source(const GDictionary& dict, const SolverResult& result,
                          const ExtractionRegion& region, bool real_data) {
  return extract_source(dict, result, std::vector<ExtractionRegion>{region}, real_data);
}

ExtractionRegion region_on_grid(const GDictionary& dict, Interval theta, Interval freq,
                                double amplitude_threshold) {
  ExtractionRegion r;
  r.theta = theta;
  r.freq = freq;
  r.amplitude_threshold = amplitude_threshold;
  r.resample_rate = dict.grid().sample_rate;
  r.t_start = dict.grid().start_time;
  r.t_end = dict.grid().end_time();
  return r;
}

double array_gain(const ComplexVector& reference, const ComplexVector& extracted, const ComplexVector& truth) {
  if (reference.size() != truth.size() || extracted.size() != truth.size()) {
    throw ParameterError("array_gain: signals must share one time grid");
  }
  const double out_err = (extracted - truth).squaredNorm();
  if (out_err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10((reference - truth).squaredNorm() / out_err);
}

nlohmann::json extraction_to_json(const Extraction& extraction) {
  nlohmann::json samples = nlohmann::json::array();
  for (Index i = 0; i < extraction.signal.size(); ++i) {
    samples.push_back({extraction.times(i), extraction.signal(i).real(), extraction.signal(i).imag()});
  }
  return {{"selected", extraction.selected},
          {"empty_selection", extraction.empty_selection},
          {"outside_span", extraction.outside_span},
          {"samples", samples}};
}

void write_extraction_csv(std::ostream& os, const Extraction& extraction) {
  os << "t,re,im\n" << std::setprecision(17);
  for (Index i = 0; i < extraction.signal.size(); ++i) {
    os << extraction.times(i) << ',' << extraction.signal(i).real() << ',' << extraction.signal(i).imag() << '\n';
  }
}

void write_extraction_csv(const std::filesystem::path& path, const Extraction& extraction) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
  write_extraction_csv(os, extraction);
}

}  // namespace ddfr
