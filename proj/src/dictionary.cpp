// SPDX-License-Identifier: Apache-2.0
#include "ddfr/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <string>

namespace ddfr {

namespace {

// |delta/f| up to this excess above 1 is rounding from grid arithmetic.
constexpr double kValidityTol = 1e-12;

double doa_from_delta(double delta, double freq) {
  const double r = std::clamp(delta / freq, -1.0, 1.0);
  return rad2deg(std::asin(r));
}

}  // namespace

GDictionary::GDictionary(ArrayGeometry geometry, SamplingGrid grid, std::vector<double> freq_labels,
                         std::vector<double> doa_labels, std::vector<double> delta_labels,
                         DictionaryConstruction construction)
    : geometry_(std::move(geometry)),
      grid_(grid),
      freq_labels_(std::move(freq_labels)),
      doa_labels_(std::move(doa_labels)),
      delta_labels_(std::move(delta_labels)),
      construction_(std::move(construction)) {
  if (freq_labels_.empty()) throw NumericalError("GDictionary: no atoms");
  if (doa_labels_.size() != freq_labels_.size() || delta_labels_.size() != freq_labels_.size()) {
    throw ParameterError("GDictionary: label vectors differ in length");
  }
  for (std::size_t q = 0; q < freq_labels_.size(); ++q) {
    const double f = freq_labels_[q];
    if (!(f > 0.0)) throw ParameterError("GDictionary: frequencies must be positive");
    if (std::abs(delta_labels_[q] / f) > 1.0 + kValidityTol) {
      throw ParameterError("GDictionary: column with |delta/f| > 1");
    }
  }
  distinct_freqs_ = freq_labels_;
  std::sort(distinct_freqs_.begin(), distinct_freqs_.end());
  distinct_freqs_.erase(std::unique(distinct_freqs_.begin(), distinct_freqs_.end()),
                        distinct_freqs_.end());
  freq_index_.resize(freq_labels_.size());
  for (std::size_t q = 0; q < freq_labels_.size(); ++q) {
    const auto it = std::lower_bound(distinct_freqs_.begin(), distinct_freqs_.end(), freq_labels_[q]);
    freq_index_[q] = static_cast<Index>(it - distinct_freqs_.begin());
  }
}

ComplexVector GDictionary::atom(Index q) const {
  if (q < 0 || q >= cols()) throw ParameterError("GDictionary::atom: column index out of range");
  const auto uq = static_cast<std::size_t>(q);
  if (std::holds_alternative<ConstantDelta>(construction_)) {
    const ComplexMatrix v = delta_steering_matrix(geometry_, {delta_labels_[uq]});
    const ComplexMatrix d = fourier_dictionary(grid_, {freq_labels_[uq]});
    return kronecker_column(v.col(0), d.col(0));
  }
  return g_atom(geometry_, grid_, freq_labels_[uq], doa_labels_[uq]);
}

ComplexMatrix GDictionary::atoms() const {
  ComplexMatrix g(rows(), cols());
  if (std::holds_alternative<ConstantDelta>(construction_)) {
    // one Fourier factor and one delta-steering factor, combined per kept column
    const ComplexMatrix d = fourier_dictionary(grid_, distinct_freqs_);
    const ComplexMatrix v = delta_steering_matrix(geometry_, delta_labels_);
    for (Index q = 0; q < cols(); ++q) {
      g.col(q) = kronecker_column(v.col(q), d.col(freq_index_[static_cast<std::size_t>(q)]));
    }
    return g;
  }
  for (Index q = 0; q < cols(); ++q) g.col(q) = atom(q);
  return g;
}

std::vector<double> uniform_grid(double lo, double hi, int count) {
  if (count < 1) throw ParameterError("uniform_grid: count must be positive");
  std::vector<double> g(static_cast<std::size_t>(count));
  if (count == 1) {
    g[0] = hi;
    return g;
  }
  const double step = (hi - lo) / (count - 1);
  for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = lo + i * step;
  g.back() = hi;
  return g;
}

ComplexMatrix fourier_dictionary(const SamplingGrid& grid, const std::vector<double>& freqs) {
  if (freqs.empty()) throw ParameterError("fourier_dictionary: empty frequency set");
  const Index m = grid.num_snapshots;
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  ComplexMatrix d(m, static_cast<Index>(freqs.size()));
  for (Index k = 0; k < d.cols(); ++k) {
    const double f = freqs[static_cast<std::size_t>(k)];
    for (Index i = 0; i < m; ++i) d(i, k) = scale * unit_phasor(kTwoPi * f * grid.time(i));
  }
  return d;
}

ComplexMatrix delta_steering_matrix(const ArrayGeometry& geometry, const std::vector<double>& deltas) {
  const auto& p = geometry.positions();
  const double c = geometry.propagation_speed();
  ComplexMatrix v(geometry.num_sensors(), static_cast<Index>(deltas.size()));
  for (Index i = 0; i < v.cols(); ++i) {
    const double delta = deltas[static_cast<std::size_t>(i)];
    for (Index e = 0; e < v.rows(); ++e) {
      v(e, i) = unit_phasor(kTwoPi * delta * p[static_cast<std::size_t>(e)] / c);
    }
  }
  return v;
}

ComplexVector kronecker_column(const ComplexVector& v, const ComplexVector& d) {
  ComplexVector g(v.size() * d.size());
  for (Index e = 0; e < v.size(); ++e) g.segment(e * d.size(), d.size()) = v(e) * d;
  return g;
}

GDictionary build_g_constant_delta(const ArrayGeometry& geometry, const SamplingGrid& grid,
                                   double f_low, double f_high, int num_freqs, int num_deltas) {
  if (!(f_low > 0.0) || !(f_low < f_high)) {
    throw ParameterError("build_g_constant_delta: need 0 < f_low < f_high");
  }
  if (num_freqs < 1 || num_deltas < 1) {
    throw ParameterError("build_g_constant_delta: grid sizes must be positive");
  }
  const auto freqs = uniform_grid(f_low, f_high, num_freqs);
  std::vector<double> deltas =
      num_deltas == 1 ? std::vector<double>{0.0} : uniform_grid(-f_high, f_high, num_deltas);
  if (num_deltas % 2 == 1) deltas[static_cast<std::size_t>(num_deltas / 2)] = 0.0;

  // Valid-pair mask S, traversed in vec(Z) order (delta-major, frequency inner),
  // which is the column order of V (x) D.
  std::vector<double> fl, tl, dl;
  for (std::size_t j = 0; j < deltas.size(); ++j) {
    for (std::size_t i = 0; i < freqs.size(); ++i) {
      if (std::abs(deltas[j] / freqs[i]) <= 1.0 + kValidityTol) {
        fl.push_back(freqs[i]);
        tl.push_back(doa_from_delta(deltas[j], freqs[i]));
        dl.push_back(deltas[j]);
      }
    }
  }
  if (fl.empty()) throw NumericalError("build_g_constant_delta: every column was pruned");

  ConstantDelta meta;
  meta.delta_step = num_deltas > 1 ? 2.0 * f_high / (num_deltas - 1) : 0.0;
  meta.freq_step = num_freqs > 1 ? (f_high - f_low) / (num_freqs - 1) : 0.0;
  meta.f_low = f_low;
  meta.f_high = f_high;
  meta.num_freqs = num_freqs;
  meta.num_deltas = num_deltas;
  return {geometry, grid, std::move(fl), std::move(tl), std::move(dl), meta};
}

ComplexVector g_atom(const ArrayGeometry& geometry, const SamplingGrid& grid, double freq,
                     double theta_deg) {
  if (!(std::abs(theta_deg) <= 90.0)) throw DomainError("g_atom: |theta| must not exceed 90");
  if (!(freq > 0.0)) throw DomainError("g_atom: frequency must be positive");
  const Index m = grid.num_snapshots;
  const Index ns = geometry.num_sensors();
  const double s_over_c = std::sin(deg2rad(theta_deg)) / geometry.propagation_speed();
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  // p~ repeats each position M times; t~ tiles the time vector once per sensor.
  ComplexVector g(m * ns);
  for (Index k = 0; k < m * ns; ++k) {
    const double p_tilde = geometry.positions()[static_cast<std::size_t>(k / m)];
    const double t_tilde = grid.time(k % m);
    g(k) = scale * unit_phasor(kTwoPi * freq * (s_over_c * p_tilde + t_tilde));
  }
  return g;
}

GDictionary build_g_direct(const ArrayGeometry& geometry, const SamplingGrid& grid,
                           const std::vector<double>& freq_grid,
                           const std::vector<double>& theta_grid) {
  if (freq_grid.empty() || theta_grid.empty()) throw ParameterError("build_g_direct: empty grid");
  for (double th : theta_grid) {
    if (!(std::abs(th) <= 90.0)) throw DomainError("build_g_direct: |theta| must not exceed 90");
  }
  for (double f : freq_grid) {
    if (!(f > 0.0)) throw DomainError("build_g_direct: frequencies must be positive");
  }
  std::vector<double> fl, tl, dl;
  const std::size_t q = freq_grid.size() * theta_grid.size();
  fl.reserve(q);
  tl.reserve(q);
  dl.reserve(q);
  for (double th : theta_grid) {
    const double s = std::sin(deg2rad(th));
    for (double f : freq_grid) {
      fl.push_back(f);
      tl.push_back(th);
      dl.push_back(f * s);
    }
  }
  return {geometry, grid, std::move(fl), std::move(tl), std::move(dl),
          DirectSynthesis{theta_grid, freq_grid}};
}

double theta_resolution(double delta_step, double freq, double theta_deg) {
  if (!(std::abs(theta_deg) < 90.0)) {
    throw DomainError("theta_resolution: singular at |theta| = 90 degrees");
  }
  if (!(freq > 0.0)) throw DomainError("theta_resolution: frequency must be positive");
  const double s = std::sin(deg2rad(theta_deg));
  return rad2deg((delta_step / freq) / std::sqrt(1.0 - s * s));
}

nlohmann::json dictionary_to_json(const GDictionary& dict) {
  using nlohmann::json;
  json construction;
  if (const auto* cd = std::get_if<ConstantDelta>(&dict.construction())) {
    construction = {{"method", "constant_delta"},   {"delta_step", cd->delta_step},
                    {"freq_step", cd->freq_step},   {"f_low", cd->f_low},
                    {"f_high", cd->f_high},         {"num_freqs", cd->num_freqs},
                    {"num_deltas", cd->num_deltas}};
  } else {
    const auto& ds = std::get<DirectSynthesis>(dict.construction());
    construction = {{"method", "direct"}, {"theta_grid", ds.theta_grid}, {"freq_grid", ds.freq_grid}};
  }
  return json{{"rows", dict.rows()},
              {"cols", dict.cols()},
              {"num_sensors", dict.geometry().num_sensors()},
              {"positions", dict.geometry().positions()},
              {"propagation_speed", dict.geometry().propagation_speed()},
              {"sampling",
               {{"start_time", dict.grid().start_time},
                {"sample_rate", dict.grid().sample_rate},
                {"num_snapshots", dict.grid().num_snapshots}}},
              {"construction", construction},
              {"freq_labels", dict.freq_labels()},
              {"doa_labels", dict.doa_labels()},
              {"delta_labels", dict.delta_labels()}};
}

void write_atoms_csv(std::ostream& os, const GDictionary& dict) {
  // one row per atom: label triple then interleaved (re, im) entries
  os << std::setprecision(17);
  for (Index q = 0; q < dict.cols(); ++q) {
    const auto uq = static_cast<std::size_t>(q);
    os << dict.freq_labels()[uq] << ',' << dict.doa_labels()[uq] << ',' << dict.delta_labels()[uq];
    const ComplexVector g = dict.atom(q);
    for (Index k = 0; k < g.size(); ++k) os << ',' << g(k).real() << ',' << g(k).imag();
    os << '\n';
  }
}

void write_atoms_csv(const std::filesystem::path& path, const GDictionary& dict) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  write_atoms_csv(os, dict);
}

}  // namespace ddfr
