// SPDX-License-Identifier: Apache-2.0
#include "ddfr/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>

namespace ddfr {

DoaFreqImage image_from_result(const GDictionary& dict, const SolverResult& result) {
  if (result.coefficients.size() != dict.cols()) {
    throw ParameterError("image_from_result: coefficient count differs from the dictionary width");
  }
  DoaFreqImage image;
  image.grid_meta = dictionary_to_json(dict);
  image.grid_meta.erase("freq_labels");
  image.grid_meta.erase("doa_labels");
  image.grid_meta.erase("delta_labels");
  image.pixels.reserve(static_cast<std::size_t>(dict.cols()));
  for (Index q = 0; q < dict.cols(); ++q) {
    const auto k = static_cast<std::size_t>(q);
    if (!std::isfinite(result.coefficients(q).real()) || !std::isfinite(result.coefficients(q).imag())) {
      throw NumericalError("image_from_result: non-finite coefficient");
    }
    image.pixels.push_back({dict.freq_labels()[k], dict.doa_labels()[k], result.coefficients(q)});
  }
  return image;
}

DoaSpectrum group_spectrum(const GDictionary& dict, const SolverResult& result,
                           const GroupPartition& partition) {
  if (result.coefficients.size() != dict.cols()) {
    throw ParameterError("group_spectrum: coefficient count differs from the dictionary width");
  }
  partition.validate(dict.cols(), false);
  DoaSpectrum s;
  s.doas = partition.labels;
  for (const auto& [b, e] : partition.groups) s.power.push_back(result.coefficients.segment(b, e - b).norm());
  return s;
}

std::size_t nearest_index(const std::vector<double>& grid, double x) {
  if (grid.empty()) throw ParameterError("nearest_index: empty grid");
  auto it = std::lower_bound(grid.begin(), grid.end(), x);
  if (it == grid.begin()) return 0;
  if (it == grid.end()) return grid.size() - 1;
  const auto hi = static_cast<std::size_t>(it - grid.begin());
  return (x - grid[hi - 1] <= grid[hi] - x) ? hi - 1 : hi;
}

DoaSpectrum incoherent_doa_average(const DoaFreqImage& image, const std::vector<double>& theta_grid) {
  if (!std::is_sorted(theta_grid.begin(), theta_grid.end())) {
    throw ParameterError("incoherent_doa_average: theta grid must be ascending");
  }
  DoaSpectrum s;
  s.doas = theta_grid;
  s.power.assign(theta_grid.size(), 0.0);
  std::vector<int> count(theta_grid.size(), 0);
  for (const auto& p : image.pixels) {
    const std::size_t i = nearest_index(theta_grid, p.doa);
    s.power[i] += std::norm(p.value);
    ++count[i];
  }
  for (std::size_t i = 0; i < s.power.size(); ++i) {
    if (count[i] > 0) s.power[i] /= count[i];
  }
  return s;
}

std::vector<double> peak_find(const DoaSpectrum& spectrum, int num_peaks) {
  if (num_peaks < 1) throw ParameterError("peak_find: num_peaks must be at least 1");
  if (spectrum.doas.size() != spectrum.power.size()) {
    throw ParameterError("peak_find: DOA and power lengths differ");
  }
  const auto& p = spectrum.power;
  const std::size_t n = p.size();
  std::vector<std::size_t> peaks;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && p[j + 1] == p[i]) ++j;
    const bool left_lower = i == 0 || p[i - 1] < p[i];
    const bool right_lower = j + 1 == n || p[j + 1] < p[i];
    const bool has_neighbor = i > 0 || j + 1 < n;
    if (left_lower && right_lower && has_neighbor) peaks.push_back(i);
    i = j + 1;
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) {
    if (p[a] != p[b]) return p[a] > p[b];
    return spectrum.doas[a] < spectrum.doas[b];
  });
  if (peaks.size() > static_cast<std::size_t>(num_peaks)) peaks.resize(static_cast<std::size_t>(num_peaks));
  std::vector<double> out;
  for (std::size_t k : peaks) out.push_back(spectrum.doas[k]);
  return out;
}

Raster rasterize(const DoaFreqImage& image, const std::vector<double>& freq_bins,
                 const std::vector<double>& doa_bins) {
  if (freq_bins.empty() || doa_bins.empty()) throw ParameterError("rasterize: empty bin grid");
  if (!std::is_sorted(freq_bins.begin(), freq_bins.end()) || !std::is_sorted(doa_bins.begin(), doa_bins.end())) {
    throw ParameterError("rasterize: bins must be ascending");
  }
  Raster r{freq_bins, doa_bins, RealMatrix::Zero(static_cast<Index>(freq_bins.size()), static_cast<Index>(doa_bins.size()))};
  for (const auto& px : image.pixels) {
    const auto fi = static_cast<Index>(nearest_index(freq_bins, px.freq));
    const auto ti = static_cast<Index>(nearest_index(doa_bins, px.doa));
    r.magnitude(fi, ti) = std::max(r.magnitude(fi, ti), std::abs(px.value));
  }
  return r;
}

Raster rasterize_auto(const DoaFreqImage& image, double doa_step) {
  std::set<double> freqs;
  std::set<double> doas;
  for (const auto& px : image.pixels) {
    freqs.insert(px.freq);
    doas.insert(px.doa);
  }
  if (freqs.empty()) throw ParameterError("rasterize_auto: empty image");
  std::vector<double> doa_bins;
  if (doa_step > 0.0) {
    const int n = static_cast<int>(std::floor(180.0 / doa_step + 1e-9));
    for (int k = 0; k <= n; ++k) doa_bins.push_back(-90.0 + k * doa_step);
  } else {
    doa_bins.assign(doas.begin(), doas.end());
  }
  return rasterize(image, {freqs.begin(), freqs.end()}, doa_bins);
}

void write_pgm(std::ostream& os, const Raster& raster, double dynamic_range_db) {
  if (!(dynamic_range_db > 0.0)) throw ParameterError("write_pgm: dynamic range must be positive");
  const Index rows = raster.magnitude.rows();
  const Index cols = raster.magnitude.cols();
  const double peak = rows * cols > 0 ? raster.magnitude.maxCoeff() : 0.0;
  os << "P5\n" << cols << ' ' << rows << "\n65535\n";
  // Highest frequency on the top row.
  for (Index r = rows - 1; r >= 0; --r) {
    for (Index c = 0; c < cols; ++c) {
      const double m = raster.magnitude(r, c);
      double level = 0.0;
      if (peak > 0.0 && m > 0.0) {
        const double db = 20.0 * std::log10(m / peak);
        level = std::clamp(1.0 + db / dynamic_range_db, 0.0, 1.0);
      }
      const auto v = static_cast<std::uint16_t>(std::lround(level * 65535.0));
      os.put(static_cast<char>(v >> 8));
      os.put(static_cast<char>(v & 0xff));
    }
  }
}

void write_pgm(const std::filesystem::path& path, const Raster& raster, double dynamic_range_db) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
  write_pgm(os, raster, dynamic_range_db);
}

void write_pixels_csv(std::ostream& os, const DoaFreqImage& image) {
  os << "freq,doa,re,im,magnitude\n" << std::setprecision(17);
  for (const auto& p : image.pixels) {
    os << p.freq << ',' << p.doa << ',' << p.value.real() << ',' << p.value.imag() << ','
       << std::abs(p.value) << '\n';
  }
}

void write_pixels_csv(const std::filesystem::path& path, const DoaFreqImage& image) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
  write_pixels_csv(os, image);
}

void write_power_csv(std::ostream& os, const std::vector<double>& freqs,
                     const std::vector<double>& doas, const RealMatrix& power) {
  if (power.rows() != static_cast<Index>(freqs.size()) || power.cols() != static_cast<Index>(doas.size())) {
    throw ParameterError("write_power_csv: shape mismatch");
  }
  os << "freq,doa,power\n" << std::setprecision(17);
  for (std::size_t f = 0; f < freqs.size(); ++f) {
    for (std::size_t t = 0; t < doas.size(); ++t) {
      os << freqs[f] << ',' << doas[t] << ',' << power(static_cast<Index>(f), static_cast<Index>(t)) << '\n';
    }
  }
}

}  // namespace ddfr
