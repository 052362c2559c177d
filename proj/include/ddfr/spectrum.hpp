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

struct Pixel {
  double freq = 0.0;
  double doa = 0.0;
  Complex value{};
};

/// One pixel per dictionary column, in column order.
struct DoaFreqImage {
  std::vector<Pixel> pixels;
  nlohmann::json grid_meta;
};

struct DoaSpectrum {
  std::vector<double> doas;
  std::vector<double> power;
};

DoaFreqImage image_from_result(const GDictionary& dict, const SolverResult& result);

/// power[i] = |z_{G_i}|_2.
DoaSpectrum group_spectrum(const GDictionary& dict, const SolverResult& result,
                           const GroupPartition& partition);

/// Mean of |z|^2 over the pixels whose DOA is nearest to each grid point
/// (ties to the lower grid point); empty cells give 0.
DoaSpectrum incoherent_doa_average(const DoaFreqImage& image, const std::vector<double>& theta_grid);

/// Local maxima by descending power (equal power: lower DOA first). A plateau
/// counts once, at its lowest DOA, when both neighbors are strictly lower; an
/// endpoint only needs its single neighbor to be lower.
std::vector<double> peak_find(const DoaSpectrum& spectrum, int num_peaks);

/// Nearest-cell raster of pixel magnitudes, rows = frequency bins, columns =
/// DOA bins; the largest magnitude in a cell wins.
struct Raster {
  std::vector<double> freqs;
  std::vector<double> doas;
  RealMatrix magnitude;
};
Raster rasterize(const DoaFreqImage& image, const std::vector<double>& freq_bins,
                 const std::vector<double>& doa_bins);

/// Raster over the image's own distinct frequencies and DOAs (or a uniform
/// DOA grid of `doa_step` degrees when it is positive).
Raster rasterize_auto(const DoaFreqImage& image, double doa_step = 0.0);

/// Binary 16-bit PGM, magnitudes mapped to [0, 65535] on a log scale spanning
/// `dynamic_range_db` below the peak.
void write_pgm(std::ostream& os, const Raster& raster, double dynamic_range_db = 40.0);
void write_pgm(const std::filesystem::path& path, const Raster& raster, double dynamic_range_db = 40.0);

/// Rows: freq, doa, re, im, magnitude.
void write_pixels_csv(std::ostream& os, const DoaFreqImage& image);
void write_pixels_csv(const std::filesystem::path& path, const DoaFreqImage& image);

/// Rows: freq, doa, power, for a frequency x DOA power matrix.
void write_power_csv(std::ostream& os, const std::vector<double>& freqs,
                     const std::vector<double>& doas, const RealMatrix& power);

/// Index of the grid point nearest to x, ties to the lower one. `grid` ascending.
std::size_t nearest_index(const std::vector<double>& grid, double x);

}  // namespace ddfr
