// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "ddfr/signal_sim.hpp"
#include "ddfr/spectrum.hpp"
#include "ddfr/types.hpp"

namespace ddfr {

/// Non-overlapping rectangular sections transformed by a unitary DFT.
/// sections[k](j, e) is bin j of section k at sensor e.
struct SubbandData {
  int section_length = 0;
  double sample_rate = 0.0;
  std::vector<ComplexMatrix> sections;
  std::vector<double> subband_freqs;  // signed bin centers, one per DFT bin

  int num_sections() const { return static_cast<int>(sections.size()); }
  /// y^F_{k,j}: the N_S sensor values of bin j in section k.
  ComplexVector snapshot(int section, int bin) const;
};

SubbandData subband_transform(const SnapshotMatrix& snapshots, int section_length);

/// Bins with positive center frequency in [f_low, f_high].
std::vector<int> bins_in_band(const SubbandData& sub, double f_low, double f_high);

/// Per-subband sample covariance (1/W) sum_k y y^H with its eigendecomposition,
/// eigenvalues descending. Only the requested bins are kept.
struct SubbandCovariance {
  std::vector<int> bins;
  std::vector<double> freqs;
  std::vector<ComplexMatrix> covariance;
  std::vector<ComplexMatrix> eigenvectors;
  std::vector<RealVector> eigenvalues;
};

SubbandCovariance subband_covariance(const SubbandData& sub, const std::vector<int>& bins);

/// Power over (subband, DOA): rows follow `freqs`, columns follow `doas`.
struct SubbandSpectrum {
  std::vector<double> freqs;
  std::vector<double> doas;
  RealMatrix power;
};

/// exp(j 2 pi f p sin(theta) / c) for any real f.
ComplexVector steering_vector_signed(const ArrayGeometry& geometry, double theta_deg, double freq);

/// P(f_j, theta) = (1/W) sum_k |v^H y^F_{k,j}|^2 on the given bins.
SubbandSpectrum cbf_spectrum(const SubbandData& sub, const std::vector<int>& bins,
                             const ArrayGeometry& geometry, const std::vector<double>& theta_grid);

/// P = 1 / (v^H (S + loading trace(S)/N_S I)^{-1} v).
SubbandSpectrum icapon_spectrum(const SubbandCovariance& cov, const ArrayGeometry& geometry,
                                const std::vector<double>& theta_grid, double diagonal_loading = 1e-3);

/// P = 1 / |v^H U_n U_n^H v|, capped at kMusicCap. U_n holds the N_S - p
/// smallest eigenvectors; p is given per subband.
inline constexpr double kMusicCap = 1e12;
SubbandSpectrum imusic_spectrum(const SubbandCovariance& cov, const ArrayGeometry& geometry,
                                const std::vector<double>& theta_grid,
                                const std::vector<int>& per_subband_order);

/// Mean over the subbands of a spectrum.
DoaSpectrum band_average(const SubbandSpectrum& spectrum);

struct Band {
  double f_low = 0.0;
  double f_high = 0.0;
};

/// Full-record DFT per sensor, bin j phase-aligned by conj(v(theta, f_j)),
/// averaged over sensors, bins with center outside [f_low, f_high] zeroed,
/// inverse DFT.
ComplexVector delay_sum_extract(const SnapshotMatrix& snapshots, double theta_true_deg, const Band& band);

}  // namespace ddfr
