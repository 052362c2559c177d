// SPDX-License-Identifier: Apache-2.0
#include "ddfr/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace ddfr {

namespace {

/// Unitary DFT matrix F(j, n) = exp(-j 2 pi j n / L) / sqrt(L).
ComplexMatrix dft_matrix(int length) {
  ComplexMatrix f(length, length);
  const double scale = 1.0 / std::sqrt(static_cast<double>(length));
  for (int j = 0; j < length; ++j) {
    for (int n = 0; n < length; ++n) {
      // reduce j*n mod L first so the phase stays exact for long records
      const auto jn = static_cast<long long>(j) * n % length;
      f(j, n) = unit_phasor(-kTwoPi * static_cast<double>(jn) / length) * scale;
    }
  }
  return f;
}

double bin_frequency(int bin, int length, double sample_rate) {
  const int signed_bin = 2 * bin <= length ? bin : bin - length;
  return signed_bin * sample_rate / length;
}

SubbandSpectrum empty_spectrum(const std::vector<double>& freqs, const std::vector<double>& doas) {
  return {freqs, doas,
          RealMatrix::Zero(static_cast<Index>(freqs.size()), static_cast<Index>(doas.size()))};
}

}  // namespace

ComplexVector SubbandData::snapshot(int section, int bin) const {
  return sections.at(static_cast<std::size_t>(section)).row(bin).transpose();
}

SubbandData subband_transform(const SnapshotMatrix& snapshots, int section_length) {
  const auto m = static_cast<int>(snapshots.data.rows());
  if (section_length < 1 || section_length > m) {
    throw ParameterError("subband_transform: section length must lie in [1, M]");
  }
  SubbandData sub;
  sub.section_length = section_length;
  sub.sample_rate = snapshots.grid.sample_rate;
  const ComplexMatrix f = dft_matrix(section_length);
  const int w = m / section_length;
  for (int k = 0; k < w; ++k) {
    sub.sections.push_back(f * snapshots.data.middleRows(static_cast<Index>(k) * section_length, section_length));
  }
  for (int j = 0; j < section_length; ++j) {
    sub.subband_freqs.push_back(bin_frequency(j, section_length, sub.sample_rate));
  }
  return sub;
}

std::vector<int> bins_in_band(const SubbandData& sub, double f_low, double f_high) {
  std::vector<int> bins;
  for (int j = 0; j < sub.section_length; ++j) {
    const double f = sub.subband_freqs[static_cast<std::size_t>(j)];
    if (f > 0.0 && f >= f_low && f <= f_high) bins.push_back(j);
  }
  return bins;
}

SubbandCovariance subband_covariance(const SubbandData& sub, const std::vector<int>& bins) {
  if (sub.sections.empty()) throw ParameterError("subband_covariance: no sections");
  const Index ns = sub.sections.front().cols();
  const double w = sub.num_sections();
  SubbandCovariance cov;
  for (int j : bins) {
    if (j < 0 || j >= sub.section_length) throw ParameterError("subband_covariance: bin out of range");
    ComplexMatrix s = ComplexMatrix::Zero(ns, ns);
    for (const auto& sec : sub.sections) {
      const ComplexVector y = sec.row(j).transpose();
      s.noalias() += y * y.adjoint();
    }
    s /= w;
    s = 0.5 * (s + s.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(s);
    if (eig.info() != Eigen::Success) throw NumericalError("subband_covariance: eigendecomposition failed");
    // Eigen sorts ascending; store descending
    cov.bins.push_back(j);
    cov.freqs.push_back(sub.subband_freqs[static_cast<std::size_t>(j)]);
    cov.eigenvalues.push_back(eig.eigenvalues().reverse());
    cov.eigenvectors.push_back(eig.eigenvectors().rowwise().reverse());
    cov.covariance.push_back(std::move(s));
  }
  return cov;
}

ComplexVector steering_vector_signed(const ArrayGeometry& geometry, double theta_deg, double freq) {
  if (std::abs(theta_deg) > 90.0) throw DomainError("steering vector: |theta| must not exceed 90 degrees");
  const auto& p = geometry.positions();
  const double s = std::sin(deg2rad(theta_deg)) / geometry.propagation_speed();
  ComplexVector v(static_cast<Index>(p.size()));
  for (std::size_t k = 0; k < p.size(); ++k) v(static_cast<Index>(k)) = unit_phasor(kTwoPi * freq * p[k] * s);
  return v;
}

SubbandSpectrum cbf_spectrum(const SubbandData& sub, const std::vector<int>& bins,
                             const ArrayGeometry& geometry, const std::vector<double>& theta_grid) {
  std::vector<double> freqs;
  for (int j : bins) freqs.push_back(sub.subband_freqs.at(static_cast<std::size_t>(j)));
  SubbandSpectrum out = empty_spectrum(freqs, theta_grid);
  const double w = sub.num_sections();
  for (std::size_t b = 0; b < bins.size(); ++b) {
    for (std::size_t t = 0; t < theta_grid.size(); ++t) {
      const ComplexVector v = steering_vector_signed(geometry, theta_grid[t], freqs[b]);
      double acc = 0.0;
      for (const auto& sec : sub.sections) acc += std::norm(v.dot(sec.row(bins[b]).transpose()));
      out.power(static_cast<Index>(b), static_cast<Index>(t)) = acc / w;
    }
  }
  return out;
}

SubbandSpectrum icapon_spectrum(const SubbandCovariance& cov, const ArrayGeometry& geometry,
                                const std::vector<double>& theta_grid, double diagonal_loading) {
  if (!(diagonal_loading >= 0.0)) throw ParameterError("icapon: loading must be nonnegative");
  SubbandSpectrum out = empty_spectrum(cov.freqs, theta_grid);
  for (std::size_t b = 0; b < cov.freqs.size(); ++b) {
    const ComplexMatrix& s = cov.covariance[b];
    const Index ns = s.rows();
    const double load = diagonal_loading * s.trace().real() / static_cast<double>(ns);
    const ComplexMatrix loaded = s + load * ComplexMatrix::Identity(ns, ns);
    Eigen::LLT<ComplexMatrix> llt(loaded);
    if (llt.info() != Eigen::Success) throw NumericalError("icapon: covariance singular after loading");
    for (std::size_t t = 0; t < theta_grid.size(); ++t) {
      const ComplexVector v = steering_vector_signed(geometry, theta_grid[t], cov.freqs[b]);
      const double denom = v.dot(llt.solve(v)).real();
      out.power(static_cast<Index>(b), static_cast<Index>(t)) = 1.0 / denom;
    }
  }
  return out;
}

SubbandSpectrum imusic_spectrum(const SubbandCovariance& cov, const ArrayGeometry& geometry,
                                const std::vector<double>& theta_grid,
                                const std::vector<int>& per_subband_order) {
  if (per_subband_order.size() != cov.freqs.size()) {
    throw ParameterError("imusic: one model order per subband required");
  }
  SubbandSpectrum out = empty_spectrum(cov.freqs, theta_grid);
  for (std::size_t b = 0; b < cov.freqs.size(); ++b) {
    const Index ns = cov.eigenvectors[b].cols();
    const int p = per_subband_order[b];
    if (p < 0 || p >= ns) throw ParameterError("imusic: order must leave a nonempty noise subspace");
    const ComplexMatrix un = cov.eigenvectors[b].rightCols(ns - p);
    for (std::size_t t = 0; t < theta_grid.size(); ++t) {
      const ComplexVector v = steering_vector_signed(geometry, theta_grid[t], cov.freqs[b]);
      const double denom = (un.adjoint() * v).squaredNorm();
      out.power(static_cast<Index>(b), static_cast<Index>(t)) = denom > 1.0 / kMusicCap ? 1.0 / denom : kMusicCap;
    }
  }
  return out;
}

DoaSpectrum band_average(const SubbandSpectrum& spectrum) {
  if (spectrum.power.rows() == 0) throw ParameterError("band_average: no subbands");
  DoaSpectrum s;
  s.doas = spectrum.doas;
  const RealVector mean = spectrum.power.colwise().mean().transpose();
  s.power.assign(mean.data(), mean.data() + mean.size());
  return s;
}

ComplexVector delay_sum_extract(const SnapshotMatrix& snapshots, double theta_true_deg, const Band& band) {
  const auto m = static_cast<int>(snapshots.data.rows());
  const ComplexMatrix f = dft_matrix(m);
  const ComplexMatrix spec = f * snapshots.data;
  ComplexVector aligned = ComplexVector::Zero(m);
  const double ns = static_cast<double>(snapshots.data.cols());
  for (int j = 0; j < m; ++j) {
    const double fj = bin_frequency(j, m, snapshots.grid.sample_rate);
    if (fj < band.f_low || fj > band.f_high) continue;
    const ComplexVector v = steering_vector_signed(snapshots.geometry, theta_true_deg, fj);
    aligned(j) = v.dot(spec.row(j).transpose()) / ns;
  }
  return f.adjoint() * aligned;
}

}  // namespace ddfr
