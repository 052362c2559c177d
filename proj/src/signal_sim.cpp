// SPDX-License-Identifier: Apache-2.0
#include "ddfr/signal_sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ddfr {

ArrayGeometry::ArrayGeometry(std::vector<double> positions, double propagation_speed)
    : positions_(std::move(positions)), speed_(propagation_speed) {
  if (positions_.size() < 2) throw ParameterError("ArrayGeometry: at least 2 sensors required");
  for (std::size_t k = 1; k < positions_.size(); ++k) {
    if (!(positions_[k] > positions_[k - 1])) {
      throw ParameterError("ArrayGeometry: positions must be strictly increasing");
    }
  }
  if (!(speed_ > 0.0) || !std::isfinite(speed_)) {
    throw ParameterError("ArrayGeometry: propagation speed must be positive");
  }
}

ArrayGeometry ArrayGeometry::ula(int num_sensors, double spacing, double propagation_speed) {
  if (num_sensors < 2) throw ParameterError("ArrayGeometry::ula: at least 2 sensors required");
  if (!(spacing > 0.0)) throw ParameterError("ArrayGeometry::ula: spacing must be positive");
  std::vector<double> p(static_cast<std::size_t>(num_sensors));
  for (int k = 0; k < num_sensors; ++k) p[static_cast<std::size_t>(k)] = k * spacing;
  return {std::move(p), propagation_speed};
}

double ArrayGeometry::uniform_spacing() const {
  const double d = positions_[1] - positions_[0];
  for (std::size_t k = 2; k < positions_.size(); ++k) {
    if (std::abs((positions_[k] - positions_[k - 1]) - d) > 1e-9 * d) return 0.0;
  }
  return d;
}

SamplingGrid::SamplingGrid(double start, double rate, int count)
    : start_time(start), sample_rate(rate), num_snapshots(count) {
  if (!(rate > 0.0)) throw ParameterError("SamplingGrid: sample rate must be positive");
  if (count < 1) throw ParameterError("SamplingGrid: at least one snapshot required");
}

RealVector SamplingGrid::times() const {
  RealVector t(num_snapshots);
  for (Index i = 0; i < num_snapshots; ++i) t(i) = time(i);
  return t;
}

ComplexVector steering_vector(const ArrayGeometry& geometry, double theta_deg, double freq) {
  if (!(std::abs(theta_deg) <= 90.0)) {
    throw DomainError("steering_vector: |theta| must not exceed 90 degrees");
  }
  if (!(freq > 0.0)) throw DomainError("steering_vector: frequency must be positive");
  const double s = std::sin(deg2rad(theta_deg));
  const auto& p = geometry.positions();
  ComplexVector v(geometry.num_sensors());
  for (Index k = 0; k < v.size(); ++k) {
    v(k) = unit_phasor(kTwoPi * freq * (p[static_cast<std::size_t>(k)] / geometry.propagation_speed()) * s);
  }
  return v;
}

namespace {

void check_frequency(double f, const SamplingGrid& grid, const char* what) {
  if (!(f > 0.0) || !(f < grid.sample_rate / 2.0)) {
    throw ParameterError(std::string(what) + ": frequency " + std::to_string(f) +
                         " Hz outside (0, fs/2)");
  }
}

Complex draw_circular(std::mt19937_64& rng, double variance) {
  std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

}  // namespace

SourceRealization realize_source(const SourceSpec& spec, const SamplingGrid& grid,
                                 std::mt19937_64& rng) {
  if (!(std::abs(spec.doa_deg) <= 90.0)) throw DomainError("source DOA outside [-90, 90]");
  const double target_power = std::pow(10.0, spec.snr_db / 10.0);

  SourceRealization out;
  out.doa_deg = spec.doa_deg;

  if (const auto* mt = std::get_if<Multitone>(&spec.kind)) {
    double shape_power = 0.0;
    for (const auto& tone : mt->tones) {
      check_frequency(tone.freq, grid, "multitone source");
      shape_power += std::norm(tone.amplitude);
    }
    const double scale = shape_power > 0.0 ? std::sqrt(target_power / shape_power) : 0.0;
    out.tones.reserve(mt->tones.size());
    for (const auto& tone : mt->tones) out.tones.push_back({tone.freq, tone.amplitude * scale});
    return out;
  }

  const auto& g = std::get<BandlimitedGaussian>(spec.kind);
  if (!(g.f_low < g.f_high)) throw ParameterError("gaussian source: f_low must be below f_high");
  check_frequency(g.f_low, grid, "gaussian source");
  check_frequency(g.f_high, grid, "gaussian source");
  if (g.num_spectral_lines < 1) throw ParameterError("gaussian source: need at least one line");
  if (!(g.power >= 0.0)) throw ParameterError("gaussian source: power must be nonnegative");

  const double line_variance = g.power * target_power / g.num_spectral_lines;
  std::uniform_real_distribution<double> uf(g.f_low, g.f_high);
  out.tones.reserve(static_cast<std::size_t>(g.num_spectral_lines));
  for (int l = 0; l < g.num_spectral_lines; ++l) {
    const double f = uf(rng);
    out.tones.push_back({f, draw_circular(rng, line_variance)});
  }
  return out;
}

ComplexVector source_waveform(const SourceRealization& source, const RealVector& times) {
  ComplexVector s = ComplexVector::Zero(times.size());
  for (const auto& tone : source.tones) {
    for (Index i = 0; i < times.size(); ++i) {
      s(i) += tone.amplitude * unit_phasor(kTwoPi * tone.freq * times(i));
    }
  }
  return s;
}

ComplexMatrix complex_gaussian(Index rows, Index cols, double variance, std::mt19937_64& rng) {
  ComplexMatrix n(rows, cols);
  std::normal_distribution<double> dist(0.0, std::sqrt(variance / 2.0));
  // column-major fill keeps the draw order tied to vec(Y)
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) {
      const double re = dist(rng);
      const double im = dist(rng);
      n(r, c) = {re, im};
    }
  }
  return n;
}

SnapshotMatrix synthesize_snapshots(const ArrayGeometry& geometry, const SamplingGrid& grid,
                                    const std::vector<SourceRealization>& sources,
                                    double noise_variance, std::mt19937_64& noise_rng) {
  if (!(noise_variance >= 0.0)) throw ParameterError("noise variance must be nonnegative");
  const Index m = grid.num_snapshots;
  const Index ns = geometry.num_sensors();
  const RealVector t = grid.times();
  const auto& p = geometry.positions();
  const double c = geometry.propagation_speed();

  ComplexMatrix y = ComplexMatrix::Zero(m, ns);
  for (const auto& src : sources) {
    const double s = std::sin(deg2rad(src.doa_deg));
    for (const auto& tone : src.tones) {
      for (Index k = 0; k < ns; ++k) {
        // tau_k = -p_k sin(theta) / c
        const double tau = -p[static_cast<std::size_t>(k)] * s / c;
        for (Index i = 0; i < m; ++i) {
          y(i, k) += tone.amplitude * unit_phasor(kTwoPi * tone.freq * (t(i) - tau));
        }
      }
    }
  }
  if (noise_variance > 0.0) y += complex_gaussian(m, ns, noise_variance, noise_rng);
  return {std::move(y), grid, geometry};
}

std::mt19937_64 seeded_stream(std::uint64_t seed, std::uint32_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream_id};
  return std::mt19937_64(seq);
}

SimulatedScene simulate_scene(const ArrayGeometry& geometry, const SamplingGrid& grid,
                              const std::vector<SourceSpec>& sources, std::uint64_t seed,
                              double noise_variance) {
  auto source_rng = seeded_stream(seed, kSourceStream);
  auto noise_rng = seeded_stream(seed, kNoiseStream);
  SimulatedScene scene{SnapshotMatrix{ComplexMatrix(), grid, geometry}, {}};
  scene.sources.reserve(sources.size());
  for (const auto& spec : sources) scene.sources.push_back(realize_source(spec, grid, source_rng));
  scene.snapshots = synthesize_snapshots(geometry, grid, scene.sources, noise_variance, noise_rng);
  return scene;
}

SnapshotMatrix simulate_snapshots(const ArrayGeometry& geometry, const SamplingGrid& grid,
                                  const std::vector<SourceSpec>& sources, std::uint64_t seed,
                                  double noise_variance) {
  return simulate_scene(geometry, grid, sources, seed, noise_variance).snapshots;
}

ComplexVector concatenate(const ComplexMatrix& data) {
  return Eigen::Map<const ComplexVector>(data.data(), data.size());
}

ComplexVector concatenate(const SnapshotMatrix& snapshots) { return concatenate(snapshots.data); }

}  // namespace ddfr
