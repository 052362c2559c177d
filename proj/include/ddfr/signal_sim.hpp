// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "ddfr/types.hpp"

namespace ddfr {

/// Sensor positions along the array axis (meters) and propagation speed (m/s).
class ArrayGeometry {
 public:
  ArrayGeometry(std::vector<double> positions, double propagation_speed);

  /// Uniform linear array with the first sensor at the origin.
  static ArrayGeometry ula(int num_sensors, double spacing, double propagation_speed);

  const std::vector<double>& positions() const { return positions_; }
  double propagation_speed() const { return speed_; }
  int num_sensors() const { return static_cast<int>(positions_.size()); }

  /// Element spacing when the array is uniform (to 1e-9 relative); 0 otherwise.
  double uniform_spacing() const;

 private:
  std::vector<double> positions_;
  double speed_;
};

/// Uniform time sampling t_i = t_1 + (i-1)/f_s, i = 1..M.
struct SamplingGrid {
  double start_time = 0.0;
  double sample_rate = 1.0;
  int num_snapshots = 1;

  SamplingGrid() = default;
  SamplingGrid(double start, double rate, int count);

  RealVector times() const;
  double time(Index i) const { return start_time + static_cast<double>(i) / sample_rate; }
  double end_time() const { return time(num_snapshots - 1); }
};

struct Tone {
  double freq = 0.0;
  Complex amplitude{1.0, 0.0};
};

struct Multitone {
  std::vector<Tone> tones;
};

/// Band-limited Gaussian process synthesized from random spectral lines.
struct BandlimitedGaussian {
  double f_low = 0.0;
  double f_high = 0.0;
  int num_spectral_lines = 200;
  double power = 1.0;  // multiplies the SNR-derived power
};

/// Far-field source. The realized power over all samples is 10^(snr_db/10)
/// relative to unit-variance noise; tone amplitudes only fix relative levels.
struct SourceSpec {
  double doa_deg = 0.0;
  std::variant<Multitone, BandlimitedGaussian> kind;
  double snr_db = 0.0;
};

/// A source with every random draw resolved: a finite set of tones with
/// absolute complex amplitudes, as seen at the array origin.
struct SourceRealization {
  double doa_deg = 0.0;
  std::vector<Tone> tones;
};

/// Array observation matrix Y (rows = time samples, columns = sensors).
struct SnapshotMatrix {
  ComplexMatrix data;
  SamplingGrid grid;
  ArrayGeometry geometry;
};

struct SimulatedScene {
  SnapshotMatrix snapshots;
  std::vector<SourceRealization> sources;
};

/// Per-sensor phase exp(j 2 pi f (p_k / c) sin(theta)).
ComplexVector steering_vector(const ArrayGeometry& geometry, double theta_deg, double freq);

/// Resolves a source description into explicit tones, drawing Gaussian lines from `rng`.
SourceRealization realize_source(const SourceSpec& spec, const SamplingGrid& grid,
                                 std::mt19937_64& rng);

/// Waveform of a realized source at the array origin on the given time instants.
ComplexVector source_waveform(const SourceRealization& source, const RealVector& times);

/// Exact per-tone delayed sum of realized sources plus circular white Gaussian noise.
SnapshotMatrix synthesize_snapshots(const ArrayGeometry& geometry, const SamplingGrid& grid,
                                    const std::vector<SourceRealization>& sources,
                                    double noise_variance, std::mt19937_64& noise_rng);

/// Independent generator for (seed, stream_id). Simulation draws sources from
/// kSourceStream and noise from kNoiseStream; callers own the other ids.
inline constexpr std::uint32_t kSourceStream = 1;
inline constexpr std::uint32_t kNoiseStream = 2;
std::mt19937_64 seeded_stream(std::uint64_t seed, std::uint32_t stream_id);

/// Full simulation; sources and noise use independent streams derived from `seed`.
SimulatedScene simulate_scene(const ArrayGeometry& geometry, const SamplingGrid& grid,
                              const std::vector<SourceSpec>& sources, std::uint64_t seed,
                              double noise_variance = 1.0);

SnapshotMatrix simulate_snapshots(const ArrayGeometry& geometry, const SamplingGrid& grid,
                                  const std::vector<SourceSpec>& sources, std::uint64_t seed,
                                  double noise_variance = 1.0);

/// Column-major stacking vec(Y): sensor 1's M samples, then sensor 2's, ...
ComplexVector concatenate(const SnapshotMatrix& snapshots);
ComplexVector concatenate(const ComplexMatrix& data);

/// Circular complex Gaussian noise with E|n|^2 = variance.
ComplexMatrix complex_gaussian(Index rows, Index cols, double variance, std::mt19937_64& rng);

}  // namespace ddfr
