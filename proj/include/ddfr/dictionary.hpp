// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ddfr/signal_sim.hpp"
#include "ddfr/types.hpp"

namespace ddfr {

/// Uniform delta grid (delta = f sin(theta)) crossed with a uniform frequency grid.
struct ConstantDelta {
  double delta_step = 0.0;  // 0 when a single delta is used
  double freq_step = 0.0;   // 0 when a single frequency is used
  double f_low = 0.0;
  double f_high = 0.0;
  int num_freqs = 0;
  int num_deltas = 0;
};

/// Atoms placed on an explicit (theta, f) lattice.
struct DirectSynthesis {
  std::vector<double> theta_grid;
  std::vector<double> freq_grid;
};

using DictionaryConstruction = std::variant<ConstantDelta, DirectSynthesis>;

/// DOA-frequency dictionary. Column q is the atom
///   g(f_q, theta_q) = (1/sqrt(M)) exp(j 2 pi f_q (sin(theta_q) p~/c + t~)),
/// labelled by (f_q, theta_q, delta_q = f_q sin(theta_q)).
///
/// The atom matrix is materialized on demand: a 1600 x 5600 dictionary is
/// 140 MB, while solvers only need the factored form (see DictionaryOperator).
class GDictionary {
 public:
  GDictionary(ArrayGeometry geometry, SamplingGrid grid, std::vector<double> freq_labels,
              std::vector<double> doa_labels, std::vector<double> delta_labels,
              DictionaryConstruction construction);

  Index rows() const { return static_cast<Index>(grid_.num_snapshots) * geometry_.num_sensors(); }
  Index cols() const { return static_cast<Index>(freq_labels_.size()); }

  const std::vector<double>& freq_labels() const { return freq_labels_; }
  const std::vector<double>& doa_labels() const { return doa_labels_; }
  const std::vector<double>& delta_labels() const { return delta_labels_; }
  const DictionaryConstruction& construction() const { return construction_; }
  const ArrayGeometry& geometry() const { return geometry_; }
  const SamplingGrid& grid() const { return grid_; }

  /// Distinct column frequencies (ascending) and each column's index into them.
  const std::vector<double>& distinct_freqs() const { return distinct_freqs_; }
  const std::vector<Index>& freq_index() const { return freq_index_; }

  ComplexVector atom(Index q) const;
  ComplexMatrix atoms() const;

 private:
  ArrayGeometry geometry_;
  SamplingGrid grid_;
  std::vector<double> freq_labels_;
  std::vector<double> doa_labels_;
  std::vector<double> delta_labels_;
  DictionaryConstruction construction_;
  std::vector<double> distinct_freqs_;
  std::vector<Index> freq_index_;
};

/// d_{i,k} = exp(j 2 pi f_k t_i) / sqrt(M)
ComplexMatrix fourier_dictionary(const SamplingGrid& grid, const std::vector<double>& freqs);

/// Column i = exp(j 2 pi delta_i p / c).
ComplexMatrix delta_steering_matrix(const ArrayGeometry& geometry, const std::vector<double>& deltas);

/// Kronecker column v (x) d: entry e*len(d) + i equals v_e d_i.
ComplexVector kronecker_column(const ComplexVector& v, const ComplexVector& d);

/// `count` points spread uniformly over [lo, hi]; a single point sits at `hi`.
std::vector<double> uniform_grid(double lo, double hi, int count);

/// Constant-delta-step dictionary: V(Delta) (x) D(F) with every column whose
/// |delta/f| > 1 removed. Frequencies are uniform on [f_low, f_high]; deltas
/// are symmetric on [-f_high, f_high].
GDictionary build_g_constant_delta(const ArrayGeometry& geometry, const SamplingGrid& grid,
                                   double f_low, double f_high, int num_freqs, int num_deltas);

/// Closed-form atom g(f, theta).
ComplexVector g_atom(const ArrayGeometry& geometry, const SamplingGrid& grid, double freq,
                     double theta_deg);

/// One atom per (f, theta) pair, theta-major: all frequencies of theta_1 first.
GDictionary build_g_direct(const ArrayGeometry& geometry, const SamplingGrid& grid,
                           const std::vector<double>& freq_grid,
                           const std::vector<double>& theta_grid);

/// |sin(N pi x) / (N sin(pi x))|, by its limit 1 where sin(pi x) = 0.
double dirichlet_magnitude(int n, double x);

/// Normalized inner product of two atoms of a ULA dictionary separated by
/// (delta_diff, freq_diff).
double coherence_closed_form_ula(int num_sensors, double spacing, double propagation_speed,
                                 int num_snapshots, double sample_rate, double delta_diff,
                                 double freq_diff);

struct CoherenceReport {
  double max_coherence = 0.0;
  std::pair<Index, Index> offending_pair{0, 0};
  std::vector<double> frequencies;        // distinct column frequencies, ascending
  std::vector<double> per_frequency_max;  // max over iso-frequency pairs; 0 if no pair
};

/// Exact maximum of |<g_a, g_b>| / (|g_a| |g_b|) over all column pairs.
CoherenceReport coherence_brute_force(const GDictionary& dict);
CoherenceReport coherence_brute_force(const ComplexMatrix& atoms, const std::vector<double>& freq_labels);

struct GuaranteedSpacing {
  double delta_step = 0.0;
  double freq_step = 0.0;
};

/// Largest main-lobe sidelobe level max_{x in [1/N, 1/2]} |D_N(x)|.
double dirichlet_sidelobe_floor(int n);

/// Steps at which the iso-frequency (resp. iso-delta) neighbor coherence equals mu0.
/// Throws NumericalError when mu0 does not exceed the sidelobe floor of either kernel.
GuaranteedSpacing solve_guaranteed_spacing(int num_sensors, double spacing,
                                           double propagation_speed, int num_snapshots,
                                           double sample_rate, double mu0);

/// Constant-delta dictionary on [f_low, f_high] with steps no finer than the guaranteed ones.
GDictionary build_g_guaranteed(const ArrayGeometry& geometry, const SamplingGrid& grid,
                               double f_low, double f_high, double mu0);

/// DOA grid spacing (degrees) of a constant-delta dictionary at (f, theta).
double theta_resolution(double delta_step, double freq, double theta_deg);

nlohmann::json dictionary_to_json(const GDictionary& dict);
void write_atoms_csv(std::ostream& os, const GDictionary& dict);
void write_atoms_csv(const std::filesystem::path& path, const GDictionary& dict);

}  // namespace ddfr
