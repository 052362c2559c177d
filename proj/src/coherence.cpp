// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <sstream>

#include "ddfr/dictionary.hpp"

namespace ddfr {

double dirichlet_magnitude(int n, double x) {
  if (n < 1) throw ParameterError("dirichlet_magnitude: n must be positive");
  // Reduce to y = x - k with k the nearest integer; |D_N| is 1-periodic.
  const double y = x - std::nearbyint(x);
  if (std::abs(y) < 1e-10) return 1.0;
  return std::abs(std::sin(n * kPi * y) / (n * std::sin(kPi * y)));
}

double coherence_closed_form_ula(int num_sensors, double spacing, double propagation_speed,
                                 int num_snapshots, double sample_rate, double delta_diff,
                                 double freq_diff) {
  if (num_sensors < 1 || num_snapshots < 1) throw ParameterError("coherence: sizes must be positive");
  if (!(propagation_speed > 0.0) || !(sample_rate > 0.0)) {
    throw ParameterError("coherence: speed and sample rate must be positive");
  }
  return dirichlet_magnitude(num_sensors, delta_diff * spacing / propagation_speed) *
         dirichlet_magnitude(num_snapshots, freq_diff / sample_rate);
}

CoherenceReport coherence_brute_force(const ComplexMatrix& atoms,
                                      const std::vector<double>& freq_labels) {
  const Index q = atoms.cols();
  if (q < 2) throw ParameterError("coherence_brute_force: need at least two columns");
  if (static_cast<Index>(freq_labels.size()) != q) {
    throw ParameterError("coherence_brute_force: label count differs from column count");
  }
  ComplexMatrix g = atoms;
  for (Index k = 0; k < q; ++k) {
    const double n = g.col(k).norm();
    if (n > 0.0) g.col(k) /= n;
  }

  CoherenceReport report;
  report.frequencies = freq_labels;
  std::sort(report.frequencies.begin(), report.frequencies.end());
  report.frequencies.erase(std::unique(report.frequencies.begin(), report.frequencies.end()),
                           report.frequencies.end());
  report.per_frequency_max.assign(report.frequencies.size(), 0.0);
  std::vector<std::size_t> fidx(freq_labels.size());
  for (std::size_t k = 0; k < freq_labels.size(); ++k) {
    fidx[k] = static_cast<std::size_t>(
        std::lower_bound(report.frequencies.begin(), report.frequencies.end(), freq_labels[k]) -
        report.frequencies.begin());
  }

  report.max_coherence = -1.0;
  constexpr Index kBlock = 256;
  for (Index b0 = 0; b0 < q; b0 += kBlock) {
    const Index nb = std::min(kBlock, q - b0);
    const ComplexMatrix gram = g.middleCols(b0, nb).adjoint() * g;  // nb x q
    for (Index r = 0; r < nb; ++r) {
      const Index a = b0 + r;
      for (Index b = a + 1; b < q; ++b) {
        const double mu = std::abs(gram(r, b));
        if (mu > report.max_coherence) {
          report.max_coherence = mu;
          report.offending_pair = {a, b};
        }
        const auto fa = fidx[static_cast<std::size_t>(a)];
        if (fa == fidx[static_cast<std::size_t>(b)]) {
          report.per_frequency_max[fa] = std::max(report.per_frequency_max[fa], mu);
        }
      }
    }
  }
  // rounding can push |<g,g>| of duplicated atoms marginally above 1
  report.max_coherence = std::min(report.max_coherence, 1.0);
  for (auto& v : report.per_frequency_max) v = std::min(v, 1.0);
  return report;
}

CoherenceReport coherence_brute_force(const GDictionary& dict) {
  if (dict.cols() < 2) throw ParameterError("coherence_brute_force: need at least two columns");
  return coherence_brute_force(dict.atoms(), dict.freq_labels());
}

double dirichlet_sidelobe_floor(int n) {
  if (n < 2) return 0.0;
  // Coarse scan over [1/N, 1/2], then golden-section refinement around the best sample.
  const double lo = 1.0 / n;
  const double hi = 0.5;
  constexpr int kSamples = 4000;
  double best_x = lo;
  double best = dirichlet_magnitude(n, lo);
  const double h = (hi - lo) / kSamples;
  for (int i = 1; i <= kSamples; ++i) {
    const double x = lo + i * h;
    const double v = dirichlet_magnitude(n, x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  double a = std::max(lo, best_x - h);
  double b = std::min(hi, best_x + h);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100; ++it) {
    const double x1 = b - phi * (b - a);
    const double x2 = a + phi * (b - a);
    if (dirichlet_magnitude(n, x1) > dirichlet_magnitude(n, x2)) {
      b = x2;
    } else {
      a = x1;
    }
  }
  return std::max(best, dirichlet_magnitude(n, 0.5 * (a + b)));
}

namespace {

// Root of |D_N(x)| = mu0 on the main lobe (0, 1/N), where |D_N| decreases from 1 to 0.
double main_lobe_root(int n, double mu0) {
  double lo = 0.0;
  double hi = 1.0 / n;
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (dirichlet_magnitude(n, mid) > mu0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

GuaranteedSpacing solve_guaranteed_spacing(int num_sensors, double spacing,
                                           double propagation_speed, int num_snapshots,
                                           double sample_rate, double mu0) {
  if (!(mu0 > 0.0 && mu0 < 1.0)) throw ParameterError("solve_guaranteed_spacing: need 0 < mu0 < 1");
  if (num_sensors < 2 || num_snapshots < 2) {
    throw ParameterError("solve_guaranteed_spacing: need at least 2 sensors and 2 snapshots");
  }
  if (!(spacing > 0.0) || !(propagation_speed > 0.0) || !(sample_rate > 0.0)) {
    throw ParameterError("solve_guaranteed_spacing: spacing, speed and rate must be positive");
  }
  const double floor_s = dirichlet_sidelobe_floor(num_sensors);
  const double floor_t = dirichlet_sidelobe_floor(num_snapshots);
  const double attainable = std::max(floor_s, floor_t);
  if (mu0 <= attainable) {
    std::ostringstream msg;
    msg << "solve_guaranteed_spacing: mu0 = " << mu0
        << " is not above the Dirichlet sidelobe floor; attainable minimum is " << attainable;
    throw NumericalError(msg.str());
  }
  GuaranteedSpacing out;
  out.delta_step = main_lobe_root(num_sensors, mu0) * propagation_speed / spacing;
  out.freq_step = main_lobe_root(num_snapshots, mu0) * sample_rate;
  return out;
}

GDictionary build_g_guaranteed(const ArrayGeometry& geometry, const SamplingGrid& grid,
                               double f_low, double f_high, double mu0) {
  const double d = geometry.uniform_spacing();
  if (d <= 0.0) throw ParameterError("build_g_guaranteed: requires a uniform linear array");
  const auto steps = solve_guaranteed_spacing(geometry.num_sensors(), d, geometry.propagation_speed(),
                                              grid.num_snapshots, grid.sample_rate, mu0);
  // Rounding the counts down keeps the realized steps at or above the guaranteed ones.
  const int nf = static_cast<int>(std::floor((f_high - f_low) / steps.freq_step)) + 1;
  const int nd = static_cast<int>(std::floor(2.0 * f_high / steps.delta_step)) + 1;
  return build_g_constant_delta(geometry, grid, f_low, f_high, std::max(nf, 1), std::max(nd, 1));
}

}  // namespace ddfr
