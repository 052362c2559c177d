// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numeric>

#include "methods.hpp"

namespace ddfr {

namespace {

using Target = std::pair<double, double>;  // (f, theta)

/// The `count` largest-magnitude pixels each sit within one grid cell of a target.
bool top_pixels_near(const detail::PreparedDictionary& p, const DoaFreqImage& image,
                     const std::vector<Target>& targets, int count) {
  std::vector<std::size_t> order(image.pixels.size());
  std::iota(order.begin(), order.end(), 0);
  const auto k = std::min(order.size(), static_cast<std::size_t>(count));
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return std::abs(image.pixels[a].value) > std::abs(image.pixels[b].value);
                    });
  for (std::size_t i = 0; i < k; ++i) {
    const Pixel& px = image.pixels[order[i]];
    const bool near = std::any_of(targets.begin(), targets.end(), [&](const Target& t) {
      const auto [df, dth] = p.cell(t.first, t.second);
      return std::abs(px.freq - t.first) <= df + 1e-9 && std::abs(px.doa - t.second) <= dth + 1e-9;
    });
    if (!near) return false;
  }
  return true;
}

struct TrialOutcome {
  std::vector<std::vector<double>> gains;  // [method][source]
  std::vector<char> image_ok;
  std::vector<char> converged;
  std::vector<DoaFreqImage> images;        // trial 0 only
};

}  // namespace

double MultitoneReport::mean_gain(const std::string& label) const {
  const auto& g = method(label).mean_gain_db;
  return std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
}

const MultitoneMethodOutcome& MultitoneReport::method(const std::string& label) const {
  for (const auto& m : methods) {
    if (m.label == label) return m;
  }
  throw ParameterError("multitone report: no method '" + label + "'");
}

MultitoneReport run_multitone_image(const ExperimentConfig& config) {
  config.validate();
  const SceneDescription& scene = config.scene;
  const auto dicts = detail::prepare_dictionaries(config, scene.geometry, scene.grid);
  const double sigma = std::sqrt(scene.noise_variance);
  const std::size_t nm = config.methods.size();
  const std::size_t ns = scene.sources.size();
  const RealVector times = scene.grid.times();

  std::vector<TrialOutcome> trials(static_cast<std::size_t>(config.trials));
  parallel_for(config.trials, config.threads, [&](int t) {
    const std::uint64_t seed = config.rng_seed + static_cast<std::uint64_t>(t);
    const auto sources = config.random_tone_phases ? detail::rephase_tones(scene.sources, seed) : scene.sources;
    const SimulatedScene sim = simulate_scene(scene.geometry, scene.grid, sources, seed, scene.noise_variance);
    const ComplexVector y = concatenate(sim.snapshots);
    const ComplexVector reference = sim.snapshots.data.col(0);

    std::vector<Target> all_targets;
    std::vector<std::vector<Target>> per_source(ns);
    std::vector<ComplexVector> truth(ns);
    for (std::size_t k = 0; k < ns; ++k) {
      truth[k] = source_waveform(sim.sources[k], times);
      for (const auto& tone : sim.sources[k].tones) per_source[k].emplace_back(tone.freq, sim.sources[k].doa_deg);
      all_targets.insert(all_targets.end(), per_source[k].begin(), per_source[k].end());
    }

    TrialOutcome& out = trials[static_cast<std::size_t>(t)];
    out.gains.assign(nm, std::vector<double>(ns, 0.0));
    out.image_ok.assign(nm, 0);
    out.converged.assign(nm, 1);
    if (t == 0) out.images.resize(nm);
    for (std::size_t mi = 0; mi < nm; ++mi) {
      const MethodSpec& m = config.methods[mi];
      if (m.solver == "delay_sum") {
        const bool source_band = m.options.value("band", std::string("scene")) == "source";
        for (std::size_t k = 0; k < ns; ++k) {
          Band band = config.band;
          if (source_band) {
            const auto& tones = sim.sources[k].tones;
            const auto [lo, hi] = std::minmax_element(tones.begin(), tones.end(),
                                                      [](const Tone& a, const Tone& b) { return a.freq < b.freq; });
            band = {lo->freq, hi->freq};
          }
          const ComplexVector est = delay_sum_extract(sim.snapshots, sim.sources[k].doa_deg, band);
          out.gains[mi][k] = array_gain(reference, est, truth[k]);
        }
        continue;
      }
      if (!m.uses_dictionary()) throw ConfigError("multitone: method '" + m.label + "' cannot extract sources");
      const auto& p = *dicts.at(m.dictionary);
      const SolverResult r = detail::run_dictionary_method(m, p, y, sigma);
      out.converged[mi] = r.converged;
      const DoaFreqImage image = image_from_result(p.dict, r);
      out.image_ok[mi] = top_pixels_near(p, image, all_targets, config.image_peaks);
      for (std::size_t k = 0; k < ns; ++k) {
        const Extraction e = extract_source(p.dict, r, detail::cell_regions(p, per_source[k]));
        out.gains[mi][k] = array_gain(reference, e.signal, truth[k]);
      }
      if (t == 0) out.images[mi] = image;
    }
  });

  MultitoneReport report;
  for (std::size_t mi = 0; mi < nm; ++mi) {
    const MethodSpec& m = config.methods[mi];
    MultitoneMethodOutcome o;
    o.label = m.label;
    o.mean_gain_db.assign(ns, 0.0);
    for (std::size_t ti = 0; ti < trials.size(); ++ti) {
      const auto& tr = trials[ti];
      o.image_ok.push_back(tr.image_ok[mi] != 0);
      o.converged.push_back(tr.converged[mi] != 0);
      for (std::size_t k = 0; k < ns; ++k) {
        o.mean_gain_db[k] += tr.gains[mi][k] / static_cast<double>(trials.size());
        report.gains.push_back({m.label, static_cast<int>(ti), static_cast<int>(k), tr.gains[mi][k]});
      }
    }
    if (m.uses_dictionary()) o.first_image = trials.front().images[mi];
    report.methods.push_back(std::move(o));
  }
  return report;
}

}  // namespace ddfr
