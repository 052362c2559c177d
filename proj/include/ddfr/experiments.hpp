// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddfr/baselines.hpp"
#include "ddfr/dictionary.hpp"
#include "ddfr/scene_io.hpp"
#include "ddfr/solvers.hpp"
#include "ddfr/spectrum.hpp"

namespace ddfr {

enum class Scenario { MultitoneImage, SeparationVsSnr, ArrayGainVsDeltaTheta, RuntimeBench };

std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

/// Dictionary document:
///   {"method": "direct", "freq_grid": {"start","stop","step"} | [...], "theta_grid": ...}
///   {"method": "constant_delta", "f_low", "f_high", "num_freqs", "num_deltas"}
///   {"method": "guaranteed", "f_low", "f_high", "mu0"}
struct DictionarySpec {
  std::string method = "direct";
  std::vector<double> freq_grid;
  std::vector<double> theta_grid;
  double f_low = 0.0;
  double f_high = 0.0;
  int num_freqs = 0;
  int num_deltas = 0;
  double mu0 = 0.0;
};

DictionarySpec dictionary_spec_from_json(const nlohmann::json& doc);
nlohmann::json dictionary_spec_to_json(const DictionarySpec& spec);
GDictionary build_dictionary(const DictionarySpec& spec, const ArrayGeometry& geometry,
                             const SamplingGrid& grid);

/// Grid document {"start": a, "stop": b, "step": h} or an explicit array.
std::vector<double> value_grid_from_json(const nlohmann::json& doc);

/// One estimator run inside an experiment. `solver` is one of
///   l1, omp, tsvd, correlator, group_lasso, group_gp   (need `dictionary`)
///   cbf, icapon, imusic, delay_sum                     (work on snapshots)
/// `label` names the output column; it defaults to solver-dictionary.
struct MethodSpec {
  std::string label;
  std::string solver;
  std::string dictionary;
  nlohmann::json options = nlohmann::json::object();

  bool uses_dictionary() const;
};

MethodSpec method_spec_from_json(const nlohmann::json& doc);
nlohmann::json method_spec_to_json(const MethodSpec& spec);

struct ExperimentConfig {
  Scenario scenario = Scenario::MultitoneImage;
  // placeholder until default_config or the caller installs a real scene
  SceneDescription scene{ArrayGeometry::ula(2, 1.0, 1.0), SamplingGrid{}, {}, 1.0};
  std::map<std::string, DictionarySpec> dictionaries;
  std::vector<MethodSpec> methods;
  int trials = 10;
  std::uint64_t rng_seed = 1;
  std::string output_dir = "out";
  int threads = 1;

  Band band;                         // signal band for delay&sum and subband methods
  double doa_step = 1.0;             // spatial-spectrum grid (degrees)
  int section_length = 32;           // subband estimators
  double doa_tolerance = 2.5;        // separation success (degrees)
  std::vector<double> snr_db;        // separation / array gain sweeps
  std::vector<double> delta_theta;   // array gain sweep (degrees)
  std::vector<int> snapshot_counts;  // runtime bench
  int repeats = 5;                   // runtime bench
  int image_peaks = 20;              // multitone image check
  bool random_tone_phases = false;   // multitone: redraw tone phases per trial

  /// Throws ConfigError on any inconsistency.
  void validate() const;
};

/// Fully populated defaults for each scenario.
ExperimentConfig default_config(Scenario scenario);

/// Defaults of the named scenario overridden by every field present in `doc`.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Multitone scene of four five-tone sources on an 8-sensor half-wavelength
/// ULA (at 50 Hz), M = 100, f_s = 120 Hz. Tones have unit amplitude and zero phase.
SceneDescription multitone_scene(double snr_db = 10.0);

/// Two band-limited Gaussian sources on an 8-sensor ULA, half-wavelength at 450 Hz,
/// f_s = 2 kHz, band 150-450 Hz.
SceneDescription wideband_scene(const std::vector<double>& doas_deg, double snr_db, int num_snapshots = 200);

/// Runs `body(i)` for i in [0, n) on up to `threads` workers. Results must be
/// written into slot i so the outcome does not depend on scheduling.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

// ---- Multitone image ----

struct SourceGain {
  std::string method;
  int trial = 0;
  int source = 0;
  double gain_db = 0.0;
};

struct MultitoneMethodOutcome {
  std::string label;
  std::vector<bool> image_ok;   // per trial: top pixels near true tones
  std::vector<bool> converged;  // per trial
  std::vector<double> mean_gain_db;  // per source, over trials
  DoaFreqImage first_image;          // trial 0, dictionary methods only
};

struct MultitoneReport {
  std::vector<MultitoneMethodOutcome> methods;  // configured order; delay&sum included
  std::vector<SourceGain> gains;
  double mean_gain(const std::string& label) const;
  const MultitoneMethodOutcome& method(const std::string& label) const;
};

MultitoneReport run_multitone_image(const ExperimentConfig& config);

// ---- Separation probability ----

struct SeparationReport {
  std::vector<double> snr_db;
  std::vector<std::string> methods;
  std::vector<std::vector<int>> successes;  // [method][snr]
  int trials = 0;
  double probability(const std::string& method, double snr) const;
};

SeparationReport run_separation_vs_snr(const ExperimentConfig& config);

/// Top-2 peaks within `tolerance` of two distinct true DOAs.
bool separation_success(const std::vector<double>& peaks, const std::vector<double>& truth, double tolerance);

// ---- Array gain versus source spacing ----

struct ArrayGainReport {
  std::vector<double> snr_db;
  std::vector<double> delta_theta;
  std::vector<std::string> methods;
  std::vector<std::vector<std::vector<double>>> mean_gain_db;  // [method][snr][dtheta]
  int trials = 0;
};

ArrayGainReport run_arraygain_vs_dtheta(const ExperimentConfig& config);

// ---- Runtime ----

struct RuntimeRow {
  int snapshots = 0;
  std::string method;
  double mean_ms = 0.0;
  double std_ms = 0.0;
  double normalized = 0.0;  // mean over the fastest method's mean at this M
};

struct RuntimeReport {
  std::vector<RuntimeRow> rows;
  const RuntimeRow& row(int snapshots, const std::string& method) const;
};

RuntimeReport run_runtime_bench(const ExperimentConfig& config);

// ---- Outputs ----

void write_multitone_outputs(const std::filesystem::path& dir, const MultitoneReport& report);
void write_separation_csv(const std::filesystem::path& path, const SeparationReport& report);
void write_arraygain_csv(const std::filesystem::path& path, const ArrayGainReport& report);
void write_runtime_csv(const std::filesystem::path& path, const RuntimeReport& report);

/// Config with all defaults, seeds and library versions.
nlohmann::json make_manifest(const ExperimentConfig& config, const std::string& command);
void write_manifest(const std::filesystem::path& dir, const nlohmann::json& manifest);

/// Runs the configured scenario and writes every output into config.output_dir.
void run_experiment(const ExperimentConfig& config);

}  // namespace ddfr
