// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <iomanip>

#include <Eigen/Core>

#include "ddfr/experiments.hpp"
#include "ddfr/version.hpp"

namespace ddfr {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
  os << std::setprecision(10);
  return os;
}

}  // namespace

void write_multitone_outputs(const std::filesystem::path& dir, const MultitoneReport& report) {
  std::filesystem::create_directories(dir);
  for (const auto& m : report.methods) {
    if (m.first_image.pixels.empty()) continue;
    const auto sub = dir / m.label;
    std::filesystem::create_directories(sub);
    write_pixels_csv(sub / "pixels.csv", m.first_image);
    write_pgm(sub / "image.pgm", rasterize_auto(m.first_image));
  }

  // source rows, method columns, mean row last
  auto os = open_out(dir / "gains.csv");
  os << "source";
  for (const auto& m : report.methods) os << ',' << m.label;
  os << '\n';
  const std::size_t ns = report.methods.empty() ? 0 : report.methods.front().mean_gain_db.size();
  for (std::size_t k = 0; k < ns; ++k) {
    os << 's' << k + 1;
    for (const auto& m : report.methods) os << ',' << m.mean_gain_db[k];
    os << '\n';
  }
  os << "mean";
  for (const auto& m : report.methods) os << ',' << report.mean_gain(m.label);
  os << '\n';

  auto raw = open_out(dir / "gains_trials.csv");
  raw << "method,trial,source,gain_db\n";
  for (const auto& g : report.gains) raw << g.method << ',' << g.trial << ',' << g.source + 1 << ',' << g.gain_db << '\n';

  auto img = open_out(dir / "image_checks.csv");
  img << "method,trial,top_pixels_near_truth,converged\n";
  for (const auto& m : report.methods) {
    for (std::size_t t = 0; t < m.image_ok.size(); ++t) {
      img << m.label << ',' << t << ',' << int(m.image_ok[t]) << ',' << int(m.converged[t]) << '\n';
    }
  }
}

void write_separation_csv(const std::filesystem::path& path, const SeparationReport& report) {
  auto os = open_out(path);
  os << "snr_db,method,probability,successes,trials\n";
  for (std::size_t s = 0; s < report.snr_db.size(); ++s) {
    for (std::size_t m = 0; m < report.methods.size(); ++m) {
      os << report.snr_db[s] << ',' << report.methods[m] << ','
         << static_cast<double>(report.successes[m][s]) / report.trials << ',' << report.successes[m][s] << ','
         << report.trials << '\n';
    }
  }
}

void write_arraygain_csv(const std::filesystem::path& path, const ArrayGainReport& report) {
  auto os = open_out(path);
  os << "snr_db,delta_theta,method,mean_gain_db,trials\n";
  for (std::size_t s = 0; s < report.snr_db.size(); ++s) {
    for (std::size_t d = 0; d < report.delta_theta.size(); ++d) {
      for (std::size_t m = 0; m < report.methods.size(); ++m) {
        os << report.snr_db[s] << ',' << report.delta_theta[d] << ',' << report.methods[m] << ','
           << report.mean_gain_db[m][s][d] << ',' << report.trials << '\n';
      }
    }
  }
}

void write_runtime_csv(const std::filesystem::path& path, const RuntimeReport& report) {
  auto os = open_out(path);
  os << "snapshots,method,mean_ms,std_ms,normalized\n";
  for (const auto& r : report.rows) {
    os << r.snapshots << ',' << r.method << ',' << r.mean_ms << ',' << r.std_ms << ',' << r.normalized << '\n';
  }
}

nlohmann::json make_manifest(const ExperimentConfig& config, const std::string& command) {
  return {{"command", command},
          {"config", config_to_json(config)},
          {"seeds", {{"base", config.rng_seed}, {"per_trial", "base + trial index"}}},
          {"versions",
           {{"ddfr", kVersion},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
            {"compiler", __VERSION__}}}};
}

void write_manifest(const std::filesystem::path& dir, const nlohmann::json& manifest) {
  std::filesystem::create_directories(dir);
  auto os = open_out(dir / "manifest.json");
  os << manifest.dump(2) << '\n';
}

void run_experiment(const ExperimentConfig& config) {
  const std::filesystem::path dir = config.output_dir;
  std::filesystem::create_directories(dir);
  write_manifest(dir, make_manifest(config, "experiment " + scenario_name(config.scenario)));
  switch (config.scenario) {
    case Scenario::MultitoneImage: write_multitone_outputs(dir, run_multitone_image(config)); break;
    case Scenario::SeparationVsSnr: write_separation_csv(dir / "separation.csv", run_separation_vs_snr(config)); break;
    case Scenario::ArrayGainVsDeltaTheta: write_arraygain_csv(dir / "arraygain.csv", run_arraygain_vs_dtheta(config)); break;
    case Scenario::RuntimeBench: write_runtime_csv(dir / "runtime.csv", run_runtime_bench(config)); break;
  }
}

}  // namespace ddfr
