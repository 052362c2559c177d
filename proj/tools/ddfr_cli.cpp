// SPDX-License-Identifier: Apache-2.0
//
// ddfr: simulate array data, build DOA-frequency dictionaries, solve, extract
// sources and run the benchmark experiments.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ddfr/experiments.hpp"
#include "ddfr/operator.hpp"
#include "ddfr/reconstruct.hpp"
#include "ddfr/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOptions {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "JSON configuration file");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--seed", o.seed, "base RNG seed");
  cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
}

json load_or_empty(const std::string& path) {
  return path.empty() ? json::object() : ddfr::read_json_file(path);
}

ddfr::SceneDescription scene_of(const json& doc) {
  return doc.contains("scene") ? ddfr::scene_from_json(doc.at("scene")) : ddfr::multitone_scene();
}

json manifest(const std::string& command, const json& config, std::uint64_t seed) {
  return {{"command", command},
          {"config", config},
          {"seeds", {{"base", seed}}},
          {"versions", {{"ddfr", ddfr::kVersion}}}};
}

ddfr::GDictionary dictionary_of(const json& doc, const ddfr::SceneDescription& scene) {
  if (!doc.contains("dictionary")) throw ddfr::ConfigError("config needs a \"dictionary\" section");
  return ddfr::build_dictionary(ddfr::dictionary_spec_from_json(doc.at("dictionary")), scene.geometry, scene.grid);
}

int cmd_simulate(const CommonOptions& o) {
  json doc = load_or_empty(o.config);
  // a bare scene document is accepted as well as {"scene": ...}
  if (!doc.contains("scene") && doc.contains("sources")) doc = json{{"scene", doc}};
  const auto scene = scene_of(doc);
  const std::uint64_t seed = o.seed.value_or(doc.value("seed", std::uint64_t{1}));
  const auto sim = ddfr::simulate_scene(scene.geometry, scene.grid, scene.sources, seed, scene.noise_variance);
  fs::create_directories(o.out);
  ddfr::write_snapshots_csv(fs::path(o.out) / "snapshots.csv", sim.snapshots);
  json realized = json::array();
  for (const auto& s : sim.sources) {
    json tones = json::array();
    for (const auto& t : s.tones) tones.push_back({{"freq", t.freq}, {"re", t.amplitude.real()}, {"im", t.amplitude.imag()}});
    realized.push_back({{"doa", s.doa_deg}, {"tones", tones}});
  }
  ddfr::write_json_file(fs::path(o.out) / "sources.json", realized);
  const json materialized{{"scene", ddfr::scene_to_json(scene)}, {"seed", seed}};
  ddfr::write_json_file(fs::path(o.out) / "manifest.json", manifest("simulate", materialized, seed));
  std::cout << "wrote " << sim.snapshots.data.rows() << "x" << sim.snapshots.data.cols() << " snapshots to "
            << o.out << "\n";
  return 0;
}

int cmd_build_dict(const CommonOptions& o, bool atoms, bool coherence) {
  const json doc = load_or_empty(o.config);
  const auto scene = scene_of(doc);
  const auto dict = dictionary_of(doc, scene);
  fs::create_directories(o.out);
  json meta = ddfr::dictionary_to_json(dict);
  if (coherence) {
    const auto rep = ddfr::coherence_brute_force(dict);
    meta["coherence"] = {{"max", rep.max_coherence},
                         {"offending_pair", {rep.offending_pair.first, rep.offending_pair.second}},
                         {"frequencies", rep.frequencies},
                         {"per_frequency_max", rep.per_frequency_max}};
  }
  ddfr::write_json_file(fs::path(o.out) / "dictionary.json", meta);
  if (atoms) ddfr::write_atoms_csv(fs::path(o.out) / "atoms.csv", dict);
  ddfr::write_json_file(fs::path(o.out) / "manifest.json", manifest("build-dict", doc, 0));
  std::cout << "dictionary " << dict.rows() << "x" << dict.cols() << " written to " << o.out << "\n";
  return 0;
}

int cmd_solve(const CommonOptions& o) {
  const json doc = load_or_empty(o.config);
  const auto scene = scene_of(doc);
  const std::uint64_t seed = o.seed.value_or(doc.value("seed", std::uint64_t{1}));
  ddfr::SnapshotMatrix snaps{ddfr::ComplexMatrix(), scene.grid, scene.geometry};
  if (doc.contains("snapshots")) {
    snaps.data = ddfr::read_snapshots_csv(fs::path(doc.at("snapshots").get<std::string>()));
  } else {
    snaps = ddfr::simulate_snapshots(scene.geometry, scene.grid, scene.sources, seed, scene.noise_variance);
  }
  const ddfr::GDictionary dict = dictionary_of(doc, scene);
  const ddfr::FactoredOperator op(dict);
  if (snaps.data.size() != op.rows()) throw ddfr::ConfigError("snapshot shape does not match the scene");
  const ddfr::ComplexVector y = ddfr::concatenate(snaps.data);

  const ddfr::MethodSpec method =
      ddfr::method_spec_from_json(doc.value("method", json{{"solver", "l1"}}));
  const double sigma = std::sqrt(doc.value("noise_variance", scene.noise_variance));
  const double eps = ddfr::default_epsilon(sigma, op.rows());
  auto opt = [&](const char* key, double fallback) {
    return method.options.contains(key) ? method.options.at(key).get<double>() : fallback;
  };
  ddfr::SolverResult r;
  const auto partition = ddfr::GroupPartition::by_doa(dict);
  if (method.solver == "l1") {
    r = ddfr::bpdn_l1(op, y, opt("epsilon_scale", 1.0) * eps);
  } else if (method.solver == "omp") {
    r = ddfr::omp(op, y, std::min<ddfr::Index>(static_cast<ddfr::Index>(opt("max_atoms", 100)), op.cols()),
                  opt("tol_scale", 1.0) * eps);
  } else if (method.solver == "tsvd") {
    r = ddfr::TsvdSolver(op).solve(y, ddfr::RelativeThreshold{opt("threshold", 1e-3)});
  } else if (method.solver == "correlator") {
    r = ddfr::correlator_solve(op, y);
  } else if (method.solver == "group_lasso") {
    if (!method.options.contains("lambda")) throw ddfr::ConfigError("group_lasso needs options.lambda");
    r = ddfr::group_lasso(op, y, partition, method.options.at("lambda").get<double>());
  } else if (method.solver == "group_gp") {
    r = ddfr::group_gp(op, y, partition, static_cast<ddfr::Index>(opt("max_groups", 2)), opt("tol_scale", 1.0) * eps);
  } else {
    throw ddfr::ConfigError("solve: unknown solver '" + method.solver + "'");
  }

  fs::create_directories(o.out);
  ddfr::write_json_file(fs::path(o.out) / "result.json", ddfr::result_to_json(r));
  const auto image = ddfr::image_from_result(dict, r);
  ddfr::write_pixels_csv(fs::path(o.out) / "pixels.csv", image);
  ddfr::write_pgm(fs::path(o.out) / "image.pgm", ddfr::rasterize_auto(image));
  ddfr::write_json_file(fs::path(o.out) / "manifest.json", manifest("solve", doc, seed));
  std::cout << method.solver << ": " << r.support.size() << " nonzero coefficients, residual " << r.residual_norm
            << (r.converged ? "" : " (not converged)") << "\n";
  return 0;
}

int cmd_extract(const CommonOptions& o) {
  const json doc = load_or_empty(o.config);
  const auto scene = scene_of(doc);
  const auto dict = dictionary_of(doc, scene);
  if (!doc.contains("result")) throw ddfr::ConfigError("extract needs \"result\": path to result.json");
  const auto result = ddfr::result_from_json(ddfr::read_json_file(doc.at("result").get<std::string>()));
  const json& reg = doc.at("region");
  auto region = ddfr::region_on_grid(dict, {reg.at("theta").at(0).get<double>(), reg.at("theta").at(1).get<double>()},
                                     {reg.at("freq").at(0).get<double>(), reg.at("freq").at(1).get<double>()},
                                     reg.value("threshold", 0.0));
  region.resample_rate = reg.value("resample_rate", region.resample_rate);
  region.t_start = reg.value("t_start", region.t_start);
  region.t_end = reg.value("t_end", region.t_end);
  const auto e = ddfr::extract_source(dict, result, region, doc.value("real_data", false));
  fs::create_directories(o.out);
  ddfr::write_extraction_csv(fs::path(o.out) / "extracted.csv", e);
  ddfr::write_json_file(fs::path(o.out) / "extracted.json", ddfr::extraction_to_json(e));
  if (e.empty_selection) std::cerr << "warning: no coefficient inside the region; output is zero\n";
  if (e.outside_span) std::cerr << "warning: output time grid leaves the observation span\n";
  std::cout << e.selected.size() << " coefficients extracted to " << o.out << "\n";
  return 0;
}

int cmd_experiment(const std::string& name, const CommonOptions& o, bool out_given) {
  json doc = load_or_empty(o.config);
  doc["scenario"] = name;
  ddfr::ExperimentConfig cfg = ddfr::config_from_json(doc);
  if (o.seed) cfg.rng_seed = *o.seed;
  if (out_given || !doc.contains("output_dir")) cfg.output_dir = o.out;
  cfg.threads = o.threads;
  cfg.validate();
  ddfr::run_experiment(cfg);
  std::cout << "experiment " << name << " written to " << cfg.output_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DOA-frequency representation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ddfr::kVersion);

  CommonOptions sim_o, dict_o, solve_o, extract_o, exp_o;
  bool atoms = false;
  bool coherence = false;
  std::string exp_name;

  auto* sim = app.add_subcommand("simulate", "simulate array snapshots from a scene");
  add_common(sim, sim_o);
  auto* bd = app.add_subcommand("build-dict", "build a DOA-frequency dictionary");
  add_common(bd, dict_o);
  bd->add_flag("--atoms", atoms, "also write the atom matrix as CSV");
  bd->add_flag("--coherence", coherence, "compute the brute-force mutual coherence");
  auto* sv = app.add_subcommand("solve", "solve y = G z for one snapshot record");
  add_common(sv, solve_o);
  auto* ex = app.add_subcommand("extract", "extract a source from a solved region");
  add_common(ex, extract_o);
  auto* exp = app.add_subcommand("experiment", "run multitone | separation | arraygain | runtime");
  exp->add_option("name", exp_name, "experiment name")->required();
  add_common(exp, exp_o);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*sim) return cmd_simulate(sim_o);
    if (*bd) return cmd_build_dict(dict_o, atoms, coherence);
    if (*sv) return cmd_solve(solve_o);
    if (*ex) return cmd_extract(extract_o);
    if (*exp) return cmd_experiment(exp_name, exp_o, exp->count("--out") > 0);
  } catch (const ddfr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
