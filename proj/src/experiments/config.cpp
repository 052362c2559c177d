// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <set>

#include "ddfr/experiments.hpp"

namespace ddfr {

namespace {

using nlohmann::json;

const std::set<std::string> kDictionarySolvers = {"l1", "omp", "tsvd", "correlator", "group_lasso", "group_gp"};
const std::set<std::string> kSnapshotSolvers = {"cbf", "icapon", "imusic", "delay_sum"};

MethodSpec method(const std::string& solver, const std::string& dictionary, json options = json::object()) {
  MethodSpec m;
  m.solver = solver;
  m.dictionary = dictionary;
  m.options = std::move(options);
  m.label = dictionary.empty() ? solver : solver + "-" + dictionary;
  return m;
}

DictionarySpec direct_spec(std::vector<double> freqs, std::vector<double> thetas) {
  DictionarySpec d;
  d.method = "direct";
  d.freq_grid = std::move(freqs);
  d.theta_grid = std::move(thetas);
  return d;
}

std::vector<double> stepped(double start, double stop, double step) {
  return value_grid_from_json(json{{"start", start}, {"stop", stop}, {"step", step}});
}

template <class T>
void read_if(const json& doc, const char* key, T& field) {
  if (doc.contains(key)) field = doc.at(key).get<T>();
}

}  // namespace

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::MultitoneImage: return "multitone";
    case Scenario::SeparationVsSnr: return "separation";
    case Scenario::ArrayGainVsDeltaTheta: return "arraygain";
    case Scenario::RuntimeBench: return "runtime";
  }
  return "multitone";
}

Scenario scenario_from_name(const std::string& name) {
  if (name == "multitone" || name == "multitone_image") return Scenario::MultitoneImage;
  if (name == "separation" || name == "separation_vs_snr") return Scenario::SeparationVsSnr;
  if (name == "arraygain" || name == "arraygain_vs_dtheta") return Scenario::ArrayGainVsDeltaTheta;
  if (name == "runtime" || name == "runtime_bench") return Scenario::RuntimeBench;
  throw ConfigError("unknown experiment '" + name + "' (multitone, separation, arraygain, runtime)");
}

std::vector<double> value_grid_from_json(const json& doc) {
  if (doc.is_array()) return doc.get<std::vector<double>>();
  const double start = doc.at("start").get<double>();
  const double stop = doc.at("stop").get<double>();
  const double step = doc.at("step").get<double>();
  if (!(step > 0.0) || stop < start) throw ConfigError("grid: need step > 0 and stop >= start");
  const auto n = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) g[static_cast<std::size_t>(k)] = start + k * step;
  // absorb accumulated rounding into the requested endpoint
  if (std::abs(g.back() - stop) < 1e-9 * std::max(1.0, std::abs(stop))) g.back() = stop;
  return g;
}

DictionarySpec dictionary_spec_from_json(const json& doc) {
  try {
    DictionarySpec d;
    d.method = doc.value("method", std::string("direct"));
    if (d.method == "direct") {
      d.freq_grid = value_grid_from_json(doc.at("freq_grid"));
      d.theta_grid = value_grid_from_json(doc.at("theta_grid"));
    } else if (d.method == "constant_delta") {
      d.f_low = doc.at("f_low").get<double>();
      d.f_high = doc.at("f_high").get<double>();
      d.num_freqs = doc.at("num_freqs").get<int>();
      d.num_deltas = doc.at("num_deltas").get<int>();
    } else if (d.method == "guaranteed") {
      d.f_low = doc.at("f_low").get<double>();
      d.f_high = doc.at("f_high").get<double>();
      d.mu0 = doc.at("mu0").get<double>();
    } else {
      throw ConfigError("dictionary: unknown method '" + d.method + "'");
    }
    return d;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("dictionary: ") + e.what());
  }
}

json dictionary_spec_to_json(const DictionarySpec& d) {
  if (d.method == "direct") return {{"method", d.method}, {"freq_grid", d.freq_grid}, {"theta_grid", d.theta_grid}};
  if (d.method == "constant_delta") {
    return {{"method", d.method}, {"f_low", d.f_low}, {"f_high", d.f_high},
            {"num_freqs", d.num_freqs}, {"num_deltas", d.num_deltas}};
  }
  return {{"method", d.method}, {"f_low", d.f_low}, {"f_high", d.f_high}, {"mu0", d.mu0}};
}

GDictionary build_dictionary(const DictionarySpec& spec, const ArrayGeometry& geometry, const SamplingGrid& grid) {
  if (spec.method == "direct") return build_g_direct(geometry, grid, spec.freq_grid, spec.theta_grid);
  if (spec.method == "constant_delta") {
    return build_g_constant_delta(geometry, grid, spec.f_low, spec.f_high, spec.num_freqs, spec.num_deltas);
  }
  if (spec.method == "guaranteed") return build_g_guaranteed(geometry, grid, spec.f_low, spec.f_high, spec.mu0);
  throw ConfigError("dictionary: unknown method '" + spec.method + "'");
}

bool MethodSpec::uses_dictionary() const { return kDictionarySolvers.count(solver) > 0; }

MethodSpec method_spec_from_json(const json& doc) {
  try {
    MethodSpec m = method(doc.at("solver").get<std::string>(), doc.value("dictionary", std::string{}),
                          doc.value("options", json::object()));
    read_if(doc, "label", m.label);
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("method: ") + e.what());
  }
}

json method_spec_to_json(const MethodSpec& m) {
  json doc{{"label", m.label}, {"solver", m.solver}, {"options", m.options}};
  if (!m.dictionary.empty()) doc["dictionary"] = m.dictionary;
  return doc;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("config: trials must be at least 1");
  if (threads < 1) throw ConfigError("config: threads must be at least 1");
  if (methods.empty()) throw ConfigError("config: no methods");
  std::set<std::string> labels;
  for (const auto& m : methods) {
    if (!kDictionarySolvers.count(m.solver) && !kSnapshotSolvers.count(m.solver)) {
      throw ConfigError("config: unknown solver '" + m.solver + "'");
    }
    if (m.uses_dictionary() && !dictionaries.count(m.dictionary)) {
      throw ConfigError("config: method '" + m.label + "' references unknown dictionary '" + m.dictionary + "'");
    }
    if (!labels.insert(m.label).second) throw ConfigError("config: duplicate method label '" + m.label + "'");
  }
  if (!(band.f_low < band.f_high)) throw ConfigError("config: band needs f_low < f_high");
  if (!(doa_step > 0.0)) throw ConfigError("config: doa_step must be positive");
  if (section_length < 1 || section_length > scene.grid.num_snapshots) {
    throw ConfigError("config: section_length must lie in [1, M]");
  }
  if (scene.sources.empty()) throw ConfigError("config: scene has no sources");

  switch (scenario) {
    case Scenario::MultitoneImage:
      for (const auto& s : scene.sources) {
        if (!std::holds_alternative<Multitone>(s.kind)) throw ConfigError("config: multitone scenario needs multitone sources");
      }
      if (image_peaks < 1) throw ConfigError("config: image_peaks must be at least 1");
      break;
    case Scenario::SeparationVsSnr:
      if (scene.sources.size() != 2) throw ConfigError("config: separation needs a two-source scene");
      if (snr_db.empty()) throw ConfigError("config: empty SNR sweep");
      break;
    case Scenario::ArrayGainVsDeltaTheta:
      if (scene.sources.size() != 2) throw ConfigError("config: array-gain sweep needs a two-source scene");
      if (snr_db.empty() || delta_theta.empty()) throw ConfigError("config: empty SNR or delta-theta sweep");
      for (double d : delta_theta) {
        if (!(d > 0.0) || d > 90.0) throw ConfigError("config: delta-theta values must lie in (0, 90]");
      }
      break;
    case Scenario::RuntimeBench:
      if (snapshot_counts.empty()) throw ConfigError("config: empty snapshot list");
      if (repeats < 1) throw ConfigError("config: repeats must be at least 1");
      for (int m : snapshot_counts) {
        if (m < section_length) throw ConfigError("config: snapshot count below the section length");
      }
      break;
  }
}

ExperimentConfig default_config(Scenario scenario) {
  ExperimentConfig c;
  c.scenario = scenario;
  c.output_dir = "out/" + scenario_name(scenario);
  switch (scenario) {
    case Scenario::MultitoneImage: {
      c.scene = multitone_scene();
      c.trials = 10;
      c.band = {10.0, 50.0};
      // 5 degrees is about a third of the broadside Rayleigh width at 50 Hz
      c.dictionaries["Gd"] = direct_spec(stepped(10.0, 50.0, 1.0), stepped(-90.0, 90.0, 5.0));
      DictionarySpec gdelta;
      gdelta.method = "constant_delta";
      gdelta.f_low = 10.0;
      gdelta.f_high = 50.0;
      gdelta.num_freqs = 41;
      gdelta.num_deltas = 101;
      c.dictionaries["Gdelta"] = gdelta;
      c.methods = {method("delay_sum", ""),
                   method("l1", "Gdelta", {{"epsilon_scale", 1.0}}),
                   method("l1", "Gd", {{"epsilon_scale", 1.0}}),
                   method("tsvd", "Gd", {{"threshold", 1e-3}}),
                   method("correlator", "Gd"),
                   method("omp", "Gdelta", {{"max_atoms", 100}, {"tol_scale", 1.0}}),
                   method("omp", "Gd", {{"max_atoms", 100}, {"tol_scale", 1.0}})};
      break;
    }
    case Scenario::SeparationVsSnr:
    case Scenario::ArrayGainVsDeltaTheta:
    case Scenario::RuntimeBench: {
      const bool sep = scenario == Scenario::SeparationVsSnr;
      const bool gain = scenario == Scenario::ArrayGainVsDeltaTheta;
      c.scene = wideband_scene(gain ? std::vector<double>{0.0, 10.0} : std::vector<double>{-5.0, 5.0}, 10.0);
      c.band = {150.0, 450.0};
      c.dictionaries["Gd"] = direct_spec(stepped(150.0, 450.0, 10.0), stepped(-90.0, 90.0, 1.0));
      const json lasso{{"lambda_scale", 1.0}};
      const json gp{{"max_groups", 2}, {"tol_scale", 1.0}};
      if (sep) {
        c.trials = 100;
        c.snr_db = {-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
        c.methods = {method("group_lasso", "Gd", lasso), method("group_gp", "Gd", gp),
                     method("imusic", "", {{"order", 2}}), method("cbf", "")};
      } else if (gain) {
        c.trials = 100;
        c.snr_db = {-5.0, 0.0, 10.0, 20.0};
        c.delta_theta = {2.0, 4.0, 6.0, 8.0, 10.0, 15.0, 20.0, 30.0, 40.0, 50.0};
        c.methods = {method("delay_sum", ""), method("group_gp", "Gd", gp), method("group_lasso", "Gd", lasso)};
      } else {
        c.trials = 1;
        c.snapshot_counts = {100, 400};
        c.repeats = 5;
        c.methods = {method("group_lasso", "Gd", lasso), method("group_gp", "Gd", gp),
                     method("imusic", "", {{"order", 2}}), method("cbf", "")};
      }
      break;
    }
  }
  return c;
}

ExperimentConfig config_from_json(const json& doc) {
  try {
    ExperimentConfig c = default_config(scenario_from_name(doc.value("scenario", std::string("multitone"))));
    if (doc.contains("scene")) c.scene = scene_from_json(doc.at("scene"));
    if (doc.contains("dictionaries")) {
      c.dictionaries.clear();
      for (const auto& [name, spec] : doc.at("dictionaries").items()) {
        c.dictionaries[name] = dictionary_spec_from_json(spec);
      }
    }
    if (doc.contains("methods")) {
      c.methods.clear();
      for (const auto& m : doc.at("methods")) c.methods.push_back(method_spec_from_json(m));
    }
    read_if(doc, "trials", c.trials);
    read_if(doc, "rng_seed", c.rng_seed);
    read_if(doc, "output_dir", c.output_dir);
    read_if(doc, "threads", c.threads);
    if (doc.contains("band")) c.band = {doc.at("band").at("f_low").get<double>(), doc.at("band").at("f_high").get<double>()};
    read_if(doc, "doa_step", c.doa_step);
    read_if(doc, "section_length", c.section_length);
    read_if(doc, "doa_tolerance", c.doa_tolerance);
    read_if(doc, "snr_db", c.snr_db);
    read_if(doc, "delta_theta", c.delta_theta);
    read_if(doc, "snapshot_counts", c.snapshot_counts);
    read_if(doc, "repeats", c.repeats);
    read_if(doc, "image_peaks", c.image_peaks);
    read_if(doc, "random_tone_phases", c.random_tone_phases);
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
}

json config_to_json(const ExperimentConfig& c) {
  json dicts = json::object();
  for (const auto& [name, spec] : c.dictionaries) dicts[name] = dictionary_spec_to_json(spec);
  json methods = json::array();
  for (const auto& m : c.methods) methods.push_back(method_spec_to_json(m));
  return {{"scenario", scenario_name(c.scenario)},
          {"scene", scene_to_json(c.scene)},
          {"dictionaries", dicts},
          {"methods", methods},
          {"trials", c.trials},
          {"rng_seed", c.rng_seed},
          {"output_dir", c.output_dir},
          {"threads", c.threads},
          {"band", {{"f_low", c.band.f_low}, {"f_high", c.band.f_high}}},
          {"doa_step", c.doa_step},
          {"section_length", c.section_length},
          {"doa_tolerance", c.doa_tolerance},
          {"snr_db", c.snr_db},
          {"delta_theta", c.delta_theta},
          {"snapshot_counts", c.snapshot_counts},
          {"repeats", c.repeats},
          {"image_peaks", c.image_peaks},
          {"random_tone_phases", c.random_tone_phases}};
}

}  // namespace ddfr
