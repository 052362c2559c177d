// SPDX-License-Identifier: Apache-2.0
#include "ddfr/scene_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace ddfr {

using nlohmann::json;

namespace {

template <class T>
T required(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

ArrayGeometry geometry_from_json(const json& doc, double propagation_speed) {
  if (doc.contains("positions")) {
    return {required<std::vector<double>>(doc, "positions"), propagation_speed};
  }
  return ArrayGeometry::ula(required<int>(doc, "num_sensors"), required<double>(doc, "spacing"),
                            propagation_speed);
}

json geometry_to_json(const ArrayGeometry& geometry) {
  return json{{"positions", geometry.positions()}};
}

SamplingGrid grid_from_json(const json& doc) {
  return {doc.value("start_time", 0.0), required<double>(doc, "sample_rate"),
          required<int>(doc, "num_snapshots")};
}

json grid_to_json(const SamplingGrid& grid) {
  return json{{"start_time", grid.start_time},
              {"sample_rate", grid.sample_rate},
              {"num_snapshots", grid.num_snapshots}};
}

SourceSpec source_from_json(const json& doc) {
  SourceSpec s;
  s.doa_deg = required<double>(doc, "doa");
  s.snr_db = required<double>(doc, "snr_db");
  if (doc.contains("multitone")) {
    Multitone mt;
    for (const auto& t : doc.at("multitone").at("tones")) {
      mt.tones.push_back({required<double>(t, "freq"), {t.value("re", 1.0), t.value("im", 0.0)}});
    }
    s.kind = std::move(mt);
  } else if (doc.contains("gaussian")) {
    const auto& g = doc.at("gaussian");
    s.kind = BandlimitedGaussian{required<double>(g, "f_low"), required<double>(g, "f_high"),
                                 g.value("num_spectral_lines", 200), g.value("power", 1.0)};
  } else {
    throw ConfigError("source needs either 'multitone' or 'gaussian'");
  }
  return s;
}

json source_to_json(const SourceSpec& source) {
  json doc{{"doa", source.doa_deg}, {"snr_db", source.snr_db}};
  if (const auto* mt = std::get_if<Multitone>(&source.kind)) {
    json tones = json::array();
    for (const auto& t : mt->tones) {
      tones.push_back({{"freq", t.freq}, {"re", t.amplitude.real()}, {"im", t.amplitude.imag()}});
    }
    doc["multitone"] = {{"tones", tones}};
  } else {
    const auto& g = std::get<BandlimitedGaussian>(source.kind);
    doc["gaussian"] = {{"f_low", g.f_low},
                       {"f_high", g.f_high},
                       {"num_spectral_lines", g.num_spectral_lines},
                       {"power", g.power}};
  }
  return doc;
}

SceneDescription scene_from_json(const json& doc) {
  try {
    const double c = required<double>(doc, "propagation_speed");
    SceneDescription scene{geometry_from_json(doc.at("array"), c),
                           grid_from_json(doc.at("sampling")),
                           {},
                           doc.value("noise_variance", 1.0)};
    if (doc.contains("sources")) {
      for (const auto& s : doc.at("sources")) scene.sources.push_back(source_from_json(s));
    }
    return scene;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scene: ") + e.what());
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("scene: ") + e.what());
  }
}

json scene_to_json(const SceneDescription& scene) {
  json sources = json::array();
  for (const auto& s : scene.sources) sources.push_back(source_to_json(s));
  return json{{"array", geometry_to_json(scene.geometry)},
              {"propagation_speed", scene.geometry.propagation_speed()},
              {"sampling", grid_to_json(scene.grid)},
              {"sources", sources},
              {"noise_variance", scene.noise_variance}};
}

void write_snapshots_csv(std::ostream& os, const SnapshotMatrix& snapshots) {
  const auto& y = snapshots.data;
  for (Index k = 0; k < y.cols(); ++k) {
    os << (k ? "," : "") << "re" << k + 1 << ",im" << k + 1;
  }
  os << '\n' << std::setprecision(17);
  for (Index i = 0; i < y.rows(); ++i) {
    for (Index k = 0; k < y.cols(); ++k) {
      os << (k ? "," : "") << y(i, k).real() << ',' << y(i, k).imag();
    }
    os << '\n';
  }
}

void write_snapshots_csv(const std::filesystem::path& path, const SnapshotMatrix& snapshots) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  write_snapshots_csv(os, snapshots);
}

ComplexMatrix read_snapshots_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("snapshot CSV: empty input");
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() % 2 != 0 || (!rows.empty() && row.size() != rows.front().size())) {
      throw ConfigError("snapshot CSV: ragged or odd column count");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("snapshot CSV: no data rows");
  ComplexMatrix y(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size() / 2));
  for (Index i = 0; i < y.rows(); ++i) {
    for (Index k = 0; k < y.cols(); ++k) {
      const auto& r = rows[static_cast<std::size_t>(i)];
      y(i, k) = {r[static_cast<std::size_t>(2 * k)], r[static_cast<std::size_t>(2 * k + 1)]};
    }
  }
  return y;
}

ComplexMatrix read_snapshots_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path.string());
  return read_snapshots_csv(is);
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << doc.dump(2) << '\n';
}

}  // namespace ddfr
