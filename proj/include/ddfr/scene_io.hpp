// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "ddfr/signal_sim.hpp"

namespace ddfr {

/// Scene document:
///   { "array": {"positions": [...]} | {"num_sensors": N, "spacing": d},
///     "propagation_speed": c,
///     "sampling": {"start_time": t1, "sample_rate": fs, "num_snapshots": M},
///     "sources": [{"doa": deg, "snr_db": x,
///                  "multitone": {"tones": [{"freq": f, "re": a, "im": b}, ...]}}
///               | {"doa": deg, "snr_db": x,
///                  "gaussian": {"f_low": .., "f_high": .., "num_spectral_lines": 200, "power": 1}}],
///     "noise_variance": 1 }
struct SceneDescription {
  ArrayGeometry geometry;
  SamplingGrid grid;
  std::vector<SourceSpec> sources;
  double noise_variance = 1.0;
};

SceneDescription scene_from_json(const nlohmann::json& doc);
nlohmann::json scene_to_json(const SceneDescription& scene);

ArrayGeometry geometry_from_json(const nlohmann::json& doc, double propagation_speed);
nlohmann::json geometry_to_json(const ArrayGeometry& geometry);
SamplingGrid grid_from_json(const nlohmann::json& doc);
nlohmann::json grid_to_json(const SamplingGrid& grid);
SourceSpec source_from_json(const nlohmann::json& doc);
nlohmann::json source_to_json(const SourceSpec& source);

/// One row per time sample; per sensor two columns (re, im). Header row names them.
void write_snapshots_csv(std::ostream& os, const SnapshotMatrix& snapshots);
void write_snapshots_csv(const std::filesystem::path& path, const SnapshotMatrix& snapshots);

/// Inverse of write_snapshots_csv; the data block only (grid/geometry come from the caller).
ComplexMatrix read_snapshots_csv(std::istream& is);
ComplexMatrix read_snapshots_csv(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace ddfr
