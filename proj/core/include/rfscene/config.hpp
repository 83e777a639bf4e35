// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.
//
// Pipeline configuration. Parsing is strict: unknown keys anywhere in the
// document are rejected with their JSON path, and parse(serialize(c)) is a
// fixed point (serialization materializes every default).

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rfscene/fusion.hpp"
#include "rfscene/geometry.hpp"
#include "rfscene/ofdm.hpp"
#include "rfscene/scene.hpp"
#include "rfscene/types.hpp"

namespace rfscene {

// Exactly one of preset ("corridor" | "room" | "cluttered") or path is set.
struct SceneRef {
  std::string preset = "cluttered";
  std::string path;
};

struct TrajectoryConfig {
  TrajectoryKind kind = TrajectoryKind::line;
  int n_frames = 5;
  double spacing_s = 2.0;
  double speed = 0.5;  // m/s
};

// Element layout; explicit position lists override the generated layout.
struct ArrayConfig {
  int n_tx = 8;
  int n_rx = 4;
  double spacing_factor = 0.5;  // element pitch in wavelengths
  std::vector<Eigen::Vector3d> tx_positions;
  std::vector<Eigen::Vector3d> rx_positions;
};

struct SphericalGridConfig {
  double az_min_deg = -60.0;
  double az_max_deg = 60.0;
  double az_step_deg = 2.0;
  double el_min_deg = -30.0;
  double el_max_deg = 30.0;
  double el_step_deg = 2.0;
  double max_range = 7.0;  // meters
};

struct DensifyConfig {
  int passes = 1;
  double sigma = 0.8;  // voxels
  int radius = 2;
};

struct HeadsConfig {
  double tau_occ = 0.5;   // occupancy threshold for point export
  double tau_d = 0.35;    // first-return threshold
  int depth_height = 30;
  int depth_width = 60;
};

struct PipelineConfig {
  std::uint64_t seed = 1;
  std::string out_dir = "run";
  SceneRef scene;
  TrajectoryConfig trajectory;
  OfdmConfig ofdm;
  ArrayConfig array;
  SphericalGridConfig spherical_grid;
  GridSpec cartesian_grid;
  FusionParams fusion;
  EncoderParams encoder;
  DensifyConfig densify;
  HeadsConfig heads;
  double lambda_v = 1.0;
  double lambda_d = 1.0;
  std::string direction_formula = "unit-norm";  // or "paper-literal"
  double wall_sample_pitch = 0.15;  // meters
  double scatterer_radius = 0.06;   // meters

  DirectionFormula direction() const;
  AntennaArray make_array() const;
  SphericalGrid make_spherical() const;
};

// Strict parse; throws std::invalid_argument naming the offending key/path.
PipelineConfig parse_config_json(const std::string& text);
PipelineConfig load_config(const std::string& path);

// Canonical serialization: sorted keys, every field present.
std::string serialize_config(const PipelineConfig& cfg);

// FNV-1a hash of the canonical serialization, hex encoded.
std::string config_hash_hex(const PipelineConfig& cfg);

}  // namespace rfscene
