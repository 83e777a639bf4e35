// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.
//
// File formats. Arrays are stored as raw little-endian float32 next to a
// JSON sidecar describing shape and geometry: `<base>.f32` + `<base>.json`.
// Complex data is interleaved (re, im). Text outputs use full-precision
// round-trippable number formatting so identical runs produce identical
// bytes.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rfscene/fusion.hpp"
#include "rfscene/imaging.hpp"
#include "rfscene/metrics.hpp"
#include "rfscene/ofdm.hpp"
#include "rfscene/reconstruct.hpp"
#include "rfscene/scene.hpp"

namespace rfscene {

// Impulse-response / spectrum tensors, shape (tx, rx, bin), complex
// interleaved. The sidecar also records the OFDM parameters that produced
// the tensor; read_cir hands them back through `cfg` when non-null.
void write_cir(const std::string& path_base, const CirTensor& cir, const OfdmConfig& cfg);
CirTensor read_cir(const std::string& path_base, OfdmConfig* cfg = nullptr);

// Intensity volumes, shape (x, y, z), with lattice spec and pose.
void write_volume(const std::string& path_base, const CartesianVolume& volume);
CartesianVolume read_volume(const std::string& path_base);

// Feature volumes, shape (x, y, z, channel), with lattice spec and pose.
void write_feature_volume(const std::string& path_base, const FeatureVolume& volume);
FeatureVolume read_feature_volume(const std::string& path_base);

// Occupancy grids, shape (x, y, z), with lattice spec and pose.
void write_voxel_grid(const std::string& path_base, const VoxelGrid& grid);
VoxelGrid read_voxel_grid(const std::string& path_base);

// Beamformed polar frames, shape (tap, azimuth, elevation), with grid and pose.
void write_radio_frame(const std::string& path_base, const RadioFrame& frame);
RadioFrame read_radio_frame(const std::string& path_base);

// Depth maps as CSV: first line "height,width", then one comma-separated row
// per elevation row (ascending), full precision. Invalid pixels are -1.
void write_depth_csv(const std::string& path, const DepthMap& depth);
DepthMap read_depth_csv(const std::string& path);

// Depth maps as binary 16-bit PGM in millimeters, invalid pixels 0, image
// top row = highest elevation.
void write_depth_pgm(const std::string& path, const DepthMap& depth);

// ASCII point cloud of occupied voxel centers.
void write_ply(const std::string& path, const std::vector<Eigen::Vector3d>& points);

// Trajectories as CSV "t,x,y,z,yaw,pitch,roll" (seconds, meters, degrees).
void write_trajectory_csv(const std::string& path, const Trajectory& trajectory);
Trajectory read_trajectory_csv(const std::string& path);

// Scene description as JSON.
void write_scene_json(const std::string& path, const Scene& scene);
Scene read_scene_json(const std::string& path);
Scene parse_scene_json(const std::string& text);
std::string scene_to_json(const Scene& scene);

// CDF curves as CSV "error,cumulative_fraction".
void write_cdf_csv(const std::string& path, const CdfCurve& curve);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// FNV-1a content hash of a file, hex encoded.
std::string file_hash_hex(const std::string& path);

// Full-precision decimal formatting (round-trips through strtod).
std::string format_double(double v);

}  // namespace rfscene
