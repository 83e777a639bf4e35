// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.
//
// Output heads turning a fused feature volume into a voxel occupancy grid
// and a first-return depth map.

#pragma once

#include <vector>

#include "rfscene/fusion.hpp"
#include "rfscene/types.hpp"

namespace rfscene {

// Occupancy in [0, 1] on a sensor-frame lattice.
struct VoxelGrid {
  Array3<double> occupancy;
  GridSpec grid;
  Pose pose;
};

// Channel 0 of the fused volume clamped to [0, 1].
VoxelGrid voxel_head(const FeatureVolume& fused);

// First-return ray casting: pixel (row, col) maps linearly to (elevation,
// azimuth) over the FoV; a ray from the sensor origin is sampled every
// quarter voxel, and the first sample whose trilinearly interpolated
// channel-0 value reaches tau returns its range. Rays that exit the lattice
// without a crossing yield DepthMap::kInvalidDepth.
DepthMap depth_head(const FeatureVolume& fused, int height, int width, const Fov& fov,
                    double tau = 0.35,
                    DirectionFormula formula = DirectionFormula::unit_y_boresight);

// Centers of voxels with occupancy >= threshold, row-major order.
std::vector<Eigen::Vector3d> occupied_centers(const VoxelGrid& grid, double threshold = 0.5);

}  // namespace rfscene
