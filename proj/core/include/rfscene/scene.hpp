// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.
//
// Scene description (point scatterers, finite rectangular walls), propagation
// path enumeration including first-order specular multipath, ground-truth
// depth/occupancy rendering, and sensor trajectories.

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "rfscene/array.hpp"
#include "rfscene/geometry.hpp"
#include "rfscene/types.hpp"

namespace rfscene {

struct Scatterer {
  Eigen::Vector3d position;  // world frame
  double reflectivity = 1.0;
};

// Finite rectangle: center `point`, unit `normal`, half-sizes `extent` along
// the two tangent axes returned by tangent_basis().
struct Wall {
  Eigen::Vector3d point;
  Eigen::Vector3d normal;
  Eigen::Vector2d extent;
  double reflectivity = 0.35;

  // Deterministic in-plane axes: t1 = normalize(normal x z), falling back to
  // normal x x for near-vertical normals; t2 = normal x t1.
  void tangent_basis(Eigen::Vector3d& t1, Eigen::Vector3d& t2) const;

  double signed_distance(const Eigen::Vector3d& p) const { return normal.dot(p - point); }
};

struct Aabb {
  Eigen::Vector3d min;
  Eigen::Vector3d max;
  bool contains(const Eigen::Vector3d& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
};

struct Scene {
  std::vector<Scatterer> scatterers;
  std::vector<Wall> walls;
  Aabb bounds{{-10, -10, -10}, {10, 10, 10}};
};

// Reflection of p across the wall's plane.
Eigen::Vector3d mirror_point(const Eigen::Vector3d& p, const Wall& wall);

enum class PathKind { direct, first_order_specular };

// One echo. For specular paths the wall bounce is folded into a virtual
// reflector at the mirror image of the scatterer, so apparent_position fully
// determines per-pair delays for both kinds.
struct PropagationPath {
  PathKind kind = PathKind::direct;
  std::complex<double> amplitude{1.0, 0.0};
  Eigen::Vector3d apparent_position;  // world frame; mirror image for specular paths

  // Round-trip delay for world-frame element positions.
  double delay_seconds(const Eigen::Vector3d& tx_world, const Eigen::Vector3d& rx_world) const {
    return ((tx_world - apparent_position).norm() + (apparent_position - rx_world).norm()) /
           kSpeedOfLight;
  }
};

struct PathParams {
  double max_range = 7.0;            // meters from the sensor center
  Fov fov{};                         // applied to direct paths
  double wall_sample_pitch = 0.15;   // meters between wall surface samples
};

// Echo list for one sensor pose:
//  - one direct path per scatterer inside range and FoV, amplitude rho/d^2;
//  - one direct path per wall surface sample inside range and FoV;
//  - one specular path per (scatterer, wall) whose mirror image is in range,
//    when sensor and scatterer lie strictly on the same side of the wall and
//    the bounce point falls on the wall rectangle; amplitude scaled by the
//    wall reflectivity, delays taken from the mirror image.
// Sorted by distance of the apparent position from the sensor center
// (nearest echo first); ties keep the enumeration order scatterers, wall
// samples, specular paths.
std::vector<PropagationPath> enumerate_paths(const Scene& scene, const Pose& sensor_pose,
                                             const PathParams& params);

// Range image of the scene from `pose`: pixel (row, col) maps linearly to
// (elevation, azimuth) over the FoV, value is the distance to the nearest
// wall rectangle or scatterer sphere, or DepthMap::kInvalidDepth on a miss.
DepthMap render_gt_depth(const Scene& scene, const Pose& pose, int height, int width,
                         const Fov& fov, double scatterer_radius = 0.06,
                         DirectionFormula formula = DirectionFormula::unit_y_boresight);

// Surface occupancy on a sensor-frame lattice: voxel is 1 when it intersects
// any wall rectangle or scatterer sphere.
Array3<double> voxelize_gt(const Scene& scene, const Pose& pose, const GridSpec& grid,
                           double scatterer_radius = 0.06);

enum class TrajectoryKind { line, arc, random_walk };

struct Trajectory {
  std::vector<double> timestamps;  // seconds
  std::vector<Pose> poses;         // world frame
};

// Deterministic sensor path; consecutive poses are spacing_s apart in time
// and approximately speed*spacing_s apart in space.
//  line: lateral sweep along +x, centered on the origin, facing +y.
//  arc: circle of radius 3 m centered behind the origin, heading follows
//       the tangent so the scene stays in view.
//  random_walk: seeded steps of fixed length with bounded heading jitter.
Trajectory gen_trajectory(TrajectoryKind kind, int n_frames, double spacing_s, double speed,
                          std::uint64_t seed);

}  // namespace rfscene
