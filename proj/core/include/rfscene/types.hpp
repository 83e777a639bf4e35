// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.

#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace rfscene {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

inline constexpr double deg2rad(double deg) { return deg * 3.14159265358979323846 / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / 3.14159265358979323846; }

// Angular field of view, radians. Azimuth 0 is boresight, elevation 0 is the horizon.
struct Fov {
  double az_min = deg2rad(-60.0);
  double az_max = deg2rad(60.0);
  double el_min = deg2rad(-30.0);
  double el_max = deg2rad(30.0);

  bool contains(double az, double el) const {
    return az >= az_min && az <= az_max && el >= el_min && el <= el_max;
  }
};

// Axis-aligned voxel lattice. `origin` is the minimum corner; voxel (i,j,k)
// spans [origin + (i,j,k)*vs, origin + (i+1,j+1,k+1)*vs].
struct GridSpec {
  std::array<int, 3> dims{64, 64, 32};
  double voxel_size = 0.12;  // meters
  Eigen::Vector3d origin{-3.84, 0.0, -1.92};

  std::size_t voxel_count() const {
    return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  }

  Eigen::Vector3d center(int i, int j, int k) const {
    return origin + voxel_size * Eigen::Vector3d(i + 0.5, j + 0.5, k + 0.5);
  }

  // Continuous voxel coordinates: integer values sit on voxel centers.
  Eigen::Vector3d continuous_index(const Eigen::Vector3d& p) const {
    return (p - origin) / voxel_size - Eigen::Vector3d(0.5, 0.5, 0.5);
  }

  bool contains(int i, int j, int k) const {
    return i >= 0 && i < dims[0] && j >= 0 && j < dims[1] && k >= 0 && k < dims[2];
  }

  // Voxel holding point p, or false if p is outside the lattice.
  bool voxel_of(const Eigen::Vector3d& p, std::array<int, 3>& out) const {
    for (int a = 0; a < 3; ++a) {
      double t = (p[a] - origin[a]) / voxel_size;
      int idx = static_cast<int>(std::floor(t));
      if (idx < 0 || idx >= dims[a]) return false;
      out[a] = idx;
    }
    return true;
  }

  Eigen::Vector3d max_corner() const {
    return origin + voxel_size * Eigen::Vector3d(dims[0], dims[1], dims[2]);
  }

  bool operator==(const GridSpec& o) const {
    return dims == o.dims && voxel_size == o.voxel_size && origin == o.origin;
  }
};

// Range image. values[row*width + col], row indexes elevation (ascending),
// col indexes azimuth (ascending). Pixels with no return hold kInvalidDepth.
struct DepthMap {
  static constexpr double kInvalidDepth = -1.0;

  int height = 0;
  int width = 0;
  std::vector<double> values;

  DepthMap() = default;
  DepthMap(int h, int w) : height(h), width(w), values(static_cast<std::size_t>(h) * w, kInvalidDepth) {}

  double& at(int row, int col) { return values[static_cast<std::size_t>(row) * width + col]; }
  double at(int row, int col) const { return values[static_cast<std::size_t>(row) * width + col]; }

  static bool valid(double v) { return v >= 0.0; }
  bool valid(int row, int col) const { return valid(at(row, col)); }
};

}  // namespace rfscene
