// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.

#include "rfscene/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rfscene/geometry.hpp"
#include "rfscene/parallel.hpp"

namespace rfscene {

VoxelGrid voxel_head(const FeatureVolume& fused) {
  if (fused.channels() < 1) throw std::invalid_argument("voxel_head: no channels");
  VoxelGrid out;
  out.grid = fused.grid;
  out.pose = fused.pose;
  const auto& dims = fused.grid.dims;
  out.occupancy = Array3<double>(dims[0], dims[1], dims[2]);
  for (int i = 0; i < dims[0]; ++i) {
    for (int j = 0; j < dims[1]; ++j) {
      for (int k = 0; k < dims[2]; ++k) {
        out.occupancy(i, j, k) = std::clamp(fused.values(i, j, k, 0), 0.0, 1.0);
      }
    }
  }
  return out;
}

namespace {

// Channel-0 value at a point given in lattice coordinates, trilinear over the
// eight surrounding voxel centers, zero outside the lattice.
double sample_trilinear(const FeatureVolume& volume, const Eigen::Vector3d& ci) {
  const auto& dims = volume.grid.dims;
  const int i0 = static_cast<int>(std::floor(ci.x()));
  const int j0 = static_cast<int>(std::floor(ci.y()));
  const int k0 = static_cast<int>(std::floor(ci.z()));
  const double fx = ci.x() - i0, fy = ci.y() - j0, fz = ci.z() - k0;
  double acc = 0.0;
  for (int di = 0; di <= 1; ++di) {
    const int i = i0 + di;
    if (i < 0 || i >= dims[0]) continue;
    const double wx = di ? fx : 1.0 - fx;
    for (int dj = 0; dj <= 1; ++dj) {
      const int j = j0 + dj;
      if (j < 0 || j >= dims[1]) continue;
      const double wy = dj ? fy : 1.0 - fy;
      for (int dk = 0; dk <= 1; ++dk) {
        const int k = k0 + dk;
        if (k < 0 || k >= dims[2]) continue;
        const double wz = dk ? fz : 1.0 - fz;
        acc += wx * wy * wz * volume.values(i, j, k, 0);
      }
    }
  }
  return acc;
}

// Entry/exit parameters of the ray o + t*d against the lattice bounding box.
bool ray_box(const Eigen::Vector3d& o, const Eigen::Vector3d& d, const Eigen::Vector3d& lo,
             const Eigen::Vector3d& hi, double& t_enter, double& t_exit) {
  t_enter = 0.0;
  t_exit = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (std::abs(d[a]) < 1e-15) {
      if (o[a] < lo[a] || o[a] > hi[a]) return false;
      continue;
    }
    double ta = (lo[a] - o[a]) / d[a];
    double tb = (hi[a] - o[a]) / d[a];
    if (ta > tb) std::swap(ta, tb);
    t_enter = std::max(t_enter, ta);
    t_exit = std::min(t_exit, tb);
  }
  return t_enter <= t_exit;
}

}  // namespace

DepthMap depth_head(const FeatureVolume& fused, int height, int width, const Fov& fov, double tau,
                    DirectionFormula formula) {
  if (height <= 0 || width <= 0) throw std::invalid_argument("depth_head: empty image");
  if (fused.channels() < 1) throw std::invalid_argument("depth_head: no channels");
  DepthMap depth(height, width);
  const Eigen::Vector3d lo = fused.grid.origin;
  const Eigen::Vector3d hi = fused.grid.max_corner();
  const double step = fused.grid.voxel_size / 4.0;

  parallel_for(0, static_cast<std::size_t>(height), [&](std::size_t r) {
    const int row = static_cast<int>(r);
    const double el = fov.el_min + (row + 0.5) * (fov.el_max - fov.el_min) / height;
    for (int col = 0; col < width; ++col) {
      const double az = fov.az_min + (col + 0.5) * (fov.az_max - fov.az_min) / width;
      const Eigen::Vector3d dir = direction_vector(az, el, formula).normalized();
      const Eigen::Vector3d origin = Eigen::Vector3d::Zero();
      double t_enter = 0.0, t_exit = 0.0;
      if (!ray_box(origin, dir, lo, hi, t_enter, t_exit)) continue;
      const std::size_t n_steps =
          static_cast<std::size_t>(std::floor((t_exit - t_enter) / step)) + 1;
      for (std::size_t n = 0; n < n_steps; ++n) {
        const double t = t_enter + static_cast<double>(n) * step;
        const Eigen::Vector3d p = origin + t * dir;
        const Eigen::Vector3d ci = fused.grid.continuous_index(p);
        if (sample_trilinear(fused, ci) >= tau) {
          depth.at(row, col) = t;
          break;
        }
      }
    }
  });
  return depth;
}

std::vector<Eigen::Vector3d> occupied_centers(const VoxelGrid& grid, double threshold) {
  std::vector<Eigen::Vector3d> out;
  const auto& dims = grid.grid.dims;
  for (int i = 0; i < dims[0]; ++i) {
    for (int j = 0; j < dims[1]; ++j) {
      for (int k = 0; k < dims[2]; ++k) {
        if (grid.occupancy(i, j, k) >= threshold) out.push_back(grid.grid.center(i, j, k));
      }
    }
  }
  return out;
}

}  // namespace rfscene
