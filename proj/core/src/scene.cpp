// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.

#include "rfscene/scene.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rfscene/random.hpp"

namespace rfscene {

void Wall::tangent_basis(Eigen::Vector3d& t1, Eigen::Vector3d& t2) const {
  const Eigen::Vector3d z(0, 0, 1);
  Eigen::Vector3d c = normal.cross(z);
  if (c.norm() < 1e-9) c = normal.cross(Eigen::Vector3d(1, 0, 0));
  t1 = c.normalized();
  t2 = normal.cross(t1);
}

Eigen::Vector3d mirror_point(const Eigen::Vector3d& p, const Wall& wall) {
  return p - 2.0 * wall.signed_distance(p) * wall.normal;
}

namespace {

// Angular + range cull against the sensor; distance returned for amplitudes.
bool in_sensor_view(const Eigen::Vector3d& p_world, const Pose& inv_pose, double max_range,
                    const Fov& fov, double& distance) {
  const Eigen::Vector3d p_s = inv_pose.apply(p_world);
  double az, el;
  spherical_of_point(p_s, az, el, distance);
  if (distance < 1e-6 || distance > max_range) return false;
  return fov.contains(az, el);
}

}  // namespace

std::vector<PropagationPath> enumerate_paths(const Scene& scene, const Pose& sensor_pose,
                                             const PathParams& params) {
  if (!is_rigid(sensor_pose)) throw std::invalid_argument("enumerate_paths: pose is not rigid");
  if (!scene.bounds.contains(sensor_pose.translation)) {
    throw std::invalid_argument("enumerate_paths: sensor outside scene bounds");
  }
  const Pose inv_pose = inverse(sensor_pose);
  const Eigen::Vector3d center = sensor_pose.translation;
  std::vector<PropagationPath> paths;

  for (const auto& s : scene.scatterers) {
    double d;
    if (!in_sensor_view(s.position, inv_pose, params.max_range, params.fov, d)) continue;
    PropagationPath p;
    p.kind = PathKind::direct;
    p.amplitude = {s.reflectivity / (d * d), 0.0};
    p.apparent_position = s.position;
    paths.push_back(p);
  }

  for (const auto& wall : scene.walls) {
    Eigen::Vector3d t1, t2;
    wall.tangent_basis(t1, t2);
    const int n1 = std::max(1, static_cast<int>(std::ceil(2.0 * wall.extent[0] / params.wall_sample_pitch)));
    const int n2 = std::max(1, static_cast<int>(std::ceil(2.0 * wall.extent[1] / params.wall_sample_pitch)));
    for (int i = 0; i < n1; ++i) {
      const double u = -wall.extent[0] + (i + 0.5) * 2.0 * wall.extent[0] / n1;
      for (int j = 0; j < n2; ++j) {
        const double v = -wall.extent[1] + (j + 0.5) * 2.0 * wall.extent[1] / n2;
        const Eigen::Vector3d sample = wall.point + u * t1 + v * t2;
        double d;
        if (!in_sensor_view(sample, inv_pose, params.max_range, params.fov, d)) continue;
        PropagationPath p;
        p.kind = PathKind::direct;
        p.amplitude = {wall.reflectivity / (d * d), 0.0};
        p.apparent_position = sample;
        paths.push_back(p);
      }
    }
  }

  // First-order specular bounces, modeled as a virtual reflector at the
  // scatterer's mirror image. Requires sensor and scatterer strictly on the
  // same side of the wall plane (which also guarantees the specular path is
  // longer than the direct one) and the bounce point on the wall rectangle.
  for (const auto& s : scene.scatterers) {
    for (const auto& wall : scene.walls) {
      const double sd_c = wall.signed_distance(center);
      const double sd_s = wall.signed_distance(s.position);
      if (sd_c * sd_s <= 0.0) continue;
      const Eigen::Vector3d m = mirror_point(s.position, wall);
      const double d_m = (m - center).norm();
      if (d_m < 1e-6 || d_m > params.max_range) continue;
      const double t = sd_c / (sd_c + sd_s);
      const Eigen::Vector3d bounce = center + t * (m - center);
      Eigen::Vector3d t1, t2;
      wall.tangent_basis(t1, t2);
      const Eigen::Vector3d rel = bounce - wall.point;
      if (std::abs(rel.dot(t1)) > wall.extent[0] || std::abs(rel.dot(t2)) > wall.extent[1]) {
        continue;
      }
      PropagationPath p;
      p.kind = PathKind::first_order_specular;
      p.amplitude = {s.reflectivity * wall.reflectivity / (d_m * d_m), 0.0};
      p.apparent_position = m;
      paths.push_back(p);
    }
  }

  // Nearest echo first. Stable, so equal-distance paths keep the
  // enumeration order above.
  std::stable_sort(paths.begin(), paths.end(),
                   [&center](const PropagationPath& a, const PropagationPath& b) {
                     return (a.apparent_position - center).squaredNorm() <
                            (b.apparent_position - center).squaredNorm();
                   });

  return paths;
}

namespace {

// Smallest positive ray parameter hitting the wall rectangle, or infinity.
double intersect_wall(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                      const Wall& wall) {
  const double denom = dir.dot(wall.normal);
  if (std::abs(denom) < 1e-12) return std::numeric_limits<double>::infinity();
  const double t = wall.signed_distance(origin) / -denom;
  if (t <= 1e-9) return std::numeric_limits<double>::infinity();
  const Eigen::Vector3d hit = origin + t * dir - wall.point;
  Eigen::Vector3d t1, t2;
  wall.tangent_basis(t1, t2);
  if (std::abs(hit.dot(t1)) > wall.extent[0] || std::abs(hit.dot(t2)) > wall.extent[1]) {
    return std::numeric_limits<double>::infinity();
  }
  return t;
}

double intersect_sphere(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                        const Eigen::Vector3d& center, double radius) {
  const Eigen::Vector3d oc = center - origin;
  const double b = dir.dot(oc);
  const double disc = b * b - oc.squaredNorm() + radius * radius;
  if (disc < 0.0) return std::numeric_limits<double>::infinity();
  const double sq = std::sqrt(disc);
  const double t0 = b - sq;
  if (t0 > 1e-9) return t0;
  const double t1 = b + sq;
  if (t1 > 1e-9) return t1;
  return std::numeric_limits<double>::infinity();
}

}  // namespace

DepthMap render_gt_depth(const Scene& scene, const Pose& pose, int height, int width,
                         const Fov& fov, double scatterer_radius, DirectionFormula formula) {
  if (height <= 0 || width <= 0) throw std::invalid_argument("render_gt_depth: empty image");
  if (!is_rigid(pose)) throw std::invalid_argument("render_gt_depth: pose is not rigid");
  DepthMap depth(height, width);
  const Eigen::Vector3d origin = pose.translation;
  for (int row = 0; row < height; ++row) {
    const double el = fov.el_min + (row + 0.5) * (fov.el_max - fov.el_min) / height;
    for (int col = 0; col < width; ++col) {
      const double az = fov.az_min + (col + 0.5) * (fov.az_max - fov.az_min) / width;
      const Eigen::Vector3d dir = (pose.rotation * direction_vector(az, el, formula)).normalized();
      double best = std::numeric_limits<double>::infinity();
      for (const auto& wall : scene.walls) best = std::min(best, intersect_wall(origin, dir, wall));
      for (const auto& s : scene.scatterers) {
        best = std::min(best, intersect_sphere(origin, dir, s.position, scatterer_radius));
      }
      if (std::isfinite(best)) depth.at(row, col) = best;
    }
  }
  return depth;
}

namespace {

// Separating-axis overlap between an axis-aligned box and a rectangle
// (zero-thickness oriented box). Touching counts as intersecting.
bool box_intersects_rect(const Eigen::Vector3d& box_center, const Eigen::Vector3d& box_half,
                         const Eigen::Vector3d& rect_center, const Eigen::Vector3d& t1,
                         const Eigen::Vector3d& t2, const Eigen::Vector3d& normal,
                         const Eigen::Vector2d& extent) {
  const Eigen::Vector3d d = rect_center - box_center;
  auto separated = [&](const Eigen::Vector3d& axis) {
    const double len = axis.norm();
    if (len < 1e-12) return false;  // degenerate axis, skip
    const Eigen::Vector3d l = axis / len;
    const double rb = box_half.x() * std::abs(l.x()) + box_half.y() * std::abs(l.y()) +
                      box_half.z() * std::abs(l.z());
    const double rr = extent[0] * std::abs(l.dot(t1)) + extent[1] * std::abs(l.dot(t2));
    return std::abs(l.dot(d)) > rb + rr;
  };
  const Eigen::Vector3d axes[3] = {Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(),
                                   Eigen::Vector3d::UnitZ()};
  for (const auto& a : axes) {
    if (separated(a)) return false;
  }
  if (separated(normal)) return false;
  for (const auto& a : axes) {
    if (separated(a.cross(t1))) return false;
    if (separated(a.cross(t2))) return false;
  }
  return true;
}

}  // namespace

Array3<double> voxelize_gt(const Scene& scene, const Pose& pose, const GridSpec& grid,
                           double scatterer_radius) {
  if (!is_rigid(pose)) throw std::invalid_argument("voxelize_gt: pose is not rigid");
  const Pose inv_pose = inverse(pose);

  // Bring surfaces into the sensor frame once; voxel tests stay axis aligned.
  struct LocalRect {
    Eigen::Vector3d center, t1, t2, normal;
    Eigen::Vector2d extent;
  };
  std::vector<LocalRect> rects;
  rects.reserve(scene.walls.size());
  for (const auto& wall : scene.walls) {
    LocalRect r;
    Eigen::Vector3d t1, t2;
    wall.tangent_basis(t1, t2);
    r.center = inv_pose.apply(wall.point);
    r.t1 = inv_pose.rotation * t1;
    r.t2 = inv_pose.rotation * t2;
    r.normal = inv_pose.rotation * wall.normal;
    r.extent = wall.extent;
    rects.push_back(r);
  }
  std::vector<Eigen::Vector3d> spheres;
  spheres.reserve(scene.scatterers.size());
  for (const auto& s : scene.scatterers) spheres.push_back(inv_pose.apply(s.position));

  Array3<double> occ(grid.dims[0], grid.dims[1], grid.dims[2], 0.0);
  const Eigen::Vector3d half = Eigen::Vector3d::Constant(0.5 * grid.voxel_size);
  for (int i = 0; i < grid.dims[0]; ++i) {
    for (int j = 0; j < grid.dims[1]; ++j) {
      for (int k = 0; k < grid.dims[2]; ++k) {
        const Eigen::Vector3d c = grid.center(i, j, k);
        bool hit = false;
        for (const auto& r : rects) {
          if (box_intersects_rect(c, half, r.center, r.t1, r.t2, r.normal, r.extent)) {
            hit = true;
            break;
          }
        }
        if (!hit) {
          for (const auto& s : spheres) {
            const Eigen::Vector3d clamped = s.cwiseMax(c - half).cwiseMin(c + half);
            if ((clamped - s).squaredNorm() <= scatterer_radius * scatterer_radius) {
              hit = true;
              break;
            }
          }
        }
        if (hit) occ(i, j, k) = 1.0;
      }
    }
  }
  return occ;
}

Trajectory gen_trajectory(TrajectoryKind kind, int n_frames, double spacing_s, double speed,
                          std::uint64_t seed) {
  if (n_frames <= 0) throw std::invalid_argument("gen_trajectory: n_frames must be > 0");
  if (spacing_s <= 0.0 || speed < 0.0) {
    throw std::invalid_argument("gen_trajectory: spacing must be > 0 and speed >= 0");
  }
  Trajectory traj;
  traj.timestamps.reserve(n_frames);
  traj.poses.reserve(n_frames);
  const double step = speed * spacing_s;

  switch (kind) {
    case TrajectoryKind::line: {
      for (int k = 0; k < n_frames; ++k) {
        traj.timestamps.push_back(k * spacing_s);
        Pose p;
        p.translation = Eigen::Vector3d((k - 0.5 * (n_frames - 1)) * step, 0.0, 0.0);
        traj.poses.push_back(p);
      }
      break;
    }
    case TrajectoryKind::arc: {
      const double radius = 3.0;
      for (int k = 0; k < n_frames; ++k) {
        traj.timestamps.push_back(k * spacing_s);
        const double psi = (k - 0.5 * (n_frames - 1)) * step / radius;
        Pose p = pose_from_euler(
            Eigen::Vector3d(radius * std::sin(psi), radius * std::cos(psi) - radius, 0.0),
            -rad2deg(psi), 0.0, 0.0);
        traj.poses.push_back(p);
      }
      break;
    }
    case TrajectoryKind::random_walk: {
      Rng rng(derive_seed(seed, "trajectory"));
      Eigen::Vector3d pos(0, 0, 0);
      for (int k = 0; k < n_frames; ++k) {
        traj.timestamps.push_back(k * spacing_s);
        Pose p;
        p.translation = pos;
        traj.poses.push_back(p);
        const double heading = rng.uniform(-0.7853981633974483, 0.7853981633974483);
        pos += step * Eigen::Vector3d(std::sin(heading), std::cos(heading), 0.0);
      }
      break;
    }
  }
  return traj;
}

}  // namespace rfscene
