// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.

#include "rfscene/geometry.hpp"

#include <Eigen/LU>
#include <cmath>
#include <stdexcept>

namespace rfscene {

Pose compose(const Pose& a, const Pose& b) {
  Pose out;
  out.rotation = a.rotation * b.rotation;
  out.translation = a.rotation * b.translation + a.translation;
  return out;
}

Pose inverse(const Pose& p) {
  Pose out;
  out.rotation = p.rotation.transpose();
  out.translation = -(out.rotation * p.translation);
  return out;
}

Pose relative_transform(const Pose& reference, const Pose& frame) {
  return compose(inverse(reference), frame);
}

bool is_rigid(const Pose& p, double tol) {
  const Eigen::Matrix3d gram = p.rotation.transpose() * p.rotation;
  if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(p.rotation.determinant() - 1.0) <= tol;
}

namespace {

Eigen::Matrix3d rot_x(double a) {
  Eigen::Matrix3d m;
  m << 1, 0, 0, 0, std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a);
  return m;
}

Eigen::Matrix3d rot_y(double a) {
  Eigen::Matrix3d m;
  m << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a);
  return m;
}

Eigen::Matrix3d rot_z(double a) {
  Eigen::Matrix3d m;
  m << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
  return m;
}

}  // namespace

Pose pose_from_euler(const Eigen::Vector3d& translation, double yaw_deg, double pitch_deg,
                     double roll_deg) {
  Pose p;
  p.rotation = rot_z(deg2rad(yaw_deg)) * rot_x(deg2rad(pitch_deg)) * rot_y(deg2rad(roll_deg));
  p.translation = translation;
  return p;
}

void euler_from_pose(const Pose& p, double& yaw_deg, double& pitch_deg, double& roll_deg) {
  // R = Rz(yaw) * Rx(pitch) * Ry(roll):
  //   R(2,1) = sin(pitch)
  //   R(0,1) = -sin(yaw) cos(pitch),  R(1,1) = cos(yaw) cos(pitch)
  //   R(2,0) = -cos(pitch) sin(roll), R(2,2) = cos(pitch) cos(roll)
  const Eigen::Matrix3d& r = p.rotation;
  const double sp = std::clamp(r(2, 1), -1.0, 1.0);
  pitch_deg = rad2deg(std::asin(sp));
  if (std::abs(sp) > 1.0 - 1e-12) {
    // Pitch singularity: only yaw+roll is observable; report it as yaw.
    roll_deg = 0.0;
    yaw_deg = rad2deg(std::atan2(r(1, 0), r(0, 0)));
  } else {
    yaw_deg = rad2deg(std::atan2(-r(0, 1), r(1, 1)));
    roll_deg = rad2deg(std::atan2(-r(2, 0), r(2, 2)));
  }
}

Eigen::Vector3d direction_vector(double az, double el, DirectionFormula formula) {
  if (formula == DirectionFormula::unit_y_boresight) {
    return {std::sin(az) * std::cos(el), std::cos(az) * std::cos(el), std::sin(el)};
  }
  return {std::cos(az) * std::cos(el), std::cos(az) * std::sin(el), std::sin(el)};
}

void spherical_of_point(const Eigen::Vector3d& p, double& az, double& el, double& range) {
  range = p.norm();
  az = std::atan2(p.x(), p.y());
  el = range > 0.0 ? std::asin(std::clamp(p.z() / range, -1.0, 1.0)) : 0.0;
}

AntennaArray make_uniform_array(int n_tx, int n_rx, double wavelength, double spacing_factor) {
  if (n_tx <= 0 || n_rx <= 0) throw std::invalid_argument("make_uniform_array: empty array");
  if (wavelength <= 0.0) throw std::invalid_argument("make_uniform_array: wavelength must be > 0");
  AntennaArray array;
  array.wavelength = wavelength;
  const double pitch = spacing_factor * wavelength;
  array.tx_positions.reserve(n_tx);
  for (int i = 0; i < n_tx; ++i) {
    array.tx_positions.emplace_back((i - 0.5 * (n_tx - 1)) * pitch, 0.0, 0.0);
  }
  array.rx_positions.reserve(n_rx);
  for (int j = 0; j < n_rx; ++j) {
    array.rx_positions.emplace_back(0.0, 0.0, (j - 0.5 * (n_rx - 1)) * pitch);
  }
  return array;
}

std::complex<double> steering_weight(const Eigen::Vector3d& direction, const Eigen::Vector3d& tx,
                                     const Eigen::Vector3d& rx, double wavelength) {
  const double phase = -2.0 * 3.14159265358979323846 / wavelength * direction.dot(tx + rx);
  return std::polar(1.0, phase);
}

double range_resolution(double bandwidth_hz) {
  if (bandwidth_hz <= 0.0) throw std::invalid_argument("range_resolution: bandwidth must be > 0");
  return kSpeedOfLight / (2.0 * bandwidth_hz);
}

SphericalGrid make_spherical_grid(double az_min_deg, double az_max_deg, double az_step_deg,
                                  double el_min_deg, double el_max_deg, double el_step_deg,
                                  double max_range_m, double bandwidth_hz) {
  if (az_step_deg <= 0.0 || el_step_deg <= 0.0) {
    throw std::invalid_argument("make_spherical_grid: angle steps must be > 0");
  }
  SphericalGrid grid;
  grid.range_resolution = range_resolution(bandwidth_hz);
  const int n_az = static_cast<int>(std::round((az_max_deg - az_min_deg) / az_step_deg)) + 1;
  const int n_el = static_cast<int>(std::round((el_max_deg - el_min_deg) / el_step_deg)) + 1;
  if (n_az < 1 || n_el < 1) throw std::invalid_argument("make_spherical_grid: empty angle range");
  grid.azimuths.reserve(n_az);
  for (int i = 0; i < n_az; ++i) grid.azimuths.push_back(deg2rad(az_min_deg + i * az_step_deg));
  grid.elevations.reserve(n_el);
  for (int i = 0; i < n_el; ++i) grid.elevations.push_back(deg2rad(el_min_deg + i * el_step_deg));
  for (int n = 1; n * grid.range_resolution <= max_range_m + 1e-12; ++n) grid.taps.push_back(n);
  if (grid.taps.empty()) {
    throw std::invalid_argument("make_spherical_grid: max_range below one tap");
  }
  return grid;
}

}  // namespace rfscene
