// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.
//
// Rigid transforms, the sensor's antenna layout, and the polar imaging grid.
// Conventions: right-handed frame, boresight along +y, +z up, azimuth
// positive toward +x, elevation positive toward +z.

#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

#include "rfscene/types.hpp"

namespace rfscene {

// Rigid transform mapping local coordinates into the parent frame.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation * p + translation; }
};

// a then b applied on top: compose(a, b).apply(p) == a.apply(b.apply(p)).
Pose compose(const Pose& a, const Pose& b);

Pose inverse(const Pose& p);

// Transform taking coordinates of `frame` into coordinates of `reference`.
Pose relative_transform(const Pose& reference, const Pose& frame);

// Rotation within `tol` of orthonormal with determinant +1.
bool is_rigid(const Pose& p, double tol = 1e-9);

// Yaw about +z, then pitch about +x, then roll about +y (R = Rz*Rx*Ry),
// matching the boresight-+y convention. Angles in degrees.
Pose pose_from_euler(const Eigen::Vector3d& translation, double yaw_deg, double pitch_deg,
                     double roll_deg);

// Inverse of pose_from_euler; at the pitch singularity roll is folded into yaw.
void euler_from_pose(const Pose& p, double& yaw_deg, double& pitch_deg, double& roll_deg);

// How (azimuth, elevation) maps to a 3-vector.
//   unit_y_boresight: [sin(az)cos(el), cos(az)cos(el), sin(el)], unit norm.
//   trig_x_boresight: [cos(az)cos(el), cos(az)sin(el), sin(el)], an alternate
//   convention kept selectable for comparison runs; not unit norm in general.
enum class DirectionFormula { unit_y_boresight, trig_x_boresight };

Eigen::Vector3d direction_vector(double azimuth_rad, double elevation_rad,
                                 DirectionFormula formula = DirectionFormula::unit_y_boresight);

// Azimuth/elevation/range of a point in the sensor frame (unit_y convention).
void spherical_of_point(const Eigen::Vector3d& p_sensor, double& az, double& el, double& range);

// Transmit and receive element positions in the sensor frame. The pairwise
// sums tx[i] + rx[j] form the virtual aperture used for beamforming.
struct AntennaArray {
  std::vector<Eigen::Vector3d> tx_positions;
  std::vector<Eigen::Vector3d> rx_positions;
  double wavelength = kSpeedOfLight / 60e9;  // meters

  std::size_t pair_count() const { return tx_positions.size() * rx_positions.size(); }
};

// Tx elements along x, rx elements along z, spaced spacing_factor*wavelength,
// both centered on the origin. Pairwise sums tile an n_tx x n_rx planar
// virtual aperture in the x-z plane.
AntennaArray make_uniform_array(int n_tx, int n_rx, double wavelength,
                                double spacing_factor = 0.5);

// Phase weight aligning antenna pair (tx, rx) to direction u:
// exp(-i * 2*pi/lambda * <u, tx + rx>).
std::complex<double> steering_weight(const Eigen::Vector3d& direction, const Eigen::Vector3d& tx,
                                     const Eigen::Vector3d& rx, double wavelength);

// Polar imaging grid: impulse-response tap indices crossed with steering
// angles. Tap n corresponds to range n * range_resolution.
struct SphericalGrid {
  std::vector<int> taps;            // strictly positive tap indices
  std::vector<double> azimuths;     // radians, ascending
  std::vector<double> elevations;   // radians, ascending
  double range_resolution = 0.0;    // meters per tap

  double tap_range(int tap_index) const { return taps[tap_index] * range_resolution; }
  std::size_t cell_count() const { return taps.size() * azimuths.size() * elevations.size(); }
  Fov fov() const {
    return Fov{azimuths.front(), azimuths.back(), elevations.front(), elevations.back()};
  }
};

// Two-way range advanced per tap: c / (2 * bandwidth).
double range_resolution(double bandwidth_hz);

// Angles sampled inclusively from min to max at the given step (degrees);
// taps cover (0, max_range].
SphericalGrid make_spherical_grid(double az_min_deg, double az_max_deg, double az_step_deg,
                                  double el_min_deg, double el_max_deg, double el_step_deg,
                                  double max_range_m, double bandwidth_hz);

}  // namespace rfscene
