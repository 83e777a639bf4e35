// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.

#include "rfscene/imaging.hpp"

#include <cmath>
#include <stdexcept>

#include "rfscene/parallel.hpp"

namespace rfscene {

SteeringTable make_steering_table(const SphericalGrid& grid, const AntennaArray& array,
                                  DirectionFormula formula) {
  const std::size_t n_az = grid.azimuths.size();
  const std::size_t n_el = grid.elevations.size();
  const std::size_t n_tx = array.tx_positions.size();
  const std::size_t n_rx = array.rx_positions.size();
  if (n_az == 0 || n_el == 0) throw std::invalid_argument("make_steering_table: empty grid");
  if (n_tx == 0 || n_rx == 0) throw std::invalid_argument("make_steering_table: empty array");

  SteeringTable table;
  table.weights = Array3<std::complex<double>>(n_az, n_el, n_tx * n_rx);
  parallel_for(0, n_az, [&](std::size_t a) {
    for (std::size_t e = 0; e < n_el; ++e) {
      const Eigen::Vector3d u = direction_vector(grid.azimuths[a], grid.elevations[e], formula);
      std::size_t pair = 0;
      for (std::size_t i = 0; i < n_tx; ++i) {
        for (std::size_t j = 0; j < n_rx; ++j, ++pair) {
          table.weights(a, e, pair) =
              steering_weight(u, array.tx_positions[i], array.rx_positions[j], array.wavelength);
        }
      }
    }
  });
  return table;
}

RadioFrame beamform_frame(const CirTensor& cir, const SphericalGrid& grid,
                          const SteeringTable& table, const Pose& pose) {
  const std::size_t n_tap = grid.taps.size();
  const std::size_t n_az = grid.azimuths.size();
  const std::size_t n_el = grid.elevations.size();
  const std::size_t n_pair = cir.dim0() * cir.dim1();
  const std::size_t k_bins = cir.dim2();
  if (table.weights.dim0() != n_az || table.weights.dim1() != n_el ||
      table.weights.dim2() != n_pair) {
    throw std::invalid_argument("beamform_frame: steering table does not match grid/array");
  }
  for (int tap : grid.taps) {
    if (tap < 0 || static_cast<std::size_t>(tap) >= k_bins) {
      throw std::invalid_argument("beamform_frame: grid tap outside impulse response");
    }
  }

  RadioFrame frame;
  frame.grid = grid;
  frame.pose = pose;
  frame.values = Array3<double>(n_tap, n_az, n_el);

  // Pair-major accumulation: per steering cell the pair contributions are
  // added tx-major, rx-minor, matching a per-cell loop addition for addition.
  parallel_for(0, n_az * n_el, [&](std::size_t cell) {
    const std::size_t a = cell / n_el;
    const std::size_t e = cell % n_el;
    std::vector<std::complex<double>> acc(n_tap, {0.0, 0.0});
    for (std::size_t pair = 0; pair < n_pair; ++pair) {
      const std::complex<double> w = table.weights(a, e, pair);
      const std::complex<double>* h = cir.data() + pair * k_bins;
      for (std::size_t n = 0; n < n_tap; ++n) {
        acc[n] += w * h[grid.taps[n]];
      }
    }
    for (std::size_t n = 0; n < n_tap; ++n) {
      frame.values(n, a, e) = std::abs(acc[n]);
    }
  });
  return frame;
}

CartesianVolume to_cartesian(const RadioFrame& frame, const GridSpec& grid,
                             DirectionFormula formula) {
  CartesianVolume volume;
  volume.grid = grid;
  volume.pose = frame.pose;
  volume.values = Array3<double>(grid.dims[0], grid.dims[1], grid.dims[2], 0.0);

  const auto& g = frame.grid;
  for (std::size_t n = 0; n < g.taps.size(); ++n) {
    const double r = g.tap_range(n);
    for (std::size_t a = 0; a < g.azimuths.size(); ++a) {
      for (std::size_t e = 0; e < g.elevations.size(); ++e) {
        const Eigen::Vector3d p = r * direction_vector(g.azimuths[a], g.elevations[e], formula);
        std::array<int, 3> v;
        if (!grid.voxel_of(p, v)) continue;
        double& cell = volume.values(v[0], v[1], v[2]);
        cell = std::max(cell, frame.values(n, a, e));
      }
    }
  }

  double peak = 0.0;
  for (std::size_t i = 0; i < volume.values.size(); ++i) peak = std::max(peak, volume.values[i]);
  if (peak > 0.0) {
    const double inv = 1.0 / peak;
    for (std::size_t i = 0; i < volume.values.size(); ++i) volume.values[i] *= inv;
  }
  return volume;
}

}  // namespace rfscene
