// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.
//
// Delay-and-sum beamforming of per-pair impulse responses onto a polar grid,
// and resampling of polar frames into a Cartesian voxel volume.

#pragma once

#include "rfscene/array.hpp"
#include "rfscene/geometry.hpp"
#include "rfscene/ofdm.hpp"
#include "rfscene/types.hpp"

namespace rfscene {

// Beamformed magnitudes on the polar grid, (tap, azimuth, elevation),
// together with the capture pose.
struct RadioFrame {
  Array3<double> values;
  SphericalGrid grid;
  Pose pose;
};

// Steering weights per (azimuth, elevation, antenna pair), pair index
// tx-major. Computed once per (grid, array) and reused across frames.
struct SteeringTable {
  Array3<std::complex<double>> weights;  // (az, el, pair)
};

SteeringTable make_steering_table(const SphericalGrid& grid, const AntennaArray& array,
                                  DirectionFormula formula = DirectionFormula::unit_y_boresight);

// s(n, az, el) = | sum_ij w_ij(az, el) * cir(i, j, taps[n]) |, summed tx-major
// then rx-minor. The cell sums follow exactly that order, so the result is
// bit-identical to a naive per-cell loop and independent of thread count.
RadioFrame beamform_frame(const CirTensor& cir, const SphericalGrid& grid,
                          const SteeringTable& table, const Pose& pose);

// Intensity volume on a sensor-frame lattice.
struct CartesianVolume {
  Array3<double> values;
  GridSpec grid;
  Pose pose;
};

// Scatter polar cells to the voxel containing r * u(az, el), combining by
// max; cells mapping outside the lattice are dropped. The result is scaled
// so the largest landed value is 1 (an empty result stays zero).
CartesianVolume to_cartesian(const RadioFrame& frame, const GridSpec& grid,
                             DirectionFormula formula = DirectionFormula::unit_y_boresight);

}  // namespace rfscene
