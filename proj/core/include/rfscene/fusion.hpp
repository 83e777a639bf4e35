// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.
//
// Multi-frame volume fusion: per-voxel features and confidence logits are
// extracted from each frame, warped through relative poses into a reference
// frame, scattered onto its lattice with a truncated Gaussian kernel, and
// combined as a confidence-weighted average.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rfscene/array.hpp"
#include "rfscene/geometry.hpp"
#include "rfscene/imaging.hpp"
#include "rfscene/types.hpp"

namespace rfscene {

// Per-voxel feature channels, (x, y, z, channel), on a sensor-frame lattice.
struct FeatureVolume {
  Array4<double> values;
  GridSpec grid;
  Pose pose;

  std::size_t channels() const { return values.dim3(); }
};

// Per-voxel confidence logits matching a FeatureVolume's lattice.
struct ConfidenceVolume {
  Array3<double> logits;
};

struct EncodedFrame {
  FeatureVolume features;
  ConfidenceVolume confidence;
};

struct EncoderParams {
  double gain = 8.0;  // logit = gain * intensity + bias
  double bias = -4.0;
};

struct FusionParams {
  double sigma = 1.0;        // kernel width, voxels
  int radius = 2;            // Chebyshev scatter radius, voxels
  double eta = 3.0;          // confidence sharpening exponent
  double epsilon = 1e-8;     // denominator regularizer
  double skip_reliability = 1e-12;  // skip all-zero-feature voxels below this
};

inline double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }

// Reliability weight of a confidence logit: softplus(c)^eta.
inline double reliability(double logit, double eta) {
  return std::pow(softplus(logit), eta);
}

// Three feature channels per voxel: intensity, 3x3x3 neighborhood mean
// (zero padded, always divided by 27), 3x3x3 neighborhood max. Confidence
// logit is an affine map of intensity.
EncodedFrame encode(const CartesianVolume& volume, const EncoderParams& params = {});

// One kernel-weighted scatter target of one source voxel.
struct WarpedContribution {
  std::array<int, 3> source;   // source voxel index
  Eigen::Vector3d warped;      // continuous target voxel coordinates
  std::array<int, 3> target;   // target voxel index
  double weight;               // kernel * reliability
};

// Enumerates scatter contributions of one frame into `target_grid` through
// the rigid transform `to_reference` (source frame -> reference frame).
// For each kept source voxel (skipped only when its features are all zero
// and its reliability is below params.skip_reliability), every integer
// target voxel within Chebyshev radius params.radius of the warped position
// receives weight exp(-|d|^2 / (2 sigma^2)) * reliability. Deterministic
// order: source voxels row-major, targets row-major within each box.
// fn(six, siy, siz, tix, tiy, tiz, warped, weight).
template <typename Fn>
void for_each_warped_contribution(const FeatureVolume& features,
                                  const ConfidenceVolume& confidence, const Pose& to_reference,
                                  const GridSpec& target_grid, const FusionParams& params,
                                  Fn&& fn) {
  if (!is_rigid(to_reference)) {
    throw std::invalid_argument("for_each_warped_contribution: transform is not rigid");
  }
  const auto& grid = features.grid;
  const std::size_t channels = features.channels();
  const double inv_two_sigma_sq = 1.0 / (2.0 * params.sigma * params.sigma);
  for (int ix = 0; ix < grid.dims[0]; ++ix) {
    for (int iy = 0; iy < grid.dims[1]; ++iy) {
      for (int iz = 0; iz < grid.dims[2]; ++iz) {
        const double rel = reliability(confidence.logits(ix, iy, iz), params.eta);
        bool all_zero = true;
        for (std::size_t c = 0; c < channels && all_zero; ++c) {
          if (features.values(ix, iy, iz, c) != 0.0) all_zero = false;
        }
        if (all_zero && rel < params.skip_reliability) continue;

        const Eigen::Vector3d warped =
            target_grid.continuous_index(to_reference.apply(grid.center(ix, iy, iz)));
        int lo[3], hi[3];
        bool in_range = true;
        for (int a = 0; a < 3; ++a) {
          lo[a] = std::max(0, static_cast<int>(std::ceil(warped[a] - params.radius)));
          hi[a] = std::min(target_grid.dims[a] - 1,
                           static_cast<int>(std::floor(warped[a] + params.radius)));
          if (lo[a] > hi[a]) in_range = false;
        }
        if (!in_range) continue;

        for (int tx = lo[0]; tx <= hi[0]; ++tx) {
          for (int ty = lo[1]; ty <= hi[1]; ++ty) {
            for (int tz = lo[2]; tz <= hi[2]; ++tz) {
              const double dx = warped[0] - tx;
              const double dy = warped[1] - ty;
              const double dz = warped[2] - tz;
              const double d2 = dx * dx + dy * dy + dz * dz;
              const double w = std::exp(-d2 * inv_two_sigma_sq) * rel;
              fn(ix, iy, iz, tx, ty, tz, warped, w);
            }
          }
        }
      }
    }
  }
}

// Materialized contribution list (primarily for inspection and tests; fuse
// streams the same enumeration without building it).
std::vector<WarpedContribution> warp_contributions(const FeatureVolume& features,
                                                   const ConfidenceVolume& confidence,
                                                   const Pose& to_reference,
                                                   const GridSpec& target_grid,
                                                   const FusionParams& params);

// Confidence-weighted average over all frames on the reference frame's
// lattice: Z(x) = sum(w * F) / (sum(w) + epsilon). Voxels receiving no
// weight are exactly zero. Frames may be processed in parallel; partial
// sums are merged in frame order, so the result is thread-count invariant.
// Throws on mismatched lattice shapes or channel counts.
FeatureVolume fuse(const std::vector<EncodedFrame>& frames, std::size_t reference_index,
                   const FusionParams& params = {});

// Truncated Gaussian smoothing (cube support of the given radius, kernel
// normalized to unit sum) applied `passes` times; after each pass every
// channel is rescaled so its maximum matches the pre-pass maximum.
// passes = 0 returns the input unchanged.
FeatureVolume densify(const FeatureVolume& volume, int passes, double kernel_sigma,
                      int radius = 2);

}  // namespace rfscene
