// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.

#include "rfscene/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "rfscene/parallel.hpp"

namespace rfscene {

EncodedFrame encode(const CartesianVolume& volume, const EncoderParams& params) {
  const auto& dims = volume.grid.dims;
  EncodedFrame out;
  out.features.grid = volume.grid;
  out.features.pose = volume.pose;
  out.features.values = Array4<double>(dims[0], dims[1], dims[2], 3);
  out.confidence.logits = Array3<double>(dims[0], dims[1], dims[2]);

  const auto& v = volume.values;
  parallel_for(0, static_cast<std::size_t>(dims[0]), [&](std::size_t xi) {
    const int i = static_cast<int>(xi);
    for (int j = 0; j < dims[1]; ++j) {
      for (int k = 0; k < dims[2]; ++k) {
        const double center = v(i, j, k);
        // 3x3x3 neighborhood, zero padded at the borders; the mean always
        // divides by 27.
        double sum = 0.0;
        double peak = 0.0;
        for (int di = -1; di <= 1; ++di) {
          for (int dj = -1; dj <= 1; ++dj) {
            for (int dk = -1; dk <= 1; ++dk) {
              const int ni = i + di, nj = j + dj, nk = k + dk;
              if (ni < 0 || ni >= dims[0] || nj < 0 || nj >= dims[1] || nk < 0 || nk >= dims[2]) {
                continue;
              }
              const double nv = v(ni, nj, nk);
              sum += nv;
              peak = std::max(peak, nv);
            }
          }
        }
        out.features.values(i, j, k, 0) = center;
        out.features.values(i, j, k, 1) = sum / 27.0;
        out.features.values(i, j, k, 2) = peak;
        out.confidence.logits(i, j, k) = params.gain * center + params.bias;
      }
    }
  });
  return out;
}

std::vector<WarpedContribution> warp_contributions(const FeatureVolume& features,
                                                   const ConfidenceVolume& confidence,
                                                   const Pose& to_reference,
                                                   const GridSpec& target_grid,
                                                   const FusionParams& params) {
  std::vector<WarpedContribution> out;
  for_each_warped_contribution(
      features, confidence, to_reference, target_grid, params,
      [&](int six, int siy, int siz, int tix, int tiy, int tiz, const Eigen::Vector3d& warped,
          double weight) {
        out.push_back(WarpedContribution{{six, siy, siz}, warped, {tix, tiy, tiz}, weight});
      });
  return out;
}

FeatureVolume fuse(const std::vector<EncodedFrame>& frames, std::size_t reference_index,
                   const FusionParams& params) {
  if (frames.empty()) throw std::invalid_argument("fuse: no frames");
  if (reference_index >= frames.size()) throw std::invalid_argument("fuse: bad reference index");
  const auto& ref = frames[reference_index].features;
  const std::size_t channels = ref.channels();
  for (const auto& f : frames) {
    if (f.features.grid.dims != ref.grid.dims || f.features.channels() != channels) {
      throw std::invalid_argument("fuse: mismatched feature volume shapes");
    }
    if (f.confidence.logits.dim0() != static_cast<std::size_t>(f.features.grid.dims[0]) ||
        f.confidence.logits.dim1() != static_cast<std::size_t>(f.features.grid.dims[1]) ||
        f.confidence.logits.dim2() != static_cast<std::size_t>(f.features.grid.dims[2])) {
      throw std::invalid_argument("fuse: confidence shape does not match features");
    }
    if (!is_rigid(f.features.pose)) throw std::invalid_argument("fuse: non-rigid frame pose");
  }

  const auto& dims = ref.grid.dims;
  const std::size_t n_vox = ref.grid.voxel_count();

  // Per-frame partial sums, computed independently (possibly in parallel)
  // and merged in frame order; the additions therefore happen in the same
  // order for every thread count.
  std::vector<Array4<double>> frame_num(frames.size());
  std::vector<Array3<double>> frame_den(frames.size());
  parallel_for(0, frames.size(), [&](std::size_t fi) {
    const auto& frame = frames[fi];
    Array4<double> num(dims[0], dims[1], dims[2], channels, 0.0);
    Array3<double> den(dims[0], dims[1], dims[2], 0.0);
    const Pose to_ref = relative_transform(ref.pose, frame.features.pose);
    for_each_warped_contribution(
        frame.features, frame.confidence, to_ref, ref.grid, params,
        [&](int six, int siy, int siz, int tix, int tiy, int tiz, const Eigen::Vector3d&,
            double weight) {
          const std::size_t src = frame.features.values.index(six, siy, siz, 0);
          const std::size_t dst = num.index(tix, tiy, tiz, 0);
          for (std::size_t c = 0; c < channels; ++c) {
            num[dst + c] += weight * frame.features.values[src + c];
          }
          den(tix, tiy, tiz) += weight;
        });
    frame_num[fi] = std::move(num);
    frame_den[fi] = std::move(den);
  });

  FeatureVolume fused;
  fused.grid = ref.grid;
  fused.pose = ref.pose;
  fused.values = Array4<double>(dims[0], dims[1], dims[2], channels, 0.0);
  Array3<double> den(dims[0], dims[1], dims[2], 0.0);
  for (std::size_t fi = 0; fi < frames.size(); ++fi) {
    for (std::size_t i = 0; i < fused.values.size(); ++i) fused.values[i] += frame_num[fi][i];
    for (std::size_t i = 0; i < n_vox; ++i) den[i] += frame_den[fi][i];
  }
  for (std::size_t i = 0; i < n_vox; ++i) {
    const double d = den[i];
    if (d == 0.0) {
      for (std::size_t c = 0; c < channels; ++c) fused.values[i * channels + c] = 0.0;
      continue;
    }
    const double scale = 1.0 / (d + params.epsilon);
    for (std::size_t c = 0; c < channels; ++c) fused.values[i * channels + c] *= scale;
  }
  return fused;
}

FeatureVolume densify(const FeatureVolume& volume, int passes, double kernel_sigma, int radius) {
  if (passes < 0) throw std::invalid_argument("densify: passes must be >= 0");
  if (kernel_sigma <= 0.0) throw std::invalid_argument("densify: kernel_sigma must be > 0");
  if (radius < 0) throw std::invalid_argument("densify: radius must be >= 0");
  if (passes == 0) return volume;

  const auto& dims = volume.grid.dims;
  const std::size_t channels = volume.channels();
  const int support = 2 * radius + 1;

  // Unit-sum truncated Gaussian over the cube support.
  std::vector<double> kernel(static_cast<std::size_t>(support) * support * support);
  {
    double total = 0.0;
    std::size_t idx = 0;
    for (int di = -radius; di <= radius; ++di) {
      for (int dj = -radius; dj <= radius; ++dj) {
        for (int dk = -radius; dk <= radius; ++dk, ++idx) {
          const double d2 = static_cast<double>(di * di + dj * dj + dk * dk);
          kernel[idx] = std::exp(-d2 / (2.0 * kernel_sigma * kernel_sigma));
          total += kernel[idx];
        }
      }
    }
    for (auto& k : kernel) k /= total;
  }

  FeatureVolume current = volume;
  for (int pass = 0; pass < passes; ++pass) {
    std::vector<double> old_peak(channels, 0.0);
    for (std::size_t i = 0; i < current.values.size(); ++i) {
      const std::size_t c = i % channels;
      old_peak[c] = std::max(old_peak[c], current.values[i]);
    }

    FeatureVolume next = current;
    next.values.fill(0.0);
    parallel_for(0, static_cast<std::size_t>(dims[0]), [&](std::size_t xi) {
      const int i = static_cast<int>(xi);
      for (int j = 0; j < dims[1]; ++j) {
        for (int k = 0; k < dims[2]; ++k) {
          std::size_t kidx = 0;
          for (int di = -radius; di <= radius; ++di) {
            for (int dj = -radius; dj <= radius; ++dj) {
              for (int dk = -radius; dk <= radius; ++dk, ++kidx) {
                const int ni = i + di, nj = j + dj, nk = k + dk;
                if (ni < 0 || ni >= dims[0] || nj < 0 || nj >= dims[1] || nk < 0 ||
                    nk >= dims[2]) {
                  continue;
                }
                const double w = kernel[kidx];
                const std::size_t src = current.values.index(ni, nj, nk, 0);
                const std::size_t dst = next.values.index(i, j, k, 0);
                for (std::size_t c = 0; c < channels; ++c) {
                  next.values[dst + c] += w * current.values[src + c];
                }
              }
            }
          }
        }
      }
    });

    std::vector<double> new_peak(channels, 0.0);
    for (std::size_t i = 0; i < next.values.size(); ++i) {
      const std::size_t c = i % channels;
      new_peak[c] = std::max(new_peak[c], next.values[i]);
    }
    for (std::size_t c = 0; c < channels; ++c) {
      if (new_peak[c] > 0.0 && old_peak[c] > 0.0) {
        const double scale = old_peak[c] / new_peak[c];
        for (std::size_t i = c; i < next.values.size(); i += channels) next.values[i] *= scale;
      }
    }
    current = std::move(next);
  }
  return current;
}

}  // namespace rfscene
