// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.
//
// Reconstruction quality metrics: voxel cross-entropy, depth errors,
// symmetric chamfer distance, and error distribution curves.

#pragma once

#include <Eigen/Core>
#include <vector>

#include "rfscene/array.hpp"
#include "rfscene/types.hpp"

namespace rfscene {

// Mean binary cross-entropy between predicted occupancy probabilities and
// 0/1 targets; predictions are clamped to [1e-7, 1 - 1e-7] first.
// Throws on shape mismatch or empty grids.
double voxel_bce(const Array3<double>& pred, const Array3<double>& target);

// Mean absolute difference over pixels valid in both maps.
// Throws on shape mismatch or when no pixel is valid in both.
double depth_l1(const DepthMap& pred, const DepthMap& gt);

struct DepthMetrics {
  double mae = 0.0;      // mean |pred - gt|
  double rmse = 0.0;     // sqrt(mean (pred - gt)^2)
  double abs_rel = 0.0;  // mean |pred - gt| / gt, gt == 0 pixels excluded
  long n_valid = 0;      // pixels valid in both maps
};

// Depth errors over the common valid mask. Throws when the mask is empty.
DepthMetrics depth_metrics(const DepthMap& pred, const DepthMap& gt);

// Symmetric chamfer distance:
// 0.5 * (mean_p min_q |p-q| + mean_q min_p |q-p|). Throws on empty sets.
double chamfer_distance(const std::vector<Eigen::Vector3d>& pred,
                        const std::vector<Eigen::Vector3d>& gt);

struct ChamferResult {
  double cd = 0.0;       // meters
  double cd_diag = 0.0;  // cd / diagonal of the gt point set's bounding box
};

// chamfer_distance plus the diagonal-normalized value. Throws on empty sets
// and when the gt bounding box is degenerate (zero diagonal).
ChamferResult chamfer(const std::vector<Eigen::Vector3d>& pred,
                      const std::vector<Eigen::Vector3d>& gt);

// Cumulative error distribution: fraction of errors <= each edge. Edges are
// `bins` evenly spaced values ending exactly at the maximum error, so the
// final cumulative value is 1. All-equal errors collapse to a single step.
struct CdfCurve {
  std::vector<double> edges;
  std::vector<double> cumulative;
};

CdfCurve error_cdf(std::vector<double> errors, int bins);

// Absolute and gt-relative depth errors over the common valid mask
// (gt == 0 pixels are skipped for the relative errors).
void depth_errors(const DepthMap& pred, const DepthMap& gt, std::vector<double>& abs_errors,
                  std::vector<double>& rel_errors);

struct EvalReport {
  double bce = 0.0;
  double depth_l1 = 0.0;
  double mae = 0.0;
  double rmse = 0.0;
  double abs_rel = 0.0;
  double cd = 0.0;
  double cd_diag = 0.0;
  double composite = 0.0;  // lambda_v * bce + lambda_d * depth_l1
  long n_valid_pixels = 0;
};

// Full report for one reconstruction against ground truth.
EvalReport evaluate(const Array3<double>& pred_occupancy, const Array3<double>& gt_occupancy,
                    const std::vector<Eigen::Vector3d>& pred_points,
                    const std::vector<Eigen::Vector3d>& gt_points, const DepthMap& pred_depth,
                    const DepthMap& gt_depth, double lambda_v = 1.0, double lambda_d = 1.0);

}  // namespace rfscene
