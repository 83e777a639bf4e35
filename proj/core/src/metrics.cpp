// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.

#include "rfscene/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rfscene/parallel.hpp"

namespace rfscene {

double voxel_bce(const Array3<double>& pred, const Array3<double>& target) {
  if (!pred.same_shape(target)) throw std::invalid_argument("voxel_bce: shape mismatch");
  if (pred.size() == 0) throw std::invalid_argument("voxel_bce: empty grid");
  constexpr double kEps = 1e-7;
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double p = std::clamp(pred[i], kEps, 1.0 - kEps);
    const double t = target[i];
    sum += -(t * std::log(p) + (1.0 - t) * std::log(1.0 - p));
  }
  return sum / static_cast<double>(pred.size());
}

namespace {

void check_depth_pair(const DepthMap& pred, const DepthMap& gt) {
  if (pred.height != gt.height || pred.width != gt.width) {
    throw std::invalid_argument("depth metrics: shape mismatch");
  }
}

}  // namespace

double depth_l1(const DepthMap& pred, const DepthMap& gt) {
  check_depth_pair(pred, gt);
  double sum = 0.0;
  long n = 0;
  for (std::size_t i = 0; i < pred.values.size(); ++i) {
    if (!DepthMap::valid(pred.values[i]) || !DepthMap::valid(gt.values[i])) continue;
    sum += std::abs(pred.values[i] - gt.values[i]);
    ++n;
  }
  if (n == 0) throw std::invalid_argument("depth_l1: no pixel valid in both maps");
  return sum / static_cast<double>(n);
}

DepthMetrics depth_metrics(const DepthMap& pred, const DepthMap& gt) {
  check_depth_pair(pred, gt);
  DepthMetrics m;
  double sum_abs = 0.0, sum_sq = 0.0, sum_rel = 0.0;
  long n_rel = 0;
  for (std::size_t i = 0; i < pred.values.size(); ++i) {
    if (!DepthMap::valid(pred.values[i]) || !DepthMap::valid(gt.values[i])) continue;
    const double e = pred.values[i] - gt.values[i];
    sum_abs += std::abs(e);
    sum_sq += e * e;
    ++m.n_valid;
    if (gt.values[i] != 0.0) {
      sum_rel += std::abs(e) / gt.values[i];
      ++n_rel;
    }
  }
  if (m.n_valid == 0) throw std::invalid_argument("depth_metrics: no pixel valid in both maps");
  m.mae = sum_abs / static_cast<double>(m.n_valid);
  m.rmse = std::sqrt(sum_sq / static_cast<double>(m.n_valid));
  m.abs_rel = n_rel > 0 ? sum_rel / static_cast<double>(n_rel) : 0.0;
  return m;
}

namespace {

// Mean over `from` of the distance to the nearest point in `to`. Per-point
// minima are independent, so they can be computed in parallel; the final sum
// runs in index order to stay deterministic.
double mean_nearest(const std::vector<Eigen::Vector3d>& from,
                    const std::vector<Eigen::Vector3d>& to) {
  std::vector<double> nearest(from.size());
  parallel_for(0, from.size(), [&](std::size_t i) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : to) best = std::min(best, (from[i] - q).squaredNorm());
    nearest[i] = std::sqrt(best);
  });
  double sum = 0.0;
  for (double d : nearest) sum += d;
  return sum / static_cast<double>(from.size());
}

}  // namespace

double chamfer_distance(const std::vector<Eigen::Vector3d>& pred,
                        const std::vector<Eigen::Vector3d>& gt) {
  if (pred.empty() || gt.empty()) throw std::invalid_argument("chamfer: empty point set");
  return 0.5 * (mean_nearest(pred, gt) + mean_nearest(gt, pred));
}

ChamferResult chamfer(const std::vector<Eigen::Vector3d>& pred,
                      const std::vector<Eigen::Vector3d>& gt) {
  ChamferResult r;
  r.cd = chamfer_distance(pred, gt);
  Eigen::Vector3d lo = gt.front(), hi = gt.front();
  for (const auto& q : gt) {
    lo = lo.cwiseMin(q);
    hi = hi.cwiseMax(q);
  }
  const double diag = (hi - lo).norm();
  if (diag <= 0.0) throw std::invalid_argument("chamfer: degenerate gt bounding box");
  r.cd_diag = r.cd / diag;
  return r;
}

CdfCurve error_cdf(std::vector<double> errors, int bins) {
  if (errors.empty()) throw std::invalid_argument("error_cdf: no errors");
  if (bins <= 0) throw std::invalid_argument("error_cdf: bins must be positive");
  std::sort(errors.begin(), errors.end());
  const double max_err = errors.back();
  const double n = static_cast<double>(errors.size());
  CdfCurve curve;
  if (max_err <= 0.0) {
    curve.edges.push_back(0.0);
    curve.cumulative.push_back(1.0);
    return curve;
  }
  for (int b = 1; b <= bins; ++b) {
    // Last edge lands exactly on the maximum error, so the curve ends at 1.
    const double edge = b == bins ? max_err : max_err * static_cast<double>(b) / bins;
    const auto it = std::upper_bound(errors.begin(), errors.end(), edge);
    curve.edges.push_back(edge);
    curve.cumulative.push_back(static_cast<double>(it - errors.begin()) / n);
  }
  return curve;
}

void depth_errors(const DepthMap& pred, const DepthMap& gt, std::vector<double>& abs_errors,
                  std::vector<double>& rel_errors) {
  check_depth_pair(pred, gt);
  abs_errors.clear();
  rel_errors.clear();
  for (std::size_t i = 0; i < pred.values.size(); ++i) {
    if (!DepthMap::valid(pred.values[i]) || !DepthMap::valid(gt.values[i])) continue;
    const double e = std::abs(pred.values[i] - gt.values[i]);
    abs_errors.push_back(e);
    if (gt.values[i] != 0.0) rel_errors.push_back(e / gt.values[i]);
  }
  if (abs_errors.empty()) throw std::invalid_argument("depth_errors: no pixel valid in both maps");
}

EvalReport evaluate(const Array3<double>& pred_occupancy, const Array3<double>& gt_occupancy,
                    const std::vector<Eigen::Vector3d>& pred_points,
                    const std::vector<Eigen::Vector3d>& gt_points, const DepthMap& pred_depth,
                    const DepthMap& gt_depth, double lambda_v, double lambda_d) {
  EvalReport report;
  report.bce = voxel_bce(pred_occupancy, gt_occupancy);
  report.depth_l1 = depth_l1(pred_depth, gt_depth);
  const DepthMetrics dm = depth_metrics(pred_depth, gt_depth);
  report.mae = dm.mae;
  report.rmse = dm.rmse;
  report.abs_rel = dm.abs_rel;
  report.n_valid_pixels = dm.n_valid;
  const ChamferResult cr = chamfer(pred_points, gt_points);
  report.cd = cr.cd;
  report.cd_diag = cr.cd_diag;
  report.composite = lambda_v * report.bce + lambda_d * report.depth_l1;
  return report;
}

}  // namespace rfscene
