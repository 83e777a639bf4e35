// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.

#include "rfscene/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "json_util.hpp"
#include "rfscene/fusion.hpp"
#include "rfscene/imaging.hpp"
#include "rfscene/io.hpp"
#include "rfscene/metrics.hpp"
#include "rfscene/ofdm.hpp"
#include "rfscene/random.hpp"
#include "rfscene/reconstruct.hpp"
#include "rfscene/version.hpp"

namespace rfscene {

namespace fs = std::filesystem;

namespace {

using detail::json;

std::string frame_tag(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%03d", i);
  return buf;
}

Fov fov_of(const PipelineConfig& cfg) {
  return Fov{deg2rad(cfg.spherical_grid.az_min_deg), deg2rad(cfg.spherical_grid.az_max_deg),
             deg2rad(cfg.spherical_grid.el_min_deg), deg2rad(cfg.spherical_grid.el_max_deg)};
}

Trajectory load_trajectory(const PipelineConfig& cfg) {
  return read_trajectory_csv(cfg.out_dir + "/trajectory.csv");
}

Wall make_wall(const Eigen::Vector3d& point, const Eigen::Vector3d& normal,
               const Eigen::Vector2d& extent, double reflectivity = 0.35) {
  Wall w;
  w.point = point;
  w.normal = normal.normalized();
  w.extent = extent;
  w.reflectivity = reflectivity;
  return w;
}

}  // namespace

Scene make_preset_scene(const std::string& preset, std::uint64_t seed) {
  Rng rng(mix64(seed));
  Scene scene;
  scene.bounds = {{-8, -1, -3}, {8, 8, 3}};
  if (preset == "corridor") {
    scene.walls.push_back(make_wall({-2.0, 3.5, 0.0}, {1, 0, 0}, {3.5, 1.5}));
    scene.walls.push_back(make_wall({2.0, 3.5, 0.0}, {-1, 0, 0}, {3.5, 1.5}));
    scene.walls.push_back(make_wall({0.0, 3.5, -1.5}, {0, 0, 1}, {3.5, 2.0}));
    const int n = static_cast<int>(rng.uniform_int(4, 8));
    for (int i = 0; i < n; ++i) {
      Scatterer s;
      s.position = {rng.uniform(-1.6, 1.6), rng.uniform(1.2, 6.2), rng.uniform(-1.2, 1.2)};
      s.reflectivity = rng.uniform(0.6, 1.4);
      scene.scatterers.push_back(s);
    }
  } else if (preset == "room") {
    scene.walls.push_back(make_wall({0.0, 6.0, 0.0}, {0, -1, 0}, {3.0, 1.8}));
    scene.walls.push_back(make_wall({-3.0, 3.0, 0.0}, {1, 0, 0}, {3.0, 1.8}));
    scene.walls.push_back(make_wall({3.0, 3.0, 0.0}, {-1, 0, 0}, {3.0, 1.8}));
    scene.walls.push_back(make_wall({0.0, 3.0, -1.8}, {0, 0, 1}, {3.0, 3.0}));
  } else if (preset == "cluttered") {
    scene = make_preset_scene("room", seed);
    const int n = static_cast<int>(rng.uniform_int(10, 30));
    for (int i = 0; i < n; ++i) {
      Scatterer s;
      s.position = {rng.uniform(-2.6, 2.6), rng.uniform(0.8, 5.4), rng.uniform(-1.5, 1.5)};
      s.reflectivity = rng.uniform(0.5, 1.5);
      scene.scatterers.push_back(s);
    }
  } else {
    throw std::invalid_argument("unknown scene preset \"" + preset + "\"");
  }
  return scene;
}

Scene resolve_scene(const PipelineConfig& cfg) {
  if (!cfg.scene.path.empty()) return read_scene_json(cfg.scene.path);
  return make_preset_scene(cfg.scene.preset, derive_seed(cfg.seed, "scene"));
}

PipelineConfig apply_overrides(PipelineConfig cfg, const RunOverrides& o) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.frames) cfg.trajectory.n_frames = *o.frames;
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (o.no_noise) cfg.ofdm.noise_snr_db.reset();
  return cfg;
}

void run_simulate(const PipelineConfig& cfg) {
  fs::create_directories(cfg.out_dir + "/gt");
  fs::create_directories(cfg.out_dir + "/frames");
  write_text_file(cfg.out_dir + "/config.json", serialize_config(cfg));

  const Scene scene = resolve_scene(cfg);
  write_scene_json(cfg.out_dir + "/scene.json", scene);

  const Trajectory traj =
      gen_trajectory(cfg.trajectory.kind, cfg.trajectory.n_frames, cfg.trajectory.spacing_s,
                     cfg.trajectory.speed, derive_seed(cfg.seed, "trajectory"));
  write_trajectory_csv(cfg.out_dir + "/trajectory.csv", traj);

  const AntennaArray array = cfg.make_array();
  const DirectionFormula formula = cfg.direction();
  PathParams path_params;
  path_params.max_range = cfg.spherical_grid.max_range;
  path_params.fov = fov_of(cfg);
  path_params.wall_sample_pitch = cfg.wall_sample_pitch;

  // Poses are reused exactly as later stages will read them back, so the
  // whole chain sees one consistent trajectory.
  const Trajectory poses = read_trajectory_csv(cfg.out_dir + "/trajectory.csv");
  for (int f = 0; f < cfg.trajectory.n_frames; ++f) {
    const Pose& pose = poses.poses[f];
    const auto paths = enumerate_paths(scene, pose, path_params);
    const std::uint64_t frame_seed = derive_seed(cfg.seed, "frame", static_cast<std::uint64_t>(f));
    const PairSpectrum symbols =
        gen_symbols(array.tx_positions.size(), array.rx_positions.size(), cfg.ofdm, frame_seed);
    const PairSpectrum rx = synthesize_rx(paths, array, pose, symbols, cfg.ofdm, frame_seed);
    const PairSpectrum h = estimate_channel(rx, symbols, cfg.ofdm);
    const CirTensor cir = compute_cir(h, cfg.ofdm);
    write_cir(cfg.out_dir + "/frames/cir_" + frame_tag(f), cir, cfg.ofdm);

    const DepthMap gt_depth =
        render_gt_depth(scene, pose, cfg.heads.depth_height, cfg.heads.depth_width, fov_of(cfg),
                        cfg.scatterer_radius, formula);
    write_depth_csv(cfg.out_dir + "/gt/gt_depth_" + frame_tag(f) + ".csv", gt_depth);

    VoxelGrid gt_vox;
    gt_vox.occupancy = voxelize_gt(scene, pose, cfg.cartesian_grid, cfg.scatterer_radius);
    gt_vox.grid = cfg.cartesian_grid;
    gt_vox.pose = pose;
    write_voxel_grid(cfg.out_dir + "/gt/gt_voxel_" + frame_tag(f), gt_vox);
  }
}

void run_image(const PipelineConfig& cfg) {
  const Trajectory traj = load_trajectory(cfg);
  const SphericalGrid spherical = cfg.make_spherical();
  const AntennaArray array = cfg.make_array();
  const DirectionFormula formula = cfg.direction();
  const SteeringTable table = make_steering_table(spherical, array, formula);
  for (int f = 0; f < cfg.trajectory.n_frames; ++f) {
    const CirTensor cir = read_cir(cfg.out_dir + "/frames/cir_" + frame_tag(f));
    const RadioFrame radio = beamform_frame(cir, spherical, table, traj.poses[f]);
    write_radio_frame(cfg.out_dir + "/frames/radio_" + frame_tag(f), radio);
    const CartesianVolume volume = to_cartesian(radio, cfg.cartesian_grid, formula);
    write_volume(cfg.out_dir + "/frames/volume_" + frame_tag(f), volume);
  }
}

void run_fuse_stage(const PipelineConfig& cfg) {
  fs::create_directories(cfg.out_dir + "/fused");
  std::vector<EncodedFrame> encoded;
  for (int f = 0; f < cfg.trajectory.n_frames; ++f) {
    const CartesianVolume volume = read_volume(cfg.out_dir + "/frames/volume_" + frame_tag(f));
    encoded.push_back(encode(volume, cfg.encoder));
  }
  for (int r = 0; r < cfg.trajectory.n_frames; ++r) {
    FeatureVolume fused = fuse(encoded, static_cast<std::size_t>(r), cfg.fusion);
    fused = densify(fused, cfg.densify.passes, cfg.densify.sigma, cfg.densify.radius);
    write_feature_volume(cfg.out_dir + "/fused/fused_" + frame_tag(r), fused);
  }
}

void run_reconstruct(const PipelineConfig& cfg) {
  fs::create_directories(cfg.out_dir + "/recon");
  const DirectionFormula formula = cfg.direction();
  for (int f = 0; f < cfg.trajectory.n_frames; ++f) {
    const FeatureVolume fused = read_feature_volume(cfg.out_dir + "/fused/fused_" + frame_tag(f));
    const VoxelGrid vox = voxel_head(fused);
    write_voxel_grid(cfg.out_dir + "/recon/voxel_" + frame_tag(f), vox);
    write_ply(cfg.out_dir + "/recon/voxel_" + frame_tag(f) + ".ply",
              occupied_centers(vox, cfg.heads.tau_occ));
    const DepthMap depth = depth_head(fused, cfg.heads.depth_height, cfg.heads.depth_width,
                                      fov_of(cfg), cfg.heads.tau_d, formula);
    write_depth_csv(cfg.out_dir + "/recon/depth_" + frame_tag(f) + ".csv", depth);
    write_depth_pgm(cfg.out_dir + "/recon/depth_" + frame_tag(f) + ".pgm", depth);
  }
}

void run_eval(const PipelineConfig& cfg, const std::string& pred_dir, const std::string& gt_dir) {
  fs::create_directories(cfg.out_dir + "/eval");
  const std::string pred = pred_dir.empty() ? cfg.out_dir + "/recon" : pred_dir;
  const std::string gt = gt_dir.empty() ? cfg.out_dir + "/gt" : gt_dir;

  json frames = json::array();
  double sum_bce = 0, sum_l1 = 0, sum_mae = 0, sum_rmse = 0, sum_absrel = 0, sum_comp = 0;
  double sum_cd = 0, sum_cd_diag = 0;
  int n_cd = 0;
  std::vector<double> pooled_abs, pooled_rel;

  for (int f = 0; f < cfg.trajectory.n_frames; ++f) {
    const VoxelGrid vox = read_voxel_grid(pred + "/voxel_" + frame_tag(f));
    const VoxelGrid gt_vox = read_voxel_grid(gt + "/gt_voxel_" + frame_tag(f));
    const DepthMap depth = read_depth_csv(pred + "/depth_" + frame_tag(f) + ".csv");
    const DepthMap gt_depth = read_depth_csv(gt + "/gt_depth_" + frame_tag(f) + ".csv");

    const double bce = voxel_bce(vox.occupancy, gt_vox.occupancy);
    const double l1 = depth_l1(depth, gt_depth);
    const DepthMetrics dm = depth_metrics(depth, gt_depth);
    const double composite = cfg.lambda_v * bce + cfg.lambda_d * l1;

    json row{{"frame", f},          {"bce", bce},
             {"depth_l1", l1},      {"mae", dm.mae},
             {"rmse", dm.rmse},     {"abs_rel", dm.abs_rel},
             {"composite", composite}, {"n_valid_pixels", dm.n_valid}};

    // Chamfer distance needs both point sets non-empty; a frame with an
    // empty reconstruction is reported with nulls instead of aborting.
    const auto pred_pts = occupied_centers(vox, cfg.heads.tau_occ);
    const auto gt_pts = occupied_centers(gt_vox, 0.5);
    if (!pred_pts.empty() && !gt_pts.empty()) {
      const ChamferResult cr = chamfer(pred_pts, gt_pts);
      row["cd"] = cr.cd;
      row["cd_diag"] = cr.cd_diag;
      sum_cd += cr.cd;
      sum_cd_diag += cr.cd_diag;
      ++n_cd;
    } else {
      row["cd"] = nullptr;
      row["cd_diag"] = nullptr;
    }
    frames.push_back(row);

    sum_bce += bce;
    sum_l1 += l1;
    sum_mae += dm.mae;
    sum_rmse += dm.rmse;
    sum_absrel += dm.abs_rel;
    sum_comp += composite;

    std::vector<double> abs_err, rel_err;
    depth_errors(depth, gt_depth, abs_err, rel_err);
    pooled_abs.insert(pooled_abs.end(), abs_err.begin(), abs_err.end());
    pooled_rel.insert(pooled_rel.end(), rel_err.begin(), rel_err.end());
  }

  const double n = static_cast<double>(cfg.trajectory.n_frames);
  json mean{{"bce", sum_bce / n},        {"depth_l1", sum_l1 / n},
            {"mae", sum_mae / n},        {"rmse", sum_rmse / n},
            {"abs_rel", sum_absrel / n}, {"composite", sum_comp / n}};
  if (n_cd > 0) {
    mean["cd"] = sum_cd / n_cd;
    mean["cd_diag"] = sum_cd_diag / n_cd;
  } else {
    mean["cd"] = nullptr;
    mean["cd_diag"] = nullptr;
  }
  json report{{"frames", frames},
              {"mean", mean},
              {"lambda_v", cfg.lambda_v},
              {"lambda_d", cfg.lambda_d}};
  write_text_file(cfg.out_dir + "/eval/report.json", report.dump(2) + "\n");

  if (!pooled_abs.empty()) {
    write_cdf_csv(cfg.out_dir + "/eval/cdf_abs.csv", error_cdf(pooled_abs, 100));
  }
  if (!pooled_rel.empty()) {
    write_cdf_csv(cfg.out_dir + "/eval/cdf_rel.csv", error_cdf(pooled_rel, 100));
  }
}

void write_run_manifest(const PipelineConfig& cfg) {
  std::vector<std::string> paths;
  for (const auto& entry : fs::recursive_directory_iterator(cfg.out_dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string rel = fs::relative(entry.path(), cfg.out_dir).generic_string();
    if (rel == "manifest.json") continue;
    paths.push_back(rel);
  }
  std::sort(paths.begin(), paths.end());

  json files = json::array();
  for (const auto& rel : paths) {
    const std::string full = cfg.out_dir + "/" + rel;
    files.push_back({{"path", rel},
                     {"bytes", static_cast<std::uint64_t>(fs::file_size(full))},
                     {"fnv1a64", file_hash_hex(full)}});
  }
  json manifest{{"toolkit_version", kVersion},
                {"seed", cfg.seed},
                {"config_hash", config_hash_hex(cfg)},
                {"files", files}};
  write_text_file(cfg.out_dir + "/manifest.json", manifest.dump(2) + "\n");
}

void run_pipeline(const PipelineConfig& cfg) {
  run_simulate(cfg);
  run_image(cfg);
  run_fuse_stage(cfg);
  run_reconstruct(cfg);
  run_eval(cfg);
  write_run_manifest(cfg);
}

}  // namespace rfscene
