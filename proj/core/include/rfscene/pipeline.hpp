// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.
//
// End-to-end run orchestration. Each stage communicates through files in the
// run directory, so the full pipeline behaves exactly like invoking the
// stages one by one, and identical configurations yield byte-identical run
// directories regardless of thread count.
//
// Run directory layout:
//   config.json                       materialized configuration
//   scene.json                        scene actually simulated
//   trajectory.csv                    sensor poses
//   gt/gt_depth_NNN.csv               ground-truth range images per frame
//   gt/gt_voxel_NNN.{f32,json}        ground-truth occupancy per frame
//   frames/cir_NNN.{f32,json}         per-pair impulse responses
//   frames/radio_NNN.{f32,json}       beamformed polar frames
//   frames/volume_NNN.{f32,json}      Cartesian intensity volumes
//   fused/fused_NNN.{f32,json}        fused feature volumes per reference
//   recon/voxel_NNN.{f32,json,ply}    occupancy head outputs
//   recon/depth_NNN.{csv,pgm}         depth head outputs
//   eval/report.json                  metrics per reference and averaged
//   eval/cdf_abs.csv, eval/cdf_rel.csv pooled depth error distributions
//   manifest.json                     config hash, seed, file sizes + hashes

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rfscene/config.hpp"
#include "rfscene/scene.hpp"

namespace rfscene {

// Seeded scene generators.
//   corridor: two parallel side walls, a floor, and scattered box corners.
//   room: exactly four walls.
//   cluttered: room walls plus 10 to 30 random scatterers.
Scene make_preset_scene(const std::string& preset, std::uint64_t seed);

// Scene from the config: preset generation (seeded by cfg.seed) or file load.
Scene resolve_scene(const PipelineConfig& cfg);

// Command-line style overrides applied on top of a loaded config.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> frames;
  std::optional<std::string> out_dir;
  bool no_noise = false;
};

PipelineConfig apply_overrides(PipelineConfig cfg, const RunOverrides& o);

// Stages. Each writes its slice of the run directory and assumes the
// upstream slices exist (run_simulate creates the directory skeleton).
void run_simulate(const PipelineConfig& cfg);    // scene, trajectory, gt/, frames/cir_*
void run_image(const PipelineConfig& cfg);       // frames/radio_*, frames/volume_*
void run_fuse_stage(const PipelineConfig& cfg);  // fused/*
void run_reconstruct(const PipelineConfig& cfg); // recon/*
void run_eval(const PipelineConfig& cfg, const std::string& pred_dir = "",
              const std::string& gt_dir = "");   // eval/*
void write_run_manifest(const PipelineConfig& cfg);

// All stages in order plus the manifest.
void run_pipeline(const PipelineConfig& cfg);

}  // namespace rfscene
