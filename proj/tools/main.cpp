// SPDX-License-Identifier: Apache-2.0
// Command line front end: scene generation, the simulation/imaging/fusion/
// reconstruction stages, metric evaluation, and the end-to-end pipeline.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rfscene/config.hpp"
#include "rfscene/io.hpp"
#include "rfscene/parallel.hpp"
#include "rfscene/pipeline.hpp"
#include "rfscene/random.hpp"
#include "rfscene/version.hpp"

namespace {

struct StageFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> frames;
  bool no_noise = false;
  int threads = 0;
};

void add_stage_flags(CLI::App* cmd, StageFlags& f) {
  cmd->add_option("--config", f.config_path, "Pipeline configuration JSON");
  cmd->add_option("--seed", f.seed, "Master seed override");
  cmd->add_option("--out", f.out, "Run directory override");
  cmd->add_option("--frames", f.frames, "Frame count override");
  cmd->add_flag("--no-noise", f.no_noise, "Disable receiver noise");
  cmd->add_option("--threads", f.threads,
                  "Worker thread count (default: RFSCENE_THREADS or all cores)");
}

rfscene::PipelineConfig effective_config(const StageFlags& f) {
  rfscene::PipelineConfig cfg;
  if (!f.config_path.empty()) cfg = rfscene::load_config(f.config_path);
  rfscene::RunOverrides o;
  o.seed = f.seed;
  o.frames = f.frames;
  o.out_dir = f.out;
  o.no_noise = f.no_noise;
  cfg = rfscene::apply_overrides(cfg, o);
  if (f.threads > 0) rfscene::set_thread_count(f.threads);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rfscene: OFDM sensing simulation and 3D reconstruction"};
  app.set_version_flag("--version", rfscene::kVersion);
  app.require_subcommand(1);

  // scene gen
  auto* scene_cmd = app.add_subcommand("scene", "Scene utilities");
  scene_cmd->require_subcommand(1);
  auto* scene_gen = scene_cmd->add_subcommand("gen", "Generate a preset scene as JSON");
  std::string gen_preset = "cluttered";
  std::uint64_t gen_seed = 1;
  std::string gen_out = "scene.json";
  scene_gen->add_option("--preset", gen_preset, "corridor | room | cluttered");
  scene_gen->add_option("--seed", gen_seed, "Generator seed");
  scene_gen->add_option("--out", gen_out, "Output file");

  StageFlags simulate_f, image_f, fuse_f, reconstruct_f, eval_f, pipeline_f;
  auto* simulate =
      app.add_subcommand("simulate", "Synthesize echoes and ground truth for every frame");
  add_stage_flags(simulate, simulate_f);
  auto* image = app.add_subcommand("image", "Beamform impulse responses into volumes");
  add_stage_flags(image, image_f);
  auto* fuse = app.add_subcommand("fuse", "Fuse per-frame volumes across poses");
  add_stage_flags(fuse, fuse_f);
  auto* reconstruct = app.add_subcommand("reconstruct", "Extract occupancy and depth maps");
  add_stage_flags(reconstruct, reconstruct_f);
  auto* eval = app.add_subcommand("eval", "Score reconstructions against ground truth");
  add_stage_flags(eval, eval_f);
  std::string eval_pred, eval_gt;
  eval->add_option("--pred", eval_pred, "Reconstruction directory (default <out>/recon)");
  eval->add_option("--gt", eval_gt, "Ground-truth directory (default <out>/gt)");
  auto* pipeline = app.add_subcommand("pipeline", "Run every stage and write the manifest");
  add_stage_flags(pipeline, pipeline_f);

  CLI11_PARSE(app, argc, argv);

  try {
    if (scene_gen->parsed()) {
      const rfscene::Scene scene =
          rfscene::make_preset_scene(gen_preset, rfscene::derive_seed(gen_seed, "scene"));
      rfscene::write_scene_json(gen_out, scene);
      std::printf("wrote %s (%zu walls, %zu scatterers)\n", gen_out.c_str(), scene.walls.size(),
                  scene.scatterers.size());
    } else if (simulate->parsed()) {
      rfscene::run_simulate(effective_config(simulate_f));
    } else if (image->parsed()) {
      rfscene::run_image(effective_config(image_f));
    } else if (fuse->parsed()) {
      rfscene::run_fuse_stage(effective_config(fuse_f));
    } else if (reconstruct->parsed()) {
      rfscene::run_reconstruct(effective_config(reconstruct_f));
    } else if (eval->parsed()) {
      rfscene::run_eval(effective_config(eval_f), eval_pred, eval_gt);
    } else if (pipeline->parsed()) {
      const rfscene::PipelineConfig cfg = effective_config(pipeline_f);
      rfscene::run_pipeline(cfg);
      std::printf("run complete: %s\n", cfg.out_dir.c_str());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
