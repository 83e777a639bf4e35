// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.

#include "rfscene/config.hpp"

#include <cstdio>
#include <stdexcept>

#include "json_util.hpp"
#include "rfscene/io.hpp"
#include "rfscene/random.hpp"

namespace rfscene {

namespace {

using detail::json;

std::string kind_to_string(TrajectoryKind k) {
  switch (k) {
    case TrajectoryKind::line: return "line";
    case TrajectoryKind::arc: return "arc";
    case TrajectoryKind::random_walk: return "random_walk";
  }
  throw std::logic_error("unreachable trajectory kind");
}

TrajectoryKind kind_from_string(const std::string& s) {
  if (s == "line") return TrajectoryKind::line;
  if (s == "arc") return TrajectoryKind::arc;
  if (s == "random_walk") return TrajectoryKind::random_walk;
  throw std::invalid_argument("trajectory.kind: unknown value \"" + s + "\"");
}

std::vector<Eigen::Vector3d> positions_from(const json& j, const std::string& path) {
  std::vector<Eigen::Vector3d> out;
  if (!j.is_array()) throw std::invalid_argument("expected an array at " + path);
  int i = 0;
  for (const auto& p : j) {
    out.push_back(detail::vec3_from(p, path + "[" + std::to_string(i++) + "]"));
  }
  return out;
}

json positions_to_json(const std::vector<Eigen::Vector3d>& v) {
  json j = json::array();
  for (const auto& p : v) j.push_back(detail::to_json(p));
  return j;
}

}  // namespace

DirectionFormula PipelineConfig::direction() const {
  if (direction_formula == "unit-norm") return DirectionFormula::unit_y_boresight;
  if (direction_formula == "paper-literal") return DirectionFormula::trig_x_boresight;
  throw std::invalid_argument("direction_formula: unknown value \"" + direction_formula + "\"");
}

AntennaArray PipelineConfig::make_array() const {
  if (!array.tx_positions.empty() || !array.rx_positions.empty()) {
    if (array.tx_positions.empty() || array.rx_positions.empty()) {
      throw std::invalid_argument("array: explicit layouts need both tx and rx positions");
    }
    AntennaArray a;
    a.tx_positions = array.tx_positions;
    a.rx_positions = array.rx_positions;
    a.wavelength = ofdm.wavelength();
    return a;
  }
  return make_uniform_array(array.n_tx, array.n_rx, ofdm.wavelength(), array.spacing_factor);
}

SphericalGrid PipelineConfig::make_spherical() const {
  return make_spherical_grid(spherical_grid.az_min_deg, spherical_grid.az_max_deg,
                             spherical_grid.az_step_deg, spherical_grid.el_min_deg,
                             spherical_grid.el_max_deg, spherical_grid.el_step_deg,
                             spherical_grid.max_range, ofdm.bandwidth_hz);
}

PipelineConfig parse_config_json(const std::string& text) {
  const json j = detail::parse_json_text(text, "config");
  detail::require_keys(j, "config",
                       {"seed", "out_dir", "scene", "trajectory", "ofdm", "array",
                        "spherical_grid", "cartesian_grid", "fusion", "encoder", "densify",
                        "heads", "lambda_v", "lambda_d", "direction_formula", "wall_sample_pitch",
                        "scatterer_radius"});
  PipelineConfig cfg;
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();

  if (j.contains("scene")) {
    const auto& s = j.at("scene");
    detail::require_keys(s, "config.scene", {"preset", "path"});
    const bool has_preset = s.contains("preset");
    const bool has_path = s.contains("path");
    if (has_preset && has_path) {
      throw std::invalid_argument("config.scene: preset and path are mutually exclusive");
    }
    if (has_path) {
      cfg.scene.path = s.at("path").get<std::string>();
      cfg.scene.preset.clear();
    } else if (has_preset) {
      cfg.scene.preset = s.at("preset").get<std::string>();
      cfg.scene.path.clear();
    }
  }

  if (j.contains("trajectory")) {
    const auto& t = j.at("trajectory");
    detail::require_keys(t, "config.trajectory", {"kind", "n_frames", "spacing_s", "speed"});
    if (t.contains("kind")) cfg.trajectory.kind = kind_from_string(t.at("kind").get<std::string>());
    if (t.contains("n_frames")) cfg.trajectory.n_frames = t.at("n_frames").get<int>();
    if (t.contains("spacing_s")) cfg.trajectory.spacing_s = t.at("spacing_s").get<double>();
    if (t.contains("speed")) cfg.trajectory.speed = t.at("speed").get<double>();
  }

  if (j.contains("ofdm")) cfg.ofdm = detail::ofdm_from(j.at("ofdm"), "config.ofdm");

  if (j.contains("array")) {
    const auto& a = j.at("array");
    detail::require_keys(a, "config.array",
                         {"n_tx", "n_rx", "spacing_factor", "tx_positions", "rx_positions"});
    if (a.contains("n_tx")) cfg.array.n_tx = a.at("n_tx").get<int>();
    if (a.contains("n_rx")) cfg.array.n_rx = a.at("n_rx").get<int>();
    if (a.contains("spacing_factor")) {
      cfg.array.spacing_factor = a.at("spacing_factor").get<double>();
    }
    if (a.contains("tx_positions")) {
      cfg.array.tx_positions = positions_from(a.at("tx_positions"), "config.array.tx_positions");
    }
    if (a.contains("rx_positions")) {
      cfg.array.rx_positions = positions_from(a.at("rx_positions"), "config.array.rx_positions");
    }
  }

  if (j.contains("spherical_grid")) {
    const auto& g = j.at("spherical_grid");
    detail::require_keys(g, "config.spherical_grid",
                         {"az_min_deg", "az_max_deg", "az_step_deg", "el_min_deg", "el_max_deg",
                          "el_step_deg", "max_range"});
    auto set = [&](const char* key, double& field) {
      if (g.contains(key)) field = g.at(key).get<double>();
    };
    set("az_min_deg", cfg.spherical_grid.az_min_deg);
    set("az_max_deg", cfg.spherical_grid.az_max_deg);
    set("az_step_deg", cfg.spherical_grid.az_step_deg);
    set("el_min_deg", cfg.spherical_grid.el_min_deg);
    set("el_max_deg", cfg.spherical_grid.el_max_deg);
    set("el_step_deg", cfg.spherical_grid.el_step_deg);
    set("max_range", cfg.spherical_grid.max_range);
  }

  if (j.contains("cartesian_grid")) {
    cfg.cartesian_grid = detail::grid_from(j.at("cartesian_grid"), "config.cartesian_grid");
  }

  if (j.contains("fusion")) {
    const auto& f = j.at("fusion");
    detail::require_keys(f, "config.fusion",
                         {"sigma", "radius", "eta", "epsilon", "skip_reliability"});
    if (f.contains("sigma")) cfg.fusion.sigma = f.at("sigma").get<double>();
    if (f.contains("radius")) cfg.fusion.radius = f.at("radius").get<int>();
    if (f.contains("eta")) cfg.fusion.eta = f.at("eta").get<double>();
    if (f.contains("epsilon")) cfg.fusion.epsilon = f.at("epsilon").get<double>();
    if (f.contains("skip_reliability")) {
      cfg.fusion.skip_reliability = f.at("skip_reliability").get<double>();
    }
  }

  if (j.contains("encoder")) {
    const auto& e = j.at("encoder");
    detail::require_keys(e, "config.encoder", {"gain", "bias"});
    if (e.contains("gain")) cfg.encoder.gain = e.at("gain").get<double>();
    if (e.contains("bias")) cfg.encoder.bias = e.at("bias").get<double>();
  }

  if (j.contains("densify")) {
    const auto& d = j.at("densify");
    detail::require_keys(d, "config.densify", {"passes", "sigma", "radius"});
    if (d.contains("passes")) cfg.densify.passes = d.at("passes").get<int>();
    if (d.contains("sigma")) cfg.densify.sigma = d.at("sigma").get<double>();
    if (d.contains("radius")) cfg.densify.radius = d.at("radius").get<int>();
  }

  if (j.contains("heads")) {
    const auto& h = j.at("heads");
    detail::require_keys(h, "config.heads", {"tau_occ", "tau_d", "depth_height", "depth_width"});
    if (h.contains("tau_occ")) cfg.heads.tau_occ = h.at("tau_occ").get<double>();
    if (h.contains("tau_d")) cfg.heads.tau_d = h.at("tau_d").get<double>();
    if (h.contains("depth_height")) cfg.heads.depth_height = h.at("depth_height").get<int>();
    if (h.contains("depth_width")) cfg.heads.depth_width = h.at("depth_width").get<int>();
  }

  if (j.contains("lambda_v")) cfg.lambda_v = j.at("lambda_v").get<double>();
  if (j.contains("lambda_d")) cfg.lambda_d = j.at("lambda_d").get<double>();
  if (j.contains("direction_formula")) {
    cfg.direction_formula = j.at("direction_formula").get<std::string>();
  }
  if (j.contains("wall_sample_pitch")) {
    cfg.wall_sample_pitch = j.at("wall_sample_pitch").get<double>();
  }
  if (j.contains("scatterer_radius")) {
    cfg.scatterer_radius = j.at("scatterer_radius").get<double>();
  }

  cfg.direction();  // validates the formula name early
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  return parse_config_json(read_text_file(path));
}

std::string serialize_config(const PipelineConfig& cfg) {
  json scene;
  if (!cfg.scene.path.empty()) {
    scene = json{{"path", cfg.scene.path}};
  } else {
    scene = json{{"preset", cfg.scene.preset}};
  }
  json j{
      {"seed", cfg.seed},
      {"out_dir", cfg.out_dir},
      {"scene", scene},
      {"trajectory",
       {{"kind", kind_to_string(cfg.trajectory.kind)},
        {"n_frames", cfg.trajectory.n_frames},
        {"spacing_s", cfg.trajectory.spacing_s},
        {"speed", cfg.trajectory.speed}}},
      {"ofdm", detail::to_json(cfg.ofdm)},
      {"array",
       {{"n_tx", cfg.array.n_tx},
        {"n_rx", cfg.array.n_rx},
        {"spacing_factor", cfg.array.spacing_factor},
        {"tx_positions", positions_to_json(cfg.array.tx_positions)},
        {"rx_positions", positions_to_json(cfg.array.rx_positions)}}},
      {"spherical_grid",
       {{"az_min_deg", cfg.spherical_grid.az_min_deg},
        {"az_max_deg", cfg.spherical_grid.az_max_deg},
        {"az_step_deg", cfg.spherical_grid.az_step_deg},
        {"el_min_deg", cfg.spherical_grid.el_min_deg},
        {"el_max_deg", cfg.spherical_grid.el_max_deg},
        {"el_step_deg", cfg.spherical_grid.el_step_deg},
        {"max_range", cfg.spherical_grid.max_range}}},
      {"cartesian_grid", detail::to_json(cfg.cartesian_grid)},
      {"fusion",
       {{"sigma", cfg.fusion.sigma},
        {"radius", cfg.fusion.radius},
        {"eta", cfg.fusion.eta},
        {"epsilon", cfg.fusion.epsilon},
        {"skip_reliability", cfg.fusion.skip_reliability}}},
      {"encoder", {{"gain", cfg.encoder.gain}, {"bias", cfg.encoder.bias}}},
      {"densify",
       {{"passes", cfg.densify.passes},
        {"sigma", cfg.densify.sigma},
        {"radius", cfg.densify.radius}}},
      {"heads",
       {{"tau_occ", cfg.heads.tau_occ},
        {"tau_d", cfg.heads.tau_d},
        {"depth_height", cfg.heads.depth_height},
        {"depth_width", cfg.heads.depth_width}}},
      {"lambda_v", cfg.lambda_v},
      {"lambda_d", cfg.lambda_d},
      {"direction_formula", cfg.direction_formula},
      {"wall_sample_pitch", cfg.wall_sample_pitch},
      {"scatterer_radius", cfg.scatterer_radius},
  };
  return j.dump(2) + "\n";
}

std::string config_hash_hex(const PipelineConfig& cfg) {
  const std::string text = serialize_config(cfg);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(text.data(), text.size())));
  return buf;
}

}  // namespace rfscene
