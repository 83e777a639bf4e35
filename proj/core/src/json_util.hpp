// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.
//
// Internal JSON helpers shared by the serialization and config translation
// units. Not installed.

#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "rfscene/geometry.hpp"
#include "rfscene/ofdm.hpp"
#include "rfscene/types.hpp"

namespace rfscene::detail {

using nlohmann::json;

// Strict-parsing guard: every key of `obj` must appear in `allowed`.
inline void require_keys(const json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) {
    throw std::invalid_argument("expected a JSON object at " + path);
  }
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument("unknown key \"" + item.key() + "\" at " + path);
    }
  }
}

inline json to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }
inline json to_json(const Eigen::Vector2d& v) { return json::array({v.x(), v.y()}); }

inline Eigen::Vector3d vec3_from(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument("expected a 3-element array at " + path);
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline Eigen::Vector2d vec2_from(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("expected a 2-element array at " + path);
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const Pose& p) {
  json rot = json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rot.push_back(p.rotation(r, c));
  }
  return json{{"rotation", rot}, {"translation", to_json(p.translation)}};
}

inline Pose pose_from(const json& j, const std::string& path) {
  require_keys(j, path, {"rotation", "translation"});
  const auto& rot = j.at("rotation");
  if (!rot.is_array() || rot.size() != 9) {
    throw std::invalid_argument("expected a 9-element rotation at " + path + ".rotation");
  }
  Pose p;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) p.rotation(r, c) = rot[3 * r + c].get<double>();
  }
  p.translation = vec3_from(j.at("translation"), path + ".translation");
  return p;
}

inline json to_json(const GridSpec& g) {
  return json{{"dims", json::array({g.dims[0], g.dims[1], g.dims[2]})},
              {"voxel_size", g.voxel_size},
              {"origin", to_json(g.origin)}};
}

inline GridSpec grid_from(const json& j, const std::string& path) {
  require_keys(j, path, {"dims", "voxel_size", "origin"});
  GridSpec g;
  if (j.contains("dims")) {
    const auto& d = j.at("dims");
    if (!d.is_array() || d.size() != 3) {
      throw std::invalid_argument("expected a 3-element array at " + path + ".dims");
    }
    g.dims = {d[0].get<int>(), d[1].get<int>(), d[2].get<int>()};
  }
  if (j.contains("voxel_size")) g.voxel_size = j.at("voxel_size").get<double>();
  if (j.contains("origin")) g.origin = vec3_from(j.at("origin"), path + ".origin");
  return g;
}

inline json to_json(const OfdmConfig& c) {
  json j{{"fft_size", c.fft_size},
         {"valid_subcarriers", c.valid_subcarriers},
         {"bandwidth_hz", c.bandwidth_hz},
         {"carrier_hz", c.carrier_hz}};
  if (c.noise_snr_db) {
    j["noise_snr_db"] = *c.noise_snr_db;
  } else {
    j["noise_snr_db"] = nullptr;
  }
  return j;
}

inline OfdmConfig ofdm_from(const json& j, const std::string& path) {
  require_keys(j, path,
               {"fft_size", "valid_subcarriers", "bandwidth_hz", "carrier_hz", "noise_snr_db"});
  OfdmConfig c;
  if (j.contains("fft_size")) c.fft_size = j.at("fft_size").get<int>();
  if (j.contains("valid_subcarriers")) c.valid_subcarriers = j.at("valid_subcarriers").get<int>();
  if (j.contains("bandwidth_hz")) c.bandwidth_hz = j.at("bandwidth_hz").get<double>();
  if (j.contains("carrier_hz")) c.carrier_hz = j.at("carrier_hz").get<double>();
  if (j.contains("noise_snr_db")) {
    if (j.at("noise_snr_db").is_null()) {
      c.noise_snr_db.reset();
    } else {
      c.noise_snr_db = j.at("noise_snr_db").get<double>();
    }
  }
  return c;
}

json parse_json_text(const std::string& text, const std::string& what);

}  // namespace rfscene::detail
