// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.

#include "rfscene/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json_util.hpp"
#include "rfscene/random.hpp"

namespace rfscene {

namespace {

using detail::json;

void append_f32(std::string& buf, float v) {
  const auto u = std::bit_cast<std::uint32_t>(v);
  buf.push_back(static_cast<char>(u & 0xff));
  buf.push_back(static_cast<char>((u >> 8) & 0xff));
  buf.push_back(static_cast<char>((u >> 16) & 0xff));
  buf.push_back(static_cast<char>((u >> 24) & 0xff));
}

float read_f32(const std::string& buf, std::size_t i) {
  const auto b = [&](std::size_t k) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(buf[i + k]));
  };
  const std::uint32_t u = b(0) | (b(1) << 8) | (b(2) << 16) | (b(3) << 24);
  return std::bit_cast<float>(u);
}

void write_binary_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_binary_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Raw samples + sidecar. `expected` guards against shape/payload mismatch.
void write_f32_payload(const std::string& path_base, const std::vector<float>& samples,
                       const json& sidecar) {
  std::string bytes;
  bytes.reserve(samples.size() * 4);
  for (float v : samples) append_f32(bytes, v);
  write_binary_file(path_base + ".f32", bytes);
  write_text_file(path_base + ".json", sidecar.dump(2) + "\n");
}

std::vector<float> read_f32_payload(const std::string& path_base, std::size_t expected) {
  const std::string bytes = read_binary_file(path_base + ".f32");
  if (bytes.size() != expected * 4) {
    throw std::runtime_error(path_base + ".f32: expected " + std::to_string(expected * 4) +
                             " bytes, found " + std::to_string(bytes.size()));
  }
  std::vector<float> samples(expected);
  for (std::size_t i = 0; i < expected; ++i) samples[i] = read_f32(bytes, 4 * i);
  return samples;
}

json read_sidecar(const std::string& path_base) {
  return detail::parse_json_text(read_text_file(path_base + ".json"), path_base + ".json");
}

std::size_t shape_product(const json& shape) {
  std::size_t n = 1;
  for (const auto& d : shape) n *= d.get<std::size_t>();
  return n;
}

}  // namespace

namespace detail {

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(what + ": " + e.what());
  }
}

}  // namespace detail

void write_cir(const std::string& path_base, const CirTensor& cir, const OfdmConfig& cfg) {
  std::vector<float> samples;
  samples.reserve(cir.size() * 2);
  for (std::size_t i = 0; i < cir.size(); ++i) {
    samples.push_back(static_cast<float>(cir[i].real()));
    samples.push_back(static_cast<float>(cir[i].imag()));
  }
  json sidecar{{"kind", "cir"},
               {"dtype", "complex64"},
               {"shape", json::array({cir.dim0(), cir.dim1(), cir.dim2()})},
               {"ofdm", detail::to_json(cfg)}};
  write_f32_payload(path_base, samples, sidecar);
}

CirTensor read_cir(const std::string& path_base, OfdmConfig* cfg) {
  const json sidecar = read_sidecar(path_base);
  detail::require_keys(sidecar, path_base + ".json", {"kind", "dtype", "shape", "ofdm"});
  const auto& shape = sidecar.at("shape");
  if (shape.size() != 3) throw std::runtime_error(path_base + ": expected rank-3 shape");
  if (cfg) *cfg = detail::ofdm_from(sidecar.at("ofdm"), path_base + ".json:ofdm");
  const auto samples = read_f32_payload(path_base, 2 * shape_product(shape));
  CirTensor cir(shape[0].get<std::size_t>(), shape[1].get<std::size_t>(),
                shape[2].get<std::size_t>());
  for (std::size_t i = 0; i < cir.size(); ++i) {
    cir[i] = {static_cast<double>(samples[2 * i]), static_cast<double>(samples[2 * i + 1])};
  }
  return cir;
}

namespace {

// Shared body for the three scalar-volume formats (intensity, occupancy).
template <typename Volume>
void write_scalar_volume(const std::string& path_base, const char* kind, const Array3<double>& v,
                         const Volume& meta) {
  std::vector<float> samples(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) samples[i] = static_cast<float>(v[i]);
  json sidecar{{"kind", kind},
               {"dtype", "float32"},
               {"shape", json::array({v.dim0(), v.dim1(), v.dim2()})},
               {"grid", detail::to_json(meta.grid)},
               {"pose", detail::to_json(meta.pose)}};
  write_f32_payload(path_base, samples, sidecar);
}

void read_scalar_volume(const std::string& path_base, Array3<double>& v, GridSpec& grid,
                        Pose& pose) {
  const json sidecar = read_sidecar(path_base);
  detail::require_keys(sidecar, path_base + ".json", {"kind", "dtype", "shape", "grid", "pose"});
  const auto& shape = sidecar.at("shape");
  if (shape.size() != 3) throw std::runtime_error(path_base + ": expected rank-3 shape");
  grid = detail::grid_from(sidecar.at("grid"), path_base + ".json:grid");
  pose = detail::pose_from(sidecar.at("pose"), path_base + ".json:pose");
  const auto samples = read_f32_payload(path_base, shape_product(shape));
  v = Array3<double>(shape[0].get<std::size_t>(), shape[1].get<std::size_t>(),
                     shape[2].get<std::size_t>());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(samples[i]);
}

}  // namespace

void write_volume(const std::string& path_base, const CartesianVolume& volume) {
  write_scalar_volume(path_base, "volume", volume.values, volume);
}

CartesianVolume read_volume(const std::string& path_base) {
  CartesianVolume v;
  read_scalar_volume(path_base, v.values, v.grid, v.pose);
  return v;
}

void write_voxel_grid(const std::string& path_base, const VoxelGrid& grid) {
  write_scalar_volume(path_base, "voxel_grid", grid.occupancy, grid);
}

VoxelGrid read_voxel_grid(const std::string& path_base) {
  VoxelGrid g;
  read_scalar_volume(path_base, g.occupancy, g.grid, g.pose);
  return g;
}

void write_feature_volume(const std::string& path_base, const FeatureVolume& volume) {
  const auto& v = volume.values;
  std::vector<float> samples(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) samples[i] = static_cast<float>(v[i]);
  json sidecar{{"kind", "feature_volume"},
               {"dtype", "float32"},
               {"shape", json::array({v.dim0(), v.dim1(), v.dim2(), v.dim3()})},
               {"grid", detail::to_json(volume.grid)},
               {"pose", detail::to_json(volume.pose)}};
  write_f32_payload(path_base, samples, sidecar);
}

FeatureVolume read_feature_volume(const std::string& path_base) {
  const json sidecar = read_sidecar(path_base);
  detail::require_keys(sidecar, path_base + ".json", {"kind", "dtype", "shape", "grid", "pose"});
  const auto& shape = sidecar.at("shape");
  if (shape.size() != 4) throw std::runtime_error(path_base + ": expected rank-4 shape");
  FeatureVolume out;
  out.grid = detail::grid_from(sidecar.at("grid"), path_base + ".json:grid");
  out.pose = detail::pose_from(sidecar.at("pose"), path_base + ".json:pose");
  const auto samples = read_f32_payload(path_base, shape_product(shape));
  out.values = Array4<double>(shape[0].get<std::size_t>(), shape[1].get<std::size_t>(),
                              shape[2].get<std::size_t>(), shape[3].get<std::size_t>());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = static_cast<double>(samples[i]);
  }
  return out;
}

void write_radio_frame(const std::string& path_base, const RadioFrame& frame) {
  const auto& v = frame.values;
  std::vector<float> samples(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) samples[i] = static_cast<float>(v[i]);
  json grid{{"taps", frame.grid.taps},
            {"azimuths", frame.grid.azimuths},
            {"elevations", frame.grid.elevations},
            {"range_resolution", frame.grid.range_resolution}};
  json sidecar{{"kind", "radio_frame"},
               {"dtype", "float32"},
               {"shape", json::array({v.dim0(), v.dim1(), v.dim2()})},
               {"grid", grid},
               {"pose", detail::to_json(frame.pose)}};
  write_f32_payload(path_base, samples, sidecar);
}

RadioFrame read_radio_frame(const std::string& path_base) {
  const json sidecar = read_sidecar(path_base);
  detail::require_keys(sidecar, path_base + ".json", {"kind", "dtype", "shape", "grid", "pose"});
  const auto& shape = sidecar.at("shape");
  if (shape.size() != 3) throw std::runtime_error(path_base + ": expected rank-3 shape");
  RadioFrame frame;
  const auto& g = sidecar.at("grid");
  detail::require_keys(g, path_base + ".json:grid",
                       {"taps", "azimuths", "elevations", "range_resolution"});
  frame.grid.taps = g.at("taps").get<std::vector<int>>();
  frame.grid.azimuths = g.at("azimuths").get<std::vector<double>>();
  frame.grid.elevations = g.at("elevations").get<std::vector<double>>();
  frame.grid.range_resolution = g.at("range_resolution").get<double>();
  frame.pose = detail::pose_from(sidecar.at("pose"), path_base + ".json:pose");
  const auto samples = read_f32_payload(path_base, shape_product(shape));
  frame.values = Array3<double>(shape[0].get<std::size_t>(), shape[1].get<std::size_t>(),
                                shape[2].get<std::size_t>());
  for (std::size_t i = 0; i < frame.values.size(); ++i) {
    frame.values[i] = static_cast<double>(samples[i]);
  }
  return frame;
}

void write_depth_csv(const std::string& path, const DepthMap& depth) {
  std::string out = std::to_string(depth.height) + "," + std::to_string(depth.width) + "\n";
  for (int r = 0; r < depth.height; ++r) {
    for (int c = 0; c < depth.width; ++c) {
      if (c) out += ',';
      out += format_double(depth.at(r, c));
    }
    out += '\n';
  }
  write_text_file(path, out);
}

DepthMap read_depth_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  int h = 0, w = 0;
  if (std::sscanf(line.c_str(), "%d,%d", &h, &w) != 2 || h <= 0 || w <= 0) {
    throw std::runtime_error(path + ": bad header line");
  }
  DepthMap depth(h, w);
  for (int r = 0; r < h; ++r) {
    if (!std::getline(in, line)) throw std::runtime_error(path + ": truncated");
    std::size_t pos = 0;
    for (int c = 0; c < w; ++c) {
      const std::size_t next = line.find(',', pos);
      const std::string cell = line.substr(pos, next == std::string::npos ? next : next - pos);
      depth.at(r, c) = std::stod(cell);
      if (next == std::string::npos && c + 1 < w) throw std::runtime_error(path + ": short row");
      pos = next + 1;
    }
  }
  return depth;
}

void write_depth_pgm(const std::string& path, const DepthMap& depth) {
  std::string out = "P5\n" + std::to_string(depth.width) + " " + std::to_string(depth.height) +
                    "\n65535\n";
  // Image rows run top-down while elevation rows run bottom-up, so the map is
  // flipped vertically. 16-bit PGM samples are big-endian.
  for (int r = depth.height - 1; r >= 0; --r) {
    for (int c = 0; c < depth.width; ++c) {
      const double d = depth.at(r, c);
      std::uint16_t mm = 0;
      if (DepthMap::valid(d)) {
        mm = static_cast<std::uint16_t>(std::clamp(std::llround(d * 1000.0), 0ll, 65535ll));
      }
      out.push_back(static_cast<char>(mm >> 8));
      out.push_back(static_cast<char>(mm & 0xff));
    }
  }
  write_binary_file(path, out);
}

void write_ply(const std::string& path, const std::vector<Eigen::Vector3d>& points) {
  std::string out = "ply\nformat ascii 1.0\nelement vertex " + std::to_string(points.size()) +
                    "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
  for (const auto& p : points) {
    out += format_double(p.x());
    out += ' ';
    out += format_double(p.y());
    out += ' ';
    out += format_double(p.z());
    out += '\n';
  }
  write_text_file(path, out);
}

void write_trajectory_csv(const std::string& path, const Trajectory& trajectory) {
  if (trajectory.timestamps.size() != trajectory.poses.size()) {
    throw std::invalid_argument("trajectory: timestamp/pose count mismatch");
  }
  std::string out = "t,x,y,z,yaw,pitch,roll\n";
  for (std::size_t i = 0; i < trajectory.poses.size(); ++i) {
    const auto& p = trajectory.poses[i];
    double yaw = 0, pitch = 0, roll = 0;
    euler_from_pose(p, yaw, pitch, roll);
    out += format_double(trajectory.timestamps[i]);
    for (double v : {p.translation.x(), p.translation.y(), p.translation.z(), yaw, pitch, roll}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line) || line != "t,x,y,z,yaw,pitch,roll") {
    throw std::runtime_error(path + ": bad trajectory header");
  }
  Trajectory t;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double v[7];
    std::size_t pos = 0;
    for (int i = 0; i < 7; ++i) {
      const std::size_t next = line.find(',', pos);
      if (next == std::string::npos && i + 1 < 7) throw std::runtime_error(path + ": short row");
      v[i] = std::stod(line.substr(pos, next == std::string::npos ? next : next - pos));
      pos = next + 1;
    }
    t.timestamps.push_back(v[0]);
    t.poses.push_back(pose_from_euler({v[1], v[2], v[3]}, v[4], v[5], v[6]));
  }
  if (t.poses.empty()) throw std::runtime_error(path + ": no poses");
  return t;
}

std::string scene_to_json(const Scene& scene) {
  json scatterers = json::array();
  for (const auto& s : scene.scatterers) {
    scatterers.push_back(
        {{"position", detail::to_json(s.position)}, {"reflectivity", s.reflectivity}});
  }
  json walls = json::array();
  for (const auto& w : scene.walls) {
    walls.push_back({{"point", detail::to_json(w.point)},
                     {"normal", detail::to_json(w.normal)},
                     {"extent", detail::to_json(w.extent)},
                     {"reflectivity", w.reflectivity}});
  }
  json j{{"bounds",
          {{"min", detail::to_json(scene.bounds.min)}, {"max", detail::to_json(scene.bounds.max)}}},
         {"scatterers", scatterers},
         {"walls", walls}};
  return j.dump(2) + "\n";
}

Scene parse_scene_json(const std::string& text) {
  const json j = detail::parse_json_text(text, "scene");
  detail::require_keys(j, "scene", {"bounds", "scatterers", "walls"});
  Scene scene;
  if (j.contains("bounds")) {
    detail::require_keys(j.at("bounds"), "scene.bounds", {"min", "max"});
    scene.bounds.min = detail::vec3_from(j.at("bounds").at("min"), "scene.bounds.min");
    scene.bounds.max = detail::vec3_from(j.at("bounds").at("max"), "scene.bounds.max");
  }
  if (j.contains("scatterers")) {
    int i = 0;
    for (const auto& s : j.at("scatterers")) {
      const std::string path = "scene.scatterers[" + std::to_string(i++) + "]";
      detail::require_keys(s, path, {"position", "reflectivity"});
      Scatterer sc;
      sc.position = detail::vec3_from(s.at("position"), path + ".position");
      if (s.contains("reflectivity")) sc.reflectivity = s.at("reflectivity").get<double>();
      scene.scatterers.push_back(sc);
    }
  }
  if (j.contains("walls")) {
    int i = 0;
    for (const auto& w : j.at("walls")) {
      const std::string path = "scene.walls[" + std::to_string(i++) + "]";
      detail::require_keys(w, path, {"point", "normal", "extent", "reflectivity"});
      Wall wall;
      wall.point = detail::vec3_from(w.at("point"), path + ".point");
      wall.normal = detail::vec3_from(w.at("normal"), path + ".normal").normalized();
      wall.extent = detail::vec2_from(w.at("extent"), path + ".extent");
      if (w.contains("reflectivity")) wall.reflectivity = w.at("reflectivity").get<double>();
      scene.walls.push_back(wall);
    }
  }
  return scene;
}

void write_scene_json(const std::string& path, const Scene& scene) {
  write_text_file(path, scene_to_json(scene));
}

Scene read_scene_json(const std::string& path) { return parse_scene_json(read_text_file(path)); }

void write_cdf_csv(const std::string& path, const CdfCurve& curve) {
  std::string out = "error,cumulative_fraction\n";
  for (std::size_t i = 0; i < curve.edges.size(); ++i) {
    out += format_double(curve.edges[i]);
    out += ',';
    out += format_double(curve.cumulative[i]);
    out += '\n';
  }
  write_text_file(path, out);
}

std::string read_text_file(const std::string& path) { return read_binary_file(path); }

void write_text_file(const std::string& path, const std::string& content) {
  write_binary_file(path, content);
}

std::string file_hash_hex(const std::string& path) {
  const std::string bytes = read_binary_file(path);
  const std::uint64_t h = fnv1a64(bytes.data(), bytes.size());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace rfscene
