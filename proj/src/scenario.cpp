// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rsp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "rsp/error.hpp"

namespace rsp {

Vec3 class_dimensions(ObjectClass c) {
  switch (c) {
    case ObjectClass::kCar: return {4.5, 1.8, 1.5};
    case ObjectClass::kTruck: return {8.0, 2.5, 3.2};
    case ObjectClass::kMotorcycle: return {2.1, 0.8, 1.4};
    case ObjectClass::kBus: return {12.0, 2.6, 3.2};
    case ObjectClass::kPedestrian: return {0.6, 0.6, 1.7};
    case ObjectClass::kGolfCart: return {2.4, 1.2, 1.8};
  }
  return {1.0, 1.0, 1.0};
}

namespace {

std::pair<double, double> default_speed(ObjectClass c) {
  switch (c) {
    case ObjectClass::kCar: return {5.0, 15.0};
    case ObjectClass::kTruck: return {5.0, 12.0};
    case ObjectClass::kMotorcycle: return {5.0, 15.0};
    case ObjectClass::kBus: return {5.0, 12.0};
    case ObjectClass::kPedestrian: return {0.5, 2.0};
    case ObjectClass::kGolfCart: return {2.0, 6.0};
  }
  return {1.0, 1.0};
}

// std distributions are implementation-defined; these transforms of the
// standardized mt19937_64 stream keep scenarios identical across toolchains.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }
  int poisson(double rate) {
    if (rate <= 0.0) return 0;
    const double limit = std::exp(-rate);
    int k = 0;
    double p = uniform();
    while (p > limit) {
      ++k;
      p *= uniform();
    }
    return k;
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Agent {
  ObjectClass label;
  Vec2 position;
  Vec2 velocity;
  double yaw;
};

std::string frame_name(int k) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "f%06d", k);
  return buf;
}

double detection_probability(const VisibilityMatrix& v, const std::vector<std::size_t>& ids,
                             std::size_t column) {
  double mass = 0.0;
  for (std::size_t i : ids) mass += v(i, column);
  if (mass >= v.max_entry()) return 1.0;
  return std::min(1.0, mass);
}

// Fixed number of draws per call so that later boxes see the same random
// numbers whatever happened to earlier ones.
std::optional<DetectionBox> simulate(const DetectionBox& gt, double p, const DetectorNoise& n,
                                     BoxSource source, Stream& rng) {
  const double u = rng.uniform();
  const double ex = rng.normal(), ey = rng.normal();
  const double el = rng.normal(), ew = rng.normal(), eh = rng.normal();
  const double eyaw = rng.normal();
  const double evx = rng.normal(), evy = rng.normal();
  if (!(u < p)) return std::nullopt;

  DetectionBox d = gt;
  d.source = source;
  const double dx = n.position_sigma * ex, dy = n.position_sigma * ey;
  d.center.x += dx;
  d.center.y += dy;
  auto jitter = [&](double nominal, double e) {
    return std::max(0.1 * nominal, nominal + n.size_sigma * e);
  };
  d.size = {jitter(gt.size.x, el), jitter(gt.size.y, ew), jitter(gt.size.z, eh)};
  d.center.z = d.size.z / 2.0;
  d.yaw = wrap_rad(gt.yaw + n.yaw_sigma * eyaw);
  d.score = std::clamp(p * std::exp(-std::hypot(dx, dy) / 2.0), 0.0, 1.0);
  if (source == BoxSource::kRadar && gt.velocity) {
    d.velocity = Vec2{gt.velocity->x + n.velocity_sigma * evx,
                      gt.velocity->y + n.velocity_sigma * evy};
  } else {
    d.velocity.reset();
  }
  return d;
}

void check_noise(const DetectorNoise& n, const char* which) {
  if (!(n.position_sigma >= 0.0 && n.size_sigma >= 0.0 && n.yaw_sigma >= 0.0 &&
        n.velocity_sigma >= 0.0)) {
    throw ValidationError(std::string(which) + " noise sigmas must be >= 0");
  }
}

}  // namespace

void check_scenario_config(const ScenarioConfig& cfg) {
  if (cfg.duration_frames < 0) throw ValidationError("duration_frames must be >= 0");
  if (!(cfg.frame_dt_s > 0.0)) throw ValidationError("frame_dt_s must be > 0");
  for (const auto& [c, rate] : cfg.class_mix) {
    if (!(rate >= 0.0)) throw ValidationError("spawn rate for " + std::string(to_string(c)) + " must be >= 0");
  }
  for (const auto& [c, range] : cfg.speed_ranges) {
    if (!(range.first >= 0.0 && range.second >= range.first)) {
      throw ValidationError("speed range for " + std::string(to_string(c)) +
                            " must satisfy 0 <= min <= max");
    }
  }
  check_noise(cfg.lidar_noise, "lidar");
  check_noise(cfg.radar_noise, "radar");
}

namespace {

Json noise_to_json(const DetectorNoise& n) {
  return {{"position_sigma", n.position_sigma},
          {"size_sigma", n.size_sigma},
          {"yaw_sigma", n.yaw_sigma},
          {"velocity_sigma", n.velocity_sigma}};
}

DetectorNoise noise_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + " must be an object", 0, where);
  DetectorNoise n;
  for (const auto& [key, v] : j.items()) {
    if (!v.is_number()) throw ParseError(where + "." + key + " must be a number", 0, where + "." + key);
    if (key == "position_sigma") n.position_sigma = v.get<double>();
    else if (key == "size_sigma") n.size_sigma = v.get<double>();
    else if (key == "yaw_sigma") n.yaw_sigma = v.get<double>();
    else if (key == "velocity_sigma") n.velocity_sigma = v.get<double>();
    else throw ParseError("unknown field '" + key + "' in " + where, 0, where + "." + key);
  }
  return n;
}

ObjectClass class_key(const std::string& key, const std::string& where) {
  try {
    return parse_object_class(key);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0, where + "." + key);
  }
}

}  // namespace

Json scenario_to_json(const ScenarioConfig& cfg) {
  Json mix = Json::object(), speeds = Json::object();
  for (const auto& [c, r] : cfg.class_mix) mix[std::string(to_string(c))] = r;
  for (const auto& [c, r] : cfg.speed_ranges) {
    speeds[std::string(to_string(c))] = Json::array({r.first, r.second});
  }
  return {{"seed", cfg.seed},
          {"duration_frames", cfg.duration_frames},
          {"frame_dt_s", cfg.frame_dt_s},
          {"class_mix", mix},
          {"speed_ranges", speeds},
          {"detector_noise",
           {{"lidar", noise_to_json(cfg.lidar_noise)}, {"radar", noise_to_json(cfg.radar_noise)}}}};
}

ScenarioConfig scenario_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("scenario must be an object", 0, "scenario");
  ScenarioConfig cfg;
  for (const auto& [key, v] : j.items()) {
    const std::string where = "scenario." + key;
    if (key == "seed") {
      if (!v.is_number_integer()) throw ParseError("seed must be an integer", 0, where);
      cfg.seed = v.is_number_unsigned() ? v.get<std::uint64_t>()
                                        : static_cast<std::uint64_t>(v.get<std::int64_t>());
    } else if (key == "duration_frames") {
      if (!v.is_number_integer()) throw ParseError("duration_frames must be an integer", 0, where);
      cfg.duration_frames = v.get<int>();
    } else if (key == "frame_dt_s") {
      if (!v.is_number()) throw ParseError("frame_dt_s must be a number", 0, where);
      cfg.frame_dt_s = v.get<double>();
    } else if (key == "class_mix") {
      if (!v.is_object()) throw ParseError("class_mix must be an object", 0, where);
      for (const auto& [c, rate] : v.items()) {
        if (!rate.is_number()) throw ParseError("spawn rate must be a number", 0, where + "." + c);
        cfg.class_mix[class_key(c, where)] = rate.get<double>();
      }
    } else if (key == "speed_ranges") {
      if (!v.is_object()) throw ParseError("speed_ranges must be an object", 0, where);
      for (const auto& [c, range] : v.items()) {
        if (!range.is_array() || range.size() != 2 || !range[0].is_number() ||
            !range[1].is_number()) {
          throw ParseError("speed range must be [min, max]", 0, where + "." + c);
        }
        cfg.speed_ranges[class_key(c, where)] = {range[0].get<double>(), range[1].get<double>()};
      }
    } else if (key == "detector_noise") {
      if (!v.is_object()) throw ParseError("detector_noise must be an object", 0, where);
      for (const auto& [m, n] : v.items()) {
        if (m == "lidar") cfg.lidar_noise = noise_from_json(n, where + ".lidar");
        else if (m == "radar") cfg.radar_noise = noise_from_json(n, where + ".radar");
        else throw ParseError("unknown field '" + m + "' in " + where, 0, where + "." + m);
      }
    } else {
      throw ParseError("unknown field '" + key + "' in scenario", 0, where);
    }
  }
  return cfg;
}

ScenarioOutput generate_scenario(const Scene& scene, const VisibilityMatrix& vl,
                                 const VisibilityMatrix& vr, const Selection& sel,
                                 const ScenarioConfig& cfg) {
  check_scenario_config(cfg);
  const std::vector<std::size_t> cells(scene.roi.cells.begin(), scene.roi.cells.end());
  if (vl.cells != cells || vr.cells != cells) {
    throw ValidationError("visibility matrices do not match the scene's ROI cells");
  }
  for (std::size_t i : sel.lidar) {
    if (i >= vl.rows()) throw std::out_of_range("selection names missing lidar candidate " + std::to_string(i));
  }
  for (std::size_t i : sel.radar) {
    if (i >= vr.rows()) throw std::out_of_range("selection names missing radar candidate " + std::to_string(i));
  }
  std::vector<std::size_t> lidar_ids = sel.lidar, radar_ids = sel.radar;
  std::sort(lidar_ids.begin(), lidar_ids.end());
  std::sort(radar_ids.begin(), radar_ids.end());

  Stream world(mix(cfg.seed, 0));
  Stream lidar_rng(mix(cfg.seed, 1));
  Stream radar_rng(mix(cfg.seed, 2));

  const GridSpec& g = scene.grid;
  auto column_at = [&](const Vec2& p) -> std::optional<std::size_t> {
    const double fx = std::floor((p.x - g.origin.x) / g.cell_size);
    const double fy = std::floor((p.y - g.origin.y) / g.cell_size);
    if (fx < 0 || fy < 0 || fx >= g.nx || fy >= g.ny) return std::nullopt;
    const std::size_t j = g.index_of(static_cast<std::size_t>(fy), static_cast<std::size_t>(fx));
    auto it = std::lower_bound(cells.begin(), cells.end(), j);
    if (it == cells.end() || *it != j) return std::nullopt;
    return static_cast<std::size_t>(it - cells.begin());
  };
  auto inside_grid = [&](const Vec2& p) {
    return p.x >= g.origin.x && p.y >= g.origin.y && p.x < g.origin.x + g.nx * g.cell_size &&
           p.y < g.origin.y + g.ny * g.cell_size;
  };

  ScenarioOutput out;
  std::vector<Agent> agents;
  for (int frame = 0; frame < cfg.duration_frames; ++frame) {
    for (ObjectClass c : kAllClasses) {
      auto rate_it = cfg.class_mix.find(c);
      if (rate_it == cfg.class_mix.end()) continue;
      const int n = world.poisson(rate_it->second);
      auto speed_it = cfg.speed_ranges.find(c);
      const auto [lo, hi] = speed_it == cfg.speed_ranges.end() ? default_speed(c) : speed_it->second;
      for (int k = 0; k < n; ++k) {
        const Vec3 start = cell_center(g, cells[world.index(cells.size())]);
        const std::size_t dir = world.index(4);
        const double speed = world.uniform(lo, hi);
        const double yaw = wrap_rad(static_cast<double>(dir) * kPi / 2.0);
        const Vec2 v = dir == 0   ? Vec2{speed, 0.0}
                       : dir == 1 ? Vec2{0.0, speed}
                       : dir == 2 ? Vec2{-speed, 0.0}
                                  : Vec2{0.0, -speed};
        agents.push_back({c, {start.x, start.y}, v, yaw});
      }
    }

    DetectionFrame gt{frame_name(frame), {}}, lidar{gt.frame_id, {}}, radar{gt.frame_id, {}};
    for (const Agent& a : agents) {
      const auto column = column_at(a.position);
      if (!column) continue;
      const Vec3 dims = class_dimensions(a.label);
      DetectionBox box;
      box.center = {a.position.x, a.position.y, dims.z / 2.0};
      box.size = dims;
      box.yaw = a.yaw;
      box.label = a.label;
      box.score = 1.0;
      box.velocity = a.velocity;
      box.source = BoxSource::kGroundTruth;
      gt.boxes.push_back(box);
      if (auto d = simulate(box, detection_probability(vl, lidar_ids, *column), cfg.lidar_noise,
                            BoxSource::kLidar, lidar_rng)) {
        lidar.boxes.push_back(*d);
      }
      if (auto d = simulate(box, detection_probability(vr, radar_ids, *column), cfg.radar_noise,
                            BoxSource::kRadar, radar_rng)) {
        radar.boxes.push_back(*d);
      }
    }
    out.ground_truth.push_back(std::move(gt));
    out.lidar.push_back(std::move(lidar));
    out.radar.push_back(std::move(radar));

    for (Agent& a : agents) {
      a.position.x += a.velocity.x * cfg.frame_dt_s;
      a.position.y += a.velocity.y * cfg.frame_dt_s;
    }
    std::erase_if(agents, [&](const Agent& a) { return !inside_grid(a.position); });
  }
  return out;
}

}  // namespace rsp
