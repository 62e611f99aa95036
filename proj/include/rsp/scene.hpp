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

#ifndef RSP_SCENE_HPP_
#define RSP_SCENE_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rsp/geometry.hpp"

namespace rsp {

enum class Modality { kLidar, kRadar };

std::string_view to_string(Modality m);
// Throws std::invalid_argument on anything other than "lidar"/"radar".
Modality parse_modality(std::string_view s);

// Regular ground grid. Cell j sits at row j / nx, column j % nx.
struct GridSpec {
  Vec2 origin;
  double cell_size = 1.0;
  int nx = 1;
  int ny = 1;

  std::size_t cell_count() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  }
  std::size_t row_of(std::size_t j) const { return j / static_cast<std::size_t>(nx); }
  std::size_t col_of(std::size_t j) const { return j % static_cast<std::size_t>(nx); }
  std::size_t index_of(std::size_t row, std::size_t col) const {
    return row * static_cast<std::size_t>(nx) + col;
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Ground-level center of cell j. Throws std::out_of_range when j >= nx*ny.
Vec3 cell_center(const GridSpec& grid, std::size_t j);

// Target cells and their importance weights. Cells without an explicit
// weight count with weight 1.
struct RegionOfInterest {
  std::set<std::size_t> cells;
  std::map<std::size_t, double> weights;

  double weight(std::size_t j) const {
    auto it = weights.find(j);
    return it == weights.end() ? 1.0 : it->second;
  }
  // Weights in ascending cell order, i.e. matrix column order.
  std::vector<double> column_weights() const;

  friend bool operator==(const RegionOfInterest&, const RegionOfInterest&) = default;
};

struct Occluder {
  Aabb box;
  friend bool operator==(const Occluder&, const Occluder&) = default;
};

// Beam/FOV/range description of one sensor model plus its unit price.
struct SensorSpec {
  std::string name;
  Modality modality = Modality::kLidar;
  std::optional<int> beams;  // lidar only
  double hfov_deg = 360.0;
  double vfov_deg = 30.0;
  double max_range_m = 100.0;
  double rate_hz = 20.0;
  double unit_cost = 0.0;

  friend bool operator==(const SensorSpec&, const SensorSpec&) = default;
};

// The four sensor models used in the intersection case study. Prices are
// left at zero; callers supply their own.
SensorSpec lidar_64_beam();
SensorSpec lidar_32_beam();
SensorSpec lidar_16_beam();
SensorSpec radar_4d();

struct CandidateMount {
  std::string id;
  Vec3 position;
  double yaw_deg = 0.0;
  double pitch_deg = 0.0;  // downward tilt
  SensorSpec spec;

  friend bool operator==(const CandidateMount&, const CandidateMount&) = default;
};

struct Scene {
  GridSpec grid;
  RegionOfInterest roi;
  std::vector<Occluder> occluders;
  std::vector<CandidateMount> lidar_candidates;
  std::vector<CandidateMount> radar_candidates;

  const std::vector<CandidateMount>& candidates(Modality m) const {
    return m == Modality::kLidar ? lidar_candidates : radar_candidates;
  }

  friend bool operator==(const Scene&, const Scene&) = default;
};

struct Violation {
  std::string subject;  // e.g. "roi.cell[16]", "candidate 'L3'"
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Every invariant violation in `scene`; empty when the scene is valid.
std::vector<Violation> validate_scene(const Scene& scene);

// Violations of a single spec, with `subject` as the prefix.
std::vector<Violation> validate_sensor_spec(const SensorSpec& spec,
                                            const std::string& subject);

}  // namespace rsp

#endif  // RSP_SCENE_HPP_
