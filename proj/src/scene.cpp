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

#include "rsp/scene.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace rsp {

std::string_view to_string(Modality m) {
  return m == Modality::kLidar ? "lidar" : "radar";
}

Modality parse_modality(std::string_view s) {
  if (s == "lidar") return Modality::kLidar;
  if (s == "radar") return Modality::kRadar;
  throw std::invalid_argument("unknown modality '" + std::string(s) + "'");
}

Vec3 cell_center(const GridSpec& grid, std::size_t j) {
  if (j >= grid.cell_count()) {
    throw std::out_of_range("cell index " + std::to_string(j) +
                            " outside grid of " +
                            std::to_string(grid.cell_count()) + " cells");
  }
  const double col = static_cast<double>(grid.col_of(j));
  const double row = static_cast<double>(grid.row_of(j));
  return {grid.origin.x + (col + 0.5) * grid.cell_size,
          grid.origin.y + (row + 0.5) * grid.cell_size, 0.0};
}

std::vector<double> RegionOfInterest::column_weights() const {
  std::vector<double> out;
  out.reserve(cells.size());
  for (std::size_t j : cells) out.push_back(weight(j));
  return out;
}

SensorSpec lidar_64_beam() {
  return {"lidar-64", Modality::kLidar, 64, 360.0, 45.0, 90.0, 20.0, 0.0};
}
SensorSpec lidar_32_beam() {
  return {"lidar-32", Modality::kLidar, 32, 360.0, 45.0, 90.0, 20.0, 0.0};
}
SensorSpec lidar_16_beam() {
  return {"lidar-16", Modality::kLidar, 16, 360.0, 30.0, 100.0, 20.0, 0.0};
}
SensorSpec radar_4d() {
  return {"radar-4d", Modality::kRadar, std::nullopt, 120.0, 28.0, 90.0, 20.0, 0.0};
}

std::vector<Violation> validate_sensor_spec(const SensorSpec& spec,
                                            const std::string& subject) {
  std::vector<Violation> out;
  auto bad = [&](std::string msg) { out.push_back({subject, std::move(msg)}); };
  if (spec.modality == Modality::kLidar) {
    if (!spec.beams) {
      bad("lidar spec without beam count");
    } else if (*spec.beams < 2) {
      bad("lidar spec needs at least 2 beams");
    }
  } else if (spec.beams) {
    bad("radar spec carries a beam count");
  }
  if (!(spec.hfov_deg > 0.0 && spec.hfov_deg <= 360.0)) bad("hfov_deg outside (0, 360]");
  if (!(spec.vfov_deg > 0.0 && spec.vfov_deg < 180.0)) bad("vfov_deg outside (0, 180)");
  if (!(spec.max_range_m > 0.0)) bad("max_range_m must be > 0");
  if (!(spec.rate_hz > 0.0)) bad("rate_hz must be > 0");
  if (!(spec.unit_cost >= 0.0)) bad("unit_cost must be >= 0");
  return out;
}

std::vector<Violation> validate_scene(const Scene& scene) {
  std::vector<Violation> out;
  const GridSpec& g = scene.grid;
  if (!(g.cell_size > 0.0)) out.push_back({"grid", "cell_size must be > 0"});
  if (g.nx < 1 || g.ny < 1) out.push_back({"grid", "nx and ny must be positive"});

  const std::size_t n_cells = (g.nx >= 1 && g.ny >= 1) ? g.cell_count() : 0;
  if (scene.roi.cells.empty()) out.push_back({"roi", "empty ROI"});
  for (std::size_t j : scene.roi.cells) {
    if (j >= n_cells) {
      out.push_back({"roi.cell[" + std::to_string(j) + "]", "cell out of grid bounds"});
    }
  }
  for (const auto& [j, w] : scene.roi.weights) {
    const std::string subject = "roi.weight[" + std::to_string(j) + "]";
    if (!scene.roi.cells.contains(j)) out.push_back({subject, "weighted cell not in ROI"});
    if (!(w >= 0.0)) out.push_back({subject, "negative weight"});
  }

  for (std::size_t k = 0; k < scene.occluders.size(); ++k) {
    const Aabb& b = scene.occluders[k].box;
    if (!(b.min.x <= b.max.x && b.min.y <= b.max.y && b.min.z <= b.max.z)) {
      out.push_back({"occluder[" + std::to_string(k) + "]", "min corner exceeds max corner"});
    }
  }

  std::unordered_map<std::string, int> id_count;
  std::unordered_map<std::string, const SensorSpec*> spec_by_name;
  auto check_mount = [&](const CandidateMount& m, Modality expected) {
    const std::string subject = "candidate '" + m.id + "'";
    if (++id_count[m.id] == 2) out.push_back({subject, "duplicate id"});
    if (m.id.empty() ||
        std::any_of(m.id.begin(), m.id.end(), [](char c) { return c <= ' ' || c == 0x7f; })) {
      out.push_back({subject, "id must be a non-empty token without whitespace"});
    }
    if (!(m.position.z > 0.0)) out.push_back({subject, "mount at or below ground"});
    if (m.spec.modality != expected) {
      out.push_back({subject, "spec modality does not match candidate set"});
    }
    for (auto& v : validate_sensor_spec(m.spec, subject)) out.push_back(std::move(v));
    auto [it, inserted] = spec_by_name.emplace(m.spec.name, &m.spec);
    if (!inserted && !(*it->second == m.spec)) {
      out.push_back({subject, "sensor spec name '" + m.spec.name + "' reused with different fields"});
    }
  };
  for (const auto& m : scene.lidar_candidates) check_mount(m, Modality::kLidar);
  for (const auto& m : scene.radar_candidates) check_mount(m, Modality::kRadar);
  return out;
}

}  // namespace rsp
