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

#ifndef RSP_TESTS_SUPPORT_HPP_
#define RSP_TESTS_SUPPORT_HPP_

// Shared fixtures and random generators for the test binaries.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "rsp/detection.hpp"
#include "rsp/placement.hpp"
#include "rsp/scene.hpp"
#include "rsp/visibility.hpp"

namespace rsp::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline VisibilityMatrix make_matrix(Modality m, std::size_t rows, std::size_t cols,
                                    const std::vector<double>& values = {}) {
  VisibilityMatrix v;
  v.modality = m;
  v.values = DenseMatrix(rows, cols);
  if (!values.empty()) v.values.data = values;
  for (std::size_t j = 0; j < cols; ++j) v.cells.push_back(j);
  for (std::size_t i = 0; i < rows; ++i) {
    v.row_ids.push_back((m == Modality::kLidar ? "L" : "R") + std::to_string(i));
    v.row_costs.push_back(0.0);
  }
  return v;
}

inline VisibilityMatrix random_matrix(Gen& g, Modality m, std::size_t rows, std::size_t cols,
                                      double hi = 0.95, double zero_share = 0.0) {
  VisibilityMatrix v = make_matrix(m, rows, cols);
  for (auto& x : v.values.data) x = g.coin(zero_share) ? 0.0 : g.uniform(0.0, hi);
  return v;
}

// Random instance with nl lidar rows, nr radar rows and nc cells.
inline PlacementProblem random_problem(Gen& g, std::size_t nl, std::size_t nr, std::size_t nc,
                                       int budget, double zero_share = 0.0) {
  std::vector<double> w(nc);
  for (auto& x : w) x = g.uniform(0.1, 3.0);
  return make_problem(random_matrix(g, Modality::kLidar, nl, nc, 0.95, zero_share),
                      random_matrix(g, Modality::kRadar, nr, nc, 0.95, zero_share), w, budget);
}

inline DetectionBox random_box(Gen& g, double spread = 3.0) {
  DetectionBox b;
  b.center = {g.uniform(-spread, spread), g.uniform(-spread, spread), g.uniform(0.0, 1.5)};
  b.size = {g.uniform(0.4, 4.5), g.uniform(0.4, 2.5), g.uniform(0.5, 3.0)};
  b.yaw = g.uniform(-kPi, kPi);
  b.score = g.uniform(0.05, 1.0);
  return b;
}

inline DetectionBox box_at(double x, double y, ObjectClass c, double score = 1.0,
                           Vec3 size = {1.0, 1.0, 1.0}) {
  DetectionBox b;
  b.center = {x, y, size.z / 2.0};
  b.size = size;
  b.label = c;
  b.score = score;
  return b;
}

// nx x ny grid of unit cells centered on the origin, all cells in the ROI,
// with one lidar (given beams) and one radar mounted at the center.
inline Scene open_scene(int nx, int ny, double cell = 1.0, double height = 5.0) {
  Scene s;
  s.grid = {{-nx * cell / 2.0, -ny * cell / 2.0}, cell, nx, ny};
  for (std::size_t j = 0; j < s.grid.cell_count(); ++j) s.roi.cells.insert(j);
  s.lidar_candidates.push_back({"L0", {0.0, 0.0, height}, 0.0, 0.0, lidar_64_beam()});
  s.radar_candidates.push_back({"R0", {0.0, 0.0, height}, 0.0, 20.0, radar_4d()});
  return s;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("rsp_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace rsp::testing

#endif  // RSP_TESTS_SUPPORT_HPP_
