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

#include <doctest.h>

#include "rsp/scene.hpp"
#include "support.hpp"

using namespace rsp;

namespace {

Scene minimal_scene() {
  Scene s;
  s.grid = {{0.0, 0.0}, 1.0, 2, 2};
  s.roi.cells = {0, 1, 2, 3};
  s.lidar_candidates.push_back({"L0", {0.0, 0.0, 5.0}, 0.0, 0.0, lidar_16_beam()});
  return s;
}

}  // namespace

TEST_CASE("minimal scene validates clean") { CHECK(validate_scene(minimal_scene()).empty()); }

TEST_CASE("ROI cell outside the grid is reported") {
  auto s = minimal_scene();
  s.roi.cells.insert(4);
  const auto v = validate_scene(s);
  REQUIRE(v.size() == 1);
  CHECK(v[0].message == "cell out of grid bounds");
  CHECK(v[0].subject == "roi.cell[4]");
}

TEST_CASE("duplicate candidate id is reported once") {
  auto s = minimal_scene();
  s.radar_candidates.push_back({"L0", {1.0, 0.0, 4.0}, 0.0, 0.0, radar_4d()});
  const auto v = validate_scene(s);
  REQUIRE(v.size() == 1);
  CHECK(v[0].message == "duplicate id");
}

TEST_CASE("other invariants") {
  auto s = minimal_scene();
  s.lidar_candidates[0].position.z = 0.0;
  s.lidar_candidates.push_back({"R9", {0.0, 0.0, 3.0}, 0.0, 0.0, radar_4d()});
  s.roi.weights[7] = 1.0;
  s.roi.weights[1] = -2.0;
  s.occluders.push_back({{{1.0, 1.0, 1.0}, {0.0, 2.0, 2.0}}});
  const auto v = validate_scene(s);
  auto has = [&](std::string_view msg) {
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.message == msg; });
  };
  CHECK(has("mount at or below ground"));
  CHECK(has("spec modality does not match candidate set"));
  CHECK(has("weighted cell not in ROI"));
  CHECK(has("negative weight"));
  CHECK(v.size() >= 5);
}

TEST_CASE("sensor spec ranges") {
  auto l = lidar_16_beam();
  CHECK(validate_sensor_spec(l, "x").empty());
  l.beams = 1;
  CHECK(validate_sensor_spec(l, "x").size() == 1);
  l.beams.reset();
  CHECK(validate_sensor_spec(l, "x").size() == 1);
  auto r = radar_4d();
  r.beams = 4;
  r.hfov_deg = 0.0;
  r.vfov_deg = 180.0;
  r.max_range_m = -1.0;
  r.rate_hz = 0.0;
  r.unit_cost = -1.0;
  CHECK(validate_sensor_spec(r, "x").size() == 6);
}

TEST_CASE("preset specs match the published sensor table") {
  CHECK(lidar_64_beam().beams == 64);
  CHECK(lidar_64_beam().vfov_deg == 45.0);
  CHECK(lidar_64_beam().max_range_m == 90.0);
  CHECK(lidar_32_beam().beams == 32);
  CHECK(lidar_16_beam().beams == 16);
  CHECK(lidar_16_beam().vfov_deg == 30.0);
  CHECK(radar_4d().hfov_deg == 120.0);
  CHECK_FALSE(radar_4d().beams.has_value());
}

TEST_CASE("cell_center examples") {
  const GridSpec g{{0.0, 0.0}, 2.0, 4, 3};
  CHECK(cell_center(g, 0) == Vec3{1.0, 1.0, 0.0});
  CHECK(cell_center(g, 5) == Vec3{3.0, 3.0, 0.0});
  CHECK_THROWS_AS(cell_center(g, 12), std::out_of_range);
}

TEST_CASE("cell index round trip") {
  rsp::testing::Gen gen(3);
  for (int k = 0; k < 200; ++k) {
    const GridSpec g{{0.0, 0.0}, 1.0, gen.integer(1, 50), gen.integer(1, 50)};
    for (std::size_t j = 0; j < g.cell_count(); j += 7) CHECK(g.index_of(g.row_of(j), g.col_of(j)) == j);
  }
}

TEST_CASE("validation is idempotent") {
  auto s = minimal_scene();
  s.roi.cells.insert(99);
  s.lidar_candidates.push_back(s.lidar_candidates[0]);
  const Scene copy = s;
  CHECK(validate_scene(s) == validate_scene(s));
  CHECK(s == copy);
}

TEST_CASE("column weights follow ascending cell order") {
  RegionOfInterest roi;
  roi.cells = {5, 1, 3};
  roi.weights = {{3, 2.5}};
  CHECK(roi.column_weights() == std::vector<double>{1.0, 2.5, 1.0});
}

TEST_CASE("modality names") {
  CHECK(parse_modality("lidar") == Modality::kLidar);
  CHECK(to_string(Modality::kRadar) == "radar");
  CHECK_THROWS_AS(parse_modality("sonar"), std::invalid_argument);
}
