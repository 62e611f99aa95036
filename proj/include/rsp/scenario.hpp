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

#ifndef RSP_SCENARIO_HPP_
#define RSP_SCENARIO_HPP_

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "rsp/detection.hpp"
#include "rsp/io.hpp"
#include "rsp/metrics.hpp"
#include "rsp/placement.hpp"
#include "rsp/scene.hpp"

namespace rsp {

struct DetectorNoise {
  double position_sigma = 0.0;  // m, applied to x and y
  double size_sigma = 0.0;      // m, per dimension
  double yaw_sigma = 0.0;       // rad
  double velocity_sigma = 0.0;  // m/s, radar only

  friend bool operator==(const DetectorNoise&, const DetectorNoise&) = default;
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  int duration_frames = 100;
  double frame_dt_s = 0.05;
  std::map<ObjectClass, double> class_mix;  // expected spawns per frame
  std::map<ObjectClass, std::pair<double, double>> speed_ranges;  // m/s
  DetectorNoise lidar_noise;
  DetectorNoise radar_noise;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Nominal (length, width, height) per class.
Vec3 class_dimensions(ObjectClass c);

// Throws ValidationError on negative rates, sigmas or speeds.
void check_scenario_config(const ScenarioConfig& cfg);

Json scenario_to_json(const ScenarioConfig& cfg);
// Strict: unknown fields raise ParseError naming the field.
ScenarioConfig scenario_from_json(const Json& j);

struct ScenarioOutput {
  std::vector<DetectionFrame> ground_truth;
  std::vector<DetectionFrame> lidar;
  std::vector<DetectionFrame> radar;
};

// Straight-line traffic over the ROI with simulated per-modality detections.
//
// Objects spawn at random ROI cell centers (Poisson count per class and
// frame), move along a grid axis at a class speed and leave when they exit the
// grid. Only boxes whose center lies in an ROI cell are annotated. Each
// modality detects a box with probability min(1, sum of the selected
// sensors' visibility at that cell), treating sums at or above the clamp
// bound as certain. Detections get Gaussian noise; radar boxes carry the
// ground-truth velocity plus noise. Output depends only on the inputs and
// the seed. Throws std::out_of_range when `sel` names a missing candidate.
ScenarioOutput generate_scenario(const Scene& scene, const VisibilityMatrix& vl,
                                 const VisibilityMatrix& vr, const Selection& sel,
                                 const ScenarioConfig& cfg);

}  // namespace rsp

#endif  // RSP_SCENARIO_HPP_
