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

#ifndef RSP_METRICS_HPP_
#define RSP_METRICS_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rsp/detection.hpp"

namespace rsp {

struct FramePair {
  std::string frame_id;
  std::vector<DetectionBox> predictions;
  std::vector<DetectionBox> ground_truth;
};

enum class MatchMode { kIou, kCenterDistance };

std::string_view to_string(MatchMode m);
MatchMode parse_match_mode(std::string_view s);

// IoU mode: 0.5 for vehicles, 0.25 for pedestrians and motorcycles.
// Center-distance mode: 2 m for every class.
double default_threshold(ObjectClass c, MatchMode mode);

// Number of recall sample points in interpolated AP.
inline constexpr int kRecallPoints = 101;

struct APResult {
  ObjectClass label = ObjectClass::kCar;
  std::optional<double> ap;  // empty when the class has no ground truth
  std::vector<double> precision;
  std::vector<double> recall;
  MatchMode mode = MatchMode::kIou;
  double threshold = 0.5;
  std::size_t num_ground_truth = 0;
  std::size_t num_predictions = 0;
  std::size_t true_positives = 0;
};

// Per-frame greedy matching in descending score; pooled precision/recall
// curve; 101-point interpolated AP. Throws std::invalid_argument on an empty
// frame list or duplicate frame ids.
APResult evaluate_ap(const std::vector<FramePair>& frames, ObjectClass label, MatchMode mode,
                     double threshold);

struct MapResult {
  std::map<ObjectClass, APResult> per_class;
  double map = 0.0;
};

// Mean of the defined per-class APs. `threshold` overrides the per-class
// defaults when set. Throws std::domain_error when no class has ground truth.
MapResult evaluate_map(const std::vector<FramePair>& frames, MatchMode mode,
                       std::optional<double> threshold = std::nullopt);

// Joins ground-truth and prediction frames by frame id. Frames missing on one
// side contribute an empty box list.
std::vector<FramePair> pair_frames(const std::vector<DetectionFrame>& ground_truth,
                                   const std::vector<DetectionFrame>& predictions);

}  // namespace rsp

#endif  // RSP_METRICS_HPP_
