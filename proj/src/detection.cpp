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

#include "rsp/detection.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace rsp {

std::string_view to_string(ObjectClass c) {
  switch (c) {
    case ObjectClass::kCar: return "car";
    case ObjectClass::kTruck: return "truck";
    case ObjectClass::kMotorcycle: return "motorcycle";
    case ObjectClass::kBus: return "bus";
    case ObjectClass::kPedestrian: return "pedestrian";
    case ObjectClass::kGolfCart: return "golf_cart";
  }
  return "?";
}

ObjectClass parse_object_class(std::string_view s) {
  for (ObjectClass c : kAllClasses) {
    if (to_string(c) == s) return c;
  }
  throw std::invalid_argument("unknown class '" + std::string(s) + "'");
}

std::string_view to_string(BoxSource s) {
  switch (s) {
    case BoxSource::kLidar: return "lidar";
    case BoxSource::kRadar: return "radar";
    case BoxSource::kFused: return "fused";
    case BoxSource::kGroundTruth: return "ground_truth";
  }
  return "?";
}

BoxSource parse_box_source(std::string_view s) {
  for (BoxSource b : {BoxSource::kLidar, BoxSource::kRadar, BoxSource::kFused,
                      BoxSource::kGroundTruth}) {
    if (to_string(b) == s) return b;
  }
  throw std::invalid_argument("unknown box source '" + std::string(s) + "'");
}

std::optional<std::string> check_box(const DetectionBox& box) {
  if (!(box.size.x > 0.0 && box.size.y > 0.0 && box.size.z > 0.0)) {
    return "box size components must be > 0";
  }
  if (!(box.score >= 0.0 && box.score <= 1.0)) return "score outside [0, 1]";
  if (!(box.yaw > -kPi && box.yaw <= kPi)) return "yaw outside (-pi, pi]";
  return std::nullopt;
}

bool canonical_less(const DetectionBox& a, const DetectionBox& b) {
  auto key = [](const DetectionBox& d) {
    return std::make_tuple(-d.score, d.center.x, d.center.y, d.center.z, d.size.x, d.size.y,
                           d.size.z, d.yaw, static_cast<int>(d.label),
                           static_cast<int>(d.source), d.velocity.has_value(),
                           d.velocity ? d.velocity->x : 0.0, d.velocity ? d.velocity->y : 0.0);
  };
  return key(a) < key(b);
}

void sort_canonical(std::vector<DetectionBox>& boxes) {
  std::stable_sort(boxes.begin(), boxes.end(), canonical_less);
}

}  // namespace rsp
