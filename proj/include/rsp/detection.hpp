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

#ifndef RSP_DETECTION_HPP_
#define RSP_DETECTION_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rsp/geometry.hpp"

namespace rsp {

enum class ObjectClass { kCar, kTruck, kMotorcycle, kBus, kPedestrian, kGolfCart };

inline constexpr std::array<ObjectClass, 6> kAllClasses = {
    ObjectClass::kCar,        ObjectClass::kTruck,      ObjectClass::kMotorcycle,
    ObjectClass::kBus,        ObjectClass::kPedestrian, ObjectClass::kGolfCart};

std::string_view to_string(ObjectClass c);
// Throws std::invalid_argument on an unknown label.
ObjectClass parse_object_class(std::string_view s);

enum class BoxSource { kLidar, kRadar, kFused, kGroundTruth };

std::string_view to_string(BoxSource s);
BoxSource parse_box_source(std::string_view s);

// Oriented 3D box: `center` is the geometric center, `size` is
// (length along heading, width, height), `yaw` is the heading about +z.
struct DetectionBox {
  Vec3 center;
  Vec3 size{1.0, 1.0, 1.0};
  double yaw = 0.0;
  ObjectClass label = ObjectClass::kCar;
  double score = 1.0;
  std::optional<Vec2> velocity;
  BoxSource source = BoxSource::kLidar;

  friend bool operator==(const DetectionBox&, const DetectionBox&) = default;
};

// Empty when the box satisfies its invariants, otherwise the first problem.
std::optional<std::string> check_box(const DetectionBox& box);

// Canonical detection-set order: descending score, then center x, y, z, then
// the remaining fields so that the order is total.
bool canonical_less(const DetectionBox& a, const DetectionBox& b);
void sort_canonical(std::vector<DetectionBox>& boxes);

// One frame's worth of boxes from a single source.
struct DetectionFrame {
  std::string frame_id;
  std::vector<DetectionBox> boxes;

  friend bool operator==(const DetectionFrame&, const DetectionFrame&) = default;
};

}  // namespace rsp

#endif  // RSP_DETECTION_HPP_
