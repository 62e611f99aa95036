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

#ifndef RSP_GEOMETRY_HPP_
#define RSP_GEOMETRY_HPP_

#include <cmath>
#include <numbers>

namespace rsp {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline constexpr double kPi = std::numbers::pi;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Wraps to (-180, 180].
inline double wrap_deg(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w <= -180.0) w += 360.0;
  if (w > 180.0) w -= 360.0;
  return w;
}

// Wraps to (-pi, pi].
inline double wrap_rad(double rad) {
  double w = std::fmod(rad, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  if (w > kPi) w -= 2.0 * kPi;
  return w;
}

// Closed axis-aligned box.
struct Aabb {
  Vec3 min;
  Vec3 max;
  friend bool operator==(const Aabb&, const Aabb&) = default;
};

// Slab test: true when the closed segment [a, b] touches the closed box.
bool segment_intersects_box(const Vec3& a, const Vec3& b, const Aabb& box);

}  // namespace rsp

#endif  // RSP_GEOMETRY_HPP_
