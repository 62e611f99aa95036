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

#ifndef RSP_FUSION_HPP_
#define RSP_FUSION_HPP_

#include <array>
#include <vector>

#include "rsp/detection.hpp"

namespace rsp {

// Footprint corners in counter-clockwise order.
std::array<Vec2, 4> bev_corners(const DetectionBox& box);

// Area of the intersection of two convex counter-clockwise polygons.
double convex_intersection_area(const std::vector<Vec2>& a, const std::vector<Vec2>& b);

// Rotated 3D IoU: footprint intersection area times vertical overlap over the
// volume union. Symmetric; 0 for disjoint or degenerate overlaps.
double iou_3d(const DetectionBox& a, const DetectionBox& b);

struct FusionConfig {
  double iou_threshold = 0.3;  // (0, 1]
};

// Late fusion of one frame's lidar and radar boxes.
//
// Same-class lidar/radar pairs with iou_3d >= threshold are matched greedily
// in descending IoU, each box at most once. A matched pair becomes one fused
// box: score-weighted center and size, score-weighted circular-mean yaw,
// max score, radar velocity when present. Unmatched boxes pass through. The
// result is in canonical order. Throws std::invalid_argument on an invalid
// threshold or box.
std::vector<DetectionBox> fuse_late(const std::vector<DetectionBox>& lidar,
                                    const std::vector<DetectionBox>& radar,
                                    const FusionConfig& cfg = {});

struct FusionStats {
  std::size_t matched_pairs = 0;
};

// As fuse_late, also reporting how many pairs were merged.
std::vector<DetectionBox> fuse_late(const std::vector<DetectionBox>& lidar,
                                    const std::vector<DetectionBox>& radar,
                                    const FusionConfig& cfg, FusionStats& stats);

}  // namespace rsp

#endif  // RSP_FUSION_HPP_
