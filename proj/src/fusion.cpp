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

#include "rsp/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace rsp {

std::array<Vec2, 4> bev_corners(const DetectionBox& box) {
  const double c = std::cos(box.yaw), s = std::sin(box.yaw);
  const double hl = box.size.x / 2.0, hw = box.size.y / 2.0;
  const std::array<Vec2, 4> local = {Vec2{hl, hw}, Vec2{-hl, hw}, Vec2{-hl, -hw}, Vec2{hl, -hw}};
  std::array<Vec2, 4> out;
  for (std::size_t k = 0; k < 4; ++k) {
    out[k] = {box.center.x + c * local[k].x - s * local[k].y,
              box.center.y + s * local[k].x + c * local[k].y};
  }
  return out;
}

namespace {

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double polygon_area(const std::vector<Vec2>& poly) {
  double twice = 0.0;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const Vec2& p = poly[k];
    const Vec2& q = poly[(k + 1) % poly.size()];
    twice += p.x * q.y - q.x * p.y;
  }
  return std::abs(twice) / 2.0;
}

}  // namespace

double convex_intersection_area(const std::vector<Vec2>& subject, const std::vector<Vec2>& clip) {
  // Sutherland-Hodgman: clip `subject` by each edge of `clip`.
  std::vector<Vec2> poly = subject;
  for (std::size_t e = 0; e < clip.size() && !poly.empty(); ++e) {
    const Vec2& a = clip[e];
    const Vec2& b = clip[(e + 1) % clip.size()];
    std::vector<Vec2> next;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Vec2& p = poly[k];
      const Vec2& q = poly[(k + 1) % poly.size()];
      const double dp = cross(a, b, p);
      const double dq = cross(a, b, q);
      if (dp >= 0.0) next.push_back(p);
      if ((dp >= 0.0) != (dq >= 0.0)) {
        const double t = dp / (dp - dq);
        next.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
      }
    }
    poly = std::move(next);
  }
  if (poly.size() < 3) return 0.0;
  return polygon_area(poly);
}

double iou_3d(const DetectionBox& a, const DetectionBox& b) {
  const double za0 = a.center.z - a.size.z / 2.0, za1 = a.center.z + a.size.z / 2.0;
  const double zb0 = b.center.z - b.size.z / 2.0, zb1 = b.center.z + b.size.z / 2.0;
  const double dz = std::min(za1, zb1) - std::max(za0, zb0);
  if (dz <= 0.0) return 0.0;
  if (a.center == b.center && a.size == b.size && a.yaw == b.yaw) return 1.0;
  // Cheap reject on circumscribed circles.
  const double ra = std::hypot(a.size.x, a.size.y) / 2.0;
  const double rb = std::hypot(b.size.x, b.size.y) / 2.0;
  if (std::hypot(a.center.x - b.center.x, a.center.y - b.center.y) >= ra + rb) return 0.0;

  const auto ca = bev_corners(a);
  const auto cb = bev_corners(b);
  // Intersection is symmetric in theory; clip in a fixed argument order
  // (smaller key first) so iou_3d(a, b) and iou_3d(b, a) share the same bits.
  const bool swap = canonical_less(b, a);
  const std::vector<Vec2> pa(ca.begin(), ca.end()), pb(cb.begin(), cb.end());
  const double area = swap ? convex_intersection_area(pb, pa) : convex_intersection_area(pa, pb);
  if (area <= 0.0) return 0.0;
  const double inter = area * dz;
  const double vol_a = a.size.x * a.size.y * a.size.z;
  const double vol_b = b.size.x * b.size.y * b.size.z;
  const double uni = vol_a + vol_b - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

namespace {

DetectionBox merge(const DetectionBox& l, const DetectionBox& r) {
  double wl = l.score, wr = r.score;
  if (wl + wr <= 0.0) wl = wr = 1.0;
  const double share = wr / (wl + wr);
  // Written as an offset from x so that equal inputs reproduce x exactly.
  auto avg = [&](double x, double y) { return x + (y - x) * share; };
  DetectionBox f;
  f.center = {avg(l.center.x, r.center.x), avg(l.center.y, r.center.y),
              avg(l.center.z, r.center.z)};
  f.size = {avg(l.size.x, r.size.x), avg(l.size.y, r.size.y), avg(l.size.z, r.size.z)};
  const double sx = wl * std::sin(l.yaw) + wr * std::sin(r.yaw);
  const double cx = wl * std::cos(l.yaw) + wr * std::cos(r.yaw);
  if (l.yaw == r.yaw) {
    f.yaw = l.yaw;
  } else if (std::hypot(sx, cx) < 1e-12) {
    f.yaw = wl >= wr ? l.yaw : r.yaw;  // opposite headings, no mean direction
  } else {
    f.yaw = wrap_rad(std::atan2(sx, cx));
  }
  f.label = l.label;
  f.score = std::max(l.score, r.score);
  f.velocity = r.velocity ? r.velocity : l.velocity;
  f.source = BoxSource::kFused;
  return f;
}

}  // namespace

std::vector<DetectionBox> fuse_late(const std::vector<DetectionBox>& lidar,
                                    const std::vector<DetectionBox>& radar,
                                    const FusionConfig& cfg, FusionStats& stats) {
  if (!(cfg.iou_threshold > 0.0 && cfg.iou_threshold <= 1.0)) {
    throw std::invalid_argument("iou_threshold must lie in (0, 1]");
  }
  for (const auto* set : {&lidar, &radar}) {
    for (const auto& b : *set) {
      if (auto err = check_box(b)) throw std::invalid_argument(*err);
    }
  }

  struct Pair {
    double iou;
    std::size_t l, r;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < lidar.size(); ++i) {
    for (std::size_t k = 0; k < radar.size(); ++k) {
      if (lidar[i].label != radar[k].label) continue;
      const double v = iou_3d(lidar[i], radar[k]);
      if (v >= cfg.iou_threshold) pairs.push_back({v, i, k});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return std::tie(b.iou, a.l, a.r) < std::tie(a.iou, b.l, b.r);
  });

  std::vector<bool> used_l(lidar.size(), false), used_r(radar.size(), false);
  std::vector<DetectionBox> out;
  stats.matched_pairs = 0;
  for (const Pair& p : pairs) {
    if (used_l[p.l] || used_r[p.r]) continue;
    used_l[p.l] = used_r[p.r] = true;
    out.push_back(merge(lidar[p.l], radar[p.r]));
    ++stats.matched_pairs;
  }
  for (std::size_t i = 0; i < lidar.size(); ++i) {
    if (!used_l[i]) out.push_back(lidar[i]);
  }
  for (std::size_t k = 0; k < radar.size(); ++k) {
    if (!used_r[k]) out.push_back(radar[k]);
  }
  sort_canonical(out);
  return out;
}

std::vector<DetectionBox> fuse_late(const std::vector<DetectionBox>& lidar,
                                    const std::vector<DetectionBox>& radar,
                                    const FusionConfig& cfg) {
  FusionStats stats;
  return fuse_late(lidar, radar, cfg, stats);
}

}  // namespace rsp
