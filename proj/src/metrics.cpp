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

#include "rsp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "rsp/fusion.hpp"

namespace rsp {

std::string_view to_string(MatchMode m) {
  return m == MatchMode::kIou ? "iou" : "center_distance";
}

MatchMode parse_match_mode(std::string_view s) {
  if (s == "iou") return MatchMode::kIou;
  if (s == "center_distance" || s == "center") return MatchMode::kCenterDistance;
  throw std::invalid_argument("unknown match mode '" + std::string(s) + "'");
}

double default_threshold(ObjectClass c, MatchMode mode) {
  if (mode == MatchMode::kCenterDistance) return 2.0;
  return (c == ObjectClass::kPedestrian || c == ObjectClass::kMotorcycle) ? 0.25 : 0.5;
}

namespace {

struct Outcome {
  double score;
  std::size_t frame;  // position in the sorted frame-id order
  std::size_t box;    // index within the frame's prediction list
  bool tp;
};

double bev_distance(const DetectionBox& a, const DetectionBox& b) {
  return std::hypot(a.center.x - b.center.x, a.center.y - b.center.y);
}

}  // namespace

APResult evaluate_ap(const std::vector<FramePair>& frames, ObjectClass label, MatchMode mode,
                     double threshold) {
  if (frames.empty()) throw std::invalid_argument("evaluate_ap needs at least one frame");
  std::vector<std::size_t> order(frames.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return frames[a].frame_id < frames[b].frame_id;
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (frames[order[k]].frame_id == frames[order[k - 1]].frame_id) {
      throw std::invalid_argument("duplicate frame id '" + frames[order[k]].frame_id + "'");
    }
  }

  APResult result;
  result.label = label;
  result.mode = mode;
  result.threshold = threshold;

  std::vector<Outcome> outcomes;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const FramePair& f = frames[order[rank]];
    std::vector<const DetectionBox*> gts;
    for (const auto& g : f.ground_truth) {
      if (g.label == label) gts.push_back(&g);
    }
    std::stable_sort(gts.begin(), gts.end(), [](const DetectionBox* a, const DetectionBox* b) {
      return canonical_less(*a, *b);
    });
    result.num_ground_truth += gts.size();

    // Predictions of this class, descending score; ties keep box order. The
    // box index is the position in canonical order so that input order does
    // not matter.
    std::vector<DetectionBox> preds;
    for (const auto& p : f.predictions) {
      if (p.label == label) preds.push_back(p);
    }
    sort_canonical(preds);
    std::vector<bool> taken(gts.size(), false);
    for (std::size_t k = 0; k < preds.size(); ++k) {
      std::optional<std::size_t> best;
      double best_value = 0.0;
      for (std::size_t g = 0; g < gts.size(); ++g) {
        if (taken[g]) continue;
        if (mode == MatchMode::kIou) {
          const double v = iou_3d(preds[k], *gts[g]);
          if (!best || v > best_value) best = g, best_value = v;
        } else {
          const double d = bev_distance(preds[k], *gts[g]);
          if (!best || d < best_value) best = g, best_value = d;
        }
      }
      const bool tp = best && (mode == MatchMode::kIou ? best_value >= threshold
                                                       : best_value <= threshold);
      if (tp) taken[*best] = true;
      outcomes.push_back({preds[k].score, rank, k, tp});
    }
  }
  result.num_predictions = outcomes.size();
  if (result.num_ground_truth == 0) return result;

  std::sort(outcomes.begin(), outcomes.end(), [](const Outcome& a, const Outcome& b) {
    return std::make_tuple(-a.score, a.frame, a.box) < std::make_tuple(-b.score, b.frame, b.box);
  });
  const std::size_t n_gt = result.num_ground_truth;
  std::vector<std::size_t> tp_at;
  std::size_t tp = 0;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    tp += outcomes[k].tp;
    tp_at.push_back(tp);
    result.precision.push_back(static_cast<double>(tp) / static_cast<double>(k + 1));
    result.recall.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
  }
  result.true_positives = tp;

  // Interpolated precision at recall r is the best precision at any recall
  // >= r. A suffix maximum makes each lookup O(1); recall levels compare in
  // integers (tp * 100 >= level * n_gt) to avoid rounding at the boundaries.
  std::vector<double> suffix_max(result.precision.size() + 1, 0.0);
  for (std::size_t k = result.precision.size(); k-- > 0;) {
    suffix_max[k] = std::max(suffix_max[k + 1], result.precision[k]);
  }
  double sum = 0.0;
  std::size_t k = 0;
  const std::size_t steps = kRecallPoints - 1;
  for (std::size_t level = 0; level <= steps; ++level) {
    while (k < tp_at.size() && tp_at[k] * steps < level * n_gt) ++k;
    if (k < tp_at.size()) sum += suffix_max[k];
  }
  result.ap = sum / kRecallPoints;
  return result;
}

MapResult evaluate_map(const std::vector<FramePair>& frames, MatchMode mode,
                       std::optional<double> threshold) {
  MapResult out;
  double sum = 0.0;
  int defined = 0;
  for (ObjectClass c : kAllClasses) {
    APResult r = evaluate_ap(frames, c, mode, threshold.value_or(default_threshold(c, mode)));
    if (r.ap) {
      sum += *r.ap;
      ++defined;
    }
    out.per_class.emplace(c, std::move(r));
  }
  if (defined == 0) throw std::domain_error("no evaluable classes");
  out.map = sum / defined;
  return out;
}

std::vector<FramePair> pair_frames(const std::vector<DetectionFrame>& ground_truth,
                                   const std::vector<DetectionFrame>& predictions) {
  std::map<std::string, FramePair> joined;
  for (const auto& f : ground_truth) {
    auto& p = joined[f.frame_id];
    p.frame_id = f.frame_id;
    p.ground_truth.insert(p.ground_truth.end(), f.boxes.begin(), f.boxes.end());
  }
  for (const auto& f : predictions) {
    auto& p = joined[f.frame_id];
    p.frame_id = f.frame_id;
    p.predictions.insert(p.predictions.end(), f.boxes.begin(), f.boxes.end());
  }
  std::vector<FramePair> out;
  for (auto& [id, p] : joined) out.push_back(std::move(p));
  return out;
}

}  // namespace rsp
