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

#include "rsp/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "rsp/error.hpp"

namespace rsp {

double canonical_entry(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::strtod(buf, nullptr);
}

double clamp_bound(double epsilon) { return canonical_entry(1.0 - epsilon); }

double VisibilityMatrix::max_entry() const { return clamp_bound(epsilon); }

void check_visibility_config(const VisibilityConfig& cfg) {
  if (cfg.samples_per_cell < 1) {
    throw ValidationError("samples_per_cell must be >= 1");
  }
  const int side = static_cast<int>(std::lround(std::sqrt(cfg.samples_per_cell)));
  if (side * side != cfg.samples_per_cell) {
    throw ValidationError("samples_per_cell must be a perfect square, got " +
                          std::to_string(cfg.samples_per_cell));
  }
  if (!(cfg.object_height_m > 0.0)) throw ValidationError("object_height_m must be > 0");
  if (!(cfg.sample_height() >= 0.0)) throw ValidationError("sample_height_m must be >= 0");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
    throw ValidationError("epsilon must lie in (0, 1)");
  }
  if (!(clamp_bound(cfg.epsilon) < 1.0)) {
    throw ValidationError("epsilon too small for the 9-digit matrix encoding");
  }
}

std::vector<double> beam_elevations(const SensorSpec& spec) {
  if (spec.modality != Modality::kLidar || !spec.beams) {
    throw std::invalid_argument("beam_elevations needs a lidar spec");
  }
  const int n = *spec.beams;
  std::vector<double> out(static_cast<std::size_t>(n));
  const double lo = -spec.vfov_deg / 2.0;
  if (n == 1) {
    out[0] = 0.0;
    return out;
  }
  const double step = spec.vfov_deg / static_cast<double>(n - 1);
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = lo + step * k;
  out.back() = spec.vfov_deg / 2.0;
  return out;
}

namespace {

// Mount pose with precomputed trig, shared by all samples of a row.
struct MountFrame {
  Vec3 origin;
  double cos_yaw, sin_yaw, cos_pitch, sin_pitch;
  double yaw_deg;

  explicit MountFrame(const CandidateMount& m)
      : origin(m.position),
        cos_yaw(std::cos(deg_to_rad(m.yaw_deg))),
        sin_yaw(std::sin(deg_to_rad(m.yaw_deg))),
        cos_pitch(std::cos(deg_to_rad(m.pitch_deg))),
        sin_pitch(std::sin(deg_to_rad(m.pitch_deg))),
        yaw_deg(m.yaw_deg) {}

  // Elevation (deg) of world point p above the mount's pitched horizontal
  // plane. Positive pitch tilts the sensor's forward axis downwards.
  double elevation_deg(const Vec3& p) const {
    const double dx = p.x - origin.x;
    const double dy = p.y - origin.y;
    const double dz = p.z - origin.z;
    const double fwd = dx * cos_yaw + dy * sin_yaw;
    const double side = -dx * sin_yaw + dy * cos_yaw;
    const double fwd_s = fwd * cos_pitch - dz * sin_pitch;
    const double up_s = fwd * sin_pitch + dz * cos_pitch;
    return rad_to_deg(std::atan2(up_s, std::hypot(fwd_s, side)));
  }
};

struct SensorModel {
  const SensorSpec* spec;
  std::vector<double> beams;  // empty for radar
};

bool sample_covered(const Scene& scene, const MountFrame& frame,
                    const SensorModel& model, const Vec3& sample,
                    const VisibilityConfig& cfg) {
  const SensorSpec& spec = *model.spec;
  const double dx = sample.x - frame.origin.x;
  const double dy = sample.y - frame.origin.y;
  const double horizontal = std::hypot(dx, dy);
  if (horizontal > spec.max_range_m) return false;

  if (spec.hfov_deg < 360.0 && horizontal > 0.0) {
    const double rel = wrap_deg(rad_to_deg(std::atan2(dy, dx)) - frame.yaw_deg);
    if (std::abs(rel) > spec.hfov_deg / 2.0) return false;
  }

  if (spec.modality == Modality::kRadar) {
    if (std::abs(frame.elevation_deg(sample)) > spec.vfov_deg / 2.0) return false;
  } else {
    const double e0 = frame.elevation_deg({sample.x, sample.y, 0.0});
    const double e1 = frame.elevation_deg({sample.x, sample.y, cfg.object_height_m});
    const double lo = std::min(e0, e1);
    const double hi = std::max(e0, e1);
    auto it = std::lower_bound(model.beams.begin(), model.beams.end(), lo);
    if (it == model.beams.end() || *it > hi) return false;
  }

  for (const Occluder& occ : scene.occluders) {
    if (segment_intersects_box(frame.origin, sample, occ.box)) return false;
  }
  return true;
}

double visibility_for(const Scene& scene, const MountFrame& frame,
                      const SensorModel& model, std::size_t cell,
                      const VisibilityConfig& cfg, int side) {
  const Vec3 center = cell_center(scene.grid, cell);
  const double cs = scene.grid.cell_size;
  const double x0 = center.x - cs / 2.0;
  const double y0 = center.y - cs / 2.0;
  const double z = cfg.sample_height();
  int covered = 0;
  for (int a = 0; a < side; ++a) {
    for (int b = 0; b < side; ++b) {
      const Vec3 p{x0 + (b + 0.5) / side * cs, y0 + (a + 0.5) / side * cs, z};
      if (sample_covered(scene, frame, model, p, cfg)) ++covered;
    }
  }
  const double v = static_cast<double>(covered) / static_cast<double>(side * side);
  return std::min(canonical_entry(v), clamp_bound(cfg.epsilon));
}

SensorModel model_for(const SensorSpec& spec) {
  SensorModel m{&spec, {}};
  if (spec.modality == Modality::kLidar) m.beams = beam_elevations(spec);
  return m;
}

int lattice_side(const VisibilityConfig& cfg) {
  return static_cast<int>(std::lround(std::sqrt(cfg.samples_per_cell)));
}

}  // namespace

double cell_visibility(const Scene& scene, const CandidateMount& mount,
                       std::size_t cell, const VisibilityConfig& cfg) {
  check_visibility_config(cfg);
  const SensorModel model = model_for(mount.spec);
  return visibility_for(scene, MountFrame(mount), model, cell, cfg, lattice_side(cfg));
}

VisibilityMatrix build_visibility(const Scene& scene, Modality modality,
                                  const VisibilityConfig& cfg, int workers) {
  check_visibility_config(cfg);
  if (auto violations = validate_scene(scene); !violations.empty()) {
    throw ValidationError("invalid scene: " + violations.front().subject + ": " +
                          violations.front().message);
  }
  const auto& mounts = scene.candidates(modality);
  const std::vector<std::size_t> cells(scene.roi.cells.begin(), scene.roi.cells.end());

  VisibilityMatrix out;
  out.modality = modality;
  out.epsilon = cfg.epsilon;
  out.cells = cells;
  out.values = DenseMatrix(mounts.size(), cells.size());
  for (const auto& m : mounts) {
    out.row_ids.push_back(m.id);
    out.row_costs.push_back(m.spec.unit_cost);
  }

  const int side = lattice_side(cfg);
  const std::size_t total = mounts.size() * cells.size();
  // Each (candidate, cell) entry is computed independently and written to its
  // own slot, so the result does not depend on the partition.
  auto work = [&](std::size_t begin, std::size_t end) {
    std::size_t cached_row = static_cast<std::size_t>(-1);
    std::optional<MountFrame> frame;
    SensorModel model{};
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t i = k / cells.size();
      const std::size_t c = k % cells.size();
      if (i != cached_row) {
        frame.emplace(mounts[i]);
        model = model_for(mounts[i].spec);
        cached_row = i;
      }
      out.values.data[k] = visibility_for(scene, *frame, model, cells[c], cfg, side);
    }
  };

  const std::size_t n_workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1,
                              std::max<std::size_t>(total, 1));
  if (n_workers == 1) {
    work(0, total);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (total + n_workers - 1) / n_workers;
    for (std::size_t w = 0; w < n_workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(total, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(work, begin, end);
    }
  }
  return out;
}

std::pair<VisibilityMatrix, VisibilityMatrix> build_visibility(
    const Scene& scene, const VisibilityConfig& cfg, int workers) {
  return {build_visibility(scene, Modality::kLidar, cfg, workers),
          build_visibility(scene, Modality::kRadar, cfg, workers)};
}

DenseMatrix log_visibility(const VisibilityMatrix& v) {
  DenseMatrix out(v.rows(), v.cols());
  for (std::size_t k = 0; k < v.values.data.size(); ++k) {
    const double x = v.values.data[k];
    if (!(x >= 0.0 && x < 1.0)) {
      throw std::domain_error("visibility entry " + std::to_string(x) +
                              " outside [0, 1); matrix is corrupted");
    }
    out.data[k] = -std::log1p(-x);
  }
  return out;
}

}  // namespace rsp
