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

#ifndef RSP_VISIBILITY_HPP_
#define RSP_VISIBILITY_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rsp/scene.hpp"

namespace rsp {

// Row-major dense matrix.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;
};

inline constexpr double kDefaultEpsilon = 1e-6;

// Candidate x target-cell detection probabilities for one modality.
//
// Rows follow the scene's candidate order, columns the ROI cells in ascending
// index order. Every entry lies in [0, max_entry()]. The matrix also carries
// per-row candidate ids and unit costs so that it can be optimized without the
// scene, plus the hash of the scene it was computed from.
struct VisibilityMatrix {
  Modality modality = Modality::kLidar;
  DenseMatrix values;
  double epsilon = kDefaultEpsilon;
  std::vector<std::size_t> cells;
  std::vector<std::string> row_ids;
  std::vector<double> row_costs;
  std::string scene_hash;

  std::size_t rows() const { return values.rows; }
  std::size_t cols() const { return values.cols; }
  double operator()(std::size_t i, std::size_t j) const { return values(i, j); }
  double max_entry() const;

  friend bool operator==(const VisibilityMatrix&, const VisibilityMatrix&) = default;
};

// Rounds to the 9-significant-digit decimal used on disk, so that in-memory
// and reloaded matrices hold the same bits.
double canonical_entry(double v);

// Largest admissible entry for clamp `epsilon`: canonical_entry(1 - epsilon).
double clamp_bound(double epsilon);

struct VisibilityConfig {
  int samples_per_cell = 9;  // must be a perfect square (n x n lattice)
  double object_height_m = 1.7;
  std::optional<double> sample_height_m;  // defaults to object_height_m / 2
  double epsilon = kDefaultEpsilon;

  double sample_height() const { return sample_height_m.value_or(object_height_m / 2.0); }

  friend bool operator==(const VisibilityConfig&, const VisibilityConfig&) = default;
};

// Throws ValidationError when the config is out of range.
void check_visibility_config(const VisibilityConfig& cfg);

// Beam elevations (deg) spread uniformly over [-vfov/2, +vfov/2], both ends
// included. Throws std::invalid_argument for a radar spec.
std::vector<double> beam_elevations(const SensorSpec& spec);

// Fraction of the cell's sample lattice the mount can see, clamped to
// clamp_bound(cfg.epsilon).
double cell_visibility(const Scene& scene, const CandidateMount& mount,
                       std::size_t cell, const VisibilityConfig& cfg);

// Visibility matrices for both candidate sets. `workers` only changes the
// wall time, never the output bits. Throws ValidationError on an invalid
// scene or config.
std::pair<VisibilityMatrix, VisibilityMatrix> build_visibility(
    const Scene& scene, const VisibilityConfig& cfg, int workers = 1);

// Single-modality variant of build_visibility.
VisibilityMatrix build_visibility(const Scene& scene, Modality modality,
                                  const VisibilityConfig& cfg, int workers = 1);

// Entrywise -ln(1 - v). Throws std::domain_error on an entry outside [0, 1).
DenseMatrix log_visibility(const VisibilityMatrix& v);

}  // namespace rsp

#endif  // RSP_VISIBILITY_HPP_
