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

#ifndef RSP_COVERAGE_HPP_
#define RSP_COVERAGE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsp/placement.hpp"

namespace rsp {

struct CoverageReport {
  std::string config_name;
  double central_coverage = 0.0;
  std::size_t covered_cells = 0;
  std::size_t total_roi_cells = 0;
  std::size_t lidar_covered_cells = 0;
  std::size_t radar_covered_cells = 0;
  double total_cost = 0.0;
  double lidar_cost = 0.0;
  double radar_cost = 0.0;
  std::vector<std::size_t> cells;     // ROI cell index per column
  std::vector<std::uint8_t> covered;  // per column
};

// Share of ROI cells whose best selected sensor (either modality) has
// visibility above `theta`. Throws std::out_of_range on a bad index and
// std::invalid_argument when theta is outside [0, 1).
CoverageReport central_coverage(const PlacementProblem& problem, const Selection& sel,
                                double theta = 0.0, std::string config_name = {});

struct PairwiseComparison {
  std::string baseline;  // a
  std::string other;     // b
  double coverage_delta = 0.0;                // b - a, in coverage fraction
  std::optional<double> cost_reduction_pct;   // 100 (cost_a - cost_b) / cost_a
};

struct ComparisonTable {
  std::vector<CoverageReport> reports;
  std::vector<PairwiseComparison> pairs;  // every a < b in input order
};

// Throws std::invalid_argument with fewer than two reports.
ComparisonTable compare_configs(const std::vector<CoverageReport>& reports);

// Aligned plain-text rendering; undefined reductions print as "undefined".
std::string render_comparison(const ComparisonTable& table);

}  // namespace rsp

#endif  // RSP_COVERAGE_HPP_
