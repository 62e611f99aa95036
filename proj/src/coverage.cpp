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

#include "rsp/coverage.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace rsp {

CoverageReport central_coverage(const PlacementProblem& problem, const Selection& sel,
                                double theta, std::string config_name) {
  if (!(theta >= 0.0 && theta < 1.0)) {
    throw std::invalid_argument("coverage threshold must lie in [0, 1)");
  }
  for (std::size_t i : sel.lidar) {
    if (i >= problem.n_lidar()) throw std::out_of_range("lidar index out of range");
  }
  for (std::size_t i : sel.radar) {
    if (i >= problem.n_radar()) throw std::out_of_range("radar index out of range");
  }
  CoverageReport r;
  r.config_name = std::move(config_name);
  r.total_roi_cells = problem.n_cells();
  r.cells = problem.vl.cells;
  r.covered.assign(problem.n_cells(), 0);
  for (std::size_t j = 0; j < problem.n_cells(); ++j) {
    double best_lidar = 0.0, best_radar = 0.0;
    for (std::size_t i : sel.lidar) best_lidar = std::max(best_lidar, problem.vl(i, j));
    for (std::size_t i : sel.radar) best_radar = std::max(best_radar, problem.vr(i, j));
    const bool by_lidar = !sel.lidar.empty() && best_lidar > theta;
    const bool by_radar = !sel.radar.empty() && best_radar > theta;
    r.lidar_covered_cells += by_lidar;
    r.radar_covered_cells += by_radar;
    if (by_lidar || by_radar) {
      r.covered[j] = 1;
      ++r.covered_cells;
    }
  }
  r.central_coverage = r.total_roi_cells == 0
                           ? 0.0
                           : static_cast<double>(r.covered_cells) /
                                 static_cast<double>(r.total_roi_cells);
  for (std::size_t i : sel.lidar) {
    r.lidar_cost += problem.vl.row_costs.empty() ? 0.0 : problem.vl.row_costs[i];
  }
  for (std::size_t i : sel.radar) {
    r.radar_cost += problem.vr.row_costs.empty() ? 0.0 : problem.vr.row_costs[i];
  }
  r.total_cost = r.lidar_cost + r.radar_cost;
  return r;
}

ComparisonTable compare_configs(const std::vector<CoverageReport>& reports) {
  if (reports.size() < 2) throw std::invalid_argument("need at least two reports to compare");
  ComparisonTable table;
  table.reports = reports;
  for (std::size_t a = 0; a < reports.size(); ++a) {
    for (std::size_t b = a + 1; b < reports.size(); ++b) {
      PairwiseComparison c;
      c.baseline = reports[a].config_name;
      c.other = reports[b].config_name;
      c.coverage_delta = reports[b].central_coverage - reports[a].central_coverage;
      if (reports[a].total_cost != 0.0) {
        c.cost_reduction_pct =
            100.0 * (reports[a].total_cost - reports[b].total_cost) / reports[a].total_cost;
      }
      table.pairs.push_back(std::move(c));
    }
  }
  return table;
}

std::string render_comparison(const ComparisonTable& table) {
  std::size_t name_w = 6;
  for (const auto& r : table.reports) name_w = std::max(name_w, r.config_name.size());
  std::string out = fmt::format("{:<{}}  {:>9}  {:>7}  {:>5}  {:>12}  {:>12}  {:>12}\n",
                                "config", name_w, "coverage", "covered", "cells",
                                "cost", "lidar_cost", "radar_cost");
  for (const auto& r : table.reports) {
    out += fmt::format("{:<{}}  {:>8.2f}%  {:>7}  {:>5}  {:>12.2f}  {:>12.2f}  {:>12.2f}\n",
                       r.config_name, name_w, 100.0 * r.central_coverage, r.covered_cells,
                       r.total_roi_cells, r.total_cost, r.lidar_cost, r.radar_cost);
  }
  out += "\n";
  out += fmt::format("{:<{}}  {:<{}}  {:>14}  {:>15}\n", "baseline", name_w, "other", name_w,
                     "coverage_delta", "cost_reduction");
  for (const auto& c : table.pairs) {
    const std::string reduction = c.cost_reduction_pct
                                      ? fmt::format("{:.1f}%", *c.cost_reduction_pct)
                                      : std::string("undefined");
    out += fmt::format("{:<{}}  {:<{}}  {:>+13.2f}%  {:>15}\n", c.baseline, name_w, c.other,
                       name_w, 100.0 * c.coverage_delta, reduction);
  }
  return out;
}

}  // namespace rsp
