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

#ifndef RSP_PLACEMENT_HPP_
#define RSP_PLACEMENT_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsp/visibility.hpp"

namespace rsp {

// A cell counts as seen by a modality when its log-visibility sum reaches
// tau - kThresholdTolerance. The slack absorbs rounding in -ln(1 - v) so that
// a single sensor with v = 1 - exp(-tau) meets the threshold.
inline constexpr double kThresholdTolerance = 1e-9;

// Largest instance (lidar + radar candidates) solve_exhaustive accepts.
inline constexpr std::size_t kMaxExhaustiveCandidates = 20;

// The budgeted two-modality placement model:
//
//   max  sum_j t_j * rho_j
//   s.t. sum_i x_i + sum_i y_i <= budget
//        sum_i -ln(1 - Vl(i,j)) x_i >= tau * t_j
//        sum_i -ln(1 - Vr(i,j)) y_i >= tau * t_j
//        rho_j = w_j * (sum_i Vl(i,j) x_i + sum_i Vr(i,j) y_i)
//        x, y, t binary
//
// An optional monetary limit adds sum cost_i (x_i or y_i) <= cost_limit using
// the per-row costs carried by the matrices.
struct PlacementProblem {
  VisibilityMatrix vl;
  VisibilityMatrix vr;
  DenseMatrix ll;  // -ln(1 - vl)
  DenseMatrix lr;  // -ln(1 - vr)
  std::vector<double> weights;
  int budget = 0;
  double tau = 1.0;
  std::optional<double> cost_limit;

  std::size_t n_lidar() const { return vl.rows(); }
  std::size_t n_radar() const { return vr.rows(); }
  std::size_t n_cells() const { return weights.size(); }
};

// Builds the log transforms and checks shapes. Throws ValidationError when
// the column counts disagree with `weights`, budget < 0, tau <= 0, or a
// weight is negative.
PlacementProblem make_problem(VisibilityMatrix vl, VisibilityMatrix vr,
                              std::vector<double> weights, int budget,
                              double tau = 1.0,
                              std::optional<double> cost_limit = std::nullopt);

// Chosen candidate rows, each list sorted ascending. Ordering is
// lexicographic on the lidar list, then the radar list; the smallest optimal
// selection in this order is the canonical optimum.
struct Selection {
  std::vector<std::size_t> lidar;
  std::vector<std::size_t> radar;

  std::size_t size() const { return lidar.size() + radar.size(); }
  friend auto operator<=>(const Selection&, const Selection&) = default;
  friend bool operator==(const Selection&, const Selection&) = default;
};

struct PlacementSolution {
  Selection selection;
  std::vector<std::uint8_t> t;
  std::vector<double> rho;
  double objective = 0.0;
  bool optimal = false;
};

// True when `sel` respects the count budget and the optional cost limit.
bool is_feasible(const PlacementProblem& problem, const Selection& sel);

double selection_cost(const PlacementProblem& problem, const Selection& sel);

// Per-cell t, rho and the objective of a fixed selection. The budget is not
// enforced. Throws std::out_of_range on a bad index. Unsorted or duplicated
// ids are normalized first.
PlacementSolution evaluate_selection(const PlacementProblem& problem, Selection sel);

// Enumerates every feasible selection. Throws GuardError when the instance
// has more than kMaxExhaustiveCandidates candidates.
PlacementSolution solve_exhaustive(const PlacementProblem& problem);

// Depth-first include/exclude search with a monotone superset bound, warm
// started from the greedy solution. Returns the canonical optimum.
PlacementSolution solve_branch_bound(const PlacementProblem& problem);

// Adds the best single candidate per round until the budget is spent or no
// candidate improves the objective. Gain ties go to lidar before radar, then
// the lower index. When no single candidate improves the objective (always
// the case from an empty start, since a cell needs both modalities), the
// best lidar + radar pair is added as one step instead.
PlacementSolution solve_greedy(const PlacementProblem& problem);

enum class SolverKind { kExhaustive, kBranchBound, kGreedy };

std::string_view to_string(SolverKind k);
// Accepts "exhaustive", "bnb", "greedy".
SolverKind parse_solver(std::string_view s);

PlacementSolution solve(const PlacementProblem& problem, SolverKind kind);

}  // namespace rsp

#endif  // RSP_PLACEMENT_HPP_
