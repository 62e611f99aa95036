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

#include "rsp/placement.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "rsp/error.hpp"

namespace rsp {

PlacementProblem make_problem(VisibilityMatrix vl, VisibilityMatrix vr,
                              std::vector<double> weights, int budget, double tau,
                              std::optional<double> cost_limit) {
  if (vl.modality != Modality::kLidar || vr.modality != Modality::kRadar) {
    throw ValidationError("expected a lidar matrix and a radar matrix");
  }
  if (vl.cols() != weights.size() || vr.cols() != weights.size()) {
    throw ValidationError("matrix column counts (" + std::to_string(vl.cols()) + ", " +
                          std::to_string(vr.cols()) + ") do not match " +
                          std::to_string(weights.size()) + " weights");
  }
  if (budget < 0) throw ValidationError("budget must be >= 0");
  if (!(tau > 0.0)) throw ValidationError("tau must be > 0");
  for (double w : weights) {
    if (!(w >= 0.0)) throw ValidationError("cell weights must be >= 0");
  }
  if (cost_limit && !(*cost_limit >= 0.0)) throw ValidationError("cost limit must be >= 0");
  auto fill_costs = [](VisibilityMatrix& m) {
    if (m.row_costs.empty()) m.row_costs.assign(m.rows(), 0.0);
    if (m.row_costs.size() != m.rows()) throw ValidationError("row cost count mismatch");
  };
  fill_costs(vl);
  fill_costs(vr);

  PlacementProblem p;
  p.ll = log_visibility(vl);
  p.lr = log_visibility(vr);
  p.vl = std::move(vl);
  p.vr = std::move(vr);
  p.weights = std::move(weights);
  p.budget = budget;
  p.tau = tau;
  p.cost_limit = cost_limit;
  return p;
}

namespace {

void normalize(std::vector<std::size_t>& ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

struct CellTerms {
  std::vector<double> lidar_log, radar_log, mass;
};

// Single source of truth for the objective. Ids must be sorted; sums run in
// ascending id order so that adding candidates can only grow every partial
// sum, which keeps the superset bound admissible in floating point too.
double objective_of(const PlacementProblem& p, const std::vector<std::size_t>& lidar,
                    const std::vector<std::size_t>& radar, CellTerms& scratch,
                    PlacementSolution* out = nullptr) {
  const std::size_t n = p.n_cells();
  scratch.lidar_log.assign(n, 0.0);
  scratch.radar_log.assign(n, 0.0);
  std::vector<double> lidar_mass(n, 0.0), radar_mass(n, 0.0);
  for (std::size_t i : lidar) {
    for (std::size_t j = 0; j < n; ++j) {
      scratch.lidar_log[j] += p.ll(i, j);
      lidar_mass[j] += p.vl(i, j);
    }
  }
  for (std::size_t i : radar) {
    for (std::size_t j = 0; j < n; ++j) {
      scratch.radar_log[j] += p.lr(i, j);
      radar_mass[j] += p.vr(i, j);
    }
  }
  const double threshold = p.tau - kThresholdTolerance;
  double objective = 0.0;
  if (out) {
    out->t.assign(n, 0);
    out->rho.assign(n, 0.0);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double rho = (lidar_mass[j] + radar_mass[j]) * p.weights[j];
    const bool seen = scratch.lidar_log[j] >= threshold && scratch.radar_log[j] >= threshold;
    if (seen) objective += rho;
    if (out) {
      out->t[j] = seen ? 1 : 0;
      out->rho[j] = rho;
    }
  }
  return objective;
}

// Flattened candidate: modality plus row index.
struct Candidate {
  Modality modality;
  std::size_t index;
};

std::vector<Candidate> all_candidates(const PlacementProblem& p) {
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < p.n_lidar(); ++i) out.push_back({Modality::kLidar, i});
  for (std::size_t i = 0; i < p.n_radar(); ++i) out.push_back({Modality::kRadar, i});
  return out;
}

double cost_of(const PlacementProblem& p, const Candidate& c) {
  return c.modality == Modality::kLidar ? p.vl.row_costs[c.index] : p.vr.row_costs[c.index];
}

bool fits(const PlacementProblem& p, std::size_t count, double cost) {
  if (count > static_cast<std::size_t>(p.budget)) return false;
  if (p.cost_limit && cost > *p.cost_limit) return false;
  return true;
}

Selection to_selection(const std::vector<Candidate>& chosen) {
  Selection sel;
  for (const auto& c : chosen) {
    (c.modality == Modality::kLidar ? sel.lidar : sel.radar).push_back(c.index);
  }
  normalize(sel.lidar);
  normalize(sel.radar);
  return sel;
}

PlacementSolution finish(const PlacementProblem& p, Selection sel, bool optimal) {
  PlacementSolution s = evaluate_selection(p, std::move(sel));
  s.optimal = optimal;
  return s;
}

// Smallest selection (in Selection order) whose objective equals `target`.
// Lidar sets are enumerated in lexicographic pre-order, and for each lidar
// set the radar sets likewise, which visits selections in ascending order.
// Subtrees whose superset bound falls below `target` are skipped.
class Canonicalizer {
 public:
  Canonicalizer(const PlacementProblem& p, double target) : p_(p), target_(target) {}

  Selection run() {
    std::vector<std::size_t> lidar;
    if (!lidar_node(lidar, 0, 0.0)) {
      throw std::logic_error("canonical optimum not found");
    }
    return found_;
  }

 private:
  bool lidar_node(std::vector<std::size_t>& lidar, std::size_t next, double cost) {
    if (!fits(p_, lidar.size(), cost)) return false;
    std::vector<std::size_t> superset = lidar;
    for (std::size_t i = next; i < p_.n_lidar(); ++i) superset.push_back(i);
    if (objective_of(p_, superset, all_radar(), scratch_) < target_) return false;

    std::vector<std::size_t> radar;
    if (radar_node(lidar, radar, 0, cost)) return true;
    for (std::size_t i = next; i < p_.n_lidar(); ++i) {
      lidar.push_back(i);
      const bool hit = lidar_node(lidar, i + 1, cost + p_.vl.row_costs[i]);
      lidar.pop_back();
      if (hit) return true;
    }
    return false;
  }

  bool radar_node(const std::vector<std::size_t>& lidar, std::vector<std::size_t>& radar,
                  std::size_t next, double cost) {
    if (!fits(p_, lidar.size() + radar.size(), cost)) return false;
    std::vector<std::size_t> superset = radar;
    for (std::size_t i = next; i < p_.n_radar(); ++i) superset.push_back(i);
    if (objective_of(p_, lidar, superset, scratch_) < target_) return false;
    if (objective_of(p_, lidar, radar, scratch_) == target_) {
      found_ = Selection{lidar, radar};
      return true;
    }
    for (std::size_t i = next; i < p_.n_radar(); ++i) {
      radar.push_back(i);
      const bool hit = radar_node(lidar, radar, i + 1, cost + p_.vr.row_costs[i]);
      radar.pop_back();
      if (hit) return true;
    }
    return false;
  }

  const std::vector<std::size_t>& all_radar() {
    if (all_radar_.size() != p_.n_radar()) {
      all_radar_.resize(p_.n_radar());
      std::iota(all_radar_.begin(), all_radar_.end(), std::size_t{0});
    }
    return all_radar_;
  }

  const PlacementProblem& p_;
  double target_;
  CellTerms scratch_;
  std::vector<std::size_t> all_radar_;
  Selection found_;
};

class BranchAndBound {
 public:
  BranchAndBound(const PlacementProblem& p, const PlacementSolution& warm) : p_(p) {
    incumbent_ = warm.objective;
    order_ = all_candidates(p);
    // Strong candidates first: descending weighted visibility mass.
    std::vector<double> mass(order_.size(), 0.0);
    for (std::size_t k = 0; k < order_.size(); ++k) {
      const auto& c = order_[k];
      const auto& v = c.modality == Modality::kLidar ? p.vl : p.vr;
      for (std::size_t j = 0; j < p.n_cells(); ++j) mass[k] += v(c.index, j) * p.weights[j];
    }
    std::vector<std::size_t> perm(order_.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::stable_sort(perm.begin(), perm.end(),
                     [&](std::size_t a, std::size_t b) { return mass[a] > mass[b]; });
    std::vector<Candidate> sorted;
    for (std::size_t k : perm) sorted.push_back(order_[k]);
    order_ = std::move(sorted);
  }

  double run() {
    std::vector<Candidate> includes;
    dfs(includes, 0, 0.0);
    return incumbent_;
  }

 private:
  double value(const std::vector<Candidate>& chosen) {
    const Selection sel = to_selection(chosen);
    return objective_of(p_, sel.lidar, sel.radar, scratch_);
  }

  void dfs(std::vector<Candidate>& includes, std::size_t pos, double cost) {
    const double here = value(includes);
    if (here > incumbent_) incumbent_ = here;
    if (pos == order_.size() || includes.size() == static_cast<std::size_t>(p_.budget)) return;

    std::vector<Candidate> superset = includes;
    superset.insert(superset.end(), order_.begin() + static_cast<std::ptrdiff_t>(pos),
                    order_.end());
    if (value(superset) <= incumbent_) return;

    const Candidate& c = order_[pos];
    const double with_cost = cost + cost_of(p_, c);
    if (fits(p_, includes.size() + 1, with_cost)) {
      includes.push_back(c);
      dfs(includes, pos + 1, with_cost);
      includes.pop_back();
    }
    dfs(includes, pos + 1, cost);
  }

  const PlacementProblem& p_;
  std::vector<Candidate> order_;
  double incumbent_ = 0.0;
  CellTerms scratch_;
};

}  // namespace

bool is_feasible(const PlacementProblem& problem, const Selection& sel) {
  return fits(problem, sel.size(), selection_cost(problem, sel));
}

double selection_cost(const PlacementProblem& problem, const Selection& sel) {
  double cost = 0.0;
  for (std::size_t i : sel.lidar) cost += problem.vl.row_costs.at(i);
  for (std::size_t i : sel.radar) cost += problem.vr.row_costs.at(i);
  return cost;
}

PlacementSolution evaluate_selection(const PlacementProblem& problem, Selection sel) {
  normalize(sel.lidar);
  normalize(sel.radar);
  if (!sel.lidar.empty() && sel.lidar.back() >= problem.n_lidar()) {
    throw std::out_of_range("lidar index " + std::to_string(sel.lidar.back()) + " out of range");
  }
  if (!sel.radar.empty() && sel.radar.back() >= problem.n_radar()) {
    throw std::out_of_range("radar index " + std::to_string(sel.radar.back()) + " out of range");
  }
  PlacementSolution out;
  CellTerms scratch;
  out.objective = objective_of(problem, sel.lidar, sel.radar, scratch, &out);
  out.selection = std::move(sel);
  return out;
}

PlacementSolution solve_exhaustive(const PlacementProblem& problem) {
  const auto candidates = all_candidates(problem);
  const std::size_t n = candidates.size();
  if (n > kMaxExhaustiveCandidates) {
    throw GuardError("exhaustive search refuses " + std::to_string(n) +
                     " candidates (limit " + std::to_string(kMaxExhaustiveCandidates) + ")");
  }
  CellTerms scratch;
  double best = -1.0;
  Selection best_sel;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > static_cast<std::size_t>(problem.budget)) {
      continue;
    }
    Selection sel;
    for (std::size_t k = 0; k < n; ++k) {
      if (mask & (std::uint32_t{1} << k)) {
        (candidates[k].modality == Modality::kLidar ? sel.lidar : sel.radar)
            .push_back(candidates[k].index);
      }
    }
    if (!is_feasible(problem, sel)) continue;
    const double obj = objective_of(problem, sel.lidar, sel.radar, scratch);
    if (obj > best || (obj == best && sel < best_sel)) {
      best = obj;
      best_sel = std::move(sel);
    }
  }
  return finish(problem, std::move(best_sel), true);
}

PlacementSolution solve_greedy(const PlacementProblem& problem) {
  const auto candidates = all_candidates(problem);
  std::vector<bool> used(candidates.size(), false);
  std::vector<Candidate> chosen;
  CellTerms scratch;
  double current = 0.0;
  double cost = 0.0;
  auto gain_with = [&](std::initializer_list<std::size_t> ks) {
    for (auto k : ks) chosen.push_back(candidates[k]);
    const Selection sel = to_selection(chosen);
    chosen.resize(chosen.size() - ks.size());
    return objective_of(problem, sel.lidar, sel.radar, scratch) - current;
  };
  auto take = [&](std::size_t k) {
    used[k] = true;
    chosen.push_back(candidates[k]);
    cost += cost_of(problem, candidates[k]);
  };
  while (chosen.size() < static_cast<std::size_t>(problem.budget)) {
    std::optional<std::size_t> best;
    double best_gain = 0.0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      if (used[k] || !fits(problem, chosen.size() + 1, cost + cost_of(problem, candidates[k]))) {
        continue;
      }
      const double gain = gain_with({k});
      if (gain > best_gain) {
        best_gain = gain;
        best = k;
      }
    }
    if (best) {
      take(*best);
    } else {
      // No single sensor helps while a cell still lacks one modality
      // entirely; try one lidar + radar pair as a combined step.
      std::optional<std::pair<std::size_t, std::size_t>> pair;
      const std::size_t nl = problem.n_lidar();
      for (std::size_t a = 0; a < nl; ++a) {
        if (used[a]) continue;
        for (std::size_t b = nl; b < candidates.size(); ++b) {
          if (used[b] || !fits(problem, chosen.size() + 2,
                               cost + cost_of(problem, candidates[a]) +
                                   cost_of(problem, candidates[b]))) {
            continue;
          }
          const double gain = gain_with({a, b});
          if (gain > best_gain) {
            best_gain = gain;
            pair = {a, b};
          }
        }
      }
      if (!pair) break;
      take(pair->first);
      take(pair->second);
    }
    const Selection sel = to_selection(chosen);
    current = objective_of(problem, sel.lidar, sel.radar, scratch);
  }
  return finish(problem, to_selection(chosen), false);
}

PlacementSolution solve_branch_bound(const PlacementProblem& problem) {
  const PlacementSolution warm = solve_greedy(problem);
  const double best = BranchAndBound(problem, warm).run();
  return finish(problem, Canonicalizer(problem, best).run(), true);
}

std::string_view to_string(SolverKind k) {
  switch (k) {
    case SolverKind::kExhaustive: return "exhaustive";
    case SolverKind::kBranchBound: return "bnb";
    case SolverKind::kGreedy: return "greedy";
  }
  return "?";
}

SolverKind parse_solver(std::string_view s) {
  if (s == "exhaustive") return SolverKind::kExhaustive;
  if (s == "bnb") return SolverKind::kBranchBound;
  if (s == "greedy") return SolverKind::kGreedy;
  throw std::invalid_argument("unknown solver '" + std::string(s) + "'");
}

PlacementSolution solve(const PlacementProblem& problem, SolverKind kind) {
  switch (kind) {
    case SolverKind::kExhaustive: return solve_exhaustive(problem);
    case SolverKind::kBranchBound: return solve_branch_bound(problem);
    case SolverKind::kGreedy: return solve_greedy(problem);
  }
  throw std::logic_error("unreachable");
}

}  // namespace rsp
