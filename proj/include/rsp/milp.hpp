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

#ifndef RSP_MILP_HPP_
#define RSP_MILP_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rsp/placement.hpp"

namespace rsp {

// Writes the placement model as a CPLEX LP file. The bilinear t_j * rho_j
// product is replaced by z_j in [0, M_j] with
//
//   z_j <= M_j t_j,   z_j <= rho_j(x, y),   z_j >= rho_j(x, y) - M_j (1 - t_j)
//
// where M_j = w_j * (sum_i Vl(i,j) + sum_i Vr(i,j)). Variables are x<i>
// (lidar), y<i> (radar), t<j> and z<j>; rows are named budget, lvis<j>,
// rvis<j>, zt<j>, zrho<j>, zlo<j>. Coefficients print with 17 significant
// digits so the file re-parses to the same doubles.
std::string export_milp(const PlacementProblem& problem);

// Minimal reader for the LP subset export_milp emits (and similar hand-written
// files): one objective, single-line rows, Bounds, Binaries/Generals, End.
struct LpModel {
  enum class Sense { kMaximize, kMinimize };
  enum class Op { kLe, kGe, kEq };

  struct Row {
    std::string name;
    std::vector<std::pair<std::string, double>> terms;
    Op op = Op::kLe;
    double rhs = 0.0;
  };

  Sense sense = Sense::kMaximize;
  std::vector<std::pair<std::string, double>> objective;
  std::vector<Row> rows;
  std::map<std::string, std::pair<double, double>> bounds;
  std::set<std::string> binaries;

  // Every variable in the order it first appears.
  std::vector<std::string> variables() const;
  std::vector<std::string> continuous() const;
};

// Throws ParseError with the offending line number.
LpModel parse_lp(std::string_view text);

}  // namespace rsp

#endif  // RSP_MILP_HPP_
