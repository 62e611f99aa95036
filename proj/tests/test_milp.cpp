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

#include <doctest.h>

#include <algorithm>

#include "lp_oracle.hpp"
#include "rsp/error.hpp"
#include "rsp/milp.hpp"
#include "support.hpp"

using namespace rsp;
using rsp::testing::brute_force_lp;
using rsp::testing::Gen;
using rsp::testing::make_matrix;
using rsp::testing::random_problem;

namespace {

std::size_t count_rows(const LpModel& m, std::string_view prefix) {
  return std::count_if(m.rows.begin(), m.rows.end(), [&](const LpModel::Row& r) {
    return r.name.rfind(prefix, 0) == 0 && r.name.size() > prefix.size() &&
           std::isdigit(static_cast<unsigned char>(r.name[prefix.size()]));
  });
}

}  // namespace

TEST_CASE("one lidar, one radar, one cell: row and variable counts") {
  const auto p = make_problem(make_matrix(Modality::kLidar, 1, 1, {0.7}),
                              make_matrix(Modality::kRadar, 1, 1, {0.6}), {1.0}, 2);
  const LpModel m = parse_lp(export_milp(p));
  CHECK(m.sense == LpModel::Sense::kMaximize);
  CHECK(std::count_if(m.rows.begin(), m.rows.end(), [](auto& r) { return r.name == "budget"; }) == 1);
  CHECK(count_rows(m, "lvis") + count_rows(m, "rvis") == 2);
  CHECK(count_rows(m, "zt") + count_rows(m, "zrho") + count_rows(m, "zlo") == 3);
  CHECK(m.rows.size() == 6);
  CHECK(m.binaries.size() == 3);
  CHECK(m.continuous() == std::vector<std::string>{"z0"});
}

TEST_CASE("export is deterministic and re-parses to the same coefficients") {
  Gen g(7);
  const auto p = random_problem(g, 3, 2, 6, 3);
  const std::string a = export_milp(p), b = export_milp(p);
  CHECK(a == b);
  const LpModel m = parse_lp(a);
  // lvis rows carry the exact log coefficients.
  for (const auto& row : m.rows) {
    if (row.name != "lvis2") continue;
    for (const auto& [v, c] : row.terms) {
      if (v[0] == 'x') CHECK(c == p.ll(std::stoul(v.substr(1)), 2));
      if (v[0] == 't') CHECK(c == -p.tau);
    }
  }
}

TEST_CASE("all-zero visibility exports a model with optimum 0") {
  const auto p = make_problem(make_matrix(Modality::kLidar, 2, 3), make_matrix(Modality::kRadar, 1, 3),
                              {1.0, 2.0, 3.0}, 2);
  const LpModel m = parse_lp(export_milp(p));
  for (const auto& [v, b] : m.bounds) CHECK(b.second == 0.0);
  CHECK(brute_force_lp(m).value() == 0.0);
}

TEST_CASE("exported model optimum equals the exhaustive objective") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Gen g(40 + seed);
    const auto p = random_problem(g, g.integer(1, 3), g.integer(1, 3), g.integer(1, 5), g.integer(0, 4));
    const auto opt = brute_force_lp(parse_lp(export_milp(p)));
    REQUIRE(opt.has_value());
    CAPTURE(seed);
    CHECK(*opt == doctest::Approx(solve_exhaustive(p).objective).epsilon(1e-9));
  }
}

TEST_CASE("cost limit appears as its own row") {
  auto vl = make_matrix(Modality::kLidar, 1, 1, {0.7});
  vl.row_costs = {3.0};
  auto vr = make_matrix(Modality::kRadar, 1, 1, {0.7});
  vr.row_costs = {1.5};
  const LpModel m = parse_lp(export_milp(make_problem(vl, vr, {1.0}, 2, 1.0, 4.0)));
  const auto it = std::find_if(m.rows.begin(), m.rows.end(), [](auto& r) { return r.name == "cost"; });
  REQUIRE(it != m.rows.end());
  CHECK(it->rhs == 4.0);
  CHECK(brute_force_lp(m).value() == 0.0);
}

TEST_CASE("parse_lp accepts hand-written files and reports bad lines") {
  const LpModel m = parse_lp(
      "\\ comment\nMinimize\n obj: 2 a + 3 b\nSubject To\n c1: a + b >= 1\nBounds\n a free\n b <= 4\n"
      "Binaries\n a\nEnd\n");
  CHECK(m.sense == LpModel::Sense::kMinimize);
  CHECK(m.rows.size() == 1);
  CHECK(m.bounds.at("b").second == 4.0);
  CHECK(m.binaries.count("a") == 1);

  try {
    parse_lp("Maximize\n obj: z\nSubject To\n r: z <=\nEnd\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  CHECK_THROWS_AS(parse_lp("Maximize\n obj: z\n"), ParseError);
}
