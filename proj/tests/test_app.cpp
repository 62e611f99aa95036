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

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "rsp/app.hpp"
#include "rsp/error.hpp"
#include "support.hpp"

using namespace rsp;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(RSPLAN_PATH) + " " + args + " >" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Two 16-beam lidars and one radar around a small crossing.
Scene small_scene() {
  Scene s;
  s.grid = {{-10.0, -10.0}, 2.0, 10, 10};
  for (std::size_t j = 0; j < s.grid.cell_count(); ++j) {
    const auto c = cell_center(s.grid, j);
    if (std::abs(c.x) < 4.0 || std::abs(c.y) < 4.0) s.roi.cells.insert(j);
  }
  auto l16 = lidar_16_beam();
  l16.unit_cost = 4.0;
  auto r = radar_4d();
  r.unit_cost = 1.0;
  s.lidar_candidates = {{"La", {-5.0, -5.0, 4.0}, 0.0, 10.0, l16},
                        {"Lb", {5.0, 5.0, 4.0}, 0.0, 10.0, l16},
                        {"Lc", {5.0, -5.0, 4.0}, 0.0, 10.0, l16}};
  s.radar_candidates = {{"Ra", {-5.0, 5.0, 3.0}, -45.0, 15.0, r},
                        {"Rb", {5.0, 5.0, 3.0}, -135.0, 15.0, r}};
  s.occluders.push_back({{{6.0, -9.0, 0.0}, {9.0, -6.0, 8.0}}});
  return s;
}

std::string slurp(const fs::path& p) { return read_file(p); }

}  // namespace

TEST_CASE("visibility writes both matrices and a manifest, reproducibly") {
  const auto dir = rsp::testing::temp_dir("app_vis");
  save_scene(dir / "s.scene", small_scene());
  std::ostringstream log;
  cmd_visibility({dir / "s.scene", dir / "a", VisibilityConfig{}, 1}, log);
  cmd_visibility({dir / "s.scene", dir / "b", VisibilityConfig{}, 4}, log);
  for (const char* f : {"lidar.vis", "radar.vis"}) {
    CHECK(fs::exists(dir / "a" / f));
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  const Json manifest = load_report(dir / "a" / "manifest.json");
  CHECK(manifest.at("kind") == "manifest");
  CHECK(manifest.at("inputs").at("scene") == sha256_hex(slurp(dir / "s.scene")));
  Provenance prov;
  const auto m = load_matrix(dir / "a" / "lidar.vis", &prov);
  CHECK(prov.run == manifest.at("run"));
  CHECK(prov.manifest == "manifest.json");
  CHECK(m.scene_hash == scene_hash(small_scene()));
  CHECK(m.rows() == 3);
}

TEST_CASE("optimize: 2 lidar + 1 radar with budget 3 is feasible; solvers agree") {
  const auto dir = rsp::testing::temp_dir("app_opt");
  save_scene(dir / "s.scene", small_scene());
  std::ostringstream log;
  cmd_visibility({dir / "s.scene", dir / "vis", VisibilityConfig{}, 1}, log);
  OptimizeArgs a;
  a.lidar = dir / "vis/lidar.vis";
  a.radar = dir / "vis/radar.vis";
  a.scene = dir / "s.scene";
  a.budget = 3;
  a.out = dir / "bnb.json";
  cmd_optimize(a, log);
  a.solver = SolverKind::kExhaustive;
  a.out = dir / "ex.json";
  cmd_optimize(a, log);
  const Json bnb = load_report(dir / "bnb.json"), ex = load_report(dir / "ex.json");
  CHECK(bnb.at("objective") == ex.at("objective"));
  CHECK(bnb.at("lidar") == ex.at("lidar"));
  CHECK(bnb.at("radar") == ex.at("radar"));
  CHECK(bnb.at("lidar").size() + bnb.at("radar").size() <= 3);
  CHECK(bnb.at("objective").get<double>() > 0.0);
  CHECK(fs::exists(dir / "bnb.json.manifest.json"));

  // The fixed 2 + 1 layout is expressible and within budget.
  const auto p = make_problem(load_matrix(a.lidar), load_matrix(a.radar),
                              small_scene().roi.column_weights(), 3);
  CHECK(is_feasible(p, {{0, 1}, {0}}));

  a.budget = 0;
  a.out = dir / "zero.json";
  cmd_optimize(a, log);
  CHECK(load_report(dir / "zero.json").at("objective") == 0.0);
}

TEST_CASE("optimize warns when the scene does not match the matrices") {
  const auto dir = rsp::testing::temp_dir("app_hash");
  save_scene(dir / "s.scene", small_scene());
  std::ostringstream log;
  cmd_visibility({dir / "s.scene", dir / "vis", VisibilityConfig{}, 1}, log);
  Scene other = small_scene();
  other.occluders.clear();
  save_scene(dir / "other.scene", other);
  OptimizeArgs a;
  a.lidar = dir / "vis/lidar.vis";
  a.radar = dir / "vis/radar.vis";
  a.scene = dir / "other.scene";
  a.out = dir / "sol.json";
  std::ostringstream warn;
  cmd_optimize(a, warn);
  CHECK(warn.str().find("warning") != std::string::npos);
}

TEST_CASE("export-milp and lp-export write the same model") {
  const auto dir = rsp::testing::temp_dir("app_milp");
  save_scene(dir / "s.scene", small_scene());
  std::ostringstream log;
  cmd_visibility({dir / "s.scene", dir / "vis", VisibilityConfig{}, 1}, log);
  OptimizeArgs a;
  a.lidar = dir / "vis/lidar.vis";
  a.radar = dir / "vis/radar.vis";
  a.budget = 2;
  a.lp_export = dir / "a.lp";
  a.out = dir / "sol.json";
  cmd_optimize(a, log);
  cmd_export_milp({a.lidar, a.radar, std::nullopt, 2, 1.0, std::nullopt, dir / "b.lp"}, log);
  CHECK(slurp(dir / "a.lp") == slurp(dir / "b.lp"));
}

TEST_CASE("CLI exit codes") {
  const auto dir = rsp::testing::temp_dir("app_cli");
  CHECK(run_cli("--help", dir / "log") == kExitOk);
  CHECK(run_cli("", dir / "log") == kExitUsage);
  CHECK(run_cli("visibility --scene " + (dir / "missing.scene").string() + " --out-dir " + dir.string(),
                dir / "log") == kExitIo);
  std::ofstream(dir / "garbage.scene") << "RSP-SCENE 1\n{ not json";
  CHECK(run_cli("visibility --scene " + (dir / "garbage.scene").string() + " --out-dir " + dir.string(),
                dir / "log") == kExitParse);
  Scene bad = small_scene();
  bad.roi.cells.insert(1000);
  save_scene(dir / "bad.scene", bad);
  CHECK(run_cli("visibility --scene " + (dir / "bad.scene").string() + " --out-dir " + dir.string(),
                dir / "log") == kExitValidation);
  CHECK(slurp(dir / "log").find("cell out of grid bounds") != std::string::npos);

  // 21 candidates trip the exhaustive guard.
  Scene big = small_scene();
  for (int k = 0; k < 16; ++k) {
    big.radar_candidates.push_back({"Rx" + std::to_string(k), {0.0, 0.0, 3.0 + k}, 0.0, 10.0,
                                    big.radar_candidates[0].spec});
  }
  save_scene(dir / "big.scene", big);
  REQUIRE(run_cli("visibility --scene " + (dir / "big.scene").string() + " --out-dir " + (dir / "v").string(),
                  dir / "log") == kExitOk);
  CHECK(run_cli("optimize --solver exhaustive --lidar " + (dir / "v/lidar.vis").string() + " --radar " +
                    (dir / "v/radar.vis").string() + " --out " + (dir / "s.json").string(),
                dir / "log") == kExitGuard);
}

TEST_CASE("config file supplies defaults and flags win") {
  const auto dir = rsp::testing::temp_dir("app_cfg");
  save_scene(dir / "s.scene", small_scene());
  REQUIRE(run_cli("visibility --scene " + (dir / "s.scene").string() + " --out-dir " + (dir / "v").string(),
                  dir / "log") == kExitOk);
  std::ofstream(dir / "defaults.ini") << "[optimize]\nbudget = 0\nsolver = \"greedy\"\n";
  const std::string base = "--config " + (dir / "defaults.ini").string() + " optimize --lidar " +
                           (dir / "v/lidar.vis").string() + " --radar " + (dir / "v/radar.vis").string();
  REQUIRE(run_cli(base + " --out " + (dir / "a.json").string(), dir / "log") == kExitOk);
  const Json a = load_report(dir / "a.json");
  CHECK(a.at("budget") == 0);
  CHECK(a.at("solver") == "greedy");
  REQUIRE(run_cli(base + " --budget 3 --out " + (dir / "b.json").string(), dir / "log") == kExitOk);
  const Json b = load_report(dir / "b.json");
  CHECK(b.at("budget") == 3);
  CHECK(b.at("solver") == "greedy");
}

TEST_CASE("exit_code_for maps error kinds") {
  CHECK(exit_code_for(ParseError("x")) == kExitParse);
  CHECK(exit_code_for(ValidationError("x")) == kExitValidation);
  CHECK(exit_code_for(GuardError("x")) == kExitGuard);
  CHECK(exit_code_for(IoError("x")) == kExitIo);
  CHECK(exit_code_for(std::runtime_error("x")) == kExitInternal);
}

TEST_CASE("pipeline on the bundled data compares both configurations") {
  const auto dir = rsp::testing::temp_dir("app_pipe");
  std::ostringstream log;
  const fs::path data(RSP_DATA_DIR);
  PipelineArgs a{data / "intersection.scene", data / "pipeline.json", std::nullopt, dir / "a", 2};
  cmd_pipeline(a, log);
  a.out_dir = dir / "b";
  a.workers = 1;
  cmd_pipeline(a, log);
  const std::string text = slurp(dir / "a/pipeline_report.txt");
  CHECK(text.find("cost_reduction") != std::string::npos);
  CHECK(text == slurp(dir / "b/pipeline_report.txt"));
  CHECK(slurp(dir / "a/pipeline_report.json") == slurp(dir / "b/pipeline_report.json"));
  const Json r = load_report(dir / "a/pipeline_report.json");
  CHECK(r.at("configs").size() == 2);
  CHECK(r.at("comparison").size() == 1);
}

TEST_CASE("evaluate renders a delta column for two prediction sets") {
  const auto dir = rsp::testing::temp_dir("app_eval");
  using rsp::testing::box_at;
  DetectionFrame gt{"f0", {box_at(0, 0, ObjectClass::kPedestrian), box_at(5, 0, ObjectClass::kPedestrian)}};
  for (auto& b : gt.boxes) b.source = BoxSource::kGroundTruth;
  DetectionFrame good = gt, half{"f0", {box_at(0, 0, ObjectClass::kPedestrian)}};
  save_frames(dir / "gt.frames", {gt});
  save_frames(dir / "a.frames", {half});
  save_frames(dir / "b.frames", {good});
  std::ostringstream out;
  EvaluateArgs e;
  e.ground_truth = dir / "gt.frames";
  e.predictions = dir / "a.frames";
  e.predictions_b = dir / "b.frames";
  e.out = dir / "ap.json";
  cmd_evaluate(e, out);
  CHECK(out.str().find("+49.50") != std::string::npos);
  const Json r = load_report(dir / "ap.json");
  CHECK(r.at("delta_b_minus_a").at("pedestrian").get<double>() == doctest::Approx(1.0 - 51.0 / 101.0));
}
