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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <fmt/format.h>

#include "ap_oracle.hpp"
#include "iou_oracle.hpp"
#include "lp_oracle.hpp"
#include "rsp/app.hpp"
#include "rsp/coverage.hpp"
#include "rsp/error.hpp"
#include "rsp/fusion.hpp"
#include "rsp/milp.hpp"
#include "support.hpp"

using namespace rsp;
using rsp::testing::Gen;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// --- 1 -----------------------------------------------------------------------

Verdict solver_exactness() {
  const auto t0 = Clock::now();
  int mismatches = 0;
  std::string first;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Gen g(0xC0FFEE + seed);
    const int nl = g.integer(0, 12);
    const int nr = g.integer(0, 12 - nl);
    const int nt = g.integer(1, 100);
    const int budget = g.integer(0, 5);
    const auto p = rsp::testing::random_problem(g, nl, nr, nt, budget);
    const auto ex = solve_exhaustive(p);
    const auto bb = solve_branch_bound(p);
    if (!(bb.objective == ex.objective && bb.selection == ex.selection)) {
      if (mismatches++ == 0) {
        first = fmt::format("seed {}: bnb {:.17g} vs exhaustive {:.17g}", seed, bb.objective, ex.objective);
      }
    }
  }
  const double secs = seconds_since(t0);
  Verdict v;
  v.pass = mismatches == 0 && secs < 60.0;
  v.detail = fmt::format("200 instances, {} mismatches, {:.2f} s", mismatches, secs);
  if (!first.empty()) v.detail += "; first: " + first;
  return v;
}

// --- 2 -----------------------------------------------------------------------

Verdict threshold_exactness() {
  Verdict v;
  std::string parts;
  for (double tau : {0.5, 1.0, 2.0}) {
    const double x = 1.0 - std::exp(-tau);
    const auto p = make_problem(rsp::testing::make_matrix(Modality::kLidar, 1, 1, {x}),
                                rsp::testing::make_matrix(Modality::kRadar, 1, 1, {x}), {1.0}, 2, tau);
    const double gap = std::abs(p.ll(0, 0) - tau);
    const bool seen = evaluate_selection(p, {{0}, {0}}).t[0] == 1;
    v.pass = v.pass && gap <= 1e-9 && seen;
    parts += fmt::format("{}tau {}: |log term - tau| = {:.1e}, t = {}", parts.empty() ? "" : "; ", tau, gap,
                         seen ? 1 : 0);
  }
  v.detail = parts;
  return v;
}

// --- 3 -----------------------------------------------------------------------

// 50 x 50 cells of 2 m; the ROI is a four-arm crossing of 20 m wide roads.
Scene crossing(double height, double pitch) {
  Scene s;
  s.grid = {{-50.0, -50.0}, 2.0, 50, 50};
  for (std::size_t j = 0; j < s.grid.cell_count(); ++j) {
    const Vec3 c = cell_center(s.grid, j);
    if (std::abs(c.x) < 10.0 || std::abs(c.y) < 10.0) s.roi.cells.insert(j);
  }
  s.lidar_candidates.push_back({"L0", {-12.0, -12.0, height}, 45.0, pitch, lidar_16_beam()});
  return s;
}

Verdict beam_monotonicity() {
  Verdict v;
  bool strict_somewhere = false;
  std::string parts;
  for (double height : {3.0, 5.0, 8.0}) {
    for (double pitch : {0.0, 5.0}) {
      std::vector<double> cov;
      for (const SensorSpec& spec : {lidar_16_beam(), lidar_32_beam(), lidar_64_beam()}) {
        Scene s = crossing(height, pitch);
        s.lidar_candidates[0].spec = spec;
        const auto vl = build_visibility(s, Modality::kLidar, VisibilityConfig{}, 4);
        auto vr = rsp::testing::make_matrix(Modality::kRadar, 0, vl.cols());
        vr.cells = vl.cells;
        const auto p = make_problem(vl, vr, s.roi.column_weights(), 1);
        cov.push_back(central_coverage(p, {{0}, {}}).central_coverage);
      }
      const bool nondecreasing = cov[0] <= cov[1] && cov[1] <= cov[2];
      strict_somewhere = strict_somewhere || cov[0] < cov[1] || cov[1] < cov[2];
      v.pass = v.pass && nondecreasing;
      parts += fmt::format("{}h={}m pitch={}: {:.1f}/{:.1f}/{:.1f}%", parts.empty() ? "" : "; ", height, pitch,
                           100 * cov[0], 100 * cov[1], 100 * cov[2]);
    }
  }
  v.pass = v.pass && strict_somewhere;
  v.detail = "coverage 16/32/64 beams: " + parts;
  return v;
}

// --- 4 -----------------------------------------------------------------------

Verdict iou_oracle() {
  const auto t0 = Clock::now();
  Verdict v;
  DetectionBox a;
  a.center = {0.0, 0.0, 0.5};
  DetectionBox b = a;
  b.center.x = 0.5;
  const bool identical = iou_3d(a, a) == 1.0;
  const bool third = std::abs(iou_3d(a, b) - 1.0 / 3.0) <= 1e-9;
  Gen g(404);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    DetectionBox x = rsp::testing::random_box(g, 1.0);
    DetectionBox y = rsp::testing::random_box(g, 1.0);
    if (k % 2 == 0) {  // half the pairs are perturbed copies for large overlaps
      y = x;
      y.center.x += g.uniform(-0.5, 0.5);
      y.center.y += g.uniform(-0.5, 0.5);
      y.center.z += g.uniform(-0.3, 0.3);
      y.yaw = wrap_rad(y.yaw + g.uniform(-1.0, 1.0));
      y.size.x *= g.uniform(0.7, 1.3);
    }
    worst = std::max(worst, std::abs(iou_3d(x, y) - rsp::testing::monte_carlo_iou(x, y, 1000000, 7000 + k)));
  }
  const double secs = seconds_since(t0);
  v.pass = identical && third && worst <= 0.01 && secs < 120.0;
  v.detail = fmt::format("identical = 1: {}, offset cubes = 1/3: {}, max |iou - MC| over 50 pairs = {:.4f}, {:.1f} s",
                         identical ? "yes" : "no", third ? "yes" : "no", worst, secs);
  return v;
}

// --- 5 -----------------------------------------------------------------------

Verdict fusion_conservation() {
  Verdict v;
  Gen g(505);
  int broken = 0, pass_through_broken = 0;
  std::size_t total_matches = 0;
  for (int f = 0; f < 1000; ++f) {
    std::vector<DetectionBox> l, r;
    for (int k = g.integer(0, 8); k > 0; --k) {
      auto b = rsp::testing::random_box(g, 10.0);
      b.label = static_cast<ObjectClass>(g.integer(0, 5));
      l.push_back(b);
      if (g.coin(0.6)) {
        auto c = b;
        c.center.x += g.uniform(-0.6, 0.6);
        c.center.y += g.uniform(-0.6, 0.6);
        c.score = g.uniform(0.05, 1.0);
        c.source = BoxSource::kRadar;
        c.velocity = Vec2{g.uniform(-10, 10), g.uniform(-10, 10)};
        r.push_back(c);
      }
    }
    for (int k = g.integer(0, 2); k > 0; --k) {
      auto c = rsp::testing::random_box(g, 10.0);
      c.source = BoxSource::kRadar;
      r.push_back(c);
    }
    FusionStats stats;
    const auto out = fuse_late(l, r, FusionConfig{}, stats);
    total_matches += stats.matched_pairs;
    if (out.size() != l.size() + r.size() - stats.matched_pairs) ++broken;
    auto sl = l, sr = r;
    sort_canonical(sl);
    sort_canonical(sr);
    if (fuse_late(l, {}) != sl || fuse_late({}, r) != sr) ++pass_through_broken;
  }
  v.pass = broken == 0 && pass_through_broken == 0 && total_matches > 0;
  v.detail = fmt::format("1000 frames, {} matched pairs, {} count violations, {} pass-through violations",
                         total_matches, broken, pass_through_broken);
  return v;
}

// --- 6 -----------------------------------------------------------------------

Verdict ap_oracle() {
  Verdict v;
  int mismatches = 0, evaluated = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Gen g(6000 + seed);
    std::vector<FramePair> frames;
    const int n_frames = g.integer(1, 4);
    for (int k = 0; k < n_frames; ++k) {
      FramePair f;
      f.frame_id = fmt::format("f{}", k);
      for (int n = g.integer(0, 5); n > 0; --n) {
        auto b = rsp::testing::random_box(g, 6.0);
        b.label = ObjectClass::kCar;
        f.ground_truth.push_back(b);
        if (g.coin(0.7) && f.predictions.size() < 5) {
          b.center.x += g.uniform(-0.7, 0.7);
          b.score = g.uniform(0.0, 1.0);
          f.predictions.push_back(b);
        }
      }
      while (f.predictions.size() < 5 && g.coin(0.3)) {
        auto b = rsp::testing::random_box(g, 6.0);
        b.label = ObjectClass::kCar;
        f.predictions.push_back(b);
      }
      frames.push_back(f);
    }
    for (auto mode : {MatchMode::kIou, MatchMode::kCenterDistance}) {
      const double thr = default_threshold(ObjectClass::kCar, mode);
      const auto got = evaluate_ap(frames, ObjectClass::kCar, mode, thr).ap;
      const auto want = rsp::testing::oracle_ap(frames, ObjectClass::kCar, mode, thr);
      ++evaluated;
      if (got != want) ++mismatches;
    }
  }
  FramePair hand;
  hand.frame_id = "hand";
  hand.ground_truth = {rsp::testing::box_at(0, 0, ObjectClass::kCar), rsp::testing::box_at(10, 0, ObjectClass::kCar)};
  hand.predictions = {rsp::testing::box_at(0, 0, ObjectClass::kCar, 0.9),
                      rsp::testing::box_at(10, 0, ObjectClass::kCar, 0.8),
                      rsp::testing::box_at(20, 0, ObjectClass::kCar, 0.7)};
  const auto ap = evaluate_ap({hand}, ObjectClass::kCar, MatchMode::kIou, 0.5).ap;
  v.pass = mismatches == 0 && ap == 1.0;
  v.detail = fmt::format("{} evaluations over 500 seeds, {} mismatches; 3-prediction example AP = {}", evaluated,
                         mismatches, ap ? fmt::format("{:.17g}", *ap) : "undefined");
  return v;
}

// --- 7 -----------------------------------------------------------------------

// 4 x 4 cells of 1 m around a mast at the center. With `visible` the sensors
// see every sample; otherwise their range ends before the first sample.
Scene mast_scene(bool visible) {
  Scene s;
  s.grid = {{-2.0, -2.0}, 1.0, 4, 4};
  for (std::size_t j = 0; j < 16; ++j) s.roi.cells.insert(j);
  SensorSpec l{"lidar-dense", Modality::kLidar, 256, 360.0, 170.0, visible ? 50.0 : 0.01, 10.0, 1.0};
  SensorSpec r{"radar-wide", Modality::kRadar, std::nullopt, 360.0, 170.0, visible ? 50.0 : 0.01, 20.0, 1.0};
  s.lidar_candidates.push_back({"L0", {0.0, 0.0, 3.0}, 0.0, 0.0, l});
  s.radar_candidates.push_back({"R0", {0.0, 0.0, 3.0}, 0.0, 0.0, r});
  return s;
}

fs::path write_plan(const fs::path& dir, bool noiseless) {
  Json scenario = {{"seed", 77}, {"duration_frames", 60}, {"frame_dt_s", 0.1}};
  Json mix = Json::object();
  for (auto c : kAllClasses) mix[std::string(to_string(c))] = 0.4;
  scenario["class_mix"] = mix;
  const Json zero = {{"position_sigma", 0.0}, {"size_sigma", 0.0}, {"yaw_sigma", 0.0}, {"velocity_sigma", 0.0}};
  const Json some = {{"position_sigma", 0.2}, {"size_sigma", 0.1}, {"yaw_sigma", 0.05}, {"velocity_sigma", 0.2}};
  scenario["detector_noise"] = {{"lidar", noiseless ? zero : some}, {"radar", noiseless ? zero : some}};
  const Json plan = {{"scenario", scenario}, {"budget", 2}, {"configs", Json::array({{{"name", "mast"}}})}};
  const fs::path p = dir / "plan.json";
  write_file(p, plan.dump(2) + "\n");
  return p;
}

double pipeline_map(const fs::path& dir, bool visible) {
  save_scene(dir / "scene.scene", mast_scene(visible));
  std::ostringstream log;
  cmd_pipeline({dir / "scene.scene", write_plan(dir, true), std::nullopt, dir / "out", 2}, log);
  const Json report = load_report(dir / "out/pipeline_report.json");
  return report.at("configs").at(0).at("fused").at("map").get<double>();
}

Verdict end_to_end() {
  Verdict v;
  const auto root = rsp::testing::temp_dir("acceptance_e2e");
  fs::create_directories(root / "full");
  fs::create_directories(root / "blind");
  const double full = pipeline_map(root / "full", true);
  const double blind = pipeline_map(root / "blind", false);
  v.pass = std::abs(full - 1.0) <= 1e-9 && blind == 0.0;
  v.detail = fmt::format("full-visibility noiseless mAP = {:.17g}, zero-visibility mAP = {}", full, blind);
  return v;
}

// --- 8 -----------------------------------------------------------------------

// Every file under `dir`, keyed by relative path. Manifests are compared
// without their wall-clock field.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const std::string rel = fs::relative(e.path(), dir).string();
    std::string bytes = read_file(e.path());
    if (rel.find("manifest.json") != std::string::npos) {
      Json m = report_from_text(bytes);
      m.erase("wall_time_s");
      bytes = m.dump();
    }
    out[rel] = bytes;
  }
  return out;
}

Verdict determinism() {
  Verdict v;
  const auto root = rsp::testing::temp_dir("acceptance_det");
  const fs::path data(RSP_DATA_DIR);
  std::optional<std::map<std::string, std::string>> vis_ref, pipe_ref;
  int runs = 0, differing = 0;
  std::size_t files = 0;
  for (int rep = 0; rep < 2; ++rep) {
    for (int workers : {1, 2, 8}) {
      const fs::path d = root / fmt::format("r{}_w{}", rep, workers);
      std::ostringstream log;
      cmd_visibility({data / "intersection.scene", d / "vis", VisibilityConfig{}, workers}, log);
      cmd_pipeline({data / "intersection.scene", data / "pipeline.json", std::nullopt, d / "pipe", workers}, log);
      const auto vs = snapshot(d / "vis"), ps = snapshot(d / "pipe");
      if (!vis_ref) {
        vis_ref = vs;
        pipe_ref = ps;
        files = vs.size() + ps.size();
      } else {
        differing += (vs != *vis_ref) + (ps != *pipe_ref);
      }
      ++runs;
    }
  }
  v.pass = differing == 0 && files > 0;
  v.detail = fmt::format("{} runs (2 repeats x workers 1/2/8), {} files each, {} differing outputs", runs, files,
                         differing);
  return v;
}

// --- 9 -----------------------------------------------------------------------

std::optional<double> run_highs(const fs::path& lp, int& status) {
  const fs::path out = lp.string() + ".out";
  const std::string cmd = fmt::format("python3 {} {} > {} 2>/dev/null", RSP_HIGHS_SCRIPT, lp.string(), out.string());
  const int raw = std::system(cmd.c_str());
  status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  if (status != 0) return std::nullopt;
  return std::stod(read_file(out));
}

Verdict milp_export() {
  Verdict v;
  const auto root = rsp::testing::temp_dir("acceptance_milp");
  double worst_internal = 0.0, worst_external = 0.0;
  bool external = true;
  int solved_external = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Gen g(9000 + seed);
    const auto p = rsp::testing::random_problem(g, g.integer(1, 4), g.integer(1, 4), g.integer(1, 8),
                                                g.integer(1, 5), 0.2);
    const double ex = solve_exhaustive(p).objective;
    const std::string lp = export_milp(p);
    const auto brute = rsp::testing::brute_force_lp(parse_lp(lp));
    worst_internal = std::max(worst_internal, brute ? std::abs(*brute - ex) : 1e300);
    if (!external) continue;
    const fs::path file = root / fmt::format("m{}.lp", seed);
    write_file(file, lp);
    int status = 0;
    const auto highs = run_highs(file, status);
    if (status == 3) {
      external = false;
      continue;
    }
    worst_external = std::max(worst_external, highs ? std::abs(*highs - ex) : 1e300);
    ++solved_external;
  }
  v.pass = worst_internal <= 1e-6 && (!external || worst_external <= 1e-6);
  v.detail = fmt::format("20 instances; parsed-LP enumeration max |diff| = {:.2e}", worst_internal);
  v.detail += external ? fmt::format("; HiGHS max |diff| = {:.2e} over {} models", worst_external, solved_external)
                       : std::string("; external solver not installed, HiGHS route SKIPPED");
  return v;
}

// --- 10 ----------------------------------------------------------------------

Verdict reported_deltas() {
  Verdict v;
  const auto root = rsp::testing::temp_dir("acceptance_delta");
  // 43 pedestrians. File A ranks 7 false positives above all 43 hits, so its
  // precision peaks at 43/50 at full recall; file B is perfect.
  DetectionFrame gt{"f000000", {}}, a{"f000000", {}}, b{"f000000", {}};
  for (int k = 0; k < 43; ++k) {
    auto box = rsp::testing::box_at(3.0 * k, 0.0, ObjectClass::kPedestrian, 1.0, {0.6, 0.6, 1.7});
    box.source = BoxSource::kGroundTruth;
    gt.boxes.push_back(box);
    box.source = BoxSource::kLidar;
    box.score = 0.5 - 0.001 * k;
    a.boxes.push_back(box);
    b.boxes.push_back(box);
  }
  for (int k = 0; k < 7; ++k) {
    a.boxes.push_back(rsp::testing::box_at(3.0 * k, 50.0, ObjectClass::kPedestrian, 0.9 - 0.01 * k, {0.6, 0.6, 1.7}));
  }
  save_frames(root / "gt.frames", {gt});
  save_frames(root / "a.frames", {a});
  save_frames(root / "b.frames", {b});
  EvaluateArgs e;
  e.ground_truth = root / "gt.frames";
  e.predictions = root / "a.frames";
  e.predictions_b = root / "b.frames";
  e.out = root / "ap.json";
  std::ostringstream table;
  cmd_evaluate(e, table);
  const Json rep = load_report(root / "ap.json");
  const double delta = rep.at("delta_b_minus_a").at("pedestrian").get<double>();
  const bool shown = table.str().find("+14.00") != std::string::npos;

  CoverageReport base, two, one;
  base.config_name = "base";
  base.total_cost = 100.0;
  two.config_name = "b";
  two.total_cost = 73.3;
  one.config_name = "c";
  one.total_cost = 44.0;
  const auto cmp = compare_configs({base, two, one});
  const bool costs = std::abs(*cmp.pairs[0].cost_reduction_pct - 26.7) < 1e-9 &&
                     std::abs(*cmp.pairs[1].cost_reduction_pct - 56.0) < 1e-9;
  v.pass = std::abs(delta - 0.14) <= 1e-9 && shown && costs;
  v.detail = fmt::format("pedestrian AP delta = {:.12f} ({} in table); cost reductions {:.1f}% and {:.1f}%", delta,
                         shown ? "+14.00 shown" : "not shown", *cmp.pairs[0].cost_reduction_pct,
                         *cmp.pairs[1].cost_reduction_pct);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"solver exactness", solver_exactness},     {"threshold exactness", threshold_exactness},
      {"beam monotonicity", beam_monotonicity},   {"IoU oracle", iou_oracle},
      {"fusion conservation", fusion_conservation}, {"AP oracle", ap_oracle},
      {"end-to-end soundness", end_to_end},       {"determinism", determinism},
      {"MILP export", milp_export},               {"reported deltas", reported_deltas},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << (k + 1) << " (" << criteria[k].first
              << "): " << v.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
