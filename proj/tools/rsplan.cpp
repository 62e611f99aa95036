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

// rsplan: roadside sensor planning from the command line.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rsp/app.hpp"

namespace {

using rsp::fs::path;

void add_visibility(CLI::App& root, rsp::VisibilityArgs& a, int& k) {
  auto* c = root.add_subcommand("visibility", "Build lidar and radar visibility matrices for a scene");
  c->add_option("--scene", a.scene, "Scene file (RSP-SCENE)")->required();
  c->add_option("--out-dir", a.out_dir, "Directory for lidar.vis, radar.vis and manifest.json")->required();
  c->add_option("--samples-per-cell", k, "Sample points per cell, a perfect square")
      ->capture_default_str();
  c->add_option("--object-height", a.config.object_height_m, "Object height in metres for lidar beam hits")
      ->capture_default_str();
  c->add_option("--sample-height", a.config.sample_height_m,
                "Height of sample points in metres (default: half the object height)");
  c->add_option("--epsilon", a.config.epsilon, "Entries are clamped to at most 1 - epsilon")
      ->capture_default_str();
  c->add_option("--workers", a.workers, "Worker threads; output does not depend on it")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

void add_problem_flags(CLI::App* c, path& lidar, path& radar, std::optional<path>& scene,
                       std::optional<int>& budget, double& tau, std::optional<double>& cost) {
  c->add_option("--lidar", lidar, "Lidar visibility matrix")->required();
  c->add_option("--radar", radar, "Radar visibility matrix")->required();
  c->add_option("--scene", scene, "Scene file; supplies ROI weights and checks the scene hash");
  c->add_option("--budget", budget, "Maximum total sensor count (default: all candidates)")
      ->check(CLI::NonNegativeNumber);
  c->add_option("--tau", tau, "Per-modality log-visibility threshold")->capture_default_str();
  c->add_option("--cost-budget", cost, "Optional limit on the summed unit cost");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Roadside lidar and radar placement planning"};
  app.set_version_flag("--version", std::string(rsp::kToolVersion));
  app.set_config("--config", "", "INI/TOML file with flag defaults; command-line flags win");
  app.require_subcommand(1);

  rsp::VisibilityArgs vis;
  int samples = vis.config.samples_per_cell;
  add_visibility(app, vis, samples);

  rsp::OptimizeArgs opt;
  std::string solver = "bnb";
  auto* c_opt = app.add_subcommand("optimize", "Select sensor placements from visibility matrices");
  add_problem_flags(c_opt, opt.lidar, opt.radar, opt.scene, opt.budget, opt.tau, opt.cost_budget);
  c_opt->add_option("--solver", solver, "exhaustive, bnb or greedy")
      ->capture_default_str()
      ->check(CLI::IsMember({"exhaustive", "bnb", "greedy"}));
  c_opt->add_option("--lp-export", opt.lp_export, "Also write the model in LP format to this path");
  c_opt->add_option("--out", opt.out, "Solution file")->required();

  rsp::ExportMilpArgs milp;
  auto* c_milp = app.add_subcommand("export-milp", "Write the placement model in LP format");
  add_problem_flags(c_milp, milp.lidar, milp.radar, milp.scene, milp.budget, milp.tau, milp.cost_budget);
  c_milp->add_option("--out", milp.out, "LP file")->required();

  rsp::CoverageArgs cov;
  std::vector<std::string> solutions;
  auto* c_cov = app.add_subcommand("coverage", "Central coverage and pairwise configuration comparison");
  c_cov->add_option("--solution", solutions, "Solution file; repeat to compare configurations")
      ->required();
  c_cov->add_option("--name", cov.names, "Display name per solution, in the same order");
  c_cov->add_option("--lidar", cov.lidar, "Override the lidar matrix named in the solution");
  c_cov->add_option("--radar", cov.radar, "Override the radar matrix named in the solution");
  c_cov->add_option("--scene", cov.scene, "Scene file; adds row and column to the grid dump");
  c_cov->add_option("--theta", cov.theta, "A cell counts as covered when visibility exceeds theta")
      ->capture_default_str();
  c_cov->add_option("--out", cov.out, "Coverage report file")->required();
  c_cov->add_option("--grid-dump", cov.grid_dump, "Per-cell covered flags as CSV");

  rsp::SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Generate ground truth and per-sensor detections");
  c_sim->add_option("--scene", sim.scene, "Scene file")->required();
  c_sim->add_option("--solution", sim.solution, "Solution file")->required();
  c_sim->add_option("--lidar", sim.lidar, "Override the lidar matrix named in the solution");
  c_sim->add_option("--radar", sim.radar, "Override the radar matrix named in the solution");
  c_sim->add_option("--scenario", sim.scenario, "Scenario JSON (seed, frames, class mix, noise)")
      ->required();
  c_sim->add_option("--out-dir", sim.out_dir, "Directory for gt, lidar and radar frame files")->required();

  rsp::FuseArgs fuse;
  auto* c_fuse = app.add_subcommand("fuse", "Late-fuse lidar and radar detections by 3D IoU");
  c_fuse->add_option("--lidar", fuse.lidar, "Lidar frames")->required();
  c_fuse->add_option("--radar", fuse.radar, "Radar frames")->required();
  c_fuse->add_option("--iou-threshold", fuse.iou_threshold, "Minimum IoU for a match")
      ->capture_default_str();
  c_fuse->add_option("--out", fuse.out, "Fused frames")->required();

  rsp::EvaluateArgs eval;
  std::string mode = "iou";
  auto* c_eval = app.add_subcommand("evaluate", "Per-class AP and mAP against ground truth");
  c_eval->add_option("--gt", eval.ground_truth, "Ground-truth frames")->required();
  c_eval->add_option("--pred", eval.predictions, "Prediction frames")->required();
  c_eval->add_option("--pred-b", eval.predictions_b, "Second prediction set; adds a delta column");
  c_eval->add_option("--mode", mode, "iou or center_distance")
      ->capture_default_str()
      ->check(CLI::IsMember({"iou", "center_distance", "center"}));
  c_eval->add_option("--threshold", eval.threshold,
                     "Match threshold for every class (default: per-class table)");
  c_eval->add_option("--out", eval.out, "Write the AP table as a report file");

  rsp::PipelineArgs pipe;
  auto* c_pipe = app.add_subcommand("pipeline", "Run every stage for each configuration and compare");
  c_pipe->add_option("--scene", pipe.scene, "Scene file")->required();
  c_pipe->add_option("--plan", pipe.config, "Pipeline JSON (configs, scenario, solver, eval)")
      ->required();
  c_pipe->add_option("--budget", pipe.budget, "Sensor budget; overrides the plan")
      ->check(CLI::NonNegativeNumber);
  c_pipe->add_option("--out-dir", pipe.out_dir, "Output directory")->required();
  c_pipe->add_option("--workers", pipe.workers, "Worker threads for visibility")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? rsp::kExitOk : rsp::kExitUsage;
  }

  try {
    if (app.got_subcommand("visibility")) {
      vis.config.samples_per_cell = samples;
      rsp::cmd_visibility(vis, std::cerr);
    } else if (app.got_subcommand("optimize")) {
      opt.solver = rsp::parse_solver(solver);
      rsp::cmd_optimize(opt, std::cerr);
    } else if (app.got_subcommand("export-milp")) {
      rsp::cmd_export_milp(milp, std::cerr);
    } else if (app.got_subcommand("coverage")) {
      cov.solutions.assign(solutions.begin(), solutions.end());
      rsp::cmd_coverage(cov, std::cout);
    } else if (app.got_subcommand("simulate")) {
      rsp::cmd_simulate(sim, std::cerr);
    } else if (app.got_subcommand("fuse")) {
      rsp::cmd_fuse(fuse, std::cerr);
    } else if (app.got_subcommand("evaluate")) {
      eval.mode = rsp::parse_match_mode(mode);
      rsp::cmd_evaluate(eval, std::cout);
    } else if (app.got_subcommand("pipeline")) {
      rsp::cmd_pipeline(pipe, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "rsplan: error: " << e.what() << "\n";
    return rsp::exit_code_for(e);
  }
  return rsp::kExitOk;
}
