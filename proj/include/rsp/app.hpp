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

#ifndef RSP_APP_HPP_
#define RSP_APP_HPP_

// Command layer behind the rsplan tool. Each command reads its inputs, runs
// one or more modules and writes its outputs plus a run manifest.

#include <exception>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rsp/coverage.hpp"
#include "rsp/fusion.hpp"
#include "rsp/io.hpp"
#include "rsp/metrics.hpp"
#include "rsp/placement.hpp"
#include "rsp/scenario.hpp"
#include "rsp/visibility.hpp"

namespace rsp {

inline constexpr std::string_view kToolVersion = "0.3.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitParse = 3,
  kExitValidation = 4,
  kExitGuard = 5,
  kExitIo = 6,
  kExitInternal = 10,
};

// Maps an exception from a command to its documented exit code.
int exit_code_for(const std::exception& e);

// Identity of a run. Everything except wall time feeds run_id, so identical
// inputs and flags reproduce the same id (and the same output bytes).
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> input_hashes;  // role -> sha256 of file
  Json config;
  std::string tool_version{kToolVersion};
  double wall_time_s = 0.0;

  std::string run_id() const;
  Json to_json() const;
};

namespace fs = std::filesystem;

struct VisibilityArgs {
  fs::path scene;
  fs::path out_dir;
  VisibilityConfig config;
  int workers = 1;
};
// Writes <out_dir>/lidar.vis, radar.vis and manifest.json.
void cmd_visibility(const VisibilityArgs& args, std::ostream& log);

struct OptimizeArgs {
  fs::path lidar;
  fs::path radar;
  std::optional<fs::path> scene;  // ROI weights and hash check
  std::optional<int> budget;      // default: every candidate
  double tau = 1.0;
  std::optional<double> cost_budget;
  SolverKind solver = SolverKind::kBranchBound;
  std::optional<fs::path> lp_export;
  fs::path out;
};
// Writes the solution record to `out` and the manifest next to it.
void cmd_optimize(const OptimizeArgs& args, std::ostream& log);

struct ExportMilpArgs {
  fs::path lidar;
  fs::path radar;
  std::optional<fs::path> scene;
  std::optional<int> budget;
  double tau = 1.0;
  std::optional<double> cost_budget;
  fs::path out;
};
void cmd_export_milp(const ExportMilpArgs& args, std::ostream& log);

struct CoverageArgs {
  std::vector<fs::path> solutions;
  std::vector<std::string> names;  // defaults to each solution's file stem
  std::optional<fs::path> lidar;   // override the solution's matrix paths
  std::optional<fs::path> radar;
  std::optional<fs::path> scene;   // adds row/col to the grid dump
  double theta = 0.0;
  fs::path out;
  std::optional<fs::path> grid_dump;
};
void cmd_coverage(const CoverageArgs& args, std::ostream& log);

struct SimulateArgs {
  fs::path scene;
  fs::path solution;
  std::optional<fs::path> lidar;
  std::optional<fs::path> radar;
  fs::path scenario;  // JSON ScenarioConfig
  fs::path out_dir;
};
// Writes gt.frames, lidar.frames, radar.frames and manifest.json.
void cmd_simulate(const SimulateArgs& args, std::ostream& log);

struct FuseArgs {
  fs::path lidar;
  fs::path radar;
  double iou_threshold = 0.3;
  fs::path out;
};
void cmd_fuse(const FuseArgs& args, std::ostream& log);

struct EvaluateArgs {
  fs::path ground_truth;
  fs::path predictions;
  std::optional<fs::path> predictions_b;  // adds a per-class delta column
  MatchMode mode = MatchMode::kIou;
  std::optional<double> threshold;
  std::optional<fs::path> out;
};
void cmd_evaluate(const EvaluateArgs& args, std::ostream& log);

struct PipelineArgs {
  fs::path scene;
  fs::path config;  // JSON pipeline configuration
  std::optional<int> budget;
  fs::path out_dir;
  int workers = 1;
};
// Writes one subdirectory per configuration plus pipeline_report.txt,
// pipeline_report.json and manifest.json.
void cmd_pipeline(const PipelineArgs& args, std::ostream& log);

// Text table of per-class AP for one or two prediction sets.
std::string render_ap_table(const MapResult& a, const MapResult* b = nullptr);

Json map_to_json(const MapResult& r);

}  // namespace rsp

#endif  // RSP_APP_HPP_
