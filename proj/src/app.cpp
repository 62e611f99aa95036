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

#include "rsp/app.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "rsp/error.hpp"
#include "rsp/milp.hpp"

namespace rsp {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return kExitParse;
  if (dynamic_cast<const ValidationError*>(&e)) return kExitValidation;
  if (dynamic_cast<const GuardError*>(&e)) return kExitGuard;
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return kExitIo;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return kExitValidation;
  if (dynamic_cast<const std::out_of_range*>(&e)) return kExitValidation;
  return kExitInternal;
}

std::string RunManifest::run_id() const {
  Json inputs(input_hashes);
  return sha256_hex(command + "\n" + inputs.dump() + "\n" + config.dump() + "\n" + tool_version)
      .substr(0, 16);
}

Json RunManifest::to_json() const {
  return {{"kind", "manifest"},   {"command", command},
          {"run", run_id()},      {"inputs", Json(input_hashes)},
          {"config", config},     {"tool_version", tool_version},
          {"wall_time_s", wall_time_s}};
}

namespace {

using Clock = std::chrono::steady_clock;

std::string file_hash(const fs::path& p) { return sha256_hex(read_file(p)); }

Json parse_json_file_body(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    throw ParseError(path.string() + ": " + e.what(),
                     1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + upto, '\n')));
  }
}

// Runs `body` with a manifest, then writes the manifest to `manifest_path`.
// `body` receives the provenance to stamp into every output.
template <typename Body>
void with_manifest(RunManifest manifest, const fs::path& manifest_path, Body&& body) {
  const auto start = Clock::now();
  const Provenance prov{manifest.run_id(), manifest_path.filename().string()};
  body(prov);
  manifest.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
  save_report(manifest_path, manifest.to_json());
}

fs::path sidecar_manifest(const fs::path& out) {
  return out.parent_path() / (out.filename().string() + ".manifest.json");
}

void stamp(Json& record, const Provenance& prov) {
  record["run"] = prov.run;
  record["manifest"] = prov.manifest;
}

Json visibility_config_json(const VisibilityConfig& c) {
  return {{"samples_per_cell", c.samples_per_cell},
          {"object_height_m", c.object_height_m},
          {"sample_height_m", c.sample_height()},
          {"epsilon", c.epsilon}};
}

VisibilityConfig visibility_config_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("visibility must be an object", 0, "visibility");
  VisibilityConfig c;
  for (const auto& [key, v] : j.items()) {
    if (!v.is_number()) throw ParseError("visibility." + key + " must be a number", 0, "visibility." + key);
    if (key == "samples_per_cell") c.samples_per_cell = v.get<int>();
    else if (key == "object_height_m") c.object_height_m = v.get<double>();
    else if (key == "sample_height_m") c.sample_height_m = v.get<double>();
    else if (key == "epsilon") c.epsilon = v.get<double>();
    else throw ParseError("unknown field '" + key + "' in visibility", 0, "visibility." + key);
  }
  return c;
}

struct LoadedProblem {
  PlacementProblem problem;
  std::vector<std::string> warnings;
};

// Matrices plus optional scene into a problem. Weights come from the scene
// ROI when given, otherwise every cell weighs 1.
LoadedProblem load_problem(const VisibilityMatrix& vl, const VisibilityMatrix& vr,
                           const std::optional<Scene>& scene, std::optional<int> budget, double tau,
                           std::optional<double> cost_budget) {
  LoadedProblem out;
  if (!vl.scene_hash.empty() && !vr.scene_hash.empty() && vl.scene_hash != vr.scene_hash) {
    throw ValidationError("lidar and radar matrices come from different scenes");
  }
  if (vl.cells != vr.cells) throw ValidationError("lidar and radar matrices cover different cells");
  std::vector<double> weights(vl.cols(), 1.0);
  if (scene) {
    const std::string h = scene_hash(*scene);
    for (const auto* m : {&vl, &vr}) {
      if (!m->scene_hash.empty() && m->scene_hash != h) {
        out.warnings.push_back(std::string(to_string(m->modality)) +
                               " matrix was built from a different scene (hash " +
                               m->scene_hash.substr(0, 12) + " vs " + h.substr(0, 12) + ")");
      }
    }
    const std::vector<std::size_t> cells(scene->roi.cells.begin(), scene->roi.cells.end());
    if (cells != vl.cells) throw ValidationError("scene ROI cells do not match the matrix columns");
    weights = scene->roi.column_weights();
  }
  const int n = static_cast<int>(vl.rows() + vr.rows());
  out.problem = make_problem(vl, vr, std::move(weights), budget.value_or(n), tau, cost_budget);
  return out;
}

Json id_list(const std::vector<std::size_t>& ids, const VisibilityMatrix& m) {
  Json arr = Json::array();
  for (std::size_t i : ids) arr.push_back({{"index", i}, {"id", m.row_ids.at(i)}});
  return arr;
}

Json solution_json(const PlacementSolution& s, const PlacementProblem& p, SolverKind solver) {
  Json t = Json::array();
  for (auto v : s.t) t.push_back(static_cast<int>(v));
  return {{"kind", "solution"},
          {"solver", std::string(to_string(solver))},
          {"optimal", s.optimal},
          {"objective", s.objective},
          {"budget", p.budget},
          {"tau", p.tau},
          {"cost_budget", p.cost_limit ? Json(*p.cost_limit) : Json(nullptr)},
          {"total_cost", selection_cost(p, s.selection)},
          {"scene_hash", p.vl.scene_hash},
          {"lidar", id_list(s.selection.lidar, p.vl)},
          {"radar", id_list(s.selection.radar, p.vr)},
          {"cells", p.vl.cells},
          {"t", t}};
}

Selection selection_from_json(const Json& record) {
  if (record.at("kind") != "solution") throw ParseError("not a solution record", 0, "kind");
  Selection sel;
  auto read = [&](const char* key, std::vector<std::size_t>& ids) {
    if (!record.contains(key) || !record.at(key).is_array()) {
      throw ParseError(std::string("solution record lacks '") + key + "'", 0, key);
    }
    for (const auto& e : record.at(key)) {
      if (!e.is_object() || !e.contains("index") || !e.at("index").is_number_unsigned()) {
        throw ParseError("selection entries need an 'index'", 0, key);
      }
      ids.push_back(e.at("index").get<std::size_t>());
    }
  };
  read("lidar", sel.lidar);
  read("radar", sel.radar);
  return sel;
}

fs::path resolve_near(const std::string& stored, const fs::path& anchor) {
  fs::path p(stored);
  if (p.is_absolute() || fs::exists(p)) return p;
  return anchor.parent_path() / p;
}

Json coverage_json(const CoverageReport& r) {
  return {{"config", r.config_name},
          {"central_coverage", r.central_coverage},
          {"covered_cells", r.covered_cells},
          {"total_roi_cells", r.total_roi_cells},
          {"lidar_covered_cells", r.lidar_covered_cells},
          {"radar_covered_cells", r.radar_covered_cells},
          {"total_cost", r.total_cost},
          {"per_modality_cost", {{"lidar", r.lidar_cost}, {"radar", r.radar_cost}}}};
}

Json comparison_json(const ComparisonTable& t) {
  Json pairs = Json::array();
  for (const auto& c : t.pairs) {
    pairs.push_back({{"baseline", c.baseline},
                     {"other", c.other},
                     {"coverage_delta", c.coverage_delta},
                     {"cost_reduction_pct",
                      c.cost_reduction_pct ? Json(*c.cost_reduction_pct) : Json("undefined")}});
  }
  return pairs;
}

std::string grid_dump(const std::vector<CoverageReport>& reports, const std::optional<Scene>& scene) {
  std::string out = scene ? "config,cell,row,col,covered\n" : "config,cell,covered\n";
  for (const auto& r : reports) {
    for (std::size_t c = 0; c < r.cells.size(); ++c) {
      const std::size_t j = r.cells[c];
      if (scene) {
        out += fmt::format("{},{},{},{},{}\n", r.config_name, j, scene->grid.row_of(j),
                           scene->grid.col_of(j), int{r.covered[c]});
      } else {
        out += fmt::format("{},{},{}\n", r.config_name, j, int{r.covered[c]});
      }
    }
  }
  return out;
}

std::map<std::string, std::vector<DetectionBox>> by_frame(const std::vector<DetectionFrame>& frames) {
  std::map<std::string, std::vector<DetectionBox>> out;
  for (const auto& f : frames) {
    auto& v = out[f.frame_id];
    v.insert(v.end(), f.boxes.begin(), f.boxes.end());
  }
  return out;
}

std::vector<DetectionFrame> fuse_frames(const std::vector<DetectionFrame>& lidar,
                                        const std::vector<DetectionFrame>& radar,
                                        const FusionConfig& cfg, std::size_t* matched = nullptr) {
  auto l = by_frame(lidar), r = by_frame(radar);
  std::set<std::string> ids;
  for (const auto& [id, v] : l) ids.insert(id);
  for (const auto& [id, v] : r) ids.insert(id);
  std::vector<DetectionFrame> out;
  std::size_t total = 0;
  for (const auto& id : ids) {
    FusionStats stats;
    out.push_back({id, fuse_late(l[id], r[id], cfg, stats)});
    total += stats.matched_pairs;
  }
  if (matched) *matched = total;
  return out;
}

std::string format_ap(const std::optional<double>& ap) {
  return ap ? fmt::format("{:.4f}", *ap) : std::string("undefined");
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json("undefined"); }

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name) {
    out += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.' ? c : '_';
  }
  return out.empty() ? std::string("config") : out;
}

}  // namespace

Json map_to_json(const MapResult& r) {
  Json classes = Json::object();
  for (const auto& [c, ap] : r.per_class) {
    classes[std::string(to_string(c))] = {{"ap", optional_json(ap.ap)},
                                          {"threshold", ap.threshold},
                                          {"num_ground_truth", ap.num_ground_truth},
                                          {"num_predictions", ap.num_predictions},
                                          {"true_positives", ap.true_positives}};
  }
  return {{"map", r.map}, {"per_class", classes}};
}

std::string render_ap_table(const MapResult& a, const MapResult* b) {
  std::string out = b ? fmt::format("{:<12}  {:>9}  {:>9}  {:>10}\n", "class", "AP(a)", "AP(b)",
                                    "delta(pp)")
                      : fmt::format("{:<12}  {:>9}  {:>6}  {:>6}\n", "class", "AP", "GT", "pred");
  for (ObjectClass c : kAllClasses) {
    const APResult& ra = a.per_class.at(c);
    if (!b) {
      out += fmt::format("{:<12}  {:>9}  {:>6}  {:>6}\n", to_string(c), format_ap(ra.ap),
                         ra.num_ground_truth, ra.num_predictions);
      continue;
    }
    const APResult& rb = b->per_class.at(c);
    const std::string delta = ra.ap && rb.ap ? fmt::format("{:+.2f}", 100.0 * (*rb.ap - *ra.ap))
                                             : std::string("undefined");
    out += fmt::format("{:<12}  {:>9}  {:>9}  {:>10}\n", to_string(c), format_ap(ra.ap),
                       format_ap(rb.ap), delta);
  }
  if (b) {
    out += fmt::format("{:<12}  {:>9.4f}  {:>9.4f}  {:>+10.2f}\n", "mAP", a.map, b->map,
                       100.0 * (b->map - a.map));
  } else {
    out += fmt::format("{:<12}  {:>9.4f}\n", "mAP", a.map);
  }
  return out;
}

void cmd_visibility(const VisibilityArgs& args, std::ostream& log) {
  const Scene scene = load_scene(args.scene);
  if (auto v = validate_scene(scene); !v.empty()) {
    for (const auto& x : v) log << "invalid scene: " << x.subject << ": " << x.message << "\n";
    throw ValidationError("scene failed validation with " + std::to_string(v.size()) +
                          " violation(s)");
  }
  RunManifest manifest;
  manifest.command = "visibility";
  manifest.input_hashes["scene"] = file_hash(args.scene);
  manifest.config = visibility_config_json(args.config);
  with_manifest(manifest, args.out_dir / "manifest.json", [&](const Provenance& prov) {
    auto [vl, vr] = build_visibility(scene, args.config, args.workers);
    const std::string hash = scene_hash(scene);
    vl.scene_hash = vr.scene_hash = hash;
    save_matrix(args.out_dir / "lidar.vis", vl, prov);
    save_matrix(args.out_dir / "radar.vis", vr, prov);
    log << "visibility: " << vl.rows() << " lidar x " << vl.cols() << " cells, " << vr.rows()
        << " radar x " << vr.cols() << " cells -> " << args.out_dir.string() << "\n";
  });
}

void cmd_optimize(const OptimizeArgs& args, std::ostream& log) {
  const VisibilityMatrix vl = load_matrix(args.lidar);
  const VisibilityMatrix vr = load_matrix(args.radar);
  std::optional<Scene> scene;
  if (args.scene) scene = load_scene(*args.scene);
  auto loaded = load_problem(vl, vr, scene, args.budget, args.tau, args.cost_budget);
  for (const auto& w : loaded.warnings) log << "warning: " << w << "\n";
  const PlacementProblem& problem = loaded.problem;

  RunManifest manifest;
  manifest.command = "optimize";
  manifest.input_hashes["lidar"] = file_hash(args.lidar);
  manifest.input_hashes["radar"] = file_hash(args.radar);
  if (args.scene) manifest.input_hashes["scene"] = file_hash(*args.scene);
  manifest.config = {{"budget", problem.budget},
                     {"tau", args.tau},
                     {"solver", std::string(to_string(args.solver))},
                     {"cost_budget", args.cost_budget ? Json(*args.cost_budget) : Json(nullptr)}};
  with_manifest(manifest, sidecar_manifest(args.out), [&](const Provenance& prov) {
    const PlacementSolution s = solve(problem, args.solver);
    Json record = solution_json(s, problem, args.solver);
    record["lidar_matrix"] = args.lidar.string();
    record["radar_matrix"] = args.radar.string();
    stamp(record, prov);
    save_report(args.out, record);
    if (args.lp_export) write_file(*args.lp_export, export_milp(problem));
    log << fmt::format("optimize[{}]: objective {:.6g}, {} lidar + {} radar selected\n",
                       to_string(args.solver), s.objective, s.selection.lidar.size(),
                       s.selection.radar.size());
  });
}

void cmd_export_milp(const ExportMilpArgs& args, std::ostream& log) {
  const VisibilityMatrix vl = load_matrix(args.lidar);
  const VisibilityMatrix vr = load_matrix(args.radar);
  std::optional<Scene> scene;
  if (args.scene) scene = load_scene(*args.scene);
  auto loaded = load_problem(vl, vr, scene, args.budget, args.tau, args.cost_budget);
  for (const auto& w : loaded.warnings) log << "warning: " << w << "\n";
  write_file(args.out, export_milp(loaded.problem));
  log << "export-milp: wrote " << args.out.string() << "\n";
}

void cmd_coverage(const CoverageArgs& args, std::ostream& log) {
  if (args.solutions.empty()) throw std::invalid_argument("coverage needs at least one --solution");
  if ((args.lidar || args.radar) && args.solutions.size() != 1) {
    throw std::invalid_argument("--lidar/--radar overrides need exactly one --solution");
  }
  if (!args.names.empty() && args.names.size() != args.solutions.size()) {
    throw std::invalid_argument("give one --name per --solution");
  }
  std::optional<Scene> scene;
  if (args.scene) scene = load_scene(*args.scene);

  RunManifest manifest;
  manifest.command = "coverage";
  manifest.config = {{"theta", args.theta}};
  std::vector<CoverageReport> reports;
  for (std::size_t k = 0; k < args.solutions.size(); ++k) {
    const fs::path& sp = args.solutions[k];
    const Json record = load_report(sp);
    const fs::path lp = args.lidar ? *args.lidar : resolve_near(record.at("lidar_matrix"), sp);
    const fs::path rp = args.radar ? *args.radar : resolve_near(record.at("radar_matrix"), sp);
    const VisibilityMatrix vl = load_matrix(lp), vr = load_matrix(rp);
    auto loaded = load_problem(vl, vr, std::nullopt, std::nullopt, 1.0, std::nullopt);
    const std::string name = args.names.empty() ? sp.stem().string() : args.names[k];
    reports.push_back(central_coverage(loaded.problem, selection_from_json(record), args.theta, name));
    manifest.input_hashes["solution:" + name] = file_hash(sp);
  }

  with_manifest(manifest, sidecar_manifest(args.out), [&](const Provenance& prov) {
    Json record = {{"kind", "coverage"}, {"theta", args.theta}};
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(coverage_json(r));
    record["reports"] = arr;
    std::string text;
    if (reports.size() >= 2) {
      const ComparisonTable table = compare_configs(reports);
      record["comparison"] = comparison_json(table);
      text = render_comparison(table);
    } else {
      const auto& r = reports.front();
      text = fmt::format("{}: central coverage {:.2f}% ({} / {} cells), cost {:.2f}\n",
                         r.config_name, 100.0 * r.central_coverage, r.covered_cells,
                         r.total_roi_cells, r.total_cost);
    }
    stamp(record, prov);
    save_report(args.out, record);
    if (args.grid_dump) write_file(*args.grid_dump, grid_dump(reports, scene));
    log << text;
  });
}

void cmd_simulate(const SimulateArgs& args, std::ostream& log) {
  const Scene scene = load_scene(args.scene);
  const Json record = load_report(args.solution);
  const fs::path lp = args.lidar ? *args.lidar : resolve_near(record.at("lidar_matrix"), args.solution);
  const fs::path rp = args.radar ? *args.radar : resolve_near(record.at("radar_matrix"), args.solution);
  const VisibilityMatrix vl = load_matrix(lp), vr = load_matrix(rp);
  const ScenarioConfig cfg = scenario_from_json(parse_json_file_body(args.scenario));
  const Selection sel = selection_from_json(record);

  RunManifest manifest;
  manifest.command = "simulate";
  manifest.input_hashes = {{"scene", file_hash(args.scene)},
                           {"solution", file_hash(args.solution)},
                           {"lidar", file_hash(lp)},
                           {"radar", file_hash(rp)}};
  manifest.config = scenario_to_json(cfg);
  with_manifest(manifest, args.out_dir / "manifest.json", [&](const Provenance& prov) {
    const ScenarioOutput out = generate_scenario(scene, vl, vr, sel, cfg);
    save_frames(args.out_dir / "gt.frames", out.ground_truth, prov);
    save_frames(args.out_dir / "lidar.frames", out.lidar, prov);
    save_frames(args.out_dir / "radar.frames", out.radar, prov);
    log << "simulate: " << out.ground_truth.size() << " frames -> " << args.out_dir.string() << "\n";
  });
}

void cmd_fuse(const FuseArgs& args, std::ostream& log) {
  const auto lidar = load_frames(args.lidar);
  const auto radar = load_frames(args.radar);
  RunManifest manifest;
  manifest.command = "fuse";
  manifest.input_hashes = {{"lidar", file_hash(args.lidar)}, {"radar", file_hash(args.radar)}};
  manifest.config = {{"iou_threshold", args.iou_threshold}};
  with_manifest(manifest, sidecar_manifest(args.out), [&](const Provenance& prov) {
    std::size_t matched = 0;
    const auto fused = fuse_frames(lidar, radar, FusionConfig{args.iou_threshold}, &matched);
    save_frames(args.out, fused, prov);
    log << "fuse: " << fused.size() << " frames, " << matched << " matched pairs\n";
  });
}

void cmd_evaluate(const EvaluateArgs& args, std::ostream& log) {
  const auto gt = load_frames(args.ground_truth);
  const MapResult a = evaluate_map(pair_frames(gt, load_frames(args.predictions)), args.mode,
                                   args.threshold);
  std::optional<MapResult> b;
  if (args.predictions_b) {
    b = evaluate_map(pair_frames(gt, load_frames(*args.predictions_b)), args.mode, args.threshold);
  }
  const std::string table = render_ap_table(a, b ? &*b : nullptr);
  log << table;
  if (!args.out) return;

  RunManifest manifest;
  manifest.command = "evaluate";
  manifest.input_hashes = {{"ground_truth", file_hash(args.ground_truth)},
                           {"predictions", file_hash(args.predictions)}};
  if (args.predictions_b) manifest.input_hashes["predictions_b"] = file_hash(*args.predictions_b);
  manifest.config = {{"mode", std::string(to_string(args.mode))},
                     {"threshold", args.threshold ? Json(*args.threshold) : Json(nullptr)}};
  with_manifest(manifest, sidecar_manifest(*args.out), [&](const Provenance& prov) {
    Json record = {{"kind", "ap_table"}, {"mode", std::string(to_string(args.mode))}, {"a", map_to_json(a)}};
    if (b) {
      record["b"] = map_to_json(*b);
      Json deltas = Json::object();
      for (ObjectClass c : kAllClasses) {
        const auto& ra = a.per_class.at(c).ap;
        const auto& rb = b->per_class.at(c).ap;
        deltas[std::string(to_string(c))] = ra && rb ? Json(*rb - *ra) : Json("undefined");
      }
      deltas["map"] = b->map - a.map;
      record["delta_b_minus_a"] = deltas;
    }
    stamp(record, prov);
    save_report(*args.out, record);
  });
}

// --- pipeline -------------------------------------------------------------------

namespace {

struct PipelineConfigEntry {
  std::string name;
  std::optional<SensorSpec> lidar_sensor;
  std::optional<SensorSpec> radar_sensor;
  std::optional<int> budget;
  std::optional<double> cost_budget;
};

struct PipelineConfig {
  ScenarioConfig scenario;
  VisibilityConfig visibility;
  SolverKind solver = SolverKind::kBranchBound;
  double tau = 1.0;
  double theta = 0.0;
  std::optional<int> budget;
  double fusion_iou = 0.3;
  MatchMode eval_mode = MatchMode::kIou;
  std::optional<double> eval_threshold;
  std::vector<PipelineConfigEntry> configs;
};

SensorSpec sensor_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + " must be an object", 0, where);
  SensorSpec s;
  bool have_modality = false, have_name = false;
  for (const auto& [key, v] : j.items()) {
    const std::string field = where + "." + key;
    auto num = [&] {
      if (!v.is_number()) throw ParseError(field + " must be a number", 0, field);
      return v.get<double>();
    };
    if (key == "name") {
      if (!v.is_string()) throw ParseError(field + " must be a string", 0, field);
      s.name = v.get<std::string>();
      have_name = true;
    } else if (key == "modality") {
      if (!v.is_string()) throw ParseError(field + " must be a string", 0, field);
      try {
        s.modality = parse_modality(v.get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), 0, field);
      }
      have_modality = true;
    } else if (key == "beams") {
      if (!v.is_number_integer()) throw ParseError(field + " must be an integer", 0, field);
      s.beams = v.get<int>();
    } else if (key == "hfov_deg") {
      s.hfov_deg = num();
    } else if (key == "vfov_deg") {
      s.vfov_deg = num();
    } else if (key == "max_range_m") {
      s.max_range_m = num();
    } else if (key == "rate_hz") {
      s.rate_hz = num();
    } else if (key == "unit_cost") {
      s.unit_cost = num();
    } else {
      throw ParseError("unknown field '" + key + "' in " + where, 0, field);
    }
  }
  if (!have_name || !have_modality) {
    throw ParseError(where + " needs 'name' and 'modality'", 0, where);
  }
  if (auto v = validate_sensor_spec(s, where); !v.empty()) {
    throw ValidationError(v.front().subject + ": " + v.front().message);
  }
  return s;
}

PipelineConfig pipeline_config_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("pipeline config must be an object", 0, "pipeline");
  PipelineConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "scenario") {
      c.scenario = scenario_from_json(v);
    } else if (key == "visibility") {
      c.visibility = visibility_config_from_json(v);
    } else if (key == "solver") {
      try {
        c.solver = parse_solver(v.get<std::string>());
      } catch (const std::exception& e) {
        throw ParseError(e.what(), 0, "solver");
      }
    } else if (key == "tau" || key == "theta" || key == "fusion_iou_threshold") {
      if (!v.is_number()) throw ParseError(key + " must be a number", 0, key);
      (key == "tau" ? c.tau : key == "theta" ? c.theta : c.fusion_iou) = v.get<double>();
    } else if (key == "budget") {
      if (!v.is_number_integer()) throw ParseError("budget must be an integer", 0, key);
      c.budget = v.get<int>();
    } else if (key == "eval") {
      if (!v.is_object()) throw ParseError("eval must be an object", 0, key);
      for (const auto& [ek, ev] : v.items()) {
        if (ek == "mode") {
          try {
            c.eval_mode = parse_match_mode(ev.get<std::string>());
          } catch (const std::exception& e) {
            throw ParseError(e.what(), 0, "eval.mode");
          }
        } else if (ek == "threshold") {
          if (!ev.is_null() && !ev.is_number()) throw ParseError("eval.threshold must be a number", 0, "eval.threshold");
          if (ev.is_number()) c.eval_threshold = ev.get<double>();
        } else {
          throw ParseError("unknown field '" + ek + "' in eval", 0, "eval." + ek);
        }
      }
    } else if (key == "configs") {
      if (!v.is_array()) throw ParseError("configs must be an array", 0, key);
      for (std::size_t k = 0; k < v.size(); ++k) {
        const std::string where = "configs[" + std::to_string(k) + "]";
        const Json& e = v[k];
        if (!e.is_object()) throw ParseError(where + " must be an object", 0, where);
        PipelineConfigEntry entry;
        for (const auto& [ck, cv] : e.items()) {
          if (ck == "name") {
            if (!cv.is_string()) throw ParseError(where + ".name must be a string", 0, where + ".name");
            entry.name = cv.get<std::string>();
          } else if (ck == "lidar_sensor") {
            entry.lidar_sensor = sensor_from_json(cv, where + ".lidar_sensor");
          } else if (ck == "radar_sensor") {
            entry.radar_sensor = sensor_from_json(cv, where + ".radar_sensor");
          } else if (ck == "budget") {
            if (!cv.is_number_integer()) throw ParseError("budget must be an integer", 0, where + ".budget");
            entry.budget = cv.get<int>();
          } else if (ck == "cost_budget") {
            if (!cv.is_number()) throw ParseError("cost_budget must be a number", 0, where + ".cost_budget");
            entry.cost_budget = cv.get<double>();
          } else {
            throw ParseError("unknown field '" + ck + "' in " + where, 0, where + "." + ck);
          }
        }
        if (entry.name.empty()) throw ParseError(where + " needs a name", 0, where + ".name");
        c.configs.push_back(std::move(entry));
      }
    } else {
      throw ParseError("unknown field '" + key + "' in pipeline config", 0, key);
    }
  }
  if (c.configs.empty()) c.configs.push_back({"scene", std::nullopt, std::nullopt, std::nullopt, std::nullopt});
  std::set<std::string> names;
  for (const auto& e : c.configs) {
    if (!names.insert(sanitize(e.name)).second) {
      throw ValidationError("pipeline config names must be unique: '" + e.name + "'");
    }
  }
  return c;
}

struct ConfigOutcome {
  CoverageReport coverage;
  MapResult fused, lidar_only, radar_only;
  PlacementSolution solution;
};

std::optional<double> safe_map(const std::vector<FramePair>& frames, MatchMode mode,
                               std::optional<double> threshold, MapResult& out) {
  try {
    out = evaluate_map(frames, mode, threshold);
    return out.map;
  } catch (const std::domain_error&) {
    return std::nullopt;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

}  // namespace

void cmd_pipeline(const PipelineArgs& args, std::ostream& log) {
  const Scene base = load_scene(args.scene);
  if (auto v = validate_scene(base); !v.empty()) {
    throw ValidationError("scene: " + v.front().subject + ": " + v.front().message);
  }
  const Json config_json = parse_json_file_body(args.config);
  const PipelineConfig cfg = pipeline_config_from_json(config_json);
  const std::optional<int> global_budget = args.budget ? args.budget : cfg.budget;

  RunManifest manifest;
  manifest.command = "pipeline";
  manifest.input_hashes = {{"scene", file_hash(args.scene)}, {"config", file_hash(args.config)}};
  manifest.config = {{"pipeline", config_json},
                     {"budget", global_budget ? Json(*global_budget) : Json(nullptr)}};

  with_manifest(manifest, args.out_dir / "manifest.json", [&](const Provenance& prov) {
    std::vector<ConfigOutcome> outcomes;
    std::vector<std::string> stage_errors;
    for (const auto& entry : cfg.configs) {
      const fs::path dir = args.out_dir / sanitize(entry.name);
      Scene scene = base;
      if (entry.lidar_sensor) {
        for (auto& m : scene.lidar_candidates) m.spec = *entry.lidar_sensor;
      }
      if (entry.radar_sensor) {
        for (auto& m : scene.radar_candidates) m.spec = *entry.radar_sensor;
      }
      auto [vl, vr] = build_visibility(scene, cfg.visibility, args.workers);
      vl.scene_hash = vr.scene_hash = scene_hash(scene);
      save_matrix(dir / "lidar.vis", vl, prov);
      save_matrix(dir / "radar.vis", vr, prov);

      const std::optional<int> budget = entry.budget ? entry.budget : global_budget;
      auto loaded = load_problem(vl, vr, scene, budget, cfg.tau, entry.cost_budget);
      ConfigOutcome o;
      o.solution = solve(loaded.problem, cfg.solver);
      Json sol = solution_json(o.solution, loaded.problem, cfg.solver);
      sol["lidar_matrix"] = "lidar.vis";
      sol["radar_matrix"] = "radar.vis";
      stamp(sol, prov);
      save_report(dir / "solution.json", sol);

      o.coverage = central_coverage(loaded.problem, o.solution.selection, cfg.theta, entry.name);

      const ScenarioOutput sim = generate_scenario(scene, vl, vr, o.solution.selection, cfg.scenario);
      const auto fused = fuse_frames(sim.lidar, sim.radar, FusionConfig{cfg.fusion_iou});
      save_frames(dir / "gt.frames", sim.ground_truth, prov);
      save_frames(dir / "lidar.frames", sim.lidar, prov);
      save_frames(dir / "radar.frames", sim.radar, prov);
      save_frames(dir / "fused.frames", fused, prov);

      if (!safe_map(pair_frames(sim.ground_truth, fused), cfg.eval_mode, cfg.eval_threshold, o.fused)) {
        throw ValidationError(entry.name + "/evaluate: no evaluable classes (scenario produced no ground truth)");
      }
      safe_map(pair_frames(sim.ground_truth, sim.lidar), cfg.eval_mode, cfg.eval_threshold, o.lidar_only);
      safe_map(pair_frames(sim.ground_truth, sim.radar), cfg.eval_mode, cfg.eval_threshold, o.radar_only);
      outcomes.push_back(std::move(o));
      log << fmt::format("pipeline: {} done (coverage {:.2f}%, fused mAP {:.4f})\n", entry.name,
                         100.0 * outcomes.back().coverage.central_coverage,
                         outcomes.back().fused.map);
    }

    // Text report.
    std::size_t name_w = 6;
    for (const auto& o : outcomes) name_w = std::max(name_w, o.coverage.config_name.size());
    std::string text = fmt::format("{:<{}}  {:>9}  {:>10}  {:>10}  {:>10}  {:>10}", "config",
                                   name_w, "coverage", "cost", "mAP_fused", "mAP_lidar",
                                   "mAP_radar");
    for (ObjectClass c : kAllClasses) text += fmt::format("  {:>10}", to_string(c));
    text += "\n";
    Json configs = Json::array();
    for (const auto& o : outcomes) {
      text += fmt::format("{:<{}}  {:>8.2f}%  {:>10.2f}  {:>10.4f}  {:>10.4f}  {:>10.4f}",
                          o.coverage.config_name, name_w, 100.0 * o.coverage.central_coverage,
                          o.coverage.total_cost, o.fused.map, o.lidar_only.map, o.radar_only.map);
      for (ObjectClass c : kAllClasses) text += fmt::format("  {:>10}", format_ap(o.fused.per_class.at(c).ap));
      text += "\n";
      Json selected = {{"lidar", o.solution.selection.lidar}, {"radar", o.solution.selection.radar}};
      configs.push_back({{"name", o.coverage.config_name},
                         {"coverage", coverage_json(o.coverage)},
                         {"objective", o.solution.objective},
                         {"selection", selected},
                         {"fused", map_to_json(o.fused)},
                         {"lidar_only_map", o.lidar_only.map},
                         {"radar_only_map", o.radar_only.map}});
    }
    Json record = {{"kind", "pipeline_report"}, {"configs", configs}};
    if (outcomes.size() >= 2) {
      std::vector<CoverageReport> reports;
      for (const auto& o : outcomes) reports.push_back(o.coverage);
      const ComparisonTable table = compare_configs(reports);
      text += fmt::format("\n{:<{}}  {:<{}}  {:>14}  {:>15}  {:>10}  {:>16}\n", "baseline", name_w,
                          "other", name_w, "coverage_delta", "cost_reduction", "mAP_delta",
                          "pedestrian_delta");
      Json pairs = Json::array();
      std::size_t k = 0;
      for (std::size_t a = 0; a < outcomes.size(); ++a) {
        for (std::size_t b = a + 1; b < outcomes.size(); ++b, ++k) {
          const auto& pc = table.pairs[k];
          const auto& pa = outcomes[a].fused.per_class.at(ObjectClass::kPedestrian).ap;
          const auto& pb = outcomes[b].fused.per_class.at(ObjectClass::kPedestrian).ap;
          const std::optional<double> ped = pa && pb ? std::optional<double>(*pb - *pa) : std::nullopt;
          const double map_delta = outcomes[b].fused.map - outcomes[a].fused.map;
          text += fmt::format(
              "{:<{}}  {:<{}}  {:>+13.2f}%  {:>15}  {:>+9.2f}%  {:>16}\n", pc.baseline, name_w,
              pc.other, name_w, 100.0 * pc.coverage_delta,
              pc.cost_reduction_pct ? fmt::format("{:.1f}%", *pc.cost_reduction_pct) : "undefined",
              100.0 * map_delta, ped ? fmt::format("{:+.2f}%", 100.0 * *ped) : "undefined");
          pairs.push_back({{"baseline", pc.baseline},
                           {"other", pc.other},
                           {"coverage_delta", pc.coverage_delta},
                           {"cost_reduction_pct", optional_json(pc.cost_reduction_pct)},
                           {"map_delta", map_delta},
                           {"pedestrian_ap_delta", optional_json(ped)}});
        }
      }
      record["comparison"] = pairs;
    }
    stamp(record, prov);
    save_report(args.out_dir / "pipeline_report.json", record);
    write_file(args.out_dir / "pipeline_report.txt", text);
    log << text;
  });
}

}  // namespace rsp
