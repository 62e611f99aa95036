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

#include "rsp/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "rsp/error.hpp"

namespace rsp {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int k = 0; k < len; ++k) {
    out += kHex[digest[k] >> 4];
    out += kHex[digest[k] & 0xf];
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

namespace {

// --- shared helpers ----------------------------------------------------------

// Splits off and checks the magic line; returns the remaining text.
std::string_view strip_magic(std::string_view text, std::string_view magic) {
  const auto nl = text.find('\n');
  std::string_view first = text.substr(0, nl);
  if (!first.empty() && first.back() == '\r') first.remove_suffix(1);
  const auto space = first.find(' ');
  if (first.substr(0, space) != magic || space == std::string_view::npos) {
    throw ParseError("expected '" + std::string(magic) + " <version>' header", 1);
  }
  const std::string version(first.substr(space + 1));
  if (version != std::to_string(kFormatVersion)) {
    throw ParseError("unsupported " + std::string(magic) + " format version '" + version +
                         "' (expected " + std::to_string(kFormatVersion) + ")",
                     1);
  }
  return nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
}

std::string with_magic(std::string_view magic, const std::string& body) {
  return std::string(magic) + " " + std::to_string(kFormatVersion) + "\n" + body;
}

Json parse_json_body(std::string_view body) {
  try {
    return Json::parse(body.begin(), body.end());
  } catch (const Json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, body.size());
    const std::size_t line =
        2 + static_cast<std::size_t>(std::count(body.begin(), body.begin() + upto, '\n'));
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ParseError(what, line);
  }
}

void check_fields(const Json& obj, const std::string& where,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional = {}) {
  if (!obj.is_object()) throw ParseError(where + " must be an object", 0, where);
  std::set<std::string> known;
  for (const char* k : required) {
    known.insert(k);
    if (!obj.contains(k)) {
      throw ParseError("missing field '" + std::string(k) + "' in " + where, 0,
                       where + "." + k);
    }
  }
  for (const char* k : optional) known.insert(k);
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) {
      throw ParseError("unknown field '" + key + "' in " + where, 0, where + "." + key);
    }
  }
}

double number(const Json& obj, const char* key, const std::string& where) {
  const Json& v = obj.at(key);
  if (!v.is_number()) {
    throw ParseError("field '" + std::string(key) + "' in " + where + " must be a number", 0,
                     where + "." + key);
  }
  return v.get<double>();
}

std::int64_t integer(const Json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ParseError(field + " must be an integer", 0, field);
  return v.get<std::int64_t>();
}

std::string text(const Json& obj, const char* key, const std::string& where) {
  const Json& v = obj.at(key);
  if (!v.is_string()) {
    throw ParseError("field '" + std::string(key) + "' in " + where + " must be a string", 0,
                     where + "." + key);
  }
  return v.get<std::string>();
}

std::vector<double> numbers(const Json& v, std::size_t n, const std::string& field) {
  if (!v.is_array() || v.size() != n) {
    throw ParseError(field + " must be an array of " + std::to_string(n) + " numbers", 0, field);
  }
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ParseError(field + " must hold numbers", 0, field);
    out.push_back(x.get<double>());
  }
  return out;
}

Vec3 vec3(const Json& v, const std::string& field) {
  auto n = numbers(v, 3, field);
  return {n[0], n[1], n[2]};
}

Vec2 vec2(const Json& v, const std::string& field) {
  auto n = numbers(v, 2, field);
  return {n[0], n[1]};
}

Json to_json(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }
Json to_json(const Vec2& v) { return Json::array({v.x, v.y}); }

template <typename F>
auto as_parse_error(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0, field);
  }
}

// --- scene -------------------------------------------------------------------

Json spec_to_json(const SensorSpec& s) {
  Json j = {{"modality", std::string(to_string(s.modality))},
            {"hfov_deg", s.hfov_deg},
            {"vfov_deg", s.vfov_deg},
            {"max_range_m", s.max_range_m},
            {"rate_hz", s.rate_hz},
            {"unit_cost", s.unit_cost}};
  if (s.beams) j["beams"] = *s.beams;
  return j;
}

SensorSpec spec_from_json(const std::string& name, const Json& j) {
  const std::string where = "sensors." + name;
  check_fields(j, where, {"modality", "hfov_deg", "vfov_deg", "max_range_m", "rate_hz"},
               {"beams", "unit_cost"});
  SensorSpec s;
  s.name = name;
  s.modality = as_parse_error(where + ".modality",
                              [&] { return parse_modality(text(j, "modality", where)); });
  if (j.contains("beams")) s.beams = static_cast<int>(integer(j.at("beams"), where + ".beams"));
  s.hfov_deg = number(j, "hfov_deg", where);
  s.vfov_deg = number(j, "vfov_deg", where);
  s.max_range_m = number(j, "max_range_m", where);
  s.rate_hz = number(j, "rate_hz", where);
  if (j.contains("unit_cost")) s.unit_cost = number(j, "unit_cost", where);
  return s;
}

Json mount_to_json(const CandidateMount& m) {
  return {{"id", m.id},
          {"position", to_json(m.position)},
          {"yaw_deg", m.yaw_deg},
          {"pitch_deg", m.pitch_deg},
          {"sensor", m.spec.name}};
}

std::vector<CandidateMount> mounts_from_json(const Json& arr, const char* key,
                                             const std::map<std::string, SensorSpec>& specs) {
  if (!arr.is_array()) throw ParseError(std::string(key) + " must be an array", 0, key);
  std::vector<CandidateMount> out;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string where = std::string(key) + "[" + std::to_string(k) + "]";
    const Json& j = arr[k];
    check_fields(j, where, {"id", "position", "sensor"}, {"yaw_deg", "pitch_deg"});
    CandidateMount m;
    m.id = text(j, "id", where);
    m.position = vec3(j.at("position"), where + ".position");
    if (j.contains("yaw_deg")) m.yaw_deg = number(j, "yaw_deg", where);
    if (j.contains("pitch_deg")) m.pitch_deg = number(j, "pitch_deg", where);
    const std::string sensor = text(j, "sensor", where);
    auto it = specs.find(sensor);
    if (it == specs.end()) {
      throw ParseError("unknown sensor '" + sensor + "'", 0, where + ".sensor");
    }
    m.spec = it->second;
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

Json scene_to_json(const Scene& scene) {
  Json j;
  j["grid"] = {{"origin", to_json(scene.grid.origin)},
               {"cell_size", scene.grid.cell_size},
               {"nx", scene.grid.nx},
               {"ny", scene.grid.ny}};
  Json cells = Json::array();
  for (std::size_t c : scene.roi.cells) cells.push_back(c);
  Json weights = Json::array();
  for (const auto& [c, w] : scene.roi.weights) weights.push_back(Json::array({c, w}));
  j["roi"] = {{"cells", cells}, {"weights", weights}};
  Json occ = Json::array();
  for (const auto& o : scene.occluders) {
    occ.push_back({{"min", to_json(o.box.min)}, {"max", to_json(o.box.max)}});
  }
  j["occluders"] = occ;
  Json sensors = Json::object();
  for (const auto* set : {&scene.lidar_candidates, &scene.radar_candidates}) {
    for (const auto& m : *set) {
      if (sensors.contains(m.spec.name) && sensors[m.spec.name] != spec_to_json(m.spec)) {
        throw ValidationError("sensor spec name '" + m.spec.name +
                              "' reused with different fields");
      }
      sensors[m.spec.name] = spec_to_json(m.spec);
    }
  }
  j["sensors"] = sensors;
  Json lidar = Json::array(), radar = Json::array();
  for (const auto& m : scene.lidar_candidates) lidar.push_back(mount_to_json(m));
  for (const auto& m : scene.radar_candidates) radar.push_back(mount_to_json(m));
  j["lidar_candidates"] = lidar;
  j["radar_candidates"] = radar;
  return j;
}

Scene scene_from_json(const Json& body) {
  check_fields(body, "scene", {"grid", "roi"},
               {"content_hash", "occluders", "sensors", "lidar_candidates", "radar_candidates"});
  Scene s;
  const Json& g = body.at("grid");
  check_fields(g, "grid", {"origin", "cell_size", "nx", "ny"});
  s.grid.origin = vec2(g.at("origin"), "grid.origin");
  s.grid.cell_size = number(g, "cell_size", "grid");
  s.grid.nx = static_cast<int>(integer(g.at("nx"), "grid.nx"));
  s.grid.ny = static_cast<int>(integer(g.at("ny"), "grid.ny"));

  const Json& roi = body.at("roi");
  check_fields(roi, "roi", {"cells"}, {"weights"});
  if (!roi.at("cells").is_array()) throw ParseError("roi.cells must be an array", 0, "roi.cells");
  for (const auto& c : roi.at("cells")) {
    const auto v = integer(c, "roi.cells[]");
    if (v < 0) throw ParseError("negative cell index", 0, "roi.cells");
    if (!s.roi.cells.insert(static_cast<std::size_t>(v)).second) {
      throw ParseError("duplicate ROI cell " + std::to_string(v), 0, "roi.cells");
    }
  }
  if (roi.contains("weights")) {
    const Json& w = roi.at("weights");
    if (!w.is_array()) throw ParseError("roi.weights must be an array", 0, "roi.weights");
    for (const auto& pair : w) {
      if (!pair.is_array() || pair.size() != 2 || !pair[1].is_number()) {
        throw ParseError("roi.weights entries must be [cell, weight]", 0, "roi.weights");
      }
      const auto cell = integer(pair[0], "roi.weights[][0]");
      if (cell < 0) throw ParseError("negative cell index", 0, "roi.weights");
      s.roi.weights[static_cast<std::size_t>(cell)] = pair[1].get<double>();
    }
  }

  if (body.contains("occluders")) {
    const Json& occ = body.at("occluders");
    if (!occ.is_array()) throw ParseError("occluders must be an array", 0, "occluders");
    for (std::size_t k = 0; k < occ.size(); ++k) {
      const std::string where = "occluders[" + std::to_string(k) + "]";
      if (occ[k].is_object() && (occ[k].contains("mesh") || occ[k].contains("vertices"))) {
        throw ParseError("only axis-aligned box occluders are supported", 0, where);
      }
      check_fields(occ[k], where, {"min", "max"});
      s.occluders.push_back(
          {{vec3(occ[k].at("min"), where + ".min"), vec3(occ[k].at("max"), where + ".max")}});
    }
  }

  std::map<std::string, SensorSpec> specs;
  if (body.contains("sensors")) {
    const Json& sensors = body.at("sensors");
    if (!sensors.is_object()) throw ParseError("sensors must be an object", 0, "sensors");
    for (const auto& [name, spec] : sensors.items()) specs[name] = spec_from_json(name, spec);
  }
  if (body.contains("lidar_candidates")) {
    s.lidar_candidates = mounts_from_json(body.at("lidar_candidates"), "lidar_candidates", specs);
  }
  if (body.contains("radar_candidates")) {
    s.radar_candidates = mounts_from_json(body.at("radar_candidates"), "radar_candidates", specs);
  }
  return s;
}

std::string scene_hash(const Scene& scene) { return sha256_hex(scene_to_json(scene).dump()); }

std::string scene_to_text(const Scene& scene) {
  Json body = scene_to_json(scene);
  const std::string hash = sha256_hex(body.dump());
  body["content_hash"] = hash;
  return with_magic(kSceneMagic, body.dump(2) + "\n");
}

Scene scene_from_text(std::string_view text_in) {
  const std::string_view body_text = strip_magic(text_in, kSceneMagic);
  Json body = parse_json_body(body_text);
  Scene scene = scene_from_json(body);
  if (body.contains("content_hash")) {
    if (!body.at("content_hash").is_string()) {
      throw ParseError("content_hash must be a string", 0, "content_hash");
    }
    const std::string stored = body.at("content_hash").get<std::string>();
    body.erase("content_hash");
    if (sha256_hex(body.dump()) != stored) {
      throw ParseError("content hash mismatch (file edited or corrupted)", 0, "content_hash");
    }
  }
  return scene;
}

void save_scene(const std::filesystem::path& path, const Scene& scene) {
  write_file(path, scene_to_text(scene));
}

Scene load_scene(const std::filesystem::path& path) { return scene_from_text(read_file(path)); }

// --- matrix ------------------------------------------------------------------

namespace {

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& tok, std::size_t line, const std::string& field) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (tok.empty() || *end != '\0' || !std::isfinite(v)) {
    throw ParseError("bad number '" + tok + "'", line, field);
  }
  return v;
}

std::size_t parse_count(const std::string& tok, std::size_t line, const std::string& field) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ParseError("bad count '" + tok + "'", line, field);
  }
  return static_cast<std::size_t>(std::stoull(tok));
}

}  // namespace

std::string matrix_to_text(const VisibilityMatrix& m, const Provenance& prov) {
  std::string out = with_magic(kMatrixMagic, "");
  out += "modality " + std::string(to_string(m.modality)) + "\n";
  out += "rows " + std::to_string(m.rows()) + "\n";
  out += "cols " + std::to_string(m.cols()) + "\n";
  out += "epsilon " + fmt17(m.epsilon) + "\n";
  out += "scene_hash " + (m.scene_hash.empty() ? std::string("-") : m.scene_hash) + "\n";
  if (!prov.run.empty()) out += "run " + prov.run + "\n";
  if (!prov.manifest.empty()) out += "manifest " + prov.manifest + "\n";
  out += "cells";
  for (std::size_t c : m.cells) out += " " + std::to_string(c);
  out += "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const std::string id = i < m.row_ids.size() ? m.row_ids[i] : "row" + std::to_string(i);
    const double cost = i < m.row_costs.size() ? m.row_costs[i] : 0.0;
    out += "row " + id + " " + fmt17(cost);
    for (std::size_t j = 0; j < m.cols(); ++j) out += " " + fmt9(m(i, j));
    out += "\n";
  }
  out += "end\n";
  return out;
}

VisibilityMatrix matrix_from_text(std::string_view text_in, Provenance* prov) {
  const std::string_view body = strip_magic(text_in, kMatrixMagic);
  std::istringstream in{std::string(body)};
  VisibilityMatrix m;
  std::optional<std::size_t> rows, cols;
  bool have_modality = false, have_cells = false, have_end = false, have_epsilon = false;
  std::string line;
  std::size_t line_no = 1;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (have_end) throw ParseError("content after 'end'", line_no);
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    auto one = [&]() -> const std::string& {
      if (toks.size() != 1) throw ParseError("'" + key + "' takes one value", line_no, key);
      return toks[0];
    };
    if (key == "modality") {
      m.modality = as_parse_error("modality", [&] { return parse_modality(one()); });
      have_modality = true;
    } else if (key == "rows") {
      rows = parse_count(one(), line_no, key);
    } else if (key == "cols") {
      cols = parse_count(one(), line_no, key);
    } else if (key == "epsilon") {
      m.epsilon = parse_double(one(), line_no, key);
      if (!(m.epsilon > 0.0 && m.epsilon < 1.0)) {
        throw ParseError("epsilon outside (0, 1)", line_no, key);
      }
      have_epsilon = true;
    } else if (key == "scene_hash") {
      m.scene_hash = one() == "-" ? std::string() : one();
    } else if (key == "run") {
      if (prov) prov->run = one();
    } else if (key == "manifest") {
      if (prov) prov->manifest = one();
    } else if (key == "cells") {
      if (!cols) throw ParseError("'cols' must precede 'cells'", line_no, key);
      if (toks.size() != *cols) throw ParseError("cell count does not match cols", line_no, key);
      for (const auto& t : toks) m.cells.push_back(parse_count(t, line_no, key));
      have_cells = true;
    } else if (key == "row") {
      if (!rows || !cols || !have_cells) {
        throw ParseError("header incomplete before first row", line_no, key);
      }
      if (row == 0) m.values = DenseMatrix(*rows, *cols);
      if (row >= *rows) throw ParseError("more rows than declared", line_no, key);
      if (toks.size() != *cols + 2) {
        throw ParseError("row needs id, cost and " + std::to_string(*cols) + " values", line_no,
                         key);
      }
      m.row_ids.push_back(toks[0]);
      m.row_costs.push_back(parse_double(toks[1], line_no, "row.cost"));
      const double bound = clamp_bound(m.epsilon);
      for (std::size_t j = 0; j < *cols; ++j) {
        const double v = parse_double(toks[j + 2], line_no, "row.value");
        if (!(v >= 0.0 && v <= bound)) {
          throw ParseError("entry " + toks[j + 2] + " outside [0, 1 - epsilon]", line_no,
                           "row.value");
        }
        m.values(row, j) = v;
      }
      ++row;
    } else if (key == "end") {
      have_end = true;
    } else {
      throw ParseError("unknown field '" + key + "'", line_no, key);
    }
  }
  if (!have_end) throw ParseError("missing 'end' (truncated file?)", line_no);
  if (!have_modality || !rows || !cols || !have_cells || !have_epsilon) {
    throw ParseError("matrix header incomplete", line_no);
  }
  if (row != *rows) {
    throw ParseError("declared " + std::to_string(*rows) + " rows, found " + std::to_string(row),
                     line_no);
  }
  if (*rows == 0) m.values = DenseMatrix(0, *cols);
  return m;
}

void save_matrix(const std::filesystem::path& path, const VisibilityMatrix& m,
                 const Provenance& prov) {
  write_file(path, matrix_to_text(m, prov));
}

VisibilityMatrix load_matrix(const std::filesystem::path& path, Provenance* prov) {
  return matrix_from_text(read_file(path), prov);
}

// --- frames ------------------------------------------------------------------

Json box_to_json(const DetectionBox& b) {
  Json j = {{"center", to_json(b.center)},
            {"size", to_json(b.size)},
            {"yaw", b.yaw},
            {"class", std::string(to_string(b.label))},
            {"score", b.score},
            {"source", std::string(to_string(b.source))}};
  if (b.velocity) j["velocity"] = to_json(*b.velocity);
  return j;
}

DetectionBox box_from_json(const Json& j) {
  check_fields(j, "box", {"center", "size", "yaw", "class", "source"}, {"score", "velocity"});
  DetectionBox b;
  b.center = vec3(j.at("center"), "box.center");
  b.size = vec3(j.at("size"), "box.size");
  b.yaw = number(j, "yaw", "box");
  b.label = as_parse_error("box.class", [&] { return parse_object_class(text(j, "class", "box")); });
  b.source =
      as_parse_error("box.source", [&] { return parse_box_source(text(j, "source", "box")); });
  if (j.contains("score")) b.score = number(j, "score", "box");
  if (j.contains("velocity")) b.velocity = vec2(j.at("velocity"), "box.velocity");
  if (auto err = check_box(b)) throw ParseError(*err, 0, "box");
  return b;
}

std::string frames_to_text(std::vector<DetectionFrame> frames, const Provenance& prov) {
  std::sort(frames.begin(), frames.end(),
            [](const auto& a, const auto& b) { return a.frame_id < b.frame_id; });
  std::string body = "{";
  if (!prov.run.empty()) body += "\"run\":" + Json(prov.run).dump() + ",\n";
  if (!prov.manifest.empty()) body += "\"manifest\":" + Json(prov.manifest).dump() + ",\n";
  body += "\"frames\":[";
  for (std::size_t f = 0; f < frames.size(); ++f) {
    auto& boxes = frames[f].boxes;
    sort_canonical(boxes);
    body += f == 0 ? "\n" : ",\n";
    body += "{\"frame_id\":" + Json(frames[f].frame_id).dump() + ",\"boxes\":[";
    for (std::size_t k = 0; k < boxes.size(); ++k) {
      body += k == 0 ? "\n  " : ",\n  ";
      body += box_to_json(boxes[k]).dump();
    }
    body += "]}";
  }
  body += "]}\n";
  return with_magic(kFramesMagic, body);
}

std::vector<DetectionFrame> frames_from_text(std::string_view text_in, Provenance* prov) {
  const Json body = parse_json_body(strip_magic(text_in, kFramesMagic));
  check_fields(body, "frames file", {"frames"}, {"run", "manifest"});
  if (prov) {
    if (body.contains("run")) prov->run = text(body, "run", "frames file");
    if (body.contains("manifest")) prov->manifest = text(body, "manifest", "frames file");
  }
  const Json& arr = body.at("frames");
  if (!arr.is_array()) throw ParseError("frames must be an array", 0, "frames");
  std::vector<DetectionFrame> out;
  std::set<std::string> ids;
  for (std::size_t f = 0; f < arr.size(); ++f) {
    const std::string where = "frames[" + std::to_string(f) + "]";
    check_fields(arr[f], where, {"frame_id", "boxes"});
    DetectionFrame frame;
    frame.frame_id = text(arr[f], "frame_id", where);
    if (!ids.insert(frame.frame_id).second) {
      throw ParseError("duplicate frame id '" + frame.frame_id + "'", 0, where);
    }
    const Json& boxes = arr[f].at("boxes");
    if (!boxes.is_array()) throw ParseError("boxes must be an array", 0, where + ".boxes");
    for (std::size_t k = 0; k < boxes.size(); ++k) {
      try {
        frame.boxes.push_back(box_from_json(boxes[k]));
      } catch (const ParseError& e) {
        throw ParseError(std::string(e.what()) + " (" + where + ".boxes[" + std::to_string(k) +
                             "])",
                         0, where + ".boxes[" + std::to_string(k) + "]");
      }
    }
    out.push_back(std::move(frame));
  }
  return out;
}

void save_frames(const std::filesystem::path& path, const std::vector<DetectionFrame>& frames,
                 const Provenance& prov) {
  write_file(path, frames_to_text(frames, prov));
}

std::vector<DetectionFrame> load_frames(const std::filesystem::path& path, Provenance* prov) {
  return frames_from_text(read_file(path), prov);
}

// --- reports -----------------------------------------------------------------

std::string report_to_text(const Json& record) {
  if (!record.is_object() || !record.contains("kind")) {
    throw std::invalid_argument("report record needs a 'kind' field");
  }
  return with_magic(kReportMagic, record.dump(2) + "\n");
}

Json report_from_text(std::string_view text_in) {
  Json body = parse_json_body(strip_magic(text_in, kReportMagic));
  if (!body.is_object() || !body.contains("kind") || !body.at("kind").is_string()) {
    throw ParseError("report record needs a string 'kind' field", 0, "kind");
  }
  return body;
}

void save_report(const std::filesystem::path& path, const Json& record) {
  write_file(path, report_to_text(record));
}

Json load_report(const std::filesystem::path& path) { return report_from_text(read_file(path)); }

}  // namespace rsp
