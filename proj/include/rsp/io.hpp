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

#ifndef RSP_IO_HPP_
#define RSP_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsp/detection.hpp"
#include "rsp/scene.hpp"
#include "rsp/visibility.hpp"

namespace rsp {

using Json = nlohmann::json;

// Every file starts with "<magic> <version>" on its own line.
inline constexpr std::string_view kSceneMagic = "RSP-SCENE";
inline constexpr std::string_view kMatrixMagic = "RSP-MATRIX";
inline constexpr std::string_view kFramesMagic = "RSP-FRAMES";
inline constexpr std::string_view kReportMagic = "RSP-REPORT";
inline constexpr int kFormatVersion = 1;

std::string sha256_hex(std::string_view bytes);

// Which run wrote a file. Written into every output; empty fields are omitted.
struct Provenance {
  std::string run;
  std::string manifest;
};

// --- scene -----------------------------------------------------------------

Json scene_to_json(const Scene& scene);  // without content_hash
Scene scene_from_json(const Json& body);  // strict; throws ParseError
std::string scene_hash(const Scene& scene);

std::string scene_to_text(const Scene& scene);
// Verifies magic, version and (when present) the content hash.
Scene scene_from_text(std::string_view text);
void save_scene(const std::filesystem::path& path, const Scene& scene);
Scene load_scene(const std::filesystem::path& path);

// --- visibility matrix -------------------------------------------------------

// Entries are written with 9 significant digits; matrices produced by
// build_visibility are already on that grid and round-trip bit-exactly.
std::string matrix_to_text(const VisibilityMatrix& m, const Provenance& prov = {});
VisibilityMatrix matrix_from_text(std::string_view text, Provenance* prov = nullptr);
void save_matrix(const std::filesystem::path& path, const VisibilityMatrix& m,
                 const Provenance& prov = {});
VisibilityMatrix load_matrix(const std::filesystem::path& path, Provenance* prov = nullptr);

// --- detection frames --------------------------------------------------------

Json box_to_json(const DetectionBox& box);
DetectionBox box_from_json(const Json& j);

// Frames are written sorted by frame id, boxes in canonical order.
std::string frames_to_text(std::vector<DetectionFrame> frames, const Provenance& prov = {});
std::vector<DetectionFrame> frames_from_text(std::string_view text, Provenance* prov = nullptr);
void save_frames(const std::filesystem::path& path, const std::vector<DetectionFrame>& frames,
                 const Provenance& prov = {});
std::vector<DetectionFrame> load_frames(const std::filesystem::path& path,
                                        Provenance* prov = nullptr);

// --- report records ----------------------------------------------------------

// A report record is any JSON object with a "kind" field.
std::string report_to_text(const Json& record);
Json report_from_text(std::string_view text);
void save_report(const std::filesystem::path& path, const Json& record);
Json load_report(const std::filesystem::path& path);

// Whole-file helpers. Both throw IoError when the file cannot be read or written.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace rsp

#endif  // RSP_IO_HPP_
