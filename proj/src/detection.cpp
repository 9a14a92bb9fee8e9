/* Copyright 2026 The Tipbench Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "tipbench/detection.hpp"

#include "json.hpp"
#include "tipbench/errors.hpp"
#include "tipbench/io.hpp"

namespace tipbench {

namespace {

[[noreturn]] void line_error(std::size_t line, const std::string& what) {
  throw ValidationError("detections line " + std::to_string(line) + ": " +
                        what);
}

double number_field(const nlohmann::json& obj, const char* name,
                    std::size_t line) {
  const auto it = obj.find(name);
  if (it == obj.end() || !it->is_number())
    line_error(line, std::string("missing or non-numeric '") + name + "'");
  const double v = it->get<double>();
  if (!std::isfinite(v)) line_error(line, std::string(name) + " not finite");
  return v;
}

}  // namespace

DetectionMap parse_detections(std::string_view text) {
  DetectionMap out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;

    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      line_error(line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) line_error(line_no, "expected a JSON object");

    FrameDetections frame;
    const auto vid = j.find("video_id");
    if (vid == j.end() || !vid->is_string() ||
        vid->get<std::string>().empty())
      line_error(line_no, "missing or empty 'video_id'");
    frame.key.video_id = vid->get<std::string>();
    const auto idx = j.find("frame_index");
    if (idx == j.end() || !idx->is_number_integer() ||
        idx->get<std::int64_t>() < 0)
      line_error(line_no, "'frame_index' must be a non-negative integer");
    frame.key.frame_index = idx->get<std::int64_t>();

    const auto dets = j.find("detections");
    if (dets == j.end() || !dets->is_array())
      line_error(line_no, "missing 'detections' array");
    for (const auto& d : *dets) {
      if (!d.is_object()) line_error(line_no, "detection is not an object");
      Detection det;
      det.box = {number_field(d, "x1", line_no), number_field(d, "y1", line_no),
                 number_field(d, "x2", line_no),
                 number_field(d, "y2", line_no)};
      det.confidence = number_field(d, "confidence", line_no);
      if (det.confidence < 0.0 || det.confidence > 1.0)
        line_error(line_no, "confidence " + format_number(det.confidence) +
                                " outside [0,1]");
      if (!det.box.valid())
        line_error(line_no, "degenerate box (requires x1<x2 and y1<y2)");
      frame.detections.push_back(det);
    }
    const FrameKey key = frame.key;
    if (!out.emplace(key, std::move(frame)).second)
      line_error(line_no, "duplicate frame " + to_string(key));
  }
  return out;
}

DetectionMap load_detections(const std::filesystem::path& path) {
  return parse_detections(read_file(path));
}

std::string detections_line(const FrameDetections& frame) {
  // Hand-built so numbers use the shortest round-trip form.
  std::string s = "{\"video_id\":";
  s += nlohmann::json(frame.key.video_id).dump();
  s += ",\"frame_index\":" + std::to_string(frame.key.frame_index);
  s += ",\"detections\":[";
  bool first = true;
  for (const auto& d : frame.detections) {
    if (!first) s += ',';
    first = false;
    s += "{\"x1\":" + format_number(d.box.x1) +
         ",\"y1\":" + format_number(d.box.y1) +
         ",\"x2\":" + format_number(d.box.x2) +
         ",\"y2\":" + format_number(d.box.y2) +
         ",\"confidence\":" + format_number(d.confidence) + "}";
  }
  s += "]}";
  return s;
}

std::string serialize_detections(const DetectionMap& detections) {
  std::string out;
  for (const auto& [key, frame] : detections) {
    out += detections_line(frame);
    out += '\n';
  }
  return out;
}

std::optional<Detection> select_top(std::span<const Detection> detections,
                                    const SelectionConfig& cfg) {
  const Detection* best = nullptr;
  for (const auto& d : detections)
    if (best == nullptr || d.confidence > best->confidence) best = &d;
  if (best == nullptr || best->confidence < cfg.confidence_floor)
    return std::nullopt;
  return *best;
}

}  // namespace tipbench
