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
#pragma once

// External detector output (JSONL, one frame per line) and the
// single-detection selection rule.

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tipbench/dataset.hpp"
#include "tipbench/geometry.hpp"

namespace tipbench {

struct Detection {
  Box2d box;
  double confidence = 0.0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct FrameDetections {
  FrameKey key;
  std::vector<Detection> detections;  // input order
};

using DetectionMap = std::map<FrameKey, FrameDetections>;

struct SelectionConfig {
  /// Inclusive: a detection exactly at the floor is kept.
  double confidence_floor = 0.1;
};

/// Parses detection JSONL. Each non-blank line is
/// {"video_id","frame_index","detections":[{"x1","y1","x2","y2","confidence"}]}.
/// Unknown fields are ignored. Errors name the 1-based line number.
DetectionMap parse_detections(std::string_view text);

DetectionMap load_detections(const std::filesystem::path& path);

/// One JSONL line per entry, in map (key) order.
std::string serialize_detections(const DetectionMap& detections);

std::string detections_line(const FrameDetections& frame);

/// Highest-confidence detection if it clears the floor; ties go to the
/// earliest entry. Returns nothing for empty or all-sub-floor lists.
std::optional<Detection> select_top(std::span<const Detection> detections,
                                    const SelectionConfig& cfg = {});

}  // namespace tipbench
