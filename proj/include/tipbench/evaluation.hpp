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

// Fixed-box IoU scoring of selected detections: per-frame TP/FP/FN
// classification, recall/precision/F1 and midpoint distance statistics.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tipbench/dataset.hpp"
#include "tipbench/detection.hpp"

namespace tipbench {

/// Which frames contribute to the distance statistics.
enum class DistancePopulation { Detected, TruePositives };

std::string to_string(DistancePopulation p);
DistancePopulation parse_distance_population(const std::string& text);

struct EvalConfig {
  double fixed_width = 192.0;
  double fixed_height = 194.0;
  double iou_threshold = 0.5;  // strict: IoU must exceed it
  SelectionConfig selection;
  DistancePopulation distance_population = DistancePopulation::Detected;

  void validate() const;
};

enum class Outcome { TP, FP, FN };

std::string to_string(Outcome o);

struct FrameOutcome {
  FrameKey key;
  Outcome outcome = Outcome::FN;
  std::optional<double> distance;  // absent iff FN
  std::optional<double> iou;       // absent iff FN
};

struct Tally {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + fn; }

  friend bool operator==(const Tally&, const Tally&) = default;
};

/// Undefined ratios (zero denominators) are absent, never 0 or NaN.
struct Metrics {
  Tally tally;
  std::optional<double> recall;
  std::optional<double> precision;
  std::optional<double> f1;
  std::optional<double> mean_distance;
  std::optional<double> distance_sd;
  std::size_t distance_count = 0;
};

FrameOutcome classify_frame(const FrameKey& key, const Point2d& gt_tip,
                            const std::optional<Detection>& selected,
                            const EvalConfig& cfg = {});

Tally tally_outcomes(std::span<const FrameOutcome> outcomes);

/// Ratio part of the metrics from counts alone.
Metrics metrics_from_tally(const Tally& t);

/// Requires at least one outcome. Distance statistics are accumulated in
/// input order.
Metrics compute_metrics(
    std::span<const FrameOutcome> outcomes,
    DistancePopulation population = DistancePopulation::Detected);

struct EvalResult {
  Metrics metrics;
  std::vector<FrameOutcome> outcomes;  // dataset order
  std::vector<std::string> warnings;
};

/// Scores the frames at `frame_indices` (indices into `dataset`). Frames
/// without an entry in `detections` are FN. Detection entries for keys not in
/// the dataset produce warnings. Output is independent of `threads`.
EvalResult evaluate_run(const Dataset& dataset,
                        std::span<const std::size_t> frame_indices,
                        const DetectionMap& detections,
                        const EvalConfig& cfg = {}, unsigned threads = 1);

/// Mean width and height of the boxes, each rounded to the nearest pixel.
std::pair<int, int> derive_fixed_box(std::span<const Box2d> boxes);

/// `video_id,frame_index,outcome,distance` with an empty distance for FN.
std::string outcomes_csv(std::span<const FrameOutcome> outcomes);

/// Raw values plus 3-decimal presentation strings.
nlohmann::json metrics_json(const Metrics& m);

/// "recall 1.000 precision 0.733 f1 0.846" (n/a for absent values).
std::string metrics_line(const Metrics& m);

}  // namespace tipbench
