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
#include "tipbench/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "tipbench/errors.hpp"
#include "tipbench/io.hpp"

namespace tipbench {

std::string to_string(DistancePopulation p) {
  return p == DistancePopulation::Detected ? "detected" : "tp";
}

DistancePopulation parse_distance_population(const std::string& text) {
  if (text == "detected" || text == "all") return DistancePopulation::Detected;
  if (text == "tp") return DistancePopulation::TruePositives;
  throw ValidationError("unknown distance population '" + text +
                        "' (expected detected or tp)");
}

void EvalConfig::validate() const {
  if (!(fixed_width > 0) || !(fixed_height > 0))
    throw ValidationError("fixed box dimensions must be positive");
  if (!(iou_threshold > 0 && iou_threshold < 1))
    throw ValidationError("IoU threshold must lie in (0,1)");
  if (!(selection.confidence_floor >= 0 && selection.confidence_floor <= 1))
    throw ValidationError("confidence floor must lie in [0,1]");
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::TP: return "TP";
    case Outcome::FP: return "FP";
    case Outcome::FN: return "FN";
  }
  return "?";
}

FrameOutcome classify_frame(const FrameKey& key, const Point2d& gt_tip,
                            const std::optional<Detection>& selected,
                            const EvalConfig& cfg) {
  FrameOutcome out{key, Outcome::FN, std::nullopt, std::nullopt};
  if (!selected) return out;
  const Point2d predicted = midpoint(selected->box);
  const double overlap =
      iou(fixed_box(gt_tip, cfg.fixed_width, cfg.fixed_height),
          fixed_box(predicted, cfg.fixed_width, cfg.fixed_height));
  out.outcome = overlap > cfg.iou_threshold ? Outcome::TP : Outcome::FP;
  out.iou = overlap;
  out.distance = (predicted - gt_tip).norm();
  return out;
}

Tally tally_outcomes(std::span<const FrameOutcome> outcomes) {
  Tally t;
  for (const auto& o : outcomes) {
    switch (o.outcome) {
      case Outcome::TP: ++t.tp; break;
      case Outcome::FP: ++t.fp; break;
      case Outcome::FN: ++t.fn; break;
    }
  }
  return t;
}

Metrics metrics_from_tally(const Tally& t) {
  Metrics m;
  m.tally = t;
  const auto ratio = [](std::size_t num,
                        std::size_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  m.recall = ratio(t.tp, t.tp + t.fn);
  m.precision = ratio(t.tp, t.tp + t.fp);
  if (m.recall && m.precision) {
    const double sum = *m.precision + *m.recall;
    m.f1 = sum > 0 ? 2.0 * *m.precision * *m.recall / sum : 0.0;
  }
  return m;
}

Metrics compute_metrics(std::span<const FrameOutcome> outcomes,
                        DistancePopulation population) {
  if (outcomes.empty())
    throw ValidationError("cannot compute metrics over zero frames");
  Metrics m = metrics_from_tally(tally_outcomes(outcomes));
  std::vector<double> dists;
  for (const auto& o : outcomes) {
    if (!o.distance) continue;
    if (population == DistancePopulation::TruePositives &&
        o.outcome != Outcome::TP)
      continue;
    dists.push_back(*o.distance);
  }
  m.distance_count = dists.size();
  if (!dists.empty()) {
    double sum = 0.0;
    for (double d : dists) sum += d;
    const double mean = sum / static_cast<double>(dists.size());
    m.mean_distance = mean;
    if (dists.size() > 1) {
      double ss = 0.0;
      for (double d : dists) ss += (d - mean) * (d - mean);
      m.distance_sd = std::sqrt(ss / static_cast<double>(dists.size() - 1));
    } else {
      m.distance_sd = 0.0;
    }
  }
  return m;
}

EvalResult evaluate_run(const Dataset& dataset,
                        std::span<const std::size_t> frame_indices,
                        const DetectionMap& detections, const EvalConfig& cfg,
                        unsigned threads) {
  cfg.validate();
  const auto& rows = dataset.annotations();
  for (std::size_t idx : frame_indices)
    if (idx >= rows.size())
      throw ValidationError("frame index " + std::to_string(idx) +
                            " outside the dataset");

  EvalResult result;
  result.outcomes.resize(frame_indices.size());
  const auto classify_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& a = rows[frame_indices[i]];
      const auto key = a.key();
      std::optional<Detection> selected;
      if (const auto it = detections.find(key); it != detections.end())
        selected = select_top(it->second.detections, cfg.selection);
      result.outcomes[i] = classify_frame(key, a.tip, selected, cfg);
    }
  };

  const std::size_t n = frame_indices.size();
  const std::size_t workers =
      std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    classify_range(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t b = std::min(n, w * chunk);
      const std::size_t e = std::min(n, b + chunk);
      if (b < e) pool.emplace_back(classify_range, b, e);
    }
  }

  for (const auto& [key, frame] : detections)
    if (!dataset.contains(key))
      result.warnings.push_back("detections for " + to_string(key) +
                                " have no matching annotation");

  if (!result.outcomes.empty())
    result.metrics = compute_metrics(result.outcomes, cfg.distance_population);
  return result;
}

std::pair<int, int> derive_fixed_box(std::span<const Box2d> boxes) {
  if (boxes.empty())
    throw ValidationError("cannot derive a fixed box from zero boxes");
  double w = 0.0, h = 0.0;
  for (const auto& b : boxes) {
    if (!b.valid()) throw ValidationError("degenerate box in input");
    w += b.width();
    h += b.height();
  }
  const double n = static_cast<double>(boxes.size());
  return {static_cast<int>(std::lround(w / n)),
          static_cast<int>(std::lround(h / n))};
}

std::string outcomes_csv(std::span<const FrameOutcome> outcomes) {
  std::string out = "video_id,frame_index,outcome,distance\n";
  for (const auto& o : outcomes) {
    out += o.key.video_id + "," + std::to_string(o.key.frame_index) + "," +
           to_string(o.outcome) + ",";
    if (o.distance) out += format_number(*o.distance);
    out += '\n';
  }
  return out;
}

namespace {

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json metrics_json(const Metrics& m) {
  return {
      {"tp", m.tally.tp},
      {"fp", m.tally.fp},
      {"fn", m.tally.fn},
      {"frames", m.tally.total()},
      {"recall", optional_json(m.recall)},
      {"precision", optional_json(m.precision)},
      {"f1", optional_json(m.f1)},
      {"mean_distance", optional_json(m.mean_distance)},
      {"distance_sd", optional_json(m.distance_sd)},
      {"distance_count", m.distance_count},
      {"presentation",
       {{"recall", format3(m.recall)},
        {"precision", format3(m.precision)},
        {"f1", format3(m.f1)},
        {"mean_distance", format_fixed(m.mean_distance, 2)},
        {"distance_sd", format_fixed(m.distance_sd, 2)}}},
  };
}

std::string metrics_line(const Metrics& m) {
  return "recall " + format3(m.recall) + " precision " +
         format3(m.precision) + " f1 " + format3(m.f1);
}

}  // namespace tipbench
