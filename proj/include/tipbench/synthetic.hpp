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

// Synthetic tip datasets and simulated detectors with controllable error
// models, so the scoring pipeline can be exercised without clinical data.
//
// Everything is a pure function of (seed, spec, model). Per-video and
// per-frame generators use seeds derived from the top-level seed, so output
// does not depend on the thread count.

#include <cstdint>
#include <string>
#include <vector>

#include "tipbench/config.hpp"
#include "tipbench/dataset.hpp"
#include "tipbench/detection.hpp"
#include "tipbench/evaluation.hpp"
#include "tipbench/geometry.hpp"

namespace tipbench {

/// Tip placement: per-axis Gaussian truncated to the frame, optionally mixed
/// with a uniform draw from the frame periphery.
struct TipDistribution {
  Point2d mean{316.30, 214.52};
  Point2d sd{88.44, 88.02};
  /// Probability of drawing from the periphery instead of the Gaussian.
  double periphery_fraction = 0.0;
  /// Periphery = points whose normalised elliptical distance from the frame
  /// centre exceeds this (1 touches the frame edges).
  double periphery_inner = 0.6;
};

struct SceneSpec {
  std::size_t n_videos = 9;
  std::size_t frames_per_video = 257;
  std::int64_t frame_stride = 300;
  FrameSize frame;
  TipDistribution tips;
  /// Tips snap to multiples of this (px); 0 keeps them continuous. Dyadic
  /// grids keep margin-box midpoints exact.
  double tip_grid = 1.0 / 16.0;

  void validate() const;
};

/// Normal parameters to sample from so that, after truncation to the frame,
/// tips have the configured mean and SD.
TipDistribution sampling_distribution(const TipDistribution& tips,
                                      const FrameSize& frame);

SceneSpec scene_spec_from_config(const KeyValueConfig& cfg);

Dataset generate_dataset(std::uint64_t seed, const SceneSpec& spec,
                         unsigned threads = 1);

struct ConfidenceModel {
  enum class Kind { Constant, Beta };
  Kind kind = Kind::Constant;
  double value = 1.0;  // Constant
  double alpha = 8.0;  // Beta
  double beta = 2.0;
};

struct DetectorErrorModel {
  Point2d jitter_sd{0.0, 0.0};  // Gaussian midpoint jitter, px
  Point2d offset{0.0, 0.0};     // fixed midpoint offset, px
  /// Probability a frame yields no detection above the floor.
  double dropout = 0.0;
  /// Confidence of the single stray detection emitted on dropout frames;
  /// 0 emits an empty list instead.
  double dropout_confidence = 0.05;
  ConfidenceModel confidence;
  std::size_t decoys = 0;
  /// Decoy confidence as a fraction of the primary confidence.
  Range decoy_relative_confidence{0.1, 0.9};
  /// Minimum decoy centre distance from the tip, px.
  double decoy_min_distance = 200.0;
  /// Clip the primary box to the frame. Off by default so the midpoint sits
  /// exactly at tip + offset + jitter.
  bool clip_boxes = false;

  void validate() const;
};

DetectorErrorModel error_model_from_config(const KeyValueConfig& cfg);

/// One detection list per dataset frame; primary box side follows the
/// margin semantics.
DetectionMap simulate_detector(const Dataset& dataset,
                               const DetectorErrorModel& model,
                               std::uint64_t seed, double margin,
                               MarginSemantics semantics,
                               unsigned threads = 1);

/// Per-frame scripted outcomes that reproduce a target tally exactly.
struct Calibration {
  DetectorErrorModel model;       // zero-error base model
  std::vector<Outcome> assignment;  // one per frame, in frame order
  double fp_offset = 70.0;        // px, beyond the 64 px boundary of 192x194
};

Calibration calibrate_to_counts(std::size_t n_frames, const Tally& target,
                                std::uint64_t seed = 0);

/// Emits detections for the frames at `frame_indices` following the
/// calibration script: TP = box centred on the tip, FP = centred
/// fp_offset px away horizontally (toward the frame centre), FN = one
/// sub-floor detection.
DetectionMap simulate_scripted(const Dataset& dataset,
                               std::span<const std::size_t> frame_indices,
                               const Calibration& calibration, double margin,
                               MarginSemantics semantics);

/// Binary PGM (P5) of a frame: dark background, circular endoscope view and
/// a bright instrument segment ending at the tip. Demo output only.
std::string render_pgm(const TipAnnotation& annotation, const FrameSize& frame,
                       std::uint64_t seed);

}  // namespace tipbench
