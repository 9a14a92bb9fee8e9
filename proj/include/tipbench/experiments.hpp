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

// Margin sweeps, cross-validation runs and their table-shaped reports.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tipbench/config.hpp"
#include "tipbench/dataset.hpp"
#include "tipbench/detection.hpp"
#include "tipbench/evaluation.hpp"

namespace tipbench {

struct MarginSweepPlan {
  std::vector<double> margins{50, 100, 150, 200};
  MarginSemantics semantics = MarginSemantics::Side;
  EvalConfig eval;

  void validate() const;
};

struct SweepRow {
  double margin = 0.0;
  EvalResult result;
};

/// Evaluates the `role` frames of `split` once per margin, each against the
/// detections keyed by that margin only. Rows follow the plan's order.
std::vector<SweepRow> run_margin_sweep(
    const Dataset& dataset, const SplitPlan& split, Role role,
    const std::map<double, DetectionMap>& detections_per_margin,
    const MarginSweepPlan& plan, unsigned threads = 1);

/// Mean and sample SD of one metric over the folds where it is defined.
struct MetricAggregate {
  std::optional<double> mean;
  std::optional<double> sd;  // absent with fewer than two defined values
  std::vector<std::size_t> excluded_folds;

  std::string format() const;  // "0.767 ± 0.033"
};

struct CVReport {
  std::vector<Metrics> folds;
  MetricAggregate recall;
  MetricAggregate precision;
  MetricAggregate f1;
  MetricAggregate mean_distance;
};

/// Requires at least two folds.
CVReport aggregate_cv(std::span<const Metrics> per_fold);

struct FoldSizes {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;
};

struct CVRun {
  std::vector<SplitPlan> folds;
  std::vector<FoldSizes> sizes;  // frame counts per fold
  std::vector<EvalResult> results;
  CVReport report;
};

/// Builds the k rotating folds and scores fold i's test frames against
/// *per_fold[i]. `per_fold` must hold k non-null entries (they may alias).
CVRun run_cross_validation(const Dataset& dataset, std::size_t k,
                           std::span<const DetectionMap* const> per_fold,
                           const EvalConfig& eval, unsigned threads = 1);

/// Annotation rows followed by a '#'-prefixed CoordStats summary block; the
/// whole file re-imports as an annotation CSV.
std::string export_scatter(const Dataset& dataset);

/// Resolved experiment configuration shared by `sweep` and `cv-run`.
struct ExperimentConfig {
  std::string name = "experiment";
  std::filesystem::path annotations;
  FrameSize frame;
  MarginSweepPlan sweep;
  std::map<double, std::filesystem::path> margin_detections;
  std::optional<std::filesystem::path> split_path;
  Role role = Role::Test;
  std::uint64_t seed = 0;
  std::size_t k = 9;
  std::optional<std::filesystem::path> cv_detections;
  std::map<std::size_t, std::filesystem::path> fold_detections;
  std::filesystem::path output_dir = ".";
  unsigned threads = 1;

  /// Every resolved value as key=value pairs (defaults filled in).
  KeyValueConfig resolved() const;
  std::string hash() const;
};

ExperimentConfig experiment_from_config(const KeyValueConfig& cfg);

/// File name -> content. Names embed the experiment name and seed.
using ReportFiles = std::map<std::string, std::string>;

nlohmann::json report_metadata(const ExperimentConfig& cfg);

ReportFiles render_sweep_report(const ExperimentConfig& cfg,
                                std::span<const SweepRow> rows);

ReportFiles render_cv_report(const ExperimentConfig& cfg, const CVRun& run);

/// Loads inputs, runs the sweep or CV described by `cfg` and renders its
/// report. Missing files raise IoError.
ReportFiles run_sweep_experiment(const ExperimentConfig& cfg);
ReportFiles run_cv_experiment(const ExperimentConfig& cfg);

/// Input files the experiment reads (annotations, detections, split).
std::vector<std::filesystem::path> experiment_inputs(const ExperimentConfig& cfg,
                                                     bool cv);

/// Writes each file atomically into `dir` (created if missing); returns the
/// written paths.
std::vector<std::filesystem::path> write_report(
    const std::filesystem::path& dir, const ReportFiles& files);

}  // namespace tipbench
