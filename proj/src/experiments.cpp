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
#include "tipbench/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tipbench/errors.hpp"
#include "tipbench/io.hpp"
#include "tipbench/version.hpp"

namespace tipbench {

void MarginSweepPlan::validate() const {
  if (margins.empty()) throw ValidationError("margin sweep has no margins");
  for (std::size_t i = 0; i < margins.size(); ++i) {
    if (!(margins[i] > 0)) throw ValidationError("margins must be positive");
    if (i > 0 && !(margins[i] > margins[i - 1]))
      throw ValidationError("margins must be strictly increasing");
  }
  eval.validate();
}

std::vector<SweepRow> run_margin_sweep(
    const Dataset& dataset, const SplitPlan& split, Role role,
    const std::map<double, DetectionMap>& detections_per_margin,
    const MarginSweepPlan& plan, unsigned threads) {
  plan.validate();
  validate_split(split, dataset);
  for (double m : plan.margins)
    if (!detections_per_margin.count(m))
      throw ValidationError("no detections supplied for margin " +
                            format_number(m));
  const auto frames = frames_in(dataset, split, role);
  std::vector<SweepRow> rows;
  rows.reserve(plan.margins.size());
  for (double m : plan.margins)
    rows.push_back({m, evaluate_run(dataset, frames,
                                    detections_per_margin.at(m), plan.eval,
                                    threads)});
  return rows;
}

std::string MetricAggregate::format() const {
  return format3(mean) + " ± " + format3(sd);
}

namespace {

MetricAggregate aggregate(std::span<const Metrics> folds,
                          std::optional<double> Metrics::*field) {
  MetricAggregate agg;
  std::vector<double> values;
  for (std::size_t i = 0; i < folds.size(); ++i) {
    if (const auto& v = folds[i].*field)
      values.push_back(*v);
    else
      agg.excluded_folds.push_back(i);
  }
  if (values.empty()) return agg;
  // Shifted by the first value so identical inputs give an exact zero SD.
  const double pivot = values.front();
  double sum = 0.0;
  for (double v : values) sum += v - pivot;
  const double shift = sum / static_cast<double>(values.size());
  agg.mean = pivot + shift;
  if (values.size() >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - pivot - shift) * (v - pivot - shift);
    agg.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return agg;
}

}  // namespace

CVReport aggregate_cv(std::span<const Metrics> per_fold) {
  if (per_fold.size() < 2)
    throw ValidationError("cross-validation aggregation needs at least 2 folds");
  CVReport r;
  r.folds.assign(per_fold.begin(), per_fold.end());
  r.recall = aggregate(per_fold, &Metrics::recall);
  r.precision = aggregate(per_fold, &Metrics::precision);
  r.f1 = aggregate(per_fold, &Metrics::f1);
  r.mean_distance = aggregate(per_fold, &Metrics::mean_distance);
  return r;
}

CVRun run_cross_validation(const Dataset& dataset, std::size_t k,
                           std::span<const DetectionMap* const> per_fold,
                           const EvalConfig& eval, unsigned threads) {
  CVRun run;
  run.folds = cv_folds(dataset, k);
  if (per_fold.size() != k)
    throw ValidationError("expected detections for " + std::to_string(k) +
                          " folds, got " + std::to_string(per_fold.size()));
  std::vector<Metrics> metrics;
  for (std::size_t i = 0; i < k; ++i) {
    if (per_fold[i] == nullptr)
      throw ValidationError("no detections for fold " + std::to_string(i));
    const auto frames = frames_in(dataset, run.folds[i], Role::Test);
    run.sizes.push_back({frames_in(dataset, run.folds[i], Role::Train).size(),
                         frames_in(dataset, run.folds[i], Role::Val).size(),
                         frames.size()});
    run.results.push_back(
        evaluate_run(dataset, frames, *per_fold[i], eval, threads));
    metrics.push_back(run.results.back().metrics);
  }
  run.report = aggregate_cv(metrics);
  return run;
}

std::string export_scatter(const Dataset& dataset) {
  const CoordStats s = dataset_stats(dataset);
  std::string out = serialize_annotations(dataset);
  out += "# summary\n# axis,count,mean,median,sd,min,max\n";
  for (const auto& [axis, st] :
       {std::pair{"x", s.x}, std::pair{"y", s.y}}) {
    out += std::string("# ") + axis + "," + std::to_string(s.count) + "," +
           format_number(st.mean) + "," + format_number(st.median) + "," +
           format_number(st.sd) + "," + format_number(st.min) + "," +
           format_number(st.max) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Experiment configuration

namespace {

const std::set<std::string> kExperimentKeys = {
    "name",       "annotations", "image_width", "image_height",
    "margins",    "semantics",   "split",       "role",
    "seed",       "k",           "detections",  "fixed_width",
    "fixed_height", "iou",       "conf",        "distance_population",
    "output_dir", "threads"};

std::string join_margins(const std::vector<double>& margins) {
  std::string out;
  for (std::size_t i = 0; i < margins.size(); ++i) {
    if (i) out += ",";
    out += format_number(margins[i]);
  }
  return out;
}

}  // namespace

ExperimentConfig experiment_from_config(const KeyValueConfig& cfg) {
  for (const auto& [k, v] : cfg.values()) {
    if (kExperimentKeys.count(k)) continue;
    if (k.rfind("detections.", 0) == 0) continue;
    throw ValidationError("experiment config: unknown key '" + k + "'");
  }
  ExperimentConfig e;
  e.name = cfg.get_string("name", e.name);
  if (e.name.empty() ||
      e.name.find_first_of("/\\ ") != std::string::npos)
    throw ValidationError("experiment name must be non-empty without spaces or slashes");
  e.annotations = cfg.get_string("annotations");
  e.frame.width = static_cast<int>(cfg.get_int("image_width", 640));
  e.frame.height = static_cast<int>(cfg.get_int("image_height", 480));
  if (cfg.has("margins")) e.sweep.margins = cfg.get_doubles("margins");
  e.sweep.semantics = parse_margin_semantics(cfg.get_string("semantics", "side"));
  e.sweep.eval.fixed_width = cfg.get_double("fixed_width", 192.0);
  e.sweep.eval.fixed_height = cfg.get_double("fixed_height", 194.0);
  e.sweep.eval.iou_threshold = cfg.get_double("iou", 0.5);
  e.sweep.eval.selection.confidence_floor = cfg.get_double("conf", 0.1);
  e.sweep.eval.distance_population =
      parse_distance_population(cfg.get_string("distance_population", "detected"));
  if (cfg.has("split")) e.split_path = cfg.get_string("split");
  e.role = parse_role(cfg.get_string("role", "test"));
  e.seed = cfg.get_u64("seed", 0);
  const auto k = cfg.get_int("k", 9);
  if (k < 3) throw ValidationError("experiment config: k must be >= 3");
  e.k = static_cast<std::size_t>(k);
  if (cfg.has("detections")) e.cv_detections = cfg.get_string("detections");
  for (const auto& [suffix, path] : cfg.with_prefix("detections.")) {
    if (suffix.rfind("fold.", 0) == 0) {
      const auto idx = parse_int(suffix.substr(5));
      if (!idx || *idx < 0)
        throw ValidationError("experiment config: bad fold key 'detections." +
                              suffix + "'");
      e.fold_detections[static_cast<std::size_t>(*idx)] = path;
      continue;
    }
    const auto m = parse_double(suffix);
    if (!m)
      throw ValidationError("experiment config: bad margin key 'detections." +
                            suffix + "'");
    e.margin_detections[*m] = path;
  }
  e.output_dir = cfg.get_string("output_dir", ".");
  const auto threads = cfg.get_int("threads", 1);
  if (threads < 1) throw ValidationError("experiment config: threads must be >= 1");
  e.threads = static_cast<unsigned>(threads);
  e.sweep.validate();
  return e;
}

KeyValueConfig ExperimentConfig::resolved() const {
  KeyValueConfig c;
  c.set("name", name);
  c.set("annotations", annotations.string());
  c.set("image_width", std::to_string(frame.width));
  c.set("image_height", std::to_string(frame.height));
  c.set("margins", join_margins(sweep.margins));
  c.set("semantics", to_string(sweep.semantics));
  c.set("fixed_width", format_number(sweep.eval.fixed_width));
  c.set("fixed_height", format_number(sweep.eval.fixed_height));
  c.set("iou", format_number(sweep.eval.iou_threshold));
  c.set("conf", format_number(sweep.eval.selection.confidence_floor));
  c.set("distance_population", to_string(sweep.eval.distance_population));
  if (split_path) c.set("split", split_path->string());
  c.set("role", to_string(role));
  c.set("seed", std::to_string(seed));
  c.set("k", std::to_string(k));
  if (cv_detections) c.set("detections", cv_detections->string());
  for (const auto& [m, p] : margin_detections)
    c.set("detections." + format_number(m), p.string());
  for (const auto& [i, p] : fold_detections)
    c.set("detections.fold." + std::to_string(i), p.string());
  c.set("output_dir", output_dir.string());
  c.set("threads", std::to_string(threads));
  return c;
}

std::string ExperimentConfig::hash() const {
  // Thread count and output location do not affect results.
  KeyValueConfig c = resolved();
  std::string canon;
  for (const auto& [k, v] : c.values())
    if (k != "threads" && k != "output_dir") canon += k + "=" + v + "\n";
  return sha256_hex(canon);
}

nlohmann::json report_metadata(const ExperimentConfig& cfg) {
  return {{"experiment", cfg.name},
          {"toolkit_version", std::string(kToolkitVersion)},
          {"config_hash", cfg.hash()},
          {"seed", cfg.seed}};
}

namespace {

std::string stem(const ExperimentConfig& cfg) {
  return cfg.name + "-seed" + std::to_string(cfg.seed);
}

std::string raw(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

std::string metadata_markdown(const ExperimentConfig& cfg) {
  return "- toolkit version: " + std::string(kToolkitVersion) +
         "\n- config hash: " + cfg.hash() +
         "\n- seed: " + std::to_string(cfg.seed) + "\n";
}

nlohmann::json aggregate_json(const MetricAggregate& a) {
  return {{"mean", a.mean ? nlohmann::json(*a.mean) : nlohmann::json(nullptr)},
          {"sd", a.sd ? nlohmann::json(*a.sd) : nlohmann::json(nullptr)},
          {"excluded_folds", a.excluded_folds},
          {"presentation", a.format()}};
}

std::string join_videos(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + v[i];
  return out;
}

}  // namespace

ReportFiles render_sweep_report(const ExperimentConfig& cfg,
                                std::span<const SweepRow> rows) {
  const std::string base = stem(cfg);
  std::string md = "# " + cfg.name + ": margin sweep\n\n" +
                   metadata_markdown(cfg) +
                   "- margin semantics: " + to_string(cfg.sweep.semantics) +
                   "\n- evaluated role: " + to_string(cfg.role) + "\n\n";
  md += "| Margin size (pixel) | Recall | Precision | F1-score | TP | FP | FN | Mean distance (px) |\n";
  md += "|---|---|---|---|---|---|---|---|\n";
  std::string csv =
      "margin,frames,tp,fp,fn,recall,precision,f1,mean_distance,distance_sd\n";
  std::string outcomes = "margin,video_id,frame_index,outcome,distance\n";
  nlohmann::json jrows = nlohmann::json::array();
  for (const auto& row : rows) {
    const Metrics& m = row.result.metrics;
    const std::string margin = format_number(row.margin);
    md += "| " + margin + " | " + format3(m.recall) + " | " +
          format3(m.precision) + " | " + format3(m.f1) + " | " +
          std::to_string(m.tally.tp) + " | " + std::to_string(m.tally.fp) +
          " | " + std::to_string(m.tally.fn) + " | " +
          format_fixed(m.mean_distance, 2) + " ± " +
          format_fixed(m.distance_sd, 2) + " |\n";
    csv += margin + "," + std::to_string(m.tally.total()) + "," +
           std::to_string(m.tally.tp) + "," + std::to_string(m.tally.fp) +
           "," + std::to_string(m.tally.fn) + "," + raw(m.recall) + "," +
           raw(m.precision) + "," + raw(m.f1) + "," + raw(m.mean_distance) +
           "," + raw(m.distance_sd) + "\n";
    for (const auto& o : row.result.outcomes)
      outcomes += margin + "," + o.key.video_id + "," +
                  std::to_string(o.key.frame_index) + "," +
                  to_string(o.outcome) + "," + raw(o.distance) + "\n";
    jrows.push_back({{"margin", row.margin},
                     {"metrics", metrics_json(m)},
                     {"warnings", row.result.warnings}});
  }
  nlohmann::json j = {{"metadata", report_metadata(cfg)},
                      {"kind", "margin_sweep"},
                      {"semantics", to_string(cfg.sweep.semantics)},
                      {"role", to_string(cfg.role)},
                      {"rows", jrows}};
  return {{base + ".md", md},
          {base + ".json", j.dump(2) + "\n"},
          {base + ".csv", csv},
          {base + "-outcomes.csv", outcomes}};
}

ReportFiles render_cv_report(const ExperimentConfig& cfg, const CVRun& run) {
  const std::string base = stem(cfg) + "-cv";
  const CVReport& r = run.report;
  std::string md = "# " + cfg.name + ": " + std::to_string(run.folds.size()) +
                   "-fold cross-validation\n\n" + metadata_markdown(cfg) +
                   "\n| Fold | Test video | Val video | Test frames | Recall | Precision | F1-score |\n"
                   "|---|---|---|---|---|---|---|\n";
  std::string csv =
      "fold,test_video,val_video,train_frames,val_frames,test_frames,tp,fp,fn,"
      "recall,precision,f1,mean_distance,distance_sd\n";
  std::string outcomes = "fold,video_id,frame_index,outcome,distance\n";
  nlohmann::json jfolds = nlohmann::json::array();
  for (std::size_t i = 0; i < run.folds.size(); ++i) {
    const auto& plan = run.folds[i];
    const auto& res = run.results[i];
    const Metrics& m = res.metrics;
    md += "| " + std::to_string(i) + " | " + join_videos(plan.test) + " | " +
          join_videos(plan.val) + " | " + std::to_string(m.tally.total()) +
          " | " + format3(m.recall) + " | " + format3(m.precision) + " | " +
          format3(m.f1) + " |\n";
    csv += std::to_string(i) + "," + join_videos(plan.test) + "," +
           join_videos(plan.val) + "," +
           std::to_string(run.sizes[i].train) + "," +
           std::to_string(run.sizes[i].val) + "," +
           std::to_string(m.tally.total()) + "," + std::to_string(m.tally.tp) +
           "," + std::to_string(m.tally.fp) + "," +
           std::to_string(m.tally.fn) + "," + raw(m.recall) + "," +
           raw(m.precision) + "," + raw(m.f1) + "," + raw(m.mean_distance) +
           "," + raw(m.distance_sd) + "\n";
    jfolds.push_back({{"fold", i},
                      {"split", to_json(plan)},
                      {"metrics", metrics_json(m)},
                      {"warnings", res.warnings}});
    for (const auto& o : res.outcomes)
      outcomes += std::to_string(i) + "," + o.key.video_id + "," +
                  std::to_string(o.key.frame_index) + "," +
                  to_string(o.outcome) + "," + raw(o.distance) + "\n";
  }
  md += "| Mean ± SD | | | | " + r.recall.format() + " | " +
        r.precision.format() + " | " + r.f1.format() + " |\n";
  for (const auto& [label, agg] :
       {std::pair{"recall", &r.recall}, std::pair{"precision", &r.precision},
        std::pair{"f1", &r.f1}}) {
    if (agg->excluded_folds.empty()) continue;
    md += "\n" + std::string(label) + " undefined in folds:";
    for (auto f : agg->excluded_folds) md += " " + std::to_string(f);
    md += " (excluded from the aggregate)\n";
  }
  nlohmann::json j = {{"metadata", report_metadata(cfg)},
                      {"kind", "cross_validation"},
                      {"k", run.folds.size()},
                      {"folds", jfolds},
                      {"aggregate",
                       {{"recall", aggregate_json(r.recall)},
                        {"precision", aggregate_json(r.precision)},
                        {"f1", aggregate_json(r.f1)},
                        {"mean_distance", aggregate_json(r.mean_distance)}}}};
  return {{base + ".md", md},
          {base + ".json", j.dump(2) + "\n"},
          {base + ".csv", csv},
          {base + "-outcomes.csv", outcomes}};
}

std::vector<std::filesystem::path> experiment_inputs(const ExperimentConfig& cfg,
                                                     bool cv) {
  std::vector<std::filesystem::path> in{cfg.annotations};
  if (cv) {
    if (cfg.cv_detections) in.push_back(*cfg.cv_detections);
    for (const auto& [i, p] : cfg.fold_detections) in.push_back(p);
  } else {
    if (cfg.split_path) in.push_back(*cfg.split_path);
    for (double m : cfg.sweep.margins)
      if (auto it = cfg.margin_detections.find(m);
          it != cfg.margin_detections.end())
        in.push_back(it->second);
  }
  return in;
}

ReportFiles run_sweep_experiment(const ExperimentConfig& cfg) {
  for (double m : cfg.sweep.margins)
    if (!cfg.margin_detections.count(m))
      throw ValidationError("experiment config: no 'detections." +
                            format_number(m) + "' entry for listed margin " +
                            format_number(m));
  const Dataset dataset = load_annotations(cfg.annotations, cfg.frame);
  SplitPlan split;
  if (cfg.split_path) {
    try {
      split = split_from_json(nlohmann::json::parse(read_file(*cfg.split_path)));
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError("split file '" + cfg.split_path->string() +
                            "': " + e.what());
    }
  } else {
    split = split_random(dataset, cfg.seed);
  }
  std::map<double, DetectionMap> per_margin;
  for (double m : cfg.sweep.margins)
    per_margin[m] = load_detections(cfg.margin_detections.at(m));
  const auto rows = run_margin_sweep(dataset, split, cfg.role, per_margin,
                                     cfg.sweep, cfg.threads);
  return render_sweep_report(cfg, rows);
}

ReportFiles run_cv_experiment(const ExperimentConfig& cfg) {
  const Dataset dataset = load_annotations(cfg.annotations, cfg.frame);
  std::optional<DetectionMap> shared;
  if (cfg.cv_detections) shared = load_detections(*cfg.cv_detections);
  std::map<std::size_t, DetectionMap> own;
  for (const auto& [i, p] : cfg.fold_detections) {
    if (i >= cfg.k)
      throw ValidationError("experiment config: fold " + std::to_string(i) +
                            " outside k=" + std::to_string(cfg.k));
    own[i] = load_detections(p);
  }
  std::vector<const DetectionMap*> per_fold(cfg.k, nullptr);
  for (std::size_t i = 0; i < cfg.k; ++i) {
    if (auto it = own.find(i); it != own.end())
      per_fold[i] = &it->second;
    else if (shared)
      per_fold[i] = &*shared;
    else
      throw ValidationError("experiment config: no detections for fold " +
                            std::to_string(i) +
                            " (set 'detections' or 'detections.fold." +
                            std::to_string(i) + "')");
  }
  const CVRun run = run_cross_validation(dataset, cfg.k, per_fold,
                                         cfg.sweep.eval, cfg.threads);
  return render_cv_report(cfg, run);
}

std::vector<std::filesystem::path> write_report(
    const std::filesystem::path& dir, const ReportFiles& files) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw IoError("cannot create output directory '" + dir.string() + "'");
  std::vector<std::filesystem::path> written;
  for (const auto& [name, content] : files) {
    const auto path = dir / name;
    write_file_atomic(path, content);
    written.push_back(path);
  }
  return written;
}

}  // namespace tipbench
