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
// tipbench command-line interface.
//
// Exit codes: 0 success, 1 validation error, 2 I/O error. Diagnostics go to
// stderr; data goes to files or stdout. Whenever a command writes files it
// also writes a run manifest next to them, which `tipbench replay` can use to
// re-run the command.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tipbench/config.hpp"
#include "tipbench/dataset.hpp"
#include "tipbench/detection.hpp"
#include "tipbench/errors.hpp"
#include "tipbench/evaluation.hpp"
#include "tipbench/experiments.hpp"
#include "tipbench/io.hpp"
#include "tipbench/manifest.hpp"
#include "tipbench/synthetic.hpp"
#include "tipbench/version.hpp"

namespace fs = std::filesystem;
using namespace tipbench;

namespace {

struct FrameOptions {
  int width = 640;
  int height = 480;

  void add(CLI::App* sub) {
    sub->add_option("--width", width, "Frame width in pixels")
        ->capture_default_str();
    sub->add_option("--height", height, "Frame height in pixels")
        ->capture_default_str();
  }
  FrameSize frame() const { return {width, height}; }
};

// Collects what a command read and wrote, then writes the manifest.
class ManifestBuilder {
 public:
  ManifestBuilder(std::string command, const std::vector<std::string>& args,
                  const CLI::App* sub)
      : sub_(sub) {
    m_.command = std::move(command);
    m_.args = args;
    m_.working_directory = fs::current_path().string();
    m_.toolkit_version = std::string(kToolkitVersion);
  }

  void input(const fs::path& p) { m_.inputs.push_back(digest_of(p)); }
  void output(const fs::path& p) { m_.outputs.push_back(digest_of(p)); }
  void seed(const std::string& name, std::uint64_t value) {
    m_.seeds[name] = value;
  }
  void config(const std::string& key, nlohmann::json value) {
    m_.resolved_config[key] = std::move(value);
  }

  void write(const fs::path& path) {
    if (sub_) {
      for (const CLI::Option* opt : sub_->get_options()) {
        if (opt->get_name() == "--help" || opt->get_lnames().empty()) continue;
        const std::string name = opt->get_lnames().front();
        if (opt->count() > 0) {
          m_.resolved_config[name] = opt->as<std::string>();
        } else if (!opt->get_default_str().empty()) {
          m_.resolved_config[name] = opt->get_default_str();
        }
      }
    }
    m_.timestamp = utc_timestamp();
    write_manifest(path, m_);
  }

 private:
  const CLI::App* sub_;
  RunManifest m_;
};

fs::path manifest_path_for(const fs::path& out) {
  fs::path p = out;
  p += ".manifest.json";
  return p;
}

// Writes `content` to `out` (atomically) or stdout when `out` is empty.
// Returns true when a file was written.
bool emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
    std::cout.flush();
    return false;
  }
  write_file_atomic(out, content);
  return true;
}

std::uint64_t parse_seed(const std::string& text) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used);
    if (used == text.size() && !text.empty() && text.front() != '-') return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("seed must be an unsigned 64-bit integer, got '" +
                        text + "'");
}

SplitPlan load_split(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return split_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("split file '" + path.string() + "': " + e.what());
  }
}

Tally parse_tally(const std::string& text) {
  const auto fields = split_fields(text, ',');
  if (fields.size() != 3)
    throw ValidationError("tally must be TP,FP,FN");
  Tally t;
  std::size_t* slots[] = {&t.tp, &t.fp, &t.fn};
  for (int i = 0; i < 3; ++i) {
    const auto v = parse_int(fields[i]);
    if (!v || *v < 0) throw ValidationError("tally counts must be >= 0");
    *slots[i] = static_cast<std::size_t>(*v);
  }
  return t;
}

std::vector<std::size_t> all_frames(const Dataset& d) {
  std::vector<std::size_t> v(d.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  return v;
}

int run_cli(const std::vector<std::string>& args);

int dispatch(CLI::App& app, const std::vector<std::string>& args) {
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolkitVersion));

  // boxes ------------------------------------------------------------------
  auto* boxes = app.add_subcommand("boxes", "Margin boxes around every tip (CSV)");
  std::string b_ann, b_out, b_sem = "side";
  double b_margin = 0.0;
  FrameOptions b_frame;
  boxes->add_option("--annotations", b_ann, "Annotation CSV")->required();
  boxes->add_option("--margin", b_margin,
                    "Margin M in pixels (no default; the sweep exists to pick it)")
      ->required();
  boxes->add_option("--semantics", b_sem, "side: side = M; radius: side = 2M")
      ->check(CLI::IsMember({"side", "radius"}))
      ->capture_default_str();
  boxes->add_option("-o,--out", b_out, "Output CSV (default stdout)");
  b_frame.add(boxes);

  // split ------------------------------------------------------------------
  auto* split = app.add_subcommand("split", "Random video-level train/val/test split (JSON)");
  std::string s_ann, s_out, s_seed = "0";
  std::size_t s_train = 7, s_val = 1, s_test = 1;
  FrameOptions s_frame;
  split->add_option("--annotations", s_ann, "Annotation CSV")->required();
  split->add_option("--seed", s_seed, "Shuffle seed")->capture_default_str();
  split->add_option("--train", s_train, "Training videos")->capture_default_str();
  split->add_option("--val", s_val, "Validation videos")->capture_default_str();
  split->add_option("--test", s_test, "Test videos")->capture_default_str();
  split->add_option("-o,--out", s_out, "Output JSON (default stdout)");
  s_frame.add(split);

  // cv-plan ----------------------------------------------------------------
  auto* cvplan = app.add_subcommand("cv-plan", "Rotating k-fold video plans (JSON)");
  std::string c_ann, c_out;
  std::size_t c_k = 9;
  FrameOptions c_frame;
  cvplan->add_option("--annotations", c_ann, "Annotation CSV")->required();
  cvplan->add_option("--k", c_k, "Number of folds (= number of videos)")
      ->capture_default_str();
  cvplan->add_option("-o,--out", c_out, "Output JSON (default stdout)");
  c_frame.add(cvplan);

  // eval -------------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "Score detections with the fixed-box IoU rule");
  std::string e_ann, e_det, e_split, e_role = "test", e_outdir,
                                     e_pop = "detected";
  EvalConfig e_cfg;
  unsigned e_threads = 1;
  FrameOptions e_frame;
  eval->add_option("--annotations", e_ann, "Annotation CSV")->required();
  eval->add_option("--detections", e_det, "Detection JSONL")->required();
  eval->add_option("--split", e_split, "Split JSON (default: every frame)");
  eval->add_option("--role", e_role, "Split role to evaluate")
      ->check(CLI::IsMember({"train", "val", "test"}))
      ->capture_default_str();
  eval->add_option("--fixed-w", e_cfg.fixed_width, "Fixed box width (px)")
      ->capture_default_str();
  eval->add_option("--fixed-h", e_cfg.fixed_height, "Fixed box height (px)")
      ->capture_default_str();
  eval->add_option("--iou", e_cfg.iou_threshold, "IoU must exceed this")
      ->capture_default_str();
  eval->add_option("--conf", e_cfg.selection.confidence_floor,
                   "Confidence floor (inclusive)")
      ->capture_default_str();
  eval->add_option("--distance-population", e_pop,
                   "Frames in distance stats: detected (TP+FP) or tp")
      ->check(CLI::IsMember({"detected", "tp"}))
      ->capture_default_str();
  eval->add_option("--threads", e_threads, "Worker threads")->capture_default_str();
  eval->add_option("--out-dir", e_outdir,
                   "Write eval_outcomes.csv, eval_metrics.json and a manifest here");
  e_frame.add(eval);

  // sweep / cv-run ---------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "Margin sweep report, one row per margin");
  std::string w_cfg, w_outdir;
  sweep->add_option("--config", w_cfg, "Experiment config file")->required();
  sweep->add_option("--out-dir", w_outdir, "Override output_dir from the config");

  auto* cvrun = app.add_subcommand("cv-run", "Cross-validation report (mean ± SD)");
  std::string r_cfg, r_outdir;
  cvrun->add_option("--config", r_cfg, "Experiment config file")->required();
  cvrun->add_option("--out-dir", r_outdir, "Override output_dir from the config");

  // stats / scatter --------------------------------------------------------
  auto* stats = app.add_subcommand("stats", "Tip coordinate statistics (JSON)");
  std::string t_ann, t_out;
  FrameOptions t_frame;
  stats->add_option("--annotations", t_ann, "Annotation CSV")->required();
  stats->add_option("-o,--out", t_out, "Output JSON (default stdout)");
  t_frame.add(stats);

  auto* scatter = app.add_subcommand("scatter", "Plot-ready tip coordinates with summary (CSV)");
  std::string p_ann, p_out;
  FrameOptions p_frame;
  scatter->add_option("--annotations", p_ann, "Annotation CSV")->required();
  scatter->add_option("-o,--out", p_out, "Output CSV (default stdout)");
  p_frame.add(scatter);

  // synth ------------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "Generate a synthetic annotation CSV");
  std::string y_spec, y_out, y_seed = "0", y_render;
  std::size_t y_render_limit = 5;
  unsigned y_threads = 1;
  synth->add_option("--spec", y_spec, "Scene spec file (default: built-in defaults)");
  synth->add_option("--seed", y_seed, "Generator seed")->capture_default_str();
  synth->add_option("-o,--out", y_out, "Output CSV (default stdout)");
  synth->add_option("--threads", y_threads, "Worker threads")->capture_default_str();
  synth->add_option("--render-dir", y_render, "Also write demo PGM frames here");
  synth->add_option("--render-limit", y_render_limit, "Number of PGM frames")
      ->capture_default_str();

  // simulate ---------------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "Simulated detector output (JSONL)");
  std::string m_ann, m_model, m_out, m_seed = "0", m_sem = "side";
  double m_margin = 0.0;
  unsigned m_threads = 1;
  FrameOptions m_frame;
  simulate->add_option("--annotations", m_ann, "Annotation CSV")->required();
  simulate->add_option("--model", m_model, "Detector error model file (default: perfect detector)");
  simulate->add_option("--margin", m_margin, "Margin M of the simulated training boxes")
      ->required();
  simulate->add_option("--semantics", m_sem, "side or radius")
      ->check(CLI::IsMember({"side", "radius"}))
      ->capture_default_str();
  simulate->add_option("--seed", m_seed, "Simulation seed")->capture_default_str();
  simulate->add_option("-o,--out", m_out, "Output JSONL (default stdout)");
  simulate->add_option("--threads", m_threads, "Worker threads")->capture_default_str();
  m_frame.add(simulate);

  // calibrate --------------------------------------------------------------
  auto* calibrate = app.add_subcommand(
      "calibrate", "Scripted detector output reproducing an exact TP,FP,FN tally");
  std::string k_ann, k_tally, k_split, k_role = "test", k_out, k_seed = "0",
                                        k_sem = "side";
  double k_margin = 0.0;
  FrameOptions k_frame;
  calibrate->add_option("--annotations", k_ann, "Annotation CSV")->required();
  calibrate->add_option("--tally", k_tally, "Target counts as TP,FP,FN")->required();
  calibrate->add_option("--split", k_split, "Split JSON (default: every frame)");
  calibrate->add_option("--role", k_role, "Split role the tally covers")
      ->check(CLI::IsMember({"train", "val", "test"}))
      ->capture_default_str();
  calibrate->add_option("--margin", k_margin, "Box margin M")->required();
  calibrate->add_option("--semantics", k_sem, "side or radius")
      ->check(CLI::IsMember({"side", "radius"}))
      ->capture_default_str();
  calibrate->add_option("--seed", k_seed, "Seed for the frame assignment")
      ->capture_default_str();
  calibrate->add_option("-o,--out", k_out, "Output JSONL (default stdout)");
  k_frame.add(calibrate);

  // derive-box -------------------------------------------------------------
  auto* derive = app.add_subcommand("derive-box", "Mean box size, rounded, from a boxes CSV");
  std::string d_boxes;
  derive->add_option("--boxes", d_boxes, "CSV with x1,y1,x2,y2 columns")->required();

  // replay -----------------------------------------------------------------
  auto* replay = app.add_subcommand("replay", "Re-run a command from its run manifest");
  std::string q_manifest;
  bool q_skip_verify = false;
  replay->add_option("--manifest", q_manifest, "Run manifest JSON")->required();
  replay->add_flag("--skip-verify", q_skip_verify, "Do not check input digests");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  app.parse(reversed);

  if (boxes->parsed()) {
    const Dataset d = load_annotations(b_ann, b_frame.frame());
    const auto sem = parse_margin_semantics(b_sem);
    std::string csv = "video_id,frame_index,x1,y1,x2,y2\n";
    for (const auto& a : d.annotations()) {
      const Box2d b = margin_box(a.tip, b_margin, d.frame(), sem);
      csv += a.video_id + "," + std::to_string(a.frame_index) + "," +
             format_number(b.x1) + "," + format_number(b.y1) + "," +
             format_number(b.x2) + "," + format_number(b.y2) + "\n";
    }
    if (emit(b_out, csv)) {
      ManifestBuilder mb("boxes", args, boxes);
      mb.input(b_ann);
      mb.output(b_out);
      mb.write(manifest_path_for(b_out));
    }
    return 0;
  }

  if (split->parsed()) {
    const Dataset d = load_annotations(s_ann, s_frame.frame());
    const auto seed = parse_seed(s_seed);
    const SplitPlan plan = split_random(d, seed, s_train, s_val, s_test);
    nlohmann::json j = to_json(plan);
    j["frames"] = {{"train", frames_in(d, plan, Role::Train).size()},
                   {"val", frames_in(d, plan, Role::Val).size()},
                   {"test", frames_in(d, plan, Role::Test).size()}};
    if (emit(s_out, j.dump(2) + "\n")) {
      ManifestBuilder mb("split", args, split);
      mb.input(s_ann);
      mb.output(s_out);
      mb.seed("split", seed);
      mb.write(manifest_path_for(s_out));
    }
    return 0;
  }

  if (cvplan->parsed()) {
    const Dataset d = load_annotations(c_ann, c_frame.frame());
    const auto folds = cv_folds(d, c_k);
    nlohmann::json j = folds_to_json(folds);
    for (std::size_t i = 0; i < folds.size(); ++i)
      j["folds"][i]["frames"] = {
          {"train", frames_in(d, folds[i], Role::Train).size()},
          {"val", frames_in(d, folds[i], Role::Val).size()},
          {"test", frames_in(d, folds[i], Role::Test).size()}};
    if (emit(c_out, j.dump(2) + "\n")) {
      ManifestBuilder mb("cv-plan", args, cvplan);
      mb.input(c_ann);
      mb.output(c_out);
      mb.write(manifest_path_for(c_out));
    }
    return 0;
  }

  if (eval->parsed()) {
    e_cfg.distance_population = parse_distance_population(e_pop);
    e_cfg.validate();
    const Dataset d = load_annotations(e_ann, e_frame.frame());
    const DetectionMap dets = load_detections(e_det);
    std::vector<std::size_t> frames;
    if (!e_split.empty()) {
      const SplitPlan plan = load_split(e_split);
      validate_split(plan, d);
      frames = frames_in(d, plan, parse_role(e_role));
    } else {
      frames = all_frames(d);
    }
    if (frames.empty()) throw ValidationError("no frames selected for evaluation");
    const EvalResult r = evaluate_run(d, frames, dets, e_cfg, e_threads);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << metrics_line(r.metrics) << "\n";
    std::cout << "tp " << r.metrics.tally.tp << " fp " << r.metrics.tally.fp
              << " fn " << r.metrics.tally.fn << " mean_distance "
              << format_fixed(r.metrics.mean_distance, 2) << " sd "
              << format_fixed(r.metrics.distance_sd, 2) << "\n";
    if (!e_outdir.empty()) {
      fs::create_directories(e_outdir);
      const fs::path outcomes = fs::path(e_outdir) / "eval_outcomes.csv";
      const fs::path metrics = fs::path(e_outdir) / "eval_metrics.json";
      write_file_atomic(outcomes, outcomes_csv(r.outcomes));
      nlohmann::json mj = metrics_json(r.metrics);
      mj["toolkit_version"] = std::string(kToolkitVersion);
      mj["warnings"] = r.warnings;
      write_file_atomic(metrics, mj.dump(2) + "\n");
      ManifestBuilder mb("eval", args, eval);
      mb.input(e_ann);
      mb.input(e_det);
      if (!e_split.empty()) mb.input(e_split);
      mb.output(outcomes);
      mb.output(metrics);
      mb.write(fs::path(e_outdir) / "eval.manifest.json");
    }
    return 0;
  }

  if (sweep->parsed() || cvrun->parsed()) {
    const bool cv = cvrun->parsed();
    const std::string& cfg_path = cv ? r_cfg : w_cfg;
    const std::string& outdir = cv ? r_outdir : w_outdir;
    ExperimentConfig cfg = experiment_from_config(KeyValueConfig::load(cfg_path));
    if (!outdir.empty()) cfg.output_dir = outdir;
    const ReportFiles files = cv ? run_cv_experiment(cfg) : run_sweep_experiment(cfg);
    const auto written = write_report(cfg.output_dir, files);
    ManifestBuilder mb(cv ? "cv-run" : "sweep", args, cv ? cvrun : sweep);
    mb.input(cfg_path);
    for (const auto& p : experiment_inputs(cfg, cv)) mb.input(p);
    for (const auto& p : written) mb.output(p);
    mb.seed("experiment", cfg.seed);
    const KeyValueConfig resolved = cfg.resolved();
    for (const auto& [k, v] : resolved.values()) mb.config(k, v);
    mb.config("config_hash", cfg.hash());
    const std::string stem =
        cfg.name + "-seed" + std::to_string(cfg.seed) + (cv ? "-cv" : "");
    mb.write(cfg.output_dir / (stem + ".manifest.json"));
    const auto md = files.find(stem + ".md");
    if (md != files.end()) std::cout << md->second;
    return 0;
  }

  if (stats->parsed()) {
    const Dataset d = load_annotations(t_ann, t_frame.frame());
    if (emit(t_out, to_json(dataset_stats(d)).dump(2) + "\n")) {
      ManifestBuilder mb("stats", args, stats);
      mb.input(t_ann);
      mb.output(t_out);
      mb.write(manifest_path_for(t_out));
    }
    return 0;
  }

  if (scatter->parsed()) {
    const Dataset d = load_annotations(p_ann, p_frame.frame());
    if (emit(p_out, export_scatter(d))) {
      ManifestBuilder mb("scatter", args, scatter);
      mb.input(p_ann);
      mb.output(p_out);
      mb.write(manifest_path_for(p_out));
    }
    return 0;
  }

  if (synth->parsed()) {
    const SceneSpec spec = y_spec.empty()
                               ? SceneSpec{}
                               : scene_spec_from_config(KeyValueConfig::load(y_spec));
    const auto seed = parse_seed(y_seed);
    const Dataset d = generate_dataset(seed, spec, y_threads);
    std::vector<fs::path> rendered;
    if (!y_render.empty()) {
      fs::create_directories(y_render);
      const auto& rows = d.annotations();
      for (std::size_t i = 0; i < rows.size() && i < y_render_limit; ++i) {
        const fs::path p = fs::path(y_render) /
                           (rows[i].video_id + "_" +
                            std::to_string(rows[i].frame_index) + ".pgm");
        write_file_atomic(p, render_pgm(rows[i], d.frame(), derive_seed(seed, i)));
        rendered.push_back(p);
      }
    }
    if (emit(y_out, serialize_annotations(d))) {
      ManifestBuilder mb("synth", args, synth);
      if (!y_spec.empty()) mb.input(y_spec);
      mb.output(y_out);
      for (const auto& p : rendered) mb.output(p);
      mb.seed("generator", seed);
      mb.write(manifest_path_for(y_out));
    }
    return 0;
  }

  if (simulate->parsed()) {
    const Dataset d = load_annotations(m_ann, m_frame.frame());
    const DetectorErrorModel model =
        m_model.empty() ? DetectorErrorModel{}
                        : error_model_from_config(KeyValueConfig::load(m_model));
    const auto seed = parse_seed(m_seed);
    const DetectionMap dets = simulate_detector(
        d, model, seed, m_margin, parse_margin_semantics(m_sem), m_threads);
    if (emit(m_out, serialize_detections(dets))) {
      ManifestBuilder mb("simulate", args, simulate);
      mb.input(m_ann);
      if (!m_model.empty()) mb.input(m_model);
      mb.output(m_out);
      mb.seed("simulator", seed);
      mb.write(manifest_path_for(m_out));
    }
    return 0;
  }

  if (calibrate->parsed()) {
    const Dataset d = load_annotations(k_ann, k_frame.frame());
    std::vector<std::size_t> frames;
    if (!k_split.empty()) {
      const SplitPlan plan = load_split(k_split);
      validate_split(plan, d);
      frames = frames_in(d, plan, parse_role(k_role));
    } else {
      frames = all_frames(d);
    }
    const auto seed = parse_seed(k_seed);
    const Calibration cal = calibrate_to_counts(frames.size(), parse_tally(k_tally), seed);
    const DetectionMap dets =
        simulate_scripted(d, frames, cal, k_margin, parse_margin_semantics(k_sem));
    if (emit(k_out, serialize_detections(dets))) {
      ManifestBuilder mb("calibrate", args, calibrate);
      mb.input(k_ann);
      if (!k_split.empty()) mb.input(k_split);
      mb.output(k_out);
      mb.seed("assignment", seed);
      mb.write(manifest_path_for(k_out));
    }
    return 0;
  }

  if (derive->parsed()) {
    const std::string text = read_file(d_boxes);
    std::vector<Box2d> boxes;
    std::size_t line_no = 0, pos = 0;
    std::vector<int> cols;
    while (pos < text.size()) {
      auto eol = text.find('\n', pos);
      if (eol == std::string::npos) eol = text.size();
      const auto line = trim(std::string_view(text).substr(pos, eol - pos));
      pos = eol + 1;
      ++line_no;
      if (line.empty() || line.front() == '#') continue;
      const auto fields = split_fields(line, ',');
      if (cols.empty()) {
        for (const char* name : {"x1", "y1", "x2", "y2"}) {
          const auto it = std::find(fields.begin(), fields.end(), name);
          if (it == fields.end())
            throw ValidationError("boxes CSV header lacks column '" +
                                  std::string(name) + "'");
          cols.push_back(static_cast<int>(it - fields.begin()));
        }
        continue;
      }
      double v[4];
      for (int i = 0; i < 4; ++i) {
        const auto idx = static_cast<std::size_t>(cols[i]);
        const auto parsed = idx < fields.size() ? parse_double(fields[idx]) : std::nullopt;
        if (!parsed)
          throw ValidationError("boxes row " + std::to_string(line_no) +
                                ": bad coordinate");
        v[i] = *parsed;
      }
      boxes.push_back({v[0], v[1], v[2], v[3]});
    }
    const auto [w, h] = derive_fixed_box(boxes);
    std::cout << "width " << w << " height " << h << "\n";
    return 0;
  }

  if (replay->parsed()) {
    const RunManifest m = load_manifest(q_manifest);
    if (!m.working_directory.empty() && fs::exists(m.working_directory))
      fs::current_path(m.working_directory);
    if (!q_skip_verify) {
      const auto problems = verify_inputs(m, fs::current_path());
      if (!problems.empty()) {
        for (const auto& p : problems) std::cerr << "error: " << p << "\n";
        return 1;
      }
    }
    if (!m.args.empty() && m.args.front() == "replay")
      throw ValidationError("refusing to replay a replay manifest");
    return run_cli(m.args);
  }
  return 1;
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"tipbench: tip-localisation benchmark toolkit"};
  try {
    return dispatch(app, args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args);
}
