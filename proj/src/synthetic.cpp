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
#include "tipbench/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "tipbench/errors.hpp"
#include "tipbench/rng.hpp"

namespace tipbench {

namespace {

void reject_unknown_keys(const KeyValueConfig& cfg,
                         const std::set<std::string>& known,
                         const std::string& what) {
  for (const auto& [k, v] : cfg.values())
    if (!known.count(k))
      throw ValidationError(what + ": unknown key '" + k + "'");
}

/// Runs body(i) for i in [0, n) on up to `threads` workers.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body body) {
  const std::size_t workers =
      std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
}

double truncated_normal(Rng& rng, double mean, double sd, double upper) {
  if (sd == 0.0) return mean;
  for (;;) {
    const double v = rng.normal(mean, sd);
    if (v >= 0.0 && v < upper) return v;
  }
}

struct Moments {
  double mean, sd;
};

// Mean and SD of N(mu, sigma^2) restricted to [0, upper).
Moments truncated_moments(double mu, double sigma, double upper) {
  const auto pdf = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); };
  const auto cdf = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  const double a = -mu / sigma, b = (upper - mu) / sigma;
  const double z = cdf(b) - cdf(a);
  const double shift = (pdf(a) - pdf(b)) / z;
  const double var = 1.0 + (a * pdf(a) - b * pdf(b)) / z - shift * shift;
  return {mu + sigma * shift, sigma * std::sqrt(var)};
}

// Parameters of the untruncated normal whose restriction to [0, upper) has
// the requested mean and SD.
Moments untruncated(double mean, double sd, double upper) {
  if (sd == 0.0) return {mean, 0.0};
  if (!(sd < upper / std::sqrt(12.0)))
    throw ValidationError("tip SD too large for the frame");
  double mu = mean, sigma = sd;
  for (int i = 0; i < 1000; ++i) {
    const Moments m = truncated_moments(mu, sigma, upper);
    if (std::abs(m.mean - mean) < 1e-10 && std::abs(m.sd - sd) < 1e-10)
      return {mu, sigma};
    mu += mean - m.mean;
    sigma *= sd / m.sd;
    if (!std::isfinite(mu) || !std::isfinite(sigma) || sigma > 1e6 * upper) break;
  }
  throw ValidationError("tip distribution cannot be matched inside the frame");
}

Point2d sample_continuous_tip(Rng& rng, const TipDistribution& dist,
                              const FrameSize& frame) {
  if (dist.periphery_fraction > 0.0 && rng.bernoulli(dist.periphery_fraction)) {
    const double cx = frame.width / 2.0, cy = frame.height / 2.0;
    for (;;) {
      const Point2d p(rng.uniform(0.0, frame.width),
                      rng.uniform(0.0, frame.height));
      const double r = std::hypot((p.x() - cx) / cx, (p.y() - cy) / cy);
      if (r > dist.periphery_inner && in_frame(p, frame)) return p;
    }
  }
  return {truncated_normal(rng, dist.mean.x(), dist.sd.x(), frame.width),
          truncated_normal(rng, dist.mean.y(), dist.sd.y(), frame.height)};
}

Point2d sample_tip(Rng& rng, const TipDistribution& dist,
                   const FrameSize& frame, double grid) {
  for (;;) {
    Point2d p = sample_continuous_tip(rng, dist, frame);
    if (grid <= 0.0) return p;
    p = ((p.array() / grid).round() * grid).matrix();
    if (in_frame(p, frame)) return p;
  }
}

}  // namespace

TipDistribution sampling_distribution(const TipDistribution& tips,
                                      const FrameSize& frame) {
  TipDistribution s = tips;
  const Moments x = untruncated(tips.mean.x(), tips.sd.x(), frame.width);
  const Moments y = untruncated(tips.mean.y(), tips.sd.y(), frame.height);
  s.mean = {x.mean, y.mean};
  s.sd = {x.sd, y.sd};
  return s;
}

namespace {

std::string video_name(std::size_t index, std::size_t n_videos) {
  const std::string digits = std::to_string(index + 1);
  const std::size_t width = std::to_string(n_videos).size();
  return "v" + std::string(width - digits.size(), '0') + digits;
}

double draw_confidence(Rng& rng, const ConfidenceModel& m) {
  if (m.kind == ConfidenceModel::Kind::Constant) return m.value;
  return std::clamp(rng.beta(m.alpha, m.beta), 0.0, 1.0);
}

Point2d uniform_point(Rng& rng, const FrameSize& frame) {
  return {rng.uniform(0.0, frame.width), rng.uniform(0.0, frame.height)};
}

}  // namespace

void SceneSpec::validate() const {
  if (n_videos == 0 || frames_per_video == 0)
    throw ValidationError("scene needs at least one video and one frame");
  if (frame_stride <= 0) throw ValidationError("frame stride must be positive");
  if (frame.width <= 0 || frame.height <= 0)
    throw ValidationError("frame dimensions must be positive");
  if (!in_frame(tips.mean, frame))
    throw ValidationError("tip distribution mean lies outside the frame");
  if (!(tip_grid >= 0 && tip_grid < 64))
    throw ValidationError("tip grid must lie in [0,64)");
  if (!(tips.sd.x() >= 0 && tips.sd.y() >= 0))
    throw ValidationError("tip distribution SD must be non-negative");
  if (!(tips.periphery_fraction >= 0 && tips.periphery_fraction <= 1))
    throw ValidationError("periphery fraction must lie in [0,1]");
  if (!(tips.periphery_inner >= 0 && tips.periphery_inner < 1.4))
    throw ValidationError("periphery inner radius must lie in [0,1.4)");
  sampling_distribution(tips, frame);
}

SceneSpec scene_spec_from_config(const KeyValueConfig& cfg) {
  reject_unknown_keys(cfg,
                      {"n_videos", "frames_per_video", "frame_stride",
                       "image_width", "image_height", "mean_x", "mean_y",
                       "sd_x", "sd_y", "periphery_fraction",
                       "periphery_inner", "tip_grid"},
                      "scene spec");
  SceneSpec s;
  const auto n_videos = cfg.get_int("n_videos", 9);
  const auto frames = cfg.get_int("frames_per_video", 257);
  if (n_videos <= 0 || frames <= 0)
    throw ValidationError("scene spec: counts must be positive");
  s.n_videos = static_cast<std::size_t>(n_videos);
  s.frames_per_video = static_cast<std::size_t>(frames);
  s.frame_stride = cfg.get_int("frame_stride", 300);
  s.frame.width = static_cast<int>(cfg.get_int("image_width", 640));
  s.frame.height = static_cast<int>(cfg.get_int("image_height", 480));
  s.tips.mean = {cfg.get_double("mean_x", s.tips.mean.x()),
                 cfg.get_double("mean_y", s.tips.mean.y())};
  s.tips.sd = {cfg.get_double("sd_x", s.tips.sd.x()),
               cfg.get_double("sd_y", s.tips.sd.y())};
  s.tips.periphery_fraction =
      cfg.get_double("periphery_fraction", s.tips.periphery_fraction);
  s.tips.periphery_inner =
      cfg.get_double("periphery_inner", s.tips.periphery_inner);
  s.tip_grid = cfg.get_double("tip_grid", s.tip_grid);
  s.validate();
  return s;
}

Dataset generate_dataset(std::uint64_t seed, const SceneSpec& spec,
                         unsigned threads) {
  spec.validate();
  const TipDistribution sampling = sampling_distribution(spec.tips, spec.frame);
  std::vector<std::vector<TipAnnotation>> per_video(spec.n_videos);
  parallel_for(spec.n_videos, threads, [&](std::size_t v) {
    Rng rng(derive_seed(seed, v));
    auto& rows = per_video[v];
    rows.reserve(spec.frames_per_video);
    const std::string id = video_name(v, spec.n_videos);
    for (std::size_t f = 0; f < spec.frames_per_video; ++f)
      rows.push_back({id, static_cast<std::int64_t>(f) * spec.frame_stride,
                      sample_tip(rng, sampling, spec.frame, spec.tip_grid)});
  });
  std::vector<TipAnnotation> all;
  all.reserve(spec.n_videos * spec.frames_per_video);
  for (auto& rows : per_video)
    all.insert(all.end(), std::make_move_iterator(rows.begin()),
               std::make_move_iterator(rows.end()));
  return Dataset(std::move(all), spec.frame);
}

void DetectorErrorModel::validate() const {
  if (!(jitter_sd.x() >= 0 && jitter_sd.y() >= 0))
    throw ValidationError("jitter SD must be non-negative");
  if (!offset.allFinite()) throw ValidationError("offset must be finite");
  if (!(dropout >= 0 && dropout <= 1))
    throw ValidationError("dropout probability must lie in [0,1]");
  if (!(dropout_confidence >= 0 && dropout_confidence <= 1))
    throw ValidationError("dropout confidence must lie in [0,1]");
  if (confidence.kind == ConfidenceModel::Kind::Constant &&
      !(confidence.value >= 0 && confidence.value <= 1))
    throw ValidationError("constant confidence must lie in [0,1]");
  if (confidence.kind == ConfidenceModel::Kind::Beta &&
      !(confidence.alpha > 0 && confidence.beta > 0))
    throw ValidationError("beta confidence parameters must be positive");
  if (!(decoy_relative_confidence.lo >= 0 &&
        decoy_relative_confidence.lo <= decoy_relative_confidence.hi &&
        decoy_relative_confidence.hi <= 1))
    throw ValidationError("decoy confidence range must be within [0,1]");
  if (!(decoy_min_distance >= 0))
    throw ValidationError("decoy distance must be non-negative");
}

DetectorErrorModel error_model_from_config(const KeyValueConfig& cfg) {
  reject_unknown_keys(
      cfg,
      {"jitter_sd_x", "jitter_sd_y", "offset_x", "offset_y", "dropout",
       "dropout_confidence", "confidence", "confidence_value",
       "confidence_alpha", "confidence_beta", "decoys", "decoy_conf_min",
       "decoy_conf_max", "decoy_min_distance", "clip_boxes"},
      "detector model");
  DetectorErrorModel m;
  m.jitter_sd = {cfg.get_double("jitter_sd_x", 0.0),
                 cfg.get_double("jitter_sd_y", 0.0)};
  m.offset = {cfg.get_double("offset_x", 0.0), cfg.get_double("offset_y", 0.0)};
  m.dropout = cfg.get_double("dropout", 0.0);
  m.dropout_confidence = cfg.get_double("dropout_confidence", 0.05);
  const auto kind = cfg.get_string("confidence", "constant");
  if (kind == "constant") {
    m.confidence.kind = ConfidenceModel::Kind::Constant;
  } else if (kind == "beta") {
    m.confidence.kind = ConfidenceModel::Kind::Beta;
  } else {
    throw ValidationError("detector model: confidence must be constant or beta");
  }
  m.confidence.value = cfg.get_double("confidence_value", 1.0);
  m.confidence.alpha = cfg.get_double("confidence_alpha", 8.0);
  m.confidence.beta = cfg.get_double("confidence_beta", 2.0);
  const auto decoys = cfg.get_int("decoys", 0);
  if (decoys < 0) throw ValidationError("detector model: decoys must be >= 0");
  m.decoys = static_cast<std::size_t>(decoys);
  m.decoy_relative_confidence = {cfg.get_double("decoy_conf_min", 0.1),
                                 cfg.get_double("decoy_conf_max", 0.9)};
  m.decoy_min_distance = cfg.get_double("decoy_min_distance", 200.0);
  m.clip_boxes = cfg.get_bool("clip_boxes", false);
  m.validate();
  return m;
}

DetectionMap simulate_detector(const Dataset& dataset,
                               const DetectorErrorModel& model,
                               std::uint64_t seed, double margin,
                               MarginSemantics semantics, unsigned threads) {
  model.validate();
  if (!(margin > 0)) throw ValidationError("margin must be positive");
  const double side = margin_side(margin, semantics);
  const auto& rows = dataset.annotations();
  const FrameSize frame = dataset.frame();
  std::vector<FrameDetections> frames(rows.size());

  parallel_for(rows.size(), threads, [&](std::size_t i) {
    const auto& a = rows[i];
    Rng rng(derive_seed(seed, i));
    auto& out = frames[i];
    out.key = a.key();
    if (rng.bernoulli(model.dropout)) {
      const Point2d stray = uniform_point(rng, frame);
      if (model.dropout_confidence > 0)
        out.detections.push_back(
            {centered_box(stray, side, side), model.dropout_confidence});
      return;
    }
    Point2d center = a.tip + model.offset;
    center.x() += model.jitter_sd.x() * rng.normal();
    center.y() += model.jitter_sd.y() * rng.normal();
    Box2d box = centered_box(center, side, side);
    if (model.clip_boxes) {
      const Box2d clipped = clip_to_frame(box, frame);
      if (clipped.valid()) box = clipped;
    }
    const double conf = draw_confidence(rng, model.confidence);
    std::vector<Detection> decoys;
    for (std::size_t d = 0; d < model.decoys; ++d) {
      Point2d p = uniform_point(rng, frame);
      for (int attempt = 0; attempt < 1000; ++attempt) {
        if ((p - a.tip).norm() >= model.decoy_min_distance) break;
        p = uniform_point(rng, frame);
      }
      const double rel = rng.uniform(model.decoy_relative_confidence.lo,
                                     model.decoy_relative_confidence.hi);
      decoys.push_back({centered_box(p, side, side), conf * rel});
    }
    const auto slot = static_cast<std::size_t>(rng.below(decoys.size() + 1));
    decoys.insert(decoys.begin() + static_cast<std::ptrdiff_t>(slot),
                  Detection{box, conf});
    out.detections = std::move(decoys);
  });

  DetectionMap map;
  for (auto& f : frames) {
    FrameKey key = f.key;
    map.emplace(std::move(key), std::move(f));
  }
  return map;
}

Calibration calibrate_to_counts(std::size_t n_frames, const Tally& target,
                                std::uint64_t seed) {
  if (target.total() != n_frames)
    throw ValidationError("target tally " + std::to_string(target.tp) + "/" +
                          std::to_string(target.fp) + "/" +
                          std::to_string(target.fn) + " sums to " +
                          std::to_string(target.total()) + ", not " +
                          std::to_string(n_frames) + " frames");
  Calibration c;
  c.assignment.reserve(n_frames);
  c.assignment.insert(c.assignment.end(), target.tp, Outcome::TP);
  c.assignment.insert(c.assignment.end(), target.fp, Outcome::FP);
  c.assignment.insert(c.assignment.end(), target.fn, Outcome::FN);
  Rng rng(seed);
  rng.shuffle(c.assignment);
  return c;
}

DetectionMap simulate_scripted(const Dataset& dataset,
                               std::span<const std::size_t> frame_indices,
                               const Calibration& calibration, double margin,
                               MarginSemantics semantics) {
  if (frame_indices.size() != calibration.assignment.size())
    throw ValidationError("calibration covers " +
                          std::to_string(calibration.assignment.size()) +
                          " frames but " + std::to_string(frame_indices.size()) +
                          " were given");
  if (!(margin > 0)) throw ValidationError("margin must be positive");
  const double side = margin_side(margin, semantics);
  const auto& rows = dataset.annotations();
  DetectionMap map;
  for (std::size_t i = 0; i < frame_indices.size(); ++i) {
    if (frame_indices[i] >= rows.size())
      throw ValidationError("frame index outside the dataset");
    const auto& a = rows[frame_indices[i]];
    FrameDetections f{a.key(), {}};
    switch (calibration.assignment[i]) {
      case Outcome::TP:
        f.detections.push_back({centered_box(a.tip, side, side), 1.0});
        break;
      case Outcome::FP: {
        const double dx = a.tip.x() < dataset.frame().width / 2.0
                              ? calibration.fp_offset
                              : -calibration.fp_offset;
        f.detections.push_back(
            {centered_box(Point2d(a.tip.x() + dx, a.tip.y()), side, side),
             1.0});
        break;
      }
      case Outcome::FN:
        f.detections.push_back({centered_box(a.tip, side, side),
                                calibration.model.dropout_confidence});
        break;
    }
    map.emplace(a.key(), std::move(f));
  }
  return map;
}

std::string render_pgm(const TipAnnotation& annotation, const FrameSize& frame,
                       std::uint64_t seed) {
  Rng rng(seed);
  const double cx = frame.width / 2.0, cy = frame.height / 2.0;
  const double radius = 0.48 * std::min(frame.width, frame.height) * 1.3;
  const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const Point2d entry(cx + radius * std::cos(angle),
                      cy + radius * std::sin(angle));
  const Point2d tip = annotation.tip;
  const Point2d dir = tip - entry;
  const double len2 = dir.squaredNorm();
  constexpr double kHalfWidth = 4.0;

  std::string out = "P5\n" + std::to_string(frame.width) + " " +
                    std::to_string(frame.height) + "\n255\n";
  out.reserve(out.size() + static_cast<std::size_t>(frame.width) * frame.height);
  for (int y = 0; y < frame.height; ++y) {
    for (int x = 0; x < frame.width; ++x) {
      const Point2d p(x + 0.5, y + 0.5);
      const bool in_view = std::hypot((p.x() - cx) / cx, (p.y() - cy) / cy) < 1.0;
      double value = in_view ? 70.0 + 20.0 * rng.uniform01() : 8.0;
      const double t =
          len2 > 0 ? std::clamp((p - entry).dot(dir) / len2, 0.0, 1.0) : 1.0;
      if ((entry + t * dir - p).norm() <= kHalfWidth) value = 230.0;
      out.push_back(static_cast<char>(static_cast<unsigned char>(value)));
    }
  }
  return out;
}

}  // namespace tipbench
