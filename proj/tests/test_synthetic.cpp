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
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "tipbench/io.hpp"
#include "tipbench/synthetic.hpp"

using namespace tipbench;

namespace {

std::vector<std::size_t> all_of(const Dataset& d) {
  std::vector<std::size_t> v(d.size());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

SceneSpec small_scene(std::size_t frames = 40) {
  SceneSpec s;
  s.frames_per_video = frames;
  return s;
}

Metrics score(const Dataset& d, const DetectionMap& m) {
  return evaluate_run(d, all_of(d), m).metrics;
}

}  // namespace

TEST_CASE("generate_dataset at full scale") {
  const Dataset d = generate_dataset(1, SceneSpec{});
  CHECK(d.size() == 2313);
  CHECK(d.video_ids().size() == 9);
  CHECK(d.video_ids().front() == "v1");
  for (const auto& [v, n] : d.frames_per_video()) CHECK(n == 257);
  CHECK(d.annotations()[1].frame_index == 300);
}

TEST_CASE("degenerate tip distribution puts every tip on the mean") {
  SceneSpec s;
  s.frames_per_video = 1;
  s.tips.sd = {0, 0};
  s.tip_grid = 0;
  const Dataset d = generate_dataset(5, s);
  CHECK(d.size() == 9);
  for (const auto& a : d.annotations()) CHECK(a.tip == Point2d(316.30, 214.52));
  s.tip_grid = 0.5;
  for (const auto& a : generate_dataset(5, s).annotations())
    CHECK(a.tip == Point2d(316.5, 214.5));
}

TEST_CASE("default tips lie on the 1/16 px grid") {
  for (const auto& a : generate_dataset(8, small_scene(20)).annotations()) {
    CHECK(a.tip.x() * 16 == std::round(a.tip.x() * 16));
    CHECK(a.tip.y() * 16 == std::round(a.tip.y() * 16));
  }
  SceneSpec bad;
  bad.tip_grid = -1;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("generator statistics recover the configured parameters") {
  const Dataset d = generate_dataset(2310, small_scene(500));
  const CoordStats s = dataset_stats(d);
  const double n = static_cast<double>(s.count);
  CHECK(std::abs(s.x.mean - 316.30) < 3 * 88.44 / std::sqrt(n));
  CHECK(std::abs(s.y.mean - 214.52) < 3 * 88.02 / std::sqrt(n));
  CHECK(std::abs(s.x.sd - 88.44) < 0.05 * 88.44);
  // y is truncated near 2.4 SD, so its spread shrinks a little.
  CHECK(std::abs(s.y.sd - 88.02) < 0.08 * 88.02);
}

TEST_CASE("generation is deterministic and independent of thread count") {
  const auto spec = small_scene(30);
  const auto a = serialize_annotations(generate_dataset(77, spec, 1));
  CHECK(a == serialize_annotations(generate_dataset(77, spec, 1)));
  CHECK(a == serialize_annotations(generate_dataset(77, spec, 4)));
  CHECK(a != serialize_annotations(generate_dataset(78, spec, 1)));
}

TEST_CASE("periphery weighting pushes tips outward") {
  SceneSpec center = small_scene(200), edge = small_scene(200);
  edge.tips.periphery_fraction = 0.8;
  const auto spread = [](const Dataset& d) {
    double sum = 0;
    for (const auto& a : d.annotations())
      sum += std::hypot((a.tip.x() - 320) / 320, (a.tip.y() - 240) / 240);
    return sum / static_cast<double>(d.size());
  };
  CHECK(spread(generate_dataset(3, edge)) > spread(generate_dataset(3, center)) + 0.1);
}

TEST_CASE("scene spec validation and config parsing") {
  SceneSpec s;
  s.n_videos = 0;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s = {};
  s.tips.mean = {700, 10};
  CHECK_THROWS_AS(s.validate(), ValidationError);

  const auto cfg = KeyValueConfig::parse("n_videos = 3\nframes_per_video=4\nsd_x = 0\nsd_y=0\nmean_x=10\nmean_y=20\n");
  const SceneSpec parsed = scene_spec_from_config(cfg);
  CHECK(parsed.n_videos == 3);
  CHECK(parsed.frames_per_video == 4);
  CHECK(generate_dataset(1, parsed).annotations()[0].tip == Point2d(10, 20));
  CHECK_THROWS_AS(scene_spec_from_config(KeyValueConfig::parse("videos = 3\n")), ValidationError);
}

TEST_CASE("simulate_detector error models") {
  const Dataset d = generate_dataset(11, small_scene(25));

  SUBCASE("zero error is a perfect oracle") {
    const Metrics m = score(d, simulate_detector(d, {}, 1, 150, MarginSemantics::Side));
    CHECK(*m.f1 == 1.0);
    CHECK(*m.mean_distance == 0.0);
  }
  SUBCASE("full dropout yields only false negatives") {
    DetectorErrorModel model;
    model.dropout = 1.0;
    const Metrics m = score(d, simulate_detector(d, model, 1, 150, MarginSemantics::Side));
    CHECK(m.tally.fn == d.size());
    CHECK(*m.recall == 0.0);
  }
  SUBCASE("fixed offsets straddle the IoU boundary") {
    // Integer tips keep box arithmetic exact at the 0.5 boundary.
    std::vector<TipAnnotation> rounded;
    for (const auto& a : d.annotations())
      rounded.push_back({a.video_id, a.frame_index, a.tip.array().floor().matrix()});
    const Dataset d(rounded, FrameSize{});
    DetectorErrorModel model;
    model.offset = {64, 0};
    CHECK(score(d, simulate_detector(d, model, 1, 100, MarginSemantics::Side)).tally ==
          Tally{0, d.size(), 0});
    model.offset = {63, 0};
    CHECK(score(d, simulate_detector(d, model, 1, 100, MarginSemantics::Radius)).tally ==
          Tally{d.size(), 0, 0});
  }
  SUBCASE("decoys never outrank the primary") {
    DetectorErrorModel model;
    model.decoys = 3;
    model.confidence.kind = ConfidenceModel::Kind::Beta;
    const auto map = simulate_detector(d, model, 9, 150, MarginSemantics::Side);
    for (const auto& [k, f] : map) CHECK(f.detections.size() == 4);
    CHECK(score(d, map).tally.fp == 0);
  }
  SUBCASE("clipping keeps boxes in frame") {
    DetectorErrorModel model;
    model.clip_boxes = true;
    for (const auto& [k, f] : simulate_detector(d, model, 2, 200, MarginSemantics::Side))
      for (const auto& det : f.detections) {
        CHECK(det.box.x1 >= 0);
        CHECK(det.box.x2 <= 640);
      }
  }
  SUBCASE("deterministic per seed and independent of threads") {
    DetectorErrorModel model;
    model.jitter_sd = {30, 30};
    model.dropout = 0.2;
    model.decoys = 2;
    const auto a = serialize_detections(simulate_detector(d, model, 4, 150, MarginSemantics::Side, 1));
    CHECK(a == serialize_detections(simulate_detector(d, model, 4, 150, MarginSemantics::Side, 6)));
    CHECK(a != serialize_detections(simulate_detector(d, model, 5, 150, MarginSemantics::Side, 1)));
  }
}

TEST_CASE("larger jitter never improves F1 on a fixed-seed grid") {
  const Dataset d = generate_dataset(21, small_scene(60));
  double previous = 2.0;
  for (double sd : {0.0, 10.0, 25.0, 40.0, 60.0, 90.0}) {
    DetectorErrorModel model;
    model.jitter_sd = {sd, sd};
    const double f1 = *score(d, simulate_detector(d, model, 8, 150, MarginSemantics::Side)).f1;
    CHECK(f1 <= previous);
    previous = f1;
  }
  CHECK(previous < 0.8);
}

TEST_CASE("detector model config") {
  const auto m = error_model_from_config(KeyValueConfig::parse(
      "jitter_sd_x = 5\njitter_sd_y = 6\noffset_x = 1\ndropout = 0.25\n"
      "confidence = beta\nconfidence_alpha = 3\ndecoys = 2\nclip_boxes = true\n"));
  CHECK(m.jitter_sd == Point2d(5, 6));
  CHECK(m.offset == Point2d(1, 0));
  CHECK(m.dropout == 0.25);
  CHECK(m.confidence.kind == ConfidenceModel::Kind::Beta);
  CHECK(m.confidence.alpha == 3);
  CHECK(m.decoys == 2);
  CHECK(m.clip_boxes);
  CHECK_THROWS_AS(error_model_from_config(KeyValueConfig::parse("dropout = 2\n")), ValidationError);
  CHECK_THROWS_AS(error_model_from_config(KeyValueConfig::parse("jitter = 2\n")), ValidationError);
  CHECK_THROWS_AS(error_model_from_config(KeyValueConfig::parse("confidence = gaussian\n")),
                  ValidationError);
}

TEST_CASE("calibrate_to_counts reproduces target tallies through the pipeline") {
  SceneSpec s = small_scene(240);
  s.n_videos = 1;
  const Dataset d = generate_dataset(6, s);
  const auto frames = all_of(d);
  struct Case {
    Tally target;
    const char* recall;
    const char* precision;
    const char* f1;
  };
  for (const Case& c : {Case{{176, 64, 0}, "1.000", "0.733", "0.846"},
                        Case{{172, 41, 27}, "0.864", "0.808", "0.835"},
                        Case{{240, 0, 0}, "1.000", "1.000", "1.000"}}) {
    for (std::uint64_t seed : {0u, 1u, 2u}) {
      const auto cal = calibrate_to_counts(240, c.target, seed);
      for (auto sem : {MarginSemantics::Side, MarginSemantics::Radius}) {
        const Metrics m = score(d, simulate_scripted(d, frames, cal, 150, sem));
        CHECK(m.tally == c.target);
        CHECK(format3(m.recall) == c.recall);
        CHECK(format3(m.precision) == c.precision);
        CHECK(format3(m.f1) == c.f1);
      }
    }
  }
  CHECK_THROWS_AS(calibrate_to_counts(240, {176, 64, 1}), ValidationError);
  const auto cal = calibrate_to_counts(3, {1, 1, 1});
  const std::vector<std::size_t> two{0, 1};
  CHECK_THROWS_AS(simulate_scripted(d, two, cal, 150, MarginSemantics::Side), ValidationError);
}

TEST_CASE("render_pgm writes a binary greyscale frame") {
  const TipAnnotation a{"v1", 0, Point2d(320, 240)};
  const std::string img = render_pgm(a, {64, 48}, 1);
  const std::string head = "P5\n64 48\n255\n";
  REQUIRE(img.size() == head.size() + 64 * 48);
  CHECK(img.compare(0, head.size(), head) == 0);
  CHECK(img == render_pgm(a, {64, 48}, 1));
}

TEST_CASE("sampling distribution undoes truncation bias") {
  // Midpoint-rule integration of the truncated density.
  const auto moments = [](double mu, double sigma, double upper) {
    const int n = 200000;
    const double h = upper / n;
    long double w = 0, m1 = 0, m2 = 0;
    for (int i = 0; i < n; ++i) {
      const double x = (i + 0.5) * h;
      const long double p = std::exp(-0.5 * ((x - mu) / sigma) * ((x - mu) / sigma));
      w += p;
      m1 += p * x;
      m2 += p * x * x;
    }
    const double mean = static_cast<double>(m1 / w);
    return std::pair{mean, std::sqrt(static_cast<double>(m2 / w) - mean * mean)};
  };
  const TipDistribution base;
  const TipDistribution s = sampling_distribution(base, FrameSize{});
  CHECK(s.mean.y() < base.mean.y());
  const auto [mx, sx] = moments(s.mean.x(), s.sd.x(), 640);
  const auto [my, sy] = moments(s.mean.y(), s.sd.y(), 480);
  CHECK(mx == doctest::Approx(316.30).epsilon(1e-6));
  CHECK(sx == doctest::Approx(88.44).epsilon(1e-6));
  CHECK(my == doctest::Approx(214.52).epsilon(1e-6));
  CHECK(sy == doctest::Approx(88.02).epsilon(1e-6));

  TipDistribution wide;
  wide.sd = {200, 10};
  CHECK_THROWS_AS(sampling_distribution(wide, FrameSize{}), ValidationError);
}
