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

#include <algorithm>
#include <set>
#include <string>

#include "oracles.hpp"
#include "tipbench/dataset.hpp"
#include "tipbench/rng.hpp"

using namespace tipbench;

namespace {

std::string header() { return "video_id,frame_index,x,y\n"; }

std::string error_of(const std::string& text) {
  try {
    parse_annotations(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

// Dataset with the given per-video frame counts, tips drawn uniformly.
Dataset make_dataset(const std::vector<std::size_t>& frames_per_video,
                     std::uint64_t seed) {
  Rng rng(seed);
  std::vector<TipAnnotation> rows;
  for (std::size_t v = 0; v < frames_per_video.size(); ++v)
    for (std::size_t f = 0; f < frames_per_video[v]; ++f)
      rows.push_back({std::string(1, static_cast<char>('a' + v)),
                      static_cast<std::int64_t>(f * 300),
                      Point2d(rng.uniform(0, 640), rng.uniform(0, 480))});
  return Dataset(std::move(rows));
}

}  // namespace

TEST_CASE("parse_annotations maps fields directly") {
  const Dataset d = parse_annotations(header() + "v1,300,320,240\n");
  REQUIRE(d.size() == 1);
  CHECK(d.annotations()[0].video_id == "v1");
  CHECK(d.annotations()[0].frame_index == 300);
  CHECK(d.annotations()[0].tip == Point2d(320, 240));
  CHECK(d.frame() == FrameSize{640, 480});
}

TEST_CASE("parse_annotations accepts decimals, CRLF, comments and no trailing newline") {
  const Dataset d = parse_annotations(
      "# exported\r\nvideo_id,frame_index,x,y\r\nv1,0,0.5,479.75\r\n\r\nv2,600,639.999,0");
  REQUIRE(d.size() == 2);
  CHECK(d.annotations()[0].tip == Point2d(0.5, 479.75));
  CHECK(d.video_ids() == std::vector<std::string>{"v1", "v2"});
}

TEST_CASE("parse_annotations rejects bad rows with their row number") {
  CHECK(error_of(header() + "v1,300,640,240\n").find("row 2: x out of bounds") !=
        std::string::npos);
  CHECK(error_of(header() + "v1,300,1,480\n").find("y out of bounds") !=
        std::string::npos);
  CHECK(error_of(header() + "v1,300,-0.5,4\n").find("x out of bounds") !=
        std::string::npos);
  const auto dup = error_of(header() + "v1,300,1,1\nv1,300,2,2\n");
  CHECK(dup.find("row 3") != std::string::npos);
  CHECK(dup.find("duplicate") != std::string::npos);
  CHECK(error_of(header() + "v1,300,1\n").find("row 2") != std::string::npos);
  CHECK(error_of(header() + "v1,-3,1,1\n").find("frame_index") != std::string::npos);
  CHECK(error_of(header() + "v1,3.5,1,1\n").find("frame_index") != std::string::npos);
  CHECK(error_of(header() + "v1,3,abc,1\n").find("x is not a number") != std::string::npos);
  CHECK(error_of(header() + "v1,3,nan,1\n").find("x is not a number") != std::string::npos);
  CHECK(error_of(header() + ",3,1,1\n").find("empty video_id") != std::string::npos);
  CHECK(error_of("id,frame,x,y\n").find("header") != std::string::npos);
  CHECK(error_of("").find("missing header") != std::string::npos);
}

TEST_CASE("custom frame dimensions bound the coordinates") {
  CHECK_NOTHROW(parse_annotations(header() + "v,0,1000,900\n", {1280, 960}));
  CHECK_THROWS_AS(parse_annotations(header() + "v,0,1000,900\n"), ValidationError);
  CHECK_THROWS_AS(parse_annotations(header(), {0, 10}), ValidationError);
}

TEST_CASE("serialize then parse is the identity") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Dataset d = make_dataset({1 + seed % 5, 3, 2}, seed);
    const Dataset back = parse_annotations(serialize_annotations(d));
    REQUIRE(back.size() == d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(back.annotations()[i].key() == d.annotations()[i].key());
      CHECK(back.annotations()[i].tip == d.annotations()[i].tip);
    }
  }
}

TEST_CASE("Dataset constructor enforces invariants") {
  CHECK_THROWS_AS(Dataset({{"v", 0, Point2d(1, 1)}, {"v", 0, Point2d(2, 2)}}),
                  ValidationError);
  CHECK_THROWS_AS(Dataset({{"v", 0, Point2d(700, 1)}}), ValidationError);
  const Dataset d({{"b", 0, Point2d(1, 1)}, {"a", 0, Point2d(2, 2)}, {"b", 300, Point2d(3, 3)}});
  CHECK(d.video_ids() == std::vector<std::string>{"a", "b"});
  CHECK(d.frames_per_video().at("b") == 2);
  CHECK(d.contains({"b", 300}));
  CHECK_FALSE(d.contains({"b", 600}));
}

TEST_CASE("dataset_stats named examples") {
  const auto one = dataset_stats(Dataset({{"v", 0, Point2d(320, 240)}}));
  CHECK(one.count == 1);
  CHECK(one.x.mean == 320);
  CHECK(one.x.median == 320);
  CHECK(one.x.sd == 0);
  CHECK(one.y.mean == 240);
  CHECK(one.y.median == 240);
  CHECK(one.y.sd == 0);

  const auto two = dataset_stats(
      Dataset({{"v", 0, Point2d(100, 100)}, {"v", 1, Point2d(300, 300)}}));
  CHECK(two.x.mean == 200);
  CHECK(two.y.mean == 200);
  CHECK(two.x.sd == doctest::Approx(141.42135623730951).epsilon(1e-12));
  CHECK(two.y.sd == doctest::Approx(141.42135623730951).epsilon(1e-12));
  CHECK(two.x.median == 100);  // lower middle

  CHECK_THROWS_AS(dataset_stats(Dataset{}), ValidationError);
}

TEST_CASE("dataset_stats agrees with streaming and counting oracles") {
  Rng sizes(77);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const std::size_t n = seed == 0 ? 50 : 1 + sizes.below(60);
    const Dataset d = make_dataset({n}, seed + 1000);
    const CoordStats s = dataset_stats(d);
    oracle::Welford wx, wy;
    std::vector<double> xs, ys;
    for (const auto& a : d.annotations()) {
      wx.push(a.tip.x());
      wy.push(a.tip.y());
      xs.push_back(a.tip.x());
      ys.push_back(a.tip.y());
    }
    REQUIRE(s.count == n);
    CHECK(std::abs(s.x.mean - wx.mean) < 1e-9);
    CHECK(std::abs(s.y.mean - wy.mean) < 1e-9);
    CHECK(std::abs(s.x.sd - wx.sd()) < 1e-9);
    CHECK(std::abs(s.y.sd - wy.sd()) < 1e-9);
    CHECK(s.x.median == oracle::lower_median_by_counting(xs));
    CHECK(s.y.median == oracle::lower_median_by_counting(ys));
    CHECK(s.x.min <= s.x.median);
    CHECK(s.x.median <= s.x.max);
    CHECK(s.y.min <= s.y.median);
    CHECK(s.y.median <= s.y.max);
  }
}

TEST_CASE("split_random assigns 7/1/1 videos deterministically") {
  const Dataset d = make_dataset({10, 20, 30, 40, 50, 60, 70, 80, 90}, 3);
  const SplitPlan a = split_random(d, 12345);
  CHECK(a.train.size() == 7);
  CHECK(a.val.size() == 1);
  CHECK(a.test.size() == 1);
  CHECK(a.seed == 12345);
  CHECK(split_random(d, 12345) == a);
  CHECK(to_json(split_random(d, 12345)).dump() == to_json(a).dump());
  CHECK_NOTHROW(validate_split(a, d));

  const std::size_t total = frames_in(d, a, Role::Train).size() +
                            frames_in(d, a, Role::Val).size() +
                            frames_in(d, a, Role::Test).size();
  CHECK(total == d.size());
  // Group frame counts are the sums of their videos' counts.
  const auto per_video = d.frames_per_video();
  std::size_t train = 0;
  for (const auto& v : a.train) train += per_video.at(v);
  CHECK(frames_in(d, a, Role::Train).size() == train);

  const Dataset eight = make_dataset({1, 1, 1, 1, 1, 1, 1, 1}, 3);
  CHECK_THROWS_AS(split_random(eight, 1), ValidationError);
}

TEST_CASE("split_random is a partition for every seed") {
  const Dataset d = make_dataset({3, 1, 4, 1, 5, 9, 2, 6, 5}, 8);
  std::set<std::string> test_videos;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const SplitPlan p = split_random(d, seed);
    std::set<std::string> all;
    for (Role r : {Role::Train, Role::Val, Role::Test})
      for (const auto& v : p.videos(r)) CHECK(all.insert(v).second);
    CHECK(all.size() == 9);
    test_videos.insert(p.test[0]);
  }
  CHECK(test_videos.size() > 1);
}

TEST_CASE("cv_folds rotates test and validation videos") {
  const Dataset d = make_dataset({5, 6, 7, 8, 9, 10, 11, 12, 13}, 4);
  const auto folds = cv_folds(d, 9);
  REQUIRE(folds.size() == 9);
  CHECK(folds[0].test == std::vector<std::string>{"a"});
  CHECK(folds[0].val == std::vector<std::string>{"b"});
  CHECK(folds[0].train == std::vector<std::string>{"c", "d", "e", "f", "g", "h", "i"});
  CHECK(folds[8].test == std::vector<std::string>{"i"});
  CHECK(folds[8].val == std::vector<std::string>{"a"});
  std::map<std::string, int> as_test, as_val;
  for (const auto& f : folds) {
    CHECK_NOTHROW(validate_split(f, d));
    ++as_test[f.test[0]];
    ++as_val[f.val[0]];
    CHECK(frames_in(d, f, Role::Train).size() + frames_in(d, f, Role::Val).size() +
              frames_in(d, f, Role::Test).size() ==
          d.size());
  }
  for (const auto& v : d.video_ids()) {
    CHECK(as_test[v] == 1);
    CHECK(as_val[v] == 1);
  }
  CHECK(folds_to_json(cv_folds(d, 9)).dump() == folds_to_json(folds).dump());
  CHECK_THROWS_AS(cv_folds(make_dataset({1, 1, 1}, 1), 9), ValidationError);
}

TEST_CASE("validate_split catches overlaps, gaps and empty groups") {
  const Dataset d = make_dataset({1, 1, 1}, 1);
  CHECK_NOTHROW(validate_split({{"a"}, {"b"}, {"c"}, 0}, d));
  CHECK_THROWS_AS(validate_split({{"a", "b"}, {"b"}, {"c"}, 0}, d), ValidationError);
  CHECK_THROWS_AS(validate_split({{"a"}, {"b"}, {}, 0}, d), ValidationError);
  CHECK_THROWS_AS(validate_split({{"a"}, {"b"}, {"z"}, 0}, d), ValidationError);
}

TEST_CASE("split JSON round trip and errors") {
  const SplitPlan p{{"a", "b"}, {"c"}, {"d"}, 99};
  CHECK(split_from_json(to_json(p)) == p);
  CHECK_THROWS_AS(split_from_json(nlohmann::json{{"train", 3}}), ValidationError);
  CHECK(parse_role("val") == Role::Val);
  CHECK_THROWS_AS(parse_role("all"), ValidationError);
}
