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
#include "tipbench/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tipbench/errors.hpp"
#include "tipbench/io.hpp"
#include "tipbench/rng.hpp"

namespace tipbench {

std::string to_string(const FrameKey& key) {
  return key.video_id + "#" + std::to_string(key.frame_index);
}

Dataset::Dataset(std::vector<TipAnnotation> annotations, FrameSize frame)
    : rows_(std::move(annotations)), frame_(frame) {
  if (frame_.width <= 0 || frame_.height <= 0)
    throw ValidationError("frame dimensions must be positive");
  std::set<std::string> videos;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& a = rows_[i];
    if (a.video_id.empty())
      throw ValidationError("annotation " + std::to_string(i) +
                            ": empty video_id");
    if (a.frame_index < 0)
      throw ValidationError("annotation " + std::to_string(i) +
                            ": negative frame_index");
    if (!in_frame(a.tip, frame_))
      throw ValidationError("annotation " + to_string(a.key()) +
                            ": tip outside frame");
    if (!index_.emplace(a.key(), i).second)
      throw ValidationError("duplicate annotation key " + to_string(a.key()));
    videos.insert(a.video_id);
  }
  videos_.assign(videos.begin(), videos.end());
}

std::map<std::string, std::size_t> Dataset::frames_per_video() const {
  std::map<std::string, std::size_t> counts;
  for (const auto& a : rows_) ++counts[a.video_id];
  return counts;
}

bool Dataset::contains(const FrameKey& key) const {
  return index_.count(key) != 0;
}

namespace {

[[noreturn]] void row_error(std::size_t line, const std::string& what) {
  throw ValidationError("annotations row " + std::to_string(line) + ": " +
                        what);
}

}  // namespace

Dataset parse_annotations(std::string_view text, FrameSize frame) {
  if (frame.width <= 0 || frame.height <= 0)
    throw ValidationError("frame dimensions must be positive");
  std::vector<TipAnnotation> rows;
  std::map<FrameKey, std::size_t> seen;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') {
      if (eol == text.size()) break;
      continue;
    }
    if (!header_seen) {
      if (trim(line) != "video_id,frame_index,x,y")
        row_error(line_no, "expected header 'video_id,frame_index,x,y'");
      header_seen = true;
      continue;
    }
    const auto fields = split_fields(line, ',');
    if (fields.size() != 4)
      row_error(line_no, "expected 4 fields, got " +
                             std::to_string(fields.size()));
    TipAnnotation a;
    a.video_id = std::string(trim(fields[0]));
    if (a.video_id.empty()) row_error(line_no, "empty video_id");
    const auto idx = parse_int(fields[1]);
    if (!idx || *idx < 0)
      row_error(line_no, "frame_index must be a non-negative integer");
    a.frame_index = *idx;
    const auto x = parse_double(fields[2]);
    const auto y = parse_double(fields[3]);
    if (!x) row_error(line_no, "x is not a number");
    if (!y) row_error(line_no, "y is not a number");
    if (*x < 0 || *x >= frame.width)
      row_error(line_no, "x out of bounds [0," + std::to_string(frame.width) +
                             ")");
    if (*y < 0 || *y >= frame.height)
      row_error(line_no, "y out of bounds [0," +
                             std::to_string(frame.height) + ")");
    a.tip = Point2d(*x, *y);
    if (auto [it, fresh] = seen.emplace(a.key(), line_no); !fresh)
      row_error(line_no, "duplicate key " + to_string(a.key()) +
                             " (first seen on row " +
                             std::to_string(it->second) + ")");
    rows.push_back(std::move(a));
    if (eol == text.size()) break;
  }
  if (!header_seen) throw ValidationError("annotations: missing header");
  return Dataset(std::move(rows), frame);
}

Dataset load_annotations(const std::filesystem::path& path, FrameSize frame) {
  return parse_annotations(read_file(path), frame);
}

std::string serialize_annotations(const Dataset& d) {
  std::string out = "video_id,frame_index,x,y\n";
  for (const auto& a : d.annotations()) {
    out += a.video_id;
    out += ',';
    out += std::to_string(a.frame_index);
    out += ',';
    out += format_number(a.tip.x());
    out += ',';
    out += format_number(a.tip.y());
    out += '\n';
  }
  return out;
}

AxisStats axis_stats(std::vector<double> values) {
  if (values.empty()) throw ValidationError("statistics of an empty sample");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  AxisStats s;
  s.mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  std::sort(values.begin(), values.end());
  s.median = values[(values.size() - 1) / 2];
  s.min = values.front();
  s.max = values.back();
  return s;
}

CoordStats dataset_stats(const Dataset& d) {
  if (d.empty()) throw ValidationError("dataset is empty");
  std::vector<double> xs, ys;
  xs.reserve(d.size());
  ys.reserve(d.size());
  for (const auto& a : d.annotations()) {
    xs.push_back(a.tip.x());
    ys.push_back(a.tip.y());
  }
  return {axis_stats(std::move(xs)), axis_stats(std::move(ys)), d.size()};
}

namespace {

nlohmann::json axis_json(const AxisStats& s) {
  return {{"mean", s.mean}, {"median", s.median}, {"sd", s.sd},
          {"min", s.min},   {"max", s.max}};
}

}  // namespace

nlohmann::json to_json(const CoordStats& s) {
  return {{"count", s.count}, {"x", axis_json(s.x)}, {"y", axis_json(s.y)}};
}

std::string to_string(Role r) {
  switch (r) {
    case Role::Train: return "train";
    case Role::Val: return "val";
    case Role::Test: return "test";
  }
  return "?";
}

Role parse_role(const std::string& text) {
  if (text == "train") return Role::Train;
  if (text == "val") return Role::Val;
  if (text == "test") return Role::Test;
  throw ValidationError("unknown role '" + text +
                        "' (expected train, val or test)");
}

const std::vector<std::string>& SplitPlan::videos(Role r) const {
  switch (r) {
    case Role::Train: return train;
    case Role::Val: return val;
    case Role::Test: return test;
  }
  return test;
}

SplitPlan split_random(const Dataset& d, std::uint64_t seed,
                       std::size_t n_train, std::size_t n_val,
                       std::size_t n_test) {
  if (n_train == 0 || n_val == 0 || n_test == 0)
    throw ValidationError("every split group needs at least one video");
  const std::size_t want = n_train + n_val + n_test;
  if (d.video_ids().size() != want)
    throw ValidationError("split needs exactly " + std::to_string(want) +
                          " videos, dataset has " +
                          std::to_string(d.video_ids().size()));
  std::vector<std::string> ids = d.video_ids();
  Rng rng(seed);
  rng.shuffle(ids);
  SplitPlan plan;
  plan.seed = seed;
  plan.train.assign(ids.begin(), ids.begin() + n_train);
  plan.val.assign(ids.begin() + n_train, ids.begin() + n_train + n_val);
  plan.test.assign(ids.begin() + n_train + n_val, ids.end());
  for (auto* group : {&plan.train, &plan.val, &plan.test})
    std::sort(group->begin(), group->end());
  return plan;
}

std::vector<SplitPlan> cv_folds(const Dataset& d, std::size_t k) {
  if (k < 3) throw ValidationError("cross-validation needs k >= 3");
  const auto& ids = d.video_ids();
  if (ids.size() != k)
    throw ValidationError("cross-validation with k=" + std::to_string(k) +
                          " needs exactly " + std::to_string(k) +
                          " videos, dataset has " + std::to_string(ids.size()));
  std::vector<SplitPlan> folds(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t val = (i + 1) % k;
    folds[i].test = {ids[i]};
    folds[i].val = {ids[val]};
    for (std::size_t j = 0; j < k; ++j)
      if (j != i && j != val) folds[i].train.push_back(ids[j]);
  }
  return folds;
}

void validate_split(const SplitPlan& plan, const Dataset& d) {
  std::set<std::string> seen;
  for (Role r : {Role::Train, Role::Val, Role::Test}) {
    const auto& group = plan.videos(r);
    if (group.empty())
      throw ValidationError("split group '" + to_string(r) + "' is empty");
    for (const auto& v : group)
      if (!seen.insert(v).second)
        throw ValidationError("video '" + v +
                              "' appears in more than one split group");
  }
  const std::set<std::string> all(d.video_ids().begin(), d.video_ids().end());
  if (seen != all)
    throw ValidationError(
        "split videos do not match the dataset's video set");
}

std::vector<std::size_t> frames_in(const Dataset& d, const SplitPlan& plan,
                                   Role r) {
  const auto& group = plan.videos(r);
  const std::set<std::string> wanted(group.begin(), group.end());
  std::vector<std::size_t> out;
  const auto& rows = d.annotations();
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (wanted.count(rows[i].video_id)) out.push_back(i);
  return out;
}

nlohmann::json to_json(const SplitPlan& plan) {
  return {{"seed", plan.seed},
          {"train", plan.train},
          {"val", plan.val},
          {"test", plan.test}};
}

SplitPlan split_from_json(const nlohmann::json& j) {
  try {
    SplitPlan p;
    p.seed = j.value("seed", std::uint64_t{0});
    p.train = j.at("train").get<std::vector<std::string>>();
    p.val = j.at("val").get<std::vector<std::string>>();
    p.test = j.at("test").get<std::vector<std::string>>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed split plan: ") + e.what());
  }
}

nlohmann::json folds_to_json(const std::vector<SplitPlan>& folds) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < folds.size(); ++i) {
    auto f = to_json(folds[i]);
    f["fold"] = i;
    arr.push_back(std::move(f));
  }
  return {{"k", folds.size()}, {"folds", arr}};
}

}  // namespace tipbench
