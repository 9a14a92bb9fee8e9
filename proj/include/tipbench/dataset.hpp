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

// Tip-annotated frame datasets: CSV parsing, coordinate statistics and
// video-level partitioning (random 7:1:1 split and rotating CV folds).

#include "json.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tipbench/geometry.hpp"

namespace tipbench {

struct FrameKey {
  std::string video_id;
  std::int64_t frame_index = 0;

  friend auto operator<=>(const FrameKey&, const FrameKey&) = default;
  friend bool operator==(const FrameKey&, const FrameKey&) = default;
};

std::string to_string(const FrameKey& key);

struct TipAnnotation {
  std::string video_id;
  std::int64_t frame_index = 0;
  Point2d tip = Point2d::Zero();

  FrameKey key() const { return {video_id, frame_index}; }
};

/// Validated, immutable collection of annotations. Row order is preserved.
class Dataset {
 public:
  Dataset() = default;

  /// Throws ValidationError on out-of-frame tips or duplicate keys.
  Dataset(std::vector<TipAnnotation> annotations, FrameSize frame = {});

  const std::vector<TipAnnotation>& annotations() const { return rows_; }
  const FrameSize& frame() const { return frame_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  /// Distinct video ids in lexicographic order.
  const std::vector<std::string>& video_ids() const { return videos_; }

  /// Annotation count per video.
  std::map<std::string, std::size_t> frames_per_video() const;

  bool contains(const FrameKey& key) const;

 private:
  std::vector<TipAnnotation> rows_;
  FrameSize frame_;
  std::vector<std::string> videos_;
  std::map<FrameKey, std::size_t> index_;
};

/// Parses `video_id,frame_index,x,y` CSV. Blank lines and lines starting with
/// '#' are skipped. Errors name the 1-based line number (header is line 1).
Dataset parse_annotations(std::string_view text, FrameSize frame = {});

Dataset load_annotations(const std::filesystem::path& path,
                         FrameSize frame = {});

std::string serialize_annotations(const Dataset& d);

struct AxisStats {
  double mean = 0.0;
  double median = 0.0;  // lower middle element for even counts
  double sd = 0.0;      // sample SD, 0 when count == 1
  double min = 0.0;
  double max = 0.0;
};

struct CoordStats {
  AxisStats x;
  AxisStats y;
  std::size_t count = 0;
};

AxisStats axis_stats(std::vector<double> values);

CoordStats dataset_stats(const Dataset& d);

nlohmann::json to_json(const CoordStats& s);

enum class Role { Train, Val, Test };

std::string to_string(Role r);
Role parse_role(const std::string& text);

/// Whole-video assignment to train/val/test. Each list is sorted.
struct SplitPlan {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
  std::uint64_t seed = 0;

  const std::vector<std::string>& videos(Role r) const;

  friend bool operator==(const SplitPlan&, const SplitPlan&) = default;
};

/// Shuffles the sorted video ids with `seed` and assigns them in order to
/// train, val, test. The dataset must have exactly n_train+n_val+n_test
/// videos.
SplitPlan split_random(const Dataset& d, std::uint64_t seed,
                       std::size_t n_train = 7, std::size_t n_val = 1,
                       std::size_t n_test = 1);

/// Fold i tests video i (sorted order), validates on video (i+1) mod k and
/// trains on the rest.
std::vector<SplitPlan> cv_folds(const Dataset& d, std::size_t k = 9);

/// Throws ValidationError unless the plan partitions the dataset's videos
/// into three non-empty, pairwise-disjoint sets.
void validate_split(const SplitPlan& plan, const Dataset& d);

/// Indices (dataset order) of annotations whose video has role `r`.
std::vector<std::size_t> frames_in(const Dataset& d, const SplitPlan& plan,
                                   Role r);

nlohmann::json to_json(const SplitPlan& plan);
SplitPlan split_from_json(const nlohmann::json& j);

nlohmann::json folds_to_json(const std::vector<SplitPlan>& folds);

}  // namespace tipbench
