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

// Record written next to every command's output: enough to re-run the
// command and check that its inputs are unchanged.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace tipbench {

struct FileDigest {
  std::string path;
  std::string sha256;
};

struct RunManifest {
  std::string command;
  std::vector<std::string> args;  // full argument vector, program name excluded
  std::string working_directory;
  nlohmann::json resolved_config = nlohmann::json::object();
  nlohmann::json seeds = nlohmann::json::object();
  std::vector<FileDigest> inputs;
  std::vector<FileDigest> outputs;
  std::string toolkit_version;
  std::string timestamp;  // UTC, ISO 8601
};

FileDigest digest_of(const std::filesystem::path& path);

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

void write_manifest(const std::filesystem::path& path, const RunManifest& m);
RunManifest load_manifest(const std::filesystem::path& path);

/// Inputs whose current digest differs from the recorded one (or that are
/// missing), as human-readable messages. Paths resolve against `base`.
std::vector<std::string> verify_inputs(const RunManifest& m,
                                       const std::filesystem::path& base);

std::string utc_timestamp();

}  // namespace tipbench
