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
#include "tipbench/manifest.hpp"

#include <chrono>
#include <ctime>

#include "tipbench/errors.hpp"
#include "tipbench/io.hpp"

namespace tipbench {

FileDigest digest_of(const std::filesystem::path& path) {
  return {path.string(), file_sha256(path)};
}

namespace {

nlohmann::json digests_json(const std::vector<FileDigest>& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& d : v) arr.push_back({{"path", d.path}, {"sha256", d.sha256}});
  return arr;
}

std::vector<FileDigest> digests_from(const nlohmann::json& arr) {
  std::vector<FileDigest> out;
  for (const auto& d : arr)
    out.push_back({d.at("path").get<std::string>(),
                   d.at("sha256").get<std::string>()});
  return out;
}

}  // namespace

nlohmann::json to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"args", m.args},
          {"working_directory", m.working_directory},
          {"resolved_config", m.resolved_config},
          {"seeds", m.seeds},
          {"inputs", digests_json(m.inputs)},
          {"outputs", digests_json(m.outputs)},
          {"toolkit_version", m.toolkit_version},
          {"timestamp", m.timestamp}};
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  try {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.args = j.at("args").get<std::vector<std::string>>();
    m.working_directory = j.value("working_directory", std::string());
    m.resolved_config = j.value("resolved_config", nlohmann::json::object());
    m.seeds = j.value("seeds", nlohmann::json::object());
    m.inputs = digests_from(j.at("inputs"));
    m.outputs = digests_from(j.at("outputs"));
    m.toolkit_version = j.value("toolkit_version", std::string());
    m.timestamp = j.value("timestamp", std::string());
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed run manifest: ") + e.what());
  }
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  write_file_atomic(path, to_json(m).dump(2) + "\n");
}

RunManifest load_manifest(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return manifest_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("manifest '" + path.string() + "': " + e.what());
  }
}

std::vector<std::string> verify_inputs(const RunManifest& m,
                                       const std::filesystem::path& base) {
  std::vector<std::string> problems;
  for (const auto& d : m.inputs) {
    std::filesystem::path p(d.path);
    if (p.is_relative()) p = base / p;
    try {
      if (file_sha256(p) != d.sha256)
        problems.push_back("input '" + d.path + "' changed since the run");
    } catch (const IoError&) {
      problems.push_back("input '" + d.path + "' is missing");
    }
  }
  return problems;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace tipbench
