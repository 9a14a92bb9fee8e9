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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tipbench {

/// Whole-file read; throws IoError with the path on failure.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file then renames over `path`.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

std::string sha256_hex(std::string_view data);
std::string file_sha256(const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

/// Fixed-decimal presentation; "n/a" for absent values.
std::string format_fixed(double value, int decimals);
std::string format_fixed(const std::optional<double>& value, int decimals);

/// Three-decimal presentation ("0.733"), the table convention.
std::string format3(double value);

std::string format3(const std::optional<double>& value);

std::vector<std::string_view> split_fields(std::string_view line, char sep);

std::string_view trim(std::string_view s);

/// Strict full-field numeric parses; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

}  // namespace tipbench
