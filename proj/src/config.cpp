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
#include "tipbench/config.hpp"

#include "tipbench/errors.hpp"
#include "tipbench/io.hpp"

namespace tipbench {

KeyValueConfig KeyValueConfig::parse(std::string_view text,
                                     const std::string& origin) {
  KeyValueConfig cfg;
  cfg.origin_ = origin;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ValidationError(origin + " line " + std::to_string(line_no) +
                            ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty())
      throw ValidationError(origin + " line " + std::to_string(line_no) +
                            ": empty key");
    if (!cfg.values_.emplace(key, std::string(trim(line.substr(eq + 1))))
             .second)
      throw ValidationError(origin + " line " + std::to_string(line_no) +
                            ": duplicate key '" + key + "'");
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  return parse(read_file(path), path.string());
}

void KeyValueConfig::set(const std::string& key, std::string value) {
  values_[key] = std::move(value);
}

std::string KeyValueConfig::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end())
    throw ValidationError(origin_ + ": missing required key '" + key + "'");
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
  const auto v = parse_double(get_string(key));
  if (!v)
    throw ValidationError(origin_ + ": '" + key + "' is not a number");
  return *v;
}

double KeyValueConfig::get_double(const std::string& key,
                                  double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::int64_t KeyValueConfig::get_int(const std::string& key) const {
  const auto v = parse_int(get_string(key));
  if (!v)
    throw ValidationError(origin_ + ": '" + key + "' is not an integer");
  return *v;
}

std::int64_t KeyValueConfig::get_int(const std::string& key,
                                     std::int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key,
                                      std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const auto text = get_string(key);
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used);
    if (used == text.size() && text.front() != '-') return v;
  } catch (const std::exception&) {
  }
  throw ValidationError(origin_ + ": '" + key +
                        "' is not an unsigned integer");
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto v = get_string(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError(origin_ + ": '" + key + "' is not a boolean");
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (auto field : split_fields(get_string(key), ',')) {
    const auto v = parse_double(field);
    if (!v)
      throw ValidationError(origin_ + ": '" + key +
                            "' must be a comma-separated list of numbers");
    out.push_back(*v);
  }
  return out;
}

std::map<std::string, std::string> KeyValueConfig::with_prefix(
    const std::string& prefix) const {
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : values_)
    if (k.size() > prefix.size() && k.compare(0, prefix.size(), prefix) == 0)
      out.emplace(k.substr(prefix.size()), v);
  return out;
}

std::string KeyValueConfig::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

}  // namespace tipbench
