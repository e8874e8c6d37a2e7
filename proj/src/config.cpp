// Copyright 2026 The tallyrank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tallyrank/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tallyrank/core.hpp"
#include "tallyrank/csv.hpp"

namespace tallyrank::config {

namespace fs = std::filesystem;

KeyValueConfig KeyValueConfig::Parse(std::string_view text,
                                     const std::string& path) {
  KeyValueConfig cfg;
  cfg.source_ = path;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = csv::Trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(path, line_no, "expected 'key = value'");
    }
    const auto key = csv::Trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(path, line_no, "empty key");
    cfg.values_[std::string(key)] = std::string(csv::Trim(line.substr(eq + 1)));
    if (end == text.size()) break;
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::Read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  KeyValueConfig cfg = Parse(text.str(), path);
  cfg.base_directory_ = fs::path(path).parent_path().string();
  return cfg;
}

void KeyValueConfig::Set(const std::string& key, std::string value) {
  values_[key] = std::move(value);
}

std::optional<std::string> KeyValueConfig::GetString(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::GetString(const std::string& key,
                                      const std::string& fallback) const {
  return GetString(key).value_or(fallback);
}

namespace {

[[noreturn]] void Bad(const std::string& source, const std::string& key,
                      const std::string& value, std::string_view want) {
  throw ValidationError(source + ": key '" + key + "' has value '" + value +
                        "', expected " + std::string(want));
}

std::vector<std::string> SplitList(const std::string& value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto comma = value.find(',', start);
    auto item = csv::Trim(std::string_view(value).substr(
        start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

int KeyValueConfig::GetInt(const std::string& key, int fallback) const {
  auto v = GetString(key);
  if (!v) return fallback;
  auto parsed = csv::ParseInt(*v);
  if (!parsed || *parsed < INT32_MIN || *parsed > INT32_MAX) {
    Bad(source_, key, *v, "an integer");
  }
  return static_cast<int>(*parsed);
}

std::uint64_t KeyValueConfig::GetUint64(const std::string& key,
                                        std::uint64_t fallback) const {
  auto v = GetString(key);
  if (!v) return fallback;
  if (v->empty() || v->find_first_not_of("0123456789") != std::string::npos) {
    Bad(source_, key, *v, "a non-negative integer");
  }
  try {
    return std::stoull(*v);
  } catch (const std::exception&) {
    Bad(source_, key, *v, "a 64-bit unsigned integer");
  }
}

double KeyValueConfig::GetDouble(const std::string& key, double fallback) const {
  auto v = GetString(key);
  if (!v) return fallback;
  auto parsed = csv::ParseDouble(*v);
  if (!parsed) Bad(source_, key, *v, "a finite number");
  return *parsed;
}

bool KeyValueConfig::GetBool(const std::string& key, bool fallback) const {
  auto v = GetString(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  Bad(source_, key, *v, "true or false");
}

std::vector<std::string> KeyValueConfig::GetList(
    const std::string& key, const std::vector<std::string>& fallback) const {
  auto v = GetString(key);
  if (!v) return fallback;
  return SplitList(*v);
}

std::vector<double> KeyValueConfig::GetDoubleList(
    const std::string& key, const std::vector<double>& fallback) const {
  auto v = GetString(key);
  if (!v) return fallback;
  std::vector<double> out;
  for (const auto& item : SplitList(*v)) {
    auto parsed = csv::ParseDouble(item);
    if (!parsed) Bad(source_, key, *v, "a comma-separated list of numbers");
    out.push_back(*parsed);
  }
  return out;
}

std::vector<int> KeyValueConfig::GetIntList(const std::string& key,
                                            const std::vector<int>& fallback) const {
  auto v = GetString(key);
  if (!v) return fallback;
  std::vector<int> out;
  for (const auto& item : SplitList(*v)) {
    auto parsed = csv::ParseInt(item);
    if (!parsed) Bad(source_, key, *v, "a comma-separated list of integers");
    out.push_back(static_cast<int>(*parsed));
  }
  return out;
}

std::string KeyValueConfig::GetPath(const std::string& key,
                                    const std::string& fallback) const {
  auto v = GetString(key);
  if (!v) return fallback;
  fs::path p(*v);
  if (p.is_relative() && !base_directory_.empty()) p = fs::path(base_directory_) / p;
  return p.lexically_normal().string();
}

void KeyValueConfig::RequireKnownKeys(const std::set<std::string>& known) const {
  for (const auto& [key, value] : values_) {
    if (!known.count(key)) throw ValidationError(source_ + ": unknown key '" + key + "'");
  }
}

std::string KeyValueConfig::Serialize() const {
  std::string out;
  for (const auto& [key, value] : values_) out += key + " = " + value + "\n";
  return out;
}

}  // namespace tallyrank::config
