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

// Key-value configuration files.
//
//   # comment
//   key = value
//
// Keys are case sensitive; later lines override earlier ones.

#ifndef TALLYRANK_CONFIG_HPP_
#define TALLYRANK_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace tallyrank::config {

class KeyValueConfig {
 public:
  static KeyValueConfig Parse(std::string_view text, const std::string& path);
  static KeyValueConfig Read(const std::string& path);

  bool Has(const std::string& key) const { return values_.count(key) > 0; }
  void Set(const std::string& key, std::string value);
  const std::map<std::string, std::string>& values() const { return values_; }
  // Directory of the file this came from; empty for in-memory configs.
  const std::string& base_directory() const { return base_directory_; }
  void set_base_directory(std::string dir) { base_directory_ = std::move(dir); }

  std::string GetString(const std::string& key, const std::string& fallback) const;
  std::optional<std::string> GetString(const std::string& key) const;
  int GetInt(const std::string& key, int fallback) const;
  std::uint64_t GetUint64(const std::string& key, std::uint64_t fallback) const;
  double GetDouble(const std::string& key, double fallback) const;
  bool GetBool(const std::string& key, bool fallback) const;
  std::vector<std::string> GetList(const std::string& key,
                                   const std::vector<std::string>& fallback) const;
  std::vector<double> GetDoubleList(const std::string& key,
                                    const std::vector<double>& fallback) const;
  std::vector<int> GetIntList(const std::string& key,
                              const std::vector<int>& fallback) const;
  // Resolves a path value relative to base_directory().
  std::string GetPath(const std::string& key, const std::string& fallback) const;

  // Throws ValidationError naming the first key outside `known`.
  void RequireKnownKeys(const std::set<std::string>& known) const;

  std::string Serialize() const;

 private:
  std::string source_ = "<config>";
  std::string base_directory_;
  std::map<std::string, std::string> values_;
};

}  // namespace tallyrank::config

#endif  // TALLYRANK_CONFIG_HPP_
