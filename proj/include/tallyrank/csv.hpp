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

#ifndef TALLYRANK_CSV_HPP_
#define TALLYRANK_CSV_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tallyrank::csv {

struct Table {
  std::string path;
  std::vector<std::string> header;
  // rows[i] came from line i + 2 of the file.
  std::vector<std::vector<std::string>> rows;

  std::size_t LineOf(std::size_t row_index) const { return row_index + 2; }
  // Index of `name` in the header, or nullopt.
  std::optional<std::size_t> Column(std::string_view name) const;
};

// RFC-4180-ish reader: comma separated, optional double quotes with "" escapes,
// CRLF tolerated, blank lines skipped. Throws ParseError on an empty file or a
// row whose width differs from the header.
Table Read(const std::string& path);
Table Parse(std::string_view text, const std::string& path_for_errors);

std::string EscapeField(std::string_view field);
std::string JoinRow(const std::vector<std::string>& fields);

// Shortest decimal representation that round-trips to the same double.
std::string FormatDouble(double value);
// Fixed-point rendering for human-facing tables.
std::string FormatFixed(double value, int digits);
// Strict parse of a finite double; the whole field must be consumed.
std::optional<double> ParseDouble(std::string_view text);
std::optional<long long> ParseInt(std::string_view text);

std::string_view Trim(std::string_view text);

}  // namespace tallyrank::csv

#endif  // TALLYRANK_CSV_HPP_
