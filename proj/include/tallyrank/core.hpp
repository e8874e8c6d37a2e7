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

#ifndef TALLYRANK_CORE_HPP_
#define TALLYRANK_CORE_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tallyrank {

using TeamId = std::string;
using SeasonId = int;

enum class Sport { kBasketball, kRugby };
enum class Conference { kNone, kEast, kWest };

std::string_view ToString(Sport sport);
std::string_view ToString(Conference conference);
Sport ParseSport(std::string_view text);
Conference ParseConference(std::string_view text);

// Base of every error thrown by the library. The C API maps ValidationError
// to exit/status code 1 and everything else to 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed files, violated preconditions, inconsistent shapes.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Failure while computing on valid input (non-finite gradients, I/O).
class RuntimeError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ValidationError {
 public:
  ParseError(std::string path, std::size_t row, const std::string& what)
      : ValidationError(path + ":" + std::to_string(row) + ": " + what),
        path_(std::move(path)),
        row_(row) {}

  const std::string& path() const { return path_; }
  // 1-based line number in the file; the header is row 1.
  std::size_t row() const { return row_; }

 private:
  std::string path_;
  std::size_t row_;
};

// Per-game prediction handed to the tally.
struct GameScore {
  int game_index = 0;
  double score = 0.0;
  bool predicted_home_win = true;
};

// Ties (score == 0) go to the home side.
inline GameScore MakeGameScore(int game_index, double score) {
  return GameScore{game_index, score, score >= 0.0};
}

}  // namespace tallyrank

#endif  // TALLYRANK_CORE_HPP_
