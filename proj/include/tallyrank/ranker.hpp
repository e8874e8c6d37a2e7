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

// Tally ranking: per-game scores become season standings.

#ifndef TALLYRANK_RANKER_HPP_
#define TALLYRANK_RANKER_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tallyrank/core.hpp"
#include "tallyrank/ingest.hpp"

namespace tallyrank::ranker {

using TallyBoard = std::map<TeamId, double>;

struct StandingsEntry {
  int rank = 0;
  TeamId team;
  double tally = 0.0;

  bool operator==(const StandingsEntry&) const = default;
};

struct Standings {
  // League or conference label, e.g. "rugby" or "East".
  std::string tag;
  std::vector<StandingsEntry> entries;

  std::size_t size() const { return entries.size(); }
  std::vector<TeamId> Order() const;
  // Ranks 1..n in order without gaps and unique teams; optionally tallies
  // non-increasing.
  void Validate(bool check_tallies = true) const;

  bool operator==(const Standings&) const = default;
};

enum class BaselineKind { kNaivePreviousSeason, kRandomized };

std::string_view ToString(BaselineKind kind);
BaselineKind ParseBaselineKind(std::string_view text);

// Which side of a game gains the score. kActual is a diagnostic mode.
enum class WinnerSource { kPredicted, kActual };

inline constexpr int kRandomTrials = 30;

// Every team in `teams` starts at zero; the game winner gains |score| and
// the loser loses it.
TallyBoard TallyRank(std::span<const ingest::GameRecord> games,
                     std::span<const GameScore> scores,
                     std::span<const TeamId> teams,
                     WinnerSource winner = WinnerSource::kPredicted);

double TallySum(const TallyBoard& board);

// Descending tally, ties by ascending team id.
Standings StandingsFromTally(const TallyBoard& board, std::string tag = "");

// Standings in the given order with zero tallies.
Standings StandingsFromOrder(std::span<const TeamId> order, std::string tag = "");

// Order is preserved inside each conference; ranks restart at 1.
std::pair<Standings, Standings> ConferenceSplit(
    const Standings& standings, const ingest::LeagueConfig& league);

// The previous season's standings as the prediction. Both rosters must match.
Standings NaiveBaseline(const Standings& previous_actual,
                        std::span<const TeamId> test_teams);

std::vector<Standings> RandomizedBaseline(std::span<const TeamId> teams,
                                          int trials, std::uint64_t rng_seed);

// CSV with header rank,team,tally.
void WriteStandingsCsv(std::ostream& out, const Standings& standings);
Standings ParseStandingsCsv(std::string_view text, const std::string& path);
Standings ReadStandingsCsv(const std::string& path);

// CSV with header trial,rank,team,tally; trials are 1-based.
void WriteTrialsCsv(std::ostream& out, std::span<const Standings> trials);

}  // namespace tallyrank::ranker

#endif  // TALLYRANK_RANKER_HPP_
