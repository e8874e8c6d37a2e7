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

// Seeded synthetic leagues with latent team strengths, written in the same
// file layouts the ingest module reads.

#ifndef TALLYRANK_SYNTHETIC_HPP_
#define TALLYRANK_SYNTHETIC_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tallyrank/config.hpp"
#include "tallyrank/core.hpp"
#include "tallyrank/ingest.hpp"
#include "tallyrank/ranker.hpp"

namespace tallyrank::synth {

struct SyntheticLeagueSpec {
  Sport sport = Sport::kRugby;
  // Per pool: the league has `teams` teams for rugby, 2 * `teams` for
  // basketball.
  int teams = 15;
  int seasons = 4;
  SeasonId first_season = 2016;
  // Each repeat schedules every ordered (home, away) pair once.
  int round_robin_repeats = 1;
  double strength_sd = 1.0;
  // Correlation of a team's strength between consecutive seasons.
  double persistence = 0.8;
  // Standard deviation of the per-feature noise on seasonal stats.
  double feature_noise = 0.5;
  // Extra per-game noise on basketball box scores.
  double box_score_noise = 1.0;
  // Logistic temperature of the outcome model; 0 means the stronger side
  // always wins.
  double outcome_scale = 1.0;
  double home_advantage = 0.0;
  std::uint64_t seed = 0;

  void Validate() const;
  static SyntheticLeagueSpec FromConfig(const config::KeyValueConfig& cfg);
  config::KeyValueConfig ToConfig() const;
};

struct SyntheticLeague {
  SyntheticLeagueSpec spec;
  ingest::LeagueData data;
  // Latent strength per season and team.
  std::map<SeasonId, std::map<TeamId, double>> strengths;
  // Serialized ingest files keyed by file name.
  std::map<std::string, std::string> files;

  // Standings by descending latent strength; the tally column holds the
  // strength.
  ranker::Standings StrengthOrder(SeasonId season) const;
};

inline constexpr const char* kStrengthSuffix = "strength";

std::string StandingsFileName(Sport sport, SeasonId season,
                              const std::string& suffix);

SyntheticLeague Generate(const SyntheticLeagueSpec& spec);

// Writes the ingest files, conferences.csv for basketball, the strength
// standings per season and spec.cfg.
void WriteLeague(const SyntheticLeague& league, const std::string& directory);

}  // namespace tallyrank::synth

#endif  // TALLYRANK_SYNTHETIC_HPP_
