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

// Dataset ingestion: CSV schemas for the two sports, min-max normalization
// fit on training seasons, the temporal split and its cross-validation
// rotation, and construction of Siamese training pairs and triplets.

#ifndef TALLYRANK_INGEST_HPP_
#define TALLYRANK_INGEST_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tallyrank/core.hpp"

namespace tallyrank::ingest {

enum class Schema { kRugbyStats, kRugbyGames, kNbaGames };

std::string_view ToString(Schema schema);
Schema ParseSchema(std::string_view text);

// Team name column plus 37 seasonal statistics.
inline constexpr std::string_view kRugbyTeamColumn = "Team name";
extern const std::array<std::string_view, 37> kRugbyFeatureNames;

// Box-score columns recorded per side of an NBA game. A team's seasonal
// feature vector is the home indicator followed by these, averaged over its
// games of the season.
extern const std::array<std::string_view, 13> kNbaBoxScoreNames;
inline constexpr std::string_view kNbaHomeIndicatorName = "Home/away team";
std::vector<std::string> NbaFeatureNames();
std::vector<std::string> RugbyFeatureNames();

inline constexpr std::array<std::string_view, 5> kGameColumns = {
    "season", "game_index", "home_team", "away_team", "home_won"};

struct TeamSeasonStats {
  TeamId team_id;
  SeasonId season_id = 0;
  std::vector<double> features;
  std::vector<std::string> feature_names;
};

struct GameRecord {
  SeasonId season_id = 0;
  int game_index = 0;
  TeamId home_team;
  TeamId away_team;
  // Rugby draws are recorded as home wins.
  bool home_won = true;
};

struct LeagueConfig {
  Sport sport = Sport::kRugby;
  std::map<TeamId, Conference> conferences;
  int metric_cutoff_k = 15;
  int playoff_cutoff = 8;
  // Teams per evaluated pool: one pool for rugby, two conferences for
  // basketball.
  int pool_size = 15;

  // Checks the league shape against the team set. Throws ValidationError.
  void Validate() const;
  std::vector<TeamId> Teams() const;
  std::vector<TeamId> TeamsIn(Conference conference) const;
  // Pools evaluated separately: {kNone} for rugby, {kEast, kWest} otherwise.
  std::vector<Conference> Pools() const;
};

// Conference table for the thirty current NBA franchises keyed by the usual
// three-letter abbreviations; used when no conferences file is supplied.
const std::map<TeamId, Conference>& DefaultNbaConferences();

struct SeasonDataset {
  LeagueConfig league;
  SeasonId season_id = 0;
  std::vector<TeamSeasonStats> stats;
  std::vector<GameRecord> games;

  // Throws ValidationError when `team` has no record.
  const TeamSeasonStats& StatsFor(const TeamId& team) const;
  bool HasStats(const TeamId& team) const;
  std::size_t FeatureCount() const;
  // Every game references two distinct teams with stats, game indices are
  // unique, feature vectors share one length.
  void Validate() const;
};

// One side of one NBA game as recorded in the box-score file.
struct BoxScoreRow {
  int game_index = 0;
  std::vector<double> home;
  std::vector<double> away;
};

// Output of parsing one file. Which members are filled depends on the schema.
struct ParsedFragment {
  Schema schema = Schema::kRugbyStats;
  std::vector<TeamSeasonStats> stats;
  std::vector<GameRecord> games;
  std::vector<BoxScoreRow> box_scores;
};

// `season` is required for kRugbyStats (the file carries no season column);
// when omitted it is taken from a `<sport>_<season>.csv` file name.
ParsedFragment ParseDataset(const std::string& path, Schema schema,
                            std::optional<SeasonId> season = std::nullopt);
ParsedFragment ParseDatasetText(std::string_view text, Schema schema,
                                const std::string& path_for_errors,
                                std::optional<SeasonId> season = std::nullopt);

// Writes a fragment back out in its schema. Numbers use the shortest
// round-trip representation.
std::string SerializeFragment(const ParsedFragment& fragment);

// Team seasonal means of the box scores, in NbaFeatureNames() order.
std::vector<TeamSeasonStats> AggregateBoxScores(const ParsedFragment& games);

struct NormalizationParams {
  std::vector<std::pair<double, double>> ranges;  // (min, max) per feature

  static NormalizationParams Fit(std::span<const TeamSeasonStats> stats);
  static NormalizationParams Fit(std::span<const SeasonDataset> seasons);
  std::size_t size() const { return ranges.size(); }
};

// (v - min) / (max - min); constant features map to 0. Values outside the
// fitted range are kept as they are.
std::vector<TeamSeasonStats> Normalize(std::span<const TeamSeasonStats> stats,
                                       const NormalizationParams& params);
SeasonDataset Normalize(const SeasonDataset& season,
                        const NormalizationParams& params);
std::vector<SeasonDataset> Normalize(std::span<const SeasonDataset> seasons,
                                     const NormalizationParams& params);

struct TemporalSplit {
  std::vector<SeasonDataset> train;
  SeasonDataset test;
};

// Exactly four seasons in strictly increasing order: first three train, the
// last one tests.
TemporalSplit MakeTemporalSplit(std::vector<SeasonDataset> seasons);

struct Fold {
  std::vector<SeasonDataset> train;
  SeasonDataset validate;
};

// For training seasons {A, B, C}: ({A,B}, C), ({A,C}, B), ({B,C}, A).
std::vector<Fold> MakeCvFolds(std::span<const SeasonDataset> train);

struct TrainingPair {
  std::vector<double> home;
  std::vector<double> away;
  int label = 0;  // 0 home win, 1 home loss
};

struct TrainingTriplet {
  std::vector<double> anchor;
  std::vector<double> positive;
  std::vector<double> negative;
};

std::vector<TrainingPair> BuildPairs(const SeasonDataset& dataset);

// One triplet per game. The anchor is the game's home-team vector; positive
// and negative are home-team vectors of games drawn uniformly from the same
// and the opposite outcome class.
std::vector<TrainingTriplet> BuildTriplets(const SeasonDataset& dataset,
                                           std::uint64_t rng_seed);

// A whole league directory: `<sport>_<season>.csv` season files (plus
// `rugby_<season>_games.csv` for rugby) and, for basketball, an optional
// `conferences.csv` with columns team,conference.
struct LeagueData {
  LeagueConfig league;
  std::vector<SeasonDataset> seasons;  // ascending season id
};

LeagueData LoadLeague(Sport sport, const std::string& directory);

// Season ids found in `directory` for `sport`, ascending.
std::vector<SeasonId> DiscoverSeasons(Sport sport, const std::string& directory);

std::string StatsFileName(Sport sport, SeasonId season);
std::string GamesFileName(Sport sport, SeasonId season);

void WriteConferences(const std::string& path, const LeagueConfig& league);
std::map<TeamId, Conference> ReadConferences(const std::string& path);

// Writes normalized per-team stats for one season with a `season,team,...`
// header.
void WriteStatsTable(const std::string& path,
                     std::span<const TeamSeasonStats> stats);
void WriteNormalization(const std::string& path,
                        const NormalizationParams& params,
                        std::span<const std::string> feature_names);
NormalizationParams ReadNormalization(const std::string& path);

}  // namespace tallyrank::ingest

#endif  // TALLYRANK_INGEST_HPP_
