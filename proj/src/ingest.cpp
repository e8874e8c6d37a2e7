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

#include "tallyrank/ingest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "tallyrank/csv.hpp"
#include "tallyrank/random.hpp"

namespace tallyrank::ingest {

namespace fs = std::filesystem;

const std::array<std::string_view, 37> kRugbyFeatureNames = {
    "Total tries scored",
    "Home tries scored",
    "Away tries scored",
    "Tries scored in first half",
    "Tries scored in second half",
    "Total matches played",
    "Tries conceded",
    "Tries conceded at home",
    "Tries conceded whilst away",
    "Four try bonus point",
    "Four try bonus point at home",
    "Four try bonus point whilst away",
    "Lost within seven points",
    "Lost within seven points at home",
    "Lost within seven points whilst away",
    "Opponent four try bonus point",
    "Opponent four try bonus point at home",
    "Opponent four try bonus point away",
    "Opponent lost within seven points",
    "Opponent lost within seven points at home",
    "Opponent lost within seven points away",
    "Yellow cards accumulated",
    "Yellow cards to red cards acquired",
    "Red cards accumulated",
    "Halftime wins",
    "Halftime wins to full time wins",
    "Halftime draws",
    "Halftime draws to full time wins",
    "Half time lose",
    "Half time lose to full time win",
    "Conversions",
    "Penalties",
    "Tackles",
    "Penalties Conceded",
    "Lineouts",
    "Rucks",
    "Scrums",
};

const std::array<std::string_view, 13> kNbaBoxScoreNames = {
    "Field Goals",
    "Field Goals Attempted",
    "Three-Point Shots",
    "Three-Point Shots Attempted",
    "Free Throws",
    "Free Throws Attempted",
    "Offensive Rebounds",
    "Defensive Rebounds",
    "Assists",
    "Steals",
    "Blocks",
    "Turnovers",
    "Total Fouls",
};

std::vector<std::string> NbaFeatureNames() {
  std::vector<std::string> names{std::string(kNbaHomeIndicatorName)};
  for (auto n : kNbaBoxScoreNames) names.emplace_back(n);
  return names;
}

std::vector<std::string> RugbyFeatureNames() {
  return {kRugbyFeatureNames.begin(), kRugbyFeatureNames.end()};
}

std::string_view ToString(Schema schema) {
  switch (schema) {
    case Schema::kRugbyStats:
      return "rugby_stats";
    case Schema::kRugbyGames:
      return "rugby_games";
    case Schema::kNbaGames:
      return "nba_games";
  }
  return "unknown";
}

Schema ParseSchema(std::string_view text) {
  if (text == "rugby_stats") return Schema::kRugbyStats;
  if (text == "rugby_games") return Schema::kRugbyGames;
  if (text == "nba_games") return Schema::kNbaGames;
  throw ValidationError("unknown schema '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// LeagueConfig / SeasonDataset

std::vector<TeamId> LeagueConfig::Teams() const {
  std::vector<TeamId> teams;
  teams.reserve(conferences.size());
  for (const auto& [team, conf] : conferences) teams.push_back(team);
  return teams;
}

std::vector<TeamId> LeagueConfig::TeamsIn(Conference conference) const {
  std::vector<TeamId> teams;
  for (const auto& [team, conf] : conferences) {
    if (conf == conference) teams.push_back(team);
  }
  return teams;
}

std::vector<Conference> LeagueConfig::Pools() const {
  if (sport == Sport::kRugby) return {Conference::kNone};
  return {Conference::kEast, Conference::kWest};
}

void LeagueConfig::Validate() const {
  if (pool_size < 1) throw ValidationError("pool size must be positive");
  if (metric_cutoff_k < 1 || metric_cutoff_k > pool_size) {
    throw ValidationError("metric cutoff k must lie in [1, pool size]");
  }
  if (playoff_cutoff < 0 || playoff_cutoff > pool_size) {
    throw ValidationError("playoff cutoff must lie in [0, pool size]");
  }
  const auto count = [&](Conference c) {
    return static_cast<int>(TeamsIn(c).size());
  };
  if (sport == Sport::kRugby) {
    if (count(Conference::kNone) != static_cast<int>(conferences.size())) {
      throw ValidationError("rugby teams must not carry a conference");
    }
    if (static_cast<int>(conferences.size()) != pool_size) {
      throw ValidationError("rugby pool has " +
                            std::to_string(conferences.size()) +
                            " teams, expected " + std::to_string(pool_size));
    }
    return;
  }
  if (count(Conference::kNone) != 0) {
    throw ValidationError("every basketball team needs a conference");
  }
  for (Conference c : {Conference::kEast, Conference::kWest}) {
    if (count(c) != pool_size) {
      throw ValidationError(std::string(ToString(c)) + " conference has " +
                            std::to_string(count(c)) + " teams, expected " +
                            std::to_string(pool_size));
    }
  }
}

const std::map<TeamId, Conference>& DefaultNbaConferences() {
  static const std::map<TeamId, Conference> table = [] {
    std::map<TeamId, Conference> m;
    for (const char* t : {"ATL", "BOS", "BRK", "CHO", "CHI", "CLE", "DET",
                          "IND", "MIA", "MIL", "NYK", "ORL", "PHI", "TOR",
                          "WAS"}) {
      m[t] = Conference::kEast;
    }
    for (const char* t : {"DAL", "DEN", "GSW", "HOU", "LAC", "LAL", "MEM",
                          "MIN", "NOP", "OKC", "PHO", "POR", "SAC", "SAS",
                          "UTA"}) {
      m[t] = Conference::kWest;
    }
    return m;
  }();
  return table;
}

const TeamSeasonStats& SeasonDataset::StatsFor(const TeamId& team) const {
  for (const auto& s : stats) {
    if (s.team_id == team) return s;
  }
  throw ValidationError("no stats record for team '" + team + "' in season " +
                        std::to_string(season_id));
}

bool SeasonDataset::HasStats(const TeamId& team) const {
  return std::any_of(stats.begin(), stats.end(),
                     [&](const auto& s) { return s.team_id == team; });
}

std::size_t SeasonDataset::FeatureCount() const {
  return stats.empty() ? 0 : stats.front().features.size();
}

void SeasonDataset::Validate() const {
  std::set<TeamId> teams;
  for (const auto& s : stats) {
    if (!teams.insert(s.team_id).second) {
      throw ValidationError("duplicate stats record for team '" + s.team_id +
                            "'");
    }
    if (s.features.size() != FeatureCount() ||
        s.feature_names.size() != s.features.size()) {
      throw ValidationError("inconsistent feature length for team '" +
                            s.team_id + "'");
    }
    if (s.season_id != season_id) {
      throw ValidationError("stats record for '" + s.team_id +
                            "' belongs to another season");
    }
  }
  std::set<int> indices;
  for (const auto& g : games) {
    if (g.home_team == g.away_team) {
      throw ValidationError("game " + std::to_string(g.game_index) +
                            " has the same team on both sides");
    }
    if (!indices.insert(g.game_index).second) {
      throw ValidationError("duplicate game index " +
                            std::to_string(g.game_index));
    }
    for (const auto* t : {&g.home_team, &g.away_team}) {
      if (!teams.count(*t)) {
        throw ValidationError("game " + std::to_string(g.game_index) +
                              " references team '" + *t +
                              "' without a stats record");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

void RequireHeader(const csv::Table& table,
                   const std::vector<std::string>& expected) {
  for (const auto& name : expected) {
    if (!table.Column(name)) {
      throw ParseError(table.path, 1, "missing column '" + name + "'");
    }
  }
  for (const auto& name : table.header) {
    if (std::find(expected.begin(), expected.end(), name) == expected.end()) {
      throw ParseError(table.path, 1, "unexpected column '" + name + "'");
    }
  }
  if (table.header != expected) {
    throw ParseError(table.path, 1, "columns are not in schema order");
  }
}

double NumberAt(const csv::Table& table, std::size_t row, std::size_t col) {
  auto v = csv::ParseDouble(table.rows[row][col]);
  if (!v) {
    throw ParseError(table.path, table.LineOf(row),
                     "non-numeric value '" + table.rows[row][col] +
                         "' in column '" + table.header[col] + "'");
  }
  return *v;
}

int IntAt(const csv::Table& table, std::size_t row, std::size_t col) {
  auto v = csv::ParseInt(table.rows[row][col]);
  if (!v) {
    throw ParseError(table.path, table.LineOf(row),
                     "non-integer value '" + table.rows[row][col] +
                         "' in column '" + table.header[col] + "'");
  }
  return static_cast<int>(*v);
}

bool OutcomeAt(const csv::Table& table, std::size_t row, bool allow_draw) {
  const std::string& cell = table.rows[row][4];
  if (cell == "1" || cell == "true" || cell == "W") return true;
  if (cell == "0" || cell == "false" || cell == "L") return false;
  if (allow_draw && (cell == "D" || cell == "draw")) return true;
  throw ParseError(table.path, table.LineOf(row),
                   "invalid outcome '" + cell + "' in column 'home_won'");
}

std::vector<std::string> GameHeader() {
  return {kGameColumns.begin(), kGameColumns.end()};
}

std::vector<std::string> NbaHeader() {
  auto header = GameHeader();
  for (auto n : kNbaBoxScoreNames) header.push_back("home " + std::string(n));
  for (auto n : kNbaBoxScoreNames) header.push_back("away " + std::string(n));
  return header;
}

std::vector<std::string> RugbyStatsHeader() {
  std::vector<std::string> header{std::string(kRugbyTeamColumn)};
  for (auto n : kRugbyFeatureNames) header.emplace_back(n);
  return header;
}

std::optional<SeasonId> SeasonFromFileName(const std::string& path) {
  static const std::regex pattern(R"(^[a-z_]+?_(\d{4})(_games)?\.csv$)");
  std::smatch m;
  std::string name = fs::path(path).filename().string();
  if (std::regex_match(name, m, pattern)) return std::stoi(m[1].str());
  return std::nullopt;
}

std::vector<GameRecord> ParseGames(const csv::Table& table, bool allow_draw) {
  std::vector<GameRecord> games;
  std::set<std::pair<int, int>> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    GameRecord g;
    g.season_id = IntAt(table, r, 0);
    g.game_index = IntAt(table, r, 1);
    g.home_team = table.rows[r][2];
    g.away_team = table.rows[r][3];
    g.home_won = OutcomeAt(table, r, allow_draw);
    if (g.game_index < 0) {
      throw ParseError(table.path, table.LineOf(r), "negative game_index");
    }
    if (g.home_team.empty() || g.away_team.empty()) {
      throw ParseError(table.path, table.LineOf(r), "empty team id");
    }
    if (g.home_team == g.away_team) {
      throw ParseError(table.path, table.LineOf(r),
                       "home and away team are identical");
    }
    if (!seen.emplace(g.season_id, g.game_index).second) {
      throw ParseError(table.path, table.LineOf(r),
                       "duplicate (season, game_index) (" +
                           std::to_string(g.season_id) + ", " +
                           std::to_string(g.game_index) + ")");
    }
    games.push_back(std::move(g));
  }
  return games;
}

}  // namespace

ParsedFragment ParseDatasetText(std::string_view text, Schema schema,
                                const std::string& path_for_errors,
                                std::optional<SeasonId> season) {
  csv::Table table = csv::Parse(text, path_for_errors);
  ParsedFragment fragment;
  fragment.schema = schema;
  if (table.rows.empty()) {
    throw ParseError(path_for_errors, 2, "no data rows");
  }

  switch (schema) {
    case Schema::kRugbyStats: {
      RequireHeader(table, RugbyStatsHeader());
      if (!season) season = SeasonFromFileName(path_for_errors);
      if (!season) {
        throw ParseError(path_for_errors, 1,
                         "season id not given and not derivable from the "
                         "file name (expected rugby_<season>.csv)");
      }
      const auto names = RugbyFeatureNames();
      std::set<TeamId> seen;
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        TeamSeasonStats s;
        s.team_id = table.rows[r][0];
        if (s.team_id.empty()) {
          throw ParseError(table.path, table.LineOf(r), "empty team name");
        }
        if (!seen.insert(s.team_id).second) {
          throw ParseError(table.path, table.LineOf(r),
                           "duplicate team '" + s.team_id + "'");
        }
        s.season_id = *season;
        s.feature_names = names;
        s.features.reserve(names.size());
        for (std::size_t c = 1; c < table.header.size(); ++c) {
          s.features.push_back(NumberAt(table, r, c));
        }
        fragment.stats.push_back(std::move(s));
      }
      break;
    }
    case Schema::kRugbyGames: {
      RequireHeader(table, GameHeader());
      fragment.games = ParseGames(table, /*allow_draw=*/true);
      break;
    }
    case Schema::kNbaGames: {
      RequireHeader(table, NbaHeader());
      fragment.games = ParseGames(table, /*allow_draw=*/false);
      const std::size_t width = kNbaBoxScoreNames.size();
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        BoxScoreRow row;
        row.game_index = fragment.games[r].game_index;
        for (std::size_t k = 0; k < width; ++k) {
          row.home.push_back(NumberAt(table, r, 5 + k));
          row.away.push_back(NumberAt(table, r, 5 + width + k));
        }
        fragment.box_scores.push_back(std::move(row));
      }
      fragment.stats = AggregateBoxScores(fragment);
      break;
    }
  }
  return fragment;
}

ParsedFragment ParseDataset(const std::string& path, Schema schema,
                            std::optional<SeasonId> season) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseDatasetText(buffer.str(), schema, path, season);
}

std::vector<TeamSeasonStats> AggregateBoxScores(const ParsedFragment& games) {
  struct Accumulator {
    SeasonId season = 0;
    int count = 0;
    std::vector<double> sums;
  };
  const std::size_t width = kNbaBoxScoreNames.size() + 1;
  std::map<TeamId, Accumulator> by_team;
  for (std::size_t i = 0; i < games.games.size(); ++i) {
    const GameRecord& g = games.games[i];
    const BoxScoreRow& box = games.box_scores.at(i);
    for (bool home : {true, false}) {
      auto& acc = by_team[home ? g.home_team : g.away_team];
      if (acc.count == 0) {
        acc.sums.assign(width, 0.0);
        acc.season = g.season_id;
      } else if (acc.season != g.season_id) {
        throw ValidationError("box-score file mixes seasons for team '" +
                              (home ? g.home_team : g.away_team) + "'");
      }
      const auto& side = home ? box.home : box.away;
      acc.sums[0] += home ? 1.0 : 0.0;
      for (std::size_t k = 0; k < side.size(); ++k) acc.sums[k + 1] += side[k];
      ++acc.count;
    }
  }
  const auto names = NbaFeatureNames();
  std::vector<TeamSeasonStats> stats;
  for (auto& [team, acc] : by_team) {
    TeamSeasonStats s;
    s.team_id = team;
    s.season_id = acc.season;
    s.feature_names = names;
    for (double sum : acc.sums) s.features.push_back(sum / acc.count);
    stats.push_back(std::move(s));
  }
  return stats;
}

std::string SerializeFragment(const ParsedFragment& fragment) {
  std::ostringstream out;
  const auto game_fields = [](const GameRecord& g) {
    return std::vector<std::string>{std::to_string(g.season_id),
                                    std::to_string(g.game_index), g.home_team,
                                    g.away_team, g.home_won ? "1" : "0"};
  };
  switch (fragment.schema) {
    case Schema::kRugbyStats:
      out << csv::JoinRow(RugbyStatsHeader()) << '\n';
      for (const auto& s : fragment.stats) {
        std::vector<std::string> row{s.team_id};
        for (double v : s.features) row.push_back(csv::FormatDouble(v));
        out << csv::JoinRow(row) << '\n';
      }
      break;
    case Schema::kRugbyGames:
      out << csv::JoinRow(GameHeader()) << '\n';
      for (const auto& g : fragment.games) {
        out << csv::JoinRow(game_fields(g)) << '\n';
      }
      break;
    case Schema::kNbaGames:
      out << csv::JoinRow(NbaHeader()) << '\n';
      for (std::size_t i = 0; i < fragment.games.size(); ++i) {
        auto row = game_fields(fragment.games[i]);
        for (double v : fragment.box_scores.at(i).home) {
          row.push_back(csv::FormatDouble(v));
        }
        for (double v : fragment.box_scores.at(i).away) {
          row.push_back(csv::FormatDouble(v));
        }
        out << csv::JoinRow(row) << '\n';
      }
      break;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Normalization

NormalizationParams NormalizationParams::Fit(
    std::span<const TeamSeasonStats> stats) {
  NormalizationParams params;
  if (stats.empty()) throw ValidationError("cannot fit normalization on no records");
  const std::size_t width = stats.front().features.size();
  params.ranges.assign(width, {0.0, 0.0});
  for (std::size_t k = 0; k < width; ++k) {
    params.ranges[k] = {stats.front().features[k], stats.front().features[k]};
  }
  for (const auto& s : stats) {
    if (s.features.size() != width) {
      throw ValidationError("feature length mismatch for team '" + s.team_id +
                            "'");
    }
    for (std::size_t k = 0; k < width; ++k) {
      params.ranges[k].first = std::min(params.ranges[k].first, s.features[k]);
      params.ranges[k].second = std::max(params.ranges[k].second, s.features[k]);
    }
  }
  return params;
}

NormalizationParams NormalizationParams::Fit(
    std::span<const SeasonDataset> seasons) {
  std::vector<TeamSeasonStats> all;
  for (const auto& season : seasons) {
    all.insert(all.end(), season.stats.begin(), season.stats.end());
  }
  return Fit(all);
}

std::vector<TeamSeasonStats> Normalize(std::span<const TeamSeasonStats> stats,
                                       const NormalizationParams& params) {
  std::vector<TeamSeasonStats> out(stats.begin(), stats.end());
  for (auto& s : out) {
    if (s.features.size() != params.size()) {
      throw ValidationError("team '" + s.team_id + "' has " +
                            std::to_string(s.features.size()) +
                            " features, normalization expects " +
                            std::to_string(params.size()));
    }
    for (std::size_t k = 0; k < s.features.size(); ++k) {
      const auto [lo, hi] = params.ranges[k];
      s.features[k] = hi > lo ? (s.features[k] - lo) / (hi - lo) : 0.0;
    }
  }
  return out;
}

SeasonDataset Normalize(const SeasonDataset& season,
                        const NormalizationParams& params) {
  SeasonDataset out = season;
  out.stats = Normalize(season.stats, params);
  return out;
}

std::vector<SeasonDataset> Normalize(std::span<const SeasonDataset> seasons,
                                     const NormalizationParams& params) {
  std::vector<SeasonDataset> out;
  out.reserve(seasons.size());
  for (const auto& s : seasons) out.push_back(Normalize(s, params));
  return out;
}

// ---------------------------------------------------------------------------
// Splits

TemporalSplit MakeTemporalSplit(std::vector<SeasonDataset> seasons) {
  if (seasons.size() != 4) {
    throw ValidationError("temporal split needs exactly 4 seasons, got " +
                          std::to_string(seasons.size()));
  }
  for (std::size_t i = 1; i < seasons.size(); ++i) {
    if (seasons[i].season_id <= seasons[i - 1].season_id) {
      throw ValidationError("seasons must be strictly increasing");
    }
  }
  TemporalSplit split;
  split.test = std::move(seasons.back());
  seasons.pop_back();
  split.train = std::move(seasons);
  return split;
}

std::vector<Fold> MakeCvFolds(std::span<const SeasonDataset> train) {
  if (train.size() != 3) {
    throw ValidationError("cross-validation needs exactly 3 training seasons, "
                          "got " + std::to_string(train.size()));
  }
  // Validate on the third, then the second, then the first season.
  std::vector<Fold> folds;
  for (int held_out : {2, 1, 0}) {
    Fold fold;
    for (int i = 0; i < 3; ++i) {
      if (i == held_out) {
        fold.validate = train[i];
      } else {
        fold.train.push_back(train[i]);
      }
    }
    folds.push_back(std::move(fold));
  }
  return folds;
}

// ---------------------------------------------------------------------------
// Pairs and triplets

std::vector<TrainingPair> BuildPairs(const SeasonDataset& dataset) {
  std::vector<TrainingPair> pairs;
  pairs.reserve(dataset.games.size());
  for (const auto& g : dataset.games) {
    pairs.push_back(TrainingPair{dataset.StatsFor(g.home_team).features,
                                 dataset.StatsFor(g.away_team).features,
                                 g.home_won ? 0 : 1});
  }
  return pairs;
}

std::vector<TrainingTriplet> BuildTriplets(const SeasonDataset& dataset,
                                           std::uint64_t rng_seed) {
  std::vector<std::size_t> wins, losses;
  for (std::size_t i = 0; i < dataset.games.size(); ++i) {
    (dataset.games[i].home_won ? wins : losses).push_back(i);
  }
  if (wins.empty() || losses.empty()) {
    throw ValidationError("season " + std::to_string(dataset.season_id) +
                          " has a single outcome class; cannot form triplets");
  }
  std::vector<const std::vector<double>*> home_vectors;
  home_vectors.reserve(dataset.games.size());
  for (const auto& g : dataset.games) {
    home_vectors.push_back(&dataset.StatsFor(g.home_team).features);
  }

  std::mt19937_64 rng(rng_seed);
  const auto draw = [&rng](const std::vector<std::size_t>& pool,
                           std::optional<std::size_t> exclude) {
    // Skip the anchor's own game when the class has other members.
    if (exclude && pool.size() > 1) {
      std::size_t k = random::Index(rng, pool.size() - 1);
      auto self = std::find(pool.begin(), pool.end(), *exclude) - pool.begin();
      if (static_cast<std::ptrdiff_t>(k) >= self) ++k;
      return pool[k];
    }
    return pool[random::Index(rng, pool.size())];
  };

  std::vector<TrainingTriplet> triplets;
  triplets.reserve(dataset.games.size());
  for (std::size_t i = 0; i < dataset.games.size(); ++i) {
    const bool won = dataset.games[i].home_won;
    const auto& same = won ? wins : losses;
    const auto& other = won ? losses : wins;
    std::size_t p = draw(same, i);
    std::size_t n = draw(other, std::nullopt);
    triplets.push_back(TrainingTriplet{*home_vectors[i], *home_vectors[p],
                                       *home_vectors[n]});
  }
  return triplets;
}

// ---------------------------------------------------------------------------
// League directories

std::string StatsFileName(Sport sport, SeasonId season) {
  return std::string(ToString(sport)) + "_" + std::to_string(season) + ".csv";
}

std::string GamesFileName(Sport sport, SeasonId season) {
  if (sport == Sport::kBasketball) return StatsFileName(sport, season);
  return std::string(ToString(sport)) + "_" + std::to_string(season) +
         "_games.csv";
}

std::vector<SeasonId> DiscoverSeasons(Sport sport, const std::string& directory) {
  if (!fs::is_directory(directory)) {
    throw ValidationError("not a directory: " + directory);
  }
  const std::regex pattern("^" + std::string(ToString(sport)) +
                           R"(_(\d{4})\.csv$)");
  std::vector<SeasonId> seasons;
  for (const auto& entry : fs::directory_iterator(directory)) {
    std::smatch m;
    std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && std::regex_match(name, m, pattern)) {
      seasons.push_back(std::stoi(m[1].str()));
    }
  }
  std::sort(seasons.begin(), seasons.end());
  return seasons;
}

std::map<TeamId, Conference> ReadConferences(const std::string& path) {
  csv::Table table = csv::Read(path);
  auto team_col = table.Column("team");
  auto conf_col = table.Column("conference");
  if (!team_col || !conf_col) {
    throw ParseError(path, 1, "expected columns team,conference");
  }
  std::map<TeamId, Conference> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    try {
      out[table.rows[r][*team_col]] = ParseConference(table.rows[r][*conf_col]);
    } catch (const ValidationError& e) {
      throw ParseError(path, table.LineOf(r), e.what());
    }
  }
  return out;
}

void WriteConferences(const std::string& path, const LeagueConfig& league) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeError("cannot write " + path);
  out << "team,conference\n";
  for (const auto& [team, conf] : league.conferences) {
    out << csv::JoinRow({team, std::string(ToString(conf))}) << '\n';
  }
}

LeagueData LoadLeague(Sport sport, const std::string& directory) {
  LeagueData data;
  data.league.sport = sport;
  std::optional<std::map<TeamId, Conference>> conference_table;
  if (sport == Sport::kBasketball) {
    const auto path = fs::path(directory) / "conferences.csv";
    conference_table = fs::exists(path) ? ReadConferences(path.string())
                                        : DefaultNbaConferences();
  }

  for (SeasonId season : DiscoverSeasons(sport, directory)) {
    SeasonDataset ds;
    ds.season_id = season;
    const auto stats_path = (fs::path(directory) / StatsFileName(sport, season)).string();
    if (sport == Sport::kRugby) {
      ds.stats = ParseDataset(stats_path, Schema::kRugbyStats, season).stats;
      const auto games_path =
          (fs::path(directory) / GamesFileName(sport, season)).string();
      ds.games = ParseDataset(games_path, Schema::kRugbyGames).games;
    } else {
      auto fragment = ParseDataset(stats_path, Schema::kNbaGames);
      ds.stats = std::move(fragment.stats);
      ds.games = std::move(fragment.games);
    }
    for (const auto& g : ds.games) {
      if (g.season_id != season) {
        throw ValidationError("game " + std::to_string(g.game_index) +
                              " in season file " + std::to_string(season) +
                              " is tagged season " + std::to_string(g.season_id));
      }
    }
    ds.league.sport = sport;
    for (const auto& s : ds.stats) {
      Conference c = Conference::kNone;
      if (conference_table) {
        auto it = conference_table->find(s.team_id);
        if (it == conference_table->end()) {
          throw ValidationError("no conference known for team '" + s.team_id +
                                "'");
        }
        c = it->second;
      }
      ds.league.conferences[s.team_id] = c;
    }
    ds.Validate();
    data.seasons.push_back(std::move(ds));
  }
  if (data.seasons.empty()) {
    throw ValidationError("no " + std::string(ToString(sport)) +
                          " season files found in " + directory);
  }
  data.league = data.seasons.back().league;
  return data;
}

void WriteStatsTable(const std::string& path,
                     std::span<const TeamSeasonStats> stats) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeError("cannot write " + path);
  std::vector<std::string> header{"season", "team"};
  if (!stats.empty()) {
    header.insert(header.end(), stats.front().feature_names.begin(),
                  stats.front().feature_names.end());
  }
  out << csv::JoinRow(header) << '\n';
  for (const auto& s : stats) {
    std::vector<std::string> row{std::to_string(s.season_id), s.team_id};
    for (double v : s.features) row.push_back(csv::FormatDouble(v));
    out << csv::JoinRow(row) << '\n';
  }
}

void WriteNormalization(const std::string& path,
                        const NormalizationParams& params,
                        std::span<const std::string> feature_names) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeError("cannot write " + path);
  out << "feature,min,max\n";
  for (std::size_t k = 0; k < params.size(); ++k) {
    std::string name = k < feature_names.size() ? feature_names[k]
                                                : "f" + std::to_string(k);
    out << csv::JoinRow({name, csv::FormatDouble(params.ranges[k].first),
                         csv::FormatDouble(params.ranges[k].second)})
        << '\n';
  }
}

NormalizationParams ReadNormalization(const std::string& path) {
  csv::Table table = csv::Read(path);
  if (table.header != std::vector<std::string>{"feature", "min", "max"}) {
    throw ParseError(path, 1, "expected columns feature,min,max");
  }
  NormalizationParams params;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    double lo = NumberAt(table, r, 1);
    double hi = NumberAt(table, r, 2);
    if (hi < lo) throw ParseError(path, table.LineOf(r), "max below min");
    params.ranges.emplace_back(lo, hi);
  }
  return params;
}

}  // namespace tallyrank::ingest
