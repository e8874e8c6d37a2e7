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

#include "tallyrank/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tallyrank/csv.hpp"
#include "tallyrank/random.hpp"

namespace tallyrank::synth {

namespace fs = std::filesystem;

void SyntheticLeagueSpec::Validate() const {
  if (teams < 2) throw ValidationError("synthetic league needs >= 2 teams per pool");
  if (teams > 999) throw ValidationError("synthetic league supports <= 999 teams per pool");
  if (seasons < 2) throw ValidationError("synthetic league needs >= 2 seasons");
  if (first_season < 1000 || first_season + seasons - 1 > 9999) {
    throw ValidationError("synthetic season ids must be four-digit years");
  }
  if (round_robin_repeats < 1) throw ValidationError("round robin repeats must be >= 1");
  if (!(strength_sd >= 0.0)) throw ValidationError("strength sd must be >= 0");
  if (!(persistence >= -1.0 && persistence <= 1.0)) {
    throw ValidationError("persistence must lie in [-1, 1]");
  }
  if (!(feature_noise >= 0.0) || !(box_score_noise >= 0.0)) {
    throw ValidationError("noise levels must be >= 0");
  }
  if (!(outcome_scale >= 0.0)) throw ValidationError("outcome scale must be >= 0");
  if (!std::isfinite(home_advantage)) throw ValidationError("home advantage must be finite");
}

SyntheticLeagueSpec SyntheticLeagueSpec::FromConfig(const config::KeyValueConfig& cfg) {
  cfg.RequireKnownKeys({"sport", "teams", "seasons", "first_season",
                        "round_robin_repeats", "strength_sd", "persistence",
                        "feature_noise", "box_score_noise", "outcome_scale",
                        "home_advantage", "seed"});
  SyntheticLeagueSpec s;
  s.sport = ParseSport(cfg.GetString("sport", "rugby"));
  s.teams = cfg.GetInt("teams", s.teams);
  s.seasons = cfg.GetInt("seasons", s.seasons);
  s.first_season = cfg.GetInt("first_season", s.first_season);
  s.round_robin_repeats = cfg.GetInt("round_robin_repeats", s.round_robin_repeats);
  s.strength_sd = cfg.GetDouble("strength_sd", s.strength_sd);
  s.persistence = cfg.GetDouble("persistence", s.persistence);
  s.feature_noise = cfg.GetDouble("feature_noise", s.feature_noise);
  s.box_score_noise = cfg.GetDouble("box_score_noise", s.box_score_noise);
  s.outcome_scale = cfg.GetDouble("outcome_scale", s.outcome_scale);
  s.home_advantage = cfg.GetDouble("home_advantage", s.home_advantage);
  s.seed = cfg.GetUint64("seed", s.seed);
  s.Validate();
  return s;
}

config::KeyValueConfig SyntheticLeagueSpec::ToConfig() const {
  config::KeyValueConfig cfg;
  cfg.Set("sport", std::string(ToString(sport)));
  cfg.Set("teams", std::to_string(teams));
  cfg.Set("seasons", std::to_string(seasons));
  cfg.Set("first_season", std::to_string(first_season));
  cfg.Set("round_robin_repeats", std::to_string(round_robin_repeats));
  cfg.Set("strength_sd", csv::FormatDouble(strength_sd));
  cfg.Set("persistence", csv::FormatDouble(persistence));
  cfg.Set("feature_noise", csv::FormatDouble(feature_noise));
  cfg.Set("box_score_noise", csv::FormatDouble(box_score_noise));
  cfg.Set("outcome_scale", csv::FormatDouble(outcome_scale));
  cfg.Set("home_advantage", csv::FormatDouble(home_advantage));
  cfg.Set("seed", std::to_string(seed));
  return cfg;
}

ranker::Standings SyntheticLeague::StrengthOrder(SeasonId season) const {
  auto it = strengths.find(season);
  if (it == strengths.end()) {
    throw ValidationError("synthetic league has no season " + std::to_string(season));
  }
  return ranker::StandingsFromTally(it->second, "strength");
}

std::string StandingsFileName(Sport sport, SeasonId season,
                              const std::string& suffix) {
  return std::string(ToString(sport)) + "_" + std::to_string(season) + "_" +
         suffix + ".csv";
}

namespace {

std::string TeamName(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "T%02d", index + 1);
  return buf;
}

// Per feature: a base level, a signed loading on strength and a spread.
struct FeatureModel {
  double offset;
  double loading;
};

std::vector<FeatureModel> DrawFeatureModels(std::size_t count, random::Engine& rng) {
  std::vector<FeatureModel> out;
  for (std::size_t k = 0; k < count; ++k) {
    const double sign = random::Bernoulli(rng, 0.5) ? 1.0 : -1.0;
    out.push_back({random::Uniform(rng, 5.0, 50.0),
                   sign * random::Uniform(rng, 0.5, 1.5)});
  }
  return out;
}

bool HomeWins(double home, double away, const SyntheticLeagueSpec& spec,
              random::Engine& rng) {
  const double margin = home - away + spec.home_advantage;
  if (spec.outcome_scale == 0.0) return margin >= 0.0;
  const double p = 1.0 / (1.0 + std::exp(-margin / spec.outcome_scale));
  return random::Bernoulli(rng, p);
}

}  // namespace

SyntheticLeague Generate(const SyntheticLeagueSpec& spec) {
  spec.Validate();
  SyntheticLeague league;
  league.spec = spec;
  random::Engine rng(spec.seed);

  const int pools = spec.sport == Sport::kBasketball ? 2 : 1;
  const int n = spec.teams * pools;
  std::vector<TeamId> teams;
  for (int i = 0; i < n; ++i) teams.push_back(TeamName(i));

  ingest::LeagueConfig cfg;
  cfg.sport = spec.sport;
  cfg.pool_size = spec.teams;
  cfg.metric_cutoff_k = std::min(15, spec.teams);
  cfg.playoff_cutoff = std::min(8, spec.teams);
  for (int i = 0; i < n; ++i) {
    Conference c = Conference::kNone;
    if (pools == 2) c = i < spec.teams ? Conference::kEast : Conference::kWest;
    cfg.conferences[teams[i]] = c;
  }

  const std::size_t width = spec.sport == Sport::kRugby
                                ? ingest::kRugbyFeatureNames.size()
                                : ingest::kNbaBoxScoreNames.size();
  const auto features = DrawFeatureModels(width, rng);

  std::vector<double> strength(n);
  for (double& s : strength) s = spec.strength_sd * random::Normal(rng);
  const double innovation = std::sqrt(std::max(0.0, 1.0 - spec.persistence * spec.persistence));

  for (int si = 0; si < spec.seasons; ++si) {
    const SeasonId season = spec.first_season + si;
    if (si > 0) {
      for (double& s : strength) {
        s = spec.persistence * s + innovation * spec.strength_sd * random::Normal(rng);
      }
    }
    auto& season_strength = league.strengths[season];
    for (int i = 0; i < n; ++i) season_strength[teams[i]] = strength[i];

    // Seasonal stat means.
    std::vector<std::vector<double>> means(n, std::vector<double>(width));
    for (int i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < width; ++k) {
        means[i][k] = features[k].offset + features[k].loading * strength[i] +
                      spec.feature_noise * random::Normal(rng);
      }
    }

    ingest::ParsedFragment games;
    games.schema = spec.sport == Sport::kRugby ? ingest::Schema::kRugbyGames
                                               : ingest::Schema::kNbaGames;
    int game_index = 1;
    for (int r = 0; r < spec.round_robin_repeats; ++r) {
      for (int h = 0; h < n; ++h) {
        for (int a = 0; a < n; ++a) {
          if (h == a) continue;
          ingest::GameRecord g;
          g.season_id = season;
          g.game_index = game_index++;
          g.home_team = teams[h];
          g.away_team = teams[a];
          g.home_won = HomeWins(strength[h], strength[a], spec, rng);
          games.games.push_back(g);
          if (spec.sport == Sport::kBasketball) {
            ingest::BoxScoreRow box;
            box.game_index = g.game_index;
            for (std::size_t k = 0; k < width; ++k) {
              box.home.push_back(means[h][k] + spec.box_score_noise * random::Normal(rng));
              box.away.push_back(means[a][k] + spec.box_score_noise * random::Normal(rng));
            }
            games.box_scores.push_back(std::move(box));
          }
        }
      }
    }

    ingest::SeasonDataset ds;
    ds.season_id = season;
    ds.league = cfg;
    if (spec.sport == Sport::kRugby) {
      ingest::ParsedFragment stats;
      stats.schema = ingest::Schema::kRugbyStats;
      for (int i = 0; i < n; ++i) {
        ingest::TeamSeasonStats s;
        s.team_id = teams[i];
        s.season_id = season;
        s.features = means[i];
        stats.stats.push_back(std::move(s));
      }
      const auto stats_name = ingest::StatsFileName(spec.sport, season);
      const auto games_name = ingest::GamesFileName(spec.sport, season);
      league.files[stats_name] = ingest::SerializeFragment(stats);
      league.files[games_name] = ingest::SerializeFragment(games);
      // Reparse so the in-memory data is exactly what a reader would see.
      ds.stats = ingest::ParseDatasetText(league.files[stats_name],
                                          ingest::Schema::kRugbyStats, stats_name,
                                          season)
                     .stats;
      ds.games = ingest::ParseDatasetText(league.files[games_name],
                                          ingest::Schema::kRugbyGames, games_name)
                     .games;
    } else {
      const auto name = ingest::StatsFileName(spec.sport, season);
      league.files[name] = ingest::SerializeFragment(games);
      auto parsed = ingest::ParseDatasetText(league.files[name],
                                             ingest::Schema::kNbaGames, name);
      ds.stats = std::move(parsed.stats);
      ds.games = std::move(parsed.games);
    }
    ds.Validate();
    league.data.seasons.push_back(std::move(ds));

    std::ostringstream standings;
    ranker::WriteStandingsCsv(standings, league.StrengthOrder(season));
    league.files[StandingsFileName(spec.sport, season, kStrengthSuffix)] = standings.str();
  }
  league.data.league = cfg;
  cfg.Validate();
  return league;
}

void WriteLeague(const SyntheticLeague& league, const std::string& directory) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw RuntimeError("cannot create " + directory + ": " + ec.message());
  const auto write = [&](const std::string& name, const std::string& text) {
    const auto path = (fs::path(directory) / name).string();
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw RuntimeError("cannot write " + path);
  };
  for (const auto& [name, text] : league.files) write(name, text);
  if (league.spec.sport == Sport::kBasketball) {
    ingest::WriteConferences((fs::path(directory) / "conferences.csv").string(),
                             league.data.league);
  }
  write("spec.cfg", league.spec.ToConfig().Serialize());
}

}  // namespace tallyrank::synth
