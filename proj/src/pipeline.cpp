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

#include "tallyrank/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <type_traits>
#include <utility>

#include "tallyrank/csv.hpp"
#include "tallyrank/random.hpp"
#include "tallyrank/report.hpp"
#include "tallyrank/synthetic.hpp"

namespace tallyrank::pipeline {

namespace fs = std::filesystem;

namespace {

// Prefixes the stage name to any error while keeping its category.
template <typename F>
auto Stage(std::string_view stage, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const ValidationError& e) {
    throw ValidationError("[" + std::string(stage) + "] " + e.what());
  } catch (const RuntimeError& e) {
    throw RuntimeError("[" + std::string(stage) + "] " + e.what());
  } catch (const std::exception& e) {
    throw RuntimeError("[" + std::string(stage) + "] " + e.what());
  }
}

constexpr std::string_view kGbmNdcg = "gbm_ndcg";
constexpr std::string_view kGbmPairwise = "gbm_pairwise";
constexpr std::string_view kSiameseContrastive = "siamese_contrastive";
constexpr std::string_view kSiameseTriplet = "siamese_triplet";

}  // namespace

// ---------------------------------------------------------------------------
// Models and configuration

ModelSpec ModelSpec::Parse(std::string_view name) {
  ModelSpec spec;
  spec.name = std::string(name);
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto plus = name.find('+', start);
    parts.push_back(name.substr(start, plus == std::string_view::npos
                                           ? std::string_view::npos
                                           : plus - start));
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  const auto bad = [&] {
    return ValidationError("unknown model '" + std::string(name) +
                           "' (expected gbm_ndcg, gbm_pairwise, siamese_contrastive, "
                           "siamese_triplet or gbm_<objective>+siamese_<loss>)");
  };
  if (parts.size() > 2) throw bad();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto part = parts[i];
    if (part == kGbmNdcg || part == kGbmPairwise) {
      if (i != 0 || spec.ranker) throw bad();
      spec.ranker = part == kGbmNdcg ? gbm::Objective::kNdcgScaledPairwise
                                     : gbm::Objective::kPairwiseLogistic;
    } else if (part == kSiameseContrastive || part == kSiameseTriplet) {
      if (spec.siamese) throw bad();
      spec.siamese = part == kSiameseTriplet ? siamese::Loss::kTriplet
                                             : siamese::Loss::kContrastive;
    } else {
      throw bad();
    }
  }
  if (parts.size() == 2 && !(spec.ranker && spec.siamese)) throw bad();
  return spec;
}

std::vector<std::string> ModelSpec::PaperModels() {
  return {"gbm_ndcg",
          "gbm_pairwise",
          "gbm_ndcg+siamese_contrastive",
          "gbm_ndcg+siamese_triplet",
          "gbm_pairwise+siamese_contrastive",
          "gbm_pairwise+siamese_triplet"};
}

std::vector<std::string> ModelSpec::AllModels() {
  auto models = PaperModels();
  models.emplace_back(kSiameseContrastive);
  models.emplace_back(kSiameseTriplet);
  return models;
}

std::vector<HyperParameters> Grid::Points() const {
  std::vector<HyperParameters> points;
  for (double m : margins) {
    for (int d : max_depths) {
      for (double lr : learning_rates) {
        for (int r : rounds) points.push_back({m, d, lr, r});
      }
    }
  }
  return points;
}

namespace {

const std::set<std::string>& KnownKeys() {
  static const std::set<std::string> keys = {
      "sport", "data_dir", "output_dir", "models", "seed",
      "siamese.margin", "siamese.epochs", "siamese.batch_size",
      "siamese.learning_rate", "siamese.rho", "siamese.epsilon",
      "siamese.embedding_tap",
      "gbm.rounds", "gbm.max_depth", "gbm.min_samples_leaf",
      "gbm.learning_rate", "gbm.sigma",
      "tune", "grid.margin", "grid.max_depth", "grid.learning_rate",
      "grid.rounds",
      "standings_suffix", "ndcg_mode", "winner_source",
      "baseline_trials", "baseline_seed", "model_repeats",
      "pool_size", "metric_cutoff_k", "playoff_cutoff"};
  return keys;
}

ranker::WinnerSource ParseWinnerSource(std::string_view text) {
  if (text == "predicted") return ranker::WinnerSource::kPredicted;
  if (text == "actual") return ranker::WinnerSource::kActual;
  throw ValidationError("unknown winner source '" + std::string(text) +
                        "' (expected predicted or actual)");
}

std::string_view ToString(ranker::WinnerSource source) {
  return source == ranker::WinnerSource::kPredicted ? "predicted" : "actual";
}

template <typename T>
std::string JoinNumbers(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += csv::FormatDouble(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::FromConfig(const config::KeyValueConfig& cfg) {
  cfg.RequireKnownKeys(KnownKeys());
  ExperimentConfig c;
  c.sport = ParseSport(cfg.GetString("sport", "rugby"));
  c.data_dir = cfg.GetPath("data_dir", "");
  c.output_dir = cfg.GetPath("output_dir", "");
  c.models = cfg.GetList("models", c.models);
  c.seed = cfg.GetUint64("seed", 0);

  c.siamese.margin = cfg.GetDouble("siamese.margin", c.siamese.margin);
  c.siamese.epochs = cfg.GetInt("siamese.epochs", c.siamese.epochs);
  const int batch = cfg.GetInt("siamese.batch_size", 0);
  if (batch < 0) throw ValidationError("siamese.batch_size must be >= 0");
  c.siamese.batch_size = static_cast<std::size_t>(batch);
  c.siamese.optimizer.learning_rate =
      cfg.GetDouble("siamese.learning_rate", c.siamese.optimizer.learning_rate);
  c.siamese.optimizer.rho = cfg.GetDouble("siamese.rho", c.siamese.optimizer.rho);
  c.siamese.optimizer.epsilon =
      cfg.GetDouble("siamese.epsilon", c.siamese.optimizer.epsilon);
  c.siamese.embedding_tap = siamese::ParseEmbeddingTap(
      cfg.GetString("siamese.embedding_tap",
                    std::string(siamese::ToString(c.siamese.embedding_tap))));

  c.boost.rounds = cfg.GetInt("gbm.rounds", c.boost.rounds);
  c.boost.max_depth = cfg.GetInt("gbm.max_depth", c.boost.max_depth);
  c.boost.min_samples_leaf = cfg.GetInt("gbm.min_samples_leaf", c.boost.min_samples_leaf);
  c.boost.learning_rate = cfg.GetDouble("gbm.learning_rate", c.boost.learning_rate);
  c.boost.sigma = cfg.GetDouble("gbm.sigma", c.boost.sigma);

  c.tune = cfg.GetBool("tune", false);
  c.grid.margins = cfg.GetDoubleList("grid.margin", c.grid.margins);
  c.grid.max_depths = cfg.GetIntList("grid.max_depth", c.grid.max_depths);
  c.grid.learning_rates = cfg.GetDoubleList("grid.learning_rate", c.grid.learning_rates);
  c.grid.rounds = cfg.GetIntList("grid.rounds", c.grid.rounds);

  c.standings_suffix = cfg.GetString("standings_suffix", c.standings_suffix);
  c.ndcg_mode = metrics::ParseNdcgMode(
      cfg.GetString("ndcg_mode", std::string(metrics::ToString(c.ndcg_mode))));
  c.winner_source = ParseWinnerSource(cfg.GetString("winner_source", "predicted"));
  c.baseline_trials = cfg.GetInt("baseline_trials", c.baseline_trials);
  c.baseline_seed = cfg.GetUint64("baseline_seed", c.seed);
  c.model_repeats = cfg.GetInt("model_repeats", c.model_repeats);

  c.pool_size = cfg.GetInt("pool_size", c.pool_size);
  c.metric_cutoff_k = cfg.GetInt("metric_cutoff_k", std::min(15, c.pool_size));
  c.playoff_cutoff = cfg.GetInt("playoff_cutoff", std::min(8, c.pool_size));
  c.Validate();
  return c;
}

ExperimentConfig ExperimentConfig::Load(const std::string& path) {
  return FromConfig(config::KeyValueConfig::Read(path));
}

config::KeyValueConfig ExperimentConfig::ToConfig() const {
  config::KeyValueConfig cfg;
  cfg.Set("sport", std::string(ToString(sport)));
  std::string model_list;
  for (std::size_t i = 0; i < models.size(); ++i) {
    model_list += (i ? "," : "") + models[i];
  }
  cfg.Set("models", model_list);
  cfg.Set("seed", std::to_string(seed));
  cfg.Set("siamese.margin", csv::FormatDouble(siamese.margin));
  cfg.Set("siamese.epochs", std::to_string(siamese.epochs));
  cfg.Set("siamese.batch_size", std::to_string(siamese.batch_size));
  cfg.Set("siamese.learning_rate", csv::FormatDouble(siamese.optimizer.learning_rate));
  cfg.Set("siamese.rho", csv::FormatDouble(siamese.optimizer.rho));
  cfg.Set("siamese.epsilon", csv::FormatDouble(siamese.optimizer.epsilon));
  cfg.Set("siamese.embedding_tap", std::string(siamese::ToString(siamese.embedding_tap)));
  cfg.Set("gbm.rounds", std::to_string(boost.rounds));
  cfg.Set("gbm.max_depth", std::to_string(boost.max_depth));
  cfg.Set("gbm.min_samples_leaf", std::to_string(boost.min_samples_leaf));
  cfg.Set("gbm.learning_rate", csv::FormatDouble(boost.learning_rate));
  cfg.Set("gbm.sigma", csv::FormatDouble(boost.sigma));
  cfg.Set("tune", tune ? "true" : "false");
  cfg.Set("grid.margin", JoinNumbers(grid.margins));
  cfg.Set("grid.max_depth", JoinNumbers(grid.max_depths));
  cfg.Set("grid.learning_rate", JoinNumbers(grid.learning_rates));
  cfg.Set("grid.rounds", JoinNumbers(grid.rounds));
  cfg.Set("standings_suffix", standings_suffix);
  cfg.Set("ndcg_mode", std::string(metrics::ToString(ndcg_mode)));
  cfg.Set("winner_source", std::string(ToString(winner_source)));
  cfg.Set("baseline_trials", std::to_string(baseline_trials));
  cfg.Set("baseline_seed", std::to_string(baseline_seed));
  cfg.Set("model_repeats", std::to_string(model_repeats));
  cfg.Set("pool_size", std::to_string(pool_size));
  cfg.Set("metric_cutoff_k", std::to_string(metric_cutoff_k));
  cfg.Set("playoff_cutoff", std::to_string(playoff_cutoff));
  return cfg;
}

HyperParameters ExperimentConfig::Defaults() const {
  return {siamese.margin, boost.max_depth, boost.learning_rate, boost.rounds};
}

void ExperimentConfig::Validate() const {
  if (models.empty()) throw ValidationError("no models configured");
  std::set<std::string> seen;
  for (const auto& m : models) {
    ModelSpec::Parse(m);
    if (!seen.insert(m).second) throw ValidationError("model '" + m + "' listed twice");
  }
  siamese.Validate();
  boost.Validate();
  if (tune && grid.Points().empty()) throw ValidationError("tuning grid is empty");
  for (const auto& p : grid.Points()) {
    siamese::TrainConfig t = siamese;
    t.margin = p.margin;
    t.Validate();
    gbm::BoostConfig b = boost;
    b.max_depth = p.max_depth;
    b.learning_rate = p.learning_rate;
    b.rounds = p.rounds;
    b.Validate();
  }
  if (standings_suffix.empty() ||
      standings_suffix.find_first_of("/\\") != std::string::npos) {
    throw ValidationError("standings_suffix must be a plain name");
  }
  if (baseline_trials < 1) throw ValidationError("baseline_trials must be >= 1");
  if (model_repeats < 1) throw ValidationError("model_repeats must be >= 1");
  if (pool_size < 1) throw ValidationError("pool_size must be >= 1");
  if (metric_cutoff_k < 1 || metric_cutoff_k > pool_size) {
    throw ValidationError("metric_cutoff_k must lie in [1, pool_size]");
  }
  if (playoff_cutoff < 0 || playoff_cutoff > pool_size) {
    throw ValidationError("playoff_cutoff must lie in [0, pool_size]");
  }
}

// ---------------------------------------------------------------------------
// League preparation

ranker::Standings StandingsFromResults(const ingest::SeasonDataset& season) {
  ranker::TallyBoard wins;
  for (const auto& s : season.stats) wins.emplace(s.team_id, 0.0);
  for (const auto& g : season.games) {
    auto it = wins.find(g.home_won ? g.home_team : g.away_team);
    if (it == wins.end()) {
      throw ValidationError("game " + std::to_string(g.game_index) +
                            " involves a team outside the season roster");
    }
    it->second += 1.0;
  }
  return ranker::StandingsFromTally(wins, "actual");
}

PreparedLeague PrepareLeague(ingest::LeagueData data, const ExperimentConfig& config) {
  return Stage("ingest", [&] {
    PreparedLeague out;
    for (auto& season : data.seasons) {
      season.league.pool_size = config.pool_size;
      season.league.metric_cutoff_k = config.metric_cutoff_k;
      season.league.playoff_cutoff = config.playoff_cutoff;
      try {
        season.league.Validate();
      } catch (const ValidationError& e) {
        throw ValidationError("season " + std::to_string(season.season_id) + ": " +
                              e.what());
      }
    }
    if (data.seasons.empty()) throw ValidationError("league has no seasons");
    data.league = data.seasons.back().league;
    for (const auto& season : data.seasons) {
      std::set<TeamId> roster;
      for (const auto& s : season.stats) roster.insert(s.team_id);
      ranker::Standings actual;
      const auto path = config.data_dir.empty()
                            ? fs::path()
                            : fs::path(config.data_dir) /
                                  synth::StandingsFileName(config.sport, season.season_id,
                                                           config.standings_suffix);
      if (!path.empty() && fs::exists(path)) {
        actual = ranker::ReadStandingsCsv(path.string());
        std::set<TeamId> listed;
        for (const auto& e : actual.entries) listed.insert(e.team);
        if (listed != roster) {
          throw ValidationError(path.string() + ": teams differ from the season roster");
        }
      } else {
        actual = StandingsFromResults(season);
      }
      actual.tag = "actual";
      out.actual[season.season_id] = std::move(actual);
    }
    out.data = std::move(data);
    return out;
  });
}

PreparedLeague PrepareLeague(const ExperimentConfig& config) {
  if (config.data_dir.empty()) throw ValidationError("data_dir is not set");
  ingest::LeagueData data =
      Stage("ingest", [&] { return ingest::LoadLeague(config.sport, config.data_dir); });
  return PrepareLeague(std::move(data), config);
}

// ---------------------------------------------------------------------------
// Model fitting and scoring

namespace {

using Embeddings = std::map<TeamId, std::vector<double>>;

Embeddings EmbedSeason(const TrainedModel& model,
                       const ingest::SeasonDataset& normalized) {
  if (model.siamese) {
    return siamese::EmbedTeams(model.siamese->params, normalized.stats,
                               model.siamese->config.embedding_tap);
  }
  Embeddings out;
  for (const auto& s : normalized.stats) out[s.team_id] = s.features;
  return out;
}

std::vector<double> GameRow(const Embeddings& e, const TeamId& home,
                            const TeamId& away) {
  const auto& h = e.at(home);
  const auto& a = e.at(away);
  std::vector<double> row;
  row.reserve(3 * h.size());
  row.insert(row.end(), h.begin(), h.end());
  row.insert(row.end(), a.begin(), a.end());
  for (std::size_t k = 0; k < h.size(); ++k) row.push_back(std::abs(h[k] - a[k]));
  return row;
}

std::string CacheKey(siamese::Loss loss, const siamese::TrainConfig& tc,
                     std::span<const ingest::SeasonDataset> train) {
  std::string key = std::string(siamese::ToString(loss)) + "|" +
                    std::to_string(tc.rng_seed) + "|" + csv::FormatDouble(tc.margin) +
                    "|" + std::to_string(tc.epochs) + "|" +
                    std::to_string(tc.batch_size) + "|" +
                    std::string(siamese::ToString(tc.embedding_tap)) + "|" +
                    csv::FormatDouble(tc.optimizer.learning_rate) + "|" +
                    csv::FormatDouble(tc.optimizer.rho) + "|" +
                    csv::FormatDouble(tc.optimizer.epsilon);
  for (const auto& s : train) key += "|" + std::to_string(s.season_id);
  return key;
}

siamese::SiameseModel TrainSiamese(siamese::Loss loss, const siamese::TrainConfig& tc,
                                   std::span<const ingest::SeasonDataset> normalized) {
  std::vector<ingest::TrainingPair> pairs;
  for (const auto& s : normalized) {
    auto p = ingest::BuildPairs(s);
    pairs.insert(pairs.end(), std::make_move_iterator(p.begin()),
                 std::make_move_iterator(p.end()));
  }
  siamese::TrainResult result;
  if (loss == siamese::Loss::kContrastive) {
    result = siamese::Train(pairs, tc);
  } else {
    // Triplets are redrawn every epoch.
    const std::uint64_t base = random::Mix(tc.rng_seed, 2);
    siamese::TripletSource source = [&](int epoch) {
      std::vector<ingest::TrainingTriplet> all;
      for (std::size_t s = 0; s < normalized.size(); ++s) {
        auto t = ingest::BuildTriplets(
            normalized[s], random::Mix(base, static_cast<std::uint64_t>(epoch) * 1024 + s));
        all.insert(all.end(), std::make_move_iterator(t.begin()),
                   std::make_move_iterator(t.end()));
      }
      return all;
    };
    result = siamese::Train(source, tc);
  }
  siamese::SiameseModel model;
  model.params = std::move(result.params);
  model.config = tc;
  model.orientation = siamese::Orientation(model.params, pairs);
  model.epoch_losses = std::move(result.epoch_losses);
  return model;
}

}  // namespace

TrainedModel FitModel(const ModelSpec& spec,
                      std::span<const ingest::SeasonDataset> train,
                      const ExperimentConfig& config,
                      const HyperParameters& hyper, std::uint64_t seed,
                      SiameseCache* cache) {
  if (train.empty()) throw ValidationError("no training seasons");
  TrainedModel model;
  model.spec = spec;
  model.hyper = hyper;
  model.normalization = ingest::NormalizationParams::Fit(train);
  if (!train.front().stats.empty()) {
    model.feature_names = train.front().stats.front().feature_names;
  }
  const auto normalized = ingest::Normalize(train, model.normalization);

  if (spec.siamese) {
    siamese::TrainConfig tc = config.siamese;
    tc.loss = *spec.siamese;
    tc.margin = hyper.margin;
    tc.rng_seed = random::Mix(seed, random::HashName(siamese::ToString(tc.loss)));
    tc.Validate();
    const std::string key = CacheKey(tc.loss, tc, train);
    if (cache) {
      auto it = cache->find(key);
      if (it != cache->end()) {
        model.siamese = it->second;
      }
    }
    if (!model.siamese) {
      model.siamese = Stage("siamese", [&] { return TrainSiamese(tc.loss, tc, normalized); });
      if (cache) cache->emplace(key, *model.siamese);
    }
  }

  if (spec.ranker) {
    gbm::BoostConfig bc = config.boost;
    bc.objective = *spec.ranker;
    bc.max_depth = hyper.max_depth;
    bc.learning_rate = hyper.learning_rate;
    bc.rounds = hyper.rounds;
    bc.rng_seed = random::Mix(seed, random::HashName(spec.name));
    std::vector<gbm::QueryGroup> groups;
    for (const auto& season : normalized) {
      const Embeddings e = EmbedSeason(model, season);
      gbm::QueryGroup g;
      g.key = season.season_id;
      for (const auto& game : season.games) {
        g.rows.push_back(GameRow(e, game.home_team, game.away_team));
        g.labels.push_back(game.home_won ? 1.0 : 0.0);
      }
      groups.push_back(std::move(g));
    }
    model.gbm = Stage("gbm", [&] {
      return gbm::BoostFit(gbm::TrainingData::FromGroups(groups), bc);
    });
  }
  return model;
}

std::vector<GameScore> ScoreSeason(const TrainedModel& model,
                                   const ingest::SeasonDataset& season) {
  const auto normalized = ingest::Normalize(season, model.normalization);
  std::vector<GameScore> scores;
  scores.reserve(season.games.size());
  if (model.gbm) {
    const Embeddings e = EmbedSeason(model, normalized);
    for (const auto& g : season.games) {
      // Scoring both orientations cancels the home/away asymmetry of F.
      const double s = model.gbm->Predict(GameRow(e, g.home_team, g.away_team)) -
                       model.gbm->Predict(GameRow(e, g.away_team, g.home_team));
      scores.push_back(MakeGameScore(g.game_index, s));
    }
    return scores;
  }
  if (!model.siamese) throw ValidationError("model has neither a GBM nor a Siamese part");
  const auto& sm = *model.siamese;
  for (const auto& g : season.games) {
    const auto& h = normalized.StatsFor(g.home_team).features;
    const auto& a = normalized.StatsFor(g.away_team).features;
    const double s = sm.orientation *
                     siamese::ScoreGame(sm.params, h, a, sm.config.embedding_tap).score;
    scores.push_back(MakeGameScore(g.game_index, s));
  }
  return scores;
}

Prediction PredictStandings(const TrainedModel& model,
                            const ingest::SeasonDataset& season,
                            ranker::WinnerSource winner) {
  Prediction p;
  const auto scores = ScoreSeason(model, season);
  std::vector<TeamId> teams;
  for (const auto& s : season.stats) teams.push_back(s.team_id);
  p.board = ranker::TallyRank(season.games, scores, teams, winner);
  p.standings = ranker::StandingsFromTally(p.board, model.spec.name);
  return p;
}

// ---------------------------------------------------------------------------
// Model artifacts

void TrainedModel::Save(const std::string& directory) const {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw RuntimeError("cannot create " + directory + ": " + ec.message());
  const auto path = [&](const char* name) { return (fs::path(directory) / name).string(); };
  const auto open = [&](const char* name) {
    std::ofstream out(path(name), std::ios::binary);
    if (!out) throw RuntimeError("cannot write " + path(name));
    return out;
  };
  {
    config::KeyValueConfig cfg;
    cfg.Set("model", spec.name);
    cfg.Set("margin", csv::FormatDouble(hyper.margin));
    cfg.Set("max_depth", std::to_string(hyper.max_depth));
    cfg.Set("learning_rate", csv::FormatDouble(hyper.learning_rate));
    cfg.Set("rounds", std::to_string(hyper.rounds));
    auto out = open("model.cfg");
    out << cfg.Serialize();
  }
  ingest::WriteNormalization(path("normalization.csv"), normalization, feature_names);
  if (siamese) {
    auto out = open("siamese.txt");
    siamese::WriteModel(out, *siamese);
    auto log = open("train_log.csv");
    siamese::WriteTrainingLog(log, siamese->epoch_losses);
  }
  if (gbm) {
    auto out = open("gbm.txt");
    gbm::WriteEnsemble(out, *gbm);
  }
}

TrainedModel TrainedModel::Load(const std::string& directory) {
  const auto path = [&](const char* name) { return (fs::path(directory) / name).string(); };
  if (!fs::exists(path("model.cfg"))) {
    throw ValidationError("no trained model in " + directory + " (run train first)");
  }
  auto cfg = config::KeyValueConfig::Read(path("model.cfg"));
  cfg.RequireKnownKeys({"model", "margin", "max_depth", "learning_rate", "rounds"});
  auto name = cfg.GetString("model");
  if (!name) throw ValidationError(path("model.cfg") + ": missing model name");
  TrainedModel m;
  m.spec = ModelSpec::Parse(*name);
  m.hyper.margin = cfg.GetDouble("margin", m.hyper.margin);
  m.hyper.max_depth = cfg.GetInt("max_depth", m.hyper.max_depth);
  m.hyper.learning_rate = cfg.GetDouble("learning_rate", m.hyper.learning_rate);
  m.hyper.rounds = cfg.GetInt("rounds", m.hyper.rounds);
  m.normalization = ingest::ReadNormalization(path("normalization.csv"));
  for (const auto& row : csv::Read(path("normalization.csv")).rows) m.feature_names.push_back(row[0]);
  const auto open = [&](const char* name) {
    std::ifstream in(path(name), std::ios::binary);
    if (!in) throw ValidationError("missing model file " + path(name));
    return in;
  };
  if (m.spec.siamese) {
    auto in = open("siamese.txt");
    m.siamese = siamese::ReadModel(in);
  }
  if (m.spec.ranker) {
    auto in = open("gbm.txt");
    m.gbm = gbm::ReadEnsemble(in);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Tuning

TuneResult Tune(std::span<const HyperParameters> grid,
                std::span<const ingest::Fold> folds,
                const std::function<double(const HyperParameters&,
                                           const ingest::Fold&)>& score) {
  if (grid.empty()) throw ValidationError("tuning grid is empty");
  if (folds.empty()) throw ValidationError("no folds to tune on");
  TuneResult result;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double sum = 0.0;
    for (const auto& fold : folds) sum += score(grid[i], fold);
    const double mean = sum / static_cast<double>(folds.size());
    result.mean_scores.push_back(mean);
    if (mean > best) {
      best = mean;
      result.best_index = i;
    }
  }
  result.best = grid[result.best_index];
  return result;
}

TuneResult TuneHyperparameters(const ModelSpec& spec,
                               std::span<const ingest::SeasonDataset> train,
                               const PreparedLeague& league,
                               const ExperimentConfig& config,
                               std::uint64_t seed, SiameseCache* cache) {
  return Stage("tune", [&] {
    const auto folds = ingest::MakeCvFolds(train);
    const auto grid = config.grid.Points();
    // Parameters the model does not use are pinned so equivalent points
    // share one evaluation.
    const auto effective = [&](HyperParameters p) {
      if (!spec.siamese) p.margin = grid.front().margin;
      if (!spec.ranker) {
        p.max_depth = grid.front().max_depth;
        p.learning_rate = grid.front().learning_rate;
        p.rounds = grid.front().rounds;
      }
      return p;
    };
    std::map<std::string, double> memo;
    return Tune(grid, folds, [&](const HyperParameters& raw, const ingest::Fold& fold) {
      const HyperParameters p = effective(raw);
      const std::string key = csv::FormatDouble(p.margin) + "|" + std::to_string(p.max_depth) +
                              "|" + csv::FormatDouble(p.learning_rate) + "|" +
                              std::to_string(p.rounds) + "|" +
                              std::to_string(fold.validate.season_id);
      if (auto it = memo.find(key); it != memo.end()) return it->second;
      const auto model = FitModel(spec, fold.train, config, p, seed, cache);
      const auto pred = PredictStandings(model, fold.validate, config.winner_source);
      const double ndcg =
          metrics::Evaluate(pred.standings, league.actual.at(fold.validate.season_id),
                            fold.validate.league, config.ndcg_mode)
              .ndcg;
      memo[key] = ndcg;
      return ndcg;
    });
  });
}

// ---------------------------------------------------------------------------
// Experiment

namespace {

MetricSummary Summarize(const metrics::LeagueMetrics& m) {
  return {m.average_precision, m.spearman, m.ndcg, static_cast<double>(m.playoff_hits)};
}

void MeanAndStd(ReportRow& row, const std::vector<MetricSummary>& runs) {
  const double n = static_cast<double>(runs.size());
  MetricSummary mean, sd;
  for (const auto& r : runs) {
    mean.average_precision += r.average_precision / n;
    mean.spearman += r.spearman / n;
    mean.ndcg += r.ndcg / n;
    mean.playoff_hits += r.playoff_hits / n;
  }
  row.mean = mean;
  row.trials = static_cast<int>(runs.size());
  if (runs.size() < 2) return;
  for (const auto& r : runs) {
    const auto sq = [](double d) { return d * d; };
    sd.average_precision += sq(r.average_precision - mean.average_precision);
    sd.spearman += sq(r.spearman - mean.spearman);
    sd.ndcg += sq(r.ndcg - mean.ndcg);
    sd.playoff_hits += sq(r.playoff_hits - mean.playoff_hits);
  }
  sd.average_precision = std::sqrt(sd.average_precision / (n - 1));
  sd.spearman = std::sqrt(sd.spearman / (n - 1));
  sd.ndcg = std::sqrt(sd.ndcg / (n - 1));
  sd.playoff_hits = std::sqrt(sd.playoff_hits / (n - 1));
  row.stddev = sd;
}

std::vector<TeamId> Roster(const ingest::SeasonDataset& season) {
  std::vector<TeamId> teams;
  for (const auto& s : season.stats) teams.push_back(s.team_id);
  std::sort(teams.begin(), teams.end());
  return teams;
}

}  // namespace

Report RunExperiment(const PreparedLeague& league, const ExperimentConfig& config) {
  config.Validate();
  const auto split = Stage("split", [&] { return ingest::MakeTemporalSplit(league.data.seasons); });
  const auto& test = split.test;
  const auto& actual = league.actual.at(test.season_id);

  Report report;
  report.sport = config.sport;
  report.league = test.league;
  for (const auto& s : split.train) report.train_seasons.push_back(s.season_id);
  report.test_season = test.season_id;
  report.settings = config.ToConfig();
  report.standings["actual"] = actual;

  SiameseCache cache;
  for (const auto& name : config.models) {
    const ModelSpec spec = ModelSpec::Parse(name);
    ReportRow row;
    row.model = name;
    row.playoff_slots = 0;
    std::vector<MetricSummary> runs;
    for (int r = 0; r < config.model_repeats; ++r) {
      const std::uint64_t seed = r == 0 ? config.seed : random::Mix(config.seed, r);
      HyperParameters hyper = config.Defaults();
      if (config.tune) {
        hyper = TuneHyperparameters(spec, split.train, league, config, seed, &cache).best;
      }
      TrainedModel model = FitModel(spec, split.train, config, hyper, seed, &cache);
      Prediction pred = Stage("rank", [&] {
        return PredictStandings(model, test, config.winner_source);
      });
      const auto m = Stage("evaluate", [&] {
        return metrics::Evaluate(pred.standings, actual, test.league, config.ndcg_mode);
      });
      runs.push_back(Summarize(m));
      if (r == 0) {
        row.hyper = hyper;
        row.pools = m.pools;
        row.playoff_slots = m.playoff_slots;
        row.tally_sum = ranker::TallySum(pred.board);
        report.standings[name] = pred.standings;
        report.models.emplace(name, std::move(model));
      }
    }
    MeanAndStd(row, runs);
    report.rows.push_back(std::move(row));
  }

  Stage("baseline", [&] {
    const auto teams = Roster(test);
    const auto& prior = league.actual.at(split.train.back().season_id);
    ranker::Standings naive = ranker::NaiveBaseline(prior, teams);
    naive.tag = "naive";
    const auto nm = metrics::Evaluate(naive, actual, test.league, config.ndcg_mode);
    ReportRow naive_row;
    naive_row.model = "naive";
    naive_row.baseline = true;
    naive_row.pools = nm.pools;
    naive_row.playoff_slots = nm.playoff_slots;
    MeanAndStd(naive_row, {Summarize(nm)});
    report.rows.push_back(std::move(naive_row));
    report.standings["naive"] = std::move(naive);

    report.randomized_trials =
        ranker::RandomizedBaseline(teams, config.baseline_trials, config.baseline_seed);
    ReportRow random_row;
    random_row.model = "randomized";
    random_row.baseline = true;
    std::vector<MetricSummary> runs;
    for (const auto& trial : report.randomized_trials) {
      const auto m = metrics::Evaluate(trial, actual, test.league, config.ndcg_mode);
      runs.push_back(Summarize(m));
      random_row.playoff_slots = m.playoff_slots;
    }
    MeanAndStd(random_row, runs);
    report.rows.push_back(std::move(random_row));
  });
  return report;
}

Report RunExperiment(const ExperimentConfig& config) {
  return RunExperiment(PrepareLeague(config), config);
}

void WriteStandingsFiles(const ranker::Standings& standings,
                         const ingest::LeagueConfig& league,
                         const std::string& directory, const std::string& stem) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw RuntimeError("cannot create " + directory + ": " + ec.message());
  const auto write = [&](const ranker::Standings& s, const std::string& name) {
    const auto path = (fs::path(directory) / name).string();
    std::ofstream out(path, std::ios::binary);
    ranker::WriteStandingsCsv(out, s);
    if (!out) throw RuntimeError("cannot write " + path);
  };
  write(standings, stem + ".csv");
  if (league.sport == Sport::kBasketball) {
    auto [east, west] = ranker::ConferenceSplit(standings, league);
    write(east, stem + ".East.csv");
    write(west, stem + ".West.csv");
  }
}

void WriteExperimentOutputs(const Report& report, const std::string& directory) {
  Stage("report", [&] {
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec) throw RuntimeError("cannot create " + directory + ": " + ec.message());
    for (auto format : {report::Format::kCsv, report::Format::kJson, report::Format::kText}) {
      report::WriteReport(report, format,
                          (fs::path(directory) / report::DefaultFileName(format)).string());
    }
    const auto standings_dir = (fs::path(directory) / "standings").string();
    for (const auto& [name, s] : report.standings) {
      WriteStandingsFiles(s, report.league, standings_dir, name);
    }
    const auto baselines_dir = fs::path(directory) / "baselines";
    fs::create_directories(baselines_dir, ec);
    {
      const auto path = (baselines_dir / "randomized_trials.csv").string();
      std::ofstream out(path, std::ios::binary);
      ranker::WriteTrialsCsv(out, report.randomized_trials);
      if (!out) throw RuntimeError("cannot write " + path);
    }
    for (const auto& [name, model] : report.models) {
      model.Save((fs::path(directory) / "models" / name).string());
    }
    {
      const auto path = (fs::path(directory) / "settings.cfg").string();
      std::ofstream out(path, std::ios::binary);
      out << report.settings.Serialize();
      if (!out) throw RuntimeError("cannot write " + path);
    }
  });
}

}  // namespace tallyrank::pipeline
