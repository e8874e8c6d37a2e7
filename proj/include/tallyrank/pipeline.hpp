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

// Experiment orchestration: model fitting, cross-validated tuning and the
// full train/predict/evaluate run over a four-season league.

#ifndef TALLYRANK_PIPELINE_HPP_
#define TALLYRANK_PIPELINE_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tallyrank/config.hpp"
#include "tallyrank/core.hpp"
#include "tallyrank/gbm.hpp"
#include "tallyrank/ingest.hpp"
#include "tallyrank/metrics.hpp"
#include "tallyrank/ranker.hpp"
#include "tallyrank/siamese.hpp"

namespace tallyrank::pipeline {

// A model of the experiment matrix: a GBM ranker over raw stats, a GBM
// ranker over Siamese embeddings, or Siamese scores tallied directly.
struct ModelSpec {
  std::string name;
  std::optional<gbm::Objective> ranker;
  std::optional<siamese::Loss> siamese;

  static ModelSpec Parse(std::string_view name);
  // The six GBM-based models.
  static std::vector<std::string> PaperModels();
  // PaperModels() plus the two score-only Siamese models.
  static std::vector<std::string> AllModels();
};

struct HyperParameters {
  double margin = 1.0;
  int max_depth = 3;
  double learning_rate = 0.1;
  int rounds = 100;

  bool operator==(const HyperParameters&) const = default;
};

struct Grid {
  std::vector<double> margins{0.5, 1.0, 2.0};
  std::vector<int> max_depths{2, 3};
  std::vector<double> learning_rates{0.05, 0.1};
  std::vector<int> rounds{50, 100};

  // Cartesian product, margin outermost and rounds innermost.
  std::vector<HyperParameters> Points() const;
};

struct ExperimentConfig {
  Sport sport = Sport::kRugby;
  std::string data_dir;
  std::string output_dir;
  std::vector<std::string> models = ModelSpec::AllModels();
  std::uint64_t seed = 0;

  siamese::TrainConfig siamese;
  gbm::BoostConfig boost;

  bool tune = false;
  Grid grid;

  // Actual standings come from <sport>_<season>_<suffix>.csv when present
  // and from game results otherwise.
  std::string standings_suffix = "standings";
  metrics::NdcgMode ndcg_mode = metrics::NdcgMode::kPerPool;
  ranker::WinnerSource winner_source = ranker::WinnerSource::kPredicted;

  int baseline_trials = ranker::kRandomTrials;
  std::uint64_t baseline_seed = 0;
  // Train each model with this many derived seeds and report mean and std.
  int model_repeats = 1;

  int pool_size = 15;
  int metric_cutoff_k = 15;
  int playoff_cutoff = 8;

  static ExperimentConfig FromConfig(const config::KeyValueConfig& cfg);
  static ExperimentConfig Load(const std::string& path);
  // Every setting except the paths.
  config::KeyValueConfig ToConfig() const;
  HyperParameters Defaults() const;
  void Validate() const;
};

struct PreparedLeague {
  ingest::LeagueData data;
  std::map<SeasonId, ranker::Standings> actual;

  const ingest::LeagueConfig& league() const { return data.league; }
};

// Loads the league, applies the pool settings and resolves actual standings.
PreparedLeague PrepareLeague(const ExperimentConfig& config);
PreparedLeague PrepareLeague(ingest::LeagueData data,
                             const ExperimentConfig& config);

// Standings from the season's actual results: one point per win.
ranker::Standings StandingsFromResults(const ingest::SeasonDataset& season);

struct TrainedModel {
  ModelSpec spec;
  HyperParameters hyper;
  ingest::NormalizationParams normalization;
  std::vector<std::string> feature_names;
  std::optional<siamese::SiameseModel> siamese;
  std::optional<gbm::BoostedEnsemble> gbm;

  void Save(const std::string& directory) const;
  static TrainedModel Load(const std::string& directory);
};

// Trained Siamese networks keyed by everything that determines them; models
// sharing a loss reuse one network.
using SiameseCache = std::map<std::string, siamese::SiameseModel>;

// Trains on raw (unnormalized) seasons; normalization is fit here. The
// Siamese seed depends on `seed` and the loss only, the GBM seed on `seed`
// and the model name.
TrainedModel FitModel(const ModelSpec& spec,
                      std::span<const ingest::SeasonDataset> train,
                      const ExperimentConfig& config,
                      const HyperParameters& hyper, std::uint64_t seed,
                      SiameseCache* cache = nullptr);

// One score per game of `season`, in game order.
std::vector<GameScore> ScoreSeason(const TrainedModel& model,
                                   const ingest::SeasonDataset& season);

struct Prediction {
  ranker::TallyBoard board;
  ranker::Standings standings;
};

Prediction PredictStandings(const TrainedModel& model,
                            const ingest::SeasonDataset& season,
                            ranker::WinnerSource winner);

struct TuneResult {
  HyperParameters best;
  std::size_t best_index = 0;
  std::vector<double> mean_scores;
};

// Picks the grid point with the highest mean fold score; the first one wins
// ties.
TuneResult Tune(std::span<const HyperParameters> grid,
                std::span<const ingest::Fold> folds,
                const std::function<double(const HyperParameters&,
                                           const ingest::Fold&)>& score);

// Mean validation NDCG of predicted standings over the three folds.
TuneResult TuneHyperparameters(const ModelSpec& spec,
                               std::span<const ingest::SeasonDataset> train,
                               const PreparedLeague& league,
                               const ExperimentConfig& config,
                               std::uint64_t seed,
                               SiameseCache* cache = nullptr);

struct MetricSummary {
  double average_precision = 0.0;
  double spearman = 0.0;
  double ndcg = 0.0;
  double playoff_hits = 0.0;
};

struct ReportRow {
  std::string model;
  bool baseline = false;
  int trials = 1;
  MetricSummary mean;
  // Sample standard deviation, present when trials > 1.
  std::optional<MetricSummary> stddev;
  int playoff_slots = 0;
  // Sum of all team tallies of the first trial.
  double tally_sum = 0.0;
  std::optional<HyperParameters> hyper;
  std::vector<metrics::PoolMetrics> pools;
};

struct Report {
  Sport sport = Sport::kRugby;
  // League shape of the test season.
  ingest::LeagueConfig league;
  std::vector<SeasonId> train_seasons;
  SeasonId test_season = 0;
  std::vector<ReportRow> rows;
  // Predicted standings per model, plus "actual" and "naive".
  std::map<std::string, ranker::Standings> standings;
  std::vector<ranker::Standings> randomized_trials;
  std::map<std::string, TrainedModel> models;
  config::KeyValueConfig settings;
};

Report RunExperiment(const ExperimentConfig& config);
Report RunExperiment(const PreparedLeague& league, const ExperimentConfig& config);

// Report files, standings, baseline trials and model artifacts under
// `directory`.
void WriteExperimentOutputs(const Report& report, const std::string& directory);

// Standings as CSV files: <stem>.csv plus <stem>.East.csv and
// <stem>.West.csv for basketball.
void WriteStandingsFiles(const ranker::Standings& standings,
                         const ingest::LeagueConfig& league,
                         const std::string& directory, const std::string& stem);

}  // namespace tallyrank::pipeline

#endif  // TALLYRANK_PIPELINE_HPP_
