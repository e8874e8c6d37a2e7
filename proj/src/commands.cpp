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

#include "tallyrank/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "tallyrank/csv.hpp"
#include "tallyrank/ingest.hpp"
#include "tallyrank/ranker.hpp"
#include "tallyrank/report.hpp"
#include "tallyrank/synthetic.hpp"

namespace tallyrank::commands {

namespace fs = std::filesystem;

namespace {

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw RuntimeError("cannot write " + path.string());
}

void MakeDirectory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw RuntimeError("cannot create " + dir.string() + ": " + ec.message());
}

pipeline::ExperimentConfig Experiment(const config::KeyValueConfig& cfg) {
  auto c = pipeline::ExperimentConfig::FromConfig(cfg);
  if (c.output_dir.empty()) throw ValidationError("output_dir is not set");
  return c;
}

// A rugby file holding team stats starts with the team column.
ingest::Schema DetectSchema(Sport sport, const std::string& path) {
  if (sport == Sport::kBasketball) return ingest::Schema::kNbaGames;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::string first;
  std::getline(in, first);
  if (first.rfind("\xEF\xBB\xBF", 0) == 0) first.erase(0, 3);
  return first.rfind(std::string(ingest::kRugbyTeamColumn), 0) == 0 ||
                 first.rfind("\"" + std::string(ingest::kRugbyTeamColumn), 0) == 0
             ? ingest::Schema::kRugbyStats
             : ingest::Schema::kRugbyGames;
}

std::optional<SeasonId> SeasonFromName(Sport sport, const std::string& name) {
  const std::string prefix = std::string(ToString(sport)) + "_";
  if (name.rfind(prefix, 0) != 0 || name.size() < prefix.size() + 4) return std::nullopt;
  auto year = csv::ParseInt(name.substr(prefix.size(), 4));
  if (!year) return std::nullopt;
  return static_cast<SeasonId>(*year);
}

}  // namespace

std::string Ingest(Sport sport, const std::string& input, const std::string& out_dir) {
  if (!fs::exists(input)) throw ValidationError("no such file or directory: " + input);
  MakeDirectory(out_dir);
  std::ostringstream summary;

  if (!fs::is_directory(input)) {
    const auto name = fs::path(input).filename().string();
    const auto schema = DetectSchema(sport, input);
    auto fragment = ingest::ParseDataset(input, schema,
                                         schema == ingest::Schema::kRugbyStats
                                             ? SeasonFromName(sport, name)
                                             : std::nullopt);
    WriteText(fs::path(out_dir) / name, ingest::SerializeFragment(fragment));
    summary << input << ": " << ingest::ToString(schema) << ", "
            << fragment.stats.size() << " team records, " << fragment.games.size()
            << " games\n";
    return summary.str();
  }

  const auto league = ingest::LoadLeague(sport, input);
  for (const auto& season : league.seasons) {
    const auto stats_file = ingest::StatsFileName(sport, season.season_id);
    const auto in_stats = (fs::path(input) / stats_file).string();
    if (sport == Sport::kRugby) {
      const auto games_file = ingest::GamesFileName(sport, season.season_id);
      WriteText(fs::path(out_dir) / stats_file,
                ingest::SerializeFragment(ingest::ParseDataset(
                    in_stats, ingest::Schema::kRugbyStats, season.season_id)));
      WriteText(fs::path(out_dir) / games_file,
                ingest::SerializeFragment(ingest::ParseDataset(
                    (fs::path(input) / games_file).string(), ingest::Schema::kRugbyGames)));
    } else {
      WriteText(fs::path(out_dir) / stats_file,
                ingest::SerializeFragment(
                    ingest::ParseDataset(in_stats, ingest::Schema::kNbaGames)));
    }
    const auto prefix = std::string(ToString(sport)) + "_" + std::to_string(season.season_id);
    ingest::WriteStatsTable((fs::path(out_dir) / (prefix + "_team_stats.csv")).string(),
                            season.stats);
    summary << "season " << season.season_id << ": " << season.stats.size() << " teams, "
            << season.games.size() << " games\n";
  }
  if (sport == Sport::kBasketball) {
    ingest::WriteConferences((fs::path(out_dir) / "conferences.csv").string(),
                             league.league);
  }
  // Carry standings files across unchanged.
  for (const auto& entry : fs::directory_iterator(input)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.size() > 4 &&
        name.find("_standings") != std::string::npos) {
      fs::copy_file(entry.path(), fs::path(out_dir) / name,
                    fs::copy_options::overwrite_existing);
    }
  }
  if (league.seasons.size() == 4) {
    std::vector<ingest::SeasonDataset> train(league.seasons.begin(),
                                             league.seasons.begin() + 3);
    const auto params = ingest::NormalizationParams::Fit(train);
    const auto& names = league.seasons.front().stats.front().feature_names;
    ingest::WriteNormalization((fs::path(out_dir) / "normalization.csv").string(),
                               params, names);
    summary << "normalization fit on seasons " << train[0].season_id << "-"
            << train[2].season_id << "\n";
  }
  return summary.str();
}

std::string Train(const config::KeyValueConfig& cfg,
                  const std::optional<std::string>& model) {
  auto config = Experiment(cfg);
  if (model) {
    pipeline::ModelSpec::Parse(*model);
    config.models = {*model};
  }
  const auto league = pipeline::PrepareLeague(config);
  const auto split = ingest::MakeTemporalSplit(league.data.seasons);
  pipeline::SiameseCache cache;
  std::ostringstream summary;
  for (const auto& name : config.models) {
    const auto spec = pipeline::ModelSpec::Parse(name);
    auto hyper = config.Defaults();
    if (config.tune) {
      hyper = pipeline::TuneHyperparameters(spec, split.train, league, config,
                                            config.seed, &cache)
                  .best;
    }
    const auto trained =
        pipeline::FitModel(spec, split.train, config, hyper, config.seed, &cache);
    const auto dir = fs::path(config.output_dir) / "models" / name;
    trained.Save(dir.string());
    summary << name << ": saved to " << dir.string() << "\n";
  }
  return summary.str();
}

std::string Rank(const config::KeyValueConfig& cfg, const std::string& model) {
  const auto config = Experiment(cfg);
  pipeline::ModelSpec::Parse(model);
  const auto trained = pipeline::TrainedModel::Load(
      (fs::path(config.output_dir) / "models" / model).string());
  const auto league = pipeline::PrepareLeague(config);
  const auto split = ingest::MakeTemporalSplit(league.data.seasons);
  const auto pred = pipeline::PredictStandings(trained, split.test, config.winner_source);
  const auto dir = fs::path(config.output_dir) / "standings";
  pipeline::WriteStandingsFiles(pred.standings, split.test.league, dir.string(), model);
  WriteText(dir / (model + ".json"), report::StandingsJson(pred.standings));
  std::ostringstream csv_text;
  ranker::WriteStandingsCsv(csv_text, pred.standings);
  return csv_text.str();
}

std::string Evaluate(const std::string& predicted_path,
                     const std::string& actual_path, const std::string& league_name,
                     const std::optional<std::string>& conferences_path,
                     metrics::NdcgMode ndcg_mode) {
  const Sport sport = ParseSport(league_name);
  const auto predicted = ranker::ReadStandingsCsv(predicted_path);
  const auto actual = ranker::ReadStandingsCsv(actual_path);
  ingest::LeagueConfig league;
  league.sport = sport;
  const auto teams = actual.Order();
  if (sport == Sport::kBasketball) {
    const auto table = conferences_path ? ingest::ReadConferences(*conferences_path)
                                        : ingest::DefaultNbaConferences();
    for (const auto& t : teams) {
      auto it = table.find(t);
      if (it == table.end()) throw ValidationError("no conference known for team '" + t + "'");
      league.conferences[t] = it->second;
    }
    league.pool_size = static_cast<int>(league.TeamsIn(Conference::kEast).size());
  } else {
    for (const auto& t : teams) league.conferences[t] = Conference::kNone;
    league.pool_size = static_cast<int>(teams.size());
  }
  league.metric_cutoff_k = std::min(15, league.pool_size);
  league.playoff_cutoff = std::min(8, league.pool_size);
  league.Validate();
  const auto m = metrics::Evaluate(predicted, actual, league, ndcg_mode);
  return report::MetricsCsv(fs::path(predicted_path).stem().string(), sport, m);
}

std::string Baseline(const config::KeyValueConfig& cfg, const std::string& kind_name,
                     std::optional<std::uint64_t> seed) {
  auto config = Experiment(cfg);
  const auto kind = ranker::ParseBaselineKind(kind_name);
  if (seed) config.baseline_seed = *seed;
  const auto league = pipeline::PrepareLeague(config);
  const auto split = ingest::MakeTemporalSplit(league.data.seasons);
  const auto& actual = league.actual.at(split.test.season_id);
  std::vector<TeamId> teams = actual.Order();
  std::sort(teams.begin(), teams.end());
  const auto dir = fs::path(config.output_dir) / "baselines";
  MakeDirectory(dir);

  if (kind == ranker::BaselineKind::kNaivePreviousSeason) {
    auto naive = ranker::NaiveBaseline(league.actual.at(split.train.back().season_id), teams);
    naive.tag = "naive";
    pipeline::WriteStandingsFiles(naive, split.test.league, dir.string(), "naive");
    return report::MetricsCsv(
        "naive", config.sport,
        metrics::Evaluate(naive, actual, split.test.league, config.ndcg_mode));
  }
  const auto trials =
      ranker::RandomizedBaseline(teams, config.baseline_trials, config.baseline_seed);
  {
    std::ofstream out(dir / "randomized_trials.csv", std::ios::binary);
    ranker::WriteTrialsCsv(out, trials);
    if (!out) throw RuntimeError("cannot write " + (dir / "randomized_trials.csv").string());
  }
  std::ostringstream out;
  out << "trial,league,AP_or_mAP,spearman,ndcg\n";
  double sum[3] = {0, 0, 0}, sq[3] = {0, 0, 0};
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const auto m = metrics::Evaluate(trials[t], actual, split.test.league, config.ndcg_mode);
    const double v[3] = {m.average_precision, m.spearman, m.ndcg};
    out << t + 1 << ',' << ToString(config.sport);
    for (int k = 0; k < 3; ++k) {
      out << ',' << csv::FormatDouble(v[k]);
      sum[k] += v[k];
      sq[k] += v[k] * v[k];
    }
    out << '\n';
  }
  const double n = static_cast<double>(trials.size());
  for (const char* label : {"mean", "std"}) {
    out << label << ',' << ToString(config.sport);
    for (int k = 0; k < 3; ++k) {
      const double mean = sum[k] / n;
      const double var = n > 1 ? std::max(0.0, (sq[k] - n * mean * mean) / (n - 1)) : 0.0;
      out << ',' << csv::FormatDouble(label[0] == 'm' ? mean : std::sqrt(var));
    }
    out << '\n';
  }
  return out.str();
}

std::string Synth(const std::string& spec_path, const std::string& out_dir) {
  const auto spec =
      synth::SyntheticLeagueSpec::FromConfig(config::KeyValueConfig::Read(spec_path));
  const auto league = synth::Generate(spec);
  synth::WriteLeague(league, out_dir);
  std::ostringstream summary;
  summary << "wrote " << league.data.seasons.size() << " " << ToString(spec.sport)
          << " seasons of " << league.data.league.Teams().size() << " teams to "
          << out_dir << "\n";
  return summary.str();
}

std::string Report(const config::KeyValueConfig& cfg, const std::string& format) {
  const auto config = Experiment(cfg);
  const auto f = report::ParseFormat(format);
  const auto r = pipeline::RunExperiment(config);
  pipeline::WriteExperimentOutputs(r, config.output_dir);
  return report::Render(r, f);
}

}  // namespace tallyrank::commands
