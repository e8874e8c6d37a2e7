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

// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and gates
// are pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "tallyrank/gbm.hpp"
#include "tallyrank/ingest.hpp"
#include "tallyrank/metrics.hpp"
#include "tallyrank/pipeline.hpp"
#include "tallyrank/random.hpp"
#include "tallyrank/ranker.hpp"
#include "tallyrank/report.hpp"
#include "tallyrank/siamese.hpp"
#include "tallyrank/synthetic.hpp"
#include "test_util.hpp"

namespace {

using namespace tallyrank;
using List = std::vector<TeamId>;
namespace fs = std::filesystem;

// Pinned tolerances.
constexpr double kMetricTolerance = 1e-12;
constexpr double kMetricSeconds = 5.0;
constexpr double kHandTolerance = 1e-12;
constexpr double kNdcgHandTolerance = 1e-5;
constexpr double kGradientStep = 1e-5;
constexpr double kGradientTolerance = 1e-4;
constexpr int kGradientDraws = 100;
// Draws are re-sampled when any rectifier input, distance or hinge argument
// lies closer to its kink than this. A central difference with step h moves
// a pre-activation by about h, so anything nearer than 10 h may straddle the
// kink; 1e-8 alone would leave such draws in.
constexpr double kKinkMinimum = 1e-8;
constexpr double kKinkMargin = std::max(kKinkMinimum, 10 * kGradientStep);
// Relative error uses max(|analytic|, |numeric|, floor) as the scale, so
// rounding noise on exact-zero gradients (about eps / h) is not divided by 0.
constexpr double kGradFloor = 1e-6;
constexpr double kBoostMse = 0.05;
constexpr double kBoostSeconds = 10.0;
constexpr double kRankNdcg = 0.9;
constexpr int kRankRounds = 50;
constexpr int kLeagueSeeds = 10;
constexpr double kLeagueSeconds = 120.0;
constexpr double kNominalSpearman = 0.7;
constexpr double kNominalNdcg = 0.9;
constexpr double kOracleSlack = 0.05;
// Logistic-regression oracle means on the league fixture, measured with
// --calibrate and frozen here.
constexpr double kOracleSpearman = 0.937143;
constexpr double kOracleNdcg = 0.935604;
constexpr double kPaperTolerance = 0.05;
constexpr double kTallyTolerance = 1e-9;

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void Print(int id, const std::string& title, const Outcome& o) {
  std::printf("[%s] C%d %s: %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(),
              o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string Fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

List Teams(int n) {
  List out;
  for (int i = 0; i < n; ++i) out.push_back(Fmt("T%02d", i + 1));
  return out;
}

// ---------------------------------------------------------------------------

Outcome MetricOracles() {
  const auto start = Clock::now();
  random::Engine rng(20260101);
  const List actual = Teams(15);
  const auto relevance = metrics::AssignRelevance(actual);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    List p = actual;
    random::Shuffle(p.begin(), p.end(), rng);
    worst = std::max(worst, std::abs(metrics::AveragePrecision(p, actual, 15) -
                                     oracle::AveragePrecision(p, actual, 15)));
    worst = std::max(worst, std::abs(metrics::Ndcg(p, relevance, 15) -
                                     oracle::Ndcg(p, actual, 15)));
    worst = std::max(worst, std::abs(metrics::SpearmanRs(p, actual) -
                                     oracle::Spearman(p, actual)));
  }
  const double t = Seconds(start);
  return {worst <= kMetricTolerance && t < kMetricSeconds,
          Fmt("max |diff| %.3g over 1000 permutations (tol %.0e), %.2f s (limit %.0f s)", worst,
              kMetricTolerance, t, kMetricSeconds)};
}

Outcome HandValues() {
  const List abc{"A", "B", "C"};
  const double rs = metrics::SpearmanRs(List{"A", "C", "B"}, abc);
  const double nd = metrics::Ndcg(List{"B", "A", "C"}, metrics::AssignRelevance(abc), 3);
  const double ap = metrics::AveragePrecision(List{"C", "B", "A"}, abc, 3);
  const bool pass = std::abs(rs - 0.5) <= kHandTolerance &&
                    std::abs(nd - 0.84283) <= kNdcgHandTolerance &&
                    std::abs(ap - 0.5) <= kHandTolerance;
  return {pass, Fmt("spearman %.12f (0.5), ndcg %.6f (0.84283 +-1e-5), AP %.12f (0.5)", rs, nd, ap)};
}

// ---------------------------------------------------------------------------

std::vector<double> UnitVector(random::Engine& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = random::Unit(rng);
  return v;
}

// Smallest distance of any rectifier input, distance or hinge argument from
// its kink over the batch.
double KinkDistance(const siamese::SiameseParams& p,
                    const std::vector<ingest::TrainingPair>& pairs,
                    const std::vector<ingest::TrainingTriplet>& triplets, double margin) {
  double closest = 1e300;
  const auto visit = [&](const std::vector<double>& x) {
    const auto pass = siamese::Forward(p, x);
    for (std::size_t l = 0; l + 1 < pass.pre_activations.size(); ++l) {
      for (double z : pass.pre_activations[l]) closest = std::min(closest, std::abs(z));
    }
    return pass.output;
  };
  for (const auto& pr : pairs) {
    const double d = siamese::EuclideanDistance(visit(pr.home), visit(pr.away));
    closest = std::min({closest, d, pr.label ? std::abs(margin - d) : 1e300});
  }
  for (const auto& t : triplets) {
    const auto a = visit(t.anchor), pp = visit(t.positive), n = visit(t.negative);
    const double dap = siamese::EuclideanDistance(a, pp);
    const double dan = siamese::EuclideanDistance(a, n);
    closest = std::min({closest, dap, dan, std::abs(dap - dan + margin)});
  }
  return closest;
}

template <typename Batch>
double GradientError(const siamese::SiameseParams& p, const Batch& batch, double margin,
                     double* max_abs) {
  const auto analytic = siamese::ComputeLossGradients(p, batch, margin).gradients.Flatten();
  const auto flat = p.Flatten();
  const auto f = [&](const std::vector<double>& theta) {
    siamese::SiameseParams q = p;
    q.Assign(theta);
    return siamese::BatchLoss(q, batch, margin);
  };
  double worst = 0.0;
  for (std::size_t k = 0; k < flat.size(); ++k) {
    const double numeric = oracle::CentralDifference(f, flat, k, kGradientStep);
    const double diff = std::abs(numeric - analytic[k]);
    *max_abs = std::max(*max_abs, diff);
    const double scale = std::max({std::abs(numeric), std::abs(analytic[k]), kGradFloor});
    worst = std::max(worst, diff / scale);
  }
  return worst;
}

Outcome GradientCheck() {
  const auto start = Clock::now();
  random::Engine rng(777);
  const auto shape = siamese::SiameseParams::DefaultShape(5);
  double worst = 0.0, max_abs = 0.0;
  int draws = 0, resampled = 0, resampled_minimum = 0;
  while (draws < kGradientDraws) {
    auto p = siamese::SiameseParams::Initialize(shape, random::Mix(777, draws + resampled));
    for (auto& layer : p.layers) {
      for (auto& b : layer.bias) b = random::Uniform(rng, -0.1, 0.1);
    }
    const double margin = random::Uniform(rng, 0.5, 2.0);
    std::vector<ingest::TrainingPair> pairs;
    std::vector<ingest::TrainingTriplet> triplets;
    for (int i = 0; i < 4; ++i) {
      pairs.push_back({UnitVector(rng, 5), UnitVector(rng, 5), i % 2});
      triplets.push_back({UnitVector(rng, 5), UnitVector(rng, 5), UnitVector(rng, 5)});
    }
    const double kink = KinkDistance(p, pairs, triplets, margin);
    if (kink < kKinkMinimum) ++resampled_minimum;
    if (kink < kKinkMargin) {
      ++resampled;
      continue;
    }
    worst = std::max(worst, GradientError(p, pairs, margin, &max_abs));
    worst = std::max(worst, GradientError(p, triplets, margin, &max_abs));
    ++draws;
  }
  return {worst <= kGradientTolerance,
          Fmt("max relative error %.3g (tol %.0e) over %d draws x 2 losses through the "
              "5-70-20-1 network; %d draws resampled within %.0e of a kink (%d within %.0e); "
              "max |diff| %.3g, h %.0e, %.1f s",
              worst, kGradientTolerance, draws, resampled, kKinkMargin, resampled_minimum,
              kKinkMinimum, max_abs, kGradientStep, Seconds(start))};
}

// ---------------------------------------------------------------------------

Outcome BoostingSoundness() {
  const auto start = Clock::now();
  random::Engine rng(4242);
  gbm::Matrix x(0, 3);
  std::vector<double> product, saddle, noisy;
  for (int i = 0; i < 400; ++i) {
    const double a = random::Uniform(rng, -1, 1), b = random::Uniform(rng, -1, 1);
    x.AppendRow(std::vector<double>{a, b, random::Uniform(rng, -1, 1)});
    product.push_back(a * b);
    saddle.push_back(4.0 * a * b);
    noisy.push_back(a * b + std::sin(3.0 * a) + 0.3 * random::Normal(rng));
  }
  gbm::BoostConfig config;
  config.objective = gbm::Objective::kSquaredError;
  config.rounds = 100;
  config.max_depth = 2;
  config.learning_rate = 0.1;
  int increases = 0;
  const auto fit_mse = [&](const std::vector<double>& y) {
    const auto e = gbm::BoostFit(gbm::TrainingData::FromRows(x, y), config);
    for (std::size_t m = 1; m < e.training_objective.size(); ++m) {
      if (e.training_objective[m] > e.training_objective[m - 1]) ++increases;
    }
    const auto pred = e.Predict(x);
    double mse = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      mse += (pred[i] - y[i]) * (pred[i] - y[i]) / static_cast<double>(y.size());
    }
    return mse;
  };
  const double mse = fit_mse(product);
  const double saddle_mse = fit_mse(saddle);
  fit_mse(noisy);
  const double t = Seconds(start);
  return {increases == 0 && mse <= kBoostMse && t < kBoostSeconds,
          Fmt("%d loss increases over 3x100 rounds; x0*x1 interaction MSE %.4f (limit %.2f); "
              "4*x0*x1 saddle MSE %.4f (not gated); %.2f s (limit %.0f s)",
              increases, mse, kBoostMse, saddle_mse, t, kBoostSeconds)};
}

Outcome RankingSoundness() {
  random::Engine rng(99);
  std::vector<gbm::QueryGroup> groups;
  for (int g = 0; g < 20; ++g) {
    gbm::QueryGroup q;
    q.key = g;
    for (int i = 0; i < 30; ++i) {
      const double signal = random::Unit(rng);
      q.rows.push_back({random::Unit(rng), signal, random::Unit(rng)});
      q.labels.push_back(std::floor(5.0 * signal));  // noiseless, monotone
    }
    groups.push_back(q);
  }
  const auto data = gbm::TrainingData::FromGroups(groups);
  gbm::BoostConfig config;
  config.objective = gbm::Objective::kNdcgScaledPairwise;
  config.rounds = kRankRounds;
  config.max_depth = 3;
  const auto e = gbm::BoostFit(data, config);
  const auto mean_ndcg = [&](int trees) {
    double total = 0.0;
    for (std::size_t g = 0; g < data.GroupCount(); ++g) {
      std::vector<double> s, l;
      for (std::size_t r = data.group_offsets[g]; r < data.group_offsets[g + 1]; ++r) {
        s.push_back(e.Predict(data.features.row(r), trees));
        l.push_back(data.labels[r]);
      }
      std::vector<int> order(s.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return s[a] > s[b]; });
      total += oracle::NdcgOfOrder(order, l, 10);
    }
    return total / static_cast<double>(data.GroupCount());
  };
  const double base = mean_ndcg(0);
  int reached = -1, below = 0;
  double final_ndcg = base;
  for (int m = 1; m <= kRankRounds; ++m) {
    final_ndcg = mean_ndcg(m);
    if (final_ndcg < base) ++below;
    if (reached < 0 && final_ndcg >= kRankNdcg) reached = m;
  }
  return {reached > 0 && below == 0,
          Fmt("train NDCG@10 reached %.2f at round %d (F0 baseline %.4f, final %.4f), %d rounds "
              "below baseline",
              kRankNdcg, reached, base, final_ndcg, below)};
}

// ---------------------------------------------------------------------------

synth::SyntheticLeagueSpec LeagueSpec(Sport sport, std::uint64_t seed) {
  synth::SyntheticLeagueSpec spec;
  spec.sport = sport;
  spec.teams = 15;
  spec.seasons = 4;
  spec.seed = seed;
  return spec;
}

pipeline::ExperimentConfig LeagueConfig(Sport sport, const std::string& data_dir,
                                        std::uint64_t seed) {
  pipeline::ExperimentConfig c;
  c.sport = sport;
  c.data_dir = data_dir;
  c.seed = seed;
  c.standings_suffix = synth::kStrengthSuffix;
  c.baseline_seed = seed;
  return c;
}

struct Scores {
  double spearman = 0.0;
  double ndcg = 0.0;
};

// Logistic regression on home-minus-away features, its tally and its
// standings, all computed here.
Scores LogisticOracle(const synth::SyntheticLeague& league) {
  const auto& seasons = league.data.seasons;
  std::vector<ingest::SeasonDataset> train(seasons.begin(), seasons.begin() + 3);
  const auto norm = ingest::NormalizationParams::Fit(train);
  const auto prepare = [&](const ingest::SeasonDataset& s) {
    std::map<TeamId, std::vector<double>> x;
    for (const auto& t : ingest::Normalize(s.stats, norm)) x[t.team_id] = t.features;
    return x;
  };
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (const auto& s : train) {
    const auto x = prepare(s);
    for (const auto& g : s.games) {
      std::vector<double> d;
      for (std::size_t k = 0; k < x.at(g.home_team).size(); ++k) {
        d.push_back(x.at(g.home_team)[k] - x.at(g.away_team)[k]);
      }
      rows.push_back(d);
      labels.push_back(g.home_won ? 1 : 0);
    }
  }
  const auto w = oracle::FitLogistic(rows, labels);
  const auto& test = seasons.back();
  const auto x = prepare(test);
  std::map<TeamId, double> tally;
  for (const auto& s : test.stats) tally[s.team_id] = 0.0;
  for (const auto& g : test.games) {
    double z = 0.0;
    for (std::size_t k = 0; k + 1 < w.size(); ++k) {
      z += w[k] * (x.at(g.home_team)[k] - x.at(g.away_team)[k]);
    }
    const auto& winner = z >= 0 ? g.home_team : g.away_team;
    const auto& loser = z >= 0 ? g.away_team : g.home_team;
    tally[winner] += std::abs(z);
    tally[loser] -= std::abs(z);
  }
  List order;
  for (const auto& [t, v] : tally) order.push_back(t);
  std::stable_sort(order.begin(), order.end(),
                   [&](const auto& a, const auto& b) { return tally[a] > tally[b]; });
  const auto truth = league.StrengthOrder(test.season_id).Order();
  return {oracle::Spearman(order, truth), oracle::Ndcg(order, truth, 15)};
}

Outcome EndToEnd(bool calibrate) {
  const auto start = Clock::now();
  Scores model_mean, oracle_mean;
  for (int s = 0; s < kLeagueSeeds; ++s) {
    const std::uint64_t seed = 1000 + s;
    const auto league = synth::Generate(LeagueSpec(Sport::kRugby, seed));
    const auto o = LogisticOracle(league);
    oracle_mean.spearman += o.spearman / kLeagueSeeds;
    oracle_mean.ndcg += o.ndcg / kLeagueSeeds;
    if (calibrate) continue;
    testing::TempDir dir("accept_league");
    synth::WriteLeague(league, dir.path());
    auto config = LeagueConfig(Sport::kRugby, dir.path(), seed);
    config.models = {"gbm_ndcg+siamese_triplet"};
    const auto report = pipeline::RunExperiment(config);
    const auto truth = league.StrengthOrder(report.test_season).Order();
    const auto predicted = report.standings.at("gbm_ndcg+siamese_triplet").Order();
    model_mean.spearman += oracle::Spearman(predicted, truth) / kLeagueSeeds;
    model_mean.ndcg += oracle::Ndcg(predicted, truth, 15) / kLeagueSeeds;
  }
  if (calibrate) {
    std::printf("calibration: oracle mean spearman %.6f ndcg %.6f\n", oracle_mean.spearman,
                oracle_mean.ndcg);
  }
  const double gate_rs = std::max(kNominalSpearman, kOracleSpearman - kOracleSlack);
  const double gate_nd = std::max(kNominalNdcg, kOracleNdcg - kOracleSlack);
  const double t = Seconds(start);
  const bool pass = model_mean.spearman >= gate_rs && model_mean.ndcg >= gate_nd &&
                    t < kLeagueSeconds;
  return {pass && !calibrate,
          Fmt("mean over %d seeds spearman %.4f (gate %.4f), NDCG %.4f (gate %.4f); "
              "oracle now %.4f/%.4f, frozen %.4f/%.4f; %.1f s (limit %.0f s)",
              kLeagueSeeds, model_mean.spearman, gate_rs, model_mean.ndcg, gate_nd,
              oracle_mean.spearman, oracle_mean.ndcg, kOracleSpearman, kOracleNdcg, t,
              kLeagueSeconds)};
}

// ---------------------------------------------------------------------------

double max_tally_sum = 0.0;
int audited_boards = 0;

// Tally conservation over every row and every written standings file.
void AuditTallies(const pipeline::Report& report) {
  for (const auto& row : report.rows) {
    if (row.model == "naive" || row.model == "randomized") continue;
    max_tally_sum = std::max(max_tally_sum, std::abs(row.tally_sum));
    ++audited_boards;
  }
  for (const auto& [name, s] : report.standings) {
    if (name == "actual" || name == "naive") continue;
    double sum = 0.0;
    for (const auto& e : s.entries) sum += e.tally;
    max_tally_sum = std::max(max_tally_sum, std::abs(sum));
    ++audited_boards;
  }
}

std::string HeaderLine(const std::string& text) {
  const auto at = text.find("Model");
  return at == std::string::npos ? "" : text.substr(at, text.find('\n', at) - at);
}

struct PaperTarget {
  std::string metric;
  double value;
};

std::optional<bool> PaperDiagnostic(Sport sport, const std::string& dir,
                                    const std::string& model,
                                    const std::vector<PaperTarget>& targets) {
  if (dir.empty()) return std::nullopt;
  pipeline::ExperimentConfig c;
  c.sport = sport;
  c.data_dir = dir;
  c.models = {model};
  c.tune = true;
  const auto report = pipeline::RunExperiment(c);
  AuditTallies(report);
  std::printf("%s", report::Render(report, report::Format::kText).c_str());
  bool ok = true;
  for (const auto& t : targets) {
    const auto& m = report.rows.front().mean;
    const double got = t.metric == "spearman" ? m.spearman
                       : t.metric == "ndcg"   ? m.ndcg
                                              : m.average_precision;
    const bool within = std::abs(got - t.value) <= kPaperTolerance;
    ok = ok && within;
    std::printf("  diagnostic %s %s %s: %.3f vs paper %.3f (+-%.2f) %s\n",
                std::string(ToString(sport)).c_str(), model.c_str(), t.metric.c_str(), got,
                t.value, kPaperTolerance, within ? "within" : "outside");
  }
  return ok;
}

Outcome PaperReproduction(const pipeline::Report& rugby, const pipeline::Report& basketball,
                          const std::string& nba_dir, const std::string& rugby_dir) {
  const auto nba_header = HeaderLine(report::Render(basketball, report::Format::kText));
  const auto rugby_header = HeaderLine(report::Render(rugby, report::Format::kText));
  const bool nba_ok = nba_header.find("mAP") != std::string::npos &&
                      nba_header.find("r_s") != std::string::npos &&
                      nba_header.find("NDCG") != std::string::npos;
  const bool rugby_ok = rugby_header.find(" AP ") != std::string::npos &&
                        rugby_header.find("mAP") == std::string::npos &&
                        rugby_header.find("r_s") != std::string::npos &&
                        rugby_header.find("NDCG") != std::string::npos;
  std::string detail =
      "not desk-reproducible: the NBA and Super Rugby seasons are external data (declared); "
      "report layout checked (basketball mAP|r_s|NDCG: " +
      std::string(nba_ok ? "ok" : "bad") + ", rugby AP|r_s|NDCG: " +
      (rugby_ok ? "ok" : "bad") + ")";
  bool pass = nba_ok && rugby_ok;
  const auto nba = PaperDiagnostic(Sport::kBasketball, nba_dir, "gbm_ndcg+siamese_triplet",
                                   {{"ap", 0.867}, {"ndcg", 0.980}});
  const auto rug = PaperDiagnostic(Sport::kRugby, rugby_dir, "gbm_pairwise+siamese_triplet",
                                   {{"ap", 0.921}, {"spearman", 0.793}, {"ndcg", 0.982}});
  for (const auto& [name, r] : {std::pair{"NBA", nba}, std::pair{"rugby", rug}}) {
    if (!r) {
      detail += Fmt("; %s targets skipped (no data supplied)", name);
    } else {
      detail += Fmt("; %s targets %s", name, *r ? "within +-0.05" : "outside +-0.05");
      pass = pass && *r;
    }
  }
  return {pass, detail};
}

Outcome Baselines(const pipeline::Report& report, const std::string& data_dir,
                  std::uint64_t seed) {
  const pipeline::ReportRow* row = nullptr;
  for (const auto& r : report.rows) {
    if (r.model == "randomized") row = &r;
  }
  if (!row) return {false, "no randomized row"};
  const auto truth = report.standings.at("actual").Order();
  const int k = static_cast<int>(truth.size());
  std::vector<double> ap, rs, nd;
  for (const auto& trial : report.randomized_trials) {
    const auto order = trial.Order();
    ap.push_back(oracle::AveragePrecision(order, truth, k));
    rs.push_back(oracle::Spearman(order, truth));
    nd.push_back(oracle::Ndcg(order, truth, k));
  }
  const auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  const auto sd = [&](const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
  };
  const bool stats_ok =
      row->trials == 30 && report.randomized_trials.size() == 30 && row->stddev &&
      std::abs(row->mean.average_precision - mean(ap)) <= 1e-12 &&
      std::abs(row->mean.spearman - mean(rs)) <= 1e-12 &&
      std::abs(row->mean.ndcg - mean(nd)) <= 1e-12 &&
      std::abs(row->stddev->average_precision - sd(ap)) <= 1e-12 &&
      std::abs(row->stddev->spearman - sd(rs)) <= 1e-12 &&
      std::abs(row->stddev->ndcg - sd(nd)) <= 1e-12;
  const auto rerun = ranker::RandomizedBaseline(truth, ranker::kRandomTrials, seed);
  const bool reproducible = rerun == report.randomized_trials;
  const bool seed_matters =
      ranker::RandomizedBaseline(truth, ranker::kRandomTrials, seed + 1) != rerun;
  const auto prior_path =
      data_dir + "/" +
      synth::StandingsFileName(report.sport, report.train_seasons.back(), synth::kStrengthSuffix);
  const auto prior = ranker::ReadStandingsCsv(prior_path).Order();
  const bool naive_ok = report.standings.at("naive").Order() == prior;
  return {stats_ok && reproducible && seed_matters && naive_ok,
          Fmt("30 trials with mean/std matching recomputation: %s; same seed reproduces all "
              "30: %s; other seed differs: %s; naive equals prior season: %s",
              stats_ok ? "yes" : "no", reproducible ? "yes" : "no", seed_matters ? "yes" : "no",
              naive_ok ? "yes" : "no")};
}

Outcome Determinism(const std::string& dir_a, const std::string& dir_b, int models) {
  int compared = 0, differing = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir_a)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), dir_a);
    const auto top = rel.begin()->string();
    if (top != "standings" && rel.native().rfind("report.", 0) != 0) continue;
    ++compared;
    const auto other = fs::path(dir_b) / rel;
    if (!fs::exists(other) || testing::ReadFile(entry.path().string()) !=
                                  testing::ReadFile(other.string())) {
      ++differing;
      std::printf("  differs: %s\n", rel.string().c_str());
    }
  }
  return {models == 6 && compared > 0 && differing == 0,
          Fmt("%d-model experiment run twice: %d report/standings files compared, %d differ",
              models, compared, differing)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tallyrank acceptance suite"};
  std::string nba_dir, rugby_dir;
  bool calibrate = false;
  int through = 10;
  app.add_option("--nba-data", nba_dir, "Four NBA seasons in the ingest schema");
  app.add_option("--rugby-data", rugby_dir, "Four Super Rugby seasons in the ingest schema");
  app.add_flag("--calibrate", calibrate, "Print the logistic-regression oracle means and exit");
  app.add_option("--through", through, "Stop after this criterion")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  try {
    if (calibrate) {
      EndToEnd(true);
      return 0;
    }
    Print(1, "metric oracle equivalence", MetricOracles());
    Print(2, "hand values", HandValues());
    Print(3, "siamese gradient check", GradientCheck());
    Print(4, "boosting soundness", BoostingSoundness());
    Print(5, "ranking objective soundness", RankingSoundness());
    if (through >= 6) Print(6, "synthetic league end to end", EndToEnd(false));
    if (through <= 6) return failures == 0 ? 0 : 1;

    // One rugby league drives criteria 7 to 10; a basketball run adds the
    // conference layout.
    const std::uint64_t seed = 31;
    testing::TempDir work("acceptance");
    synth::WriteLeague(synth::Generate(LeagueSpec(Sport::kRugby, seed)), work / "rugby");
    auto config = LeagueConfig(Sport::kRugby, work / "rugby", seed);
    config.models = pipeline::ModelSpec::PaperModels();
    const auto first = pipeline::RunExperiment(config);
    const auto second = pipeline::RunExperiment(config);
    pipeline::WriteExperimentOutputs(first, work / "run_a");
    pipeline::WriteExperimentOutputs(second, work / "run_b");
    AuditTallies(first);
    AuditTallies(second);

    synth::WriteLeague(synth::Generate(LeagueSpec(Sport::kBasketball, seed)),
                       work / "basketball");
    auto nba_config = LeagueConfig(Sport::kBasketball, work / "basketball", seed);
    nba_config.models = {"gbm_pairwise+siamese_triplet"};
    const auto basketball = pipeline::RunExperiment(nba_config);
    AuditTallies(basketball);

    Print(7, "paper numbers", PaperReproduction(first, basketball, nba_dir, rugby_dir));
    Print(8, "baseline contract", Baselines(first, work / "rugby", seed));
    Print(9, "determinism",
          Determinism(work / "run_a", work / "run_b", static_cast<int>(config.models.size())));
    Print(10, "tally conservation",
          {max_tally_sum <= kTallyTolerance && audited_boards > 0,
           Fmt("max |sum of tallies| %.3g over %d boards (tol %.0e)", max_tally_sum,
               audited_boards, kTallyTolerance)});
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d criterion failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
