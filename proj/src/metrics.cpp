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

#include "tallyrank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace tallyrank::metrics {

namespace {

void RequireSameTeams(std::span<const TeamId> predicted,
                      std::span<const TeamId> actual) {
  std::set<TeamId> a(predicted.begin(), predicted.end());
  std::set<TeamId> b(actual.begin(), actual.end());
  if (a.size() != predicted.size() || b.size() != actual.size()) {
    throw ValidationError("ranking lists a team twice");
  }
  if (a != b) {
    throw ValidationError("predicted and actual rankings cover different teams");
  }
}

void RequireCutoff(int k, std::size_t n, std::string_view what) {
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw ValidationError(std::string(what) + " cutoff " + std::to_string(k) +
                          " outside 1.." + std::to_string(n));
  }
}

}  // namespace

double PrecisionAtK(std::span<const TeamId> predicted,
                    std::span<const TeamId> actual, int k) {
  RequireSameTeams(predicted, actual);
  RequireCutoff(k, actual.size(), "precision");
  std::set<TeamId> top(actual.begin(), actual.begin() + k);
  int hits = 0;
  for (int i = 0; i < k; ++i) hits += top.count(predicted[i]) ? 1 : 0;
  return static_cast<double>(hits) / k;
}

double AveragePrecision(std::span<const TeamId> predicted,
                        std::span<const TeamId> actual, int k) {
  RequireSameTeams(predicted, actual);
  RequireCutoff(k, actual.size(), "average precision");
  // Grow both top sets incrementally: an item counts once it sits in both.
  std::set<TeamId> seen_predicted, seen_actual;
  int hits = 0;
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    const TeamId& p = predicted[i];
    const TeamId& a = actual[i];
    seen_predicted.insert(p);
    seen_actual.insert(a);
    if (p == a) {
      ++hits;
    } else {
      hits += seen_actual.count(p) ? 1 : 0;
      hits += seen_predicted.count(a) ? 1 : 0;
    }
    sum += static_cast<double>(hits) / (i + 1);
  }
  return sum / k;
}

double MeanAveragePrecision(std::span<const double> average_precisions) {
  if (average_precisions.empty()) throw ValidationError("no average precisions");
  double sum = 0.0;
  for (double ap : average_precisions) sum += ap;
  return sum / static_cast<double>(average_precisions.size());
}

double SpearmanRs(std::span<const TeamId> predicted,
                  std::span<const TeamId> actual) {
  RequireSameTeams(predicted, actual);
  const std::size_t n = actual.size();
  if (n < 2) throw ValidationError("Spearman's rs needs at least two teams");
  std::map<TeamId, std::size_t> actual_rank;
  for (std::size_t i = 0; i < n; ++i) actual_rank[actual[i]] = i;
  double sum_d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(i) - static_cast<double>(actual_rank[predicted[i]]);
    sum_d2 += d * d;
  }
  const double nn = static_cast<double>(n);
  return 1.0 - 6.0 * sum_d2 / (nn * (nn * nn - 1.0));
}

Relevance AssignRelevance(std::span<const TeamId> actual) {
  Relevance out;
  const int n = static_cast<int>(actual.size());
  for (int r = 1; r <= n; ++r) {
    if (!out.emplace(actual[r - 1], n - r + 1).second) {
      throw ValidationError("ranking lists " + actual[r - 1] + " twice");
    }
  }
  return out;
}

double Dcg(std::span<const double> relevances, int p) {
  RequireCutoff(p, relevances.size(), "DCG");
  double dcg = 0.0;
  for (int i = 1; i <= p; ++i) {
    dcg += (std::exp2(relevances[i - 1]) - 1.0) / std::log2(i + 1.0);
  }
  return dcg;
}

double Ndcg(std::span<const TeamId> predicted, const Relevance& relevance,
            int p) {
  if (predicted.size() != relevance.size()) {
    throw ValidationError("predicted ranking and relevance cover different teams");
  }
  std::vector<double> ranked;
  ranked.reserve(predicted.size());
  std::set<TeamId> seen;
  for (const auto& t : predicted) {
    auto it = relevance.find(t);
    if (it == relevance.end() || !seen.insert(t).second) {
      throw ValidationError("predicted ranking and relevance cover different teams");
    }
    ranked.push_back(it->second);
  }
  std::vector<double> ideal = ranked;
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = Dcg(ideal, p);
  if (idcg <= 0.0) throw ValidationError("NDCG needs a positive relevance");
  return Dcg(ranked, p) / idcg;
}

double NdcgOfScores(std::span<const double> scores,
                    std::span<const double> labels, int p) {
  if (scores.size() != labels.size()) {
    throw ValidationError("scores and labels differ in length");
  }
  if (scores.empty()) throw ValidationError("NDCG of an empty group");
  p = std::min<int>(p, static_cast<int>(scores.size()));
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  std::vector<double> ranked;
  for (std::size_t i : order) ranked.push_back(labels[i]);
  std::vector<double> ideal(labels.begin(), labels.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = Dcg(ideal, p);
  if (idcg <= 0.0) return 1.0;
  return Dcg(ranked, p) / idcg;
}

std::string_view ToString(NdcgMode mode) {
  return mode == NdcgMode::kPerPool ? "per_pool" : "merged";
}

NdcgMode ParseNdcgMode(std::string_view text) {
  if (text == "per_pool" || text == "per_conference") return NdcgMode::kPerPool;
  if (text == "merged" || text == "league") return NdcgMode::kMergedLeague;
  throw ValidationError("unknown NDCG mode '" + std::string(text) +
                        "' (expected per_pool or merged)");
}

namespace {

PoolMetrics EvaluatePool(const ranker::Standings& predicted,
                         const ranker::Standings& actual,
                         const ingest::LeagueConfig& league) {
  const auto p = predicted.Order();
  const auto a = actual.Order();
  RequireSameTeams(p, a);
  const int n = static_cast<int>(a.size());
  PoolMetrics m;
  m.pool = actual.tag;
  m.k = std::min(league.metric_cutoff_k, n);
  m.average_precision = AveragePrecision(p, a, m.k);
  m.spearman = n >= 2 ? SpearmanRs(p, a) : 1.0;
  m.ndcg = Ndcg(p, AssignRelevance(a), n);
  m.playoff_cutoff = std::min(league.playoff_cutoff, n);
  std::set<TeamId> top(a.begin(), a.begin() + m.playoff_cutoff);
  for (int i = 0; i < m.playoff_cutoff; ++i) m.playoff_hits += top.count(p[i]) ? 1 : 0;
  return m;
}

}  // namespace

LeagueMetrics Evaluate(const ranker::Standings& predicted,
                       const ranker::Standings& actual,
                       const ingest::LeagueConfig& league, NdcgMode ndcg_mode) {
  RequireSameTeams(predicted.Order(), actual.Order());
  LeagueMetrics out;
  out.sport = league.sport;
  if (league.sport == Sport::kBasketball) {
    auto [pe, pw] = ranker::ConferenceSplit(predicted, league);
    auto [ae, aw] = ranker::ConferenceSplit(actual, league);
    out.pools.push_back(EvaluatePool(pe, ae, league));
    out.pools.push_back(EvaluatePool(pw, aw, league));
  } else {
    ranker::Standings a = actual;
    a.tag = std::string(ToString(league.sport));
    out.pools.push_back(EvaluatePool(predicted, a, league));
  }
  std::vector<double> aps;
  double spearman = 0.0, ndcg = 0.0;
  for (const auto& pool : out.pools) {
    aps.push_back(pool.average_precision);
    spearman += pool.spearman;
    ndcg += pool.ndcg;
    out.playoff_hits += pool.playoff_hits;
    out.playoff_slots += pool.playoff_cutoff;
  }
  const double pools = static_cast<double>(out.pools.size());
  out.average_precision = MeanAveragePrecision(aps);
  out.spearman = spearman / pools;
  out.ndcg = ndcg / pools;
  if (ndcg_mode == NdcgMode::kMergedLeague && out.pools.size() > 1) {
    const auto a = actual.Order();
    out.ndcg = Ndcg(predicted.Order(), AssignRelevance(a), static_cast<int>(a.size()));
  }
  return out;
}

}  // namespace tallyrank::metrics
