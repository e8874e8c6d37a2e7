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

// Ranking metrics: precision at k, average precision, Spearman's rank
// correlation and NDCG with n..1 relevance by actual finish.

#ifndef TALLYRANK_METRICS_HPP_
#define TALLYRANK_METRICS_HPP_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tallyrank/core.hpp"
#include "tallyrank/ingest.hpp"
#include "tallyrank/ranker.hpp"

namespace tallyrank::metrics {

using Relevance = std::map<TeamId, int>;

// |top-k(predicted) & top-k(actual)| / k.
double PrecisionAtK(std::span<const TeamId> predicted,
                    std::span<const TeamId> actual, int k);

// Mean of PrecisionAtK over k = 1..K.
double AveragePrecision(std::span<const TeamId> predicted,
                        std::span<const TeamId> actual, int k);

double MeanAveragePrecision(std::span<const double> average_precisions);

double SpearmanRs(std::span<const TeamId> predicted,
                  std::span<const TeamId> actual);

// Rank r of n gets relevance n - r + 1.
Relevance AssignRelevance(std::span<const TeamId> actual);

// DCG over the first p entries of `relevances` (already in ranked order).
double Dcg(std::span<const double> relevances, int p);

double Ndcg(std::span<const TeamId> predicted, const Relevance& relevance,
            int p);

// NDCG@p of items ordered by descending score (ties by index) against
// graded labels. Groups whose labels are all zero score 1.
double NdcgOfScores(std::span<const double> scores,
                    std::span<const double> labels, int p);

// Per-conference NDCG averaged, or NDCG over the merged league list.
enum class NdcgMode { kPerPool, kMergedLeague };

std::string_view ToString(NdcgMode mode);
NdcgMode ParseNdcgMode(std::string_view text);

struct PoolMetrics {
  std::string pool;
  int k = 0;
  double average_precision = 0.0;
  double spearman = 0.0;
  double ndcg = 0.0;
  int playoff_cutoff = 0;
  int playoff_hits = 0;
};

struct LeagueMetrics {
  Sport sport = Sport::kRugby;
  std::vector<PoolMetrics> pools;
  // AP for rugby, mAP over conferences for basketball.
  double average_precision = 0.0;
  double spearman = 0.0;
  double ndcg = 0.0;
  int playoff_hits = 0;
  int playoff_slots = 0;
};

// Both standings must cover the same teams.
LeagueMetrics Evaluate(const ranker::Standings& predicted,
                       const ranker::Standings& actual,
                       const ingest::LeagueConfig& league,
                       NdcgMode ndcg_mode = NdcgMode::kPerPool);

}  // namespace tallyrank::metrics

#endif  // TALLYRANK_METRICS_HPP_
