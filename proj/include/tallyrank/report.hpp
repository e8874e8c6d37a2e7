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

// Experiment reports as CSV, JSON and a plain-text results table.

#ifndef TALLYRANK_REPORT_HPP_
#define TALLYRANK_REPORT_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tallyrank/metrics.hpp"
#include "tallyrank/pipeline.hpp"
#include "tallyrank/ranker.hpp"

namespace tallyrank::report {

enum class Format { kCsv, kJson, kText };

std::string_view ToString(Format format);
Format ParseFormat(std::string_view text);
// report.csv, report.json or report.txt.
std::string DefaultFileName(Format format);

// "mAP" for basketball, "AP" for rugby.
std::string_view PrecisionLabel(Sport sport);

std::string Render(const pipeline::Report& report, Format format);
void WriteReport(const pipeline::Report& report, Format format,
                 const std::string& path);

// The metric columns shared by the CSV and JSON forms.
struct MetricRow {
  std::string model;
  std::string league;
  double average_precision = 0.0;
  double spearman = 0.0;
  double ndcg = 0.0;
  std::optional<double> average_precision_std;
  std::optional<double> spearman_std;
  std::optional<double> ndcg_std;

  bool operator==(const MetricRow&) const = default;
};

std::vector<MetricRow> ParseCsvRows(std::string_view text);
std::vector<MetricRow> ParseJsonRows(std::string_view text);

std::string StandingsJson(const ranker::Standings& standings);

// A single metrics row under the CSV header, for ad hoc evaluations.
std::string MetricsCsv(std::string_view model, Sport sport,
                       const metrics::LeagueMetrics& metrics);

}  // namespace tallyrank::report

#endif  // TALLYRANK_REPORT_HPP_
