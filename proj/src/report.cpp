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

#include "tallyrank/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tallyrank/csv.hpp"

namespace tallyrank::report {

using nlohmann::ordered_json;

std::string_view ToString(Format format) {
  switch (format) {
    case Format::kCsv:
      return "csv";
    case Format::kJson:
      return "json";
    case Format::kText:
      return "text";
  }
  return "text";
}

Format ParseFormat(std::string_view text) {
  if (text == "csv") return Format::kCsv;
  if (text == "json") return Format::kJson;
  if (text == "text" || text == "text-table" || text == "txt") return Format::kText;
  throw ValidationError("unknown report format '" + std::string(text) +
                        "' (expected csv, json or text)");
}

std::string DefaultFileName(Format format) {
  switch (format) {
    case Format::kCsv:
      return "report.csv";
    case Format::kJson:
      return "report.json";
    case Format::kText:
      return "report.txt";
  }
  return "report.txt";
}

std::string_view PrecisionLabel(Sport sport) {
  return sport == Sport::kBasketball ? "mAP" : "AP";
}

namespace {

constexpr const char* kCsvHeader =
    "model,league,AP_or_mAP,spearman,ndcg,AP_or_mAP_std,spearman_std,ndcg_std,"
    "playoff_hits,playoff_slots,trials,tally_sum";

std::string Opt(const std::optional<pipeline::MetricSummary>& sd,
                double pipeline::MetricSummary::*field) {
  return sd ? csv::FormatDouble((*sd).*field) : "";
}

std::string RenderCsv(const pipeline::Report& r) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  const std::string league(ToString(r.sport));
  using S = pipeline::MetricSummary;
  for (const auto& row : r.rows) {
    out << csv::JoinRow({row.model, league, csv::FormatDouble(row.mean.average_precision),
                         csv::FormatDouble(row.mean.spearman),
                         csv::FormatDouble(row.mean.ndcg),
                         Opt(row.stddev, &S::average_precision),
                         Opt(row.stddev, &S::spearman), Opt(row.stddev, &S::ndcg),
                         csv::FormatDouble(row.mean.playoff_hits),
                         std::to_string(row.playoff_slots), std::to_string(row.trials),
                         csv::FormatDouble(row.tally_sum)})
        << '\n';
  }
  return out.str();
}

ordered_json SummaryJson(const pipeline::MetricSummary& s) {
  ordered_json j;
  j["AP_or_mAP"] = s.average_precision;
  j["spearman"] = s.spearman;
  j["ndcg"] = s.ndcg;
  j["playoff_hits"] = s.playoff_hits;
  return j;
}

ordered_json StandingsToJson(const ranker::Standings& s) {
  ordered_json j;
  j["tag"] = s.tag;
  j["entries"] = ordered_json::array();
  for (const auto& e : s.entries) {
    j["entries"].push_back({{"rank", e.rank}, {"team", e.team}, {"tally", e.tally}});
  }
  return j;
}

std::string RenderJson(const pipeline::Report& r) {
  ordered_json j;
  j["format"] = "tallyrank-report";
  j["version"] = 1;
  j["sport"] = std::string(ToString(r.sport));
  j["precision_label"] = std::string(PrecisionLabel(r.sport));
  j["train_seasons"] = r.train_seasons;
  j["test_season"] = r.test_season;
  j["rows"] = ordered_json::array();
  for (const auto& row : r.rows) {
    ordered_json o;
    o["model"] = row.model;
    o["league"] = std::string(ToString(r.sport));
    o["baseline"] = row.baseline;
    o["trials"] = row.trials;
    o["mean"] = SummaryJson(row.mean);
    o["std"] = row.stddev ? SummaryJson(*row.stddev) : ordered_json(nullptr);
    o["playoff_slots"] = row.playoff_slots;
    o["tally_sum"] = row.tally_sum;
    if (row.hyper) {
      o["hyperparameters"] = {{"margin", row.hyper->margin},
                              {"max_depth", row.hyper->max_depth},
                              {"learning_rate", row.hyper->learning_rate},
                              {"rounds", row.hyper->rounds}};
    }
    o["pools"] = ordered_json::array();
    for (const auto& p : row.pools) {
      o["pools"].push_back({{"pool", p.pool},
                            {"k", p.k},
                            {"average_precision", p.average_precision},
                            {"spearman", p.spearman},
                            {"ndcg", p.ndcg},
                            {"playoff_hits", p.playoff_hits},
                            {"playoff_cutoff", p.playoff_cutoff}});
    }
    j["rows"].push_back(std::move(o));
  }
  j["standings"] = ordered_json::object();
  for (const auto& [name, s] : r.standings) j["standings"][name] = StandingsToJson(s);
  j["settings"] = ordered_json::object();
  for (const auto& [k, v] : r.settings.values()) j["settings"][k] = v;
  return j.dump(2) + "\n";
}

std::string Fixed(double v) { return csv::FormatFixed(v, 3); }

std::string Cell(double mean, const std::optional<pipeline::MetricSummary>& sd,
                 double pipeline::MetricSummary::*field) {
  if (!sd) return Fixed(mean);
  return Fixed(mean) + " ±" + Fixed((*sd).*field);
}

std::string Pad(const std::string& s, std::size_t width) {
  // Column widths count code points so the ± sign lines up.
  std::size_t points = 0;
  for (unsigned char c : s) points += (c & 0xC0) != 0x80;
  return points >= width ? s + " " : s + std::string(width - points, ' ');
}

std::string RenderText(const pipeline::Report& r) {
  using S = pipeline::MetricSummary;
  std::ostringstream out;
  const bool nba = r.sport == Sport::kBasketball;
  out << (nba ? "Basketball results" : "Rugby results") << " (train";
  for (auto s : r.train_seasons) out << ' ' << s;
  out << ", test " << r.test_season << ")\n\n";

  std::size_t name_width = 5;
  for (const auto& row : r.rows) name_width = std::max(name_width, row.model.size());
  name_width += 2;
  const std::size_t w = 16;
  out << Pad("Model", name_width) << Pad(std::string(PrecisionLabel(r.sport)), w)
      << Pad("r_s", w) << Pad("NDCG", w) << "Playoffs\n";
  out << std::string(name_width - 2, '-') << "  " << std::string(w - 2, '-') << "  "
      << std::string(w - 2, '-') << "  " << std::string(w - 2, '-') << "  "
      << std::string(w - 2, '-') << '\n';
  for (const auto& row : r.rows) {
    std::string playoffs;
    if (row.stddev) {
      playoffs = csv::FormatFixed(row.mean.playoff_hits, 1) + " ±" +
                 csv::FormatFixed(row.stddev->playoff_hits, 1);
    } else {
      playoffs = csv::FormatFixed(row.mean.playoff_hits, 0);
    }
    playoffs += "/" + std::to_string(row.playoff_slots);
    out << Pad(row.model, name_width)
        << Pad(Cell(row.mean.average_precision, row.stddev, &S::average_precision), w)
        << Pad(Cell(row.mean.spearman, row.stddev, &S::spearman), w)
        << Pad(Cell(row.mean.ndcg, row.stddev, &S::ndcg), w) << playoffs << '\n';
  }
  return out.str();
}

}  // namespace

std::string Render(const pipeline::Report& report, Format format) {
  switch (format) {
    case Format::kCsv:
      return RenderCsv(report);
    case Format::kJson:
      return RenderJson(report);
    case Format::kText:
      return RenderText(report);
  }
  return RenderText(report);
}

void WriteReport(const pipeline::Report& report, Format format,
                 const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeError("cannot write " + path);
  out << Render(report, format);
  if (!out) throw RuntimeError("cannot write " + path);
}

std::vector<MetricRow> ParseCsvRows(std::string_view text) {
  csv::Table table = csv::Parse(text, "<report.csv>");
  const auto col = [&](std::string_view name) {
    auto c = table.Column(name);
    if (!c) throw ValidationError("report CSV lacks column " + std::string(name));
    return *c;
  };
  const std::size_t model = col("model"), league = col("league"),
                    ap = col("AP_or_mAP"), rs = col("spearman"), nd = col("ndcg");
  const auto num = [&](std::size_t r, std::size_t c) {
    auto v = csv::ParseDouble(table.rows[r][c]);
    if (!v) throw ParseError(table.path, table.LineOf(r), "bad number");
    return *v;
  };
  const auto opt = [&](std::size_t r, std::string_view name) -> std::optional<double> {
    auto c = table.Column(name);
    if (!c || table.rows[r][*c].empty()) return std::nullopt;
    return num(r, *c);
  };
  std::vector<MetricRow> rows;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    rows.push_back({table.rows[r][model], table.rows[r][league], num(r, ap), num(r, rs),
                    num(r, nd), opt(r, "AP_or_mAP_std"), opt(r, "spearman_std"),
                    opt(r, "ndcg_std")});
  }
  return rows;
}

std::vector<MetricRow> ParseJsonRows(std::string_view text) {
  std::vector<MetricRow> rows;
  try {
    const auto j = ordered_json::parse(text);
    for (const auto& o : j.at("rows")) {
      MetricRow row;
      row.model = o.at("model").get<std::string>();
      row.league = o.at("league").get<std::string>();
      row.average_precision = o.at("mean").at("AP_or_mAP").get<double>();
      row.spearman = o.at("mean").at("spearman").get<double>();
      row.ndcg = o.at("mean").at("ndcg").get<double>();
      if (!o.at("std").is_null()) {
        row.average_precision_std = o["std"].at("AP_or_mAP").get<double>();
        row.spearman_std = o["std"].at("spearman").get<double>();
        row.ndcg_std = o["std"].at("ndcg").get<double>();
      }
      rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed report JSON: ") + e.what());
  }
  return rows;
}

std::string StandingsJson(const ranker::Standings& standings) {
  return StandingsToJson(standings).dump(2) + "\n";
}

std::string MetricsCsv(std::string_view model, Sport sport,
                       const metrics::LeagueMetrics& m) {
  std::ostringstream out;
  out << "model,league,AP_or_mAP,spearman,ndcg,playoff_hits,playoff_slots\n";
  out << csv::JoinRow({std::string(model), std::string(ToString(sport)),
                       csv::FormatDouble(m.average_precision),
                       csv::FormatDouble(m.spearman), csv::FormatDouble(m.ndcg),
                       std::to_string(m.playoff_hits), std::to_string(m.playoff_slots)})
      << '\n';
  return out.str();
}

}  // namespace tallyrank::report
