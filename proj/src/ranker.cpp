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

#include "tallyrank/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "tallyrank/csv.hpp"
#include "tallyrank/random.hpp"

namespace tallyrank::ranker {

std::vector<TeamId> Standings::Order() const {
  std::vector<TeamId> order;
  order.reserve(entries.size());
  for (const auto& e : entries) order.push_back(e.team);
  return order;
}

void Standings::Validate(bool check_tallies) const {
  std::set<TeamId> seen;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.rank != static_cast<int>(i) + 1) {
      throw ValidationError("standings '" + tag + "': rank " +
                            std::to_string(e.rank) + " at position " +
                            std::to_string(i + 1));
    }
    if (!seen.insert(e.team).second) {
      throw ValidationError("standings '" + tag + "': team " + e.team +
                            " listed twice");
    }
    if (check_tallies && i > 0 && entries[i - 1].tally < e.tally) {
      throw ValidationError("standings '" + tag + "': tallies increase at rank " +
                            std::to_string(e.rank));
    }
  }
}

std::string_view ToString(BaselineKind kind) {
  return kind == BaselineKind::kNaivePreviousSeason ? "naive" : "randomized";
}

BaselineKind ParseBaselineKind(std::string_view text) {
  if (text == "naive" || text == "naive_previous_season") {
    return BaselineKind::kNaivePreviousSeason;
  }
  if (text == "randomized" || text == "random") return BaselineKind::kRandomized;
  throw ValidationError("unknown baseline kind '" + std::string(text) +
                        "' (expected naive or randomized)");
}

TallyBoard TallyRank(std::span<const ingest::GameRecord> games,
                     std::span<const GameScore> scores,
                     std::span<const TeamId> teams, WinnerSource winner) {
  if (games.size() != scores.size()) {
    throw ValidationError("tally rank: " + std::to_string(games.size()) +
                          " games but " + std::to_string(scores.size()) +
                          " scores");
  }
  TallyBoard board;
  for (const auto& t : teams) board.emplace(t, 0.0);
  for (std::size_t i = 0; i < games.size(); ++i) {
    const auto& g = games[i];
    const auto& s = scores[i];
    if (s.game_index != g.game_index) {
      throw ValidationError("tally rank: score " + std::to_string(i) +
                            " is for game " + std::to_string(s.game_index) +
                            ", expected " + std::to_string(g.game_index));
    }
    if (!std::isfinite(s.score)) {
      throw RuntimeError("tally rank: non-finite score for game " +
                         std::to_string(g.game_index));
    }
    auto home = board.find(g.home_team);
    auto away = board.find(g.away_team);
    if (home == board.end() || away == board.end()) {
      throw ValidationError("tally rank: game " + std::to_string(g.game_index) +
                            " involves a team outside the season roster");
    }
    const bool home_wins =
        winner == WinnerSource::kPredicted ? s.predicted_home_win : g.home_won;
    const double m = std::abs(s.score);
    (home_wins ? home : away)->second += m;
    (home_wins ? away : home)->second -= m;
  }
  return board;
}

double TallySum(const TallyBoard& board) {
  double sum = 0.0;
  for (const auto& [team, tally] : board) sum += tally;
  return sum;
}

Standings StandingsFromTally(const TallyBoard& board, std::string tag) {
  if (board.empty()) throw ValidationError("cannot rank an empty tally board");
  // std::map iterates in ascending team id, so a stable sort keeps the tie
  // rule.
  std::vector<std::pair<TeamId, double>> items(board.begin(), board.end());
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  Standings out;
  out.tag = std::move(tag);
  for (std::size_t i = 0; i < items.size(); ++i) {
    out.entries.push_back({static_cast<int>(i) + 1, items[i].first, items[i].second});
  }
  return out;
}

Standings StandingsFromOrder(std::span<const TeamId> order, std::string tag) {
  Standings out;
  out.tag = std::move(tag);
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.entries.push_back({static_cast<int>(i) + 1, order[i], 0.0});
  }
  out.Validate(false);
  return out;
}

std::pair<Standings, Standings> ConferenceSplit(
    const Standings& standings, const ingest::LeagueConfig& league) {
  if (league.sport != Sport::kBasketball) {
    throw ValidationError("conference split needs a basketball league; " +
                          std::string(ToString(league.sport)) +
                          " is a single pool");
  }
  Standings east{"East", {}};
  Standings west{"West", {}};
  for (const auto& e : standings.entries) {
    auto it = league.conferences.find(e.team);
    if (it == league.conferences.end() || it->second == Conference::kNone) {
      throw ValidationError("team " + e.team + " has no conference");
    }
    Standings& target = it->second == Conference::kEast ? east : west;
    target.entries.push_back(
        {static_cast<int>(target.entries.size()) + 1, e.team, e.tally});
  }
  return {std::move(east), std::move(west)};
}

Standings NaiveBaseline(const Standings& previous_actual,
                        std::span<const TeamId> test_teams) {
  if (previous_actual.entries.empty()) {
    throw ValidationError("naive baseline needs the prior season's standings");
  }
  std::set<TeamId> prior;
  for (const auto& e : previous_actual.entries) prior.insert(e.team);
  std::set<TeamId> test(test_teams.begin(), test_teams.end());
  for (const auto& t : prior) {
    if (!test.count(t)) {
      throw ValidationError("naive baseline: " + t +
                            " played the prior season but not the test season");
    }
  }
  for (const auto& t : test) {
    if (!prior.count(t)) {
      throw ValidationError("naive baseline: " + t +
                            " has no prior-season standing");
    }
  }
  return previous_actual;
}

std::vector<Standings> RandomizedBaseline(std::span<const TeamId> teams,
                                          int trials, std::uint64_t rng_seed) {
  if (teams.empty()) throw ValidationError("randomized baseline needs teams");
  if (trials < 1) throw ValidationError("randomized baseline needs >= 1 trial");
  random::Engine rng(rng_seed);
  std::vector<TeamId> order(teams.begin(), teams.end());
  std::sort(order.begin(), order.end());
  std::vector<Standings> out;
  out.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    std::vector<TeamId> perm = order;
    random::Shuffle(perm.begin(), perm.end(), rng);
    out.push_back(StandingsFromOrder(perm, "randomized"));
  }
  return out;
}

void WriteStandingsCsv(std::ostream& out, const Standings& standings) {
  out << "rank,team,tally\n";
  for (const auto& e : standings.entries) {
    out << e.rank << ',' << csv::EscapeField(e.team) << ','
        << csv::FormatDouble(e.tally) << '\n';
  }
}

Standings ParseStandingsCsv(std::string_view text, const std::string& path) {
  csv::Table table = csv::Parse(text, path);
  if (table.header != std::vector<std::string>{"rank", "team", "tally"}) {
    throw ParseError(path, 1, "expected header rank,team,tally");
  }
  Standings out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    auto rank = csv::ParseInt(row[0]);
    auto tally = csv::ParseDouble(row[2]);
    if (!rank) throw ParseError(path, table.LineOf(i), "bad rank '" + row[0] + "'");
    if (!tally) throw ParseError(path, table.LineOf(i), "bad tally '" + row[2] + "'");
    if (row[1].empty()) throw ParseError(path, table.LineOf(i), "empty team");
    out.entries.push_back({static_cast<int>(*rank), row[1], *tally});
  }
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const auto& a, const auto& b) { return a.rank < b.rank; });
  try {
    out.Validate(false);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return out;
}

Standings ReadStandingsCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open standings file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  Standings s = ParseStandingsCsv(text.str(), path);
  return s;
}

void WriteTrialsCsv(std::ostream& out, std::span<const Standings> trials) {
  out << "trial,rank,team,tally\n";
  for (std::size_t t = 0; t < trials.size(); ++t) {
    for (const auto& e : trials[t].entries) {
      out << t + 1 << ',' << e.rank << ',' << csv::EscapeField(e.team) << ','
          << csv::FormatDouble(e.tally) << '\n';
    }
  }
}

}  // namespace tallyrank::ranker
