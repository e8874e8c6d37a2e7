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
#include <set>
#include <sstream>

#include "doctest.h"
#include "tallyrank/random.hpp"

namespace tallyrank::ranker {
namespace {

using List = std::vector<TeamId>;

ingest::GameRecord Game(int index, TeamId home, TeamId away, bool home_won = true) {
  return ingest::GameRecord{2020, index, std::move(home), std::move(away), home_won};
}

TEST_CASE("tally adds the score to the predicted winner") {
  const std::vector<ingest::GameRecord> games{Game(0, "H", "A")};
  const std::vector<GameScore> scores{MakeGameScore(0, 0.8)};
  const auto board = TallyRank(games, scores, List{"A", "H"});
  CHECK(board.at("H") == 0.8);
  CHECK(board.at("A") == -0.8);

  const std::vector<GameScore> away{MakeGameScore(0, -0.3)};
  const auto b2 = TallyRank(games, away, List{"A", "H"});
  CHECK(b2.at("A") == 0.3);
  CHECK(b2.at("H") == -0.3);
}

TEST_CASE("mirrored games cancel") {
  const std::vector<ingest::GameRecord> games{Game(0, "H", "A"), Game(1, "A", "H")};
  const std::vector<GameScore> scores{MakeGameScore(0, 0.5), MakeGameScore(1, 0.5)};
  const auto board = TallyRank(games, scores, List{"A", "H"});
  CHECK(board.at("H") == 0.0);
  CHECK(board.at("A") == 0.0);
}

TEST_CASE("actual-winner mode credits the real winner") {
  const std::vector<ingest::GameRecord> games{Game(0, "H", "A", false)};
  const std::vector<GameScore> scores{MakeGameScore(0, 0.8)};
  const auto board = TallyRank(games, scores, List{"A", "H"}, WinnerSource::kActual);
  CHECK(board.at("A") == 0.8);
  CHECK(board.at("H") == -0.8);
}

TEST_CASE("tally rejects misaligned or non-finite scores") {
  const std::vector<ingest::GameRecord> games{Game(0, "H", "A")};
  CHECK_THROWS_AS(TallyRank(games, std::vector<GameScore>{MakeGameScore(5, 1.0)}, List{"A", "H"}),
                  ValidationError);
  CHECK_THROWS_AS(TallyRank(games, std::vector<GameScore>{}, List{"A", "H"}), ValidationError);
  CHECK_THROWS_AS(
      TallyRank(games, std::vector<GameScore>{MakeGameScore(0, std::nan(""))}, List{"A", "H"}),
      RuntimeError);
}

TEST_CASE("tallies sum to zero on random seasons") {
  random::Engine rng(11);
  List teams;
  for (int i = 0; i < 15; ++i) teams.push_back("T" + std::to_string(10 + i));
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ingest::GameRecord> games;
    std::vector<GameScore> scores;
    int g = 0;
    for (std::size_t i = 0; i < teams.size(); ++i) {
      for (std::size_t j = 0; j < teams.size(); ++j) {
        if (i == j) continue;
        games.push_back(Game(g, teams[i], teams[j]));
        scores.push_back(MakeGameScore(g, random::Uniform(rng, -100.0, 100.0)));
        ++g;
      }
    }
    const auto board = TallyRank(games, scores, teams);
    CHECK(board.size() == 15);
    CHECK(std::abs(TallySum(board)) <= 1e-9);
  }
}

TEST_CASE("standings sort by tally with team-id ties") {
  CHECK(StandingsFromTally({{"A", 2.0}, {"B", 1.0}}).Order() == List{"A", "B"});
  CHECK(StandingsFromTally({{"B", 1.0}, {"A", 1.0}}).Order() == List{"A", "B"});
  CHECK(StandingsFromTally({{"A", -1.0}, {"B", 1.0}}).Order() == List{"B", "A"});

  random::Engine rng(2);
  TallyBoard board;
  for (int i = 0; i < 15; ++i) board["T" + std::to_string(i)] = random::Uniform(rng, -5, 5);
  const auto s = StandingsFromTally(board);
  s.Validate();
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.entries[i].rank == static_cast<int>(i) + 1);
}

TEST_CASE("standings validation") {
  Standings bad = StandingsFromOrder(List{"A", "B"});
  bad.entries[1].rank = 3;
  CHECK_THROWS_AS(bad.Validate(), ValidationError);
  Standings dup = StandingsFromOrder(List{"A", "B"});
  dup.entries[1].team = "A";
  CHECK_THROWS_AS(dup.Validate(), ValidationError);
}

ingest::LeagueConfig Nba() {
  ingest::LeagueConfig league;
  league.sport = Sport::kBasketball;
  league.conferences = ingest::DefaultNbaConferences();
  return league;
}

TEST_CASE("conference split yields two fifteen-team standings") {
  const auto league = Nba();
  const auto teams = league.Teams();
  REQUIRE(teams.size() == 30);
  List order = teams;
  random::Engine rng(4);
  random::Shuffle(order.begin(), order.end(), rng);
  const auto [east, west] = ConferenceSplit(StandingsFromOrder(order), league);
  CHECK(east.size() == 15);
  CHECK(west.size() == 15);
  east.Validate(false);
  west.Validate(false);
  for (const auto& e : east.entries) CHECK(league.conferences.at(e.team) == Conference::kEast);
  // Relative order is preserved.
  List east_expected;
  for (const auto& t : order) {
    if (league.conferences.at(t) == Conference::kEast) east_expected.push_back(t);
  }
  CHECK(east.Order() == east_expected);

  ingest::LeagueConfig rugby;
  CHECK_THROWS_AS(ConferenceSplit(StandingsFromOrder(List{"A", "B"}), rugby), ValidationError);
}

TEST_CASE("naive baseline copies the prior season") {
  const auto prior = StandingsFromOrder(List{"A", "B", "C"});
  CHECK(NaiveBaseline(prior, List{"C", "A", "B"}).Order() == List{"A", "B", "C"});
  CHECK_THROWS_AS(NaiveBaseline(prior, List{"A", "B", "D"}), ValidationError);
  CHECK_THROWS_AS(NaiveBaseline(prior, List{"A", "B"}), ValidationError);
}

TEST_CASE("randomized baseline is seeded") {
  List teams;
  for (int i = 0; i < 15; ++i) teams.push_back("T" + std::to_string(i));
  const auto a = RandomizedBaseline(teams, kRandomTrials, 42);
  const auto b = RandomizedBaseline(teams, kRandomTrials, 42);
  const auto c = RandomizedBaseline(teams, kRandomTrials, 43);
  CHECK(a.size() == 30);
  CHECK(a == b);
  CHECK(a != c);
  std::set<List> distinct;
  for (const auto& s : a) {
    s.Validate(false);
    List sorted = s.Order();
    std::sort(sorted.begin(), sorted.end());
    List expected = teams;
    std::sort(expected.begin(), expected.end());
    CHECK(sorted == expected);
    distinct.insert(s.Order());
  }
  CHECK(distinct.size() > 1);
  // Input order does not matter.
  List reversed(teams.rbegin(), teams.rend());
  CHECK(RandomizedBaseline(reversed, kRandomTrials, 42) == a);
}

TEST_CASE("standings csv round trip") {
  const auto s = StandingsFromTally({{"A", 2.5}, {"B", -0.125}, {"C", -2.375}});
  std::ostringstream out;
  WriteStandingsCsv(out, s);
  const auto back = ParseStandingsCsv(out.str(), "mem");
  CHECK(back.Order() == s.Order());
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(back.entries[i].tally == s.entries[i].tally);
  CHECK_THROWS_AS(ParseStandingsCsv("rank,team\n1,A\n", "mem"), ValidationError);
}

TEST_CASE("baseline kind names") {
  CHECK(ParseBaselineKind("naive") == BaselineKind::kNaivePreviousSeason);
  CHECK(ParseBaselineKind("randomized") == BaselineKind::kRandomized);
  CHECK_THROWS_AS(ParseBaselineKind("oracle"), ValidationError);
}

}  // namespace
}  // namespace tallyrank::ranker
