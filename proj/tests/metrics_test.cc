// Copyright 2026 The Metarena Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "metarena/common/error.h"
#include "metarena/game/game_log.h"
#include "metarena/metrics/annotated_log.h"
#include "metarena/metrics/metrics.h"

namespace metarena::metrics {
namespace {

AnnotatedGame HandGame() {
  AnnotatedGame g;
  g.game_id = "hand";
  g.outcome = "civilians_win";
  g.players = {{1, "civilian", "comet", "bee"},
               {2, "undercover", "comet", "butterfly"},
               {3, "civilian", "comet", "bee"}};
  g.speeches = {{1, 1, "a", false, false, ""},
                {1, 2, "b", true, true, ""},
                {1, 3, "c", false, true, ""}};
  g.received = {{1, 2, 1, true, "opponent", true},  {3, 2, 1, false, "teammate", false},
                {2, 1, 1, true, "opponent", true},  {2, 3, 1, false, "teammate", false},
                {1, 3, 1, true, "teammate", true},  {3, 1, 1, true, "opponent", false}};
  g.claims = {{1, 1, "civilian", true},
              {2, 1, "unknown", false},
              {2, 2, "undercover", true},
              {3, 1, "undercover", false}};
  return g;
}

void ExpectRatio(const MetricValue& m, std::int64_t num, std::int64_t den) {
  EXPECT_EQ(m.numerator, num);
  EXPECT_EQ(m.denominator, den);
  ASSERT_TRUE(m.value.has_value());
}

TEST(MetricsTest, BalancedScore) {
  EXPECT_NEAR(Balanced(0.8, 0.2), 0.41, 1e-12);
  EXPECT_DOUBLE_EQ(Balanced(0.5, 0.5), 0.5);
  for (double a = 0.0; a <= 1.0; a += 0.125) {
    for (double b = 0.0; b <= 1.0; b += 0.125) {
      EXPECT_DOUBLE_EQ(Balanced(a, b), Balanced(b, a));
      EXPECT_LE(Balanced(a, b), (a + b) / 2.0);
    }
  }
  EXPECT_FALSE(Balanced(std::optional<double>(0.5), std::nullopt).has_value());
}

TEST(MetricsTest, CivilianRowFromHandFixture) {
  const RoleMetrics m = ComputeMetrics({HandGame()}, "comet", "civilian");
  ExpectRatio(m.wr, 1, 1);
  ExpectRatio(m.fer, 3, 4);
  ExpectRatio(m.oiaa, 2, 4);
  ExpectRatio(m.siaa, 1, 2);
  ExpectRatio(m.iisc, 1, 2);
  EXPECT_DOUBLE_EQ(*m.ppc.value, 1.0);
  EXPECT_DOUBLE_EQ(*m.fer.value, 0.75);
}

TEST(MetricsTest, UndercoverRowFromHandFixture) {
  const RoleMetrics m = ComputeMetrics({HandGame()}, "comet", "undercover");
  EXPECT_DOUBLE_EQ(*m.wr.value, 0.0);
  EXPECT_DOUBLE_EQ(*m.fer.value, 0.5);
  EXPECT_DOUBLE_EQ(*m.oiaa.value, 0.5);
  EXPECT_DOUBLE_EQ(*m.siaa.value, 0.5);
  EXPECT_DOUBLE_EQ(*m.ppc.value, 0.0);
  EXPECT_DOUBLE_EQ(*m.iisc.value, 1.0);
}

TEST(MetricsTest, EmptyDenominatorsAreUndefined) {
  AnnotatedGame g = HandGame();
  g.claims.clear();
  const RoleMetrics m = ComputeMetrics({g}, "comet", "civilian");
  EXPECT_FALSE(m.siaa.value.has_value());
  EXPECT_EQ(m.siaa.denominator, 0);
  EXPECT_FALSE(ComputeMetrics({g}, "naive", "civilian").wr.value.has_value());
}

TEST(MetricsTest, ReportRowsAndBalance) {
  const MetricsReport r = BuildReport({HandGame()}, 2);
  EXPECT_EQ(r.episodes, 1);
  EXPECT_EQ(r.invalid_episodes, 2);
  ASSERT_EQ(r.rows.size(), 2u);
  ASSERT_EQ(r.balanced.size(), 1u);
  EXPECT_NEAR(*r.balanced[0].values[0], 0.25, 1e-12);  // WR 1.0 vs 0.0
  const std::string table = r.ToTextTable();
  EXPECT_NE(table.find("Civ. (CoMet)"), std::string::npos);
  EXPECT_NE(table.find("Balanced (CoMet)"), std::string::npos);
  EXPECT_NE(table.find("invalid (excluded): 2"), std::string::npos);
  EXPECT_EQ(r.ToJson()["rows"][0]["fer"]["numerator"], 3);
  EXPECT_EQ(r.ToCsv().substr(0, 35), "policy,role,wr,ppc,iisc,fer,siaa,oi");
}

TEST(MetricsTest, AnnotatedJsonRoundTrip) {
  const std::vector<AnnotatedGame> games{HandGame(), HandGame()};
  const std::string text = ToJsonLines(games);
  const auto back = AnnotatedFromJsonLines(text);
  EXPECT_EQ(ToJsonLines(back), text);
}

game::EventLog HandLog() {
  game::EventLog log;
  log.Append("setup", 0, "system",
             {{"game_id", "hand"},
              {"game", "undercover"},
              {"players",
               {{{"id", "P1"}, {"role", "civilian"}, {"policy", "comet"}, {"word", "bee"}},
                {{"id", "P2"}, {"role", "undercover"}, {"policy", "comet"}, {"word", "butterfly"}},
                {{"id", "P3"}, {"role", "civilian"}, {"policy", "comet"}, {"word", "bee"}}}}});
  auto entry = [](const char* speaker, const char* label, const char* judgment) {
    return nlohmann::json{{"speaker", speaker}, {"round", 1}, {"label", label},
                          {"judgment", judgment}};
  };
  log.Append("analysis", 1, "P1",
             {{"entries", {entry("P2", "mismatch", "opponent"),
                           entry("P3", "detailed", "teammate")}}});
  log.Append("analysis", 1, "P2", {{"entries", {entry("P1", "mismatch", "opponent")}}});
  log.Append("analysis", 1, "P3",
             {{"entries", {entry("P2", "broad", "undecided"),
                           entry("P1", "mismatch", "opponent")}}});
  log.Append("strategy", 1, "P2", {{"stance", "misdirect"}});
  log.Append("self_identity", 1, "P1", {{"identity", "civilian"}});
  log.Append("speech", 1, "P1", {{"utterance", "a"}});
  log.Append("speech", 1, "P2", {{"utterance", "b"}});
  log.Append("speech", 1, "P3", {{"utterance", "c"}});
  log.Append("elimination", 1, "system", {{"eliminated", "P2"}});
  log.Append("outcome", 1, "system", {{"outcome", "civilians_win"}});
  return log;
}

TEST(MetricsTest, RuleAnnotatorLabels) {
  RuleAnnotator annotator;
  const AnnotatedGame g = annotator.Annotate(HandLog());
  EXPECT_EQ(g.outcome, "civilians_win");
  ASSERT_EQ(g.speeches.size(), 3u);
  EXPECT_TRUE(g.speeches[0].leaked);
  EXPECT_TRUE(g.speeches[0].inconsistent);
  EXPECT_TRUE(g.speeches[1].leaked);
  EXPECT_TRUE(g.speeches[1].inconsistent);
  EXPECT_FALSE(g.speeches[2].leaked);
  EXPECT_FALSE(g.speeches[2].inconsistent);
  ASSERT_EQ(g.received.size(), 6u);
  // Speech of P1 heard by P2 then P3.
  EXPECT_TRUE(g.received[0].feature_valid);
  EXPECT_TRUE(g.received[0].judgment_correct);
  EXPECT_FALSE(g.received[1].feature_valid);
  EXPECT_FALSE(g.received[1].judgment_correct);
  // P3's speech was never analysed by P2.
  EXPECT_EQ(g.received[5].receiver, 2);
  EXPECT_EQ(g.received[5].judgment, "");
  ASSERT_EQ(g.claims.size(), 1u);
  EXPECT_TRUE(g.claims[0].correct);
}

TEST(MetricsTest, EliminatedPlayersStopHearing) {
  game::EventLog log = HandLog();
  log.Append("speech", 2, "P1", {{"utterance", "d"}});
  // Re-append an outcome so the log still ends with one.
  log.Append("outcome", 2, "system", {{"outcome", "civilians_win"}});
  const AnnotatedGame g = RuleAnnotator().Annotate(log);
  int round_two = 0;
  for (const ReceivedEntry& r : g.received) {
    if (r.round == 2) {
      ++round_two;
      EXPECT_NE(r.receiver, 2);
    }
  }
  EXPECT_EQ(round_two, 1);
}

TEST(MetricsTest, AnnotatorRejectsBrokenLogs) {
  game::EventLog empty;
  EXPECT_THROW(RuleAnnotator().Annotate(empty), ParseError);
  game::EventLog no_outcome = HandLog();
  game::EventLog truncated;
  for (std::size_t i = 0; i + 1 < no_outcome.events().size(); ++i) {
    const auto& e = no_outcome.events()[i];
    truncated.Append(e.event_kind, e.round, e.actor, e.payload);
  }
  EXPECT_THROW(RuleAnnotator().Annotate(truncated), ParseError);
}

TEST(MetricsTest, TabooAnnotationCarriesOutcomeOnly) {
  game::EventLog log;
  log.Append("setup", 0, "system",
             {{"game_id", "t"},
              {"game", "taboo"},
              {"players",
               {{{"id", "P1"}, {"role", "attacker"}, {"policy", "comet"}, {"word", "apple"}},
                {{"id", "P2"}, {"role", "defender"}, {"policy", "naive"}, {"word", ""}}}}});
  log.Append("speech", 1, "P1", {{"utterance", "sweet"}});
  log.Append("outcome", 1, "system", {{"outcome", "attacker_win"}});
  const AnnotatedGame g = RuleAnnotator().Annotate(log);
  EXPECT_TRUE(g.speeches.empty());
  const MetricsReport r = BuildReport({g}, 0);
  EXPECT_EQ(r.game, "taboo");
  ASSERT_EQ(r.rows.size(), 2u);
  for (const MetricsReport::Row& row : r.rows) {
    EXPECT_DOUBLE_EQ(*row.metrics.wr.value, row.role == "attacker" ? 1.0 : 0.0);
    EXPECT_FALSE(row.metrics.fer.value.has_value());
  }
}

}  // namespace
}  // namespace metarena::metrics
