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

#include "metarena/game/undercover.h"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include <gtest/gtest.h>

#include "metarena/common/error.h"
#include "metarena/common/rng.h"

namespace metarena::game {
namespace {

const WordPair kPair{"animals", "bee", "butterfly"};

UndercoverGame NewGame(std::uint64_t seed) {
  UndercoverConfig c;
  c.rng_seed = seed;
  return UndercoverGame(c, kPair);
}

void SpeakAll(UndercoverGame& g) {
  while (g.phase() == Phase::kSpeaking) {
    g.SubmitSpeech(*g.NextSpeaker(), "something small");
  }
}

// Reference tally: unique plurality target or nobody.
std::optional<PlayerId> OracleTally(const std::map<PlayerId, PlayerId>& votes) {
  std::map<PlayerId, int> n;
  for (const auto& [v, t] : votes) ++n[t];
  int best = -1;
  std::vector<PlayerId> leaders;
  for (const auto& [t, c] : n) {
    if (c > best) {
      best = c;
      leaders = {t};
    } else if (c == best) {
      leaders.push_back(t);
    }
  }
  if (leaders.size() == 1) return leaders.front();
  return std::nullopt;
}

TEST(UndercoverTest, DefaultSetupHasThreeCiviliansAndTwoUndercover) {
  UndercoverGame g = NewGame(1);
  EXPECT_EQ(g.AliveCount(Role::kCivilian), 3);
  EXPECT_EQ(g.AliveCount(Role::kUndercover), 2);
  EXPECT_EQ(g.phase(), Phase::kSpeaking);
  EXPECT_EQ(g.round(), 1);
  for (PlayerId id = 1; id <= 5; ++id) {
    EXPECT_EQ(g.word(id), g.role(id) == Role::kCivilian ? "bee" : "butterfly");
  }
}

TEST(UndercoverTest, SameSeedSameSetup) {
  UndercoverGame a = NewGame(99);
  UndercoverGame b = NewGame(99);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.speaking_order(), b.speaking_order());
}

TEST(UndercoverTest, UndercoverFrequencyIsTwoFifths) {
  std::vector<int> hits(6, 0);
  const int kSeeds = 10000;
  for (int s = 0; s < kSeeds; ++s) {
    UndercoverGame g = NewGame(static_cast<std::uint64_t>(s));
    for (PlayerId id = 1; id <= 5; ++id) {
      hits[id] += g.role(id) == Role::kUndercover ? 1 : 0;
    }
  }
  for (PlayerId id = 1; id <= 5; ++id) {
    EXPECT_NEAR(hits[id] / static_cast<double>(kSeeds), 0.4, 0.02) << id;
  }
}

TEST(UndercoverTest, RejectsBadConfigAndPairs) {
  UndercoverConfig c;
  c.n_undercover = 0;
  EXPECT_THROW(UndercoverGame(c, kPair), InvalidArgument);
  c = {};
  c.n_undercover = 3;
  EXPECT_THROW(UndercoverGame(c, kPair), InvalidArgument);
  c = {};
  c.max_rounds = 0;
  EXPECT_THROW(UndercoverGame(c, kPair), InvalidArgument);
  EXPECT_THROW(UndercoverGame({}, WordPair{"x", "Bee", "bee"}), InvalidArgument);
  EXPECT_THROW(UndercoverGame({}, WordPair{"x", "", "bee"}), InvalidArgument);
}

TEST(UndercoverTest, SpeakingOrderIsAPermutationOfAlivePlayers) {
  UndercoverGame g = NewGame(5);
  std::vector<PlayerId> order = g.speaking_order();
  std::sort(order.begin(), order.end());
  EXPECT_EQ(order, (std::vector<PlayerId>{1, 2, 3, 4, 5}));
  EXPECT_EQ(g.NextSpeakingOrder(), g.speaking_order());

  SpeakAll(g);
  std::map<PlayerId, PlayerId> votes;
  for (PlayerId id : g.AlivePlayers()) votes[id] = id == 3 ? 4 : 3;
  g.TallyVotes(votes);
  ASSERT_EQ(g.phase(), Phase::kSpeaking);
  order = g.speaking_order();
  std::sort(order.begin(), order.end());
  EXPECT_EQ(order, (std::vector<PlayerId>{1, 2, 4, 5}));
}

TEST(UndercoverTest, SpeakingOrderRejectedMidRound) {
  UndercoverGame g = NewGame(5);
  g.SubmitSpeech(*g.NextSpeaker(), "hello");
  EXPECT_THROW(g.NextSpeakingOrder(), InvalidState);
}

TEST(UndercoverTest, SpeechRules) {
  UndercoverGame g = NewGame(11);
  const PlayerId first = *g.NextSpeaker();
  const std::string word = g.word(first);
  EXPECT_THROW(g.SubmitSpeech(first, "it is a " + word), RuleViolation);
  EXPECT_THROW(g.SubmitSpeech(first, "It is a " + word + "!"), RuleViolation);
  const PlayerId second = g.speaking_order()[1];
  EXPECT_THROW(g.SubmitSpeech(second, "hello"), OutOfTurn);
  g.SubmitSpeech(first, "it likes flowers");
  EXPECT_THROW(g.SubmitSpeech(first, "again"), OutOfTurn);
  EXPECT_EQ(g.history().size(), 1u);
}

TEST(UndercoverTest, LastSpeakerMovesToVoting) {
  UndercoverGame g = NewGame(2);
  for (int i = 0; i < 4; ++i) g.SubmitSpeech(*g.NextSpeaker(), "hm");
  EXPECT_EQ(g.phase(), Phase::kSpeaking);
  g.SubmitSpeech(*g.NextSpeaker(), "hm");
  EXPECT_EQ(g.phase(), Phase::kVoting);
  EXPECT_FALSE(g.NextSpeaker().has_value());
}

TEST(UndercoverTest, TwoTwoOneSplitEliminatesNobody) {
  UndercoverGame g = NewGame(3);
  SpeakAll(g);
  g.TallyVotes(std::map<PlayerId, PlayerId>{{1, 2}, {3, 2}, {2, 1}, {4, 1}, {5, 3}});
  EXPECT_EQ(g.AlivePlayers().size(), 5u);
  EXPECT_FALSE(g.vote_history().back().eliminated.has_value());
  EXPECT_EQ(g.round(), 2);
  EXPECT_EQ(g.phase(), Phase::kSpeaking);
}

TEST(UndercoverTest, PluralityIsEliminated) {
  UndercoverGame g = NewGame(3);
  SpeakAll(g);
  g.TallyVotes(std::map<PlayerId, PlayerId>{{1, 4}, {2, 4}, {3, 4}, {5, 4}, {4, 1}});
  EXPECT_FALSE(g.alive(4));
  EXPECT_EQ(g.vote_history().back().eliminated, 4);
}

TEST(UndercoverTest, BallotValidation) {
  UndercoverGame g = NewGame(3);
  SpeakAll(g);
  const UndercoverGame before = g;
  EXPECT_THROW(g.TallyVotes(std::map<PlayerId, PlayerId>{{1, 2}, {2, 1}}),
               InvalidArgument);
  EXPECT_THROW(
      g.TallyVotes(std::map<PlayerId, PlayerId>{{1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}}),
      RuleViolation);
  const std::vector<Ballot> dup{{1, 2}, {1, 3}, {2, 1}, {3, 1}, {4, 1}, {5, 1}};
  EXPECT_THROW(g.TallyVotes(dup), InvalidArgument);
  EXPECT_EQ(g, before);
}

TEST(UndercoverTest, VoteForDeadPlayerRejected) {
  UndercoverGame g = NewGame(3);
  SpeakAll(g);
  g.TallyVotes(std::map<PlayerId, PlayerId>{{1, 4}, {2, 4}, {3, 4}, {5, 4}, {4, 1}});
  ASSERT_EQ(g.phase(), Phase::kSpeaking);
  SpeakAll(g);
  EXPECT_THROW(
      g.TallyVotes(std::map<PlayerId, PlayerId>{{1, 4}, {2, 1}, {3, 1}, {5, 1}}),
      InvalidArgument);
}

TEST(UndercoverTest, ExhaustiveFourPlayerTallyMatchesOracle) {
  // Eliminate one player so exactly four remain, then try every ballot map.
  UndercoverGame base = NewGame(8);
  SpeakAll(base);
  std::map<PlayerId, PlayerId> first;
  for (PlayerId id = 1; id <= 5; ++id) first[id] = id == 5 ? 4 : 5;
  base.TallyVotes(first);
  ASSERT_EQ(base.phase(), Phase::kSpeaking);
  SpeakAll(base);
  const std::vector<PlayerId> alive = base.AlivePlayers();
  ASSERT_EQ(alive.size(), 4u);

  int checked = 0;
  for (int code = 0; code < 256; ++code) {
    std::map<PlayerId, PlayerId> votes;
    bool self_vote = false;
    for (int k = 0, c = code; k < 4; ++k, c /= 4) {
      votes[alive[k]] = alive[c % 4];
      self_vote = self_vote || alive[k] == alive[c % 4];
    }
    UndercoverGame g = base;
    if (self_vote) {
      EXPECT_THROW(g.TallyVotes(votes), RuleViolation);
      continue;
    }
    g.TallyVotes(votes);
    const std::optional<PlayerId> expect = OracleTally(votes);
    EXPECT_EQ(g.vote_history().back().eliminated, expect);
    EXPECT_EQ(g.AlivePlayers().size(), expect ? 3u : 4u);
    ++checked;
  }
  EXPECT_EQ(checked, 81);
}

TEST(UndercoverTest, WinnerConditions) {
  // Remove both undercover players.
  UndercoverGame g = NewGame(21);
  std::vector<PlayerId> und;
  for (PlayerId id = 1; id <= 5; ++id) {
    if (g.role(id) == Role::kUndercover) und.push_back(id);
  }
  for (PlayerId target : und) {
    SpeakAll(g);
    std::map<PlayerId, PlayerId> votes;
    for (PlayerId id : g.AlivePlayers()) {
      votes[id] = id == target ? (g.AlivePlayers()[0] == target ? g.AlivePlayers()[1]
                                                               : g.AlivePlayers()[0])
                               : target;
    }
    g.TallyVotes(votes);
  }
  EXPECT_EQ(g.outcome(), Outcome::kCiviliansWin);
  EXPECT_EQ(g.phase(), Phase::kTerminal);
  EXPECT_THROW(g.SubmitSpeech(1, "x"), Error);
}

TEST(UndercoverTest, UndercoverWinsWithOneCivilianLeft) {
  UndercoverGame g = NewGame(21);
  std::vector<PlayerId> civ;
  for (PlayerId id = 1; id <= 5; ++id) {
    if (g.role(id) == Role::kCivilian) civ.push_back(id);
  }
  for (int i = 0; i < 2; ++i) {
    const PlayerId target = civ[i];
    EXPECT_EQ(g.outcome(), Outcome::kOngoing);
    SpeakAll(g);
    std::map<PlayerId, PlayerId> votes;
    const PlayerId other = target == civ[2] ? civ[1] : civ[2];
    for (PlayerId id : g.AlivePlayers()) votes[id] = id == target ? other : target;
    g.TallyVotes(votes);
  }
  EXPECT_EQ(g.AliveCount(Role::kCivilian), 1);
  EXPECT_EQ(g.outcome(), Outcome::kUndercoverWin);
}

TEST(UndercoverTest, RoundCapGivesDraw) {
  UndercoverConfig c;
  c.max_rounds = 3;
  c.rng_seed = 4;
  UndercoverGame g(c, kPair);
  while (g.phase() != Phase::kTerminal) {
    SpeakAll(g);
    // 2-2-1 split keeps everybody alive.
    g.TallyVotes(std::map<PlayerId, PlayerId>{{1, 2}, {3, 2}, {2, 1}, {4, 1}, {5, 3}});
  }
  EXPECT_EQ(g.outcome(), Outcome::kDraw);
  EXPECT_EQ(g.votes_completed(), 3);
}

TEST(UndercoverTest, RandomEpisodesTerminateAndConserve) {
  Rng rng(77);
  for (int ep = 0; ep < 300; ++ep) {
    UndercoverGame g = NewGame(rng.Next());
    int votes = 0;
    while (g.phase() != Phase::kTerminal) {
      SpeakAll(g);
      const std::vector<PlayerId> alive = g.AlivePlayers();
      std::map<PlayerId, PlayerId> ballots;
      for (PlayerId v : alive) {
        PlayerId t = v;
        while (t == v) t = alive[rng.Below(alive.size())];
        ballots[v] = t;
      }
      g.TallyVotes(ballots);
      ++votes;
      const std::size_t after = g.AlivePlayers().size();
      ASSERT_TRUE(after == alive.size() || after + 1 == alive.size());
    }
    ASSERT_LE(votes, 10);
    const int u = g.AliveCount(Role::kUndercover);
    const int c = g.AliveCount(Role::kCivilian);
    const Outcome census = u == 0   ? Outcome::kCiviliansWin
                           : c <= 1 ? Outcome::kUndercoverWin
                                    : Outcome::kDraw;
    ASSERT_EQ(g.outcome(), census);
  }
}

TEST(UndercoverTest, ReplayingActionsReproducesState) {
  auto play = [](std::uint64_t seed) {
    UndercoverGame g = NewGame(seed);
    SpeakAll(g);
    g.TallyVotes(std::map<PlayerId, PlayerId>{{1, 2}, {2, 1}, {3, 2}, {4, 2}, {5, 1}});
    return g;
  };
  EXPECT_EQ(play(12), play(12));
}

}  // namespace
}  // namespace metarena::game
