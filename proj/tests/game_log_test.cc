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

#include "metarena/game/game_log.h"

#include <fstream>

#include <gtest/gtest.h>

#include "metarena/common/error.h"
#include "metarena/game/types.h"
#include "test_util.h"

namespace metarena::game {
namespace {

EventLog Sample() {
  EventLog log;
  log.Append("setup", 0, "system", {{"game", "undercover"}});
  log.Append("speech", 1, "P2", {{"utterance", "Busy little worker."}});
  log.Append("outcome", 1, "system", {{"outcome", "draw"}});
  return log;
}

TEST(GameLogTest, TimestampsAreLogical) {
  EventLog log = Sample();
  for (std::size_t i = 0; i < log.events().size(); ++i) {
    EXPECT_EQ(log.events()[i].timestamp, static_cast<std::int64_t>(i + 1));
  }
}

TEST(GameLogTest, JsonLinesRoundTrip) {
  const EventLog log = Sample();
  const std::string text = log.ToJsonLines();
  const EventLog back = EventLog::FromJsonLines(text);
  EXPECT_EQ(back.ToJsonLines(), text);
  ASSERT_EQ(back.events().size(), 3u);
  EXPECT_EQ(back.events()[1].actor, "P2");
  EXPECT_EQ(back.events()[1].payload["utterance"], "Busy little worker.");
}

TEST(GameLogTest, EveryLineCarriesSchemaVersion) {
  const std::string text = Sample().ToJsonLines();
  std::size_t lines = 0;
  std::size_t pos = 0;
  while ((pos = text.find('\n', pos)) != std::string::npos) {
    ++lines;
    ++pos;
  }
  EXPECT_EQ(lines, 3u);
  const EventLog log = Sample();
  for (const LogEvent& e : log.events()) {
    EXPECT_EQ(e.ToJson().at("schema_version"), kLogSchemaVersion);
  }
}

TEST(GameLogTest, FileRoundTrip) {
  testing::TempDir dir("game_log");
  const auto path = dir.path() / "ep.jsonl";
  Sample().WriteFile(path);
  EXPECT_EQ(EventLog::ReadFile(path).ToJsonLines(), Sample().ToJsonLines());
}

TEST(GameLogTest, MalformedLinesRejected) {
  EXPECT_THROW(EventLog::FromJsonLines("{not json}\n"), ParseError);
  EXPECT_THROW(EventLog::FromJsonLines("{\"round\": 1}\n"), ParseError);
}

TEST(GameLogTest, PlayerNames) {
  EXPECT_EQ(PlayerName(3), "P3");
  EXPECT_EQ(ParsePlayerName("p4"), 4);
  EXPECT_EQ(ParsePlayerName("5"), 5);
  EXPECT_EQ(ParsePlayerName("system"), 0);
}

}  // namespace
}  // namespace metarena::game
