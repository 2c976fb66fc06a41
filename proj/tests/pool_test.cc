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

#include "metarena/pool/experience_pool.h"

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "metarena/common/error.h"
#include "metarena/common/rng.h"
#include "test_util.h"

namespace metarena::pool {
namespace {

using reasoner::MetaphorCategory;

ExperienceRecord Rec(const std::string& id, int t, int r, int total,
                     MetaphorCategory c = MetaphorCategory::kOntological) {
  ExperienceRecord rec;
  rec.id = id;
  rec.words = {"bee", "butterfly"};
  rec.method = c;
  rec.teammate_recognitions = t;
  rec.rival_recognitions = r;
  rec.total_references = total;
  rec.metaphor = "m" + id;
  return rec;
}

std::string Id(int n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "2025%016d", n);
  return buf;
}

TEST(PoolTest, ScoreFormula) {
  EXPECT_DOUBLE_EQ(Score(7, 1, 12), 0.5);
  EXPECT_DOUBLE_EQ(Score(0, 0, 0), 0.0);
  EXPECT_DOUBLE_EQ(Score(1, 3, 4), -0.5);
  EXPECT_DOUBLE_EQ(Rec("1", 2, 0, 4).score(), 0.5);
}

TEST(PoolTest, SeedPoolLoads) {
  const ExperiencePool p = ExperiencePool::Load(testing::DataPath("seed_pool.json"));
  EXPECT_EQ(p.size(), 20u);
  EXPECT_EQ(p.size(MetaphorCategory::kOntological), 7u);
  EXPECT_EQ(p.size(MetaphorCategory::kStructural), 7u);
  EXPECT_EQ(p.size(MetaphorCategory::kSpatial), 6u);
  const ExperienceRecord* first = p.Find("20250101000000000001");
  ASSERT_NE(first, nullptr);
  EXPECT_DOUBLE_EQ(first->score(), 0.5);
  EXPECT_EQ(first->use, 3);
}

TEST(PoolTest, RecordOutcomeCounts) {
  ExperiencePool p = ExperiencePool::Init({Rec(Id(1), 0, 0, 0)});
  const std::vector<ResponderVerdict> v{{ResponderRole::kTeammate, true},
                                        {ResponderRole::kRival, false},
                                        {ResponderRole::kRival, true}};
  p.RecordOutcome(Id(1), v);
  const ExperienceRecord* r = p.Find(Id(1));
  EXPECT_EQ(r->total_references, 3);
  EXPECT_EQ(r->teammate_recognitions, 1);
  EXPECT_EQ(r->rival_recognitions, 1);
  EXPECT_THROW(p.RecordOutcome("nope", v), InvalidArgument);
}

TEST(PoolTest, RetrieveOrdersByScoreThenRecency) {
  ExperiencePool p = ExperiencePool::Init(
      {Rec(Id(1), 1, 0, 2), Rec(Id(2), 1, 0, 1), Rec(Id(3), 1, 0, 2),
       Rec(Id(4), 0, 0, 0), Rec(Id(5), 1, 0, 1, MetaphorCategory::kSpatial)});
  const auto got = p.Retrieve(MetaphorCategory::kOntological, 3);
  ASSERT_EQ(got.size(), 3u);
  EXPECT_EQ(got[0].id, Id(2));
  EXPECT_EQ(got[1].id, Id(3));
  EXPECT_EQ(got[2].id, Id(1));
  EXPECT_EQ(got[0].use, 1);
  EXPECT_EQ(p.Find(Id(2))->use, 1);
  EXPECT_EQ(p.Find(Id(4))->use, 0);
  EXPECT_EQ(p.Retrieve(MetaphorCategory::kStructural, 2).size(), 0u);
  EXPECT_THROW(p.Retrieve(MetaphorCategory::kSpatial, 0), InvalidArgument);
}

TEST(PoolTest, CapacityNeverExceededAndMatchesReference) {
  PoolConfig cfg;
  cfg.capacity_per_category = 10;
  ExperiencePool p(cfg);
  std::vector<ExperienceRecord> ref;
  Rng rng(31);
  for (int n = 1; n <= 10000; ++n) {
    const int total = static_cast<int>(rng.Below(10));
    const int t = total == 0 ? 0 : static_cast<int>(rng.Below(total + 1));
    const int r = total == 0 ? 0 : static_cast<int>(rng.Below(total - t + 1));
    ExperienceRecord rec = Rec(Id(n), t, r, total);
    const bool stored = p.InsertWithCapacity(rec);
    bool expect = true;
    if (ref.size() < 10) {
      ref.push_back(rec);
    } else {
      std::size_t w = 0;
      for (std::size_t i = 1; i < ref.size(); ++i) {
        if (ref[i].score() < ref[w].score() ||
            (ref[i].score() == ref[w].score() && ref[i].id < ref[w].id)) {
          w = i;
        }
      }
      expect = rec.score() > ref[w].score();
      if (expect) ref[w] = rec;
    }
    ASSERT_EQ(stored, expect) << n;
    ASSERT_LE(p.size(MetaphorCategory::kOntological), 10u);
  }
  std::set<std::string> a;
  std::set<std::string> b;
  for (const auto& r : p.records(MetaphorCategory::kOntological)) a.insert(r.id);
  for (const auto& r : ref) b.insert(r.id);
  EXPECT_EQ(a, b);
}

TEST(PoolTest, DuplicateIdsRejected) {
  ExperiencePool p = ExperiencePool::Init({Rec(Id(1), 0, 0, 0)});
  EXPECT_THROW(p.InsertWithCapacity(Rec(Id(1), 0, 0, 0)), InvalidArgument);
  EXPECT_THROW(ExperiencePool::Init({Rec(Id(1), 0, 0, 0), Rec(Id(1), 0, 0, 0)}),
               InvalidArgument);
  EXPECT_THROW(p.InsertWithCapacity(Rec("", 0, 0, 0)), InvalidArgument);
  EXPECT_THROW(p.InsertWithCapacity(Rec(Id(2), -1, 0, 0)), InvalidArgument);
}

TEST(PoolTest, PruneOnlyAtInterval) {
  auto make = [] {
    return ExperiencePool::Init({Rec(Id(1), 1, 1, 6),    // score 0, heavily used
                                 Rec(Id(2), 0, 0, 5),    // at the floor
                                 Rec(Id(3), 5, 0, 6),    // good
                                 Rec(Id(4), 2, 0, 7)});  // 0.2857 < 0.3
  };
  ExperiencePool p = make();
  EXPECT_EQ(p.Prune(4), 0);
  EXPECT_EQ(p.Prune(0), 0);
  EXPECT_EQ(p.size(), 4u);
  EXPECT_EQ(p.Prune(5), 2);
  EXPECT_EQ(p.Find(Id(1)), nullptr);
  EXPECT_EQ(p.Find(Id(4)), nullptr);
  EXPECT_NE(p.Find(Id(2)), nullptr);
  ExperiencePool q = make();
  EXPECT_EQ(q.Prune(10), 2);
}

TEST(PoolTest, SharedPoolPrunesEveryFifthGame) {
  SharedPool shared(ExperiencePool::Init({Rec(Id(1), 0, 0, 6)}));
  for (int g = 1; g <= 4; ++g) EXPECT_EQ(shared.FinishGame(), 0);
  EXPECT_EQ(shared.Get().size(), 1u);
  EXPECT_EQ(shared.FinishGame(), 1);
  EXPECT_EQ(shared.Get().games_played(), 5);
  EXPECT_EQ(shared.Get().size(), 0u);
}

TEST(PoolTest, ApplyDeltaAssignsFreshIds) {
  ExperiencePool p = ExperiencePool::Init({Rec(Id(7), 0, 0, 0)});
  EXPECT_EQ(p.NextId(), Id(8));
  EXPECT_EQ(ExperiencePool().NextId(), "20250101000000000000");
  PoolSession session(p);
  EXPECT_EQ(session.Retrieve(MetaphorCategory::kOntological, 1).size(), 1u);
  session.AddRecord(Rec("tmp", 0, 0, 0, MetaphorCategory::kSpatial));
  session.AddRecord(Rec("tmp", 0, 0, 0, MetaphorCategory::kSpatial));
  PoolDelta delta = session.delta();
  delta.outcomes.push_back({Id(7), {{ResponderRole::kTeammate, true}}});
  delta.outcomes.push_back({"gone", {{ResponderRole::kRival, true}}});
  EXPECT_EQ(p.Find(Id(7))->use, 0);  // the session only touched its snapshot
  p.Apply(delta);
  EXPECT_EQ(p.Find(Id(7))->use, 1);
  EXPECT_EQ(p.Find(Id(7))->teammate_recognitions, 1);
  EXPECT_NE(p.Find(Id(8)), nullptr);
  EXPECT_NE(p.Find(Id(9)), nullptr);
  EXPECT_EQ(p.size(), 3u);
}

TEST(PoolTest, MoreRecentComparesNumerically) {
  EXPECT_TRUE(MoreRecent("100", "99"));
  EXPECT_TRUE(MoreRecent(Id(2), Id(1)));
  EXPECT_FALSE(MoreRecent(Id(1), Id(1)));
}

TEST(PoolTest, JsonRoundTrip) {
  testing::TempDir dir("pool");
  ExperiencePool p = ExperiencePool::Load(testing::DataPath("seed_pool.json"));
  p.set_games_played(3);
  p.Save(dir.path() / "p.json");
  const ExperiencePool back = ExperiencePool::Load(dir.path() / "p.json");
  EXPECT_EQ(back.ToJson().dump(), p.ToJson().dump());
  EXPECT_EQ(back.games_played(), 3);
  const auto j = p.records(MetaphorCategory::kOntological).front().ToJson();
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{
                      "id", "words", "use", "method", "rival_recognitions",
                      "teammate_recognitions", "total_references", "score",
                      "metaphor", "explain", "comment"}));
}

TEST(PoolTest, MisfiledRecordRejected) {
  nlohmann::json doc = ExperiencePool::Init({Rec(Id(1), 0, 0, 0)}).ToJson();
  doc["experiences"]["SPATIAL_METAPHOR"] = doc["experiences"]["ONTOLOGICAL_METAPHOR"];
  doc["experiences"]["ONTOLOGICAL_METAPHOR"] = nlohmann::json::array();
  EXPECT_THROW(ExperiencePool::FromJson(doc), ParseError);
}

TEST(PoolTest, StatsTable) {
  const ExperiencePool p = ExperiencePool::Load(testing::DataPath("seed_pool.json"));
  const auto stats = p.Stats();
  ASSERT_EQ(stats.size(), 3u);
  EXPECT_EQ(stats[0].count, 7);
  EXPECT_NEAR(stats[0].proportion + stats[1].proportion + stats[2].proportion, 1.0,
              1e-12);
  EXPECT_NE(p.StatsTable().find("Onto. Metaphor"), std::string::npos);
}

TEST(PoolTest, ConfigValidation) {
  PoolConfig c;
  c.capacity_per_category = 0;
  EXPECT_THROW(c.Validate(), InvalidArgument);
  c = {};
  c.prune_interval_games = 0;
  EXPECT_THROW(c.Validate(), InvalidArgument);
}

}  // namespace
}  // namespace metarena::pool
