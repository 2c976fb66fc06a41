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

#ifndef METARENA_POOL_EXPERIENCE_POOL_H_
#define METARENA_POOL_EXPERIENCE_POOL_H_

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "metarena/reasoner/types.h"

namespace metarena::pool {

using reasoner::MetaphorCategory;

// (teammate - rival) / total_references, or 0 when nothing was referenced.
double Score(int teammate_recognitions, int rival_recognitions,
             int total_references);

// One generated metaphor and its reception. JSON keys match the stored
// layout: id, words, use, method, rival_recognitions, teammate_recognitions,
// total_references, score, metaphor, explain, comment.
struct ExperienceRecord {
  // Timestamp-shaped decimal string; larger means more recent.
  std::string id;
  std::vector<std::string> words;
  // Times the record was handed out by Retrieve().
  int use = 0;
  MetaphorCategory method = MetaphorCategory::kOntological;
  int rival_recognitions = 0;
  int teammate_recognitions = 0;
  // Independent counter, one per responder verdict. It is not required to
  // equal rival + teammate recognitions.
  int total_references = 0;
  std::string metaphor;
  std::string explain;
  std::string comment;

  double score() const {
    return Score(teammate_recognitions, rival_recognitions, total_references);
  }
  // Non-empty id, non-negative counters.
  void Validate() const;

  nlohmann::ordered_json ToJson() const;
  // The stored "score" is informational; score() is always recomputed.
  static ExperienceRecord FromJson(const nlohmann::json& j);
};

// True when id a was issued after id b.
bool MoreRecent(const std::string& a, const std::string& b);

struct PoolConfig {
  int capacity_per_category = 100;
  int prune_interval_games = 5;
  int prune_use_floor = 5;
  double prune_score_threshold = 0.3;
  int seed_size = 20;

  void Validate() const;
};

enum class ResponderRole { kTeammate, kRival };

struct ResponderVerdict {
  ResponderRole role = ResponderRole::kTeammate;
  bool recognized = false;
};

struct CategoryStats {
  MetaphorCategory category = MetaphorCategory::kOntological;
  int count = 0;
  double proportion = 0.0;
  double mean_score = 0.0;
};

// Mutations an episode wants applied to the shared pool.
struct PoolDelta {
  // One use increment per entry.
  std::vector<std::string> retrieved_ids;
  // New records; their ids are reassigned at commit time.
  std::vector<ExperienceRecord> new_records;
  std::vector<std::pair<std::string, std::vector<ResponderVerdict>>> outcomes;

  bool empty() const {
    return retrieved_ids.empty() && new_records.empty() && outcomes.empty();
  }
};

class ExperiencePool {
 public:
  explicit ExperiencePool(PoolConfig config = {});

  // Pool holding exactly the seeds. Throws InvalidArgument on duplicate ids
  // or when a category would exceed its capacity.
  static ExperiencePool Init(std::vector<ExperienceRecord> seeds,
                             PoolConfig config = {});

  // Counts each verdict: +1 total_references, and +1 teammate or rival
  // recognitions when recognized. Throws InvalidArgument for unknown ids.
  void RecordOutcome(const std::string& id,
                     std::span<const ResponderVerdict> verdicts);

  // Up to k records of the category by score (desc), ties most recent
  // first. Each returned record's use count is incremented, in the pool and in
  // the returned copy. Throws InvalidArgument when k < 1.
  std::vector<ExperienceRecord> Retrieve(MetaphorCategory category, int k);

  // Appends below capacity. At capacity, replaces the lowest-scoring record
  // (oldest on ties) only if the new score is strictly higher. Returns
  // whether the record was stored. Throws InvalidArgument on a duplicate id.
  bool InsertWithCapacity(ExperienceRecord record);

  // At a positive multiple of prune_interval_games, removes every record
  // with total_references > prune_use_floor and score < threshold. Returns
  // the number removed.
  int Prune(int games_played);

  std::vector<CategoryStats> Stats() const;
  // "Category | Count (Proportion) | Average Score" table.
  std::string StatsTable() const;

  // Applies an episode's delta; new records get fresh ids via NextId().
  void Apply(const PoolDelta& delta);

  // Next id after every id in the pool.
  std::string NextId() const;

  std::size_t size() const;
  std::size_t size(MetaphorCategory category) const;
  const std::vector<ExperienceRecord>& records(MetaphorCategory category) const;
  const ExperienceRecord* Find(const std::string& id) const;
  const PoolConfig& config() const { return config_; }

  int games_played() const { return games_played_; }
  void set_games_played(int n) { games_played_ = n; }

  nlohmann::ordered_json ToJson() const;
  static ExperiencePool FromJson(const nlohmann::json& doc,
                                 PoolConfig config = {});
  static ExperiencePool Load(const std::filesystem::path& path,
                             PoolConfig config = {});
  void Save(const std::filesystem::path& path) const;

 private:
  ExperienceRecord* FindMutable(const std::string& id);
  std::vector<ExperienceRecord>& Bucket(MetaphorCategory c);

  PoolConfig config_;
  std::map<MetaphorCategory, std::vector<ExperienceRecord>> buckets_;
  int games_played_ = 0;
};

// Per-episode view of the pool: reads come from a private snapshot and
// writes are collected into a delta for later commit.
class PoolSession {
 public:
  explicit PoolSession(ExperiencePool snapshot);

  std::vector<ExperienceRecord> Retrieve(MetaphorCategory category, int k);
  void AddRecord(ExperienceRecord record);

  const PoolDelta& delta() const { return delta_; }
  const ExperiencePool& snapshot() const { return snapshot_; }

 private:
  ExperiencePool snapshot_;
  PoolDelta delta_;
};

// Mutex-guarded pool shared by concurrent episodes.
class SharedPool {
 public:
  explicit SharedPool(ExperiencePool pool) : pool_(std::move(pool)) {}

  ExperiencePool Snapshot() const;
  void Commit(const PoolDelta& delta);
  // Counts one finished game and prunes when the interval is reached.
  // Returns the number of records removed.
  int FinishGame();
  ExperiencePool Get() const { return Snapshot(); }

 private:
  mutable std::mutex mu_;
  ExperiencePool pool_;
};

}  // namespace metarena::pool

#endif  // METARENA_POOL_EXPERIENCE_POOL_H_
