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
#include <cstdio>
#include <fstream>
#include <set>

#include "metarena/common/error.h"

namespace metarena::pool {
namespace {

constexpr int kPoolSchemaVersion = 1;
constexpr char kFirstId[] = "20250101000000000000";

bool IsDecimal(const std::string& s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string IncrementDecimal(std::string s) {
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    if (*it != '9') {
      ++*it;
      return s;
    }
    *it = '0';
  }
  return "1" + s;
}

// Orders a bucket for retrieval: best score first, most recent on ties.
bool RetrievalOrder(const ExperienceRecord& a, const ExperienceRecord& b) {
  const double sa = a.score();
  const double sb = b.score();
  if (sa != sb) return sa > sb;
  return MoreRecent(a.id, b.id);
}

}  // namespace

double Score(int teammate_recognitions, int rival_recognitions,
             int total_references) {
  if (total_references <= 0) return 0.0;
  return static_cast<double>(teammate_recognitions - rival_recognitions) /
         static_cast<double>(total_references);
}

bool MoreRecent(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return a.size() > b.size();
  return a > b;
}

void ExperienceRecord::Validate() const {
  if (id.empty()) throw InvalidArgument("experience record without an id");
  if (use < 0 || rival_recognitions < 0 || teammate_recognitions < 0 ||
      total_references < 0) {
    throw InvalidArgument("experience record " + id +
                          " has a negative counter");
  }
}

nlohmann::ordered_json ExperienceRecord::ToJson() const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["words"] = words;
  j["use"] = use;
  j["method"] = reasoner::CategoryKey(method);
  j["rival_recognitions"] = rival_recognitions;
  j["teammate_recognitions"] = teammate_recognitions;
  j["total_references"] = total_references;
  j["score"] = score();
  j["metaphor"] = metaphor;
  j["explain"] = explain;
  j["comment"] = comment;
  return j;
}

ExperienceRecord ExperienceRecord::FromJson(const nlohmann::json& j) {
  ExperienceRecord r;
  try {
    r.id = j.at("id").get<std::string>();
    r.words = j.value("words", std::vector<std::string>{});
    r.use = j.value("use", 0);
    r.method = reasoner::ParseCategory(j.at("method").get<std::string>());
    r.rival_recognitions = j.value("rival_recognitions", 0);
    r.teammate_recognitions = j.value("teammate_recognitions", 0);
    r.total_references = j.value("total_references", 0);
    r.metaphor = j.value("metaphor", "");
    r.explain = j.value("explain", "");
    r.comment = j.value("comment", "");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("experience record: ") + e.what());
  }
  r.Validate();
  return r;
}

void PoolConfig::Validate() const {
  if (capacity_per_category <= 0 || prune_interval_games <= 0 ||
      prune_use_floor <= 0 || seed_size <= 0) {
    throw InvalidArgument("pool config counts must be positive");
  }
  if (!(prune_score_threshold >= 0.0 && prune_score_threshold <= 1.0)) {
    throw InvalidArgument("prune_score_threshold must lie in [0, 1]");
  }
}

ExperiencePool::ExperiencePool(PoolConfig config) : config_(config) {
  config_.Validate();
  for (MetaphorCategory c : reasoner::kAllCategories) buckets_[c];
}

ExperiencePool ExperiencePool::Init(std::vector<ExperienceRecord> seeds,
                                    PoolConfig config) {
  ExperiencePool pool(config);
  std::set<std::string> ids;
  for (ExperienceRecord& r : seeds) {
    r.Validate();
    if (!ids.insert(r.id).second) {
      throw InvalidArgument("duplicate seed id " + r.id);
    }
    auto& bucket = pool.Bucket(r.method);
    if (static_cast<int>(bucket.size()) >= pool.config_.capacity_per_category) {
      throw InvalidArgument("seed records exceed category capacity");
    }
    bucket.push_back(std::move(r));
  }
  return pool;
}

std::vector<ExperienceRecord>& ExperiencePool::Bucket(MetaphorCategory c) {
  return buckets_[c];
}

const std::vector<ExperienceRecord>& ExperiencePool::records(
    MetaphorCategory category) const {
  return buckets_.at(category);
}

ExperienceRecord* ExperiencePool::FindMutable(const std::string& id) {
  for (auto& [c, bucket] : buckets_) {
    for (ExperienceRecord& r : bucket) {
      if (r.id == id) return &r;
    }
  }
  return nullptr;
}

const ExperienceRecord* ExperiencePool::Find(const std::string& id) const {
  return const_cast<ExperiencePool*>(this)->FindMutable(id);
}

std::size_t ExperiencePool::size() const {
  std::size_t n = 0;
  for (const auto& [c, bucket] : buckets_) n += bucket.size();
  return n;
}

std::size_t ExperiencePool::size(MetaphorCategory category) const {
  return buckets_.at(category).size();
}

void ExperiencePool::RecordOutcome(const std::string& id,
                                   std::span<const ResponderVerdict> verdicts) {
  ExperienceRecord* r = FindMutable(id);
  if (r == nullptr) throw InvalidArgument("unknown experience id " + id);
  for (const ResponderVerdict& v : verdicts) {
    ++r->total_references;
    if (!v.recognized) continue;
    if (v.role == ResponderRole::kTeammate) {
      ++r->teammate_recognitions;
    } else {
      ++r->rival_recognitions;
    }
  }
}

std::vector<ExperienceRecord> ExperiencePool::Retrieve(
    MetaphorCategory category, int k) {
  if (k < 1) throw InvalidArgument("retrieve needs k >= 1");
  std::vector<ExperienceRecord*> order;
  for (ExperienceRecord& r : Bucket(category)) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(),
                   [](const ExperienceRecord* a, const ExperienceRecord* b) {
                     return RetrievalOrder(*a, *b);
                   });
  if (static_cast<int>(order.size()) > k) order.resize(k);
  std::vector<ExperienceRecord> out;
  for (ExperienceRecord* r : order) {
    ++r->use;
    out.push_back(*r);
  }
  return out;
}

bool ExperiencePool::InsertWithCapacity(ExperienceRecord record) {
  record.Validate();
  if (Find(record.id) != nullptr) {
    throw InvalidArgument("duplicate experience id " + record.id);
  }
  auto& bucket = Bucket(record.method);
  if (static_cast<int>(bucket.size()) < config_.capacity_per_category) {
    bucket.push_back(std::move(record));
    return true;
  }
  auto worst = std::min_element(
      bucket.begin(), bucket.end(),
      [](const ExperienceRecord& a, const ExperienceRecord& b) {
        if (a.score() != b.score()) return a.score() < b.score();
        return MoreRecent(b.id, a.id);
      });
  if (record.score() > worst->score()) {
    *worst = std::move(record);
    return true;
  }
  return false;
}

int ExperiencePool::Prune(int games_played) {
  if (games_played <= 0 || games_played % config_.prune_interval_games != 0) {
    return 0;
  }
  int removed = 0;
  for (auto& [c, bucket] : buckets_) {
    const auto before = bucket.size();
    std::erase_if(bucket, [&](const ExperienceRecord& r) {
      return r.total_references > config_.prune_use_floor &&
             r.score() < config_.prune_score_threshold;
    });
    removed += static_cast<int>(before - bucket.size());
  }
  return removed;
}

std::vector<CategoryStats> ExperiencePool::Stats() const {
  const double total = static_cast<double>(size());
  std::vector<CategoryStats> out;
  for (MetaphorCategory c : reasoner::kAllCategories) {
    const auto& bucket = buckets_.at(c);
    CategoryStats s{.category = c, .count = static_cast<int>(bucket.size())};
    if (!bucket.empty()) {
      double sum = 0.0;
      for (const ExperienceRecord& r : bucket) sum += r.score();
      s.mean_score = sum / static_cast<double>(bucket.size());
      s.proportion = static_cast<double>(bucket.size()) / total;
    }
    out.push_back(s);
  }
  return out;
}

std::string ExperiencePool::StatsTable() const {
  std::string out = "Category        | Count (Proportion) | Average Score\n";
  out += "----------------+--------------------+--------------\n";
  for (const CategoryStats& s : Stats()) {
    const char* label = s.category == MetaphorCategory::kOntological
                            ? "Onto. Metaphor"
                        : s.category == MetaphorCategory::kStructural
                            ? "Stru. Metaphor"
                            : "Spat. Metaphor";
    char line[128];
    std::snprintf(line, sizeof line, "%-15s | %5d (%3.0f%%)       | %5.2f\n",
                  label, s.count, s.proportion * 100.0, s.mean_score);
    out += line;
  }
  return out;
}

std::string ExperiencePool::NextId() const {
  std::string best;
  for (const auto& [c, bucket] : buckets_) {
    for (const ExperienceRecord& r : bucket) {
      if (IsDecimal(r.id) && (best.empty() || MoreRecent(r.id, best))) {
        best = r.id;
      }
    }
  }
  return best.empty() ? std::string(kFirstId) : IncrementDecimal(best);
}

void ExperiencePool::Apply(const PoolDelta& delta) {
  for (const std::string& id : delta.retrieved_ids) {
    if (ExperienceRecord* r = FindMutable(id)) ++r->use;
  }
  for (const auto& [id, verdicts] : delta.outcomes) {
    if (FindMutable(id) != nullptr) RecordOutcome(id, verdicts);
  }
  for (ExperienceRecord r : delta.new_records) {
    r.id = NextId();
    InsertWithCapacity(std::move(r));
  }
}

nlohmann::ordered_json ExperiencePool::ToJson() const {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kPoolSchemaVersion;
  doc["games_played"] = games_played_;
  nlohmann::ordered_json experiences = nlohmann::ordered_json::object();
  for (MetaphorCategory c : reasoner::kAllCategories) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const ExperienceRecord& r : buckets_.at(c)) list.push_back(r.ToJson());
    experiences[std::string(reasoner::CategoryKey(c))] = std::move(list);
  }
  doc["experiences"] = std::move(experiences);
  return doc;
}

ExperiencePool ExperiencePool::FromJson(const nlohmann::json& doc,
                                        PoolConfig config) {
  std::vector<ExperienceRecord> records;
  int games_played = 0;
  try {
    if (doc.is_array()) {
      for (const nlohmann::json& j : doc) {
        records.push_back(ExperienceRecord::FromJson(j));
      }
    } else {
      games_played = doc.value("games_played", 0);
      for (const auto& [key, list] : doc.at("experiences").items()) {
        const MetaphorCategory c = reasoner::ParseCategory(key);
        for (const nlohmann::json& j : list) {
          ExperienceRecord r = ExperienceRecord::FromJson(j);
          if (r.method != c) {
            throw ParseError("record " + r.id + " filed under " + key);
          }
          records.push_back(std::move(r));
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("pool document: ") + e.what());
  }
  ExperiencePool pool = Init(std::move(records), config);
  pool.games_played_ = games_played;
  return pool;
}

ExperiencePool ExperiencePool::Load(const std::filesystem::path& path,
                                    PoolConfig config) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read pool file " + path.string());
  try {
    return FromJson(nlohmann::json::parse(in), config);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("pool file " + path.string() + ": " + e.what());
  }
}

void ExperiencePool::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write pool file " + path.string());
  out << ToJson().dump(2) << '\n';
}

PoolSession::PoolSession(ExperiencePool snapshot)
    : snapshot_(std::move(snapshot)) {}

std::vector<ExperienceRecord> PoolSession::Retrieve(MetaphorCategory category,
                                                    int k) {
  std::vector<ExperienceRecord> out = snapshot_.Retrieve(category, k);
  for (const ExperienceRecord& r : out) delta_.retrieved_ids.push_back(r.id);
  return out;
}

void PoolSession::AddRecord(ExperienceRecord record) {
  delta_.new_records.push_back(std::move(record));
}

ExperiencePool SharedPool::Snapshot() const {
  std::lock_guard lock(mu_);
  return pool_;
}

void SharedPool::Commit(const PoolDelta& delta) {
  std::lock_guard lock(mu_);
  pool_.Apply(delta);
}

int SharedPool::FinishGame() {
  std::lock_guard lock(mu_);
  pool_.set_games_played(pool_.games_played() + 1);
  return pool_.Prune(pool_.games_played());
}

}  // namespace metarena::pool
