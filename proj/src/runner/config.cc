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

#include "metarena/runner/config.h"

#include <fstream>

#include "metarena/common/error.h"

namespace metarena::runner {
namespace {

template <typename T>
void Take(const nlohmann::json& doc, const char* key, T& out) {
  if (!doc.contains(key)) return;
  try {
    out = doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config key '") + key + "': " + e.what());
  }
}

void TakePolicy(const nlohmann::json& doc, const char* key,
                agent::PolicyKind& out) {
  std::string s;
  Take(doc, key, s);
  if (!s.empty()) out = agent::ParsePolicy(s);
}

}  // namespace

std::string_view GameKindName(GameKind g) {
  return g == GameKind::kTaboo ? "taboo" : "undercover";
}

GameKind ParseGameKind(std::string_view s) {
  if (s == "undercover") return GameKind::kUndercover;
  if (s == "taboo") return GameKind::kTaboo;
  throw InvalidArgument("unknown game '" + std::string(s) + "'");
}

std::string_view BackendModeName(BackendMode m) {
  switch (m) {
    case BackendMode::kLive: return "live";
    case BackendMode::kRecord: return "record";
    case BackendMode::kReplay: return "replay";
    case BackendMode::kScripted: return "scripted";
  }
  return "scripted";
}

BackendMode ParseBackendMode(std::string_view s) {
  if (s == "live") return BackendMode::kLive;
  if (s == "record") return BackendMode::kRecord;
  if (s == "replay") return BackendMode::kReplay;
  if (s == "scripted") return BackendMode::kScripted;
  throw InvalidArgument("unknown backend mode '" + std::string(s) + "'");
}

void TournamentConfig::Validate() const {
  if (dataset.empty()) throw InvalidArgument("dataset: path required");
  if (episodes_per_pair < 1) throw InvalidArgument("episodes_per_pair: must be >= 1");
  if (jobs < 1) throw InvalidArgument("jobs: must be >= 1");
  if (taboo_max_turns < 2) throw InvalidArgument("taboo_max_turns: must be >= 2");
  if (mode == BackendMode::kScripted && script.empty()) {
    throw InvalidArgument("script: required in scripted mode");
  }
  if ((mode == BackendMode::kReplay || mode == BackendMode::kRecord) &&
      cassette.empty()) {
    throw InvalidArgument("cassette: required in record and replay modes");
  }
  if (output_dir.empty()) throw InvalidArgument("output_dir: path required");
  undercover.Validate();
  hypothesis.Validate();
  pool_config.Validate();
  if (temperatures.analysis < 0 || temperatures.generation < 0) {
    throw InvalidArgument("temperatures: must be non-negative");
  }
}

nlohmann::ordered_json TournamentConfig::ToJson() const {
  nlohmann::ordered_json j;
  j["game"] = GameKindName(game);
  j["civilian_policy"] = agent::PolicyKey(civilian_policy);
  j["undercover_policy"] = agent::PolicyKey(undercover_policy);
  j["attacker_policy"] = agent::PolicyKey(attacker_policy);
  j["defender_policy"] = agent::PolicyKey(defender_policy);
  j["alternate_sides"] = alternate_sides;
  j["dataset"] = dataset;
  j["episodes_per_pair"] = episodes_per_pair;
  j["seed"] = seed;
  j["jobs"] = jobs;
  j["mode"] = BackendModeName(mode);
  j["script"] = script;
  j["cassette"] = cassette;
  j["judge_table"] = judge_table;
  j["pool"] = pool;
  j["seed_pool"] = seed_pool;
  j["output_dir"] = output_dir;
  j["prompts_dir"] = prompts_dir;
  j["n_players"] = undercover.n_players;
  j["n_undercover"] = undercover.n_undercover;
  j["max_rounds"] = undercover.max_rounds;
  j["taboo_max_turns"] = taboo_max_turns;
  j["hypothesis"] = {{"threshold", hypothesis.threshold},
                     {"feature_decay", hypothesis.feature_decay},
                     {"aspect_decay", hypothesis.aspect_decay}};
  j["pool_config"] = {
      {"capacity_per_category", pool_config.capacity_per_category},
      {"prune_interval_games", pool_config.prune_interval_games},
      {"prune_use_floor", pool_config.prune_use_floor},
      {"prune_score_threshold", pool_config.prune_score_threshold},
      {"seed_size", pool_config.seed_size}};
  j["temperatures"] = {{"analysis", temperatures.analysis},
                       {"generation", temperatures.generation}};
  j["http"] = {{"endpoint", http.endpoint},
               {"path", http.path},
               {"model", http.model},
               {"api_key_env", http.api_key_env},
               {"max_attempts", http.max_attempts},
               {"initial_backoff_ms", http.initial_backoff.count()},
               {"max_concurrent_requests", http.max_concurrent_requests},
               {"timeout_s", http.timeout.count()}};
  j["llm_annotator"] = llm_annotator;
  return j;
}

void TournamentConfig::Merge(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InvalidArgument("config must be a JSON object");
  std::string s;
  if (doc.contains("game")) {
    Take(doc, "game", s);
    game = ParseGameKind(s);
  }
  TakePolicy(doc, "civilian_policy", civilian_policy);
  TakePolicy(doc, "undercover_policy", undercover_policy);
  TakePolicy(doc, "attacker_policy", attacker_policy);
  TakePolicy(doc, "defender_policy", defender_policy);
  Take(doc, "alternate_sides", alternate_sides);
  Take(doc, "dataset", dataset);
  Take(doc, "episodes_per_pair", episodes_per_pair);
  Take(doc, "seed", seed);
  Take(doc, "jobs", jobs);
  if (doc.contains("mode")) {
    Take(doc, "mode", s);
    mode = ParseBackendMode(s);
  }
  Take(doc, "script", script);
  Take(doc, "cassette", cassette);
  Take(doc, "judge_table", judge_table);
  Take(doc, "pool", pool);
  Take(doc, "seed_pool", seed_pool);
  Take(doc, "output_dir", output_dir);
  Take(doc, "prompts_dir", prompts_dir);
  Take(doc, "n_players", undercover.n_players);
  Take(doc, "n_undercover", undercover.n_undercover);
  Take(doc, "max_rounds", undercover.max_rounds);
  Take(doc, "taboo_max_turns", taboo_max_turns);
  if (doc.contains("hypothesis")) {
    const auto& h = doc.at("hypothesis");
    Take(h, "threshold", hypothesis.threshold);
    Take(h, "feature_decay", hypothesis.feature_decay);
    Take(h, "aspect_decay", hypothesis.aspect_decay);
  }
  if (doc.contains("pool_config")) {
    const auto& p = doc.at("pool_config");
    Take(p, "capacity_per_category", pool_config.capacity_per_category);
    Take(p, "prune_interval_games", pool_config.prune_interval_games);
    Take(p, "prune_use_floor", pool_config.prune_use_floor);
    Take(p, "prune_score_threshold", pool_config.prune_score_threshold);
    Take(p, "seed_size", pool_config.seed_size);
  }
  if (doc.contains("temperatures")) {
    const auto& t = doc.at("temperatures");
    Take(t, "analysis", temperatures.analysis);
    Take(t, "generation", temperatures.generation);
  }
  if (doc.contains("http")) {
    const auto& h = doc.at("http");
    Take(h, "endpoint", http.endpoint);
    Take(h, "path", http.path);
    Take(h, "model", http.model);
    Take(h, "api_key_env", http.api_key_env);
    Take(h, "max_attempts", http.max_attempts);
    Take(h, "max_concurrent_requests", http.max_concurrent_requests);
    if (h.contains("initial_backoff_ms")) {
      http.initial_backoff =
          std::chrono::milliseconds(h.at("initial_backoff_ms").get<int>());
    }
    if (h.contains("timeout_s")) {
      http.timeout = std::chrono::seconds(h.at("timeout_s").get<int>());
    }
  }
  Take(doc, "llm_annotator", llm_annotator);
}

TournamentConfig TournamentConfig::FromJson(const nlohmann::json& doc) {
  TournamentConfig c;
  c.Merge(doc);
  return c;
}

TournamentConfig TournamentConfig::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  // Input files named in a config file are relative to that file.
  const std::filesystem::path base = path.parent_path();
  if (doc.is_object() && !base.empty()) {
    for (const char* key : {"dataset", "script", "cassette", "judge_table",
                            "pool", "seed_pool", "prompts_dir"}) {
      if (!doc.contains(key) || !doc[key].is_string()) continue;
      const std::filesystem::path p(doc[key].get<std::string>());
      if (!p.empty() && p.is_relative()) doc[key] = (base / p).lexically_normal().string();
    }
  }
  return FromJson(doc);
}

}  // namespace metarena::runner
