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

#ifndef METARENA_RUNNER_CONFIG_H_
#define METARENA_RUNNER_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "metarena/agent/types.h"
#include "metarena/game/undercover.h"
#include "metarena/llm/http_backend.h"
#include "metarena/llm/request.h"
#include "metarena/pool/experience_pool.h"
#include "metarena/reasoner/hypothesis.h"

namespace metarena::runner {

enum class GameKind { kUndercover, kTaboo };
std::string_view GameKindName(GameKind g);
GameKind ParseGameKind(std::string_view s);

// live: HTTP only. record: wraps the live backend (or the script, when one
// is given) and writes the cassette. replay: cassette only, misses fail.
// scripted: the deterministic script.
enum class BackendMode { kLive, kRecord, kReplay, kScripted };
std::string_view BackendModeName(BackendMode m);
BackendMode ParseBackendMode(std::string_view s);

struct TournamentConfig {
  GameKind game = GameKind::kUndercover;
  agent::PolicyKind civilian_policy = agent::PolicyKind::kCoMetFull;
  agent::PolicyKind undercover_policy = agent::PolicyKind::kCoMetFull;
  agent::PolicyKind attacker_policy = agent::PolicyKind::kCoMetFull;
  agent::PolicyKind defender_policy = agent::PolicyKind::kCoMetFull;
  // Odd episodes swap which policy plays which side.
  bool alternate_sides = true;

  std::string dataset;
  int episodes_per_pair = 10;
  std::uint64_t seed = 0;
  int jobs = 1;

  BackendMode mode = BackendMode::kScripted;
  std::string script;
  std::string cassette;
  // Lookup-table judge; the backend judges when empty.
  std::string judge_table;
  // Pool loaded at start (when present) and saved at the end.
  std::string pool;
  // Seed records used when the pool file does not exist yet.
  std::string seed_pool;
  std::string output_dir = "out";
  std::string prompts_dir;

  game::UndercoverConfig undercover;
  int taboo_max_turns = 20;
  reasoner::HypothesisParams hypothesis;
  pool::PoolConfig pool_config;
  llm::TemperaturePolicy temperatures;
  llm::HttpBackendConfig http;
  bool llm_annotator = false;

  // Throws InvalidArgument naming the offending key.
  void Validate() const;
  nlohmann::ordered_json ToJson() const;
  // Keys absent from doc keep their current values.
  void Merge(const nlohmann::json& doc);
  static TournamentConfig FromJson(const nlohmann::json& doc);
  // Relative input paths resolve against the file's directory; output_dir
  // stays relative to the working directory.
  static TournamentConfig Load(const std::filesystem::path& path);
};

}  // namespace metarena::runner

#endif  // METARENA_RUNNER_CONFIG_H_
