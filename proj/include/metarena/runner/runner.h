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

#ifndef METARENA_RUNNER_RUNNER_H_
#define METARENA_RUNNER_RUNNER_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "metarena/agent/pipeline.h"
#include "metarena/game/game_log.h"
#include "metarena/game/undercover.h"
#include "metarena/llm/backend.h"
#include "metarena/llm/cassette.h"
#include "metarena/llm/prompts.h"
#include "metarena/llm/scripted_backend.h"
#include "metarena/metrics/annotated_log.h"
#include "metarena/metrics/metrics.h"
#include "metarena/pool/experience_pool.h"
#include "metarena/reasoner/semantic_judge.h"
#include "metarena/runner/config.h"

namespace metarena::runner {

struct EpisodeSpec {
  std::size_t pair_index = 0;
  int episode_index = 0;
  std::uint64_t seed = 0;
  game::WordPair pair;
  std::string game_id;
};

// Per-episode seed derived from the tournament seed and the episode's place
// in the schedule, so results do not depend on the worker that runs it.
EpisodeSpec MakeEpisodeSpec(const TournamentConfig& config,
                            const game::WordPair& pair, std::size_t pair_index,
                            int episode_index);

struct EpisodeResult {
  std::string game_id;
  game::EventLog log;
  bool valid = true;
  std::string error;
  std::string outcome;
  // Pool mutations requested by a metaphor-generating agent.
  pool::PoolDelta delta;
  // Per seat, in seat order.
  std::vector<agent::CallCounters> counters;
};

// Builds one backend per episode; shared state (cassette, HTTP client,
// script) lives here.
class BackendFactory {
 public:
  explicit BackendFactory(const TournamentConfig& config);
  ~BackendFactory();
  // scope names the episode so cassette entries stay per episode.
  std::unique_ptr<llm::Backend> Make(const std::string& scope);
  // Writes the cassette in record mode.
  void Finish();

 private:
  const TournamentConfig& config_;
  std::optional<llm::Script> script_;
  std::unique_ptr<llm::Backend> live_;
  std::unique_ptr<llm::Cassette> cassette_;
};

struct EpisodeServices {
  llm::Backend* backend = nullptr;
  const llm::PromptLibrary* prompts = nullptr;
  // Null means judge through the backend.
  reasoner::SemanticJudge* judge = nullptr;
  // Null disables the experience pool for the episode.
  pool::PoolSession* pool = nullptr;
};

EpisodeResult RunUndercoverEpisode(const TournamentConfig& config,
                                   const EpisodeSpec& spec,
                                   const EpisodeServices& services);
EpisodeResult RunTabooEpisode(const TournamentConfig& config,
                              const EpisodeSpec& spec,
                              const EpisodeServices& services);

// One episode with services built from config. A pool file named by
// config.pool (or config.seed_pool) is loaded, updated and saved back to
// config.pool when set.
EpisodeResult RunSingleEpisode(const TournamentConfig& config,
                               const EpisodeSpec& spec);

struct TournamentResult {
  std::vector<EpisodeResult> episodes;
  std::vector<metrics::AnnotatedGame> annotated;
  metrics::MetricsReport report;
  int invalid_episodes = 0;
  std::size_t pool_size = 0;
};

// Runs every episode, writes logs and reports under output_dir and saves
// the pool. Valid logs go to output_dir/logs, partial logs of invalid
// episodes to output_dir/logs/invalid; stale logs there are removed first. Episodes run in batches of the pool's prune interval; each
// batch reads one pool snapshot and commits in schedule order.
TournamentResult RunTournament(const TournamentConfig& config);

// Rebuilds annotations and the report from a directory of episode logs.
metrics::MetricsReport ReportFromLogs(const std::filesystem::path& log_dir,
                                      std::vector<metrics::AnnotatedGame>* out =
                                          nullptr);

}  // namespace metarena::runner

#endif  // METARENA_RUNNER_RUNNER_H_
