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

#include "metarena/runner/runner.h"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include "metarena/agent/agents.h"
#include "metarena/agent/feedback.h"
#include "metarena/agent/view.h"
#include "metarena/common/error.h"
#include "metarena/common/rng.h"
#include "metarena/game/taboo.h"
#include "metarena/llm/http_backend.h"
#include "metarena/runner/dataset.h"

namespace metarena::runner {

using game::PlayerId;

namespace {

constexpr std::uint64_t kFeedbackStream = 0xfeedbacc;

// Forwards to an inner backend and remembers the first replay miss, which
// agents would otherwise swallow as an ordinary backend failure.
class GuardBackend : public llm::Backend {
 public:
  explicit GuardBackend(llm::Backend& inner) : inner_(inner) {}
  std::string Complete(const llm::CompletionRequest& request) override {
    try {
      return inner_.Complete(request);
    } catch (const ReplayMiss& e) {
      if (!miss_) miss_ = e.fingerprint();
      throw;
    }
  }
  const std::optional<std::string>& miss() const { return miss_; }

 private:
  llm::Backend& inner_;
  std::optional<std::string> miss_;
};

class Borrowed : public llm::Backend {
 public:
  explicit Borrowed(llm::Backend& inner) : inner_(inner) {}
  std::string Complete(const llm::CompletionRequest& r) override {
    return inner_.Complete(r);
  }

 private:
  llm::Backend& inner_;
};

class Recording : public llm::Backend {
 public:
  Recording(llm::Cassette& cassette, std::unique_ptr<llm::Backend> inner,
            const std::string& scope)
      : inner_(std::move(inner)), tape_(cassette, *inner_, scope) {}
  std::string Complete(const llm::CompletionRequest& r) override {
    return tape_.Complete(r);
  }

 private:
  std::unique_ptr<llm::Backend> inner_;
  llm::CassetteBackend tape_;
};

struct EpisodeAbort : Error {
  using Error::Error;
};

class EpisodeRecorder {
 public:
  explicit EpisodeRecorder(EpisodeResult& result) : result_(result) {}
  void Log(std::string kind, int round, std::string actor,
           nlohmann::json payload) {
    result_.log.Append(std::move(kind), round, std::move(actor),
                       std::move(payload));
  }

 private:
  EpisodeResult& result_;
};

void Flush(agent::UndercoverAgent& a, int round, EpisodeRecorder& rec) {
  for (agent::AgentEvent& e : a.TakeEvents()) {
    rec.Log(std::move(e.kind), round, game::PlayerName(a.self()),
            std::move(e.payload));
  }
}

void CheckFailures(const agent::UndercoverAgent& a, int before) {
  if (a.counters().backend_failures > before) {
    throw EpisodeAbort("backend failure for " + game::PlayerName(a.self()));
  }
}

bool Swapped(const TournamentConfig& config, const EpisodeSpec& spec) {
  return config.alternate_sides && spec.episode_index % 2 == 1;
}

void Finalize(EpisodeResult& result, EpisodeRecorder& rec,
              const std::string& outcome, int round, nlohmann::json extra) {
  result.outcome = outcome;
  extra["outcome"] = outcome;
  extra["valid"] = result.valid;
  nlohmann::json counters = nlohmann::json::array();
  for (const agent::CallCounters& c : result.counters) {
    counters.push_back(c.ToJson());
  }
  extra["counters"] = std::move(counters);
  rec.Log("outcome", round, "", std::move(extra));
}

}  // namespace

EpisodeSpec MakeEpisodeSpec(const TournamentConfig& config,
                            const game::WordPair& pair, std::size_t pair_index,
                            int episode_index) {
  EpisodeSpec spec;
  spec.pair_index = pair_index;
  spec.episode_index = episode_index;
  spec.pair = pair;
  spec.seed = MixSeed(config.seed, pair_index,
                      static_cast<std::uint64_t>(episode_index));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_p%03zu_e%02d",
                std::string(GameKindName(config.game)).c_str(), pair_index,
                episode_index);
  spec.game_id = buf;
  return spec;
}

BackendFactory::BackendFactory(const TournamentConfig& config)
    : config_(config) {
  if (!config.script.empty() && (config.mode == BackendMode::kScripted ||
                                 config.mode == BackendMode::kRecord)) {
    script_ = llm::Script::Load(config.script);
  }
  if (config.mode == BackendMode::kLive ||
      (config.mode == BackendMode::kRecord && !script_)) {
    live_ = std::make_unique<llm::HttpBackend>(config.http);
  }
  if (config.mode == BackendMode::kReplay) {
    if (!std::filesystem::exists(config.cassette)) {
      throw InvalidArgument("replay mode needs cassette " + config.cassette);
    }
    cassette_ = std::make_unique<llm::Cassette>(llm::Cassette::Load(config.cassette));
  } else if (config.mode == BackendMode::kRecord) {
    cassette_ = std::make_unique<llm::Cassette>(
        std::filesystem::exists(config.cassette)
            ? llm::Cassette::Load(config.cassette)
            : llm::Cassette());
  }
}

BackendFactory::~BackendFactory() = default;

std::unique_ptr<llm::Backend> BackendFactory::Make(const std::string& scope) {
  auto inner = [&]() -> std::unique_ptr<llm::Backend> {
    if (script_) return std::make_unique<llm::ScriptedBackend>(*script_);
    return std::make_unique<Borrowed>(*live_);
  };
  switch (config_.mode) {
    case BackendMode::kScripted:
    case BackendMode::kLive:
      return inner();
    case BackendMode::kRecord:
      return std::make_unique<Recording>(*cassette_, inner(), scope);
    case BackendMode::kReplay:
      return std::make_unique<llm::CassetteBackend>(*cassette_, scope);
  }
  throw InvalidState("unknown backend mode");
}

void BackendFactory::Finish() {
  if (config_.mode == BackendMode::kRecord && cassette_) {
    cassette_->Save(config_.cassette);
  }
}

EpisodeResult RunUndercoverEpisode(const TournamentConfig& config,
                                   const EpisodeSpec& spec,
                                   const EpisodeServices& services) {
  EpisodeResult result;
  result.game_id = spec.game_id;
  EpisodeRecorder rec(result);
  GuardBackend backend(*services.backend);

  game::UndercoverConfig gc = config.undercover;
  gc.rng_seed = spec.seed;
  game::UndercoverGame game(gc, spec.pair);

  const bool swapped = Swapped(config, spec);
  const agent::PolicyKind civ =
      swapped ? config.undercover_policy : config.civilian_policy;
  const agent::PolicyKind und =
      swapped ? config.civilian_policy : config.undercover_policy;

  std::unique_ptr<reasoner::LlmJudge> llm_judge;
  reasoner::SemanticJudge* judge = services.judge;
  if (judge == nullptr) {
    llm_judge = std::make_unique<reasoner::LlmJudge>(backend, *services.prompts);
    judge = llm_judge.get();
  }

  agent::AgentDeps deps;
  deps.backend = &backend;
  deps.prompts = services.prompts;
  deps.judge = judge;
  deps.hypothesis = config.hypothesis;
  deps.temperatures = config.temperatures;
  deps.pool = services.pool;

  std::vector<std::unique_ptr<agent::UndercoverAgent>> agents;
  nlohmann::json players = nlohmann::json::array();
  for (PlayerId id = 1; id <= game.n_players(); ++id) {
    const bool is_civ = game.role(id) == game::Role::kCivilian;
    const agent::PolicyKind policy = is_civ ? civ : und;
    agents.push_back(agent::MakeUndercoverAgent(policy, id, deps));
    players.push_back({{"id", game::PlayerName(id)},
                       {"role", game::RoleName(game.role(id))},
                       {"policy", agent::PolicyKey(policy)},
                       {"word", game.word(id)}});
  }
  rec.Log("setup", 0, "",
          {{"game_id", spec.game_id},
           {"game", "undercover"},
           {"seed", spec.seed},
           {"pair_index", spec.pair_index},
           {"episode_index", spec.episode_index},
           {"theme", spec.pair.theme},
           {"pair", {spec.pair.civilian_word, spec.pair.undercover_word}},
           {"swapped", swapped},
           {"players", players}});

  Rng feedback_rng(MixSeed(spec.seed, kFeedbackStream));
  agent::FeedbackDeps fdeps{judge, config.hypothesis, &backend,
                            services.prompts, config.temperatures};
  auto seat = [&](PlayerId id) -> agent::UndercoverAgent& {
    return *agents[static_cast<std::size_t>(id - 1)];
  };

  try {
    while (game.phase() != game::Phase::kTerminal) {
      const int round = game.round();
      if (game.phase() == game::Phase::kSpeaking) {
        if (game.spoken_this_round() == 0) {
          nlohmann::json order = nlohmann::json::array();
          for (PlayerId id : game.speaking_order()) {
            order.push_back(game::PlayerName(id));
          }
          rec.Log("speaking_order", round, "", {{"order", order}});
        }
        const PlayerId id = *game.NextSpeaker();
        agent::UndercoverAgent& a = seat(id);
        const agent::UndercoverView view = agent::MakeView(game, id);
        const int before = a.counters().backend_failures;
        std::string utterance =
            std::get<agent::SpeechAction>(agent::Act(a, view)).utterance;
        Flush(a, round, rec);
        CheckFailures(a, before);
        try {
          game.CheckSpeech(id, utterance);
        } catch (const RuleViolation& e) {
          rec.Log("rule_violation", round, game::PlayerName(id),
                  {{"utterance", utterance}, {"reason", e.what()}});
          utterance = a.FallbackSpeech(view);
        }
        game.SubmitSpeech(id, utterance);
        rec.Log("speech", round, game::PlayerName(id),
                {{"utterance", utterance}});
        if (a.last_metaphor() && a.policy() == agent::PolicyKind::kCoMetFull &&
            services.pool != nullptr) {
          agent::MetaphorFeedback fb = agent::EvaluateMetaphor(
              *a.last_metaphor(), game, id, feedback_rng, fdeps);
          services.pool->AddRecord(fb.record);
          rec.Log("metaphor_feedback", round, game::PlayerName(id), fb.ToJson());
        }
      } else {
        std::map<PlayerId, PlayerId> ballots;
        for (PlayerId id : game.AlivePlayers()) {
          agent::UndercoverAgent& a = seat(id);
          const int before = a.counters().backend_failures;
          const PlayerId target =
              std::get<agent::VoteAction>(agent::Act(a, agent::MakeView(game, id)))
                  .target;
          Flush(a, round, rec);
          CheckFailures(a, before);
          ballots[id] = target;
          rec.Log("vote", round, game::PlayerName(id),
                  {{"target", game::PlayerName(target)}});
        }
        game.TallyVotes(ballots);
        const game::VoteRecord& vr = game.vote_history().back();
        nlohmann::json tally = nlohmann::json::object();
        for (const auto& [voter, target] : vr.ballots) {
          tally[game::PlayerName(voter)] = game::PlayerName(target);
        }
        rec.Log("elimination", round, "",
                {{"eliminated", vr.eliminated
                                    ? nlohmann::json(game::PlayerName(*vr.eliminated))
                                    : nlohmann::json(nullptr)},
                 {"ballots", tally}});
      }
    }
  } catch (const Error& e) {
    result.valid = false;
    result.error = e.what();
    rec.Log("error", game.round(), "", {{"message", e.what()}});
  }
  if (backend.miss()) throw ReplayMiss(*backend.miss());

  for (const auto& a : agents) result.counters.push_back(a->counters());
  if (result.valid) {
    if (services.pool != nullptr) result.delta = services.pool->delta();
    Finalize(result, rec, std::string(game::OutcomeName(game.outcome())),
             game.round(),
             {{"rounds", game.round()}, {"votes_completed", game.votes_completed()}});
  } else {
    Finalize(result, rec, "invalid", game.round(), {{"error", result.error}});
  }
  return result;
}

EpisodeResult RunTabooEpisode(const TournamentConfig& config,
                              const EpisodeSpec& spec,
                              const EpisodeServices& services) {
  EpisodeResult result;
  result.game_id = spec.game_id;
  EpisodeRecorder rec(result);
  GuardBackend backend(*services.backend);

  const bool swapped = Swapped(config, spec);
  const std::string target = (spec.episode_index / 2) % 2 == 0
                                 ? spec.pair.civilian_word
                                 : spec.pair.undercover_word;
  game::TabooGame game(target, config.taboo_max_turns);
  const agent::PolicyKind att =
      swapped ? config.defender_policy : config.attacker_policy;
  const agent::PolicyKind def =
      swapped ? config.attacker_policy : config.defender_policy;

  agent::AgentDeps deps;
  deps.backend = &backend;
  deps.prompts = services.prompts;
  deps.hypothesis = config.hypothesis;
  deps.temperatures = config.temperatures;
  agent::TabooAgent attacker(att, game::TabooRole::kAttacker, deps);
  agent::TabooAgent defender(def, game::TabooRole::kDefender, deps);

  rec.Log("setup", 0, "",
          {{"game_id", spec.game_id},
           {"game", "taboo"},
           {"seed", spec.seed},
           {"pair_index", spec.pair_index},
           {"episode_index", spec.episode_index},
           {"theme", spec.pair.theme},
           {"swapped", swapped},
           {"players",
            {{{"id", game::PlayerName(game::kAttackerId)},
              {"role", "attacker"},
              {"policy", agent::PolicyKey(att)},
              {"word", target}},
             {{"id", game::PlayerName(game::kDefenderId)},
              {"role", "defender"},
              {"policy", agent::PolicyKey(def)},
              {"word", ""}}}}});

  try {
    while (game.outcome() == game::TabooOutcome::kOngoing) {
      const game::TabooRole role = game.NextSpeaker();
      agent::TabooAgent& a =
          role == game::TabooRole::kAttacker ? attacker : defender;
      const PlayerId id = role == game::TabooRole::kAttacker
                              ? game::kAttackerId
                              : game::kDefenderId;
      const int round = game.turn() / 2 + 1;
      std::string utterance = a.Turn(agent::MakeView(game, role));
      try {
        game.Step(role, utterance);
      } catch (const RuleViolation& e) {
        rec.Log("rule_violation", round, game::PlayerName(id),
                {{"utterance", utterance}, {"reason", e.what()}});
        utterance = "Let us talk about something else.";
        game.Step(role, utterance);
      }
      rec.Log("speech", round, game::PlayerName(id), {{"utterance", utterance}});
    }
  } catch (const Error& e) {
    result.valid = false;
    result.error = e.what();
    rec.Log("error", game.turn() / 2 + 1, "", {{"message", e.what()}});
  }
  if (backend.miss()) throw ReplayMiss(*backend.miss());

  result.counters = {attacker.counters(), defender.counters()};
  const int last_round = (game.turn() + 1) / 2;
  if (result.valid) {
    Finalize(result, rec, std::string(game::TabooOutcomeName(game.outcome())),
             last_round,
             {{"turns", game.turn()},
              {"final_guess", game.final_guess()
                                  ? nlohmann::json(*game.final_guess())
                                  : nlohmann::json(nullptr)}});
  } else {
    Finalize(result, rec, "invalid", last_round, {{"error", result.error}});
  }
  return result;
}

namespace {

void WriteText(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << body;
}

pool::ExperiencePool InitialPool(const TournamentConfig& config) {
  if (!config.pool.empty() && std::filesystem::exists(config.pool)) {
    return pool::ExperiencePool::Load(config.pool, config.pool_config);
  }
  if (!config.seed_pool.empty()) {
    return pool::ExperiencePool::Load(config.seed_pool, config.pool_config);
  }
  return pool::ExperiencePool(config.pool_config);
}

bool UsesPool(const TournamentConfig& config) {
  return config.game == GameKind::kUndercover &&
         (config.civilian_policy == agent::PolicyKind::kCoMetFull ||
          config.undercover_policy == agent::PolicyKind::kCoMetFull);
}

}  // namespace

TournamentResult RunTournament(const TournamentConfig& config) {
  config.Validate();
  const WordDataset dataset = LoadWordPairs(config.dataset);
  const llm::PromptLibrary prompts =
      config.prompts_dir.empty() ? llm::PromptLibrary()
                                 : llm::PromptLibrary(config.prompts_dir);
  std::unique_ptr<reasoner::TableJudge> table;
  if (!config.judge_table.empty()) {
    table = std::make_unique<reasoner::TableJudge>(
        reasoner::TableJudge::Load(config.judge_table));
  }
  BackendFactory factory(config);
  pool::SharedPool shared(InitialPool(config));

  const std::filesystem::path out_dir(config.output_dir);
  const std::filesystem::path log_dir = out_dir / "logs";
  const std::filesystem::path invalid_dir = log_dir / "invalid";
  std::filesystem::create_directories(invalid_dir);
  for (const auto& dir : {log_dir, invalid_dir}) {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.path().extension() == ".jsonl") {
        std::filesystem::remove(entry.path());
      }
    }
  }

  std::vector<EpisodeSpec> specs;
  for (std::size_t p = 0; p < dataset.pairs.size(); ++p) {
    for (int e = 0; e < config.episodes_per_pair; ++e) {
      specs.push_back(MakeEpisodeSpec(config, dataset.pairs[p], p, e));
    }
  }

  TournamentResult out;
  out.episodes.resize(specs.size());
  const bool uses_pool = UsesPool(config);
  const std::size_t batch =
      static_cast<std::size_t>(std::max(1, config.pool_config.prune_interval_games));

  for (std::size_t start = 0; start < specs.size(); start += batch) {
    const std::size_t end = std::min(specs.size(), start + batch);
    const pool::ExperiencePool snapshot = shared.Snapshot();
    std::atomic<std::size_t> next{start};
    std::mutex err_mu;
    std::exception_ptr fatal;
    auto worker = [&] {
      for (std::size_t i = next++; i < end; i = next++) {
        try {
          std::unique_ptr<llm::Backend> backend = factory.Make(specs[i].game_id);
          std::optional<pool::PoolSession> session;
          if (uses_pool) session.emplace(snapshot);
          EpisodeServices services{backend.get(), &prompts, table.get(),
                                   session ? &*session : nullptr};
          EpisodeResult r = config.game == GameKind::kTaboo
                                ? RunTabooEpisode(config, specs[i], services)
                                : RunUndercoverEpisode(config, specs[i], services);
          r.log.WriteFile((r.valid ? log_dir : invalid_dir) /
                          (r.game_id + ".jsonl"));
          out.episodes[i] = std::move(r);
        } catch (...) {
          std::lock_guard lock(err_mu);
          if (!fatal) fatal = std::current_exception();
        }
      }
    };
    const int n_threads =
        static_cast<int>(std::min<std::size_t>(config.jobs, end - start));
    std::vector<std::thread> threads;
    for (int t = 1; t < n_threads; ++t) threads.emplace_back(worker);
    worker();
    for (std::thread& t : threads) t.join();
    if (fatal) std::rethrow_exception(fatal);

    for (std::size_t i = start; i < end; ++i) {
      const EpisodeResult& r = out.episodes[i];
      if (r.valid && !r.delta.empty()) shared.Commit(r.delta);
      shared.FinishGame();
    }
  }
  factory.Finish();

  std::unique_ptr<llm::Backend> annot_backend;
  std::unique_ptr<metrics::Annotator> annotator;
  if (config.llm_annotator) {
    annot_backend = factory.Make("annotator");
    annotator = std::make_unique<metrics::LlmAnnotator>(*annot_backend, prompts);
  } else {
    annotator = std::make_unique<metrics::RuleAnnotator>();
  }
  for (const EpisodeResult& r : out.episodes) {
    if (!r.valid) {
      ++out.invalid_episodes;
      continue;
    }
    out.annotated.push_back(annotator->Annotate(r.log));
  }
  out.report = metrics::BuildReport(out.annotated, out.invalid_episodes);

  WriteText(out_dir / "annotated.jsonl", metrics::ToJsonLines(out.annotated));
  WriteText(out_dir / "metrics.json", out.report.ToJson().dump(2) + "\n");
  WriteText(out_dir / "metrics.txt", out.report.ToTextTable());
  WriteText(out_dir / "metrics.csv", out.report.ToCsv());
  WriteText(out_dir / "config.json", config.ToJson().dump(2) + "\n");

  const pool::ExperiencePool final_pool = shared.Get();
  out.pool_size = final_pool.size();
  if (uses_pool) {
    final_pool.Save(config.pool.empty() ? out_dir / "pool.json"
                                        : std::filesystem::path(config.pool));
  }
  return out;
}

EpisodeResult RunSingleEpisode(const TournamentConfig& config,
                               const EpisodeSpec& spec) {
  const llm::PromptLibrary prompts =
      config.prompts_dir.empty() ? llm::PromptLibrary()
                                 : llm::PromptLibrary(config.prompts_dir);
  std::unique_ptr<reasoner::TableJudge> table;
  if (!config.judge_table.empty()) {
    table = std::make_unique<reasoner::TableJudge>(
        reasoner::TableJudge::Load(config.judge_table));
  }
  BackendFactory factory(config);
  std::unique_ptr<llm::Backend> backend = factory.Make(spec.game_id);
  const bool uses_pool = UsesPool(config);
  pool::ExperiencePool pool = InitialPool(config);
  std::optional<pool::PoolSession> session;
  if (uses_pool) session.emplace(pool);
  EpisodeServices services{backend.get(), &prompts, table.get(),
                           session ? &*session : nullptr};
  EpisodeResult r = config.game == GameKind::kTaboo
                        ? RunTabooEpisode(config, spec, services)
                        : RunUndercoverEpisode(config, spec, services);
  factory.Finish();
  if (uses_pool && !config.pool.empty()) {
    if (r.valid) pool.Apply(r.delta);
    pool.set_games_played(pool.games_played() + 1);
    pool.Prune(pool.games_played());
    pool.Save(config.pool);
  }
  return r;
}

metrics::MetricsReport ReportFromLogs(const std::filesystem::path& log_dir,
                                      std::vector<metrics::AnnotatedGame>* out) {
  if (!std::filesystem::is_directory(log_dir)) {
    throw InvalidArgument("not a directory: " + log_dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(log_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      files.push_back(entry.path());
    }
  }
  int invalid = 0;
  if (std::filesystem::is_directory(log_dir / "invalid")) {
    for (const auto& entry :
         std::filesystem::directory_iterator(log_dir / "invalid")) {
      invalid += entry.path().extension() == ".jsonl" ? 1 : 0;
    }
  }
  std::sort(files.begin(), files.end());
  metrics::RuleAnnotator annotator;
  std::vector<metrics::AnnotatedGame> games;
  for (const auto& f : files) {
    const game::EventLog log = game::EventLog::ReadFile(f);
    if (log.empty() || log.back().event_kind != "outcome" ||
        !log.back().payload.value("valid", false)) {
      ++invalid;
      continue;
    }
    games.push_back(annotator.Annotate(log));
  }
  metrics::MetricsReport report = metrics::BuildReport(games, invalid);
  if (out != nullptr) *out = std::move(games);
  return report;
}

}  // namespace metarena::runner
