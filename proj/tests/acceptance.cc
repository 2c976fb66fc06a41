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

// Acceptance checks: one PASS/FAIL line per criterion, exit 1 on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "metarena/agent/agents.h"
#include "metarena/agent/pipeline.h"
#include "metarena/agent/view.h"
#include "metarena/common/error.h"
#include "metarena/common/rng.h"
#include "metarena/common/text.h"
#include "metarena/game/taboo.h"
#include "metarena/game/undercover.h"
#include "metarena/llm/prompts.h"
#include "metarena/llm/scripted_backend.h"
#include "metarena/metrics/metrics.h"
#include "metarena/pool/experience_pool.h"
#include "metarena/reasoner/hypothesis.h"
#include "metarena/reasoner/semantic_judge.h"
#include "metarena/runner/config.h"
#include "metarena/runner/runner.h"
#include "test_util.h"

namespace {

namespace fs = std::filesystem;
using metarena::Rng;
using metarena::game::PlayerId;
using Clock = std::chrono::steady_clock;

struct Result {
  bool ok = true;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::optional<PlayerId> TallyOracle(const std::map<PlayerId, PlayerId>& votes) {
  std::map<PlayerId, int> count;
  for (const auto& [v, t] : votes) ++count[t];
  int best = 0;
  int leaders = 0;
  PlayerId who = 0;
  for (const auto& [t, n] : count) {
    if (n > best) {
      best = n;
      leaders = 1;
      who = t;
    } else if (n == best) {
      ++leaders;
    }
  }
  if (leaders == 1) return who;
  return std::nullopt;
}

void SpeakAll(metarena::game::UndercoverGame& g) {
  while (g.phase() == metarena::game::Phase::kSpeaking) {
    g.SubmitSpeech(*g.NextSpeaker(), "something small");
  }
}

Result EngineSoundness() {
  using namespace metarena::game;
  const auto start = Clock::now();
  Rng rng(20260101);
  int bad = 0;
  int max_votes = 0;
  for (int ep = 0; ep < 1000; ++ep) {
    UndercoverConfig cfg;
    cfg.rng_seed = rng.Next();
    UndercoverGame g(cfg, {"animals", "bee", "butterfly"});
    int votes = 0;
    while (g.phase() != Phase::kTerminal && votes <= 10) {
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
      if (after != alive.size() && after + 1 != alive.size()) ++bad;
    }
    max_votes = std::max(max_votes, votes);
    if (g.phase() != Phase::kTerminal || votes > 10) ++bad;
    const int u = g.AliveCount(Role::kUndercover);
    const int c = g.AliveCount(Role::kCivilian);
    const Outcome census = u == 0   ? Outcome::kCiviliansWin
                           : c <= 1 ? Outcome::kUndercoverWin
                                    : Outcome::kDraw;
    if (g.outcome() != census || g.CheckWinner() != census) ++bad;
  }
  const double secs = Seconds(start);
  return {bad == 0 && secs < 10.0,
          Fmt("1000 episodes, violations %.0f, max voting rounds %.0f, %.3f s (< 10 s)",
              bad, max_votes, secs)};
}

Result TieRule() {
  using namespace metarena::game;
  UndercoverConfig cfg;
  cfg.rng_seed = 3;
  UndercoverGame g(cfg, {"animals", "bee", "butterfly"});
  SpeakAll(g);
  g.TallyVotes(std::map<PlayerId, PlayerId>{{1, 2}, {3, 2}, {2, 1}, {4, 1}, {5, 3}});
  const bool split_ok = g.AlivePlayers().size() == 5 &&
                        !g.vote_history().back().eliminated.has_value();

  cfg.rng_seed = 8;
  UndercoverGame base(cfg, {"animals", "bee", "butterfly"});
  SpeakAll(base);
  std::map<PlayerId, PlayerId> first;
  for (PlayerId id = 1; id <= 5; ++id) first[id] = id == 5 ? 4 : 5;
  base.TallyVotes(first);
  SpeakAll(base);
  const std::vector<PlayerId> alive = base.AlivePlayers();
  int agree = 0;
  int total = 0;
  for (int code = 0; code < 81; ++code) {
    std::map<PlayerId, PlayerId> votes;
    for (int k = 0, c = code; k < 4; ++k, c /= 3) {
      std::vector<PlayerId> others;
      for (PlayerId p : alive) {
        if (p != alive[k]) others.push_back(p);
      }
      votes[alive[k]] = others[c % 3];
    }
    UndercoverGame trial = base;
    trial.TallyVotes(votes);
    ++total;
    agree += trial.vote_history().back().eliminated == TallyOracle(votes) ? 1 : 0;
  }
  return {split_ok && alive.size() == 4 && agree == total,
          std::string("2-2-1 split eliminates nobody: ") + (split_ok ? "yes" : "no") +
              Fmt("; 4-player vote maps agreeing %.0f/%.0f", agree, total)};
}

Result TabooLogic() {
  using namespace metarena::game;
  struct Case {
    const char* reply;
    TabooOutcome expect;
  };
  const Case cases[] = {
      {"Guess: apple", TabooOutcome::kDefenderWin},
      {"guess:  APPLE.", TabooOutcome::kDefenderWin},
      {"Guess: pear", TabooOutcome::kAttackerWin},
      {"Guess:", TabooOutcome::kOngoing},
      {"My guess is apple?", TabooOutcome::kAttackerWin},
      {"(apple)", TabooOutcome::kAttackerWin},
      {"Apples and pineapples.", TabooOutcome::kOngoing},
      {"No idea yet.", TabooOutcome::kOngoing},
      {"Maybe crab-apple jam?", TabooOutcome::kOngoing},
  };
  int pass = 0;
  int total = 0;
  std::string missed;
  for (const Case& c : cases) {
    TabooGame g("apple");
    g.Step(TabooRole::kAttacker, "It keeps the doctor away.");
    g.Step(TabooRole::kDefender, c.reply);
    ++total;
    if (g.outcome() == c.expect) {
      ++pass;
    } else {
      missed += std::string(" [") + c.reply + "]";
    }
  }
  for (const char* said : {"apple", "An apple!", "...apple?!", "\"Apple\""}) {
    TabooGame g("apple");
    ++total;
    try {
      g.Step(TabooRole::kAttacker, said);
      missed += std::string(" [") + said + "]";
    } catch (const metarena::RuleViolation&) {
      ++pass;
    }
  }
  TabooGame g("apple", 4);
  for (int i = 0; i < 4; ++i) {
    g.Step(i % 2 == 0 ? TabooRole::kAttacker : TabooRole::kDefender, "hmm");
  }
  ++total;
  pass += g.outcome() == TabooOutcome::kNoWinner ? 1 : 0;
  return {pass == total, Fmt("%.0f/%.0f table cases", pass, total) + missed};
}

Result HypothesisOracle() {
  using namespace metarena::reasoner;
  const auto start = Clock::now();
  Rng rng(77);
  int agree = 0;
  const int kInstances = 10000;
  for (int n = 0; n < kInstances; ++n) {
    std::vector<FeatureDimension> dims(kAllDimensions.begin(), kAllDimensions.end());
    std::vector<MetaphorCategory> cats(kAllCategories.begin(), kAllCategories.end());
    rng.Shuffle(dims);
    rng.Shuffle(cats);
    const std::size_t nf = 1 + rng.Below(5);
    const std::size_t na = rng.Below(4);
    TableJudge judge;
    std::vector<Feature> features;
    std::vector<Aspect> aspects;
    for (std::size_t i = 0; i < nf; ++i) features.push_back({dims[i], "f" + std::to_string(i)});
    for (std::size_t j = 0; j < na; ++j) aspects.push_back({cats[j], "a" + std::to_string(j)});
    std::vector<std::vector<double>> delta(nf, std::vector<double>(na));
    for (std::size_t i = 0; i < nf; ++i) {
      for (std::size_t j = 0; j < na; ++j) {
        delta[i][j] = kScoreLevels[rng.Below(6)];
        judge.AddScore(features[i].description, aspects[j].description, "s", delta[i][j]);
      }
    }
    judge.AddFeatures("w", features);
    judge.AddAspects("s", aspects);
    HypothesisParams params;
    params.threshold = kScoreLevels[rng.Below(6)];
    double best = 0.0;
    for (std::size_t i = 0; i < nf; ++i) {
      for (std::size_t j = 0; j < na; ++j) {
        best = std::max(best, std::pow(0.9, i) * std::pow(0.9, j) * delta[i][j]);
      }
    }
    const HypothesisDecision d = HypothesisTest("s", "w", params, judge);
    const Verdict expect = best > params.threshold ? Verdict::kHPlus : Verdict::kHMinus;
    agree += std::abs(d.best_score - best) <= 1e-12 && d.verdict == expect ? 1 : 0;
  }
  const double secs = Seconds(start);
  return {agree == kInstances && secs < 5.0,
          Fmt("%.0f/%.0f instances agree (tol 1e-12), %.3f s (< 5 s)", agree, kInstances,
              secs)};
}

Result Pool() {
  using namespace metarena::pool;
  const double s = Score(7, 1, 12);
  ExperiencePool p;
  Rng rng(9);
  std::size_t max_size = 0;
  for (int n = 1; n <= 10000; ++n) {
    ExperienceRecord r;
    char id[32];
    std::snprintf(id, sizeof id, "3025%016d", n);
    r.id = id;
    r.method = metarena::reasoner::kAllCategories[rng.Below(3)];
    r.total_references = static_cast<int>(rng.Below(12));
    r.teammate_recognitions = static_cast<int>(rng.Below(r.total_references + 1));
    r.rival_recognitions =
        static_cast<int>(rng.Below(r.total_references - r.teammate_recognitions + 1));
    p.InsertWithCapacity(r);
    for (auto c : metarena::reasoner::kAllCategories) max_size = std::max(max_size, p.size(c));
  }
  // Prune check on an uncapped mix that contains offenders.
  std::vector<ExperienceRecord> mix;
  for (int n = 1; n <= 270; ++n) {
    ExperienceRecord r;
    char id[32];
    std::snprintf(id, sizeof id, "4025%016d", n);
    r.id = id;
    r.method = metarena::reasoner::kAllCategories[n % 3];
    r.total_references = static_cast<int>(rng.Below(12));
    r.teammate_recognitions = static_cast<int>(rng.Below(r.total_references + 1));
    r.rival_recognitions =
        static_cast<int>(rng.Below(r.total_references - r.teammate_recognitions + 1));
    mix.push_back(r);
  }
  ExperiencePool q = ExperiencePool::Init(mix);
  const int early = q.Prune(4);
  const int removed = q.Prune(5);
  int remaining_bad = 0;
  for (auto c : metarena::reasoner::kAllCategories) {
    for (const ExperienceRecord& r : q.records(c)) {
      remaining_bad += r.total_references > 5 && r.score() < 0.3 ? 1 : 0;
    }
  }
  return {s == 0.5 && max_size <= 100 && remaining_bad == 0 && removed > 0 && early == 0,
          Fmt("score(7,1,12) = %.17g; max per-category size %.0f (<= 100); ", s, max_size) +
              Fmt("prune at 5 removed %.0f, offenders left %.0f", removed, remaining_bad)};
}

Result Metrics() {
  using namespace metarena::metrics;
  const double b = Balanced(0.8, 0.2);
  bool props = true;
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.Uniform();
    const double y = rng.Uniform();
    props = props && Balanced(x, y) == Balanced(y, x) && Balanced(x, y) <= (x + y) / 2 &&
            std::abs(Balanced(x, x) - x) < 1e-15;
  }
  AnnotatedGame g;
  g.game_id = "hand";
  g.outcome = "civilians_win";
  g.players = {{1, "civilian", "comet", "bee"},
               {2, "undercover", "comet", "butterfly"},
               {3, "civilian", "comet", "bee"}};
  g.speeches = {{1, 1, "a", false, false, ""}, {1, 2, "b", true, true, ""},
                {1, 3, "c", false, true, ""}};
  g.received = {{1, 2, 1, true, "opponent", true},  {3, 2, 1, false, "teammate", false},
                {2, 1, 1, true, "opponent", true},  {2, 3, 1, false, "teammate", false},
                {1, 3, 1, true, "teammate", true},  {3, 1, 1, true, "opponent", false}};
  g.claims = {{1, 1, "civilian", true}, {2, 1, "unknown", false},
              {2, 2, "undercover", true}, {3, 1, "undercover", false}};
  const RoleMetrics civ = ComputeMetrics({g}, "comet", "civilian");
  const RoleMetrics und = ComputeMetrics({g}, "comet", "undercover");
  const bool hand = *civ.wr.value == 1.0 && *civ.fer.value == 0.75 &&
                    *civ.oiaa.value == 0.5 && *civ.siaa.value == 0.5 &&
                    *civ.ppc.value == 1.0 && *civ.iisc.value == 0.5 &&
                    *und.wr.value == 0.0 && *und.fer.value == 0.5 &&
                    *und.oiaa.value == 0.5 && *und.siaa.value == 0.5 &&
                    *und.ppc.value == 0.0 && *und.iisc.value == 1.0;
  AnnotatedGame cot = g;
  for (auto& p : cot.players) p.policy = "cot";
  for (auto& s : cot.speeches) s.inconsistent = false;
  const double iisc_cot = *ComputeMetrics({cot}, "cot", "civilian").iisc.value +
                          *ComputeMetrics({cot}, "cot", "undercover").iisc.value;
  return {std::abs(b - 0.41) <= 1e-12 && props && hand && iisc_cot == 0.0,
          Fmt("balanced(0.8,0.2) = %.15f; ", b) +
              (props ? "symmetry/penalty hold over 1000 pairs; " : "property failure; ") +
              (hand ? "six hand fixtures match; " : "hand fixture mismatch; ") +
              Fmt("CoT IISC = %.1f", iisc_cot)};
}

Result Replay() {
  using namespace metarena::runner;
  using metarena::testing::DataPath;
  using metarena::testing::ReadAll;
  const std::string golden =
      ReadAll(DataPath("fixtures/replay/golden/undercover_p000_e00.jsonl"));
  std::vector<std::string> logs;
  std::vector<std::string> reports;
  int run = 0;
  for (int jobs : {1, 1, 4}) {
    metarena::testing::TempDir dir("accept_replay");
    TournamentConfig c = TournamentConfig::Load(DataPath("fixtures/replay/config.json"));
    c.output_dir = dir.path().string();
    c.jobs = jobs;
    if (run++ == 2) {
      c.mode = BackendMode::kReplay;
      c.cassette = DataPath("fixtures/replay/cassette.jsonl").string();
    }
    const TournamentResult r = RunTournament(c);
    logs.push_back(ReadAll(dir.path() / "logs/undercover_p000_e00.jsonl"));
    reports.push_back(r.report.ToJson().dump());
  }
  const bool logs_ok = !golden.empty() && logs[0] == golden && logs[1] == golden &&
                       logs[2] == golden;
  const bool reports_ok = reports[0] == reports[1] && reports[1] == reports[2];
  return {logs_ok && reports_ok,
          std::string("log bytes vs golden (run 1, run 2, jobs 4 replay): ") +
              (logs_ok ? "identical" : "DIFFER") + "; MetricsReport: " +
              (reports_ok ? "identical" : "DIFFER")};
}

struct Seats {
  metarena::llm::ScriptedBackend backend{
      metarena::llm::Script::Load(metarena::testing::DataPath("scripts/generic.json"))};
  metarena::llm::PromptLibrary prompts;
};

Result Ablation() {
  using namespace metarena;
  Seats s;
  game::UndercoverConfig cfg;
  cfg.rng_seed = 11;
  game::UndercoverGame g(cfg, {"animals", "bee", "butterfly"});
  std::vector<std::unique_ptr<agent::UndercoverAgent>> agents;
  for (PlayerId id = 1; id <= 5; ++id) {
    agents.push_back(agent::MakeUndercoverAgent(agent::PolicyKind::kCoMetNoMet, id,
                                                {&s.backend, &s.prompts}));
  }
  while (g.phase() != game::Phase::kTerminal) {
    while (g.phase() == game::Phase::kSpeaking) {
      const PlayerId p = *g.NextSpeaker();
      g.SubmitSpeech(p, std::get<agent::SpeechAction>(
                            agent::Act(*agents[p - 1], agent::MakeView(g, p)))
                            .utterance);
    }
    std::map<PlayerId, PlayerId> votes;
    for (PlayerId p : g.AlivePlayers()) {
      votes[p] = std::get<agent::VoteAction>(agent::Act(*agents[p - 1], agent::MakeView(g, p)))
                     .target;
    }
    g.TallyVotes(votes);
  }
  int reasoner = 0;
  int generator = 0;
  int calls = 0;
  int failures = 0;
  for (const auto& a : agents) {
    reasoner += a->counters().reasoner_calls;
    generator += a->counters().generator_calls;
    calls += a->counters().backend_calls;
    failures += a->counters().backend_failures;
  }
  return {reasoner == 0 && generator == 0 && calls > 0 && failures == 0,
          Fmt("episode finished after %.0f votes; reasoner calls %.0f, generator calls %.0f",
              g.votes_completed(), reasoner, generator)};
}

Result Pineapple() {
  using namespace metarena;
  llm::ScriptedBackend backend(llm::Script::FromJson(
      {{"patterns",
        {{{"match", "Read the new descriptions"},
          {"response",
           "<labels>\nP2 | Detailed | scaly rough skin\nP3 | Broad | yellow fruit\n"
           "P4 | Mismatch | skin with red spots\n</labels>"}}}}}));
  llm::PromptLibrary prompts;
  agent::TurnBudget budget(agent::kCometTurnBudget);
  agent::CallCounters counters;
  agent::StageContext ctx{backend, prompts, {}, budget, counters};
  agent::UndercoverView v;
  v.self = 1;
  v.own_word = "pineapple";
  v.alive = {1, 2, 3, 4};
  using game::ObservationKind;
  v.history = {{1, 2, "It has a scaly rough skin.", ObservationKind::kSpeech, 0},
               {1, 3, "It is a yellow fruit.", ObservationKind::kSpeech, 0},
               {1, 4, "Its skin has red spots.", ObservationKind::kSpeech, 0}};
  agent::CategorizedDescriptions desc;
  const auto e = agent::ExtractRoundFeatures(v, desc, ctx, {});
  const std::vector<PlayerId> others{2, 3, 4};
  const agent::BeliefTable b = agent::MapBeliefs(desc, others);
  const bool labels = e.size() == 3 && e[0].label == agent::Label::kDetailed &&
                      e[1].label == agent::Label::kBroad &&
                      e[2].label == agent::Label::kMismatch;
  const bool beliefs = b.others.at(2).identity == agent::IdentityGuess::kTeammate &&
                       b.others.at(3).identity == agent::IdentityGuess::kUndecided &&
                       b.others.at(4).identity == agent::IdentityGuess::kOpponent;
  std::string got;
  for (const auto& x : e) got += std::string(agent::LabelName(x.label)) + "/";
  for (PlayerId p : others) {
    got += std::string(agent::IdentityGuessName(b.others.at(p).identity)) + "/";
  }
  got.pop_back();
  return {labels && beliefs, got};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Result()>>> checks = {
      {"engine soundness", EngineSoundness},
      {"tie rule", TieRule},
      {"taboo terminal logic", TabooLogic},
      {"hypothesis test oracle equivalence", HypothesisOracle},
      {"experience pool", Pool},
      {"metrics", Metrics},
      {"replay regression", Replay},
      {"ablation contract", Ablation},
      {"pipeline categorization", Pineapple},
  };
  int failed = 0;
  for (const auto& [name, fn] : checks) {
    Result r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += r.ok ? 0 : 1;
    std::printf("%s  %-36s %s\n", r.ok ? "PASS" : "FAIL", name, r.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(checks.size()) - failed,
              checks.size());
  return failed == 0 ? 0 : 1;
}
