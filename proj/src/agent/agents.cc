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

#include "metarena/agent/agents.h"

#include <algorithm>

#include "metarena/common/error.h"
#include "metarena/common/text.h"
#include "metarena/game/undercover.h"

namespace metarena::agent {
namespace {

std::string AliveList(const UndercoverView& view) {
  std::string out;
  for (PlayerId p : view.AliveOthers()) {
    if (!out.empty()) out += ", ";
    out += game::PlayerName(p);
  }
  return out;
}

nlohmann::json AnalysisPayload(const std::vector<LabeledEntry>& fresh,
                               const CategorizedDescriptions& desc) {
  nlohmann::json entries = nlohmann::json::array();
  for (const LabeledEntry& e : fresh) {
    nlohmann::json j = ToJson(e);
    j["judgment"] = IdentityGuessName(JudgeSpeaker(desc, e.speaker));
    entries.push_back(std::move(j));
  }
  return {{"entries", std::move(entries)},
          {"opposing_word", desc.OpposingGuess().value_or("")},
          {"opposing_confidence", desc.OpposingConfidence()}};
}

nlohmann::json BeliefPayload(const BeliefTable& beliefs) {
  nlohmann::json others = nlohmann::json::object();
  for (const auto& [id, b] : beliefs.others) {
    others[game::PlayerName(id)] = {{"identity", IdentityGuessName(b.identity)},
                                    {"role_guess", b.role_guess},
                                    {"strategy_guess", b.strategy_guess}};
  }
  return {{"others", std::move(others)}};
}

std::string_view TabooStyle(PolicyKind policy, game::TabooRole role) {
  const bool attacker = role == game::TabooRole::kAttacker;
  switch (policy) {
    case PolicyKind::kNaive:
      return "Reply naturally and briefly.";
    case PolicyKind::kCoT:
      return attacker
                 ? "First think step by step about which topic brings the "
                   "defender closest to the target, then reply. Put the "
                   "reasoning in <thinking> tags."
                 : "First think step by step about which word the attacker "
                   "may be steering you toward, then reply. Put the "
                   "reasoning in <thinking> tags.";
    case PolicyKind::kCoMetFull:
      return attacker
                 ? "Use metaphors that make the target come to mind without "
                   "pointing at it directly, and keep your intent hidden."
                 : "Treat the attacker's metaphors as hypotheses: ask which "
                   "concrete word each one points at, avoid saying that "
                   "word, and guess only when the evidence agrees.";
    case PolicyKind::kCoMetNoMet:
      return attacker
                 ? "Plan which topic leads toward the target and keep your "
                   "intent hidden."
                 : "Track which word the attacker may be steering you "
                   "toward, avoid saying it, and guess only when confident.";
  }
  return "";
}

}  // namespace

UndercoverAgent::UndercoverAgent(PolicyKind policy, PlayerId self,
                                 AgentDeps deps)
    : policy_(policy), self_(self), deps_(deps) {
  if (deps_.backend == nullptr || deps_.prompts == nullptr) {
    throw InvalidArgument("agent needs a backend and a prompt library");
  }
}

std::string UndercoverAgent::FallbackSpeech(const UndercoverView& view) const {
  return FallbackDescription(view.own_word);
}

PlayerId UndercoverAgent::FallbackVote(const UndercoverView& view) const {
  const std::vector<PlayerId> others = view.AliveOthers();
  if (others.empty()) throw InvalidState("nobody to vote for");
  return *std::min_element(others.begin(), others.end());
}

std::vector<AgentEvent> UndercoverAgent::TakeEvents() {
  std::vector<AgentEvent> out;
  out.swap(events_);
  return out;
}

StageContext UndercoverAgent::Context(TurnBudget& budget) {
  return StageContext{*deps_.backend, *deps_.prompts, deps_.temperatures,
                      budget, counters_};
}

void UndercoverAgent::Emit(std::string kind, nlohmann::json payload) {
  events_.push_back({std::move(kind), std::move(payload)});
}

void UndercoverAgent::FinishTurn(const TurnBudget& budget) {
  counters_.max_turn_calls = std::max(counters_.max_turn_calls, budget.used());
}

CometAgent::CometAgent(PolicyKind policy, PlayerId self, AgentDeps deps)
    : UndercoverAgent(policy, self, deps) {
  if (policy != PolicyKind::kCoMetFull && policy != PolicyKind::kCoMetNoMet) {
    throw InvalidArgument("CometAgent needs a CoMet policy");
  }
  if (policy == PolicyKind::kCoMetFull && deps_.judge == nullptr) {
    throw InvalidArgument("the full CoMet policy needs a semantic judge");
  }
}

void CometAgent::Analyse(const UndercoverView& view, StageContext& ctx) {
  const ExtractionOptions options{metaphors_enabled(), deps_.judge,
                                  deps_.hypothesis};
  const std::vector<LabeledEntry> fresh =
      ExtractRoundFeatures(view, desc_, ctx, options);
  const std::vector<PlayerId> others = view.AliveOthers();
  beliefs_ = MapBeliefs(desc_, others, beliefs_);
  const SelfBelief self = MonitorSelf(beliefs_, view.round);
  beliefs_.RecordSelf(self);
  if (!fresh.empty()) Emit("analysis", AnalysisPayload(fresh, desc_));
  Emit("beliefs", BeliefPayload(beliefs_));
  Emit("self_identity", {{"identity", SelfIdentityName(self.identity)},
                         {"confidence", self.confidence}});
}

std::string CometAgent::Speak(const UndercoverView& view) {
  last_metaphor_.reset();
  TurnBudget budget(kCometTurnBudget);
  StageContext ctx = Context(budget);
  Analyse(view, ctx);

  Strategy strategy = PlanStrategy(view, desc_, beliefs_, strategies_, ctx);
  strategies_.push_back(strategy);
  Emit("strategy", ToJson(strategy));

  std::string speech;
  const bool covert = strategy.stance == Stance::kRevealToTeammates ||
                      strategy.stance == Stance::kDeceive;
  if (metaphors_enabled() && covert) {
    const std::string subject = strategy.stance == Stance::kDeceive
                                    ? desc_.OpposingGuess().value_or("")
                                    : view.own_word;
    if (!subject.empty()) {
      if (auto m = GenerateMetaphor(view, strategy, subject, deps_.pool, ctx)) {
        speech = m->metaphor;
        Emit("metaphor", m->ToJson());
        last_metaphor_ = std::move(m);
      }
    }
  }
  if (speech.empty()) speech = SpeakPlain(view, strategy, ctx);
  FinishTurn(budget);
  return speech;
}

PlayerId CometAgent::Vote(const UndercoverView& view) {
  TurnBudget budget(kCometTurnBudget);
  StageContext ctx = Context(budget);
  ++counters_.vote_calls;
  Analyse(view, ctx);
  const std::vector<PlayerId> others = view.AliveOthers();
  const PlayerId target = ChooseVoteTarget(beliefs_, others);
  FinishTurn(budget);
  return target;
}

BaselineAgent::BaselineAgent(PolicyKind policy, PlayerId self, AgentDeps deps)
    : UndercoverAgent(policy, self, deps) {
  if (policy != PolicyKind::kNaive && policy != PolicyKind::kCoT) {
    throw InvalidArgument("BaselineAgent needs the Naive or CoT policy");
  }
}

std::string BaselineAgent::Speak(const UndercoverView& view) {
  last_metaphor_.reset();
  TurnBudget budget(1);
  StageContext ctx = Context(budget);
  ++counters_.speak_calls;
  const llm::CompletionRequest request = deps_.prompts->Build(
      policy_ == PolicyKind::kNaive ? "naive_speak" : "cot_speak",
      {{"player", game::PlayerName(view.self)},
       {"own_word", view.own_word},
       {"round", std::to_string(view.round)},
       {"history", RenderHistory(view.history)}},
      llm::Purpose::kGeneration);
  const std::string own = view.own_word;
  const std::optional<std::string> speech = CallParsed(
      ctx, request,
      [&own](std::string_view r) {
        const auto s = llm::ExtractTag(r, "speech");
        if (!s || text::Trim(*s).empty() || game::RevealsWord(*s, own)) {
          throw ParseError("no legal <speech>");
        }
        return text::NormalizeWhitespace(*s);
      },
      1);
  FinishTurn(budget);
  return speech.value_or(FallbackSpeech(view));
}

PlayerId BaselineAgent::Vote(const UndercoverView& view) {
  TurnBudget budget(1);
  StageContext ctx = Context(budget);
  ++counters_.vote_calls;
  const llm::CompletionRequest request = deps_.prompts->Build(
      policy_ == PolicyKind::kNaive ? "naive_vote" : "cot_vote",
      {{"player", game::PlayerName(view.self)},
       {"own_word", view.own_word},
       {"round", std::to_string(view.round)},
       {"alive", AliveList(view)},
       {"history", RenderHistory(view.history)}},
      llm::Purpose::kAnalysis);
  const std::optional<std::string> response = CallParsed(
      ctx, request, [](std::string_view r) { return std::string(r); }, 1);
  FinishTurn(budget);
  if (!response) return FallbackVote(view);

  if (policy_ == PolicyKind::kCoT) {
    CategorizedDescriptions desc;
    desc.consumed = consumed_;
    std::vector<LabeledEntry> fresh =
        PendingEntries(desc, view.history, view.self);
    std::size_t speeches = 0;
    for (const Observation& o : view.history) {
      speeches += o.kind == game::ObservationKind::kSpeech ? 1 : 0;
    }
    consumed_ = speeches;
    try {
      ApplyLabels(fresh, ParseLabelBlock(*response));
      for (LabeledEntry& e : fresh) {
        if (e.label == Label::kMetaphorSuspect) e.label = Label::kBroad;
      }
      CategorizedDescriptions snapshot;
      snapshot.entries = fresh;
      if (!fresh.empty()) Emit("analysis", AnalysisPayload(fresh, snapshot));
    } catch (const ParseError&) {
    }
  }
  if (const auto identity = llm::ExtractTag(*response, "identity")) {
    try {
      Emit("self_identity",
           {{"identity", SelfIdentityName(ParseSelfIdentity(*identity))},
            {"confidence", 1.0}});
    } catch (const ParseError&) {
    }
  }

  const std::vector<PlayerId> others = view.AliveOthers();
  if (const auto vote = llm::ExtractTag(*response, "vote")) {
    const PlayerId target = game::ParsePlayerName(*vote);
    if (std::find(others.begin(), others.end(), target) != others.end()) {
      return target;
    }
  }
  return FallbackVote(view);
}

std::unique_ptr<UndercoverAgent> MakeUndercoverAgent(PolicyKind policy,
                                                     PlayerId self,
                                                     AgentDeps deps) {
  switch (policy) {
    case PolicyKind::kNaive:
    case PolicyKind::kCoT:
      return std::make_unique<BaselineAgent>(policy, self, deps);
    case PolicyKind::kCoMetFull:
    case PolicyKind::kCoMetNoMet:
      return std::make_unique<CometAgent>(policy, self, deps);
  }
  throw InvalidArgument("unknown policy");
}

Action Act(UndercoverAgent& agent, const UndercoverView& view) {
  if (view.phase == game::Phase::kTerminal) {
    throw InvalidState("no action in a finished game");
  }
  const bool speaking = view.phase == game::Phase::kSpeaking;
  try {
    if (speaking) return SpeechAction{agent.Speak(view)};
    return VoteAction{agent.Vote(view)};
  } catch (const BackendError&) {
    ++agent.mutable_counters().backend_failures;
    if (speaking) return SpeechAction{agent.FallbackSpeech(view)};
    return VoteAction{agent.FallbackVote(view)};
  }
}

TabooAgent::TabooAgent(PolicyKind policy, game::TabooRole role, AgentDeps deps)
    : policy_(policy), role_(role), deps_(deps) {
  if (deps_.backend == nullptr || deps_.prompts == nullptr) {
    throw InvalidArgument("agent needs a backend and a prompt library");
  }
}

std::string TabooAgent::Fallback() const {
  return role_ == game::TabooRole::kAttacker
             ? "What did you get up to over the last few days?"
             : "Could you tell me a bit more about that?";
}

std::string TabooAgent::Turn(const TabooView& view) {
  const bool attacker = role_ == game::TabooRole::kAttacker;
  TurnBudget budget(1);
  StageContext ctx{*deps_.backend, *deps_.prompts, deps_.temperatures, budget,
                   counters_};
  ++counters_.speak_calls;
  llm::Bindings bindings = {{"style", std::string(TabooStyle(policy_, role_))},
                            {"history", RenderTranscript(view.transcript)}};
  if (attacker) bindings.emplace_back("target", view.target);
  const llm::CompletionRequest request = deps_.prompts->Build(
      attacker ? "taboo_attacker" : "taboo_defender", bindings,
      llm::Purpose::kGeneration);
  const std::string target = view.target;
  std::optional<std::string> speech;
  try {
    speech = CallParsed(
        ctx, request,
        [&](std::string_view r) {
          const auto s = llm::ExtractTag(r, "speech");
          if (!s || text::Trim(*s).empty()) throw ParseError("no <speech>");
          if (attacker && text::ContainsWholeWord(*s, target)) {
            throw ParseError("attacker said the target");
          }
          return text::NormalizeWhitespace(*s);
        },
        1);
  } catch (const BackendError&) {
    ++counters_.backend_failures;
    throw;
  }
  counters_.max_turn_calls = std::max(counters_.max_turn_calls, budget.used());
  if (speech) return *speech;
  std::string fallback = Fallback();
  if (attacker && text::ContainsWholeWord(fallback, target)) {
    fallback = "Tell me about your day.";
  }
  return fallback;
}

}  // namespace metarena::agent
