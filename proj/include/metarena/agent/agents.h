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

#ifndef METARENA_AGENT_AGENTS_H_
#define METARENA_AGENT_AGENTS_H_

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "metarena/agent/pipeline.h"
#include "metarena/agent/types.h"
#include "metarena/agent/view.h"
#include "metarena/llm/backend.h"
#include "metarena/llm/prompts.h"
#include "metarena/pool/experience_pool.h"
#include "metarena/reasoner/hypothesis.h"

namespace metarena::agent {

// Services an agent borrows; all must outlive it.
struct AgentDeps {
  llm::Backend* backend = nullptr;
  const llm::PromptLibrary* prompts = nullptr;
  // Used for hypothesis tests. Required by CoMetFull only.
  reasoner::SemanticJudge* judge = nullptr;
  reasoner::HypothesisParams hypothesis;
  llm::TemperaturePolicy temperatures;
  // Experience source for the metaphor generator; may be null.
  pool::PoolSession* pool = nullptr;
};

// Trace record an agent emits for the episode log.
struct AgentEvent {
  std::string kind;
  nlohmann::json payload;
};

struct SpeechAction {
  std::string utterance;
};
struct VoteAction {
  PlayerId target = 0;
};
using Action = std::variant<SpeechAction, VoteAction>;

class UndercoverAgent {
 public:
  UndercoverAgent(PolicyKind policy, PlayerId self, AgentDeps deps);
  virtual ~UndercoverAgent() = default;

  PolicyKind policy() const { return policy_; }
  PlayerId self() const { return self_; }

  // Backend errors escape; Act() turns them into fallbacks.
  virtual std::string Speak(const UndercoverView& view) = 0;
  virtual PlayerId Vote(const UndercoverView& view) = 0;

  std::string FallbackSpeech(const UndercoverView& view) const;
  PlayerId FallbackVote(const UndercoverView& view) const;

  const CallCounters& counters() const { return counters_; }
  CallCounters& mutable_counters() { return counters_; }
  // Drains the trace events produced since the last call.
  std::vector<AgentEvent> TakeEvents();
  // Metaphor used by the most recent Speak(), if any.
  const std::optional<GeneratedMetaphor>& last_metaphor() const {
    return last_metaphor_;
  }

 protected:
  StageContext Context(TurnBudget& budget);
  void Emit(std::string kind, nlohmann::json payload);
  void FinishTurn(const TurnBudget& budget);

  PolicyKind policy_;
  PlayerId self_;
  AgentDeps deps_;
  CallCounters counters_;
  std::vector<AgentEvent> events_;
  std::optional<GeneratedMetaphor> last_metaphor_;
};

// Staged pipeline: extraction, belief mapping, self-monitoring, planning,
// speaking and voting. The NoMet variant bypasses the metaphor reasoner and
// generator.
class CometAgent : public UndercoverAgent {
 public:
  CometAgent(PolicyKind policy, PlayerId self, AgentDeps deps);

  std::string Speak(const UndercoverView& view) override;
  PlayerId Vote(const UndercoverView& view) override;

  const CategorizedDescriptions& descriptions() const { return desc_; }
  const BeliefTable& beliefs() const { return beliefs_; }
  const std::vector<Strategy>& strategies() const { return strategies_; }

 private:
  bool metaphors_enabled() const { return policy_ == PolicyKind::kCoMetFull; }
  void Analyse(const UndercoverView& view, StageContext& ctx);

  CategorizedDescriptions desc_;
  BeliefTable beliefs_;
  std::vector<Strategy> strategies_;
};

// Single-call baselines. Naive asks directly; CoT asks for reasoning first
// and may label the descriptions it read.
class BaselineAgent : public UndercoverAgent {
 public:
  BaselineAgent(PolicyKind policy, PlayerId self, AgentDeps deps);

  std::string Speak(const UndercoverView& view) override;
  PlayerId Vote(const UndercoverView& view) override;

 private:
  std::size_t consumed_ = 0;
};

// Throws InvalidArgument when a required dependency is missing.
std::unique_ptr<UndercoverAgent> MakeUndercoverAgent(PolicyKind policy,
                                                     PlayerId self,
                                                     AgentDeps deps);

// Speech in the Speaking phase, a ballot in the Voting phase. Backend
// failures become the policy's fallback action and are counted.
Action Act(UndercoverAgent& agent, const UndercoverView& view);

// One combined completion per turn for either side of Adversarial Taboo.
class TabooAgent {
 public:
  TabooAgent(PolicyKind policy, game::TabooRole role, AgentDeps deps);

  std::string Turn(const TabooView& view);
  std::string Fallback() const;

  PolicyKind policy() const { return policy_; }
  game::TabooRole role() const { return role_; }
  const CallCounters& counters() const { return counters_; }

 private:
  PolicyKind policy_;
  game::TabooRole role_;
  AgentDeps deps_;
  CallCounters counters_;
};

}  // namespace metarena::agent

#endif  // METARENA_AGENT_AGENTS_H_
