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

#ifndef METARENA_AGENT_PIPELINE_H_
#define METARENA_AGENT_PIPELINE_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "metarena/common/error.h"
#include "metarena/agent/types.h"
#include "metarena/agent/view.h"
#include "metarena/llm/backend.h"
#include "metarena/llm/prompts.h"
#include "metarena/pool/experience_pool.h"
#include "metarena/reasoner/hypothesis.h"

namespace metarena::agent {

inline constexpr int kMaxStageAttempts = 3;
inline constexpr int kCometTurnBudget = 6;

struct CallCounters {
  int backend_calls = 0;
  int extraction_calls = 0;
  int plan_calls = 0;
  int speak_calls = 0;
  int vote_calls = 0;
  // Hypothesis tests run on suspected metaphors.
  int reasoner_calls = 0;
  // Metaphor generator invocations (each may use two backend calls).
  int generator_calls = 0;
  // Largest number of budgeted calls spent on a single action.
  int max_turn_calls = 0;
  int backend_failures = 0;

  nlohmann::json ToJson() const;
};

// Budgeted calls left for one action. A hypothesis test counts as one.
class TurnBudget {
 public:
  explicit TurnBudget(int limit) : limit_(limit) {}
  bool Take();
  void Grow(int n) { limit_ += n; }
  int used() const { return used_; }
  int limit() const { return limit_; }

 private:
  int limit_;
  int used_ = 0;
};

struct StageContext {
  llm::Backend& backend;
  const llm::PromptLibrary& prompts;
  llm::TemperaturePolicy temperatures;
  TurnBudget& budget;
  CallCounters& counters;
};

// Sends the request up to max_attempts times while the budget allows and
// returns the first response the parser accepts. Parsers signal rejection
// by throwing ParseError. Backend errors propagate.
template <typename Parser>
auto CallParsed(StageContext& ctx, const llm::CompletionRequest& request,
                Parser parse, int max_attempts = kMaxStageAttempts)
    -> std::optional<decltype(parse(std::string_view{}))>;

// One parsed "P2 | Detailed | feature" line.
struct LabelLine {
  PlayerId speaker = 0;
  Label label = Label::kBroad;
  std::string feature;
};

struct LabelBlock {
  std::vector<LabelLine> lines;
  // Empty when absent or "unknown".
  std::string opposing_word;
};

// Parses the <labels> block and optional <opposing_word>. Lines that do
// not parse are skipped. Throws ParseError when <labels> is missing.
LabelBlock ParseLabelBlock(std::string_view response);

// Speech entries of the history past desc.consumed, excluding the
// listener's own, in history order.
std::vector<LabeledEntry> PendingEntries(const CategorizedDescriptions& desc,
                                         std::span<const Observation> history,
                                         PlayerId self);

// Assigns parsed lines to entries: the k-th line naming a speaker labels
// that speaker's k-th pending entry. Entries without a line become Broad.
void ApplyLabels(std::vector<LabeledEntry>& entries, const LabelBlock& block);

struct ExtractionOptions {
  // Off for the ablation: suspected metaphors are relabelled Broad.
  bool metaphor_reasoning = true;
  reasoner::SemanticJudge* judge = nullptr;
  reasoner::HypothesisParams params;
};

// Labels every pending entry of view.history and appends them to desc.
// Returns the newly labelled entries. Unparseable output after retries
// labels the batch Broad; each suspected metaphor is hypothesis-tested
// once, with judge failures counted as H-.
std::vector<LabeledEntry> ExtractRoundFeatures(
    const UndercoverView& view, CategorizedDescriptions& desc,
    StageContext& ctx, const ExtractionOptions& options);

// Rule-based reading of one speaker's evidence.
IdentityGuess JudgeSpeaker(const CategorizedDescriptions& desc,
                           PlayerId speaker);

// Belief records for the alive other players; self history carries over
// from prior.
BeliefTable MapBeliefs(const CategorizedDescriptions& desc,
                       std::span<const PlayerId> alive_others,
                       const BeliefTable& prior = {});

// Strict majority among classified players decides; otherwise Unknown.
SelfBelief MonitorSelf(const BeliefTable& beliefs, int round);

Stance ChooseStance(int round, SelfIdentity identity, bool has_opposing_guess);

// Asset name of the guidance text for a stance.
std::string_view GuidanceAsset(Stance s);

// Decides the stance by rule and asks the backend for a directive and
// notes. On parse failure the previous stance and notes are kept.
Strategy PlanStrategy(const UndercoverView& view,
                      const CategorizedDescriptions& desc,
                      const BeliefTable& beliefs,
                      std::span<const Strategy> prior, StageContext& ctx);

struct GeneratedMetaphor {
  reasoner::MetaphorCategory category = reasoner::MetaphorCategory::kOntological;
  std::string metaphor;
  std::string explain;
  // The word the metaphor is meant to describe.
  std::string subject_word;
  std::vector<std::string> retrieved_ids;

  nlohmann::json ToJson() const;
};

// Two-step generation: draft with a chosen category, then refine with the
// best stored experiences of that category. Returns nullopt when the
// draft cannot be parsed or the result reveals a secret word.
std::optional<GeneratedMetaphor> GenerateMetaphor(
    const UndercoverView& view, const Strategy& strategy,
    std::string_view subject_word, pool::PoolSession* pool, StageContext& ctx);

// Broad description that never contains the word.
std::string FallbackDescription(std::string_view own_word);

// Plain speech for the strategy, retried until legal, then the fallback.
std::string SpeakPlain(const UndercoverView& view, const Strategy& strategy,
                       StageContext& ctx);

// Opponent with the most opposing evidence, lowest id on ties; otherwise
// the lowest-id alive other player.
PlayerId ChooseVoteTarget(const BeliefTable& beliefs,
                          std::span<const PlayerId> alive_others);

// ---------------------------------------------------------------------------

template <typename Parser>
auto CallParsed(StageContext& ctx, const llm::CompletionRequest& request,
                Parser parse, int max_attempts)
    -> std::optional<decltype(parse(std::string_view{}))> {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    if (!ctx.budget.Take()) break;
    ++ctx.counters.backend_calls;
    const std::string response =
        llm::Complete(ctx.backend, request, ctx.temperatures);
    try {
      return parse(std::string_view(response));
    } catch (const ParseError&) {
    }
  }
  return std::nullopt;
}

}  // namespace metarena::agent

#endif  // METARENA_AGENT_PIPELINE_H_
