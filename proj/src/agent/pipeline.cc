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

#include "metarena/agent/pipeline.h"

#include <algorithm>
#include <map>

#include "metarena/common/error.h"
#include "metarena/common/text.h"
#include "metarena/game/undercover.h"

namespace metarena::agent {
namespace {

constexpr int kRetrievedExperiences = 3;

std::string RenderEntries(const std::vector<LabeledEntry>& entries) {
  std::string out;
  for (const LabeledEntry& e : entries) {
    out += game::PlayerName(e.speaker) + " (round " + std::to_string(e.round) +
           "): " + e.utterance + "\n";
  }
  return out;
}

std::string RenderAnalysis(const CategorizedDescriptions& desc) {
  std::string out;
  for (const LabeledEntry& e : desc.entries) {
    out += game::PlayerName(e.speaker) + " round " + std::to_string(e.round) +
           ": " + std::string(LabelName(e.label));
    if (e.verdict) out += " " + std::string(reasoner::VerdictName(*e.verdict));
    if (!e.feature.empty()) out += " (" + e.feature + ")";
    out += "\n";
  }
  return out.empty() ? "(nothing yet)" : out;
}

std::string RenderBeliefs(const BeliefTable& beliefs) {
  std::string out;
  for (const auto& [id, b] : beliefs.others) {
    out += game::PlayerName(id) + ": " +
           std::string(IdentityGuessName(b.identity)) + ", " + b.role_guess +
           ", " + b.strategy_guess + "\n";
  }
  return out.empty() ? "(nobody)" : out;
}

std::string StrategyReading(const CategorizedDescriptions& desc,
                            PlayerId speaker) {
  std::map<Label, int> counts;
  bool metaphor = false;
  for (const LabeledEntry& e : desc.entries) {
    if (e.speaker != speaker) continue;
    ++counts[e.label];
    metaphor = metaphor || e.verdict.has_value();
  }
  if (metaphor) return "speaks in metaphors";
  if (counts[Label::kMismatch] > 0) return "describes a different word";
  if (counts[Label::kDetailed] > 0) return "gives specific details";
  if (counts[Label::kBroad] > 0) return "stays vague";
  return "unknown";
}

bool Legal(std::string_view utterance, std::string_view own_word) {
  return !text::Trim(utterance).empty() &&
         !game::RevealsWord(utterance, own_word);
}

}  // namespace

nlohmann::json CallCounters::ToJson() const {
  return {{"backend_calls", backend_calls},
          {"extraction_calls", extraction_calls},
          {"plan_calls", plan_calls},
          {"speak_calls", speak_calls},
          {"vote_calls", vote_calls},
          {"reasoner_calls", reasoner_calls},
          {"generator_calls", generator_calls},
          {"max_turn_calls", max_turn_calls},
          {"backend_failures", backend_failures}};
}

bool TurnBudget::Take() {
  if (used_ >= limit_) return false;
  ++used_;
  return true;
}

LabelBlock ParseLabelBlock(std::string_view response) {
  const std::optional<std::string> body = llm::ExtractTag(response, "labels");
  if (!body) throw ParseError("missing <labels> section");
  LabelBlock block;
  for (const std::string& raw : text::Split(*body, '\n')) {
    const std::vector<std::string> parts = text::Split(raw, '|');
    if (parts.size() < 2) continue;
    const PlayerId speaker = game::ParsePlayerName(text::Trim(parts[0]));
    if (speaker <= 0) continue;
    try {
      LabelLine line{speaker, ParseLabel(parts[1]), ""};
      if (parts.size() >= 3) {
        std::string feature = parts[2];
        for (std::size_t i = 3; i < parts.size(); ++i) feature += "|" + parts[i];
        line.feature = std::string(text::Trim(feature));
      }
      block.lines.push_back(std::move(line));
    } catch (const ParseError&) {
    }
  }
  if (const auto word = llm::ExtractTag(response, "opposing_word")) {
    const std::string w = text::NormalizeWhitespace(*word);
    if (!w.empty() && !text::EqualsIgnoreCase(w, "unknown")) {
      block.opposing_word = w;
    }
  }
  return block;
}

std::vector<LabeledEntry> PendingEntries(const CategorizedDescriptions& desc,
                                         std::span<const Observation> history,
                                         PlayerId self) {
  std::vector<LabeledEntry> out;
  std::size_t speech_index = 0;
  for (const Observation& o : history) {
    if (o.kind != game::ObservationKind::kSpeech) continue;
    if (speech_index++ < desc.consumed) continue;
    if (o.speaker == self) continue;
    LabeledEntry e;
    e.round = o.round;
    e.speaker = o.speaker;
    e.utterance = o.utterance;
    out.push_back(std::move(e));
  }
  return out;
}

void ApplyLabels(std::vector<LabeledEntry>& entries, const LabelBlock& block) {
  std::map<PlayerId, std::vector<const LabelLine*>> by_speaker;
  for (const LabelLine& line : block.lines) {
    by_speaker[line.speaker].push_back(&line);
  }
  std::map<PlayerId, std::size_t> next;
  for (LabeledEntry& e : entries) {
    const auto& lines = by_speaker[e.speaker];
    const std::size_t k = next[e.speaker]++;
    if (k < lines.size()) {
      e.label = lines[k]->label;
      e.feature = lines[k]->feature;
    } else {
      e.label = Label::kBroad;
      e.feature.clear();
    }
  }
}

std::vector<LabeledEntry> ExtractRoundFeatures(
    const UndercoverView& view, CategorizedDescriptions& desc,
    StageContext& ctx, const ExtractionOptions& options) {
  std::vector<LabeledEntry> fresh = PendingEntries(desc, view.history, view.self);
  std::size_t speeches = 0;
  for (const Observation& o : view.history) {
    if (o.kind == game::ObservationKind::kSpeech) ++speeches;
  }
  desc.consumed = speeches;
  if (fresh.empty()) return fresh;

  ++ctx.counters.extraction_calls;
  const llm::CompletionRequest request = ctx.prompts.Build(
      "feature_extractor",
      {{"player", game::PlayerName(view.self)},
       {"own_word", view.own_word},
       {"round", std::to_string(view.round)},
       {"history", RenderHistory(view.history)},
       {"new_entries", RenderEntries(fresh)}},
      llm::Purpose::kAnalysis);
  const std::optional<LabelBlock> block =
      CallParsed(ctx, request, [](std::string_view r) { return ParseLabelBlock(r); });
  ApplyLabels(fresh, block.value_or(LabelBlock{}));
  if (block && !block->opposing_word.empty() &&
      !text::EqualsIgnoreCase(block->opposing_word, view.own_word)) {
    desc.opposing_candidate = block->opposing_word;
  }

  for (LabeledEntry& e : fresh) {
    if (e.label != Label::kMetaphorSuspect) continue;
    if (!options.metaphor_reasoning || options.judge == nullptr) {
      e.label = Label::kBroad;
      continue;
    }
    ctx.budget.Grow(1);
    ctx.budget.Take();
    ++ctx.counters.reasoner_calls;
    try {
      const reasoner::HypothesisDecision d = reasoner::HypothesisTest(
          e.utterance, view.own_word, options.params, *options.judge);
      e.verdict = d.verdict;
    } catch (const BackendError&) {
      throw;
    } catch (const Error&) {
      e.verdict = reasoner::Verdict::kHMinus;
    }
  }
  desc.entries.insert(desc.entries.end(), fresh.begin(), fresh.end());
  return fresh;
}

IdentityGuess JudgeSpeaker(const CategorizedDescriptions& desc,
                           PlayerId speaker) {
  bool teammate = false;
  for (const LabeledEntry& e : desc.entries) {
    if (e.speaker != speaker) continue;
    if (e.SupportsOpponent()) return IdentityGuess::kOpponent;
    teammate = teammate || e.SupportsTeammate();
  }
  return teammate ? IdentityGuess::kTeammate : IdentityGuess::kUndecided;
}

BeliefTable MapBeliefs(const CategorizedDescriptions& desc,
                       std::span<const PlayerId> alive_others,
                       const BeliefTable& prior) {
  BeliefTable table;
  table.self_history = prior.self_history;
  for (PlayerId p : alive_others) {
    OpponentBelief b;
    for (const LabeledEntry& e : desc.entries) {
      if (e.speaker != p) continue;
      b.teammate_evidence += e.SupportsTeammate() ? 1 : 0;
      b.opponent_evidence += e.SupportsOpponent() ? 1 : 0;
    }
    b.identity = JudgeSpeaker(desc, p);
    b.role_guess = b.identity == IdentityGuess::kTeammate   ? "same word"
                   : b.identity == IdentityGuess::kOpponent ? "different word"
                                                            : "unknown";
    b.strategy_guess = StrategyReading(desc, p);
    table.others.emplace(p, std::move(b));
  }
  return table;
}

SelfBelief MonitorSelf(const BeliefTable& beliefs, int round) {
  int teammates = 0;
  int opponents = 0;
  for (const auto& [id, b] : beliefs.others) {
    teammates += b.identity == IdentityGuess::kTeammate ? 1 : 0;
    opponents += b.identity == IdentityGuess::kOpponent ? 1 : 0;
  }
  SelfBelief s;
  s.round = round;
  const int classified = teammates + opponents;
  if (classified == 0) return s;
  if (2 * opponents > classified) {
    s.identity = SelfIdentity::kUndercover;
    s.confidence = static_cast<double>(opponents) / classified;
  } else if (2 * teammates > classified) {
    s.identity = SelfIdentity::kCivilian;
    s.confidence = static_cast<double>(teammates) / classified;
  }
  return s;
}

Stance ChooseStance(int round, SelfIdentity identity, bool has_opposing_guess) {
  if (round <= 1 || identity == SelfIdentity::kUnknown) {
    return Stance::kSelfProtect;
  }
  if (identity == SelfIdentity::kCivilian) return Stance::kRevealToTeammates;
  return has_opposing_guess ? Stance::kDeceive : Stance::kMisdirect;
}

std::string_view GuidanceAsset(Stance s) {
  switch (s) {
    case Stance::kSelfProtect: return "guidance_self_protect";
    case Stance::kRevealToTeammates: return "guidance_reveal";
    case Stance::kDeceive: return "guidance_deceive";
    case Stance::kMisdirect: return "guidance_misdirect";
  }
  return "guidance_self_protect";
}

Strategy PlanStrategy(const UndercoverView& view,
                      const CategorizedDescriptions& desc,
                      const BeliefTable& beliefs,
                      std::span<const Strategy> prior, StageContext& ctx) {
  Strategy s;
  s.round = view.round;
  if (!prior.empty()) s.inherited_notes = prior.back().carryover_notes;
  const std::optional<std::string> guess = desc.OpposingGuess();
  s.stance = ChooseStance(view.round, beliefs.self_identity(), guess.has_value());
  const std::string guidance(text::Trim(ctx.prompts.Asset(GuidanceAsset(s.stance))));

  ++ctx.counters.plan_calls;
  const llm::CompletionRequest request = ctx.prompts.Build(
      "strategy_planner",
      {{"player", game::PlayerName(view.self)},
       {"own_word", view.own_word},
       {"round", std::to_string(view.round)},
       {"stance", std::string(StanceName(s.stance))},
       {"stance_guidance", guidance},
       {"identity", std::string(SelfIdentityName(beliefs.self_identity()))},
       {"opposing_word", guess.value_or("unknown")},
       {"beliefs", RenderBeliefs(beliefs)},
       {"analysis", RenderAnalysis(desc)},
       {"prior_notes", s.inherited_notes.empty() ? "(none)" : s.inherited_notes}},
      llm::Purpose::kAnalysis);
  using Plan = std::pair<std::string, std::string>;
  const std::optional<Plan> plan =
      CallParsed(ctx, request, [](std::string_view r) -> Plan {
        const auto directive = llm::ExtractTag(r, "directive");
        if (!directive || directive->empty()) {
          throw ParseError("missing <directive>");
        }
        return {*directive, llm::ExtractTag(r, "notes").value_or("")};
      });
  if (plan) {
    s.directive = plan->first;
    s.carryover_notes = plan->second;
  } else {
    if (!prior.empty()) s.stance = prior.back().stance;
    s.directive = std::string(
        text::Trim(ctx.prompts.Asset(GuidanceAsset(s.stance))));
    s.carryover_notes = s.inherited_notes;
  }
  return s;
}

nlohmann::json GeneratedMetaphor::ToJson() const {
  return {{"category", reasoner::CategoryName(category)},
          {"metaphor", metaphor},
          {"explain", explain},
          {"subject_word", subject_word},
          {"retrieved", retrieved_ids}};
}

std::optional<GeneratedMetaphor> GenerateMetaphor(
    const UndercoverView& view, const Strategy& strategy,
    std::string_view subject_word, pool::PoolSession* pool,
    StageContext& ctx) {
  ++ctx.counters.generator_calls;
  GeneratedMetaphor out;
  out.subject_word = std::string(subject_word);

  const llm::CompletionRequest draft_request = ctx.prompts.Build(
      "metaphor_gen_step1",
      {{"subject_word", out.subject_word},
       {"own_word", view.own_word},
       {"directive", strategy.directive},
       {"history", RenderHistory(view.history)}},
      llm::Purpose::kGeneration);
  using Draft = std::tuple<reasoner::MetaphorCategory, std::string, std::string>;
  const std::optional<Draft> draft = CallParsed(
      ctx, draft_request,
      [](std::string_view r) -> Draft {
        const auto category = llm::ExtractTag(r, "category");
        const auto metaphor = llm::ExtractTag(r, "metaphor");
        if (!category || !metaphor || metaphor->empty()) {
          throw ParseError("incomplete metaphor draft");
        }
        try {
          return {reasoner::ParseCategory(*category), *metaphor,
                  llm::ExtractTag(r, "explain").value_or("")};
        } catch (const InvalidArgument& e) {
          throw ParseError(e.what());
        }
      },
      1);
  if (!draft) return std::nullopt;
  std::tie(out.category, out.metaphor, out.explain) = *draft;

  std::string experiences;
  if (pool != nullptr) {
    for (const pool::ExperienceRecord& r :
         pool->Retrieve(out.category, kRetrievedExperiences)) {
      out.retrieved_ids.push_back(r.id);
      char score[16];
      std::snprintf(score, sizeof score, "%.2f", r.score());
      experiences += "- \"" + r.metaphor + "\" (score " + score + "): " +
                     r.explain;
      if (!r.comment.empty()) experiences += " Advice: " + r.comment;
      experiences += "\n";
    }
  }
  if (experiences.empty()) experiences = "(none)";

  const llm::CompletionRequest refine_request = ctx.prompts.Build(
      "metaphor_gen_step2",
      {{"subject_word", out.subject_word},
       {"own_word", view.own_word},
       {"category", std::string(reasoner::CategoryName(out.category))},
       {"draft", out.metaphor},
       {"explain", out.explain},
       {"experiences", experiences}},
      llm::Purpose::kGeneration);
  using Refined = std::pair<std::string, std::string>;
  const std::optional<Refined> refined = CallParsed(
      ctx, refine_request,
      [](std::string_view r) -> Refined {
        const auto metaphor = llm::ExtractTag(r, "metaphor");
        if (!metaphor || metaphor->empty()) throw ParseError("no metaphor");
        return {*metaphor, llm::ExtractTag(r, "explain").value_or("")};
      },
      1);
  if (refined) {
    out.metaphor = refined->first;
    if (!refined->second.empty()) out.explain = refined->second;
  }
  if (!Legal(out.metaphor, view.own_word) ||
      game::RevealsWord(out.metaphor, out.subject_word)) {
    return std::nullopt;
  }
  return out;
}

std::string FallbackDescription(std::string_view own_word) {
  for (const char* candidate :
       {"It is something many people come across in everyday life.",
        "I would rather keep my description general this round.",
        "Nothing more to add for now."}) {
    if (Legal(candidate, own_word)) return candidate;
  }
  return "Pass.";
}

std::string SpeakPlain(const UndercoverView& view, const Strategy& strategy,
                       StageContext& ctx) {
  ++ctx.counters.speak_calls;
  const llm::CompletionRequest request = ctx.prompts.Build(
      "speaker",
      {{"player", game::PlayerName(view.self)},
       {"own_word", view.own_word},
       {"round", std::to_string(view.round)},
       {"directive", strategy.directive},
       {"history", RenderHistory(view.history)}},
      llm::Purpose::kGeneration);
  const std::string own = view.own_word;
  const std::optional<std::string> speech =
      CallParsed(ctx, request, [&own](std::string_view r) {
        const auto s = llm::ExtractTag(r, "speech");
        if (!s || !Legal(*s, own)) throw ParseError("no legal <speech>");
        return text::NormalizeWhitespace(*s);
      });
  return speech.value_or(FallbackDescription(view.own_word));
}

PlayerId ChooseVoteTarget(const BeliefTable& beliefs,
                          std::span<const PlayerId> alive_others) {
  if (alive_others.empty()) throw InvalidState("nobody to vote for");
  PlayerId best = 0;
  int best_evidence = -1;
  for (PlayerId p : alive_others) {
    auto it = beliefs.others.find(p);
    if (it == beliefs.others.end() ||
        it->second.identity != IdentityGuess::kOpponent) {
      continue;
    }
    const int evidence = it->second.opponent_evidence;
    if (evidence > best_evidence || (evidence == best_evidence && p < best)) {
      best = p;
      best_evidence = evidence;
    }
  }
  if (best != 0) return best;
  return *std::min_element(alive_others.begin(), alive_others.end());
}

}  // namespace metarena::agent
