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

#ifndef METARENA_AGENT_TYPES_H_
#define METARENA_AGENT_TYPES_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "metarena/game/types.h"
#include "metarena/reasoner/hypothesis.h"

namespace metarena::agent {

using game::PlayerId;

enum class PolicyKind { kNaive, kCoT, kCoMetFull, kCoMetNoMet };

// "naive", "cot", "comet", "comet_nomet".
std::string_view PolicyKey(PolicyKind p);
// Display names used in report tables: "Naive", "CoT", "CoMet",
// "CoMet w/o Met.".
std::string_view PolicyDisplayName(PolicyKind p);
PolicyKind ParsePolicy(std::string_view s);

// How one description relates to the listener's own word.
enum class Label { kDetailed, kBroad, kMismatch, kMetaphorSuspect };
std::string_view LabelName(Label l);
// Accepts "metaphor" as an alias of "metaphor_suspect".
Label ParseLabel(std::string_view s);

struct LabeledEntry {
  int round = 0;
  PlayerId speaker = 0;
  std::string utterance;
  Label label = Label::kBroad;
  std::string feature;
  // Set once a suspected metaphor went through hypothesis testing.
  std::optional<reasoner::Verdict> verdict;

  // Evidence the entry contributes: Detailed or H+ supports "same word",
  // Mismatch or H- supports "different word".
  bool SupportsTeammate() const;
  bool SupportsOpponent() const;
};

// Everything a listener extracted from other players' speech so far.
struct CategorizedDescriptions {
  std::vector<LabeledEntry> entries;
  // Speech observations of the shared history already consumed, counted
  // from the start of the history.
  std::size_t consumed = 0;
  // Latest candidate for the other group's word, empty when none.
  std::string opposing_candidate;

  // Accumulated Mismatch units (Mismatch labels plus H- verdicts).
  int MismatchUnits() const;
  // 1 - 0.5^units.
  double OpposingConfidence() const;
  // The candidate once at least kGuessThreshold units have accumulated.
  std::optional<std::string> OpposingGuess() const;

  static constexpr int kGuessThreshold = 2;
};

enum class IdentityGuess { kTeammate, kOpponent, kUndecided };
std::string_view IdentityGuessName(IdentityGuess g);

enum class SelfIdentity { kCivilian, kUndercover, kUnknown };
std::string_view SelfIdentityName(SelfIdentity s);
SelfIdentity ParseSelfIdentity(std::string_view s);

struct OpponentBelief {
  IdentityGuess identity = IdentityGuess::kUndecided;
  // "same word", "different word" or "unknown".
  std::string role_guess = "unknown";
  // Short reading of how the player describes things.
  std::string strategy_guess = "unknown";
  int teammate_evidence = 0;
  int opponent_evidence = 0;
};

struct SelfBelief {
  int round = 0;
  SelfIdentity identity = SelfIdentity::kUnknown;
  double confidence = 0.0;
};

struct BeliefTable {
  // One record per alive other player.
  std::map<PlayerId, OpponentBelief> others;
  // Self-identity estimates, one version per round, oldest first.
  std::vector<SelfBelief> self_history;

  SelfIdentity self_identity() const;
  double self_confidence() const;
  // Replaces the estimate for belief.round or appends a new version.
  void RecordSelf(const SelfBelief& belief);
};

enum class Stance { kSelfProtect, kRevealToTeammates, kDeceive, kMisdirect };
std::string_view StanceName(Stance s);
Stance ParseStance(std::string_view s);

struct Strategy {
  int round = 0;
  Stance stance = Stance::kSelfProtect;
  std::string directive;
  // Written this round for the next one.
  std::string carryover_notes;
  // The previous round's carryover_notes, as given to the planner.
  std::string inherited_notes;
};

nlohmann::json ToJson(const LabeledEntry& e);
nlohmann::json ToJson(const Strategy& s);

}  // namespace metarena::agent

#endif  // METARENA_AGENT_TYPES_H_
