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

#include "metarena/agent/types.h"

#include <cmath>

#include "metarena/common/error.h"
#include "metarena/common/text.h"

namespace metarena::agent {

std::string_view PolicyKey(PolicyKind p) {
  switch (p) {
    case PolicyKind::kNaive: return "naive";
    case PolicyKind::kCoT: return "cot";
    case PolicyKind::kCoMetFull: return "comet";
    case PolicyKind::kCoMetNoMet: return "comet_nomet";
  }
  return "?";
}

std::string_view PolicyDisplayName(PolicyKind p) {
  switch (p) {
    case PolicyKind::kNaive: return "Naive";
    case PolicyKind::kCoT: return "CoT";
    case PolicyKind::kCoMetFull: return "CoMet";
    case PolicyKind::kCoMetNoMet: return "CoMet w/o Met.";
  }
  return "?";
}

PolicyKind ParsePolicy(std::string_view s) {
  const std::string k = text::ToLower(text::Trim(s));
  if (k == "naive") return PolicyKind::kNaive;
  if (k == "cot") return PolicyKind::kCoT;
  if (k == "comet" || k == "comet_full") return PolicyKind::kCoMetFull;
  if (k == "comet_nomet" || k == "comet-nomet" || k == "comet w/o met.") {
    return PolicyKind::kCoMetNoMet;
  }
  throw InvalidArgument("unknown policy: " + std::string(s));
}

std::string_view LabelName(Label l) {
  switch (l) {
    case Label::kDetailed: return "detailed";
    case Label::kBroad: return "broad";
    case Label::kMismatch: return "mismatch";
    case Label::kMetaphorSuspect: return "metaphor_suspect";
  }
  return "?";
}

Label ParseLabel(std::string_view s) {
  const std::string k = text::ToLower(text::Trim(s));
  if (k == "detailed") return Label::kDetailed;
  if (k == "broad") return Label::kBroad;
  if (k == "mismatch") return Label::kMismatch;
  if (k == "metaphor" || k == "metaphor_suspect") {
    return Label::kMetaphorSuspect;
  }
  throw ParseError("unknown label: " + std::string(s));
}

bool LabeledEntry::SupportsTeammate() const {
  return label == Label::kDetailed || verdict == reasoner::Verdict::kHPlus;
}

bool LabeledEntry::SupportsOpponent() const {
  return label == Label::kMismatch || verdict == reasoner::Verdict::kHMinus;
}

int CategorizedDescriptions::MismatchUnits() const {
  int n = 0;
  for (const LabeledEntry& e : entries) n += e.SupportsOpponent() ? 1 : 0;
  return n;
}

double CategorizedDescriptions::OpposingConfidence() const {
  return 1.0 - std::pow(0.5, MismatchUnits());
}

std::optional<std::string> CategorizedDescriptions::OpposingGuess() const {
  if (opposing_candidate.empty() || MismatchUnits() < kGuessThreshold) {
    return std::nullopt;
  }
  return opposing_candidate;
}

std::string_view IdentityGuessName(IdentityGuess g) {
  switch (g) {
    case IdentityGuess::kTeammate: return "teammate";
    case IdentityGuess::kOpponent: return "opponent";
    case IdentityGuess::kUndecided: return "undecided";
  }
  return "?";
}

std::string_view SelfIdentityName(SelfIdentity s) {
  switch (s) {
    case SelfIdentity::kCivilian: return "civilian";
    case SelfIdentity::kUndercover: return "undercover";
    case SelfIdentity::kUnknown: return "unknown";
  }
  return "?";
}

SelfIdentity ParseSelfIdentity(std::string_view s) {
  const std::string k = text::ToLower(text::Trim(s));
  if (k == "civilian") return SelfIdentity::kCivilian;
  if (k == "undercover") return SelfIdentity::kUndercover;
  if (k == "unknown") return SelfIdentity::kUnknown;
  throw ParseError("unknown self identity: " + std::string(s));
}

SelfIdentity BeliefTable::self_identity() const {
  return self_history.empty() ? SelfIdentity::kUnknown
                              : self_history.back().identity;
}

double BeliefTable::self_confidence() const {
  return self_history.empty() ? 0.0 : self_history.back().confidence;
}

void BeliefTable::RecordSelf(const SelfBelief& belief) {
  if (!self_history.empty() && self_history.back().round == belief.round) {
    self_history.back() = belief;
  } else {
    self_history.push_back(belief);
  }
}

std::string_view StanceName(Stance s) {
  switch (s) {
    case Stance::kSelfProtect: return "self_protect";
    case Stance::kRevealToTeammates: return "reveal_to_teammates";
    case Stance::kDeceive: return "deceive";
    case Stance::kMisdirect: return "misdirect";
  }
  return "?";
}

Stance ParseStance(std::string_view s) {
  const std::string k = text::ToLower(text::Trim(s));
  if (k == "self_protect") return Stance::kSelfProtect;
  if (k == "reveal_to_teammates") return Stance::kRevealToTeammates;
  if (k == "deceive") return Stance::kDeceive;
  if (k == "misdirect") return Stance::kMisdirect;
  throw ParseError("unknown stance: " + std::string(s));
}

nlohmann::json ToJson(const LabeledEntry& e) {
  nlohmann::json j{{"round", e.round},
                   {"speaker", game::PlayerName(e.speaker)},
                   {"label", LabelName(e.label)},
                   {"feature", e.feature}};
  if (e.verdict) j["verdict"] = reasoner::VerdictName(*e.verdict);
  return j;
}

nlohmann::json ToJson(const Strategy& s) {
  return {{"round", s.round},
          {"stance", StanceName(s.stance)},
          {"directive", s.directive},
          {"carryover_notes", s.carryover_notes},
          {"inherited_notes", s.inherited_notes}};
}

}  // namespace metarena::agent
