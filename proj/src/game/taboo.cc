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

#include "metarena/game/taboo.h"

#include "metarena/common/error.h"
#include "metarena/common/text.h"

namespace metarena::game {

std::string_view TabooRoleName(TabooRole role) {
  return role == TabooRole::kAttacker ? "attacker" : "defender";
}

TabooRole ParseTabooRole(std::string_view s) {
  const std::string lower = text::ToLower(text::Trim(s));
  if (lower == "attacker") return TabooRole::kAttacker;
  if (lower == "defender") return TabooRole::kDefender;
  throw InvalidArgument("unknown taboo role: " + std::string(s));
}

std::string_view TabooOutcomeName(TabooOutcome outcome) {
  switch (outcome) {
    case TabooOutcome::kOngoing: return "ongoing";
    case TabooOutcome::kAttackerWin: return "attacker_win";
    case TabooOutcome::kDefenderWin: return "defender_win";
    case TabooOutcome::kNoWinner: return "no_winner";
  }
  return "?";
}

TabooOutcome ParseTabooOutcome(std::string_view s) {
  for (TabooOutcome o : {TabooOutcome::kOngoing, TabooOutcome::kAttackerWin,
                         TabooOutcome::kDefenderWin, TabooOutcome::kNoWinner}) {
    if (TabooOutcomeName(o) == s) return o;
  }
  throw InvalidArgument("unknown taboo outcome: " + std::string(s));
}

TabooGame::TabooGame(std::string target_word, int max_turns)
    : target_word_(text::Trim(target_word)), max_turns_(max_turns) {
  if (target_word_.empty()) throw InvalidArgument("empty taboo target word");
  if (max_turns_ < 2) {
    throw InvalidArgument("max_turns must allow one turn per side (>= 2)");
  }
}

TabooRole TabooGame::NextSpeaker() const {
  return turn_ % 2 == 0 ? TabooRole::kAttacker : TabooRole::kDefender;
}

void TabooGame::Step(TabooRole speaker, std::string_view utterance) {
  if (outcome_ != TabooOutcome::kOngoing) {
    throw InvalidState("taboo game is already decided");
  }
  if (speaker != NextSpeaker()) {
    throw OutOfTurn(std::string(TabooRoleName(speaker)) +
                    " spoke out of turn");
  }
  if (text::Trim(utterance).empty()) {
    throw InvalidArgument("empty taboo utterance");
  }
  if (speaker == TabooRole::kAttacker &&
      text::ContainsWholeWord(utterance, target_word_)) {
    throw RuleViolation("attacker said the target word");
  }

  transcript_.push_back(Observation{
      .round = turn_,
      .speaker = speaker == TabooRole::kAttacker ? kAttackerId : kDefenderId,
      .utterance = std::string(utterance),
      .kind = ObservationKind::kSpeech});
  ++turn_;

  if (speaker == TabooRole::kDefender) {
    if (std::optional<std::string> guess = text::ParseGuess(utterance)) {
      final_guess_ = guess;
      outcome_ = text::EqualsIgnoreCase(*guess, target_word_)
                     ? TabooOutcome::kDefenderWin
                     : TabooOutcome::kAttackerWin;
      return;
    }
    if (text::ContainsWholeWord(utterance, target_word_)) {
      outcome_ = TabooOutcome::kAttackerWin;
      return;
    }
  }
  if (turn_ >= max_turns_) outcome_ = TabooOutcome::kNoWinner;
}

}  // namespace metarena::game
