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

#ifndef METARENA_GAME_TABOO_H_
#define METARENA_GAME_TABOO_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metarena/game/types.h"

namespace metarena::game {

// Total utterances across both sides; ten per side.
inline constexpr int kDefaultTabooMaxTurns = 20;

enum class TabooRole { kAttacker, kDefender };
enum class TabooOutcome { kOngoing, kAttackerWin, kDefenderWin, kNoWinner };

std::string_view TabooRoleName(TabooRole role);
TabooRole ParseTabooRole(std::string_view s);
std::string_view TabooOutcomeName(TabooOutcome outcome);
TabooOutcome ParseTabooOutcome(std::string_view s);

// Observation speaker ids used in the transcript.
inline constexpr PlayerId kAttackerId = 1;
inline constexpr PlayerId kDefenderId = 2;

class TabooGame {
 public:
  // Throws InvalidArgument on an empty word or max_turns < 2.
  explicit TabooGame(std::string target_word,
                     int max_turns = kDefaultTabooMaxTurns);

  // Attacker speaks first, then the sides alternate. Throws InvalidState
  // after the game is decided, OutOfTurn for the wrong side, and
  // RuleViolation when the attacker says the target word.
  void Step(TabooRole speaker, std::string_view utterance);

  TabooRole NextSpeaker() const;
  const std::string& target_word() const { return target_word_; }
  int turn() const { return turn_; }
  int max_turns() const { return max_turns_; }
  TabooOutcome outcome() const { return outcome_; }
  const std::vector<Observation>& transcript() const { return transcript_; }
  // The defender's guess that ended the game, if any.
  const std::optional<std::string>& final_guess() const {
    return final_guess_;
  }

  bool operator==(const TabooGame&) const = default;

 private:
  std::string target_word_;
  int turn_ = 0;
  int max_turns_;
  TabooOutcome outcome_ = TabooOutcome::kOngoing;
  std::vector<Observation> transcript_;
  std::optional<std::string> final_guess_;
};

}  // namespace metarena::game

#endif  // METARENA_GAME_TABOO_H_
