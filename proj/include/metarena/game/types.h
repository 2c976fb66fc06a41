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

#ifndef METARENA_GAME_TYPES_H_
#define METARENA_GAME_TYPES_H_

#include <string>
#include <string_view>

namespace metarena::game {

// Seat number, 1-based. Rendered as "P<n>" in logs and prompts.
using PlayerId = int;

std::string PlayerName(PlayerId id);
// Parses "P3" / "p3" / "3". Returns 0 when the text is not a player name.
PlayerId ParsePlayerName(std::string_view s);

enum class Role { kCivilian, kUndercover };
enum class Phase { kSpeaking, kVoting, kTerminal };
enum class Outcome { kOngoing, kCiviliansWin, kUndercoverWin, kDraw };
enum class ObservationKind { kSpeech, kVote };

std::string_view RoleName(Role role);
Role ParseRole(std::string_view s);
std::string_view PhaseName(Phase phase);
std::string_view OutcomeName(Outcome outcome);
Outcome ParseOutcome(std::string_view s);

// One entry of the shared history.
struct Observation {
  int round = 0;
  PlayerId speaker = 0;
  std::string utterance;
  ObservationKind kind = ObservationKind::kSpeech;
  PlayerId vote_target = 0;  // Set for kVote only.

  bool operator==(const Observation&) const = default;
};

}  // namespace metarena::game

#endif  // METARENA_GAME_TYPES_H_
