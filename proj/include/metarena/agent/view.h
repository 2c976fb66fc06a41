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

#ifndef METARENA_AGENT_VIEW_H_
#define METARENA_AGENT_VIEW_H_

#include <string>
#include <vector>

#include "metarena/game/taboo.h"
#include "metarena/game/undercover.h"

namespace metarena::agent {

using game::Observation;
using game::PlayerId;

// What one Undercover seat may see: its own word, the public history and
// who is still alive. Roles of other players are never included.
struct UndercoverView {
  PlayerId self = 0;
  std::string own_word;
  int round = 1;
  game::Phase phase = game::Phase::kSpeaking;
  int n_players = 0;
  std::vector<PlayerId> alive;
  std::vector<Observation> history;

  std::vector<PlayerId> AliveOthers() const;
};

UndercoverView MakeView(const game::UndercoverGame& game, PlayerId self);

struct TabooView {
  game::TabooRole role = game::TabooRole::kAttacker;
  // Empty for the defender.
  std::string target;
  int turn = 0;
  int max_turns = 0;
  std::vector<Observation> transcript;
};

TabooView MakeView(const game::TabooGame& game, game::TabooRole role);

// "Round 1, P2: ..." lines for speech entries; "(nothing yet)" when empty.
std::string RenderHistory(const std::vector<Observation>& history);
// "Attacker: ..." / "Defender: ..." lines.
std::string RenderTranscript(const std::vector<Observation>& transcript);

}  // namespace metarena::agent

#endif  // METARENA_AGENT_VIEW_H_
