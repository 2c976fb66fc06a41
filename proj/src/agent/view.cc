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

#include "metarena/agent/view.h"

#include <algorithm>

namespace metarena::agent {

std::vector<PlayerId> UndercoverView::AliveOthers() const {
  std::vector<PlayerId> out;
  for (PlayerId p : alive) {
    if (p != self) out.push_back(p);
  }
  return out;
}

UndercoverView MakeView(const game::UndercoverGame& game, PlayerId self) {
  UndercoverView v;
  v.self = self;
  v.own_word = game.word(self);
  v.round = game.round();
  v.phase = game.phase();
  v.n_players = game.n_players();
  v.alive = game.AlivePlayers();
  v.history = game.history();
  return v;
}

TabooView MakeView(const game::TabooGame& game, game::TabooRole role) {
  TabooView v;
  v.role = role;
  if (role == game::TabooRole::kAttacker) v.target = game.target_word();
  v.turn = game.turn();
  v.max_turns = game.max_turns();
  v.transcript = game.transcript();
  return v;
}

std::string RenderHistory(const std::vector<Observation>& history) {
  std::string out;
  for (const Observation& o : history) {
    if (o.kind != game::ObservationKind::kSpeech) continue;
    out += "Round " + std::to_string(o.round) + ", " +
           game::PlayerName(o.speaker) + ": " + o.utterance + "\n";
  }
  return out.empty() ? "(nothing yet)" : out;
}

std::string RenderTranscript(const std::vector<Observation>& transcript) {
  std::string out;
  for (const Observation& o : transcript) {
    out += o.speaker == game::kAttackerId ? "Attacker: " : "Defender: ";
    out += o.utterance + "\n";
  }
  return out.empty() ? "(nothing yet)" : out;
}

}  // namespace metarena::agent
