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

#include "metarena/game/types.h"

#include <charconv>

#include "metarena/common/error.h"
#include "metarena/common/text.h"

namespace metarena::game {

std::string PlayerName(PlayerId id) { return "P" + std::to_string(id); }

PlayerId ParsePlayerName(std::string_view s) {
  s = text::Trim(s);
  if (!s.empty() && (s.front() == 'P' || s.front() == 'p')) s.remove_prefix(1);
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value <= 0) return 0;
  return value;
}

std::string_view RoleName(Role role) {
  return role == Role::kCivilian ? "civilian" : "undercover";
}

Role ParseRole(std::string_view s) {
  const std::string lower = text::ToLower(text::Trim(s));
  if (lower == "civilian") return Role::kCivilian;
  if (lower == "undercover") return Role::kUndercover;
  throw InvalidArgument("unknown role: " + std::string(s));
}

std::string_view PhaseName(Phase phase) {
  switch (phase) {
    case Phase::kSpeaking: return "speaking";
    case Phase::kVoting: return "voting";
    case Phase::kTerminal: return "terminal";
  }
  return "?";
}

std::string_view OutcomeName(Outcome outcome) {
  switch (outcome) {
    case Outcome::kOngoing: return "ongoing";
    case Outcome::kCiviliansWin: return "civilians_win";
    case Outcome::kUndercoverWin: return "undercover_win";
    case Outcome::kDraw: return "draw";
  }
  return "?";
}

Outcome ParseOutcome(std::string_view s) {
  for (Outcome o : {Outcome::kOngoing, Outcome::kCiviliansWin,
                    Outcome::kUndercoverWin, Outcome::kDraw}) {
    if (OutcomeName(o) == s) return o;
  }
  throw InvalidArgument("unknown outcome: " + std::string(s));
}

}  // namespace metarena::game
