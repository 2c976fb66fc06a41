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

#ifndef METARENA_METRICS_ANNOTATED_LOG_H_
#define METARENA_METRICS_ANNOTATED_LOG_H_

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "metarena/game/game_log.h"
#include "metarena/game/types.h"

namespace metarena::llm {
class Backend;
class PromptLibrary;
}  // namespace metarena::llm

namespace metarena::metrics {

using game::PlayerId;

struct PlayerTruth {
  PlayerId id = 0;
  // "civilian"/"undercover", or "attacker"/"defender" for Taboo.
  std::string role;
  // Policy key, e.g. "comet".
  std::string policy;
  std::string word;
};

// One statement made by a player, as judged after the game.
struct SpeechAnnotation {
  int round = 0;
  PlayerId speaker = 0;
  std::string utterance;
  bool leaked = false;
  bool inconsistent = false;
  std::string rationale;
};

// One statement as received by another player who heard it.
struct ReceivedEntry {
  PlayerId receiver = 0;
  PlayerId speaker = 0;
  int round = 0;
  // Receiver's label agreed with the true roles.
  bool feature_valid = false;
  // "teammate", "opponent", "undecided", or "" when never analysed.
  std::string judgment;
  bool judgment_correct = false;
};

struct SelfClaim {
  PlayerId player = 0;
  int round = 0;
  // "civilian", "undercover" or "unknown".
  std::string claim;
  bool correct = false;
};

struct AnnotatedGame {
  std::string game_id;
  std::string game = "undercover";
  std::string outcome;
  std::vector<PlayerTruth> players;
  std::vector<SpeechAnnotation> speeches;
  std::vector<ReceivedEntry> received;
  std::vector<SelfClaim> claims;

  const PlayerTruth& player(PlayerId id) const;
  // Whether the side holding `role` won.
  bool RoleWon(std::string_view role) const;

  nlohmann::json ToJson() const;
  static AnnotatedGame FromJson(const nlohmann::json& j);
};

std::string ToJsonLines(const std::vector<AnnotatedGame>& games);
std::vector<AnnotatedGame> AnnotatedFromJsonLines(std::string_view text);

// Builds an annotation from an episode log. Judgment correctness is
// mechanical; leaked/inconsistent come from Label(). Taboo logs carry
// players and outcome only.
class Annotator {
 public:
  virtual ~Annotator() = default;
  AnnotatedGame Annotate(const game::EventLog& log);

 protected:
  struct SpeechContext {
    const PlayerTruth* speaker = nullptr;
    std::string other_word;
    std::string stance;
    // Opposing-evidence flags from receivers, by whether they share the
    // speaker's role.
    int teammate_flags = 0;
    int teammate_readers = 0;
    int opponent_flags = 0;
  };
  virtual void Label(SpeechAnnotation& speech, const SpeechContext& ctx);
};

// Leaked: some true opponent labelled the statement Mismatch or H-.
// Inconsistent: the speaker's stance was deceive or misdirect, or a strict
// majority of the true teammates who read it flagged it that way.
class RuleAnnotator : public Annotator {};

// Asks a model for leaked/inconsistent with a rationale; unparseable
// answers keep the rule labels.
class LlmAnnotator : public Annotator {
 public:
  LlmAnnotator(llm::Backend& backend, const llm::PromptLibrary& prompts);

 protected:
  void Label(SpeechAnnotation& speech, const SpeechContext& ctx) override;

 private:
  llm::Backend& backend_;
  const llm::PromptLibrary& prompts_;
};

}  // namespace metarena::metrics

#endif  // METARENA_METRICS_ANNOTATED_LOG_H_
