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

#ifndef METARENA_AGENT_FEEDBACK_H_
#define METARENA_AGENT_FEEDBACK_H_

#include <vector>

#include "json.hpp"
#include "metarena/agent/pipeline.h"
#include "metarena/common/rng.h"
#include "metarena/game/undercover.h"
#include "metarena/llm/backend.h"
#include "metarena/llm/prompts.h"
#include "metarena/pool/experience_pool.h"
#include "metarena/reasoner/hypothesis.h"

namespace metarena::agent {

struct ResponderOutcome {
  PlayerId responder = 0;
  pool::ResponderRole role = pool::ResponderRole::kTeammate;
  bool recognized = false;
  double best_score = 0.0;
};

struct MetaphorFeedback {
  std::vector<ResponderOutcome> responders;
  std::string comment;
  // Ready for PoolSession::AddRecord; its id is assigned at commit.
  pool::ExperienceRecord record;

  nlohmann::json ToJson() const;
};

struct FeedbackDeps {
  reasoner::SemanticJudge* judge = nullptr;
  reasoner::HypothesisParams hypothesis;
  llm::Backend* backend = nullptr;
  const llm::PromptLibrary* prompts = nullptr;
  llm::TemperaturePolicy temperatures;
};

// Picks one or two alive players other than the speaker at random. Each
// one tests the metaphor against their own word; a responder holding the
// speaker's word is a teammate, anyone else a rival. One evaluator call
// then writes advice for the stored record.
MetaphorFeedback EvaluateMetaphor(const GeneratedMetaphor& metaphor,
                                  const game::UndercoverGame& game,
                                  PlayerId speaker, Rng& rng,
                                  const FeedbackDeps& deps);

}  // namespace metarena::agent

#endif  // METARENA_AGENT_FEEDBACK_H_
