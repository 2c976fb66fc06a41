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

#include "metarena/agent/feedback.h"

#include "metarena/common/error.h"

namespace metarena::agent {

nlohmann::json MetaphorFeedback::ToJson() const {
  nlohmann::json responders_json = nlohmann::json::array();
  for (const ResponderOutcome& r : responders) {
    responders_json.push_back(
        {{"responder", game::PlayerName(r.responder)},
         {"role", r.role == pool::ResponderRole::kTeammate ? "teammate" : "rival"},
         {"recognized", r.recognized},
         {"best_score", r.best_score}});
  }
  return {{"responders", std::move(responders_json)},
          {"comment", comment},
          {"score", record.score()}};
}

MetaphorFeedback EvaluateMetaphor(const GeneratedMetaphor& metaphor,
                                  const game::UndercoverGame& game,
                                  PlayerId speaker, Rng& rng,
                                  const FeedbackDeps& deps) {
  if (deps.judge == nullptr || deps.backend == nullptr ||
      deps.prompts == nullptr) {
    throw InvalidArgument("metaphor feedback needs a judge and a backend");
  }
  std::vector<PlayerId> candidates;
  for (PlayerId p : game.AlivePlayers()) {
    if (p != speaker) candidates.push_back(p);
  }
  rng.Shuffle(candidates);
  const std::size_t wanted = 1 + static_cast<std::size_t>(rng.Below(2));
  if (candidates.size() > wanted) candidates.resize(wanted);

  MetaphorFeedback out;
  pool::ExperienceRecord& rec = out.record;
  rec.id = "pending";
  rec.words = {game.pair().civilian_word, game.pair().undercover_word};
  rec.method = metaphor.category;
  rec.metaphor = metaphor.metaphor;
  rec.explain = metaphor.explain;

  std::string reactions;
  for (PlayerId p : candidates) {
    ResponderOutcome r;
    r.responder = p;
    r.role = game.role(p) == game.role(speaker) ? pool::ResponderRole::kTeammate
                                                : pool::ResponderRole::kRival;
    try {
      const reasoner::HypothesisDecision d = reasoner::HypothesisTest(
          metaphor.metaphor, game.word(p), deps.hypothesis, *deps.judge);
      r.recognized = d.verdict == reasoner::Verdict::kHPlus;
      r.best_score = d.best_score;
    } catch (const BackendError&) {
      throw;
    } catch (const Error&) {
      r.recognized = false;
    }
    ++rec.total_references;
    if (r.recognized) {
      if (r.role == pool::ResponderRole::kTeammate) {
        ++rec.teammate_recognitions;
      } else {
        ++rec.rival_recognitions;
      }
    }
    reactions += std::string(r.role == pool::ResponderRole::kTeammate
                                 ? "A teammate "
                                 : "A rival ") +
                 (r.recognized ? "recognised it.\n" : "did not recognise it.\n");
    out.responders.push_back(r);
  }

  const llm::CompletionRequest request = deps.prompts->Build(
      "evaluator_comment",
      {{"subject_word", metaphor.subject_word},
       {"category", std::string(reasoner::CategoryName(metaphor.category))},
       {"metaphor", metaphor.metaphor},
       {"reactions", reactions}},
      llm::Purpose::kAnalysis);
  const std::string response =
      llm::Complete(*deps.backend, request, deps.temperatures);
  out.comment = llm::ExtractTag(response, "comment").value_or("");
  rec.comment = out.comment;
  return out;
}

}  // namespace metarena::agent
