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

#ifndef METARENA_REASONER_HYPOTHESIS_H_
#define METARENA_REASONER_HYPOTHESIS_H_

#include <string_view>
#include <vector>

#include "metarena/reasoner/semantic_judge.h"
#include "metarena/reasoner/types.h"

namespace metarena::reasoner {

struct HypothesisParams {
  double threshold = 0.4;
  double feature_decay = 0.9;
  double aspect_decay = 0.9;

  // threshold in [0, 1]; decays in (0, 1].
  void Validate() const;
};

enum class Verdict {
  kHPlus,   // The sentence describes the holder's own word.
  kHMinus,  // It describes something else.
};

std::string_view VerdictName(Verdict v);

struct HypothesisDecision {
  Verdict verdict = Verdict::kHMinus;
  double best_score = 0.0;
  // Indices into features/aspects; -1 when no pair scored above zero.
  int best_feature = -1;
  int best_aspect = -1;
  FeatureSet features;
  MetaphorAspects aspects;
  // score_matrix[i][j] = feature_decay^i * aspect_decay^j * delta(i, j).
  std::vector<std::vector<double>> score_matrix;
};

// Position weight decay^k; the first item has weight 1.
double PositionWeight(double decay, int position);

// Features of the word, deduplicated by dimension (first wins). Throws
// InvalidArgument on an empty word and Error when nothing usable returns.
FeatureSet ExtractFeatures(std::string_view word, SemanticJudge& judge);

// Metaphorical aspects of the sentence, deduplicated by category. Throws
// InvalidArgument on an empty sentence.
MetaphorAspects ExpandMetaphor(std::string_view sentence, SemanticJudge& judge);

// Snapped judge score for one (feature, aspect) pair.
double MatchScore(const Feature& feature, const Aspect& aspect,
                  std::string_view sentence, SemanticJudge& judge);

// Weighted maximum over the score matrix and the H+/H- decision
// (H+ iff best_score > threshold) for given features and aspects.
HypothesisDecision DecideHypothesis(const FeatureSet& features,
                                    const MetaphorAspects& aspects,
                                    std::string_view sentence,
                                    const HypothesisParams& params,
                                    SemanticJudge& judge);

// Full procedure: extract the word's features, expand the sentence's
// aspects, then decide.
HypothesisDecision HypothesisTest(std::string_view sentence,
                                  std::string_view word,
                                  const HypothesisParams& params,
                                  SemanticJudge& judge);

}  // namespace metarena::reasoner

#endif  // METARENA_REASONER_HYPOTHESIS_H_
