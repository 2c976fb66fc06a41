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

#include "metarena/reasoner/hypothesis.h"

#include <cmath>
#include <set>

#include "metarena/common/error.h"
#include "metarena/common/text.h"

namespace metarena::reasoner {

void HypothesisParams::Validate() const {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InvalidArgument("threshold must lie in [0, 1]");
  }
  for (double decay : {feature_decay, aspect_decay}) {
    if (!(decay > 0.0 && decay <= 1.0)) {
      throw InvalidArgument("position decay must lie in (0, 1]");
    }
  }
}

std::string_view VerdictName(Verdict v) {
  return v == Verdict::kHPlus ? "H+" : "H-";
}

double PositionWeight(double decay, int position) {
  return std::pow(decay, position);
}

FeatureSet ExtractFeatures(std::string_view word, SemanticJudge& judge) {
  if (text::Trim(word).empty()) throw InvalidArgument("empty word");
  FeatureSet out;
  std::set<FeatureDimension> seen;
  for (Feature& f : judge.Features(word)) {
    if (text::Trim(f.description).empty()) continue;
    if (!seen.insert(f.dimension).second) continue;
    out.push_back(std::move(f));
  }
  if (out.empty()) {
    throw Error("judge returned no usable features for '" +
                std::string(word) + "'");
  }
  return out;
}

MetaphorAspects ExpandMetaphor(std::string_view sentence,
                               SemanticJudge& judge) {
  if (text::Trim(sentence).empty()) throw InvalidArgument("empty sentence");
  MetaphorAspects out;
  std::set<MetaphorCategory> seen;
  for (Aspect& a : judge.Aspects(sentence)) {
    if (text::Trim(a.description).empty()) continue;
    if (!seen.insert(a.category).second) continue;
    out.push_back(std::move(a));
  }
  return out;
}

double MatchScore(const Feature& feature, const Aspect& aspect,
                  std::string_view sentence, SemanticJudge& judge) {
  if (text::Trim(feature.description).empty() ||
      text::Trim(aspect.description).empty()) {
    throw InvalidArgument("feature and aspect descriptions must be non-empty");
  }
  return SnapScore(judge.Match(feature, aspect, sentence));
}

HypothesisDecision DecideHypothesis(const FeatureSet& features,
                                    const MetaphorAspects& aspects,
                                    std::string_view sentence,
                                    const HypothesisParams& params,
                                    SemanticJudge& judge) {
  params.Validate();
  HypothesisDecision d;
  d.features = features;
  d.aspects = aspects;
  d.score_matrix.assign(features.size(),
                        std::vector<double>(aspects.size(), 0.0));
  for (std::size_t i = 0; i < features.size(); ++i) {
    const double wf = PositionWeight(params.feature_decay, static_cast<int>(i));
    for (std::size_t j = 0; j < aspects.size(); ++j) {
      const double wm =
          PositionWeight(params.aspect_decay, static_cast<int>(j));
      const double s = MatchScore(features[i], aspects[j], sentence, judge);
      const double weighted = wf * wm * s;
      d.score_matrix[i][j] = weighted;
      // Strict comparison keeps the earliest pair on ties.
      if (weighted > d.best_score) {
        d.best_score = weighted;
        d.best_feature = static_cast<int>(i);
        d.best_aspect = static_cast<int>(j);
      }
    }
  }
  d.verdict =
      d.best_score > params.threshold ? Verdict::kHPlus : Verdict::kHMinus;
  return d;
}

HypothesisDecision HypothesisTest(std::string_view sentence,
                                  std::string_view word,
                                  const HypothesisParams& params,
                                  SemanticJudge& judge) {
  params.Validate();
  if (text::Trim(sentence).empty()) throw InvalidArgument("empty sentence");
  if (text::Trim(word).empty()) throw InvalidArgument("empty word");
  const FeatureSet features = ExtractFeatures(word, judge);
  const MetaphorAspects aspects = ExpandMetaphor(sentence, judge);
  return DecideHypothesis(features, aspects, sentence, params, judge);
}

}  // namespace metarena::reasoner
