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

#ifndef METARENA_REASONER_SEMANTIC_JUDGE_H_
#define METARENA_REASONER_SEMANTIC_JUDGE_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "metarena/reasoner/types.h"

namespace metarena::llm {
class Backend;
class PromptLibrary;
}  // namespace metarena::llm

namespace metarena::reasoner {

// Source of the three primitive judgements hypothesis testing needs.
class SemanticJudge {
 public:
  virtual ~SemanticJudge() = default;

  // Features of a word in the order the judge identified them.
  virtual std::vector<Feature> Features(std::string_view word) = 0;
  // Metaphorical aspects of a sentence; empty when it reads literally.
  virtual std::vector<Aspect> Aspects(std::string_view sentence) = 0;
  // Coherence of (feature, aspect) under the sentence. Implementations
  // should return a member of kScoreLevels; callers snap regardless.
  virtual double Match(const Feature& feature, const Aspect& aspect,
                       std::string_view sentence) = 0;
};

// Immutable fixture judge. Lookups are case-insensitive on words and
// sentences; unknown (feature, aspect, sentence) triples score 0.
//
// JSON layout:
//   {"features": {"kite": [{"dimension": "behavior", "description": "..."}]},
//    "aspects":  {"homesick bird": [{"category": "ontological",
//                                    "description": "..."}]},
//    "scores":   [{"feature": "...", "aspect": "...",
//                  "sentence": "homesick bird", "score": 1.0}]}
class TableJudge : public SemanticJudge {
 public:
  TableJudge() = default;
  static TableJudge FromJson(const nlohmann::json& doc);
  static TableJudge Load(const std::filesystem::path& path);

  void AddFeatures(std::string_view word, std::vector<Feature> features);
  void AddAspects(std::string_view sentence, std::vector<Aspect> aspects);
  // Throws InvalidArgument when score is not one of kScoreLevels.
  void AddScore(std::string_view feature, std::string_view aspect,
                std::string_view sentence, double score);

  std::vector<Feature> Features(std::string_view word) override;
  std::vector<Aspect> Aspects(std::string_view sentence) override;
  double Match(const Feature& feature, const Aspect& aspect,
               std::string_view sentence) override;

  nlohmann::json ToJson() const;

 private:
  std::map<std::string, std::vector<Feature>> features_;
  std::map<std::string, std::vector<Aspect>> aspects_;
  std::map<std::tuple<std::string, std::string, std::string>, double> scores_;
};

// Judge backed by a completion backend. Each primitive is one Analysis
// request; output that fails to parse is retried, then treated as "nothing
// found" (features/aspects) or score 0 (match).
class LlmJudge : public SemanticJudge {
 public:
  static constexpr int kMaxAttempts = 3;

  LlmJudge(llm::Backend& backend, const llm::PromptLibrary& prompts);

  std::vector<Feature> Features(std::string_view word) override;
  std::vector<Aspect> Aspects(std::string_view sentence) override;
  double Match(const Feature& feature, const Aspect& aspect,
               std::string_view sentence) override;

 private:
  llm::Backend& backend_;
  const llm::PromptLibrary& prompts_;
};

// Parsers for the LLM judge's structured output, exposed for tests.
std::vector<Feature> ParseFeatureLines(std::string_view response);
std::vector<Aspect> ParseAspectLines(std::string_view response);
double ParseScore(std::string_view response);

}  // namespace metarena::reasoner

#endif  // METARENA_REASONER_SEMANTIC_JUDGE_H_
