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

#ifndef METARENA_LLM_SCRIPTED_BACKEND_H_
#define METARENA_LLM_SCRIPTED_BACKEND_H_

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "metarena/llm/backend.h"

namespace metarena::llm {

// Where a pattern looks for its substrings.
enum class MatchField { kTask, kInformation, kAny };

struct PatternEntry {
  // Every substring must occur (case-sensitive) in the selected field.
  std::vector<std::string> all_of;
  MatchField field = MatchField::kTask;
  // Served in order on successive matches; the last one then repeats.
  std::vector<std::string> responses;
};

// JSON layout:
//   {"ordered": ["r1", "r2"],
//    "patterns": [{"match": ["vote"], "field": "task",
//                  "responses": ["<vote>P2</vote>"]}]}
// "match" may also be a single string and "response" a single string.
struct Script {
  std::vector<std::string> ordered;
  std::vector<PatternEntry> patterns;

  bool empty() const { return ordered.empty() && patterns.empty(); }
  static Script FromJson(const nlohmann::json& doc);
  static Script Load(const std::filesystem::path& path);
};

// Deterministic test backend that never touches the network. Patterns are
// tried first, in declaration order; otherwise the next ordered response is
// returned. Running out of ordered responses throws ScriptExhausted.
class ScriptedBackend : public Backend {
 public:
  // Throws InvalidArgument on an empty script.
  explicit ScriptedBackend(Script script);

  std::string Complete(const CompletionRequest& request) override;
  int calls() const;

 private:
  mutable std::mutex mu_;
  Script script_;
  std::size_t next_ordered_ = 0;
  std::vector<std::size_t> pattern_cursor_;
  int calls_ = 0;
};

}  // namespace metarena::llm

#endif  // METARENA_LLM_SCRIPTED_BACKEND_H_
