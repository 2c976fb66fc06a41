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

#ifndef METARENA_LLM_PROMPTS_H_
#define METARENA_LLM_PROMPTS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metarena/llm/request.h"

namespace metarena::llm {

using Bindings = std::vector<std::pair<std::string, std::string>>;

// A prompt template: a plain-text asset split into @system, @background,
// @task and @information sections, with {{name}} placeholders.
struct PromptTemplate {
  std::string system;
  std::string background;
  std::string task;
  std::string information;

  static PromptTemplate Parse(std::string_view text);
};

// Prompt templates and knowledge snippets. Defaults are compiled in from
// data/prompts; an override directory replaces individual files by name.
class PromptLibrary {
 public:
  // Built-in assets only.
  PromptLibrary();
  // Built-in assets, with any "<name>.txt" in dir taking precedence.
  explicit PromptLibrary(const std::filesystem::path& override_dir);

  bool Has(std::string_view name) const;
  // Raw asset text. Throws InvalidArgument for an unknown name.
  const std::string& Asset(std::string_view name) const;

  // Renders the named template into a request. The library's own assets
  // are available as bindings too ({{metaphor_theory}}, {{undercover_rules}}).
  CompletionRequest Build(std::string_view name, const Bindings& bindings,
                          Purpose purpose,
                          std::optional<double> temperature = {}) const;

  std::vector<std::string> Names() const;

 private:
  std::map<std::string, std::string, std::less<>> assets_;
};

// Returns the body between <name> and </name>, trimmed. nullopt when the
// tag pair is absent.
std::optional<std::string> ExtractTag(std::string_view response,
                                      std::string_view name);

}  // namespace metarena::llm

#endif  // METARENA_LLM_PROMPTS_H_
