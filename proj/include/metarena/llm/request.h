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

#ifndef METARENA_LLM_REQUEST_H_
#define METARENA_LLM_REQUEST_H_

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace metarena::llm {

enum class Purpose { kAnalysis, kGeneration };

std::string_view PurposeName(Purpose p);

// Default sampling temperatures. Analysis sits inside the 0.5-0.7 band;
// generation is raised for more varied wording.
struct TemperaturePolicy {
  double analysis = 0.6;
  double generation = 0.9;
};

struct CompletionRequest {
  std::string system_text;
  std::string background_text;
  std::string task_text;
  std::string information_text;
  // Unset means "use the policy default for the purpose".
  std::optional<double> temperature;
  int max_output = 512;
  Purpose purpose = Purpose::kAnalysis;

  // temperature (when set) in [0, 2]; max_output positive.
  void Validate() const;
  double EffectiveTemperature(const TemperaturePolicy& policy) const;

  // The user message: Background, Task and Information sections in order.
  std::string UserPrompt() const;

  // Whitespace-normalized, labelled concatenation of every field. Two
  // requests with the same canonical form are the same request.
  std::string Canonical() const;

  nlohmann::json DigestFields() const;
};

// SHA-256 (hex) of Canonical(). Requires temperature to be resolved.
std::string Fingerprint(const CompletionRequest& request);

}  // namespace metarena::llm

#endif  // METARENA_LLM_REQUEST_H_
