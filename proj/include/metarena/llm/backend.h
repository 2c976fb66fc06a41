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

#ifndef METARENA_LLM_BACKEND_H_
#define METARENA_LLM_BACKEND_H_

#include <atomic>
#include <string>

#include "metarena/llm/request.h"

namespace metarena::llm {

// A text completion provider. Complete() receives a validated request whose
// temperature is already resolved.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string Complete(const CompletionRequest& request) = 0;
};

// Gateway entry point: resolves the temperature from the policy, validates,
// calls the backend, and rejects empty responses with BackendError.
std::string Complete(Backend& backend, CompletionRequest request,
                     const TemperaturePolicy& policy = {});

// Counts calls passing through to another backend.
class CountingBackend : public Backend {
 public:
  explicit CountingBackend(Backend& inner) : inner_(inner) {}
  std::string Complete(const CompletionRequest& request) override;
  int calls() const { return calls_.load(); }

 private:
  Backend& inner_;
  std::atomic<int> calls_{0};
};

}  // namespace metarena::llm

#endif  // METARENA_LLM_BACKEND_H_
