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

#include "metarena/llm/backend.h"

#include "metarena/common/error.h"
#include "metarena/common/text.h"

namespace metarena::llm {

std::string Complete(Backend& backend, CompletionRequest request,
                     const TemperaturePolicy& policy) {
  request.Validate();
  request.temperature = request.EffectiveTemperature(policy);
  std::string response = backend.Complete(request);
  if (text::Trim(response).empty()) {
    throw BackendError("backend returned an empty response");
  }
  return response;
}

std::string CountingBackend::Complete(const CompletionRequest& request) {
  ++calls_;
  return inner_.Complete(request);
}

}  // namespace metarena::llm
