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

#ifndef METARENA_LLM_HTTP_BACKEND_H_
#define METARENA_LLM_HTTP_BACKEND_H_

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <string>

#include "metarena/llm/backend.h"

namespace metarena::llm {

struct HttpBackendConfig {
  // Base URL of an OpenAI-compatible API, e.g. "https://api.openai.com".
  std::string endpoint = "https://api.openai.com";
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-4o";
  // Name of the environment variable holding the API key.
  std::string api_key_env = "OPENAI_API_KEY";
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  int max_concurrent_requests = 4;
  std::chrono::seconds timeout{120};
};

// Live chat-completions client. Credentials are read from the environment
// at construction; a missing key throws BackendError.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpBackendConfig config);
  std::string Complete(const CompletionRequest& request) override;

  // Request body sent for a resolved request; exposed for tests.
  std::string RequestBody(const CompletionRequest& request) const;
  // Extracts choices[0].message.content; throws BackendError otherwise.
  static std::string ParseResponseBody(const std::string& body);

 private:
  std::string PostOnce(const std::string& body);

  HttpBackendConfig config_;
  std::string api_key_;
  std::mutex mu_;
  std::condition_variable cv_;
  int in_flight_ = 0;
};

}  // namespace metarena::llm

#endif  // METARENA_LLM_HTTP_BACKEND_H_
