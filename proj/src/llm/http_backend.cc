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

#include "metarena/llm/http_backend.h"

#include <cstdlib>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"
#include "json.hpp"
#include "metarena/common/error.h"

namespace metarena::llm {

HttpBackend::HttpBackend(HttpBackendConfig config)
    : config_(std::move(config)) {
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw BackendError("environment variable " + config_.api_key_env +
                       " is not set");
  }
  api_key_ = key;
  if (config_.max_concurrent_requests < 1) config_.max_concurrent_requests = 1;
}

std::string HttpBackend::RequestBody(const CompletionRequest& request) const {
  nlohmann::json messages = nlohmann::json::array();
  if (!request.system_text.empty()) {
    messages.push_back({{"role", "system"}, {"content", request.system_text}});
  }
  messages.push_back({{"role", "user"}, {"content", request.UserPrompt()}});
  return nlohmann::json{{"model", config_.model},
                        {"messages", messages},
                        {"temperature", request.temperature.value_or(0.6)},
                        {"max_tokens", request.max_output}}
      .dump();
}

std::string HttpBackend::ParseResponseBody(const std::string& body) {
  try {
    const nlohmann::json j = nlohmann::json::parse(body);
    const nlohmann::json& content =
        j.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw BackendError("response content is null");
    return content.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(std::string("malformed provider response: ") +
                       e.what());
  }
}

std::string HttpBackend::PostOnce(const std::string& body) {
  httplib::Client client(config_.endpoint);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  client.set_bearer_token_auth(api_key_);
  auto result = client.Post(config_.path, body, "application/json");
  if (!result) {
    throw BackendError("request failed: " + httplib::to_string(result.error()));
  }
  if (result->status != 200) {
    throw BackendError("provider returned HTTP " +
                       std::to_string(result->status));
  }
  return ParseResponseBody(result->body);
}

std::string HttpBackend::Complete(const CompletionRequest& request) {
  {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return in_flight_ < config_.max_concurrent_requests; });
    ++in_flight_;
  }
  struct Release {
    HttpBackend* self;
    ~Release() {
      {
        std::lock_guard lock(self->mu_);
        --self->in_flight_;
      }
      self->cv_.notify_one();
    }
  } release{this};

  const std::string body = RequestBody(request);
  auto backoff = config_.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      return PostOnce(body);
    } catch (const BackendError&) {
      if (attempt >= config_.max_attempts) throw;
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
}

}  // namespace metarena::llm
