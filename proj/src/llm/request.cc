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

#include "metarena/llm/request.h"

#include <openssl/evp.h>

#include <cstdio>

#include "metarena/common/error.h"
#include "metarena/common/text.h"

namespace metarena::llm {

std::string_view PurposeName(Purpose p) {
  return p == Purpose::kAnalysis ? "analysis" : "generation";
}

void CompletionRequest::Validate() const {
  if (temperature && (*temperature < 0.0 || *temperature > 2.0)) {
    throw InvalidArgument("temperature must lie in [0, 2]");
  }
  if (max_output <= 0) throw InvalidArgument("max_output must be positive");
}

double CompletionRequest::EffectiveTemperature(
    const TemperaturePolicy& policy) const {
  if (temperature) return *temperature;
  return purpose == Purpose::kAnalysis ? policy.analysis : policy.generation;
}

std::string CompletionRequest::UserPrompt() const {
  std::string out;
  auto section = [&](std::string_view title, const std::string& body) {
    if (text::Trim(body).empty()) return;
    if (!out.empty()) out += "\n\n";
    out += "## ";
    out += title;
    out += "\n";
    out += text::Trim(body);
  };
  section("Background", background_text);
  section("Task", task_text);
  section("Information", information_text);
  return out;
}

std::string CompletionRequest::Canonical() const {
  char temp[32];
  std::snprintf(temp, sizeof temp, "%.4f", temperature.value_or(-1.0));
  std::string out;
  out += "system:" + text::NormalizeWhitespace(system_text) + "\n";
  out += "background:" + text::NormalizeWhitespace(background_text) + "\n";
  out += "task:" + text::NormalizeWhitespace(task_text) + "\n";
  out += "information:" + text::NormalizeWhitespace(information_text) + "\n";
  out += "temperature:" + std::string(temp) + "\n";
  out += "max_output:" + std::to_string(max_output) + "\n";
  out += "purpose:" + std::string(PurposeName(purpose));
  return out;
}

nlohmann::json CompletionRequest::DigestFields() const {
  auto head = [](const std::string& s) {
    std::string n = text::NormalizeWhitespace(s);
    return n.size() > 160 ? n.substr(0, 160) + "..." : n;
  };
  return nlohmann::json{{"purpose", PurposeName(purpose)},
                        {"temperature", temperature.value_or(-1.0)},
                        {"max_output", max_output},
                        {"task", head(task_text)},
                        {"information", head(information_text)}};
}

std::string Fingerprint(const CompletionRequest& request) {
  if (!request.temperature) {
    throw InvalidArgument("fingerprint requires a resolved temperature");
  }
  const std::string canonical = request.Canonical();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(canonical.data(), canonical.size(), digest, &len,
                 EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xf]);
  }
  return hex;
}

}  // namespace metarena::llm
