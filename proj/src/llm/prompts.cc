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

#include "metarena/llm/prompts.h"

#include <fstream>
#include <sstream>

#include "metarena/common/error.h"
#include "metarena/common/text.h"

namespace metarena::llm {
namespace internal {
const std::vector<std::pair<std::string_view, std::string_view>>&
EmbeddedAssets();
}  // namespace internal

PromptTemplate PromptTemplate::Parse(std::string_view text) {
  PromptTemplate t;
  std::string* current = nullptr;
  for (const std::string& line : text::Split(text, '\n')) {
    const std::string_view trimmed = text::Trim(line);
    if (!trimmed.empty() && trimmed.front() == '@') {
      if (trimmed == "@system") {
        current = &t.system;
      } else if (trimmed == "@background") {
        current = &t.background;
      } else if (trimmed == "@task") {
        current = &t.task;
      } else if (trimmed == "@information") {
        current = &t.information;
      } else {
        throw InvalidArgument("unknown template section " +
                              std::string(trimmed));
      }
      continue;
    }
    if (current == nullptr) {
      if (trimmed.empty()) continue;
      throw InvalidArgument("template text before the first section marker");
    }
    current->append(line);
    current->push_back('\n');
  }
  for (std::string* s : {&t.system, &t.background, &t.task, &t.information}) {
    *s = std::string(text::Trim(*s));
  }
  return t;
}

PromptLibrary::PromptLibrary() {
  for (const auto& [name, body] : internal::EmbeddedAssets()) {
    assets_.emplace(std::string(name), std::string(body));
  }
}

PromptLibrary::PromptLibrary(const std::filesystem::path& override_dir)
    : PromptLibrary() {
  if (override_dir.empty()) return;
  if (!std::filesystem::is_directory(override_dir)) {
    throw InvalidArgument("prompt directory not found: " +
                          override_dir.string());
  }
  for (const auto& entry : std::filesystem::directory_iterator(override_dir)) {
    if (entry.path().extension() != ".txt") continue;
    std::ifstream in(entry.path());
    std::stringstream ss;
    ss << in.rdbuf();
    assets_[entry.path().stem().string()] = ss.str();
  }
}

bool PromptLibrary::Has(std::string_view name) const {
  return assets_.find(name) != assets_.end();
}

const std::string& PromptLibrary::Asset(std::string_view name) const {
  auto it = assets_.find(name);
  if (it == assets_.end()) {
    throw InvalidArgument("unknown prompt asset: " + std::string(name));
  }
  return it->second;
}

CompletionRequest PromptLibrary::Build(std::string_view name,
                                       const Bindings& bindings,
                                       Purpose purpose,
                                       std::optional<double> temperature) const {
  const PromptTemplate t = PromptTemplate::Parse(Asset(name));
  Bindings all = bindings;
  for (const char* shared : {"metaphor_theory", "undercover_rules",
                             "taboo_rules", "system_player"}) {
    if (Has(shared)) {
      all.emplace_back(shared, std::string(text::Trim(Asset(shared))));
    }
  }
  CompletionRequest r;
  r.system_text = text::RenderTemplate(t.system, all);
  r.background_text = text::RenderTemplate(t.background, all);
  r.task_text = text::RenderTemplate(t.task, all);
  r.information_text = text::RenderTemplate(t.information, all);
  r.purpose = purpose;
  r.temperature = temperature;
  return r;
}

std::vector<std::string> PromptLibrary::Names() const {
  std::vector<std::string> out;
  for (const auto& [name, body] : assets_) out.push_back(name);
  return out;
}

std::optional<std::string> ExtractTag(std::string_view response,
                                      std::string_view name) {
  const std::string lower = text::ToLower(response);
  const std::string open = "<" + text::ToLower(name) + ">";
  const std::string close = "</" + text::ToLower(name) + ">";
  const std::size_t a = lower.find(open);
  if (a == std::string::npos) return std::nullopt;
  const std::size_t start = a + open.size();
  const std::size_t b = lower.find(close, start);
  if (b == std::string::npos) return std::nullopt;
  return std::string(text::Trim(response.substr(start, b - start)));
}

}  // namespace metarena::llm
