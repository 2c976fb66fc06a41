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

#include "metarena/llm/scripted_backend.h"

#include <fstream>

#include "metarena/common/error.h"

namespace metarena::llm {
namespace {

std::vector<std::string> StringOrList(const nlohmann::json& j) {
  if (j.is_string()) return {j.get<std::string>()};
  return j.get<std::vector<std::string>>();
}

MatchField ParseField(const std::string& s) {
  if (s == "task") return MatchField::kTask;
  if (s == "information") return MatchField::kInformation;
  if (s == "any") return MatchField::kAny;
  throw InvalidArgument("unknown script match field: " + s);
}

bool Matches(const PatternEntry& p, const CompletionRequest& r) {
  for (const std::string& needle : p.all_of) {
    bool found = false;
    switch (p.field) {
      case MatchField::kTask:
        found = r.task_text.find(needle) != std::string::npos;
        break;
      case MatchField::kInformation:
        found = r.information_text.find(needle) != std::string::npos;
        break;
      case MatchField::kAny:
        found = r.task_text.find(needle) != std::string::npos ||
                r.information_text.find(needle) != std::string::npos ||
                r.background_text.find(needle) != std::string::npos ||
                r.system_text.find(needle) != std::string::npos;
        break;
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

Script Script::FromJson(const nlohmann::json& doc) {
  Script s;
  if (doc.contains("ordered")) {
    s.ordered = doc.at("ordered").get<std::vector<std::string>>();
  }
  if (doc.contains("patterns")) {
    for (const nlohmann::json& p : doc.at("patterns")) {
      PatternEntry e;
      e.all_of = StringOrList(p.at("match"));
      e.field = ParseField(p.value("field", "task"));
      if (p.contains("responses")) {
        e.responses = StringOrList(p.at("responses"));
      } else {
        e.responses = StringOrList(p.at("response"));
      }
      if (e.responses.empty()) {
        throw InvalidArgument("script pattern without responses");
      }
      s.patterns.push_back(std::move(e));
    }
  }
  return s;
}

Script Script::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read script " + path.string());
  try {
    return FromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("script " + path.string() + ": " + e.what());
  }
}

ScriptedBackend::ScriptedBackend(Script script) : script_(std::move(script)) {
  if (script_.empty()) throw InvalidArgument("scripted backend needs a script");
  pattern_cursor_.assign(script_.patterns.size(), 0);
}

std::string ScriptedBackend::Complete(const CompletionRequest& request) {
  std::lock_guard lock(mu_);
  ++calls_;
  for (std::size_t i = 0; i < script_.patterns.size(); ++i) {
    const PatternEntry& p = script_.patterns[i];
    if (!Matches(p, request)) continue;
    std::size_t& cursor = pattern_cursor_[i];
    const std::string& out = p.responses[cursor];
    if (cursor + 1 < p.responses.size()) ++cursor;
    return out;
  }
  if (next_ordered_ >= script_.ordered.size()) {
    throw ScriptExhausted("scripted backend exhausted after " +
                          std::to_string(script_.ordered.size()) +
                          " ordered responses");
  }
  return script_.ordered[next_ordered_++];
}

int ScriptedBackend::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

}  // namespace metarena::llm
