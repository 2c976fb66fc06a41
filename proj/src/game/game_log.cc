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

#include "metarena/game/game_log.h"

#include <fstream>
#include <sstream>

#include "metarena/common/error.h"
#include "metarena/common/text.h"

namespace metarena::game {

nlohmann::json LogEvent::ToJson() const {
  return nlohmann::json{{"schema_version", kLogSchemaVersion},
                        {"event_kind", event_kind},
                        {"round", round},
                        {"actor", actor},
                        {"payload", payload},
                        {"timestamp", timestamp}};
}

LogEvent LogEvent::FromJson(const nlohmann::json& j) {
  const int version = j.value("schema_version", 0);
  if (version != kLogSchemaVersion) {
    throw ParseError("unsupported log schema_version " +
                     std::to_string(version));
  }
  LogEvent e;
  e.event_kind = j.at("event_kind").get<std::string>();
  e.round = j.at("round").get<int>();
  e.actor = j.at("actor").get<std::string>();
  e.payload = j.at("payload");
  e.timestamp = j.at("timestamp").get<std::int64_t>();
  return e;
}

const LogEvent& EventLog::Append(std::string event_kind, int round,
                                 std::string actor, nlohmann::json payload) {
  LogEvent e{.event_kind = std::move(event_kind),
             .round = round,
             .actor = std::move(actor),
             .payload = std::move(payload),
             .timestamp = static_cast<std::int64_t>(events_.size()) + 1};
  events_.push_back(std::move(e));
  return events_.back();
}

std::string EventLog::ToJsonLines() const {
  std::string out;
  for (const LogEvent& e : events_) {
    out += e.ToJson().dump();
    out += '\n';
  }
  return out;
}

EventLog EventLog::FromJsonLines(std::string_view text) {
  EventLog log;
  int line_no = 0;
  for (const std::string& line : text::Split(text, '\n')) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    try {
      log.events_.push_back(LogEvent::FromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("log line " + std::to_string(line_no) + ": " +
                       e.what());
    }
  }
  return log;
}

void EventLog::WriteFile(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write log file " + path.string());
  out << ToJsonLines();
}

EventLog EventLog::ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read log file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return FromJsonLines(ss.str());
}

}  // namespace metarena::game
