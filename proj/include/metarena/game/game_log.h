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

#ifndef METARENA_GAME_GAME_LOG_H_
#define METARENA_GAME_GAME_LOG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace metarena::game {

inline constexpr int kLogSchemaVersion = 1;

// One JSON-lines record of an episode log.
struct LogEvent {
  std::string event_kind;
  int round = 0;
  std::string actor;
  nlohmann::json payload;
  // Logical clock: position of the event in the episode, starting at 1.
  // Wall-clock time would make logs differ byte-for-byte between replays.
  std::int64_t timestamp = 0;

  nlohmann::json ToJson() const;
  static LogEvent FromJson(const nlohmann::json& j);
};

// Append-only episode log. The final event of a finished episode has kind
// "outcome".
class EventLog {
 public:
  const LogEvent& Append(std::string event_kind, int round, std::string actor,
                         nlohmann::json payload);

  const std::vector<LogEvent>& events() const { return events_; }
  bool empty() const { return events_.empty(); }
  const LogEvent& back() const { return events_.back(); }

  std::string ToJsonLines() const;
  static EventLog FromJsonLines(std::string_view text);

  void WriteFile(const std::filesystem::path& path) const;
  static EventLog ReadFile(const std::filesystem::path& path);

 private:
  std::vector<LogEvent> events_;
};

}  // namespace metarena::game

#endif  // METARENA_GAME_GAME_LOG_H_
