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

#ifndef METARENA_LLM_CASSETTE_H_
#define METARENA_LLM_CASSETTE_H_

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "metarena/llm/backend.h"

namespace metarena::llm {

struct CassetteEntry {
  std::string fingerprint;
  nlohmann::json request_digest_fields;
  std::string response;
};

// Recorded request/response pairs keyed by request fingerprint. Stored as
// JSON lines of {fingerprint, request_digest_fields, response}. Thread-safe.
class Cassette {
 public:
  Cassette() = default;
  Cassette(Cassette&& other) noexcept;
  Cassette& operator=(Cassette&& other) noexcept;
  // Reads an existing file; a missing file yields an empty cassette.
  static Cassette Load(const std::filesystem::path& path);
  static Cassette FromJsonLines(std::string_view text);

  std::optional<std::string> Find(const std::string& fingerprint) const;
  // Returns false (and keeps the first response) on a known fingerprint.
  bool Add(CassetteEntry entry);
  std::size_t size() const;

  std::string ToJsonLines() const;
  void Save(const std::filesystem::path& path) const;

 private:
  mutable std::mutex mu_;
  std::vector<CassetteEntry> entries_;
  std::map<std::string, std::size_t> index_;
};

enum class CassetteMode { kRecord, kReplay };

// Record: serve known fingerprints from the cassette, otherwise call the
// inner backend and append. Replay: serve from the cassette only; a miss
// throws ReplayMiss naming the fingerprint.
class CassetteBackend : public Backend {
 public:
  // A non-empty scope keys entries by (scope, n-th occurrence, request), so
  // repeated identical requests inside one episode replay in order.
  // Replay mode.
  explicit CassetteBackend(Cassette& cassette, std::string scope = "");
  // Record mode.
  CassetteBackend(Cassette& cassette, Backend& inner, std::string scope = "");

  std::string Complete(const CompletionRequest& request) override;
  CassetteMode mode() const { return mode_; }

 private:
  Cassette& cassette_;
  Backend* inner_ = nullptr;
  CassetteMode mode_;
  std::string scope_;
  std::mutex mu_;
  std::map<std::string, int> occurrences_;
};

}  // namespace metarena::llm

#endif  // METARENA_LLM_CASSETTE_H_
