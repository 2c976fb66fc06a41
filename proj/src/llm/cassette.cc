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

#include "metarena/llm/cassette.h"

#include <fstream>
#include <sstream>

#include "metarena/common/error.h"
#include "metarena/common/text.h"

namespace metarena::llm {

Cassette::Cassette(Cassette&& other) noexcept {
  std::lock_guard lock(other.mu_);
  entries_ = std::move(other.entries_);
  index_ = std::move(other.index_);
}

Cassette& Cassette::operator=(Cassette&& other) noexcept {
  if (this != &other) {
    std::scoped_lock lock(mu_, other.mu_);
    entries_ = std::move(other.entries_);
    index_ = std::move(other.index_);
  }
  return *this;
}

Cassette Cassette::Load(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return Cassette();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read cassette " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return FromJsonLines(ss.str());
}

Cassette Cassette::FromJsonLines(std::string_view text) {
  Cassette c;
  int line_no = 0;
  for (const std::string& line : text::Split(text, '\n')) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      CassetteEntry e{j.at("fingerprint").get<std::string>(),
                      j.value("request_digest_fields", nlohmann::json::object()),
                      j.at("response").get<std::string>()};
      if (!c.Add(std::move(e))) {
        throw ParseError("duplicate fingerprint");
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("cassette line " + std::to_string(line_no) + ": " +
                       e.what());
    } catch (const ParseError& e) {
      throw ParseError("cassette line " + std::to_string(line_no) + ": " +
                       e.what());
    }
  }
  return c;
}

std::optional<std::string> Cassette::Find(
    const std::string& fingerprint) const {
  std::lock_guard lock(mu_);
  auto it = index_.find(fingerprint);
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].response;
}

bool Cassette::Add(CassetteEntry entry) {
  std::lock_guard lock(mu_);
  if (index_.contains(entry.fingerprint)) return false;
  index_.emplace(entry.fingerprint, entries_.size());
  entries_.push_back(std::move(entry));
  return true;
}

std::size_t Cassette::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::string Cassette::ToJsonLines() const {
  std::lock_guard lock(mu_);
  std::string out;
  // Fingerprint order keeps the file stable however requests interleaved.
  for (const auto& [fp, i] : index_) {
    const CassetteEntry& e = entries_[i];
    out += nlohmann::json{{"fingerprint", e.fingerprint},
                          {"request_digest_fields", e.request_digest_fields},
                          {"response", e.response}}
               .dump();
    out += '\n';
  }
  return out;
}

void Cassette::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write cassette " + path.string());
  out << ToJsonLines();
}

CassetteBackend::CassetteBackend(Cassette& cassette, std::string scope)
    : cassette_(cassette), mode_(CassetteMode::kReplay), scope_(std::move(scope)) {}

CassetteBackend::CassetteBackend(Cassette& cassette, Backend& inner,
                                 std::string scope)
    : cassette_(cassette),
      inner_(&inner),
      mode_(CassetteMode::kRecord),
      scope_(std::move(scope)) {}

std::string CassetteBackend::Complete(const CompletionRequest& request) {
  std::string fp = Fingerprint(request);
  if (!scope_.empty()) {
    std::lock_guard lock(mu_);
    const int n = occurrences_[fp]++;
    fp = scope_ + "/" + std::to_string(n) + "/" + fp;
  }
  if (std::optional<std::string> hit = cassette_.Find(fp)) return *hit;
  if (mode_ == CassetteMode::kReplay) throw ReplayMiss(fp);
  std::string response = inner_->Complete(request);
  if (!cassette_.Add({fp, request.DigestFields(), response})) {
    // Another thread recorded the same request first; serve its answer so
    // this run matches what a replay will produce.
    return *cassette_.Find(fp);
  }
  return response;
}

}  // namespace metarena::llm
