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

#include "metarena/reasoner/semantic_judge.h"

#include <charconv>
#include <fstream>

#include "metarena/common/error.h"
#include "metarena/common/text.h"
#include "metarena/llm/backend.h"
#include "metarena/llm/prompts.h"

namespace metarena::reasoner {
namespace {

std::string Key(std::string_view s) {
  return text::ToLower(text::NormalizeWhitespace(s));
}

// Splits "head | tail" or "head: tail".
std::optional<std::pair<std::string, std::string>> SplitLine(
    std::string_view line) {
  line = text::Trim(line);
  while (!line.empty() && (line.front() == '-' || line.front() == '*')) {
    line.remove_prefix(1);
  }
  std::size_t cut = line.find('|');
  if (cut == std::string_view::npos) cut = line.find(':');
  if (cut == std::string_view::npos) return std::nullopt;
  std::string head(text::Trim(line.substr(0, cut)));
  std::string tail(text::Trim(line.substr(cut + 1)));
  if (head.empty() || tail.empty()) return std::nullopt;
  return std::make_pair(std::move(head), std::move(tail));
}

}  // namespace

TableJudge TableJudge::FromJson(const nlohmann::json& doc) {
  TableJudge t;
  try {
    if (doc.contains("features")) {
      for (const auto& [word, list] : doc.at("features").items()) {
        std::vector<Feature> fs;
        for (const nlohmann::json& f : list) {
          fs.push_back({ParseDimension(f.at("dimension").get<std::string>()),
                        f.at("description").get<std::string>()});
        }
        t.AddFeatures(word, std::move(fs));
      }
    }
    if (doc.contains("aspects")) {
      for (const auto& [sentence, list] : doc.at("aspects").items()) {
        std::vector<Aspect> as;
        for (const nlohmann::json& a : list) {
          as.push_back({ParseCategory(a.at("category").get<std::string>()),
                        a.at("description").get<std::string>()});
        }
        t.AddAspects(sentence, std::move(as));
      }
    }
    if (doc.contains("scores")) {
      for (const nlohmann::json& s : doc.at("scores")) {
        t.AddScore(s.at("feature").get<std::string>(),
                   s.at("aspect").get<std::string>(),
                   s.at("sentence").get<std::string>(),
                   s.at("score").get<double>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("judge table: ") + e.what());
  }
  return t;
}

TableJudge TableJudge::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read judge table " + path.string());
  try {
    return FromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("judge table " + path.string() + ": " + e.what());
  }
}

void TableJudge::AddFeatures(std::string_view word,
                             std::vector<Feature> features) {
  features_[Key(word)] = std::move(features);
}

void TableJudge::AddAspects(std::string_view sentence,
                            std::vector<Aspect> aspects) {
  aspects_[Key(sentence)] = std::move(aspects);
}

void TableJudge::AddScore(std::string_view feature, std::string_view aspect,
                          std::string_view sentence, double score) {
  if (!IsScoreLevel(score)) {
    throw InvalidArgument("judge table score " + std::to_string(score) +
                          " is not an admissible level");
  }
  scores_[{Key(feature), Key(aspect), Key(sentence)}] = score;
}

std::vector<Feature> TableJudge::Features(std::string_view word) {
  auto it = features_.find(Key(word));
  return it == features_.end() ? std::vector<Feature>{} : it->second;
}

std::vector<Aspect> TableJudge::Aspects(std::string_view sentence) {
  auto it = aspects_.find(Key(sentence));
  return it == aspects_.end() ? std::vector<Aspect>{} : it->second;
}

double TableJudge::Match(const Feature& feature, const Aspect& aspect,
                         std::string_view sentence) {
  auto it = scores_.find(
      {Key(feature.description), Key(aspect.description), Key(sentence)});
  return it == scores_.end() ? 0.0 : it->second;
}

nlohmann::json TableJudge::ToJson() const {
  nlohmann::json doc{{"features", nlohmann::json::object()},
                     {"aspects", nlohmann::json::object()},
                     {"scores", nlohmann::json::array()}};
  for (const auto& [word, fs] : features_) {
    nlohmann::json list = nlohmann::json::array();
    for (const Feature& f : fs) {
      list.push_back({{"dimension", DimensionName(f.dimension)},
                      {"description", f.description}});
    }
    doc["features"][word] = list;
  }
  for (const auto& [sentence, as] : aspects_) {
    nlohmann::json list = nlohmann::json::array();
    for (const Aspect& a : as) {
      list.push_back({{"category", CategoryName(a.category)},
                      {"description", a.description}});
    }
    doc["aspects"][sentence] = list;
  }
  for (const auto& [key, score] : scores_) {
    doc["scores"].push_back({{"feature", std::get<0>(key)},
                             {"aspect", std::get<1>(key)},
                             {"sentence", std::get<2>(key)},
                             {"score", score}});
  }
  return doc;
}

std::vector<Feature> ParseFeatureLines(std::string_view response) {
  const std::optional<std::string> body = llm::ExtractTag(response, "features");
  if (!body) throw ParseError("missing <features> section");
  std::vector<Feature> out;
  for (const std::string& line : text::Split(*body, '\n')) {
    auto parts = SplitLine(line);
    if (!parts) continue;
    try {
      out.push_back({ParseDimension(parts->first), parts->second});
    } catch (const InvalidArgument&) {
      // Unknown dimension names are skipped.
    }
  }
  if (out.empty()) throw ParseError("no parseable feature lines");
  return out;
}

std::vector<Aspect> ParseAspectLines(std::string_view response) {
  const std::optional<std::string> body = llm::ExtractTag(response, "aspects");
  if (!body) throw ParseError("missing <aspects> section");
  std::vector<Aspect> out;
  if (text::ToLower(*body) == "none") return out;
  for (const std::string& line : text::Split(*body, '\n')) {
    auto parts = SplitLine(line);
    if (!parts) continue;
    try {
      out.push_back({ParseCategory(parts->first), parts->second});
    } catch (const InvalidArgument&) {
    }
  }
  return out;
}

double ParseScore(std::string_view response) {
  std::string body;
  if (auto tag = llm::ExtractTag(response, "score")) {
    body = *tag;
  } else {
    body = std::string(text::Trim(response));
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec != std::errc() || ptr == body.data()) {
    throw ParseError("score is not a number: " + body);
  }
  return value;
}

LlmJudge::LlmJudge(llm::Backend& backend, const llm::PromptLibrary& prompts)
    : backend_(backend), prompts_(prompts) {}

std::vector<Feature> LlmJudge::Features(std::string_view word) {
  const llm::CompletionRequest req = prompts_.Build(
      "judge_features", {{"word", std::string(word)}}, llm::Purpose::kAnalysis);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    try {
      return ParseFeatureLines(llm::Complete(backend_, req));
    } catch (const ParseError&) {
    }
  }
  return {};
}

std::vector<Aspect> LlmJudge::Aspects(std::string_view sentence) {
  const llm::CompletionRequest req =
      prompts_.Build("judge_aspects", {{"sentence", std::string(sentence)}},
                     llm::Purpose::kAnalysis);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    try {
      return ParseAspectLines(llm::Complete(backend_, req));
    } catch (const ParseError&) {
    }
  }
  return {};
}

double LlmJudge::Match(const Feature& feature, const Aspect& aspect,
                       std::string_view sentence) {
  const llm::CompletionRequest req = prompts_.Build(
      "judge_match",
      {{"feature", std::string(DimensionName(feature.dimension)) + ": " +
                       feature.description},
       {"aspect", std::string(CategoryName(aspect.category)) + ": " +
                      aspect.description},
       {"sentence", std::string(sentence)}},
      llm::Purpose::kAnalysis);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    try {
      return SnapScore(ParseScore(llm::Complete(backend_, req)));
    } catch (const ParseError&) {
    }
  }
  // Unparseable after every attempt: fail closed.
  return 0.0;
}

}  // namespace metarena::reasoner
