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

#include "metarena/common/text.h"

#include <algorithm>
#include <cctype>

#include "metarena/common/error.h"

namespace metarena::text {
namespace {

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }
bool IsPunct(char c) { return std::ispunct(static_cast<unsigned char>(c)); }

std::string_view TrimPunct(std::string_view s) {
  while (!s.empty() && IsPunct(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsPunct(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> WhitespacePieces(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && IsSpace(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !IsSpace(s[j])) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::string ToLower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && IsSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsSpace(s.back())) s.remove_suffix(1);
  return s;
}

std::string NormalizeWhitespace(std::string_view s) {
  std::string out;
  for (std::string_view piece : WhitespacePieces(s)) {
    if (!out.empty()) out.push_back(' ');
    out.append(piece);
  }
  return out;
}

std::vector<std::string> WordTokens(std::string_view s) {
  std::vector<std::string> out;
  for (std::string_view piece : WhitespacePieces(s)) {
    std::string_view core = TrimPunct(piece);
    if (!core.empty()) out.push_back(ToLower(core));
  }
  return out;
}

bool ContainsWholeWord(std::string_view haystack, std::string_view needle) {
  const std::vector<std::string> pattern = WordTokens(needle);
  if (pattern.empty()) return false;
  const std::vector<std::string> tokens = WordTokens(haystack);
  if (tokens.size() < pattern.size()) return false;
  for (std::size_t i = 0; i + pattern.size() <= tokens.size(); ++i) {
    if (std::equal(pattern.begin(), pattern.end(), tokens.begin() + i)) {
      return true;
    }
  }
  return false;
}

bool EqualsIgnoreCase(std::string_view a, std::string_view b) {
  return a.size() == b.size() && ToLower(a) == ToLower(b);
}

std::optional<std::string> ParseGuess(std::string_view utterance) {
  static constexpr std::string_view kKeyword = "guess:";
  const std::string lower = ToLower(utterance);
  std::size_t pos = lower.find(kKeyword);
  while (pos != std::string::npos) {
    std::size_t i = pos + kKeyword.size();
    while (i < utterance.size() && IsSpace(utterance[i])) ++i;
    std::size_t j = i;
    while (j < utterance.size() && !IsSpace(utterance[j])) ++j;
    std::string_view token = TrimPunct(utterance.substr(i, j - i));
    if (!token.empty()) return std::string(token);
    pos = lower.find(kKeyword, pos + 1);
  }
  return std::nullopt;
}

std::vector<std::string> Split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = s.find(sep, start);
    out.emplace_back(s.substr(start, end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

std::string RenderTemplate(
    std::string_view tmpl,
    const std::vector<std::pair<std::string, std::string>>& bindings) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    const std::size_t open = tmpl.find("{{", i);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(i));
      break;
    }
    out.append(tmpl.substr(i, open - i));
    const std::size_t close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) {
      throw InvalidArgument("unterminated placeholder in template");
    }
    const std::string_view name = Trim(tmpl.substr(open + 2, close - open - 2));
    auto it = std::find_if(bindings.begin(), bindings.end(),
                           [&](const auto& b) { return b.first == name; });
    if (it == bindings.end()) {
      throw InvalidArgument("template placeholder has no binding: " +
                            std::string(name));
    }
    out.append(it->second);
    i = close + 2;
  }
  return out;
}

}  // namespace metarena::text
