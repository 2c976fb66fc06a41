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

#include "metarena/runner/dataset.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "metarena/common/error.h"
#include "metarena/common/text.h"

namespace metarena::runner {
namespace {

std::string Field(std::string_view raw) {
  std::string_view f = text::Trim(raw);
  if (f.size() >= 2 && f.front() == '"' && f.back() == '"') {
    f = f.substr(1, f.size() - 2);
  }
  return std::string(text::Trim(f));
}

bool Describable(const std::string& v, const std::string& where) {
  const std::string k = text::ToLower(v);
  if (k == "yes" || k == "true" || k == "1" || k.empty()) return true;
  if (k == "no" || k == "false" || k == "0") return false;
  throw ParseError(where + ": describable must be yes or no, got '" + v + "'");
}

}  // namespace

WordDataset ParseWordPairs(std::string_view text, std::string_view source) {
  WordDataset out;
  std::set<std::string> declared;
  std::set<std::string> seen_themes;
  std::set<std::pair<std::string, std::string>> seen_pairs;
  bool header_seen = false;
  bool has_flag = false;
  int line_no = 0;
  for (const std::string& raw : text::Split(text, '\n')) {
    ++line_no;
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    const std::string_view line = text::Trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string lower = text::ToLower(line.substr(1));
      const std::string_view body = text::Trim(lower);
      if (body.rfind("themes:", 0) == 0) {
        for (const std::string& t : text::Split(body.substr(7), ',')) {
          const std::string theme = Field(t);
          if (!theme.empty()) declared.insert(theme);
        }
      }
      continue;
    }
    std::vector<std::string> fields;
    for (const std::string& f : text::Split(line, ',')) fields.push_back(Field(f));
    if (!header_seen) {
      std::vector<std::string> lower;
      for (const std::string& f : fields) lower.push_back(text::ToLower(f));
      const bool base = lower.size() >= 3 && lower[0] == "theme" &&
                        lower[1] == "word_a" && lower[2] == "word_b";
      has_flag = lower.size() == 4 && lower[3] == "describable";
      if (!base || (lower.size() != 3 && !has_flag)) {
        throw ParseError(where +
                         ": expected header theme,word_a,word_b[,describable]");
      }
      header_seen = true;
      continue;
    }
    const std::size_t want = has_flag ? 4 : 3;
    if (fields.size() != want && !(has_flag && fields.size() == 3)) {
      throw ParseError(where + ": expected " + std::to_string(want) +
                       " fields, got " + std::to_string(fields.size()));
    }
    game::WordPair pair{text::ToLower(fields[0]), fields[1], fields[2]};
    if (pair.theme.empty() || pair.civilian_word.empty() ||
        pair.undercover_word.empty()) {
      throw ParseError(where + ": empty field");
    }
    try {
      pair.Validate();
    } catch (const InvalidArgument& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (!declared.empty() && !declared.contains(pair.theme)) {
      throw ParseError(where + ": theme '" + pair.theme + "' is not declared");
    }
    std::string a = text::ToLower(pair.civilian_word);
    std::string b = text::ToLower(pair.undercover_word);
    if (b < a) std::swap(a, b);
    if (!seen_pairs.insert({a, b}).second) {
      throw ParseError(where + ": duplicate pair " + pair.civilian_word + "/" +
                       pair.undercover_word);
    }
    if (has_flag && fields.size() == 4 && !Describable(fields[3], where)) {
      ++out.skipped_undescribable;
      continue;
    }
    seen_themes.insert(pair.theme);
    out.pairs.push_back(std::move(pair));
  }
  if (!header_seen) throw ParseError(std::string(source) + ": empty dataset");
  if (out.pairs.empty()) {
    throw ParseError(std::string(source) + ": dataset has no usable pairs");
  }
  const std::set<std::string>& themes = declared.empty() ? seen_themes : declared;
  out.themes.assign(themes.begin(), themes.end());
  return out;
}

WordDataset LoadWordPairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read dataset " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseWordPairs(ss.str(), path.string());
}

}  // namespace metarena::runner
