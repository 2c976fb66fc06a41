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

#ifndef METARENA_COMMON_TEXT_H_
#define METARENA_COMMON_TEXT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace metarena::text {

std::string ToLower(std::string_view s);
std::string_view Trim(std::string_view s);

// Collapses every run of whitespace into one space and trims the ends.
std::string NormalizeWhitespace(std::string_view s);

// Splits on whitespace, strips leading/trailing ASCII punctuation from each
// piece and lowercases it. Pieces that are pure punctuation are dropped.
std::vector<std::string> WordTokens(std::string_view s);

// Whole-word, case-insensitive containment. A multi-word needle matches a
// consecutive run of tokens.
bool ContainsWholeWord(std::string_view haystack, std::string_view needle);

bool EqualsIgnoreCase(std::string_view a, std::string_view b);

// Finds "Guess:" (keyword case-insensitive, anywhere in the utterance)
// followed by optional whitespace and one token. Returns the token with
// punctuation trimmed, or nullopt when there is no well-formed guess.
std::optional<std::string> ParseGuess(std::string_view utterance);

std::vector<std::string> Split(std::string_view s, char sep);

// Replaces "{{name}}" placeholders. Throws InvalidArgument on a placeholder
// that has no binding.
std::string RenderTemplate(
    std::string_view tmpl,
    const std::vector<std::pair<std::string, std::string>>& bindings);

}  // namespace metarena::text

#endif  // METARENA_COMMON_TEXT_H_
