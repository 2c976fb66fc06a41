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

#ifndef METARENA_RUNNER_DATASET_H_
#define METARENA_RUNNER_DATASET_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "metarena/game/undercover.h"

namespace metarena::runner {

struct WordDataset {
  // word_a is the civilian word, word_b the undercover word.
  std::vector<game::WordPair> pairs;
  // Declared theme labels, or the themes seen when none were declared.
  std::vector<std::string> themes;
  // Rows dropped because their describable flag was false.
  int skipped_undescribable = 0;
};

// CSV with header "theme,word_a,word_b" and an optional fourth
// "describable" column (yes/no, true/false, 1/0). Lines starting with '#'
// are comments, except "# themes: a, b" which restricts the theme labels.
// Throws ParseError naming the line for malformed rows, duplicate pairs in
// either order, or undeclared themes, and when no pair remains.
WordDataset ParseWordPairs(std::string_view text,
                           std::string_view source = "<memory>");
WordDataset LoadWordPairs(const std::filesystem::path& path);

}  // namespace metarena::runner

#endif  // METARENA_RUNNER_DATASET_H_
