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
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "metarena/common/rng.h"

namespace metarena {
namespace {

TEST(TextTest, TrimAndLower) {
  EXPECT_EQ(text::Trim("  hi \n"), "hi");
  EXPECT_EQ(text::Trim(""), "");
  EXPECT_EQ(text::ToLower("BeE"), "bee");
  EXPECT_EQ(text::NormalizeWhitespace(" a \t b\n\nc "), "a b c");
}

TEST(TextTest, WholeWordMatchingIgnoresCaseAndPunctuation) {
  EXPECT_TRUE(text::ContainsWholeWord("It is a bee.", "bee"));
  EXPECT_TRUE(text::ContainsWholeWord("BEE!", "bee"));
  EXPECT_TRUE(text::ContainsWholeWord("(apple)", "apple"));
  EXPECT_FALSE(text::ContainsWholeWord("beetle", "bee"));
  EXPECT_FALSE(text::ContainsWholeWord("pineapples", "apple"));
  EXPECT_FALSE(text::ContainsWholeWord("", "bee"));
}

TEST(TextTest, ParseGuess) {
  EXPECT_EQ(text::ParseGuess("Guess: apple"), "apple");
  EXPECT_EQ(text::ParseGuess("guess:apple"), "apple");
  EXPECT_EQ(text::ParseGuess("I think so. GUESS:  Apple!"), "Apple");
  EXPECT_FALSE(text::ParseGuess("Guess:").has_value());
  EXPECT_FALSE(text::ParseGuess("my guess is apple").has_value());
}

TEST(TextTest, ParseGuessIsIdempotent) {
  const auto once = text::ParseGuess("well, Guess: kiwi");
  ASSERT_TRUE(once.has_value());
  EXPECT_EQ(text::ParseGuess("Guess: " + *once), once);
}

TEST(TextTest, SplitKeepsEmptyFields) {
  EXPECT_EQ(text::Split("a,,b", ','), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_EQ(text::Split("", ',').size(), 1u);
}

TEST(TextTest, RenderTemplate) {
  EXPECT_EQ(text::RenderTemplate("Hi {{name}}, {{name}}!", {{"name", "Bo"}}),
            "Hi Bo, Bo!");
}

TEST(RngTest, MixSeedSeparatesStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 50; ++a) {
    for (std::uint64_t b = 0; b < 50; ++b) seen.insert(MixSeed(7, a, b));
  }
  EXPECT_EQ(seen.size(), 2500u);
  EXPECT_EQ(MixSeed(1, 2, 3), MixSeed(1, 2, 3));
}

TEST(RngTest, BelowStaysInRangeAndCoversIt) {
  Rng rng(42);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = rng.Below(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_GT(c, 800);
}

TEST(RngTest, ShuffleIsAPermutation) {
  Rng rng(3);
  std::vector<int> v{1, 2, 3, 4, 5, 6};
  rng.Shuffle(v);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<int>{1, 2, 3, 4, 5, 6}));
}

}  // namespace
}  // namespace metarena
