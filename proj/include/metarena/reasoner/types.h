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

#ifndef METARENA_REASONER_TYPES_H_
#define METARENA_REASONER_TYPES_H_

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace metarena::reasoner {

enum class FeatureDimension { kBehavior, kState, kStructure, kFunction, kProperty };
enum class MetaphorCategory { kOntological, kStructural, kSpatial };

inline constexpr std::array<FeatureDimension, 5> kAllDimensions = {
    FeatureDimension::kBehavior, FeatureDimension::kState,
    FeatureDimension::kStructure, FeatureDimension::kFunction,
    FeatureDimension::kProperty};
inline constexpr std::array<MetaphorCategory, 3> kAllCategories = {
    MetaphorCategory::kOntological, MetaphorCategory::kStructural,
    MetaphorCategory::kSpatial};

std::string_view DimensionName(FeatureDimension d);
FeatureDimension ParseDimension(std::string_view s);
// "ontological" / "structural" / "spatial".
std::string_view CategoryName(MetaphorCategory c);
// Accepts the short names and the pool keys ("ONTOLOGICAL_METAPHOR").
MetaphorCategory ParseCategory(std::string_view s);
// "ONTOLOGICAL_METAPHOR" etc., the experience pool's method key.
std::string_view CategoryKey(MetaphorCategory c);

struct Feature {
  FeatureDimension dimension = FeatureDimension::kBehavior;
  std::string description;
  bool operator==(const Feature&) const = default;
};

struct Aspect {
  MetaphorCategory category = MetaphorCategory::kOntological;
  std::string description;
  bool operator==(const Aspect&) const = default;
};

// Features of a secret word in extraction order; at most one per dimension.
using FeatureSet = std::vector<Feature>;
// Metaphorical aspects of a sentence in identification order; at most one
// per category. Empty means no metaphorical reading was found.
using MetaphorAspects = std::vector<Aspect>;

// The six admissible match scores.
inline constexpr std::array<double, 6> kScoreLevels = {0.0, 0.2, 0.4,
                                                       0.6, 0.8, 1.0};

// Nearest admissible score; exact midpoints round down. Values outside
// [0, 1] are clamped first.
double SnapScore(double raw);
bool IsScoreLevel(double s);

}  // namespace metarena::reasoner

#endif  // METARENA_REASONER_TYPES_H_
