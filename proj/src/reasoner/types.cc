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

#include "metarena/reasoner/types.h"

#include <algorithm>
#include <cmath>

#include "metarena/common/error.h"
#include "metarena/common/text.h"

namespace metarena::reasoner {

std::string_view DimensionName(FeatureDimension d) {
  switch (d) {
    case FeatureDimension::kBehavior: return "behavior";
    case FeatureDimension::kState: return "state";
    case FeatureDimension::kStructure: return "structure";
    case FeatureDimension::kFunction: return "function";
    case FeatureDimension::kProperty: return "property";
  }
  return "?";
}

FeatureDimension ParseDimension(std::string_view s) {
  const std::string lower = text::ToLower(text::Trim(s));
  for (FeatureDimension d : kAllDimensions) {
    if (DimensionName(d) == lower) return d;
  }
  if (lower == "behaviour") return FeatureDimension::kBehavior;
  throw InvalidArgument("unknown feature dimension: " + std::string(s));
}

std::string_view CategoryName(MetaphorCategory c) {
  switch (c) {
    case MetaphorCategory::kOntological: return "ontological";
    case MetaphorCategory::kStructural: return "structural";
    case MetaphorCategory::kSpatial: return "spatial";
  }
  return "?";
}

std::string_view CategoryKey(MetaphorCategory c) {
  switch (c) {
    case MetaphorCategory::kOntological: return "ONTOLOGICAL_METAPHOR";
    case MetaphorCategory::kStructural: return "STRUCTURAL_METAPHOR";
    case MetaphorCategory::kSpatial: return "SPATIAL_METAPHOR";
  }
  return "?";
}

MetaphorCategory ParseCategory(std::string_view s) {
  const std::string lower = text::ToLower(text::Trim(s));
  for (MetaphorCategory c : kAllCategories) {
    if (CategoryName(c) == lower || text::ToLower(CategoryKey(c)) == lower) {
      return c;
    }
  }
  throw InvalidArgument("unknown metaphor category: " + std::string(s));
}

double SnapScore(double raw) {
  if (std::isnan(raw)) return 0.0;
  const double clamped = std::clamp(raw, 0.0, 1.0);
  const double steps = clamped * 5.0;
  const double lower = std::floor(steps);
  // Exact midpoints (within rounding noise) go down.
  const double k = (steps - lower > 0.5 + 1e-9) ? lower + 1.0 : lower;
  return kScoreLevels[static_cast<std::size_t>(std::min(k, 5.0))];
}

bool IsScoreLevel(double s) {
  return std::find(kScoreLevels.begin(), kScoreLevels.end(), s) !=
         kScoreLevels.end();
}

}  // namespace metarena::reasoner
