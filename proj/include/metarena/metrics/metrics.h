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

#ifndef METARENA_METRICS_METRICS_H_
#define METARENA_METRICS_METRICS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "metarena/metrics/annotated_log.h"

namespace metarena::metrics {

// A ratio with its parts. value is empty when the denominator is zero.
struct MetricValue {
  std::optional<double> value;
  std::int64_t numerator = 0;
  std::int64_t denominator = 0;

  bool defined() const { return value.has_value(); }
  nlohmann::json ToJson() const;
};

MetricValue Ratio(std::int64_t numerator, std::int64_t denominator);

struct RoleMetrics {
  MetricValue wr;    // games won / games played
  MetricValue fer;   // valid features extracted / statements heard
  MetricValue oiaa;  // correct identity judgments / statements heard
  MetricValue siaa;  // correct self-identity claims / claims
  MetricValue ppc;   // 1 - leaked statements / own statements
  MetricValue iisc;  // inconsistent statements / own statements

  nlohmann::json ToJson() const;
};

// Metric names in table column order.
inline constexpr std::string_view kMetricNames[] = {"wr",   "ppc",  "iisc",
                                                    "fer",  "siaa", "oiaa"};

const MetricValue& Get(const RoleMetrics& m, std::string_view name);

// Aggregates every player seat with the given policy key and role.
RoleMetrics ComputeMetrics(const std::vector<AnnotatedGame>& games,
                           std::string_view policy, std::string_view role);

// Mean of the two values minus their population variance (a-b)^2/4.
double Balanced(double a, double b);
// Undefined when either input is undefined.
std::optional<double> Balanced(const std::optional<double>& a,
                               const std::optional<double>& b);

struct MetricsReport {
  struct Row {
    std::string policy;
    std::string role;
    RoleMetrics metrics;
  };
  struct BalancedRow {
    std::string policy;
    // Indexed like kMetricNames.
    std::vector<std::optional<double>> values;
  };

  std::string game = "undercover";
  std::vector<Row> rows;
  std::vector<BalancedRow> balanced;
  int episodes = 0;
  int invalid_episodes = 0;

  nlohmann::ordered_json ToJson() const;
  // Aligned table: Role (Method) | WR | PPC | IISC | FER | SIAA | OIAA,
  // one row per (role, method), then one balanced row per method.
  std::string ToTextTable() const;
  std::string ToCsv() const;
};

// One row per (policy, role) seen in the games, policies in a fixed
// order, then balanced rows for policies that played both roles.
MetricsReport BuildReport(const std::vector<AnnotatedGame>& games,
                          int invalid_episodes = 0);

}  // namespace metarena::metrics

#endif  // METARENA_METRICS_METRICS_H_
