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

#include "metarena/metrics/metrics.h"

#include <algorithm>
#include <cstdio>
#include <set>

#include "metarena/agent/types.h"
#include "metarena/common/error.h"

namespace metarena::metrics {
namespace {

constexpr agent::PolicyKind kPolicyOrder[] = {
    agent::PolicyKind::kNaive, agent::PolicyKind::kCoT,
    agent::PolicyKind::kCoMetNoMet, agent::PolicyKind::kCoMetFull};

std::string DisplayPolicy(const std::string& key) {
  try {
    return std::string(agent::PolicyDisplayName(agent::ParsePolicy(key)));
  } catch (const InvalidArgument&) {
    return key;
  }
}

std::string RoleAbbrev(const std::string& role) {
  if (role == "civilian") return "Civ.";
  if (role == "undercover") return "Und.";
  if (role == "attacker") return "Att.";
  if (role == "defender") return "Def.";
  return role;
}

std::string Cell(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

nlohmann::json OptionalJson(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json MetricValue::ToJson() const {
  return {{"value", OptionalJson(value)},
          {"numerator", numerator},
          {"denominator", denominator}};
}

MetricValue Ratio(std::int64_t numerator, std::int64_t denominator) {
  MetricValue m;
  m.numerator = numerator;
  m.denominator = denominator;
  if (denominator > 0) {
    m.value = static_cast<double>(numerator) / static_cast<double>(denominator);
  }
  return m;
}

nlohmann::json RoleMetrics::ToJson() const {
  nlohmann::json j;
  for (std::string_view name : kMetricNames) {
    j[std::string(name)] = Get(*this, name).ToJson();
  }
  return j;
}

const MetricValue& Get(const RoleMetrics& m, std::string_view name) {
  if (name == "wr") return m.wr;
  if (name == "fer") return m.fer;
  if (name == "oiaa") return m.oiaa;
  if (name == "siaa") return m.siaa;
  if (name == "ppc") return m.ppc;
  if (name == "iisc") return m.iisc;
  throw InvalidArgument("unknown metric " + std::string(name));
}

RoleMetrics ComputeMetrics(const std::vector<AnnotatedGame>& games,
                           std::string_view policy, std::string_view role) {
  std::int64_t games_total = 0;
  std::int64_t games_won = 0;
  std::int64_t heard = 0;
  std::int64_t valid_features = 0;
  std::int64_t correct_judgments = 0;
  std::int64_t claims = 0;
  std::int64_t correct_claims = 0;
  std::int64_t own_statements = 0;
  std::int64_t leaked = 0;
  std::int64_t inconsistent = 0;

  for (const AnnotatedGame& g : games) {
    std::set<PlayerId> seats;
    for (const PlayerTruth& p : g.players) {
      if (p.policy == policy && p.role == role) seats.insert(p.id);
    }
    if (seats.empty()) continue;
    ++games_total;
    games_won += g.RoleWon(role) ? 1 : 0;
    for (const ReceivedEntry& r : g.received) {
      if (!seats.contains(r.receiver)) continue;
      ++heard;
      valid_features += r.feature_valid ? 1 : 0;
      correct_judgments += r.judgment_correct ? 1 : 0;
    }
    for (const SelfClaim& c : g.claims) {
      if (!seats.contains(c.player)) continue;
      ++claims;
      correct_claims += c.correct ? 1 : 0;
    }
    for (const SpeechAnnotation& s : g.speeches) {
      if (!seats.contains(s.speaker)) continue;
      ++own_statements;
      leaked += s.leaked ? 1 : 0;
      inconsistent += s.inconsistent ? 1 : 0;
    }
  }

  RoleMetrics m;
  m.wr = Ratio(games_won, games_total);
  m.fer = Ratio(valid_features, heard);
  m.oiaa = Ratio(correct_judgments, heard);
  m.siaa = Ratio(correct_claims, claims);
  m.ppc = Ratio(leaked, own_statements);
  if (m.ppc.value) m.ppc.value = 1.0 - *m.ppc.value;
  m.iisc = Ratio(inconsistent, own_statements);
  return m;
}

double Balanced(double a, double b) {
  const double mean = (a + b) / 2.0;
  const double variance = (a - b) * (a - b) / 4.0;
  return mean - variance;
}

std::optional<double> Balanced(const std::optional<double>& a,
                               const std::optional<double>& b) {
  if (!a || !b) return std::nullopt;
  return Balanced(*a, *b);
}

MetricsReport BuildReport(const std::vector<AnnotatedGame>& games,
                          int invalid_episodes) {
  MetricsReport report;
  report.episodes = static_cast<int>(games.size());
  report.invalid_episodes = invalid_episodes;
  if (!games.empty()) report.game = games.front().game;
  const bool taboo = report.game == "taboo";
  const std::vector<std::string> roles =
      taboo ? std::vector<std::string>{"attacker", "defender"}
            : std::vector<std::string>{"civilian", "undercover"};

  std::set<std::string> seen;
  for (const AnnotatedGame& g : games) {
    for (const PlayerTruth& p : g.players) seen.insert(p.policy);
  }
  std::vector<std::string> policies;
  for (agent::PolicyKind k : kPolicyOrder) {
    const std::string key(agent::PolicyKey(k));
    if (seen.erase(key) > 0) policies.push_back(key);
  }
  policies.insert(policies.end(), seen.begin(), seen.end());

  for (const std::string& policy : policies) {
    for (const std::string& role : roles) {
      bool present = false;
      for (const AnnotatedGame& g : games) {
        for (const PlayerTruth& p : g.players) {
          present = present || (p.policy == policy && p.role == role);
        }
      }
      if (!present) continue;
      report.rows.push_back({policy, role, ComputeMetrics(games, policy, role)});
    }
  }
  for (const std::string& policy : policies) {
    const RoleMetrics* a = nullptr;
    const RoleMetrics* b = nullptr;
    for (const MetricsReport::Row& row : report.rows) {
      if (row.policy != policy) continue;
      (row.role == roles[0] ? a : b) = &row.metrics;
    }
    if (a == nullptr || b == nullptr) continue;
    MetricsReport::BalancedRow br{policy, {}};
    for (std::string_view name : kMetricNames) {
      br.values.push_back(Balanced(Get(*a, name).value, Get(*b, name).value));
    }
    report.balanced.push_back(std::move(br));
  }
  return report;
}

nlohmann::ordered_json MetricsReport::ToJson() const {
  nlohmann::ordered_json j;
  j["game"] = game;
  j["episodes"] = episodes;
  j["invalid_episodes"] = invalid_episodes;
  j["rows"] = nlohmann::ordered_json::array();
  for (const Row& r : rows) {
    nlohmann::ordered_json row;
    row["policy"] = r.policy;
    row["role"] = r.role;
    for (std::string_view name : kMetricNames) {
      const MetricValue& m = Get(r.metrics, name);
      row[std::string(name)] = {{"value", OptionalJson(m.value)},
                                {"numerator", m.numerator},
                                {"denominator", m.denominator}};
    }
    j["rows"].push_back(std::move(row));
  }
  j["balanced"] = nlohmann::ordered_json::array();
  for (const BalancedRow& b : balanced) {
    nlohmann::ordered_json row;
    row["policy"] = b.policy;
    for (std::size_t i = 0; i < b.values.size(); ++i) {
      row[std::string(kMetricNames[i])] = OptionalJson(b.values[i]);
    }
    j["balanced"].push_back(std::move(row));
  }
  return j;
}

std::string MetricsReport::ToTextTable() const {
  std::vector<std::vector<std::string>> lines;
  lines.push_back({"Role (Method)", "WR", "PPC", "IISC", "FER", "SIAA", "OIAA"});
  for (const Row& r : rows) {
    std::vector<std::string> line{RoleAbbrev(r.role) + " (" +
                                  DisplayPolicy(r.policy) + ")"};
    for (std::string_view name : kMetricNames) {
      line.push_back(Cell(Get(r.metrics, name).value));
    }
    lines.push_back(std::move(line));
  }
  for (const BalancedRow& b : balanced) {
    std::vector<std::string> line{"Balanced (" + DisplayPolicy(b.policy) + ")"};
    for (const auto& v : b.values) line.push_back(Cell(v));
    lines.push_back(std::move(line));
  }
  std::vector<std::size_t> width(7, 0);
  for (const auto& line : lines) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      width[i] = std::max(width[i], line[i].size());
    }
  }
  std::string out;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto& line = lines[n];
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i > 0) out += " | ";
      const std::string pad(width[i] - line[i].size(), ' ');
      out += i == 0 ? line[i] + pad : pad + line[i];
    }
    out += "\n";
    if (n == 0) {
      for (std::size_t i = 0; i < width.size(); ++i) {
        if (i > 0) out += "-+-";
        out += std::string(width[i], '-');
      }
      out += "\n";
    }
  }
  out += "episodes: " + std::to_string(episodes) +
         ", invalid (excluded): " + std::to_string(invalid_episodes) + "\n";
  return out;
}

std::string MetricsReport::ToCsv() const {
  std::string out = "policy,role,wr,ppc,iisc,fer,siaa,oiaa\n";
  auto cell = [](const std::optional<double>& v) {
    if (!v) return std::string();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", *v);
    return std::string(buf);
  };
  for (const Row& r : rows) {
    out += r.policy + "," + r.role;
    for (std::string_view name : kMetricNames) {
      out += "," + cell(Get(r.metrics, name).value);
    }
    out += "\n";
  }
  for (const BalancedRow& b : balanced) {
    out += b.policy + ",balanced";
    for (const auto& v : b.values) out += "," + cell(v);
    out += "\n";
  }
  return out;
}

}  // namespace metarena::metrics
