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

#include <algorithm>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "metarena/common/error.h"
#include "metarena/pool/experience_pool.h"
#include "metarena/runner/config.h"
#include "metarena/runner/dataset.h"
#include "metarena/runner/runner.h"

namespace {

using metarena::runner::TournamentConfig;

enum class Kind { kString, kInt, kUint, kDouble, kBool };

struct Flag {
  std::string name;
  std::vector<std::string> path;
  Kind kind;
  std::string value;
  CLI::Option* option = nullptr;
};

// Flags named after TournamentConfig keys; set ones override the JSON file.
class ConfigFlags {
 public:
  void Attach(CLI::App* app) {
    app->add_option("--config", config_path_, "JSON config file");
    Add(app, "game", {"game"}, Kind::kString, "undercover or taboo");
    Add(app, "civilian-policy", {"civilian_policy"}, Kind::kString,
        "naive, cot, comet, comet_nomet");
    Add(app, "undercover-policy", {"undercover_policy"}, Kind::kString, "");
    Add(app, "attacker-policy", {"attacker_policy"}, Kind::kString, "");
    Add(app, "defender-policy", {"defender_policy"}, Kind::kString, "");
    Add(app, "alternate-sides", {"alternate_sides"}, Kind::kBool, "true/false");
    Add(app, "dataset", {"dataset"}, Kind::kString, "word pair CSV");
    Add(app, "episodes-per-pair", {"episodes_per_pair"}, Kind::kInt, "");
    Add(app, "seed", {"seed"}, Kind::kUint, "base seed");
    Add(app, "jobs", {"jobs"}, Kind::kInt, "concurrent episodes");
    Add(app, "mode", {"mode"}, Kind::kString, "live, record, replay, scripted");
    Add(app, "script", {"script"}, Kind::kString, "scripted backend JSON");
    Add(app, "cassette", {"cassette"}, Kind::kString, "record/replay cassette");
    Add(app, "judge-table", {"judge_table"}, Kind::kString, "lookup judge JSON");
    Add(app, "pool", {"pool"}, Kind::kString, "experience pool JSON");
    Add(app, "seed-pool", {"seed_pool"}, Kind::kString, "initial pool records");
    Add(app, "output-dir", {"output_dir"}, Kind::kString, "");
    Add(app, "prompts-dir", {"prompts_dir"}, Kind::kString, "prompt overrides");
    Add(app, "n-players", {"n_players"}, Kind::kInt, "");
    Add(app, "n-undercover", {"n_undercover"}, Kind::kInt, "");
    Add(app, "max-rounds", {"max_rounds"}, Kind::kInt, "");
    Add(app, "taboo-max-turns", {"taboo_max_turns"}, Kind::kInt, "");
    Add(app, "threshold", {"hypothesis", "threshold"}, Kind::kDouble, "");
    Add(app, "feature-decay", {"hypothesis", "feature_decay"}, Kind::kDouble, "");
    Add(app, "aspect-decay", {"hypothesis", "aspect_decay"}, Kind::kDouble, "");
    Add(app, "pool-capacity", {"pool_config", "capacity_per_category"},
        Kind::kInt, "");
    Add(app, "prune-interval", {"pool_config", "prune_interval_games"},
        Kind::kInt, "");
    Add(app, "analysis-temperature", {"temperatures", "analysis"},
        Kind::kDouble, "");
    Add(app, "generation-temperature", {"temperatures", "generation"},
        Kind::kDouble, "");
    Add(app, "endpoint", {"http", "endpoint"}, Kind::kString, "");
    Add(app, "model", {"http", "model"}, Kind::kString, "");
    Add(app, "api-key-env", {"http", "api_key_env"}, Kind::kString, "");
    Add(app, "llm-annotator", {"llm_annotator"}, Kind::kBool, "true/false");
  }

  TournamentConfig Build() const {
    TournamentConfig config;
    if (!config_path_.empty()) config = TournamentConfig::Load(config_path_);
    nlohmann::json overrides = nlohmann::json::object();
    for (const Flag& f : flags_) {
      if (f.option->count() == 0) continue;
      nlohmann::json* node = &overrides;
      for (const std::string& key : f.path) node = &(*node)[key];
      *node = Convert(f);
    }
    config.Merge(overrides);
    return config;
  }

 private:
  void Add(CLI::App* app, std::string name, std::vector<std::string> path,
           Kind kind, const std::string& help) {
    Flag& f = flags_.emplace_back(Flag{name, std::move(path), kind, "", nullptr});
    f.option = app->add_option("--" + name, f.value, help);
  }

  static nlohmann::json Convert(const Flag& f) {
    try {
      switch (f.kind) {
        case Kind::kString: return f.value;
        case Kind::kInt: return std::stoi(f.value);
        case Kind::kUint: return std::stoull(f.value);
        case Kind::kDouble: return std::stod(f.value);
        case Kind::kBool:
          if (f.value == "true" || f.value == "1" || f.value == "yes") return true;
          if (f.value == "false" || f.value == "0" || f.value == "no") return false;
          break;
      }
    } catch (const std::exception&) {
    }
    throw metarena::InvalidArgument("--" + f.name + ": bad value '" + f.value + "'");
  }

  std::string config_path_;
  std::deque<Flag> flags_;
};

void WriteFile(const std::filesystem::path& path, const std::string& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw metarena::InvalidArgument("cannot write " + path.string());
  out << body;
}

int Play(const TournamentConfig& base, std::size_t pair_index, int episode,
         const std::string& theme, const std::string& word_a,
         const std::string& word_b, const std::string& log_path) {
  TournamentConfig config = base;
  metarena::game::WordPair pair;
  if (!word_a.empty() || !word_b.empty()) {
    pair = {theme.empty() ? "custom" : theme, word_a, word_b};
    pair.Validate();
    if (config.dataset.empty()) config.dataset = "<inline>";
  } else {
    config.Validate();
    const auto dataset = metarena::runner::LoadWordPairs(config.dataset);
    if (pair_index >= dataset.pairs.size()) {
      throw metarena::InvalidArgument("--pair-index out of range");
    }
    pair = dataset.pairs[pair_index];
  }
  config.Validate();
  const auto spec =
      metarena::runner::MakeEpisodeSpec(config, pair, pair_index, episode);
  const auto result = metarena::runner::RunSingleEpisode(config, spec);
  const std::filesystem::path path =
      log_path.empty()
          ? std::filesystem::path(config.output_dir) / (spec.game_id + ".jsonl")
          : std::filesystem::path(log_path);
  WriteFile(path, result.log.ToJsonLines());
  std::cout << spec.game_id << ": " << result.outcome
            << (result.valid ? "" : " (" + result.error + ")") << "\n"
            << "log: " << path.string() << "\n";
  return result.valid ? 0 : 3;
}

int Tournament(const TournamentConfig& config) {
  const auto result = metarena::runner::RunTournament(config);
  std::cout << result.report.ToTextTable();
  std::cout << "outputs: " << config.output_dir << "\n";
  return 0;
}

int Metrics(const std::string& logs, const std::string& out_dir, bool csv) {
  std::vector<metarena::metrics::AnnotatedGame> games;
  const auto report = metarena::runner::ReportFromLogs(logs, &games);
  std::cout << (csv ? report.ToCsv() : report.ToTextTable());
  if (!out_dir.empty()) {
    const std::filesystem::path dir(out_dir);
    WriteFile(dir / "annotated.jsonl", metarena::metrics::ToJsonLines(games));
    WriteFile(dir / "metrics.json", report.ToJson().dump(2) + "\n");
    WriteFile(dir / "metrics.txt", report.ToTextTable());
    WriteFile(dir / "metrics.csv", report.ToCsv());
  }
  return 0;
}

int PoolInspect(const std::string& path, const std::string& category, int top) {
  auto pool = metarena::pool::ExperiencePool::Load(path);
  for (metarena::reasoner::MetaphorCategory c : metarena::reasoner::kAllCategories) {
    if (!category.empty() && metarena::reasoner::ParseCategory(category) != c) {
      continue;
    }
    auto records = pool.records(c);
    std::stable_sort(records.begin(), records.end(),
                     [](const auto& a, const auto& b) { return a.score() > b.score(); });
    std::cout << metarena::reasoner::CategoryName(c) << " (" << records.size()
              << ")\n";
    int shown = 0;
    for (const auto& r : records) {
      if (top > 0 && shown++ >= top) break;
      char score[16];
      std::snprintf(score, sizeof score, "%.3f", r.score());
      std::cout << "  " << r.id << "  score " << score << "  use " << r.use
                << "  [" << (r.words.empty() ? "" : r.words.front()) << "/"
                << (r.words.size() > 1 ? r.words[1] : "") << "]  "
                << r.metaphor << "\n";
    }
  }
  return 0;
}

int PoolPrune(const std::string& path, int games, const std::string& out) {
  auto pool = metarena::pool::ExperiencePool::Load(path);
  const int removed = pool.Prune(games);
  pool.set_games_played(std::max(pool.games_played(), games));
  pool.Save(out.empty() ? path : out);
  std::cout << "removed " << removed << ", remaining " << pool.size() << "\n";
  return 0;
}

int Describability(const std::string& dataset_path) {
  const auto dataset = metarena::runner::LoadWordPairs(dataset_path);
  std::cout << "pairs kept: " << dataset.pairs.size()
            << ", marked not describable: " << dataset.skipped_undescribable
            << "\n"
            << "automatic screening is not implemented; set the describable "
               "column by hand\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metarena: metaphor-aware agents for Undercover and Adversarial Taboo"};
  app.require_subcommand(1);

  ConfigFlags play_flags;
  auto* play = app.add_subcommand("play", "run one episode");
  play_flags.Attach(play);
  std::size_t pair_index = 0;
  int episode = 0;
  std::string theme, word_a, word_b, log_path;
  play->add_option("--pair-index", pair_index, "row of the dataset");
  play->add_option("--episode", episode, "episode index (seed and sides)");
  play->add_option("--theme", theme);
  play->add_option("--word-a", word_a, "civilian word (skips the dataset)");
  play->add_option("--word-b", word_b, "undercover word");
  play->add_option("--log", log_path, "log file path");

  ConfigFlags tour_flags;
  auto* tour = app.add_subcommand("tournament", "run every pair and episode");
  tour_flags.Attach(tour);

  auto* met = app.add_subcommand("metrics", "recompute metrics from logs");
  std::string logs, out_dir;
  bool csv = false;
  met->add_option("--logs", logs, "episode log directory")->required();
  met->add_option("--out", out_dir, "write annotated.jsonl and reports here");
  met->add_flag("--csv", csv, "print CSV instead of the table");

  auto* pool = app.add_subcommand("pool", "experience pool tools");
  pool->require_subcommand(1);
  std::string pool_path, category, prune_out;
  int top = 0;
  int games = 0;
  auto* inspect = pool->add_subcommand("inspect", "list records by score");
  inspect->add_option("--pool", pool_path)->required();
  inspect->add_option("--category", category, "ontological, structural or spatial");
  inspect->add_option("--top", top, "records per category");
  auto* stats = pool->add_subcommand("stats", "per-category counts and scores");
  stats->add_option("--pool", pool_path)->required();
  auto* prune = pool->add_subcommand("prune", "apply the pruning rule");
  prune->add_option("--pool", pool_path)->required();
  prune->add_option("--games", games, "games played so far")->required();
  prune->add_option("--out", prune_out, "output file (default: in place)");

  auto* desc = app.add_subcommand("describability", "word pair screening stub");
  std::string desc_dataset;
  desc->add_option("--dataset", desc_dataset)->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*play) {
      return Play(play_flags.Build(), pair_index, episode, theme, word_a,
                  word_b, log_path);
    }
    if (*tour) return Tournament(tour_flags.Build());
    if (*met) return Metrics(logs, out_dir, csv);
    if (*inspect) return PoolInspect(pool_path, category, top);
    if (*stats) {
      std::cout << metarena::pool::ExperiencePool::Load(pool_path).StatsTable();
      return 0;
    }
    if (*prune) return PoolPrune(pool_path, games, prune_out);
    if (*desc) return Describability(desc_dataset);
  } catch (const metarena::ReplayMiss& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
