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

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "json.hpp"
#include "metarena/common/error.h"
#include "metarena/common/text.h"
#include "metarena/game/undercover.h"
#include "metarena/metrics/metrics.h"
#include "metarena/pool/experience_pool.h"
#include "metarena/reasoner/hypothesis.h"
#include "metarena/reasoner/semantic_judge.h"
#include "metarena/runner/config.h"
#include "metarena/runner/dataset.h"
#include "metarena/runner/runner.h"

namespace py = pybind11;
namespace fs = std::filesystem;

namespace {

using metarena::game::PlayerId;

py::object ToPy(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json FromPy(const py::handle& obj) {
  return nlohmann::json::parse(
      py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

// A dict is merged over the defaults; a str or path names a config file.
metarena::runner::TournamentConfig Config(const py::object& cfg) {
  if (py::isinstance<py::dict>(cfg)) {
    metarena::runner::TournamentConfig c;
    c.Merge(FromPy(cfg));
    return c;
  }
  return metarena::runner::TournamentConfig::Load(cfg.cast<fs::path>());
}

py::dict Decision(const metarena::reasoner::HypothesisDecision& d) {
  py::dict out;
  out["verdict"] = std::string(metarena::reasoner::VerdictName(d.verdict));
  out["best_score"] = d.best_score;
  out["best_feature"] = d.best_feature;
  out["best_aspect"] = d.best_aspect;
  out["score_matrix"] = d.score_matrix;
  return out;
}

py::dict Episode(const metarena::runner::EpisodeResult& r) {
  py::dict out;
  out["game_id"] = r.game_id;
  out["valid"] = r.valid;
  out["outcome"] = r.outcome;
  out["error"] = r.error;
  py::list events;
  for (const auto& e : r.log.events()) events.append(ToPy(e.ToJson()));
  out["events"] = events;
  out["log"] = r.log.ToJsonLines();
  return out;
}

}  // namespace

PYBIND11_MODULE(_metarena, m) {
  m.doc() = "Native core of the metarena package.";

  // Translators run newest first, so subclasses are registered last.
  auto& error = py::register_exception<metarena::Error>(m, "Error");
  py::register_exception<metarena::InvalidArgument>(m, "InvalidArgument", error);
  py::register_exception<metarena::InvalidState>(m, "InvalidState", error);
  py::register_exception<metarena::RuleViolation>(m, "RuleViolation", error);
  py::register_exception<metarena::ParseError>(m, "ParseError", error);
  auto& backend = py::register_exception<metarena::BackendError>(m, "BackendError", error);
  py::register_exception<metarena::ReplayMiss>(m, "ReplayMiss", backend);

  m.def("parse_guess", [](const std::string& s) { return metarena::text::ParseGuess(s); },
        py::arg("utterance"));
  m.def("contains_whole_word",
        [](const std::string& h, const std::string& n) {
          return metarena::text::ContainsWholeWord(h, n);
        },
        py::arg("text"), py::arg("word"));

  py::class_<metarena::game::UndercoverGame>(m, "UndercoverGame")
      .def(py::init([](const std::string& civilian, const std::string& undercover,
                       std::uint64_t seed, int n_players, int n_undercover,
                       int max_rounds) {
             metarena::game::UndercoverConfig c;
             c.rng_seed = seed;
             c.n_players = n_players;
             c.n_undercover = n_undercover;
             c.max_rounds = max_rounds;
             return metarena::game::UndercoverGame(c, {"", civilian, undercover});
           }),
           py::arg("civilian_word"), py::arg("undercover_word"), py::arg("seed") = 0,
           py::arg("n_players") = 5, py::arg("n_undercover") = 2,
           py::arg("max_rounds") = 10)
      .def_property_readonly("round", &metarena::game::UndercoverGame::round)
      .def_property_readonly("phase",
                             [](const metarena::game::UndercoverGame& g) {
                               return std::string(metarena::game::PhaseName(g.phase()));
                             })
      .def_property_readonly("outcome",
                             [](const metarena::game::UndercoverGame& g) {
                               return std::string(metarena::game::OutcomeName(g.outcome()));
                             })
      .def("alive_players", &metarena::game::UndercoverGame::AlivePlayers)
      .def("next_speaker", &metarena::game::UndercoverGame::NextSpeaker)
      .def("role",
           [](const metarena::game::UndercoverGame& g, PlayerId id) {
             return std::string(metarena::game::RoleName(g.role(id)));
           })
      .def("word", &metarena::game::UndercoverGame::word)
      .def("submit_speech",
           [](metarena::game::UndercoverGame& g, PlayerId id, const std::string& s) {
             g.SubmitSpeech(id, s);
           })
      .def("tally_votes",
           [](metarena::game::UndercoverGame& g, const std::map<PlayerId, PlayerId>& v) {
             g.TallyVotes(v);
             return g.vote_history().back().eliminated;
           },
           py::arg("votes"));

  m.def("hypothesis_test",
        [](const std::string& sentence, const std::string& word, const py::object& table,
           double threshold, double feature_decay, double aspect_decay) {
          metarena::reasoner::TableJudge judge =
              py::isinstance<py::dict>(table)
                  ? metarena::reasoner::TableJudge::FromJson(FromPy(table))
                  : metarena::reasoner::TableJudge::Load(table.cast<fs::path>());
          metarena::reasoner::HypothesisParams p{threshold, feature_decay, aspect_decay};
          return Decision(metarena::reasoner::HypothesisTest(sentence, word, p, judge));
        },
        py::arg("sentence"), py::arg("word"), py::arg("judge_table"),
        py::arg("threshold") = 0.4, py::arg("feature_decay") = 0.9,
        py::arg("aspect_decay") = 0.9);

  m.def("pool_score", &metarena::pool::Score, py::arg("teammate_recognitions"),
        py::arg("rival_recognitions"), py::arg("total_references"));
  m.def("balanced", py::overload_cast<double, double>(&metarena::metrics::Balanced),
        py::arg("a"), py::arg("b"));

  py::class_<metarena::pool::ExperiencePool>(m, "ExperiencePool")
      .def_static("load",
                  [](const fs::path& path) { return metarena::pool::ExperiencePool::Load(path); },
                  py::arg("path"))
      .def("__len__", [](const metarena::pool::ExperiencePool& p) { return p.size(); })
      .def_property_readonly("games_played", &metarena::pool::ExperiencePool::games_played)
      .def("prune", &metarena::pool::ExperiencePool::Prune, py::arg("games_played"))
      .def("stats_table", &metarena::pool::ExperiencePool::StatsTable)
      .def("retrieve",
           [](metarena::pool::ExperiencePool& p, const std::string& category, int k) {
             py::list out;
             for (const auto& r : p.Retrieve(metarena::reasoner::ParseCategory(category), k)) {
               out.append(ToPy(r.ToJson()));
             }
             return out;
           },
           py::arg("category"), py::arg("k"))
      .def("save", &metarena::pool::ExperiencePool::Save, py::arg("path"))
      .def("to_dict", [](const metarena::pool::ExperiencePool& p) { return ToPy(p.ToJson()); });

  m.def("load_word_pairs",
        [](const fs::path& path) {
          py::list out;
          for (const auto& p : metarena::runner::LoadWordPairs(path).pairs) {
            out.append(py::make_tuple(p.theme, p.civilian_word, p.undercover_word));
          }
          return out;
        },
        py::arg("path"));

  m.def("play_episode",
        [](const py::object& cfg, std::size_t pair_index, int episode,
           std::optional<std::string> word_a, std::optional<std::string> word_b,
           const std::string& theme) {
          const metarena::runner::TournamentConfig c = Config(cfg);
          metarena::game::WordPair pair;
          if (word_a && word_b) {
            pair = {theme, *word_a, *word_b};
          } else {
            const auto data = metarena::runner::LoadWordPairs(c.dataset);
            if (pair_index >= data.pairs.size()) {
              throw metarena::InvalidArgument("pair_index out of range");
            }
            pair = data.pairs[pair_index];
          }
          const auto spec = metarena::runner::MakeEpisodeSpec(c, pair, pair_index, episode);
          metarena::runner::EpisodeResult r;
          {
            py::gil_scoped_release release;
            r = metarena::runner::RunSingleEpisode(c, spec);
          }
          return Episode(r);
        },
        py::arg("config"), py::arg("pair_index") = 0, py::arg("episode") = 0,
        py::arg("word_a") = py::none(), py::arg("word_b") = py::none(),
        py::arg("theme") = "custom");

  m.def("run_tournament",
        [](const py::object& cfg) {
          const metarena::runner::TournamentConfig c = Config(cfg);
          metarena::runner::TournamentResult r;
          {
            py::gil_scoped_release release;
            r = metarena::runner::RunTournament(c);
          }
          py::dict out;
          out["report"] = ToPy(r.report.ToJson());
          out["table"] = r.report.ToTextTable();
          out["invalid_episodes"] = r.invalid_episodes;
          out["episodes"] = r.episodes.size();
          out["pool_size"] = r.pool_size;
          return out;
        },
        py::arg("config"));

  m.def("report_from_logs",
        [](const fs::path& dir) { return ToPy(metarena::runner::ReportFromLogs(dir).ToJson()); },
        py::arg("log_dir"));
}
