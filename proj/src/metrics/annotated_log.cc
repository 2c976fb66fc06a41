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

#include "metarena/metrics/annotated_log.h"

#include <map>
#include <tuple>

#include "metarena/common/error.h"
#include "metarena/common/text.h"
#include "metarena/llm/backend.h"
#include "metarena/llm/prompts.h"

namespace metarena::metrics {
namespace {

bool Opposes(const nlohmann::json& entry) {
  return entry.value("label", "") == "mismatch" ||
         entry.value("verdict", "") == "H-";
}

bool Supports(const nlohmann::json& entry) {
  return entry.value("label", "") == "detailed" ||
         entry.value("verdict", "") == "H+";
}

bool YesNo(const std::string& s) {
  const std::string k = text::ToLower(text::Trim(s));
  if (k == "yes" || k == "true") return true;
  if (k == "no" || k == "false") return false;
  throw ParseError("expected yes or no, got " + s);
}

}  // namespace

const PlayerTruth& AnnotatedGame::player(PlayerId id) const {
  for (const PlayerTruth& p : players) {
    if (p.id == id) return p;
  }
  throw InvalidArgument("no player " + game::PlayerName(id) + " in " + game_id);
}

bool AnnotatedGame::RoleWon(std::string_view role) const {
  if (role == "civilian") return outcome == "civilians_win";
  if (role == "undercover") return outcome == "undercover_win";
  if (role == "attacker") return outcome == "attacker_win";
  if (role == "defender") return outcome == "defender_win";
  return false;
}

nlohmann::json AnnotatedGame::ToJson() const {
  nlohmann::json j;
  j["game_id"] = game_id;
  j["game"] = game;
  j["outcome"] = outcome;
  j["players"] = nlohmann::json::array();
  for (const PlayerTruth& p : players) {
    j["players"].push_back({{"id", game::PlayerName(p.id)},
                            {"role", p.role},
                            {"policy", p.policy},
                            {"word", p.word}});
  }
  j["speeches"] = nlohmann::json::array();
  for (const SpeechAnnotation& s : speeches) {
    j["speeches"].push_back({{"round", s.round},
                             {"speaker", game::PlayerName(s.speaker)},
                             {"utterance", s.utterance},
                             {"leaked", s.leaked},
                             {"inconsistent", s.inconsistent},
                             {"rationale", s.rationale}});
  }
  j["received"] = nlohmann::json::array();
  for (const ReceivedEntry& r : received) {
    j["received"].push_back({{"receiver", game::PlayerName(r.receiver)},
                             {"speaker", game::PlayerName(r.speaker)},
                             {"round", r.round},
                             {"feature_valid", r.feature_valid},
                             {"judgment", r.judgment},
                             {"judgment_correct", r.judgment_correct}});
  }
  j["claims"] = nlohmann::json::array();
  for (const SelfClaim& c : claims) {
    j["claims"].push_back({{"player", game::PlayerName(c.player)},
                           {"round", c.round},
                           {"claim", c.claim},
                           {"correct", c.correct}});
  }
  return j;
}

AnnotatedGame AnnotatedGame::FromJson(const nlohmann::json& j) {
  AnnotatedGame g;
  try {
    g.game_id = j.at("game_id").get<std::string>();
    g.game = j.value("game", "undercover");
    g.outcome = j.at("outcome").get<std::string>();
    for (const auto& p : j.at("players")) {
      g.players.push_back({game::ParsePlayerName(p.at("id").get<std::string>()),
                           p.at("role").get<std::string>(),
                           p.value("policy", ""), p.value("word", "")});
    }
    for (const auto& s : j.value("speeches", nlohmann::json::array())) {
      g.speeches.push_back(
          {s.at("round").get<int>(),
           game::ParsePlayerName(s.at("speaker").get<std::string>()),
           s.value("utterance", ""), s.value("leaked", false),
           s.value("inconsistent", false), s.value("rationale", "")});
    }
    for (const auto& r : j.value("received", nlohmann::json::array())) {
      g.received.push_back(
          {game::ParsePlayerName(r.at("receiver").get<std::string>()),
           game::ParsePlayerName(r.at("speaker").get<std::string>()),
           r.at("round").get<int>(), r.value("feature_valid", false),
           r.value("judgment", ""), r.value("judgment_correct", false)});
    }
    for (const auto& c : j.value("claims", nlohmann::json::array())) {
      g.claims.push_back({game::ParsePlayerName(c.at("player").get<std::string>()),
                          c.at("round").get<int>(), c.at("claim").get<std::string>(),
                          c.value("correct", false)});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("annotated game: ") + e.what());
  }
  return g;
}

std::string ToJsonLines(const std::vector<AnnotatedGame>& games) {
  std::string out;
  for (const AnnotatedGame& g : games) out += g.ToJson().dump() + "\n";
  return out;
}

std::vector<AnnotatedGame> AnnotatedFromJsonLines(std::string_view text) {
  std::vector<AnnotatedGame> out;
  int line_no = 0;
  for (const std::string& line : text::Split(text, '\n')) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    try {
      out.push_back(AnnotatedGame::FromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("annotated log line " + std::to_string(line_no) + ": " +
                       e.what());
    }
  }
  return out;
}

AnnotatedGame Annotator::Annotate(const game::EventLog& log) {
  const auto& events = log.events();
  if (events.empty() || events.front().event_kind != "setup") {
    throw ParseError("episode log does not start with a setup event");
  }
  AnnotatedGame g;
  const nlohmann::json& setup = events.front().payload;
  g.game_id = setup.value("game_id", "");
  g.game = setup.value("game", "undercover");
  for (const auto& p : setup.at("players")) {
    g.players.push_back({game::ParsePlayerName(p.at("id").get<std::string>()),
                         p.at("role").get<std::string>(),
                         p.value("policy", ""), p.value("word", "")});
  }
  std::string civilian_word;
  std::string undercover_word;
  for (const PlayerTruth& p : g.players) {
    (p.role == "civilian" ? civilian_word : undercover_word) = p.word;
  }

  // receiver -> (speaker, round) -> analysed entry
  std::map<PlayerId, std::map<std::pair<PlayerId, int>, nlohmann::json>> analysis;
  std::map<std::pair<PlayerId, int>, std::string> claims;
  std::map<std::pair<PlayerId, int>, std::string> stances;
  std::map<PlayerId, int> eliminated_round;
  for (const game::LogEvent& e : events) {
    const PlayerId actor = game::ParsePlayerName(e.actor);
    if (e.event_kind == "analysis") {
      for (const auto& entry : e.payload.at("entries")) {
        const PlayerId speaker =
            game::ParsePlayerName(entry.at("speaker").get<std::string>());
        analysis[actor][{speaker, entry.at("round").get<int>()}] = entry;
      }
    } else if (e.event_kind == "self_identity") {
      claims[{actor, e.round}] = e.payload.at("identity").get<std::string>();
    } else if (e.event_kind == "strategy") {
      stances[{actor, e.round}] = e.payload.value("stance", "");
    } else if (e.event_kind == "elimination") {
      const auto& who = e.payload.at("eliminated");
      if (who.is_string()) {
        eliminated_round[game::ParsePlayerName(who.get<std::string>())] = e.round;
      }
    } else if (e.event_kind == "outcome") {
      g.outcome = e.payload.at("outcome").get<std::string>();
    }
  }
  if (g.outcome.empty()) throw ParseError("episode log has no outcome event");

  if (g.game == "taboo") return g;

  for (const game::LogEvent& e : events) {
    if (e.event_kind != "speech") continue;
    SpeechAnnotation s;
    s.round = e.round;
    s.speaker = game::ParsePlayerName(e.actor);
    s.utterance = e.payload.at("utterance").get<std::string>();
    const PlayerTruth& speaker = g.player(s.speaker);

    SpeechContext ctx;
    ctx.speaker = &speaker;
    ctx.other_word = speaker.role == "civilian" ? undercover_word : civilian_word;
    if (auto it = stances.find({s.speaker, s.round}); it != stances.end()) {
      ctx.stance = it->second;
    }
    for (const PlayerTruth& receiver : g.players) {
      if (receiver.id == s.speaker) continue;
      auto gone = eliminated_round.find(receiver.id);
      if (gone != eliminated_round.end() && gone->second < s.round) continue;
      ReceivedEntry r;
      r.receiver = receiver.id;
      r.speaker = s.speaker;
      r.round = s.round;
      const bool same = receiver.role == speaker.role;
      auto& seen = analysis[receiver.id];
      if (auto it = seen.find({s.speaker, s.round}); it != seen.end()) {
        const nlohmann::json& entry = it->second;
        r.feature_valid = same ? Supports(entry) : Opposes(entry);
        r.judgment = entry.value("judgment", "");
        r.judgment_correct = (same && r.judgment == "teammate") ||
                             (!same && r.judgment == "opponent");
        if (same) {
          ++ctx.teammate_readers;
          ctx.teammate_flags += Opposes(entry) ? 1 : 0;
        } else {
          ctx.opponent_flags += Opposes(entry) ? 1 : 0;
        }
      }
      g.received.push_back(std::move(r));
    }
    Label(s, ctx);
    g.speeches.push_back(std::move(s));
  }

  for (const auto& [key, claim] : claims) {
    const PlayerTruth& p = g.player(key.first);
    g.claims.push_back({key.first, key.second, claim, claim == p.role});
  }
  return g;
}

void Annotator::Label(SpeechAnnotation& speech, const SpeechContext& ctx) {
  speech.leaked = ctx.opponent_flags > 0;
  const bool covert_stance =
      ctx.stance == "deceive" || ctx.stance == "misdirect";
  const bool teammates_object =
      ctx.teammate_readers > 0 && 2 * ctx.teammate_flags > ctx.teammate_readers;
  speech.inconsistent = covert_stance || teammates_object;
  std::string why;
  if (speech.leaked) {
    why += std::to_string(ctx.opponent_flags) +
           " opponent(s) read it as a different word. ";
  }
  if (covert_stance) why += "Stance was " + ctx.stance + ". ";
  if (teammates_object) {
    why += std::to_string(ctx.teammate_flags) + " of " +
           std::to_string(ctx.teammate_readers) +
           " teammates read it as a different word. ";
  }
  speech.rationale =
      why.empty() ? "rule: nothing flagged" : "rule: " + std::string(text::Trim(why));
}

LlmAnnotator::LlmAnnotator(llm::Backend& backend,
                           const llm::PromptLibrary& prompts)
    : backend_(backend), prompts_(prompts) {}

void LlmAnnotator::Label(SpeechAnnotation& speech, const SpeechContext& ctx) {
  Annotator::Label(speech, ctx);
  if (ctx.speaker == nullptr || ctx.speaker->role == "attacker" ||
      ctx.speaker->role == "defender") {
    return;
  }
  const llm::CompletionRequest request = prompts_.Build(
      "annotate_speech",
      {{"role", ctx.speaker->role},
       {"own_word", ctx.speaker->word},
       {"other_word", ctx.other_word},
       {"utterance", speech.utterance}},
      llm::Purpose::kAnalysis);
  const std::string response = llm::Complete(backend_, request);
  try {
    const auto leaked = llm::ExtractTag(response, "leaked");
    const auto inconsistent = llm::ExtractTag(response, "inconsistent");
    if (!leaked || !inconsistent) return;
    const bool l = YesNo(*leaked);
    const bool i = YesNo(*inconsistent);
    speech.leaked = l;
    speech.inconsistent = i;
    speech.rationale =
        "judge: " + llm::ExtractTag(response, "rationale").value_or("");
  } catch (const ParseError&) {
  }
}

}  // namespace metarena::metrics
