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

#include "metarena/game/undercover.h"

#include <algorithm>
#include <numeric>
#include <set>

#include "metarena/common/error.h"
#include "metarena/common/rng.h"
#include "metarena/common/text.h"

namespace metarena::game {
namespace {

// Stream 0 seeds role assignment; stream r seeds the order of round r.
constexpr std::uint64_t kRoleStream = 0;

}  // namespace

void UndercoverConfig::Validate() const {
  if (n_players < 3) {
    throw InvalidArgument("n_players must be at least 3");
  }
  if (n_undercover < 1 || 2 * n_undercover >= n_players) {
    throw InvalidArgument(
        "n_undercover must satisfy 1 <= n_undercover < n_players / 2");
  }
  if (max_rounds < 1) throw InvalidArgument("max_rounds must be >= 1");
}

void WordPair::Validate() const {
  if (text::Trim(civilian_word).empty() || text::Trim(undercover_word).empty()) {
    throw InvalidArgument("word pair contains an empty word");
  }
  if (text::EqualsIgnoreCase(text::Trim(civilian_word),
                             text::Trim(undercover_word))) {
    throw InvalidArgument("word pair words must differ: " + civilian_word);
  }
}

bool RevealsWord(std::string_view utterance, std::string_view word) {
  return text::ContainsWholeWord(utterance, word);
}

UndercoverGame::UndercoverGame(UndercoverConfig config, WordPair pair)
    : config_(config), pair_(std::move(pair)) {
  config_.Validate();
  pair_.Validate();
  roles_.assign(config_.n_players, Role::kCivilian);
  alive_.assign(config_.n_players, true);

  std::vector<int> seats(config_.n_players);
  std::iota(seats.begin(), seats.end(), 0);
  Rng rng(MixSeed(config_.rng_seed, kRoleStream));
  rng.Shuffle(seats);
  for (int i = 0; i < config_.n_undercover; ++i) {
    roles_[seats[i]] = Role::kUndercover;
  }
  speaking_order_ = NextSpeakingOrder();
}

std::vector<PlayerId> UndercoverGame::NextSpeakingOrder() const {
  if (phase_ != Phase::kSpeaking || spoken_this_round_ != 0) {
    throw InvalidState("speaking order is only defined at the start of a "
                       "speaking phase");
  }
  std::vector<PlayerId> order = AlivePlayers();
  Rng rng(MixSeed(config_.rng_seed, static_cast<std::uint64_t>(round_)));
  rng.Shuffle(order);
  return order;
}

void UndercoverGame::CheckPlayer(PlayerId id) const {
  if (id < 1 || id > config_.n_players) {
    throw InvalidArgument("no such player: " + PlayerName(id));
  }
}

Role UndercoverGame::role(PlayerId id) const {
  CheckPlayer(id);
  return roles_[id - 1];
}

bool UndercoverGame::alive(PlayerId id) const {
  CheckPlayer(id);
  return alive_[id - 1];
}

const std::string& UndercoverGame::word(PlayerId id) const {
  return role(id) == Role::kCivilian ? pair_.civilian_word
                                     : pair_.undercover_word;
}

std::vector<PlayerId> UndercoverGame::AlivePlayers() const {
  std::vector<PlayerId> out;
  for (int i = 0; i < config_.n_players; ++i) {
    if (alive_[i]) out.push_back(i + 1);
  }
  return out;
}

int UndercoverGame::AliveCount(Role r) const {
  int n = 0;
  for (int i = 0; i < config_.n_players; ++i) {
    if (alive_[i] && roles_[i] == r) ++n;
  }
  return n;
}

std::optional<PlayerId> UndercoverGame::NextSpeaker() const {
  if (phase_ != Phase::kSpeaking) return std::nullopt;
  return speaking_order_[spoken_this_round_];
}

void UndercoverGame::CheckSpeech(PlayerId speaker,
                                 std::string_view utterance) const {
  CheckPlayer(speaker);
  if (phase_ != Phase::kSpeaking) {
    throw InvalidState("speech submitted outside the speaking phase");
  }
  if (speaker != speaking_order_[spoken_this_round_]) {
    throw OutOfTurn(PlayerName(speaker) + " spoke out of turn; expected " +
                    PlayerName(speaking_order_[spoken_this_round_]));
  }
  if (text::Trim(utterance).empty()) {
    throw InvalidArgument("empty speech from " + PlayerName(speaker));
  }
  if (RevealsWord(utterance, word(speaker))) {
    throw RuleViolation(PlayerName(speaker) + " said their secret word");
  }
}

void UndercoverGame::SubmitSpeech(PlayerId speaker,
                                  std::string_view utterance) {
  CheckSpeech(speaker, utterance);
  history_.push_back(Observation{.round = round_,
                                 .speaker = speaker,
                                 .utterance = std::string(utterance),
                                 .kind = ObservationKind::kSpeech});
  ++spoken_this_round_;
  if (spoken_this_round_ == static_cast<int>(speaking_order_.size())) {
    phase_ = Phase::kVoting;
  }
}

void UndercoverGame::TallyVotes(const std::map<PlayerId, PlayerId>& votes) {
  std::vector<Ballot> ballots;
  ballots.reserve(votes.size());
  for (const auto& [voter, target] : votes) ballots.push_back({voter, target});
  TallyVotes(ballots);
}

void UndercoverGame::TallyVotes(std::span<const Ballot> ballots) {
  if (phase_ != Phase::kVoting) {
    throw InvalidState("votes tallied outside the voting phase");
  }
  VoteRecord record;
  record.round = round_;
  for (const Ballot& b : ballots) {
    CheckPlayer(b.voter);
    CheckPlayer(b.target);
    if (!alive_[b.voter - 1]) {
      throw InvalidArgument("ballot from eliminated player " +
                            PlayerName(b.voter));
    }
    if (!alive_[b.target - 1]) {
      throw InvalidArgument("vote for eliminated player " +
                            PlayerName(b.target));
    }
    if (b.voter == b.target) {
      throw RuleViolation(PlayerName(b.voter) + " voted for themselves");
    }
    if (!record.ballots.emplace(b.voter, b.target).second) {
      throw InvalidArgument("duplicate ballot from " + PlayerName(b.voter));
    }
  }
  for (PlayerId id : AlivePlayers()) {
    if (!record.ballots.contains(id)) {
      throw InvalidArgument("missing ballot from " + PlayerName(id));
    }
  }

  std::map<PlayerId, int> counts;
  for (const auto& [voter, target] : record.ballots) ++counts[target];
  int best = 0;
  int at_best = 0;
  PlayerId leader = 0;
  for (const auto& [target, n] : counts) {
    if (n > best) {
      best = n;
      at_best = 1;
      leader = target;
    } else if (n == best) {
      ++at_best;
    }
  }
  if (at_best == 1) {
    record.eliminated = leader;
    alive_[leader - 1] = false;
  }

  for (const auto& [voter, target] : record.ballots) {
    history_.push_back(Observation{.round = round_,
                                   .speaker = voter,
                                   .utterance = PlayerName(target),
                                   .kind = ObservationKind::kVote,
                                   .vote_target = target});
  }
  vote_history_.push_back(std::move(record));
  ++votes_completed_;
  FinishIfDecided();
}

void UndercoverGame::FinishIfDecided() {
  outcome_ = CheckWinner();
  if (outcome_ != Outcome::kOngoing) {
    phase_ = Phase::kTerminal;
    speaking_order_.clear();
    spoken_this_round_ = 0;
    return;
  }
  ++round_;
  phase_ = Phase::kSpeaking;
  spoken_this_round_ = 0;
  speaking_order_ = NextSpeakingOrder();
}

Outcome UndercoverGame::CheckWinner() const {
  const int undercover = AliveCount(Role::kUndercover);
  const int civilians = AliveCount(Role::kCivilian);
  if (undercover == 0) return Outcome::kCiviliansWin;
  if (civilians <= 1) return Outcome::kUndercoverWin;
  if (votes_completed_ >= config_.max_rounds) return Outcome::kDraw;
  return Outcome::kOngoing;
}

}  // namespace metarena::game
