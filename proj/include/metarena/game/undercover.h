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

#ifndef METARENA_GAME_UNDERCOVER_H_
#define METARENA_GAME_UNDERCOVER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metarena/game/types.h"

namespace metarena::game {

inline constexpr int kDefaultPlayers = 5;
inline constexpr int kDefaultUndercover = 2;
inline constexpr int kDefaultMaxRounds = 10;

struct UndercoverConfig {
  int n_players = kDefaultPlayers;
  int n_undercover = kDefaultUndercover;
  int max_rounds = kDefaultMaxRounds;
  std::uint64_t rng_seed = 0;

  // Requires 1 <= n_undercover < n_players / 2 and max_rounds >= 1.
  void Validate() const;
  bool operator==(const UndercoverConfig&) const = default;
};

struct WordPair {
  std::string theme;
  std::string civilian_word;
  std::string undercover_word;

  // Both words non-empty and distinct ignoring case.
  void Validate() const;
  bool operator==(const WordPair&) const = default;
};

struct Ballot {
  PlayerId voter = 0;
  PlayerId target = 0;
};

struct VoteRecord {
  int round = 0;
  std::map<PlayerId, PlayerId> ballots;  // voter -> target
  std::optional<PlayerId> eliminated;    // Empty on a tie.

  bool operator==(const VoteRecord&) const = default;
};

// True when the utterance contains the word as a whole word (see
// text::ContainsWholeWord). This is the check SubmitSpeech enforces.
bool RevealsWord(std::string_view utterance, std::string_view word);

// Authoritative state of one Undercover episode. A plain value type: copy it
// to branch, compare it to check replay determinism.
class UndercoverGame {
 public:
  // Assigns roles and the first speaking order from config.rng_seed.
  // Throws InvalidArgument on a bad config or word pair.
  UndercoverGame(UndercoverConfig config, WordPair pair);

  // Permutation of the alive players for the current round, derived from
  // (rng_seed, round) alone. Only valid before anyone has spoken this round.
  std::vector<PlayerId> NextSpeakingOrder() const;

  // Throws the same errors SubmitSpeech would, without changing the state.
  void CheckSpeech(PlayerId speaker, std::string_view utterance) const;

  // Appends a speech to the history. Moves to Voting after the last alive
  // speaker. Throws OutOfTurn, InvalidState, or RuleViolation (secret word).
  void SubmitSpeech(PlayerId speaker, std::string_view utterance);

  // Applies one simultaneous voting phase. Every alive player must cast
  // exactly one ballot for another alive player. The unique plurality target
  // is eliminated; a tie eliminates nobody.
  void TallyVotes(std::span<const Ballot> ballots);
  void TallyVotes(const std::map<PlayerId, PlayerId>& votes);

  // Outcome implied by the current census and round cap.
  Outcome CheckWinner() const;

  const UndercoverConfig& config() const { return config_; }
  const WordPair& pair() const { return pair_; }
  int n_players() const { return config_.n_players; }
  int round() const { return round_; }
  Phase phase() const { return phase_; }
  Outcome outcome() const { return outcome_; }
  int votes_completed() const { return votes_completed_; }

  Role role(PlayerId id) const;
  bool alive(PlayerId id) const;
  const std::string& word(PlayerId id) const;
  std::vector<PlayerId> AlivePlayers() const;
  int AliveCount(Role role) const;

  const std::vector<PlayerId>& speaking_order() const {
    return speaking_order_;
  }
  // Next expected speaker, or nullopt outside the Speaking phase.
  std::optional<PlayerId> NextSpeaker() const;
  int spoken_this_round() const { return spoken_this_round_; }

  const std::vector<Observation>& history() const { return history_; }
  const std::vector<VoteRecord>& vote_history() const {
    return vote_history_;
  }

  bool operator==(const UndercoverGame&) const = default;

 private:
  void CheckPlayer(PlayerId id) const;
  void FinishIfDecided();

  UndercoverConfig config_;
  WordPair pair_;
  std::vector<Role> roles_;
  std::vector<bool> alive_;
  int round_ = 1;
  int votes_completed_ = 0;
  Phase phase_ = Phase::kSpeaking;
  Outcome outcome_ = Outcome::kOngoing;
  std::vector<PlayerId> speaking_order_;
  int spoken_this_round_ = 0;
  std::vector<Observation> history_;
  std::vector<VoteRecord> vote_history_;
};

}  // namespace metarena::game

#endif  // METARENA_GAME_UNDERCOVER_H_
