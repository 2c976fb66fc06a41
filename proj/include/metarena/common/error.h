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

#ifndef METARENA_COMMON_ERROR_H_
#define METARENA_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace metarena {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied value breaks a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An operation was requested in a phase or state that does not allow it.
class InvalidState : public Error {
 public:
  using Error::Error;
};

// A player acted when it was not their turn.
class OutOfTurn : public InvalidState {
 public:
  using InvalidState::InvalidState;
};

// A game rule was broken (secret word spoken, self vote, ...). Agents are
// expected to catch this and resubmit.
class RuleViolation : public Error {
 public:
  using Error::Error;
};

// Structured model output could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A completion backend failed (network, provider, empty response).
class BackendError : public Error {
 public:
  using Error::Error;
};

// Replay mode was asked for a request that is not in the cassette.
class ReplayMiss : public BackendError {
 public:
  explicit ReplayMiss(std::string fingerprint)
      : BackendError("replay miss: no cassette entry for fingerprint " +
                     fingerprint),
        fingerprint_(std::move(fingerprint)) {}
  const std::string& fingerprint() const { return fingerprint_; }

 private:
  std::string fingerprint_;
};

// A scripted backend ran out of ordered responses.
class ScriptExhausted : public BackendError {
 public:
  using BackendError::BackendError;
};

}  // namespace metarena

#endif  // METARENA_COMMON_ERROR_H_
