// Copyright 2026 The hybridea Authors
//
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hybridea {

/// Argument outside the mathematical domain of an operation (bad permutation,
/// probability outside [0,1], index out of range, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Population too small or malformed for the requested sampling mode.
class InvalidPopulation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exhaustive oracle was asked to enumerate more than it is allowed to.
class OracleOverflow : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// An operator family cannot be enumerated, so an exact computation is not
/// available. Callers fall back to Monte Carlo estimation.
class UnsupportedConfiguration : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A design parameter that must be positive (an improvement probability) is zero.
class DegenerateDesign : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Some non-target state of a Markov chain cannot reach the target set.
class UnreachableTarget : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration or generator parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A problem hook threw while the engine was running a given stage.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, std::size_t position, const std::string& what)
      : std::runtime_error(stage + " stage, position " + std::to_string(position) + ": " + what),
        stage_(std::move(stage)),
        position_(position) {}

  const std::string& stage() const noexcept { return stage_; }
  std::size_t position() const noexcept { return position_; }

 private:
  std::string stage_;
  std::size_t position_;
};

}  // namespace hybridea
