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

#include <cstdint>
#include <span>

#include "hybridea/rational.hpp"
#include "hybridea/scheduling.hpp"

namespace hybridea::scheduling {

struct OptimumResult {
  Rational j_star;
  Permutation witness;
  /// Search-tree nodes (partial schedules) visited.
  std::uint64_t nodes = 0;
};

inline constexpr std::size_t kDefaultSolverLimit = 10;

/// Exact minimum of the maximal lateness by depth-first enumeration of
/// permutations. A prefix is abandoned once its own lateness already reaches
/// the incumbent, which can never discard a strictly better completion.
/// Throws OracleOverflow when the instance has more than `limit` jobs.
OptimumResult optimum_lateness(const SchedulingInstance& instance, std::size_t limit = kDefaultSolverLimit);

}  // namespace hybridea::scheduling
