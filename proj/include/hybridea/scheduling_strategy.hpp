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

/// @file scheduling_strategy.hpp
/// @brief The level-indexed operator families for the scheduling problem and
/// the hybrid strategy that uses them.
///
/// Recombination family i holds F_zeta^i for every permutation zeta of the
/// n - i suffix slots; mutation family i holds M_{a,b}^i for every position
/// pair (a, b). Both carry uniform within-family distributions. A pair whose
/// first parent sits at level q recombines with family q; an individual at
/// level q mutates with family q.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hybridea/ea_engine.hpp"
#include "hybridea/scheduling.hpp"

namespace hybridea::scheduling {

/// k! for k <= 20, nullopt beyond (does not fit 64 bits).
std::optional<std::uint64_t> factorial(std::size_t k);

/// Lexicographic unranking of permutations of {0, ..., k-1}.
std::vector<int> permutation_from_rank(std::uint64_t rank, std::size_t k);
std::uint64_t permutation_rank(std::span<const int> perm);

class PrefixRecombinationFamily final : public RecombinationFamily<Permutation> {
 public:
  PrefixRecombinationFamily(std::size_t n, int level);

  int level() const noexcept { return level_; }
  std::optional<std::uint64_t> size() const override;
  Permutation apply(std::uint64_t op, const Permutation& first, const Permutation& second) const override;
  Permutation sample_apply(const Permutation& first, const Permutation& second, Rng& rng) const override;

 private:
  std::size_t n_;
  int level_;
};

class RepositioningMutationFamily final : public MutationFamily<Permutation> {
 public:
  RepositioningMutationFamily(std::shared_ptr<const JacksonProblem> problem, int level);

  int level() const noexcept { return level_; }
  /// Operator index a * n + b.
  std::optional<std::uint64_t> size() const override;
  Permutation apply(std::uint64_t op, const Permutation& x) const override;
  Permutation sample_apply(const Permutation& x, Rng& rng) const override;

 private:
  std::shared_ptr<const JacksonProblem> problem_;
  int level_;
};

/// Auxiliary level and lateness (as a double, exact for integral tick counts
/// below 2^53) of a permutation.
ProblemHooks<Permutation> make_hooks(std::shared_ptr<const JacksonProblem> problem);

/// The hybrid strategy: families 0..n, level-of-first-parent recombination
/// rule, own-level mutation rule, hybrid-elitist selection.
StrategyProfile<Permutation> make_hybrid_strategy(std::shared_ptr<const JacksonProblem> problem,
                                                  PairSampling pairs = PairSampling::without_replacement);

/// m independent uniformly random permutations.
Population<Permutation> random_population(const ProblemHooks<Permutation>& hooks, std::size_t n, std::size_t m,
                                          Rng& rng);

}  // namespace hybridea::scheduling
