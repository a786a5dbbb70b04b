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

/// @file ea_engine.hpp
/// @brief Population-based hybrid/mixed-strategy evolutionary loop.
///
/// One generation runs three stages in order:
///   1. recombination: m ordered parent pairs are drawn uniformly, each pair
///      picks a recombination family through the strategy's family-choice rule
///      and an operator inside it through the family's own distribution;
///   2. mutation: every position of the recombined population is mutated
///      independently, again family first, operator second;
///   3. selection: the strategy's selection rule merges parents and mutants.
///
/// The engine is generic over the genome type. It only needs the problem to
/// report an auxiliary level and a (minimized) objective for each genome.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hybridea/errors.hpp"

namespace hybridea {

using Rng = std::mt19937_64;

template <class Genome>
struct Individual {
  Genome genome;
  int aux_level = 0;
  /// Minimized objective (maximal lateness for the scheduling problem).
  double objective = 0.0;

  friend bool operator==(const Individual&, const Individual&) = default;
};

template <class Genome>
struct Population {
  std::vector<Individual<Genome>> members;
  std::int64_t generation = 0;

  std::size_t size() const noexcept { return members.size(); }

  int aux_max() const {
    int best = std::numeric_limits<int>::min();
    for (const auto& x : members) best = std::max(best, x.aux_level);
    return best;
  }

  double best_objective() const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : members) best = std::min(best, x.objective);
    return best;
  }
};

enum class PairSampling { with_replacement, without_replacement };

/// Discrete distribution over family indices: (index, probability) entries.
using FamilyChoice = std::vector<std::pair<int, double>>;

/// A finite family of binary recombination operators together with the
/// within-family distribution over its members.
template <class Genome>
class RecombinationFamily {
 public:
  virtual ~RecombinationFamily() = default;

  /// Number of operators, or nullopt when the family is too large to enumerate.
  virtual std::optional<std::uint64_t> size() const = 0;
  /// Within-family probability of operator `op`. Uniform unless overridden.
  virtual double probability(std::uint64_t /*op*/) const { return 1.0 / static_cast<double>(*size()); }
  virtual Genome apply(std::uint64_t op, const Genome& first, const Genome& second) const = 0;
  /// Draws an operator from the within-family distribution and applies it.
  virtual Genome sample_apply(const Genome& first, const Genome& second, Rng& rng) const = 0;
};

/// Unary counterpart of RecombinationFamily.
template <class Genome>
class MutationFamily {
 public:
  virtual ~MutationFamily() = default;

  virtual std::optional<std::uint64_t> size() const = 0;
  virtual double probability(std::uint64_t /*op*/) const { return 1.0 / static_cast<double>(*size()); }
  virtual Genome apply(std::uint64_t op, const Genome& x) const = 0;
  virtual Genome sample_apply(const Genome& x, Rng& rng) const = 0;
};

/// Evaluators supplied by the problem module.
template <class Genome>
struct ProblemHooks {
  std::function<int(const Genome&)> aux_level;
  std::function<double(const Genome&)> objective;

  Individual<Genome> evaluate(Genome genome) const {
    const int level = aux_level(genome);
    const double obj = objective(genome);
    return {std::move(genome), level, obj};
  }
};

/// Level-indexed operator families plus the rules that pick among them.
///
/// The family-choice rules receive the whole parent population, whose
/// `generation` field carries the iteration index t, so time-varying
/// strategies stay expressible.
template <class Genome>
struct StrategyProfile {
  using RecombinationRule =
      std::function<FamilyChoice(const Population<Genome>&, const Individual<Genome>&, const Individual<Genome>&)>;
  using MutationRule = std::function<FamilyChoice(const Population<Genome>&, const Individual<Genome>&)>;
  using SelectionRule = std::function<std::vector<Individual<Genome>>(const Population<Genome>& parents,
                                                                      const Population<Genome>& offspring)>;

  std::map<int, std::shared_ptr<const RecombinationFamily<Genome>>> recombination_families;
  std::map<int, std::shared_ptr<const MutationFamily<Genome>>> mutation_families;
  RecombinationRule recombination_family_rule;
  MutationRule mutation_family_rule;
  PairSampling pair_sampling = PairSampling::without_replacement;
  SelectionRule selection_rule;
  std::string selection_name;
};

inline constexpr double kDistributionTolerance = 1e-12;

/// Throws DomainError unless `choice` is a probability distribution over
/// indices present in `families`.
template <class FamilyMap>
void validate_family_choice(const FamilyChoice& choice, const FamilyMap& families) {
  double total = 0.0;
  for (const auto& [index, p] : choice) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("family probability outside [0,1]");
    if (p > 0.0 && !families.contains(index)) {
      throw DomainError("family index " + std::to_string(index) + " has no operator family");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kDistributionTolerance) {
    throw DomainError("family-choice distribution sums to " + std::to_string(total));
  }
}

inline int sample_family(const FamilyChoice& choice, Rng& rng) {
  if (choice.size() == 1) return choice.front().first;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double u = unit(rng);
  for (const auto& [index, p] : choice) {
    if (u < p) return index;
    u -= p;
  }
  // Rounding can leave u marginally above the last cumulative weight.
  for (auto it = choice.rbegin(); it != choice.rend(); ++it) {
    if (it->second > 0.0) return it->first;
  }
  return choice.back().first;
}

/// Draws m ordered parent pairs. Without replacement, the two indices of a
/// pair always differ; draws are independent across the m pairs.
inline std::vector<std::pair<std::size_t, std::size_t>> sample_recombination_pairs(std::size_t m, PairSampling mode,
                                                                                   Rng& rng) {
  if (m == 0) throw InvalidPopulation("empty population");
  if (mode == PairSampling::without_replacement && m < 2) {
    throw InvalidPopulation("sampling pairs without replacement needs m >= 2");
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(m);
  std::uniform_int_distribution<std::size_t> any(0, m - 1);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = any(rng);
    std::size_t j;
    if (mode == PairSampling::with_replacement) {
      j = any(rng);
    } else {
      std::uniform_int_distribution<std::size_t> other(0, m - 2);
      j = other(rng);
      if (j >= i) ++j;
    }
    pairs.emplace_back(i, j);
  }
  return pairs;
}

namespace detail {

template <class Genome>
void check_cache([[maybe_unused]] const Individual<Genome>& x, [[maybe_unused]] const ProblemHooks<Genome>& hooks) {
#ifndef NDEBUG
  assert(x.aux_level == hooks.aux_level(x.genome));
  assert(x.objective == hooks.objective(x.genome));
#endif
}

template <class Fn>
auto with_stage(const char* stage, std::size_t position, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, position, e.what());
  }
}

}  // namespace detail

/// Recombination stage: returns x^rec, m evaluated offspring.
template <class Genome>
std::vector<Individual<Genome>> recombination_stage(const Population<Genome>& population,
                                                    const StrategyProfile<Genome>& strategy,
                                                    const ProblemHooks<Genome>& hooks, Rng& rng) {
  const auto pairs = sample_recombination_pairs(population.size(), strategy.pair_sampling, rng);
  std::vector<Individual<Genome>> offspring;
  offspring.reserve(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& first = population.members[pairs[k].first];
    const auto& second = population.members[pairs[k].second];
    offspring.push_back(detail::with_stage("recombination", k, [&] {
      const FamilyChoice choice = strategy.recombination_family_rule(population, first, second);
      validate_family_choice(choice, strategy.recombination_families);
      const auto& family = *strategy.recombination_families.at(sample_family(choice, rng));
      return hooks.evaluate(family.sample_apply(first.genome, second.genome, rng));
    }));
  }
  return offspring;
}

/// Mutation stage: mutates every position of x^rec independently.
template <class Genome>
std::vector<Individual<Genome>> mutation_stage(const Population<Genome>& population,
                                               std::span<const Individual<Genome>> recombined,
                                               const StrategyProfile<Genome>& strategy,
                                               const ProblemHooks<Genome>& hooks, Rng& rng) {
  std::vector<Individual<Genome>> mutated;
  mutated.reserve(recombined.size());
  for (std::size_t k = 0; k < recombined.size(); ++k) {
    mutated.push_back(detail::with_stage("mutation", k, [&] {
      const FamilyChoice choice = strategy.mutation_family_rule(population, recombined[k]);
      validate_family_choice(choice, strategy.mutation_families);
      const auto& family = *strategy.mutation_families.at(sample_family(choice, rng));
      return hooks.evaluate(family.sample_apply(recombined[k].genome, rng));
    }));
  }
  return mutated;
}

/// One recombination -> mutation -> selection cycle.
template <class Genome>
Population<Genome> step_generation(const Population<Genome>& population, const StrategyProfile<Genome>& strategy,
                                   const ProblemHooks<Genome>& hooks, Rng& rng) {
  for (const auto& x : population.members) detail::check_cache(x, hooks);
  auto recombined = recombination_stage(population, strategy, hooks, rng);
  Population<Genome> offspring{mutation_stage<Genome>(population, recombined, strategy, hooks, rng),
                               population.generation};
  Population<Genome> next{detail::with_stage("selection", 0,
                                             [&] { return strategy.selection_rule(population, offspring); }),
                          population.generation + 1};
  if (next.size() != population.size()) {
    throw StageError("selection", 0, "selection changed the population size");
  }
  return next;
}

/// FNV-1a digest of a population's genomes, for traces. Genomes must be
/// ranges of integral values.
template <class Genome>
std::uint64_t population_digest(const Population<Genome>& population) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& x : population.members) {
    mix(0x9e3779b97f4a7c15ULL);
    for (const auto v : x.genome) mix(static_cast<std::uint64_t>(v));
  }
  return h;
}

struct GenerationRecord {
  std::int64_t generation = 0;
  int aux_max = 0;
  double best_objective = 0.0;
  std::uint64_t digest = 0;

  friend bool operator==(const GenerationRecord&, const GenerationRecord&) = default;
};

template <class Genome>
struct RunTrace {
  std::vector<GenerationRecord> records;
  /// First generation whose AuxMax equals the top level.
  std::optional<std::int64_t> top_level_hit;
  /// First generation containing a satisfactory member.
  std::optional<std::int64_t> satisfactory_hit;
  std::uint64_t seed = 0;
  Population<Genome> final_population;
};

template <class Genome>
struct StopRule {
  /// Maximum number of generations to run after the initial population.
  std::int64_t budget = 0;
  /// Satisfactory-solution predicate. Absent: run for the whole budget.
  std::function<bool(const Individual<Genome>&)> satisfactory;
  /// Top auxiliary level M, used to record the AuxMax hitting time.
  std::optional<int> top_level;
  /// Keep iterating after a satisfactory hit until the top level is also
  /// reached, so that both hitting times get recorded.
  bool await_top_level = false;
};

/// Iterates step_generation from `initial` until the stop rule fires.
/// The whole run is a deterministic function of its arguments and `seed`.
template <class Genome>
RunTrace<Genome> run(Population<Genome> initial, const StrategyProfile<Genome>& strategy,
                     const ProblemHooks<Genome>& hooks, const StopRule<Genome>& stop, std::uint64_t seed) {
  if (stop.budget < 0) throw DomainError("negative generation budget");
  Rng rng(seed);
  RunTrace<Genome> trace;
  trace.seed = seed;

  auto observe = [&](const Population<Genome>& pop) {
    trace.records.push_back({pop.generation, pop.aux_max(), pop.best_objective(), population_digest(pop)});
    if (stop.top_level && !trace.top_level_hit && pop.aux_max() >= *stop.top_level) {
      trace.top_level_hit = pop.generation;
    }
    if (stop.satisfactory && !trace.satisfactory_hit &&
        std::any_of(pop.members.begin(), pop.members.end(), stop.satisfactory)) {
      trace.satisfactory_hit = pop.generation;
    }
  };
  auto done = [&] {
    if (!trace.satisfactory_hit) return false;
    return !stop.await_top_level || !stop.top_level || trace.top_level_hit.has_value();
  };

  Population<Genome> current = std::move(initial);
  observe(current);
  for (std::int64_t g = 0; g < stop.budget && !done(); ++g) {
    current = step_generation(current, strategy, hooks, rng);
    observe(current);
  }
  trace.final_population = std::move(current);
  return trace;
}

}  // namespace hybridea
