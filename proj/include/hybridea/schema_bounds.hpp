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

/// @file schema_bounds.hpp
/// @brief Survival probabilities of a subset S of the search space through one
/// recombination -> mutation -> selection cycle, their Chernoff-type bounds,
/// and exact/Monte Carlo estimators of the count N(S, .) used to check them.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hybridea/ea_engine.hpp"
#include "hybridea/errors.hpp"

namespace hybridea::schema {

template <class Genome>
struct SchemaPredicate {
  std::function<bool(const Individual<Genome>&)> contains;
  std::string label;
};

/// Inputs of the closed-form bounds. All probabilities lie in [0, 1].
struct SchemaBoundInput {
  std::size_t m = 2;
  /// Average per-position probability of producing an S-member by recombination.
  double P = 0.0;
  /// Minimal probability that mutation keeps an S-member in S.
  double pr_preserve = 0.0;
  /// Minimal probability that mutation moves a non-member into S.
  double pr_create = 0.0;
  double delta = 0.0;
  double eps = 0.0;
  /// Recombination success floor for pairs led by an S_0-member.
  double alpha = 0.0;
  /// Mutation preservation floor on S.
  double beta = 1.0;
  /// Number of S_0-members in the parent population.
  std::size_t count_s0 = 0;
};

/// Throws DomainError when a field is out of range.
void validate(const SchemaBoundInput& input);

struct TailBounds {
  /// Upper bound on Pr(N < (1 - delta) m P).
  double lower_tail = 1.0;
  /// Upper bound on Pr(N > (1 + delta) m P).
  double upper_tail = 1.0;
};

TailBounds chernoff_count_bounds(double P, std::size_t m, double delta);

/// (1 - (1 - count_s0/m)^m) * alpha * beta. With beta = 1 this bounds
/// Pr(N(S, x^rec) >= 1); with the mutation floor it bounds Pr(N(S, x^mut) >= 1).
double small_count_lower_bound(std::size_t count_s0, std::size_t m, double alpha, double beta = 1.0);

/// m (pr_preserve (1 - eps) P + pr_create max(0, 1 - P (1 + eps))), at least 0.
double mu_lower_bound(const SchemaBoundInput& input);

/// Lower bound on Pr(N(S, x^mut) >= (1 - delta) mu_lower):
/// (1 - exp(-delta^2 mu/2)) (1 - exp(-eps^2 m P/2) - exp(-eps^2 m P/3)), in [0, 1].
double after_mutation_tail_bound(const SchemaBoundInput& input);

enum class SchemaTheoremForm {
  /// conditional * after_mutation_tail_bound
  chernoff,
  /// conditional * small_count_lower_bound(count_s0, m, alpha, beta)
  small_count,
};

/// Lower bound on Pr(N(S, z) >= n_threshold) after selection. The caller
/// supplies the selection conditional Pr(N(S, z) >= n | mutation-stage event),
/// which depends on the selection rule.
double schema_theorem_bound(const SchemaBoundInput& input, double selection_conditional, std::size_t n_threshold,
                            SchemaTheoremForm form = SchemaTheoremForm::chernoff);

/// Lower bound on E(N(S, z)) at a caller-chosen k in [0, m / ((1 - delta) mu)]:
/// ceil(k (1 - delta) mu) * tail bound * conditional.
double expected_count_lower_bound(const SchemaBoundInput& input, double k, double selection_conditional);

enum class Stage { recombination, mutation };

struct CountDistribution {
  /// probabilities[c] = Pr(N = c), c = 0..m.
  std::vector<double> probabilities;
  /// Pr(position k holds an S-member), k = 0..m-1.
  std::vector<double> position_marginals;
  /// Monte Carlo sample count; absent for exact enumeration.
  std::optional<std::size_t> samples;
  /// Configuration atoms enumerated per position (exact enumeration only).
  std::uint64_t atoms = 0;

  double mean() const;
  /// Pr(N >= c).
  double at_least(double c) const;
  /// Pr(N < x).
  double below(double x) const;
  /// Pr(N > x).
  double above(double x) const;
};

inline constexpr std::uint64_t kDefaultAtomLimit = 10'000'000;

/// Distribution of the number of successes among independent Bernoulli trials.
std::vector<double> poisson_binomial(const std::vector<double>& success);

namespace detail {

template <class Family>
std::uint64_t enumerable_size(const Family& family, std::uint64_t limit) {
  const auto size = family.size();
  if (!size) throw UnsupportedConfiguration("operator family is not enumerable");
  if (*size > limit) throw OracleOverflow("operator family has more operators than the enumeration limit");
  return *size;
}

inline std::vector<std::pair<std::size_t, std::size_t>> ordered_pairs(std::size_t m, PairSampling mode) {
  if (mode == PairSampling::without_replacement && m < 2) {
    throw InvalidPopulation("sampling pairs without replacement needs m >= 2");
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (mode == PairSampling::without_replacement && i == j) continue;
      pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

/// Calls visit(child, weight) for every recombination outcome of the pair
/// (family choice x operator), weight being the joint probability.
template <class Genome, class Visit>
void for_each_recombination(const Population<Genome>& population, std::size_t i, std::size_t j,
                            const StrategyProfile<Genome>& strategy, const ProblemHooks<Genome>& hooks,
                            std::uint64_t limit, Visit&& visit) {
  const auto& first = population.members.at(i);
  const auto& second = population.members.at(j);
  const FamilyChoice choice = strategy.recombination_family_rule(population, first, second);
  validate_family_choice(choice, strategy.recombination_families);
  for (const auto& [w, pw] : choice) {
    if (pw == 0.0) continue;
    const auto& family = *strategy.recombination_families.at(w);
    const std::uint64_t size = enumerable_size(family, limit);
    for (std::uint64_t op = 0; op < size; ++op) {
      const double p = family.probability(op);
      if (p == 0.0) continue;
      visit(hooks.evaluate(family.apply(op, first.genome, second.genome)), pw * p);
    }
  }
}

template <class Genome, class Visit>
void for_each_mutation(const Population<Genome>& population, const Individual<Genome>& x,
                       const StrategyProfile<Genome>& strategy, const ProblemHooks<Genome>& hooks, std::uint64_t limit,
                       Visit&& visit) {
  const FamilyChoice choice = strategy.mutation_family_rule(population, x);
  validate_family_choice(choice, strategy.mutation_families);
  for (const auto& [w, pw] : choice) {
    if (pw == 0.0) continue;
    const auto& family = *strategy.mutation_families.at(w);
    const std::uint64_t size = enumerable_size(family, limit);
    for (std::uint64_t op = 0; op < size; ++op) {
      const double p = family.probability(op);
      if (p == 0.0) continue;
      visit(hooks.evaluate(family.apply(op, x.genome)), pw * p);
    }
  }
}

}  // namespace detail

/// Pr(S | (x_i, x_j)): total probability over families and operators that the
/// pair's offspring lands in S. Throws UnsupportedConfiguration when a family
/// in the support is not enumerable, OracleOverflow when it has more than
/// `limit` operators.
template <class Genome>
double pair_success_probability(const SchemaPredicate<Genome>& schema, const Population<Genome>& population,
                                std::size_t i, std::size_t j, const StrategyProfile<Genome>& strategy,
                                const ProblemHooks<Genome>& hooks, std::uint64_t limit = kDefaultAtomLimit) {
  double total = 0.0;
  detail::for_each_recombination(population, i, j, strategy, hooks, limit,
                                 [&](const Individual<Genome>& child, double p) {
                                   if (schema.contains(child)) total += p;
                                 });
  return total;
}

/// Mean of pair_success_probability over the ordered pairs the sampling mode
/// can draw: all m^2 with replacement, the m(m-1) with i != j without.
template <class Genome>
double average_success_probability(const SchemaPredicate<Genome>& schema, const Population<Genome>& population,
                                   const StrategyProfile<Genome>& strategy, const ProblemHooks<Genome>& hooks,
                                   PairSampling mode, std::uint64_t limit = kDefaultAtomLimit) {
  const auto pairs = detail::ordered_pairs(population.size(), mode);
  double sum = 0.0;
  for (const auto& [i, j] : pairs) sum += pair_success_probability(schema, population, i, j, strategy, hooks, limit);
  return sum / static_cast<double>(pairs.size());
}

/// Pr(S | x): probability that the sampled mutation operator maps x into S.
template <class Genome>
double mutation_success_probability(const SchemaPredicate<Genome>& schema, const Population<Genome>& population,
                                    const Individual<Genome>& x, const StrategyProfile<Genome>& strategy,
                                    const ProblemHooks<Genome>& hooks, std::uint64_t limit = kDefaultAtomLimit) {
  double total = 0.0;
  detail::for_each_mutation(population, x, strategy, hooks, limit, [&](const Individual<Genome>& y, double p) {
    if (schema.contains(y)) total += p;
  });
  return total;
}

/// alpha: the least Pr(S | (x_i, x_j)) over drawable pairs whose first parent
/// is in S_0. Returns nullopt when no parent is in S_0.
template <class Genome>
std::optional<double> recombination_success_floor(const SchemaPredicate<Genome>& schema,
                                                  const SchemaPredicate<Genome>& s0,
                                                  const Population<Genome>& population,
                                                  const StrategyProfile<Genome>& strategy,
                                                  const ProblemHooks<Genome>& hooks, PairSampling mode,
                                                  std::uint64_t limit = kDefaultAtomLimit) {
  std::optional<double> floor;
  for (const auto& [i, j] : detail::ordered_pairs(population.size(), mode)) {
    if (!s0.contains(population.members[i])) continue;
    const double p = pair_success_probability(schema, population, i, j, strategy, hooks, limit);
    floor = floor ? std::min(*floor, p) : p;
  }
  return floor;
}

struct MutationMinima {
  /// min Pr(S | x) over S-members that recombination can produce (1 if none).
  double pr_preserve = 1.0;
  /// min Pr(S | x) over non-members that recombination can produce (1 if none).
  double pr_create = 1.0;
};

/// True minima of the mutation transition probabilities over the support of
/// x^rec, so that the resulting mu_lower_bound is a valid lower bound.
template <class Genome>
MutationMinima mutation_minima(const SchemaPredicate<Genome>& schema, const Population<Genome>& population,
                               const StrategyProfile<Genome>& strategy, const ProblemHooks<Genome>& hooks,
                               PairSampling mode, std::uint64_t limit = kDefaultAtomLimit) {
  MutationMinima out;
  for (const auto& [i, j] : detail::ordered_pairs(population.size(), mode)) {
    detail::for_each_recombination(population, i, j, strategy, hooks, limit,
                                   [&](const Individual<Genome>& child, double) {
                                     const double p =
                                         mutation_success_probability(schema, population, child, strategy, hooks, limit);
                                     auto& slot = schema.contains(child) ? out.pr_preserve : out.pr_create;
                                     slot = std::min(slot, p);
                                   });
  }
  return out;
}

/// Exact distribution of N(S, x^rec) or N(S, x^mut) by enumerating, for each
/// position, every atom of the sampling process (ordered pair draw, family,
/// operator, and for the mutation stage the mutation family and operator).
/// Positions draw independently, so the count is the convolution of the
/// per-position Bernoulli outcomes. Atoms are visited in canonical order:
/// pair (row-major), family index, operator index.
/// Throws OracleOverflow when a position needs more than `atom_limit` atoms.
template <class Genome>
CountDistribution exact_count_distribution(const SchemaPredicate<Genome>& schema, const Population<Genome>& population,
                                           const StrategyProfile<Genome>& strategy, const ProblemHooks<Genome>& hooks,
                                           Stage stage, std::uint64_t atom_limit = kDefaultAtomLimit) {
  const std::size_t m = population.size();
  const auto pairs = detail::ordered_pairs(m, strategy.pair_sampling);
  const double pair_weight = 1.0 / static_cast<double>(pairs.size());
  std::uint64_t atoms = 0;
  auto count_atom = [&] {
    if (++atoms > atom_limit) throw OracleOverflow("count-distribution oracle exceeded its atom limit");
  };

  double success = 0.0;
  for (const auto& [i, j] : pairs) {
    detail::for_each_recombination(
        population, i, j, strategy, hooks, atom_limit, [&](const Individual<Genome>& child, double p_rec) {
          if (stage == Stage::recombination) {
            count_atom();
            if (schema.contains(child)) success += pair_weight * p_rec;
            return;
          }
          detail::for_each_mutation(population, child, strategy, hooks, atom_limit,
                                    [&](const Individual<Genome>& mutant, double p_mut) {
                                      count_atom();
                                      if (schema.contains(mutant)) success += pair_weight * p_rec * p_mut;
                                    });
        });
  }
  CountDistribution out;
  out.position_marginals.assign(m, success);
  out.probabilities = poisson_binomial(out.position_marginals);
  out.atoms = atoms;
  return out;
}

/// Empirical distribution of the count from `samples` independent runs of the
/// engine's own recombination (and mutation) stages.
template <class Genome>
CountDistribution monte_carlo_count_distribution(const SchemaPredicate<Genome>& schema,
                                                 const Population<Genome>& population,
                                                 const StrategyProfile<Genome>& strategy,
                                                 const ProblemHooks<Genome>& hooks, Stage stage, std::size_t samples,
                                                 Rng& rng) {
  if (samples == 0) throw DomainError("Monte Carlo estimation needs at least one sample");
  const std::size_t m = population.size();
  std::vector<std::size_t> counts(m + 1, 0);
  std::vector<std::size_t> hits(m, 0);
  for (std::size_t s = 0; s < samples; ++s) {
    auto recombined = recombination_stage(population, strategy, hooks, rng);
    const auto& stage_out = stage == Stage::recombination
                                ? recombined
                                : mutation_stage<Genome>(population, recombined, strategy, hooks, rng);
    std::size_t c = 0;
    for (std::size_t k = 0; k < m; ++k) {
      if (schema.contains(stage_out[k])) {
        ++c;
        ++hits[k];
      }
    }
    ++counts[c];
  }
  CountDistribution out;
  out.samples = samples;
  for (const auto c : counts) out.probabilities.push_back(static_cast<double>(c) / static_cast<double>(samples));
  for (const auto h : hits) out.position_marginals.push_back(static_cast<double>(h) / static_cast<double>(samples));
  return out;
}

}  // namespace hybridea::schema
