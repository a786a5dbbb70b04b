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

#include "hybridea/scheduling_strategy.hpp"

#include <algorithm>
#include <numeric>

namespace hybridea::scheduling {

std::optional<std::uint64_t> factorial(std::size_t k) {
  if (k > 20) return std::nullopt;
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= k; ++i) f *= i;
  return f;
}

std::vector<int> permutation_from_rank(std::uint64_t rank, std::size_t k) {
  const auto total = factorial(k);
  if (!total || rank >= *total) throw DomainError("permutation rank out of range");
  std::vector<int> pool(k);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> out;
  out.reserve(k);
  for (std::size_t i = k; i > 0; --i) {
    const std::uint64_t block = *factorial(i - 1);
    const auto pick = static_cast<std::size_t>(rank / block);
    rank %= block;
    out.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

std::uint64_t permutation_rank(std::span<const int> perm) {
  const std::size_t k = perm.size();
  if (!factorial(k)) throw DomainError("permutation too long to rank");
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < k; ++i) {
    std::uint64_t smaller = 0;
    for (std::size_t j = i + 1; j < k; ++j) smaller += perm[j] < perm[i] ? 1 : 0;
    rank += smaller * *factorial(k - 1 - i);
  }
  return rank;
}

PrefixRecombinationFamily::PrefixRecombinationFamily(std::size_t n, int level) : n_(n), level_(level) {
  if (level < 0 || static_cast<std::size_t>(level) > n) throw DomainError("recombination level out of range");
}

std::optional<std::uint64_t> PrefixRecombinationFamily::size() const {
  return factorial(n_ - static_cast<std::size_t>(level_));
}

Permutation PrefixRecombinationFamily::apply(std::uint64_t op, const Permutation& first,
                                             const Permutation& second) const {
  const auto zeta = permutation_from_rank(op, n_ - static_cast<std::size_t>(level_));
  return recombine(first, second, level_, zeta);
}

Permutation PrefixRecombinationFamily::sample_apply(const Permutation& first, const Permutation& second,
                                                    Rng& rng) const {
  std::vector<int> zeta(n_ - static_cast<std::size_t>(level_));
  std::iota(zeta.begin(), zeta.end(), 0);
  std::shuffle(zeta.begin(), zeta.end(), rng);
  return recombine(first, second, level_, zeta);
}

RepositioningMutationFamily::RepositioningMutationFamily(std::shared_ptr<const JacksonProblem> problem, int level)
    : problem_(std::move(problem)), level_(level) {
  if (level < 0 || static_cast<std::size_t>(level) > problem_->size()) {
    throw DomainError("mutation level out of range");
  }
}

std::optional<std::uint64_t> RepositioningMutationFamily::size() const {
  const auto n = static_cast<std::uint64_t>(problem_->size());
  return n * n;
}

Permutation RepositioningMutationFamily::apply(std::uint64_t op, const Permutation& x) const {
  const auto n = static_cast<std::uint64_t>(problem_->size());
  if (op >= n * n) throw DomainError("mutation operator index out of range");
  return problem_->mutate(x, static_cast<int>(op / n), static_cast<int>(op % n), level_);
}

Permutation RepositioningMutationFamily::sample_apply(const Permutation& x, Rng& rng) const {
  std::uniform_int_distribution<int> pos(0, static_cast<int>(problem_->size()) - 1);
  const int a = pos(rng);
  const int b = pos(rng);
  return problem_->mutate(x, a, b, level_);
}

ProblemHooks<Permutation> make_hooks(std::shared_ptr<const JacksonProblem> problem) {
  ProblemHooks<Permutation> hooks;
  hooks.aux_level = [problem](const Permutation& p) { return problem->aux_fitness(p); };
  hooks.objective = [problem](const Permutation& p) {
    const auto& inst = problem->instance();
    return static_cast<double>(lateness_ticks(inst, p)) / static_cast<double>(inst.tick_scale());
  };
  return hooks;
}

StrategyProfile<Permutation> make_hybrid_strategy(std::shared_ptr<const JacksonProblem> problem, PairSampling pairs) {
  StrategyProfile<Permutation> strategy;
  const auto n = static_cast<int>(problem->size());
  for (int level = 0; level <= n; ++level) {
    strategy.recombination_families.emplace(level,
                                            std::make_shared<PrefixRecombinationFamily>(problem->size(), level));
    strategy.mutation_families.emplace(level, std::make_shared<RepositioningMutationFamily>(problem, level));
  }
  strategy.recombination_family_rule = [](const Population<Permutation>&, const Individual<Permutation>& first,
                                          const Individual<Permutation>&) {
    return FamilyChoice{{first.aux_level, 1.0}};
  };
  strategy.mutation_family_rule = [](const Population<Permutation>&, const Individual<Permutation>& x) {
    return FamilyChoice{{x.aux_level, 1.0}};
  };
  strategy.pair_sampling = pairs;
  strategy.selection_rule = [](const Population<Permutation>& parents, const Population<Permutation>& offspring) {
    return hybrid_elitist_select(parents, offspring);
  };
  strategy.selection_name = "hybrid-elitist";
  return strategy;
}

Population<Permutation> random_population(const ProblemHooks<Permutation>& hooks, std::size_t n, std::size_t m,
                                          Rng& rng) {
  Population<Permutation> pop;
  pop.members.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    Permutation p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    pop.members.push_back(hooks.evaluate(std::move(p)));
  }
  return pop;
}

}  // namespace hybridea::scheduling
