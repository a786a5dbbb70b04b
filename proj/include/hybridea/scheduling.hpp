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

/// @file scheduling.hpp
/// @brief Single-machine scheduling with release and delivery times.
///
/// A schedule is a permutation of job indices (0-based internally). Jobs run
/// in permutation order without preemption; a job starts at the later of its
/// release time and the completion of its predecessor. The objective is the
/// maximal lateness J = max over jobs of (start + processing + delivery).
///
/// Long jobs are those with processing time at least eps * (total processing).
/// A repositioning map pins each long job to a schedule position; a schedule
/// is (k, eps, phi)-Jackson when its first k positions follow the extended
/// Jackson rule around those pins. The auxiliary fitness of a schedule is the
/// longest such prefix over all repositioning maps.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "hybridea/ea_engine.hpp"
#include "hybridea/errors.hpp"
#include "hybridea/rational.hpp"

namespace hybridea::scheduling {

struct Job {
  Rational release;
  Rational processing;
  Rational delivery;

  friend bool operator==(const Job&, const Job&) = default;
};

/// Position h of the schedule runs job perm[h].
using Permutation = std::vector<int>;

class SchedulingInstance {
 public:
  explicit SchedulingInstance(std::vector<Job> jobs);

  std::size_t size() const noexcept { return jobs_.size(); }
  const std::vector<Job>& jobs() const noexcept { return jobs_; }
  const Job& job(std::size_t i) const { return jobs_.at(i); }
  const Rational& total_processing() const noexcept { return total_processing_; }

  // Exact integer view: every time value multiplied by tick_scale().
  std::int64_t tick_scale() const noexcept { return scale_; }
  std::int64_t release_ticks(std::size_t i) const noexcept { return release_[i]; }
  std::int64_t processing_ticks(std::size_t i) const noexcept { return processing_[i]; }
  std::int64_t delivery_ticks(std::size_t i) const noexcept { return delivery_[i]; }
  std::int64_t total_processing_ticks() const noexcept { return total_ticks_; }
  Rational from_ticks(std::int64_t ticks) const { return Rational(ticks, scale_); }

  friend bool operator==(const SchedulingInstance& a, const SchedulingInstance& b) { return a.jobs_ == b.jobs_; }

 private:
  std::vector<Job> jobs_;
  Rational total_processing_;
  std::int64_t scale_ = 1;
  std::int64_t total_ticks_ = 0;
  std::vector<std::int64_t> release_;
  std::vector<std::int64_t> processing_;
  std::vector<std::int64_t> delivery_;
};

/// Throws DomainError unless `perm` is a permutation of {0, ..., n-1}.
void validate_permutation(std::span<const int> perm, std::size_t n);

struct Schedule {
  Permutation order;
  /// start[h] is the start time of the job at position h.
  std::vector<Rational> start;
  Rational lateness;
};

Schedule evaluate_schedule(const SchedulingInstance& instance, std::span<const int> perm);

/// Maximal lateness in ticks. `perm` is trusted to be valid.
std::int64_t lateness_ticks(const SchedulingInstance& instance, std::span<const int> perm);

struct EpsilonPartition {
  Rational eps;
  /// eps * total processing; jobs at or above it are long.
  Rational threshold;
  std::vector<bool> is_long;
  std::vector<int> long_jobs;
};

EpsilonPartition long_jobs(const SchedulingInstance& instance, const Rational& eps);

/// Injective map long job -> position (both 0-based).
using RepositioningMap = std::map<int, int>;

void validate_repositioning_map(const EpsilonPartition& partition, const RepositioningMap& phi, std::size_t n);

/// Every repositioning map for the partition, in lexicographic order of the
/// position tuple (long jobs in ascending index order).
std::vector<RepositioningMap> all_repositioning_maps(const EpsilonPartition& partition, std::size_t n);

/// Number of repositioning maps, n! / (n - |B|)!.
std::uint64_t repositioning_map_count(std::size_t n, std::size_t long_count);

/// Instance plus its long-job partition; everything the Jackson predicates
/// and the operator families need.
class JacksonProblem {
 public:
  JacksonProblem(std::shared_ptr<const SchedulingInstance> instance, const Rational& eps);

  const SchedulingInstance& instance() const noexcept { return *instance_; }
  std::shared_ptr<const SchedulingInstance> instance_ptr() const noexcept { return instance_; }
  const EpsilonPartition& partition() const noexcept { return partition_; }
  const Rational& eps() const noexcept { return partition_.eps; }
  std::size_t size() const noexcept { return instance_->size(); }
  bool is_long(int job) const noexcept { return partition_.is_long[static_cast<std::size_t>(job)]; }

  /// f_phi(perm): the largest k such that perm is (k, eps, phi)-Jackson.
  int prefix_level(const RepositioningMap& phi, std::span<const int> perm) const;

  /// auxFit(perm) = max over phi of f_phi(perm), by one left-to-right scan.
  int aux_fitness(std::span<const int> perm) const;

  /// Top-level schedule for phi: pinned positions hold their long jobs, every
  /// other position takes the extended-Jackson choice (ties: lowest index).
  Permutation jackson_schedule(const RepositioningMap& phi) const;

  /// The mutation operator M_{a,b}^level. Positions are 0-based, level in [0, n].
  Permutation mutate(std::span<const int> perm, int a, int b, int level) const;

  /// The long-job placement of a schedule, i.e. its repositioning class.
  RepositioningMap placement(std::span<const int> perm) const;

 private:
  std::shared_ptr<const SchedulingInstance> instance_;
  EpsilonPartition partition_;
};

/// The recombination operator F_zeta^level: keeps the first `level` entries of
/// `first`; the remaining jobs follow in the order they appear in `second`,
/// permuted by zeta (suffix slot l receives the zeta[l]-th of them).
Permutation recombine(std::span<const int> first, std::span<const int> second, int level,
                      std::span<const int> zeta);

/// J_perm <= (1 + eps) * J*.
bool satisfactory(const SchedulingInstance& instance, const Rational& eps, std::span<const int> perm,
                  const Rational& j_star);

/// Hybrid-elitist selection. The output keeps an individual of maximal
/// auxiliary level and one of minimal objective from parents and offspring
/// combined; remaining slots go to the best by (level desc, objective asc).
template <class Genome>
std::vector<Individual<Genome>> hybrid_elitist_select(const Population<Genome>& parents,
                                                      const Population<Genome>& offspring) {
  const std::size_t m = parents.size();
  if (offspring.size() != m) throw DomainError("parent and offspring populations differ in size");
  if (m < 2) throw InvalidPopulation("hybrid-elitist selection needs m >= 2");

  std::vector<const Individual<Genome>*> pool;
  pool.reserve(2 * m);
  for (const auto& x : parents.members) pool.push_back(&x);
  for (const auto& x : offspring.members) pool.push_back(&x);

  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pool[a]->aux_level != pool[b]->aux_level) return pool[a]->aux_level > pool[b]->aux_level;
    return pool[a]->objective < pool[b]->objective;
  });
  order.resize(m);

  std::size_t best = 0;
  for (std::size_t k = 1; k < pool.size(); ++k) {
    const auto& x = *pool[k];
    const auto& y = *pool[best];
    if (x.objective < y.objective || (x.objective == y.objective && x.aux_level > y.aux_level)) best = k;
  }
  if (std::find(order.begin(), order.end(), best) == order.end()) order.back() = best;

  std::vector<Individual<Genome>> selected;
  selected.reserve(m);
  for (const auto k : order) selected.push_back(*pool[k]);
  return selected;
}

struct DesignOptions {
  std::size_t max_n = 8;
  std::size_t max_long = 2;
  /// J* for condition 3; computed by the exact solver when absent.
  std::optional<Rational> j_star;
};

struct DesignReport {
  std::size_t n = 0;
  std::size_t long_count = 0;
  /// Condition 1: |Phi| against the polynomial bound n^(1/eps).
  std::uint64_t phi_count = 0;
  double phi_bound = 0.0;
  bool condition1 = false;
  /// Condition 2: levels are the integers 0..n.
  int level_min = 0;
  int level_max = 0;
  bool condition2 = false;
  /// Condition 3: best phi-constructed top-level schedule vs (1+eps) J*.
  std::optional<Rational> j_star;
  std::optional<Rational> best_top_level_lateness;
  bool condition3 = false;
  /// Condition 4: each phi-constructed top-level schedule reaches every
  /// repositioning class under repeated top-level mutations.
  std::size_t reachability_states = 0;
  bool condition4 = false;
  /// Exhaustive parts were skipped because the instance is too large.
  bool partial = false;
};

DesignReport check_design_conditions(const SchedulingInstance& instance, const Rational& eps,
                                     const DesignOptions& options = {});

}  // namespace hybridea::scheduling
