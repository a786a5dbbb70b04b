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

/// @file drift_bounds.hpp
/// @brief Variable additive drift bounds on the time to reach the top
/// auxiliary level, and an exact hitting-time oracle for small chains.
///
/// Levels follow the population's AuxMax: l_k bounds from below the
/// probability of leaving level k upward, for k = 0..M-1. A population at
/// AuxMax = M - d has distance d to the target, so the bound for distance d
/// sums 1/l_k over the last d levels, k = M-d..M-1.

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hybridea/ea_engine.hpp"

namespace hybridea::drift {

struct LevelImprovement {
  /// (1 - (1 - 1/m)^m) * p_rec * p_mut
  double finite_population = 0.0;
  /// (1 - e^-1) * p_rec * p_mut
  double limit = 0.0;
};

/// Both forms of the per-level improvement bound. Throws DegenerateDesign when
/// a probability is zero and DomainError for m < 2 or probabilities outside (0,1].
LevelImprovement level_improvement_bound(std::size_t m, double p_rec, double p_mut);

class DriftLevelTable {
 public:
  /// bounds[k] = l_k for k = 0..M-1. Each entry must lie in (0, 1].
  DriftLevelTable(std::vector<double> bounds, std::size_t population_size);

  std::size_t top_level() const noexcept { return bounds_.size(); }
  std::size_t population_size() const noexcept { return m_; }
  double at(std::size_t level) const { return bounds_.at(level); }
  std::span<const double> bounds() const noexcept { return bounds_; }

 private:
  std::vector<double> bounds_;
  std::size_t m_;
};

/// Table of l_k(m) for the scheduling design: p_rec(k) = 1/(n-k), p_mut = 1.
DriftLevelTable scheduling_level_table(std::size_t n, std::size_t m);

/// Sum of 1/l_k over levels [from, to).
double level_range_bound(const DriftLevelTable& table, std::size_t from, std::size_t to);

/// Expected-time bound from distance `start_distance` (= M - AuxMax).
double variable_drift_bound(const DriftLevelTable& table, std::size_t start_distance);

struct RuntimeBoundReport {
  double drift_bound = 0.0;
  /// constant * n^(gamma + lambda), the top-level walk term.
  double top_level_walk_bound = 0.0;
  double total = 0.0;
  double gamma = 0.0;
  double lambda = 0.0;
  double walk_constant = 1.0;
};

RuntimeBoundReport total_runtime_bound(const DriftLevelTable& table, std::size_t start_distance, std::size_t n,
                                       double gamma, double lambda, double walk_constant = 1.0);

/// Finite Markov chain with a target set and an integer distance function.
struct ChainSpec {
  std::vector<std::vector<double>> transitions;
  std::vector<std::size_t> target;
  /// D(state); D = 0 exactly on the target set.
  std::vector<int> distance;

  std::size_t size() const noexcept { return transitions.size(); }
};

/// Checks row sums, target indices and the distance/target correspondence.
/// Throws DomainError on violation.
void validate_chain(const ChainSpec& chain);

/// Expected hitting time of the target set from every state, by a sparse
/// direct solve of E = 1 + P E off the target, E = 0 on it.
/// Throws UnreachableTarget if some state cannot reach the target.
std::vector<double> exact_expected_hitting_time(const ChainSpec& chain);

/// D(x) - sum_y p(x,y) D(y) for every state.
std::vector<double> chain_drift(const ChainSpec& chain);

/// Tightest table for which the per-level drift condition holds: indexing by
/// distance d = M - k, l_{M-d} = min drift over non-target states with D >= d.
/// Returns nullopt when some non-target state has non-positive drift.
std::optional<DriftLevelTable> tightest_level_table(const ChainSpec& chain);

/// True when every non-target state x satisfies drift(x) >= l_{M-d} for every
/// d <= D(x).
bool satisfies_drift_condition(const ChainSpec& chain, const DriftLevelTable& table);

/// Text format: one row of transition probabilities per line, then a line
/// "target: i j ..." and optionally "distance: d0 d1 ...". '#' starts a comment.
ChainSpec parse_chain(std::istream& in);
std::string format_chain(const ChainSpec& chain);

struct HittingSummary {
  std::size_t runs = 0;
  std::size_t hits = 0;
  std::size_t misses = 0;
  std::optional<double> mean;
  std::optional<double> median;
  std::optional<std::int64_t> max;
};

/// Aggregates first-hit generations; absent entries count as misses.
HittingSummary summarize_hits(std::span<const std::optional<std::int64_t>> hits);

struct EmpiricalHittingTimes {
  HittingSummary top_level;
  HittingSummary satisfactory;
};

template <class Genome>
EmpiricalHittingTimes measure_empirical_hitting_times(std::span<const RunTrace<Genome>> traces) {
  if (traces.empty()) throw DomainError("no traces to summarize");
  std::vector<std::optional<std::int64_t>> top;
  std::vector<std::optional<std::int64_t>> sat;
  for (const auto& t : traces) {
    top.push_back(t.top_level_hit);
    sat.push_back(t.satisfactory_hit);
  }
  return {summarize_hits(top), summarize_hits(sat)};
}

}  // namespace hybridea::drift
