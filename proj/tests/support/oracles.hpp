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

// Independent brute-force oracles for the test suites. Nothing here calls the
// library code it is used to check.

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "hybridea/rational.hpp"
#include "hybridea/scheduling.hpp"

namespace oracle {

using hybridea::Rational;
using hybridea::scheduling::Job;
using hybridea::scheduling::SchedulingInstance;

/// Pr(Bin(m, p) < x).
double binomial_below(std::size_t m, double p, double x);
/// Pr(Bin(m, p) > x).
double binomial_above(std::size_t m, double p, double x);

/// Start times and lateness from the recurrence s_1 = r_1, s_k = max(r_k, s_{k-1} + p_{k-1}).
struct Timeline {
  std::vector<Rational> start;
  Rational lateness;
};
Timeline recompute(const std::vector<Job>& jobs, const std::vector<int>& perm);

/// Minimum lateness over all n! orders (no pruning).
Rational brute_optimum(const std::vector<Job>& jobs);

/// Long jobs by direct comparison p_i >= eps * sum(p).
std::vector<bool> long_mask(const std::vector<Job>& jobs, const Rational& eps);

/// All injective maps long job -> position.
std::vector<std::map<int, int>> enumerate_maps(const std::vector<bool>& is_long, std::size_t n);

/// Largest k such that perm is (k, eps, phi)-Jackson, directly from the definition.
int brute_prefix_level(const std::vector<Job>& jobs, const std::vector<bool>& is_long, const std::map<int, int>& phi,
                       const std::vector<int>& perm);

/// Maximum of brute_prefix_level over every repositioning map.
int brute_aux_fitness(const std::vector<Job>& jobs, const std::vector<bool>& is_long, const std::vector<int>& perm);

/// Random integer instance; optionally the last job is made long for eps <= 1/2.
std::vector<Job> random_jobs(std::mt19937_64& rng, std::size_t n, int max_release, int max_processing, int max_delivery,
                             bool plant_long = false);

std::vector<int> random_permutation(std::mt19937_64& rng, std::size_t n);

}  // namespace oracle
