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

#include "hybridea/schema_bounds.hpp"

#include <cmath>

namespace hybridea::schema {
namespace {

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1]");
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double mixing_factor(const SchemaBoundInput& in) {
  const double mp = static_cast<double>(in.m) * in.P;
  const double e2 = in.eps * in.eps;
  return std::max(0.0, 1.0 - std::exp(-e2 * mp / 2.0) - std::exp(-e2 * mp / 3.0));
}

}  // namespace

void validate(const SchemaBoundInput& input) {
  if (input.m < 1) throw DomainError("population size must be positive");
  require_probability(input.P, "P");
  require_probability(input.pr_preserve, "pr_preserve");
  require_probability(input.pr_create, "pr_create");
  require_probability(input.delta, "delta");
  require_probability(input.eps, "eps");
  require_probability(input.alpha, "alpha");
  require_probability(input.beta, "beta");
  if (input.count_s0 > input.m) throw DomainError("count_s0 exceeds the population size");
}

TailBounds chernoff_count_bounds(double P, std::size_t m, double delta) {
  require_probability(P, "P");
  require_probability(delta, "delta");
  if (m < 1) throw DomainError("population size must be positive");
  const double exponent = delta * delta * static_cast<double>(m) * P;
  return {clamp01(std::exp(-exponent / 2.0)), clamp01(std::exp(-exponent / 3.0))};
}

double small_count_lower_bound(std::size_t count_s0, std::size_t m, double alpha, double beta) {
  if (m < 1) throw DomainError("population size must be positive");
  if (count_s0 > m) throw DomainError("count_s0 exceeds the population size");
  require_probability(alpha, "alpha");
  require_probability(beta, "beta");
  if (count_s0 == 0) return 0.0;
  const double miss = std::pow(1.0 - static_cast<double>(count_s0) / static_cast<double>(m), static_cast<double>(m));
  return clamp01((1.0 - miss) * alpha * beta);
}

double mu_lower_bound(const SchemaBoundInput& input) {
  validate(input);
  const double keep = input.pr_preserve * (1.0 - input.eps) * input.P;
  const double create = input.pr_create * std::max(0.0, 1.0 - input.P * (1.0 + input.eps));
  return std::max(0.0, static_cast<double>(input.m) * (keep + create));
}

double after_mutation_tail_bound(const SchemaBoundInput& input) {
  const double mu = mu_lower_bound(input);
  if (mu == 0.0) return 0.0;
  const double concentration = 1.0 - std::exp(-input.delta * input.delta * mu / 2.0);
  return clamp01(concentration * mixing_factor(input));
}

double schema_theorem_bound(const SchemaBoundInput& input, double selection_conditional, std::size_t n_threshold,
                            SchemaTheoremForm form) {
  validate(input);
  require_probability(selection_conditional, "selection_conditional");
  if (n_threshold < 1 || n_threshold > input.m) throw DomainError("count threshold must lie in [1, m]");
  const double stage = form == SchemaTheoremForm::chernoff
                           ? after_mutation_tail_bound(input)
                           : small_count_lower_bound(input.count_s0, input.m, input.alpha, input.beta);
  return clamp01(selection_conditional * stage);
}

double expected_count_lower_bound(const SchemaBoundInput& input, double k, double selection_conditional) {
  require_probability(selection_conditional, "selection_conditional");
  const double mu = mu_lower_bound(input);
  const double level = (1.0 - input.delta) * mu;
  if (k < 0.0 || (level > 0.0 && k > static_cast<double>(input.m) / level)) {
    throw DomainError("k outside [0, m / ((1 - delta) mu)]");
  }
  return std::ceil(k * level) * after_mutation_tail_bound(input) * selection_conditional;
}

std::vector<double> poisson_binomial(const std::vector<double>& success) {
  std::vector<double> dist{1.0};
  for (const double p : success) {
    std::vector<double> next(dist.size() + 1, 0.0);
    for (std::size_t c = 0; c < dist.size(); ++c) {
      next[c] += dist[c] * (1.0 - p);
      next[c + 1] += dist[c] * p;
    }
    dist = std::move(next);
  }
  return dist;
}

double CountDistribution::mean() const {
  double sum = 0.0;
  for (std::size_t c = 0; c < probabilities.size(); ++c) sum += static_cast<double>(c) * probabilities[c];
  return sum;
}

double CountDistribution::at_least(double c) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    if (static_cast<double>(k) >= c) sum += probabilities[k];
  }
  return sum;
}

double CountDistribution::below(double x) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    if (static_cast<double>(k) < x) sum += probabilities[k];
  }
  return sum;
}

double CountDistribution::above(double x) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    if (static_cast<double>(k) > x) sum += probabilities[k];
  }
  return sum;
}

}  // namespace hybridea::schema
