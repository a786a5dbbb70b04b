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

#include "hybridea/drift_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iomanip>
#include <limits>
#include <sstream>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "hybridea/errors.hpp"

namespace hybridea::drift {

LevelImprovement level_improvement_bound(std::size_t m, double p_rec, double p_mut) {
  if (m < 2) throw DomainError("population size must be at least 2");
  for (const double p : {p_rec, p_mut}) {
    if (p == 0.0) throw DegenerateDesign("improvement probability is zero");
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("improvement probability outside (0, 1]");
  }
  const double md = static_cast<double>(m);
  // 1 - (1 - 1/m)^m, computed without cancellation for large m.
  const double at_least_once = -std::expm1(md * std::log1p(-1.0 / md));
  return {at_least_once * p_rec * p_mut, -std::expm1(-1.0) * p_rec * p_mut};
}

DriftLevelTable::DriftLevelTable(std::vector<double> bounds, std::size_t population_size)
    : bounds_(std::move(bounds)), m_(population_size) {
  if (bounds_.empty()) throw DomainError("drift table needs at least one level");
  for (const double l : bounds_) {
    if (!(l > 0.0 && l <= 1.0)) throw DomainError("drift level bounds must lie in (0, 1]");
  }
}

DriftLevelTable scheduling_level_table(std::size_t n, std::size_t m) {
  if (n == 0) throw DomainError("instance size must be positive");
  std::vector<double> bounds;
  bounds.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    bounds.push_back(level_improvement_bound(m, 1.0 / static_cast<double>(n - k), 1.0).finite_population);
  }
  return DriftLevelTable(std::move(bounds), m);
}

double level_range_bound(const DriftLevelTable& table, std::size_t from, std::size_t to) {
  if (from > to || to > table.top_level()) throw DomainError("level range outside the table");
  double sum = 0.0;
  for (std::size_t k = from; k < to; ++k) sum += 1.0 / table.at(k);
  return sum;
}

double variable_drift_bound(const DriftLevelTable& table, std::size_t start_distance) {
  const std::size_t top = table.top_level();
  if (start_distance > top) throw DomainError("start distance exceeds the number of levels");
  return level_range_bound(table, top - start_distance, top);
}

RuntimeBoundReport total_runtime_bound(const DriftLevelTable& table, std::size_t start_distance, std::size_t n,
                                       double gamma, double lambda, double walk_constant) {
  if (n < 1) throw DomainError("instance size must be positive");
  if (gamma < 0.0 || lambda < 0.0 || walk_constant < 0.0) throw DomainError("negative walk parameters");
  RuntimeBoundReport report;
  report.drift_bound = variable_drift_bound(table, start_distance);
  report.top_level_walk_bound = walk_constant * std::pow(static_cast<double>(n), gamma + lambda);
  report.total = report.drift_bound + report.top_level_walk_bound;
  report.gamma = gamma;
  report.lambda = lambda;
  report.walk_constant = walk_constant;
  return report;
}

void validate_chain(const ChainSpec& chain) {
  const std::size_t n = chain.size();
  if (n == 0) throw DomainError("chain has no states");
  if (chain.distance.size() != n) throw DomainError("distance vector size differs from the state count");
  std::vector<bool> is_target(n, false);
  for (const auto t : chain.target) {
    if (t >= n) throw DomainError("target state out of range");
    is_target[t] = true;
  }
  for (std::size_t x = 0; x < n; ++x) {
    const auto& row = chain.transitions[x];
    if (row.size() != n) throw DomainError("transition matrix is not square");
    double sum = 0.0;
    for (const double p : row) {
      if (!(p >= 0.0 && p <= 1.0)) throw DomainError("transition probability outside [0, 1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw DomainError("row " + std::to_string(x) + " does not sum to 1");
    if (chain.distance[x] < 0) throw DomainError("negative distance");
    if ((chain.distance[x] == 0) != is_target[x]) throw DomainError("distance must vanish exactly on the target");
  }
}

std::vector<double> exact_expected_hitting_time(const ChainSpec& chain) {
  validate_chain(chain);
  const std::size_t n = chain.size();
  if (n > 10000) throw OracleOverflow("hitting-time oracle limited to 10^4 states");
  std::vector<bool> is_target(n, false);
  for (const auto t : chain.target) is_target[t] = true;

  // Backward reachability from the target.
  std::vector<bool> reaches(n, false);
  std::deque<std::size_t> queue;
  for (std::size_t x = 0; x < n; ++x) {
    if (is_target[x]) {
      reaches[x] = true;
      queue.push_back(x);
    }
  }
  while (!queue.empty()) {
    const std::size_t y = queue.front();
    queue.pop_front();
    for (std::size_t x = 0; x < n; ++x) {
      if (!reaches[x] && chain.transitions[x][y] > 0.0) {
        reaches[x] = true;
        queue.push_back(x);
      }
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (!reaches[x]) throw UnreachableTarget("state " + std::to_string(x) + " cannot reach the target set");
  }

  std::vector<std::size_t> index(n, n);
  std::vector<std::size_t> free_states;
  for (std::size_t x = 0; x < n; ++x) {
    if (!is_target[x]) {
      index[x] = free_states.size();
      free_states.push_back(x);
    }
  }
  std::vector<double> expected(n, 0.0);
  const auto k = static_cast<Eigen::Index>(free_states.size());
  if (k == 0) return expected;

  // (I - Q) E = 1 over the non-target states.
  std::vector<Eigen::Triplet<double>> entries;
  for (const auto x : free_states) {
    const auto row = static_cast<Eigen::Index>(index[x]);
    entries.emplace_back(row, row, 1.0);
    for (const auto y : free_states) {
      const double p = chain.transitions[x][y];
      if (p != 0.0) entries.emplace_back(row, static_cast<Eigen::Index>(index[y]), -p);
    }
  }
  Eigen::SparseMatrix<double> system(k, k);
  system.setFromTriplets(entries.begin(), entries.end());
  system.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
  solver.compute(system);
  if (solver.info() != Eigen::Success) throw UnreachableTarget("hitting-time system is singular");
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(k);
  const Eigen::VectorXd solution = solver.solve(ones);
  const double residual = (system * solution - ones).lpNorm<Eigen::Infinity>();
  if (!(residual <= 1e-9 * std::max(1.0, solution.lpNorm<Eigen::Infinity>()))) {
    throw UnreachableTarget("hitting-time solve did not converge (residual " + std::to_string(residual) + ")");
  }
  for (const auto x : free_states) expected[x] = solution(static_cast<Eigen::Index>(index[x]));
  return expected;
}

std::vector<double> chain_drift(const ChainSpec& chain) {
  std::vector<double> drift(chain.size(), 0.0);
  for (std::size_t x = 0; x < chain.size(); ++x) {
    double next = 0.0;
    for (std::size_t y = 0; y < chain.size(); ++y) next += chain.transitions[x][y] * chain.distance[y];
    drift[x] = chain.distance[x] - next;
  }
  return drift;
}

std::optional<DriftLevelTable> tightest_level_table(const ChainSpec& chain) {
  validate_chain(chain);
  const auto drift = chain_drift(chain);
  const int top = *std::max_element(chain.distance.begin(), chain.distance.end());
  if (top == 0) return std::nullopt;
  std::vector<double> bounds(static_cast<std::size_t>(top), 1.0);
  for (int d = 1; d <= top; ++d) {
    double lowest = 1.0;
    for (std::size_t x = 0; x < chain.size(); ++x) {
      if (chain.distance[x] >= d) lowest = std::min(lowest, drift[x]);
    }
    if (!(lowest > 0.0)) return std::nullopt;
    bounds[static_cast<std::size_t>(top - d)] = lowest;
  }
  return DriftLevelTable(std::move(bounds), 0);
}

bool satisfies_drift_condition(const ChainSpec& chain, const DriftLevelTable& table) {
  const auto drift = chain_drift(chain);
  const auto top = static_cast<int>(table.top_level());
  for (std::size_t x = 0; x < chain.size(); ++x) {
    const int d = chain.distance[x];
    if (d == 0) continue;
    if (d > top) return false;
    for (int j = 1; j <= d; ++j) {
      if (drift[x] < table.at(static_cast<std::size_t>(top - j))) return false;
    }
  }
  return true;
}

ChainSpec parse_chain(std::istream& in) {
  ChainSpec chain;
  bool have_target = false;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string head;
    if (!(fields >> head)) continue;
    if (head == "target:") {
      std::size_t t;
      while (fields >> t) chain.target.push_back(t);
      have_target = true;
    } else if (head == "distance:") {
      int d;
      while (fields >> d) chain.distance.push_back(d);
    } else {
      std::istringstream row_fields(line);
      std::vector<double> row;
      double p;
      while (row_fields >> p) row.push_back(p);
      if (!row_fields.eof()) throw DomainError("malformed chain row: " + line);
      chain.transitions.push_back(std::move(row));
    }
  }
  if (!have_target) throw DomainError("chain file lacks a 'target:' line");
  if (chain.distance.empty()) {
    // Default distance: 1 off the target.
    chain.distance.assign(chain.size(), 1);
    for (const auto t : chain.target) {
      if (t < chain.size()) chain.distance[t] = 0;
    }
  }
  validate_chain(chain);
  return chain;
}

std::string format_chain(const ChainSpec& chain) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (const auto& row : chain.transitions) {
    for (std::size_t y = 0; y < row.size(); ++y) out << (y ? " " : "") << row[y];
    out << '\n';
  }
  out << "target:";
  for (const auto t : chain.target) out << ' ' << t;
  out << "\ndistance:";
  for (const auto d : chain.distance) out << ' ' << d;
  out << '\n';
  return out.str();
}

HittingSummary summarize_hits(std::span<const std::optional<std::int64_t>> hits) {
  if (hits.empty()) throw DomainError("no traces to summarize");
  HittingSummary s;
  s.runs = hits.size();
  std::vector<std::int64_t> values;
  for (const auto& h : hits) {
    if (h) values.push_back(*h);
  }
  s.hits = values.size();
  s.misses = s.runs - s.hits;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (const auto v : values) sum += static_cast<double>(v);
  s.mean = sum / static_cast<double>(values.size());
  const std::size_t mid = values.size() / 2;
  s.median = values.size() % 2 ? static_cast<double>(values[mid])
                               : 0.5 * static_cast<double>(values[mid - 1] + values[mid]);
  s.max = values.back();
  return s;
}

}  // namespace hybridea::drift
