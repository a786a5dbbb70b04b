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

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "hybridea/drift_bounds.hpp"
#include "hybridea/errors.hpp"

using namespace hybridea;
using namespace hybridea::drift;
using doctest::Approx;

TEST_CASE("level improvement bound") {
  const auto two = level_improvement_bound(2, 1.0, 1.0);
  CHECK(two.finite_population == Approx(0.75));
  CHECK(two.limit == Approx(1 - std::exp(-1.0)));
  CHECK(two.limit == Approx(0.6321).epsilon(1e-4));

  for (std::size_t n = 2; n <= 10; ++n) {
    for (std::size_t k = 0; k < n; ++k) {
      const double p = 1.0 / static_cast<double>(n - k);
      CHECK(level_improvement_bound(5, p, 1.0).finite_population == Approx((1 - std::pow(0.8, 5)) * p));
    }
  }

  double previous = 1.0;
  for (std::size_t m = 2; m <= 4096; m *= 2) {
    const auto b = level_improvement_bound(m, 0.5, 0.5);
    CHECK(b.finite_population < previous);
    CHECK(b.finite_population > b.limit);
    previous = b.finite_population;
  }
  CHECK(level_improvement_bound(1000000, 1.0, 1.0).finite_population == Approx(1 - std::exp(-1.0)).epsilon(1e-6));

  CHECK_THROWS_AS(level_improvement_bound(4, 0.0, 1.0), DegenerateDesign);
  CHECK_THROWS_AS(level_improvement_bound(4, 1.0, 0.0), DegenerateDesign);
  CHECK_THROWS_AS(level_improvement_bound(1, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(level_improvement_bound(4, 1.5, 1.0), DomainError);
}

TEST_CASE("drift level tables") {
  CHECK_THROWS_AS(DriftLevelTable({0.5, 0.0}, 2), DomainError);
  CHECK_THROWS_AS(DriftLevelTable({1.5}, 2), DomainError);
  CHECK_THROWS_AS(DriftLevelTable({}, 2), DomainError);
  const auto t = scheduling_level_table(4, 2);
  CHECK(t.top_level() == 4);
  CHECK(t.population_size() == 2);
  for (std::size_t k = 0; k < 4; ++k) CHECK(t.at(k) == Approx(0.75 / static_cast<double>(4 - k)));
}

TEST_CASE("variable drift bound") {
  const auto t = scheduling_level_table(4, 2);
  CHECK(variable_drift_bound(t, 0) == 0.0);
  CHECK(variable_drift_bound(t, 4) == Approx(40.0 / 3.0));
  CHECK(variable_drift_bound(t, 1) == Approx(4.0 / 3.0));
  CHECK_THROWS_AS(variable_drift_bound(t, 5), DomainError);

  const DriftLevelTable flat(std::vector<double>(6, 0.2), 3);
  for (std::size_t d = 0; d <= 6; ++d) CHECK(variable_drift_bound(flat, d) == Approx(static_cast<double>(d) / 0.2));

  const auto big = scheduling_level_table(8, 4);
  CHECK(variable_drift_bound(big, 8) == Approx(36.0 / (1 - std::pow(0.75, 4))));
  for (std::size_t a = 0; a <= 8; ++a) {
    for (std::size_t b = 0; a + b <= 8; ++b) {
      CHECK(variable_drift_bound(big, a + b) ==
            Approx(variable_drift_bound(big, a) + level_range_bound(big, 8 - a - b, 8 - a)));
    }
  }
}

TEST_CASE("total runtime bound") {
  const auto t = scheduling_level_table(8, 4);
  const auto r0 = total_runtime_bound(t, 8, 8, 0.0, 0.0);
  CHECK(r0.total == Approx(r0.drift_bound + 1.0));
  const auto r = total_runtime_bound(t, 8, 8, 2.0, 1.0);
  CHECK(r.top_level_walk_bound == Approx(512.0));
  CHECK(r.total == Approx(r.drift_bound + 512.0));
  CHECK(total_runtime_bound(t, 8, 8, 2.0, 1.0, 3.0).top_level_walk_bound == Approx(1536.0));
  const DriftLevelTable ones(std::vector<double>(8, 1.0), 4);
  CHECK(total_runtime_bound(ones, 8, 8, 0.0, 0.0).drift_bound == Approx(8.0));
  CHECK_THROWS_AS(total_runtime_bound(t, 8, 8, -1.0, 0.0), DomainError);
}

TEST_CASE("exact hitting times") {
  ChainSpec geometric{{{0.5, 0.5}, {0.0, 1.0}}, {1}, {1, 0}};
  const auto e = exact_expected_hitting_time(geometric);
  CHECK(e[0] == Approx(2.0));
  CHECK(e[1] == 0.0);

  ChainSpec ladder{{{0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}, {0.0, 0.0, 1.0}}, {2}, {2, 1, 0}};
  ladder.transitions = {{1.0, 0.0, 0.0}, {0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}};
  ladder.target = {0};
  ladder.distance = {0, 1, 2};
  const auto h = exact_expected_hitting_time(ladder);
  CHECK(h[2] == Approx(4.0).epsilon(1e-9));
  const auto table = tightest_level_table(ladder);
  REQUIRE(table);
  CHECK(satisfies_drift_condition(ladder, *table));
  CHECK(variable_drift_bound(*table, 2) == Approx(h[2]).epsilon(1e-9));
  CHECK(variable_drift_bound(*table, 1) == Approx(h[1]).epsilon(1e-9));

  ChainSpec trapped{{{0.0, 1.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}, {2}, {1, 1, 0}};
  CHECK_THROWS_AS(exact_expected_hitting_time(trapped), UnreachableTarget);
  CHECK_FALSE(tightest_level_table(trapped));

  ChainSpec bad_row{{{0.5, 0.4}, {0.0, 1.0}}, {1}, {1, 0}};
  CHECK_THROWS_AS(validate_chain(bad_row), DomainError);
  ChainSpec bad_distance{{{0.5, 0.5}, {0.0, 1.0}}, {1}, {0, 0}};
  CHECK_THROWS_AS(validate_chain(bad_distance), DomainError);
  ChainSpec bad_target{{{0.5, 0.5}, {0.0, 1.0}}, {2}, {1, 0}};
  CHECK_THROWS_AS(validate_chain(bad_target), DomainError);
}

TEST_CASE("drift bound dominates hitting times on random chains") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 100; ++trial) {
    const std::size_t n = 3 + rng() % 8;
    ChainSpec c;
    c.target = {0};
    c.distance.assign(n, 0);
    for (std::size_t x = 1; x < n; ++x) c.distance[x] = 1 + static_cast<int>(rng() % 4);
    c.transitions.assign(n, std::vector<double>(n, 0.0));
    c.transitions[0][0] = 1.0;
    for (std::size_t x = 1; x < n; ++x) {
      double total = 0.0;
      for (std::size_t y = 0; y < n; ++y) {
        const bool closer = c.distance[y] < c.distance[x];
        c.transitions[x][y] = unit(rng) * (closer ? 3.0 : 0.3);
        total += c.transitions[x][y];
      }
      for (auto& p : c.transitions[x]) p /= total;
    }
    const auto table = tightest_level_table(c);
    if (!table) continue;
    ++checked;
    CHECK(satisfies_drift_condition(c, *table));
    const auto exact = exact_expected_hitting_time(c);
    for (std::size_t x = 0; x < n; ++x) {
      CHECK(variable_drift_bound(*table, static_cast<std::size_t>(c.distance[x])) >= exact[x] - 1e-9);
    }
  }
  CHECK(checked == 100);
}

TEST_CASE("chain files round-trip") {
  std::istringstream in("# geometric\n0.5 0.5\n0 1\ntarget: 1\n");
  const auto c = parse_chain(in);
  CHECK(c.size() == 2);
  CHECK(c.distance == std::vector<int>{1, 0});
  std::istringstream again(format_chain(c));
  const auto d = parse_chain(again);
  CHECK(d.transitions == c.transitions);
  CHECK(d.target == c.target);
  CHECK(d.distance == c.distance);

  std::istringstream no_target("0.5 0.5\n0 1\n");
  CHECK_THROWS_AS(parse_chain(no_target), DomainError);
  std::istringstream junk("0.5 x\n0 1\ntarget: 1\n");
  CHECK_THROWS_AS(parse_chain(junk), DomainError);
}

TEST_CASE("empirical hitting times") {
  RunTrace<std::vector<int>> a;
  a.top_level_hit = 3;
  std::vector<RunTrace<std::vector<int>>> one{a};
  auto s = measure_empirical_hitting_times<std::vector<int>>(one);
  CHECK(s.top_level.mean == 3.0);
  CHECK(s.top_level.median == 3.0);
  CHECK(s.top_level.max == 3);
  CHECK(s.satisfactory.misses == 1);
  CHECK_FALSE(s.satisfactory.mean);

  RunTrace<std::vector<int>> b;
  b.top_level_hit = 2;
  RunTrace<std::vector<int>> c;
  c.top_level_hit = 4;
  std::vector<RunTrace<std::vector<int>>> two{b, c};
  s = measure_empirical_hitting_times<std::vector<int>>(two);
  CHECK(s.top_level.mean == 3.0);
  CHECK(s.top_level.hits == 2);

  std::vector<RunTrace<std::vector<int>>> none;
  CHECK_THROWS_AS(measure_empirical_hitting_times<std::vector<int>>(none), DomainError);
}
