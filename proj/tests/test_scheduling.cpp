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

#include <algorithm>
#include <memory>
#include <numeric>
#include <random>

#include "doctest.h"
#include "hybridea/errors.hpp"
#include "hybridea/scheduling.hpp"
#include "hybridea/scheduling_strategy.hpp"
#include "oracles.hpp"

using namespace hybridea;
using namespace hybridea::scheduling;

namespace {

Job job(long r, long p, long q) { return {Rational(r), Rational(p), Rational(q)}; }

std::shared_ptr<const JacksonProblem> make_problem(std::vector<Job> jobs, Rational eps) {
  return std::make_shared<const JacksonProblem>(std::make_shared<const SchedulingInstance>(std::move(jobs)), eps);
}

std::vector<Permutation> all_permutations(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Permutation> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// Two planted long jobs for eps = 1/3: each equals the total of the short ones.
std::vector<Job> two_long_jobs(std::mt19937_64& rng, std::size_t n) {
  auto jobs = oracle::random_jobs(rng, n, 12, 5, 12);
  Rational shorts(0);
  for (std::size_t i = 0; i + 2 < n; ++i) shorts += jobs[i].processing;
  jobs[n - 2].processing = shorts;
  jobs[n - 1].processing = shorts;
  return jobs;
}

}  // namespace

TEST_CASE("lateness of small schedules") {
  SchedulingInstance single({job(0, 2, 3)});
  const auto s = evaluate_schedule(single, Permutation{0});
  CHECK(s.start[0] == Rational(0));
  CHECK(s.lateness == Rational(5));

  SchedulingInstance two({job(0, 2, 5), job(1, 3, 1)});
  CHECK(evaluate_schedule(two, Permutation{0, 1}).lateness == Rational(7));
  CHECK(evaluate_schedule(two, Permutation{1, 0}).lateness == Rational(11));
  CHECK(evaluate_schedule(two, Permutation{1, 0}).start == std::vector<Rational>{1, 4});

  SchedulingInstance flat({job(0, 3, 0), job(0, 1, 0), job(0, 4, 0)});
  for (const auto& p : all_permutations(3)) CHECK(evaluate_schedule(flat, p).lateness == Rational(8));

  CHECK_THROWS_AS(evaluate_schedule(two, Permutation{0, 0}), DomainError);
  CHECK_THROWS_AS(evaluate_schedule(two, Permutation{0}), DomainError);
  CHECK_THROWS_AS(evaluate_schedule(two, Permutation{0, 2}), DomainError);
}

TEST_CASE("lateness matches an independent recomputation") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto jobs = oracle::random_jobs(rng, 7, 20, 9, 20);
    const SchedulingInstance instance(jobs);
    const auto perm = oracle::random_permutation(rng, 7);
    const auto expected = oracle::recompute(jobs, perm);
    const auto got = evaluate_schedule(instance, perm);
    CHECK(got.lateness == expected.lateness);
    CHECK(got.start == expected.start);
    CHECK(instance.from_ticks(lateness_ticks(instance, perm)) == expected.lateness);
  }
}

TEST_CASE("rational job times use an exact common tick") {
  SchedulingInstance instance({{Rational(1, 2), Rational(1, 3), Rational(0)}, {Rational(0), Rational(3, 4), Rational(1, 6)}});
  CHECK(instance.tick_scale() == 12);
  CHECK(instance.total_processing() == Rational(13, 12));
  const auto s = evaluate_schedule(instance, Permutation{1, 0});
  CHECK(s.lateness == Rational(13, 12));
  CHECK(instance.from_ticks(lateness_ticks(instance, Permutation{1, 0})) == Rational(13, 12));
  CHECK_THROWS_AS(SchedulingInstance({}), DomainError);
  CHECK_THROWS_AS(SchedulingInstance({job(-1, 1, 1)}), DomainError);
}

TEST_CASE("long jobs") {
  SchedulingInstance a({job(0, 4, 0), job(0, 1, 0), job(0, 1, 0)});
  const auto pa = long_jobs(a, Rational(1, 2));
  CHECK(pa.threshold == Rational(3));
  CHECK(pa.long_jobs == std::vector<int>{0});

  SchedulingInstance b({job(0, 2, 0), job(0, 2, 0)});
  const auto pb = long_jobs(b, Rational(1, 2));
  CHECK(pb.threshold == Rational(2));
  CHECK(pb.long_jobs == std::vector<int>{0, 1});

  SchedulingInstance c({job(0, 3, 0), job(0, 2, 0), job(0, 5, 0)});
  CHECK(long_jobs(c, Rational(1)).long_jobs.empty());
  CHECK_THROWS_AS(long_jobs(c, Rational(0)), DomainError);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto jobs = oracle::random_jobs(rng, 6, 10, 9, 10, trial % 2 == 0);
    for (const Rational eps : {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(1)}) {
      const auto part = long_jobs(SchedulingInstance(jobs), eps);
      CHECK(Rational(static_cast<long>(part.long_jobs.size())) <= Rational(1) / eps);
      const auto mask = oracle::long_mask(jobs, eps);
      CHECK(part.is_long == mask);
    }
  }
}

TEST_CASE("repositioning maps") {
  SchedulingInstance b({job(0, 2, 0), job(0, 2, 0), job(0, 1, 0)});
  const auto part = long_jobs(b, Rational(2, 5));
  REQUIRE(part.long_jobs.size() == 2);
  const auto maps = all_repositioning_maps(part, 3);
  CHECK(maps.size() == 6);
  CHECK(repositioning_map_count(3, 2) == 6);
  CHECK(repositioning_map_count(6, 1) == 6);
  CHECK(repositioning_map_count(6, 0) == 1);
  CHECK_THROWS_AS(validate_repositioning_map(part, RepositioningMap{{0, 1}, {1, 1}}, 3), DomainError);
  CHECK_THROWS_AS(validate_repositioning_map(part, RepositioningMap{{0, 1}}, 3), DomainError);
  CHECK_THROWS_AS(validate_repositioning_map(part, RepositioningMap{{0, 1}, {2, 0}}, 3), DomainError);
}

TEST_CASE("prefix level examples") {
  const auto problem = make_problem({job(0, 1, 3), job(0, 1, 1)}, Rational(1));
  REQUIRE(problem->partition().long_jobs.empty());
  CHECK(problem->prefix_level({}, Permutation{0, 1}) == 2);
  CHECK(problem->prefix_level({}, Permutation{1, 0}) == 0);
  CHECK(problem->aux_fitness(Permutation{0, 1}) == 2);
  CHECK(problem->aux_fitness(Permutation{1, 0}) == 0);

  const auto one = make_problem({job(4, 2, 1)}, Rational(1));
  CHECK(one->aux_fitness(Permutation{0}) == 1);

  const auto pinned = make_problem({job(0, 10, 1), job(0, 1, 5), job(2, 1, 7)}, Rational(1, 2));
  REQUIRE(pinned->partition().long_jobs == std::vector<int>{0});
  CHECK(pinned->prefix_level({{0, 0}}, Permutation{0, 2, 1}) >= 1);
  CHECK(pinned->prefix_level({{0, 1}}, Permutation{0, 2, 1}) == 0);
}

TEST_CASE("Jackson schedules reach the top level") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const bool plant = trial % 2 == 0;
    const auto problem = make_problem(oracle::random_jobs(rng, 6, 15, 6, 15, plant), Rational(1, 2));
    for (const auto& phi : all_repositioning_maps(problem->partition(), 6)) {
      const auto pi = problem->jackson_schedule(phi);
      CHECK(problem->prefix_level(phi, pi) == 6);
      CHECK(problem->aux_fitness(pi) == 6);
      CHECK(problem->placement(pi) == phi);
    }
  }
}

TEST_CASE("auxiliary fitness scan equals the maximum over all repositioning maps") {
  std::mt19937_64 rng(3);
  const auto perms5 = all_permutations(5);
  for (int trial = 0; trial < 24; ++trial) {
    std::vector<Job> jobs;
    Rational eps(1);
    switch (trial % 3) {
      case 0: jobs = oracle::random_jobs(rng, 5, 8, 5, 8); break;
      case 1: jobs = oracle::random_jobs(rng, 5, 8, 5, 8, true); eps = Rational(1, 2); break;
      default: jobs = two_long_jobs(rng, 5); eps = Rational(1, 3); break;
    }
    const auto problem = make_problem(jobs, eps);
    const auto mask = oracle::long_mask(jobs, eps);
    for (const auto& pi : perms5) {
      REQUIRE(problem->aux_fitness(pi) == oracle::brute_aux_fitness(jobs, mask, pi));
    }
    for (const auto& phi : all_repositioning_maps(problem->partition(), 5)) {
      for (std::size_t k = 0; k < perms5.size(); k += 7) {
        CHECK(problem->prefix_level(phi, perms5[k]) == oracle::brute_prefix_level(jobs, mask, phi, perms5[k]));
      }
    }
  }
  for (int trial = 0; trial < 12; ++trial) {
    const auto jobs = trial % 2 ? two_long_jobs(rng, 6) : oracle::random_jobs(rng, 6, 10, 5, 10, true);
    const Rational eps = trial % 2 ? Rational(1, 3) : Rational(1, 2);
    const auto problem = make_problem(jobs, eps);
    const auto mask = oracle::long_mask(jobs, eps);
    for (int s = 0; s < 200; ++s) {
      const auto pi = oracle::random_permutation(rng, 6);
      REQUIRE(problem->aux_fitness(pi) == oracle::brute_aux_fitness(jobs, mask, pi));
    }
  }
}

TEST_CASE("recombination") {
  const Permutation pi{0, 1, 2, 3};
  const Permutation sigma{3, 2, 1, 0};
  CHECK(recombine(pi, sigma, 2, std::vector<int>{0, 1}) == Permutation{0, 1, 3, 2});
  CHECK(recombine(pi, sigma, 2, std::vector<int>{1, 0}) == Permutation{0, 1, 2, 3});
  CHECK(recombine(pi, sigma, 4, std::vector<int>{}) == pi);
  CHECK(recombine(pi, sigma, 0, std::vector<int>{0, 1, 2, 3}) == sigma);
  CHECK_THROWS_AS(recombine(pi, sigma, 2, std::vector<int>{0}), DomainError);
  CHECK_THROWS_AS(recombine(pi, sigma, 5, std::vector<int>{}), DomainError);
  CHECK_THROWS_AS(recombine(pi, sigma, 2, std::vector<int>{0, 0}), DomainError);

  PrefixRecombinationFamily family(4, 2);
  CHECK(family.size() == 2);
  CHECK(family.apply(0, pi, sigma) == Permutation{0, 1, 3, 2});
  CHECK(family.apply(1, pi, sigma) == Permutation{0, 1, 2, 3});
}

TEST_CASE("recombination keeps the prefix level") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto problem = make_problem(oracle::random_jobs(rng, 5, 10, 5, 10, trial % 2 == 0), Rational(1, 2));
    const auto perms = all_permutations(5);
    for (int s = 0; s < 40; ++s) {
      const auto& pi = perms[rng() % perms.size()];
      const auto& sigma = perms[rng() % perms.size()];
      const int a = problem->aux_fitness(pi);
      for (int i = 0; i <= 5; ++i) {
        const auto zetas = all_permutations(static_cast<std::size_t>(5 - i));
        for (const auto& zeta : zetas) {
          CHECK(problem->aux_fitness(recombine(pi, sigma, i, zeta)) >= std::min(a, i));
        }
      }
    }
  }
}

TEST_CASE("mutation") {
  const auto problem = make_problem({job(0, 10, 1), job(0, 1, 5), job(2, 1, 7), job(0, 2, 2)}, Rational(1, 2));
  REQUIRE(problem->partition().long_jobs == std::vector<int>{0});
  const Permutation pi{1, 2, 0, 3};
  CHECK(problem->mutate(pi, 0, 1, 4) == pi);
  CHECK(problem->mutate(pi, 3, 3, 4) == pi);
  // a = b on the long job: no swap, positions from a up to the level follow the Jackson rule.
  CHECK(problem->mutate(Permutation{3, 0, 1, 2}, 1, 1, 4) == Permutation{3, 0, 2, 1});
  CHECK(problem->mutate(Permutation{3, 0, 1, 2}, 1, 1, 1) == Permutation{3, 0, 1, 2});
  const auto swapped = problem->mutate(pi, 2, 0, 4);
  CHECK(swapped == Permutation{0, 2, 1, 3});
  CHECK(problem->prefix_level({{0, 0}}, swapped) == 4);
  CHECK_THROWS_AS(problem->mutate(pi, 4, 0, 1), DomainError);
  CHECK_THROWS_AS(problem->mutate(pi, 0, 0, 5), DomainError);

  const auto no_long = make_problem({job(0, 1, 3), job(0, 1, 1), job(1, 1, 2)}, Rational(1));
  RepositioningMutationFamily family(no_long, 2);
  CHECK(family.size() == 9);
  for (std::uint64_t op = 0; op < 9; ++op) CHECK(family.apply(op, Permutation{2, 0, 1}) == Permutation{2, 0, 1});
}

TEST_CASE("mutation preserves the level, exhaustively on n = 4") {
  std::mt19937_64 rng(13);
  const auto perms = all_permutations(4);
  for (int trial = 0; trial < 30; ++trial) {
    const auto problem = make_problem(oracle::random_jobs(rng, 4, 8, 4, 8, true), Rational(1, 2));
    REQUIRE(problem->partition().long_jobs.size() == 1);
    for (const auto& pi : perms) {
      const int level = problem->aux_fitness(pi);
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          for (int i = 0; i <= 4; ++i) {
            const auto out = problem->mutate(pi, a, b, i);
            validate_permutation(out, 4);
            CHECK(problem->aux_fitness(out) >= std::min(i, level));
            if (level == i) CHECK(problem->prefix_level(problem->placement(out), out) >= i);
          }
        }
      }
    }
  }
}

TEST_CASE("hybrid elitist selection") {
  using Ind = Individual<Permutation>;
  Population<Permutation> parents{{Ind{{0}, 3, 10.0}, Ind{{1}, 1, 4.0}}, 0};
  Population<Permutation> worse{{Ind{{2}, 0, 20.0}, Ind{{3}, 2, 12.0}}, 0};
  auto out = hybrid_elitist_select(parents, worse);
  Population<Permutation> merged{out, 1};
  CHECK(merged.aux_max() == 3);
  CHECK(merged.best_objective() == 4.0);

  Population<Permutation> dominant{{Ind{{4}, 5, 1.0}, Ind{{5}, 0, 30.0}}, 0};
  out = hybrid_elitist_select(parents, dominant);
  CHECK(std::any_of(out.begin(), out.end(), [](const Ind& x) { return x.genome == Permutation{4}; }));

  Population<Permutation> small{{Ind{{6}, 0, 1.0}}, 0};
  CHECK_THROWS_AS(hybrid_elitist_select(parents, small), DomainError);

  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> lvl(0, 6);
  std::uniform_int_distribution<int> obj(0, 50);
  for (int trial = 0; trial < 1000; ++trial) {
    Population<Permutation> x;
    Population<Permutation> y;
    for (int k = 0; k < 4; ++k) {
      x.members.push_back({{k}, lvl(rng), static_cast<double>(obj(rng))});
      y.members.push_back({{10 + k}, lvl(rng), static_cast<double>(obj(rng))});
    }
    Population<Permutation> z{hybrid_elitist_select(x, y), 1};
    REQUIRE(z.size() == 4);
    CHECK(z.aux_max() == std::max(x.aux_max(), y.aux_max()));
    CHECK(z.best_objective() == std::min(x.best_objective(), y.best_objective()));
  }
}

TEST_CASE("satisfactory") {
  SchedulingInstance two({job(0, 2, 5), job(1, 3, 1)});
  CHECK(satisfactory(two, Rational(1, 2), Permutation{0, 1}, Rational(7)));
  CHECK_FALSE(satisfactory(two, Rational(1, 2), Permutation{1, 0}, Rational(7)));
  CHECK(satisfactory(two, Rational(4, 7), Permutation{1, 0}, Rational(7)));
  CHECK(satisfactory(two, Rational(100), Permutation{1, 0}, Rational(7)));
  CHECK_THROWS_AS(satisfactory(two, Rational(1), Permutation{0, 1}, Rational(0)), DomainError);
}

TEST_CASE("design conditions") {
  SchedulingInstance none({job(0, 1, 3), job(0, 1, 1), job(2, 2, 4), job(1, 1, 0)});
  const auto r0 = check_design_conditions(none, Rational(1));
  CHECK(r0.long_count == 0);
  CHECK(r0.phi_count == 1);
  CHECK(r0.condition1);
  CHECK(r0.condition2);
  CHECK(r0.level_min == 0);
  CHECK(r0.level_max == 4);
  CHECK(r0.condition3);
  CHECK(r0.condition4);
  CHECK_FALSE(r0.partial);

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const SchedulingInstance inst(oracle::random_jobs(rng, 6, 12, 5, 12, true));
    const auto r = check_design_conditions(inst, Rational(1, 2));
    CHECK(r.long_count == 1);
    CHECK(r.phi_count == 6);
    CHECK(r.phi_bound == doctest::Approx(36.0));
    CHECK(r.condition1);
    CHECK(r.condition2);
    CHECK(r.condition3);
    CHECK(r.condition4);
    REQUIRE(r.j_star);
    CHECK(*r.j_star == oracle::brute_optimum(inst.jobs()));
  }
}
