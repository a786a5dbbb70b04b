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

#include "hybridea/scheduling.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <string>

#include "hybridea/exact_solver.hpp"

namespace hybridea::scheduling {
namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw DomainError("time values overflow the exact tick range");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw DomainError("time values overflow the exact tick range");
  return out;
}

std::int64_t to_ticks(const Rational& value, std::int64_t scale) {
  return checked_mul(value.numerator(), scale / value.denominator());
}

/// Machine state while a schedule is laid out left to right.
class JacksonCursor {
 public:
  JacksonCursor(const SchedulingInstance& instance, const std::vector<bool>& is_long)
      : instance_(instance), is_long_(is_long), used_(instance.size(), false) {}

  void place(int job) {
    const auto j = static_cast<std::size_t>(job);
    used_[j] = true;
    time_ = std::max(time_, instance_.release_ticks(j)) + instance_.processing_ticks(j);
  }

  bool used(int job) const { return used_[static_cast<std::size_t>(job)]; }

  /// The short-job choice set at the current position: unscheduled short jobs
  /// released by t = max(machine free time, earliest pending short release).
  /// Returns the largest delivery time in that set and the decision time t,
  /// or nullopt when no short job is left.
  std::optional<std::pair<std::int64_t, std::int64_t>> best_delivery() const {
    std::int64_t earliest = std::numeric_limits<std::int64_t>::max();
    bool any = false;
    for (std::size_t u = 0; u < used_.size(); ++u) {
      if (used_[u] || is_long_[u]) continue;
      any = true;
      earliest = std::min(earliest, instance_.release_ticks(u));
    }
    if (!any) return std::nullopt;
    const std::int64_t t = std::max(time_, earliest);
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    for (std::size_t u = 0; u < used_.size(); ++u) {
      if (used_[u] || is_long_[u] || instance_.release_ticks(u) > t) continue;
      best = std::max(best, instance_.delivery_ticks(u));
    }
    return std::make_pair(best, t);
  }

  /// True when `job` is a legal extended-Jackson choice at the current position.
  bool jackson_choice(int job) const {
    const auto j = static_cast<std::size_t>(job);
    if (used_[j] || is_long_[j]) return false;
    const auto best = best_delivery();
    if (!best) return false;
    return instance_.release_ticks(j) <= best->second && instance_.delivery_ticks(j) == best->first;
  }

  /// Lowest-index legal Jackson choice; the caller guarantees a short job is left.
  int pick() const {
    const auto best = best_delivery();
    for (std::size_t u = 0; u < used_.size(); ++u) {
      if (used_[u] || is_long_[u]) continue;
      if (instance_.release_ticks(u) <= best->second && instance_.delivery_ticks(u) == best->first) {
        return static_cast<int>(u);
      }
    }
    throw std::logic_error("no short job left for a Jackson position");
  }

 private:
  const SchedulingInstance& instance_;
  const std::vector<bool>& is_long_;
  std::vector<bool> used_;
  std::int64_t time_ = 0;
};

}  // namespace

SchedulingInstance::SchedulingInstance(std::vector<Job> jobs) : jobs_(std::move(jobs)) {
  if (jobs_.empty()) throw DomainError("scheduling instance needs at least one job");
  for (const auto& j : jobs_) {
    if (j.release < 0 || j.processing < 0 || j.delivery < 0) throw DomainError("job times must be nonnegative");
    for (const auto& v : {j.release, j.processing, j.delivery}) {
      scale_ = std::lcm(scale_, v.denominator());
      if (scale_ <= 0 || scale_ > (std::int64_t{1} << 40)) throw DomainError("job time denominators too large");
    }
    total_processing_ += j.processing;
  }
  std::int64_t horizon = 0;
  std::int64_t max_release = 0;
  std::int64_t max_delivery = 0;
  for (const auto& j : jobs_) {
    release_.push_back(to_ticks(j.release, scale_));
    processing_.push_back(to_ticks(j.processing, scale_));
    delivery_.push_back(to_ticks(j.delivery, scale_));
    total_ticks_ = checked_add(total_ticks_, processing_.back());
    max_release = std::max(max_release, release_.back());
    max_delivery = std::max(max_delivery, delivery_.back());
  }
  // Every lateness value is bounded by this, so schedule arithmetic cannot overflow.
  horizon = checked_add(checked_add(max_release, total_ticks_), max_delivery);
  (void)checked_mul(horizon, 4);
}

void validate_permutation(std::span<const int> perm, std::size_t n) {
  if (perm.size() != n) {
    throw DomainError("permutation has " + std::to_string(perm.size()) + " entries, expected " + std::to_string(n));
  }
  std::vector<bool> seen(n, false);
  for (const int v : perm) {
    if (v < 0 || static_cast<std::size_t>(v) >= n || seen[static_cast<std::size_t>(v)]) {
      throw DomainError("not a permutation of the job indices");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

std::int64_t lateness_ticks(const SchedulingInstance& instance, std::span<const int> perm) {
  std::int64_t time = 0;
  std::int64_t worst = std::numeric_limits<std::int64_t>::min();
  for (const int job : perm) {
    const auto j = static_cast<std::size_t>(job);
    time = std::max(time, instance.release_ticks(j)) + instance.processing_ticks(j);
    worst = std::max(worst, time + instance.delivery_ticks(j));
  }
  return worst;
}

Schedule evaluate_schedule(const SchedulingInstance& instance, std::span<const int> perm) {
  validate_permutation(perm, instance.size());
  Schedule out;
  out.order.assign(perm.begin(), perm.end());
  out.start.reserve(perm.size());
  Rational finish(0);
  bool first = true;
  for (const int job : perm) {
    const Job& j = instance.job(static_cast<std::size_t>(job));
    const Rational start = std::max(j.release, finish);
    out.start.push_back(start);
    finish = start + j.processing;
    const Rational done = finish + j.delivery;
    if (first || done > out.lateness) out.lateness = done;
    first = false;
  }
  return out;
}

EpsilonPartition long_jobs(const SchedulingInstance& instance, const Rational& eps) {
  if (eps <= 0) throw DomainError("eps must be positive");
  EpsilonPartition out;
  out.eps = eps;
  out.threshold = eps * instance.total_processing();
  out.is_long.assign(instance.size(), false);
  for (std::size_t i = 0; i < instance.size(); ++i) {
    if (instance.job(i).processing >= out.threshold) {
      out.is_long[i] = true;
      out.long_jobs.push_back(static_cast<int>(i));
    }
  }
  // |B| * eps * P <= P whenever P > 0; with P = 0 every job is long.
  if (instance.total_processing() > 0) {
    const auto cap = boost::rational_cast<std::int64_t>(Rational(1) / eps);
    if (static_cast<std::int64_t>(out.long_jobs.size()) > cap) {
      throw std::logic_error("long-job count exceeds 1/eps");
    }
  }
  return out;
}

void validate_repositioning_map(const EpsilonPartition& partition, const RepositioningMap& phi, std::size_t n) {
  if (phi.size() != partition.long_jobs.size()) throw DomainError("repositioning map must cover exactly the long jobs");
  std::vector<bool> taken(n, false);
  for (const auto& [job, pos] : phi) {
    if (job < 0 || static_cast<std::size_t>(job) >= n || !partition.is_long[static_cast<std::size_t>(job)]) {
      throw DomainError("repositioning map domain contains a short job");
    }
    if (pos < 0 || static_cast<std::size_t>(pos) >= n) throw DomainError("repositioning map position out of range");
    if (taken[static_cast<std::size_t>(pos)]) throw DomainError("repositioning map is not injective");
    taken[static_cast<std::size_t>(pos)] = true;
  }
}

std::uint64_t repositioning_map_count(std::size_t n, std::size_t long_count) {
  if (long_count > n) return 0;
  std::uint64_t count = 1;
  for (std::size_t k = 0; k < long_count; ++k) count *= static_cast<std::uint64_t>(n - k);
  return count;
}

std::vector<RepositioningMap> all_repositioning_maps(const EpsilonPartition& partition, std::size_t n) {
  const auto& longs = partition.long_jobs;
  std::vector<RepositioningMap> out;
  std::vector<int> positions(longs.size(), 0);
  std::vector<bool> taken(n, false);
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == longs.size()) {
      RepositioningMap phi;
      for (std::size_t i = 0; i < longs.size(); ++i) phi.emplace(longs[i], positions[i]);
      out.push_back(std::move(phi));
      return;
    }
    for (std::size_t p = 0; p < n; ++p) {
      if (taken[p]) continue;
      taken[p] = true;
      positions[k] = static_cast<int>(p);
      self(self, k + 1);
      taken[p] = false;
    }
  };
  rec(rec, 0);
  return out;
}

JacksonProblem::JacksonProblem(std::shared_ptr<const SchedulingInstance> instance, const Rational& eps)
    : instance_(std::move(instance)), partition_(long_jobs(*instance_, eps)) {}

int JacksonProblem::prefix_level(const RepositioningMap& phi, std::span<const int> perm) const {
  const std::size_t n = size();
  validate_permutation(perm, n);
  validate_repositioning_map(partition_, phi, n);
  std::vector<int> pinned(n, -1);
  for (const auto& [job, pos] : phi) pinned[static_cast<std::size_t>(pos)] = job;

  JacksonCursor cursor(*instance_, partition_.is_long);
  for (std::size_t h = 0; h < n; ++h) {
    const int job = perm[h];
    const bool ok = pinned[h] >= 0 ? job == pinned[h] : cursor.jackson_choice(job);
    if (!ok) return static_cast<int>(h);
    cursor.place(job);
  }
  return static_cast<int>(n);
}

int JacksonProblem::aux_fitness(std::span<const int> perm) const {
  // A long job seen in the prefix is pinned where it stands; any injective
  // map placing the unseen long jobs after the prefix extends that choice.
  // Short jobs must therefore satisfy the Jackson clause, whatever phi is.
  const std::size_t n = size();
  JacksonCursor cursor(*instance_, partition_.is_long);
  for (std::size_t h = 0; h < n; ++h) {
    const int job = perm[h];
    if (!is_long(job) && !cursor.jackson_choice(job)) return static_cast<int>(h);
    cursor.place(job);
  }
  return static_cast<int>(n);
}

Permutation JacksonProblem::jackson_schedule(const RepositioningMap& phi) const {
  const std::size_t n = size();
  validate_repositioning_map(partition_, phi, n);
  std::vector<int> pinned(n, -1);
  for (const auto& [job, pos] : phi) pinned[static_cast<std::size_t>(pos)] = job;

  JacksonCursor cursor(*instance_, partition_.is_long);
  Permutation out(n);
  for (std::size_t h = 0; h < n; ++h) {
    out[h] = pinned[h] >= 0 ? pinned[h] : cursor.pick();
    cursor.place(out[h]);
  }
  return out;
}

Permutation JacksonProblem::mutate(std::span<const int> perm, int a, int b, int level) const {
  const auto n = static_cast<int>(size());
  if (a < 0 || a >= n || b < 0 || b >= n) throw DomainError("mutation position out of range");
  if (level < 0 || level > n) throw DomainError("mutation level out of range");
  Permutation out(perm.begin(), perm.end());
  if (!is_long(out[static_cast<std::size_t>(a)]) && !is_long(out[static_cast<std::size_t>(b)])) return out;

  std::swap(out[static_cast<std::size_t>(a)], out[static_cast<std::size_t>(b)]);
  const int from = std::min(a, b);
  if (from >= level) return out;

  // Rebuild positions from..level-1 by the Jackson rule; long jobs stay pinned
  // where the swap left them. Leftover jobs keep their relative order.
  JacksonCursor cursor(*instance_, partition_.is_long);
  Permutation rebuilt;
  rebuilt.reserve(out.size());
  for (int h = 0; h < from; ++h) {
    rebuilt.push_back(out[static_cast<std::size_t>(h)]);
    cursor.place(rebuilt.back());
  }
  for (int h = from; h < level; ++h) {
    const int here = out[static_cast<std::size_t>(h)];
    rebuilt.push_back(is_long(here) ? here : cursor.pick());
    cursor.place(rebuilt.back());
  }
  for (const int job : out) {
    if (!cursor.used(job)) rebuilt.push_back(job);
  }
  return rebuilt;
}

RepositioningMap JacksonProblem::placement(std::span<const int> perm) const {
  RepositioningMap phi;
  for (std::size_t h = 0; h < perm.size(); ++h) {
    if (is_long(perm[h])) phi.emplace(perm[h], static_cast<int>(h));
  }
  return phi;
}

Permutation recombine(std::span<const int> first, std::span<const int> second, int level,
                      std::span<const int> zeta) {
  const std::size_t n = first.size();
  validate_permutation(first, n);
  validate_permutation(second, n);
  if (level < 0 || static_cast<std::size_t>(level) > n) throw DomainError("recombination level out of range");
  const std::size_t rest = n - static_cast<std::size_t>(level);
  if (zeta.size() != rest) {
    throw DomainError("zeta must permute " + std::to_string(rest) + " suffix slots, got " +
                      std::to_string(zeta.size()));
  }
  validate_permutation(zeta, rest);

  Permutation child(first.begin(), first.begin() + level);
  std::vector<bool> in_prefix(n, false);
  for (const int job : child) in_prefix[static_cast<std::size_t>(job)] = true;
  std::vector<int> omega;
  omega.reserve(rest);
  for (const int job : second) {
    if (!in_prefix[static_cast<std::size_t>(job)]) omega.push_back(job);
  }
  for (std::size_t l = 0; l < rest; ++l) child.push_back(omega[static_cast<std::size_t>(zeta[l])]);
  return child;
}

bool satisfactory(const SchedulingInstance& instance, const Rational& eps, std::span<const int> perm,
                  const Rational& j_star) {
  if (j_star <= 0) throw DomainError("J* must be positive");
  if (eps <= 0) throw DomainError("eps must be positive");
  // J/scale <= (1 + c/d) * a/b  <=>  J * d * b <= (d + c) * a * scale
  __extension__ using Wide = __int128;
  const Wide lhs = Wide{lateness_ticks(instance, perm)} * eps.denominator() * j_star.denominator();
  const Wide rhs = Wide{eps.denominator() + eps.numerator()} * j_star.numerator() * instance.tick_scale();
  return lhs <= rhs;
}

DesignReport check_design_conditions(const SchedulingInstance& instance, const Rational& eps,
                                     const DesignOptions& options) {
  const auto shared = std::make_shared<const SchedulingInstance>(instance);
  const JacksonProblem problem(shared, eps);
  const std::size_t n = instance.size();

  DesignReport report;
  report.n = n;
  report.long_count = problem.partition().long_jobs.size();
  report.phi_count = repositioning_map_count(n, report.long_count);
  report.phi_bound = std::pow(static_cast<double>(n), 1.0 / to_double(eps));
  report.condition1 = static_cast<double>(report.phi_count) <= report.phi_bound * (1.0 + 1e-12);
  report.level_min = 0;
  report.level_max = static_cast<int>(n);
  report.condition2 = true;

  if (n > options.max_n || report.long_count > options.max_long) {
    report.partial = true;
    return report;
  }

  report.j_star = options.j_star ? *options.j_star : optimum_lateness(instance).j_star;
  const auto maps = all_repositioning_maps(problem.partition(), n);
  std::vector<Permutation> starts;
  starts.reserve(maps.size());
  for (const auto& phi : maps) {
    starts.push_back(problem.jackson_schedule(phi));
    const Rational late = evaluate_schedule(instance, starts.back()).lateness;
    if (!report.best_top_level_lateness || late < *report.best_top_level_lateness) {
      report.best_top_level_lateness = late;
    }
  }
  report.condition3 = *report.best_top_level_lateness <= (1 + eps) * *report.j_star;

  // Breadth-first search over the top-level mutation moves M_{a,b}^n.
  const int top = static_cast<int>(n);
  std::set<Permutation> all_states;
  bool reaches_all = true;
  for (const auto& start : starts) {
    std::set<Permutation> seen{start};
    std::set<RepositioningMap> classes;
    std::queue<Permutation> frontier;
    frontier.push(start);
    while (!frontier.empty()) {
      Permutation cur = std::move(frontier.front());
      frontier.pop();
      if (problem.aux_fitness(cur) != top) {
        reaches_all = false;
        break;
      }
      classes.insert(problem.placement(cur));
      for (int a = 0; a < top; ++a) {
        for (int b = 0; b < top; ++b) {
          Permutation next = problem.mutate(cur, a, b, top);
          if (seen.insert(next).second) frontier.push(std::move(next));
        }
      }
    }
    if (classes.size() != maps.size()) reaches_all = false;
    all_states.insert(seen.begin(), seen.end());
  }
  report.reachability_states = all_states.size();
  report.condition4 = reaches_all;
  return report;
}

}  // namespace hybridea::scheduling
