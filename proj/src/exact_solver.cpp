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

#include "hybridea/exact_solver.hpp"

#include <limits>
#include <string>
#include <vector>

#include "hybridea/errors.hpp"

namespace hybridea::scheduling {
namespace {

class Search {
 public:
  explicit Search(const SchedulingInstance& instance)
      : instance_(instance), used_(instance.size(), false), prefix_(instance.size()) {}

  OptimumResult solve() {
    descend(0, 0, 0);
    return {instance_.from_ticks(best_), best_order_, nodes_};
  }

 private:
  void descend(std::size_t depth, std::int64_t time, std::int64_t lateness) {
    ++nodes_;
    if (lateness >= best_) return;
    const std::size_t n = instance_.size();
    if (depth == n) {
      best_ = lateness;
      best_order_ = prefix_;
      return;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (used_[j]) continue;
      const std::int64_t start = std::max(time, instance_.release_ticks(j));
      const std::int64_t finish = start + instance_.processing_ticks(j);
      used_[j] = true;
      prefix_[depth] = static_cast<int>(j);
      descend(depth + 1, finish, std::max(lateness, finish + instance_.delivery_ticks(j)));
      used_[j] = false;
    }
  }

  const SchedulingInstance& instance_;
  std::vector<bool> used_;
  Permutation prefix_;
  Permutation best_order_;
  std::int64_t best_ = std::numeric_limits<std::int64_t>::max();
  std::uint64_t nodes_ = 0;
};

}  // namespace

OptimumResult optimum_lateness(const SchedulingInstance& instance, std::size_t limit) {
  if (instance.size() > limit) {
    throw OracleOverflow("exact solver limited to " + std::to_string(limit) + " jobs, instance has " +
                         std::to_string(instance.size()));
  }
  return Search(instance).solve();
}

}  // namespace hybridea::scheduling
