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

/// @file harness.hpp
/// @brief Instance files, seeded instance generation, and experiment runs that
/// put measured hitting times next to the theoretical bounds.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hybridea/ea_engine.hpp"
#include "hybridea/rational.hpp"
#include "hybridea/scheduling.hpp"

namespace hybridea::harness {

/// Instance file: first line "n", then n lines "r p q" (decimal or a/b
/// rationals). '#' starts a comment.
scheduling::SchedulingInstance read_instance(std::istream& in);
scheduling::SchedulingInstance read_instance_file(const std::filesystem::path& path);
void write_instance(std::ostream& out, const scheduling::SchedulingInstance& instance);
void write_instance_file(const std::filesystem::path& path, const scheduling::SchedulingInstance& instance);

struct IntRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

struct GeneratorParams {
  std::size_t n = 8;
  IntRange release{0, 30};
  IntRange processing{1, 10};
  IntRange delivery{0, 30};
  /// 0 or 1. When 1, the last job's processing time is raised to the sum of
  /// the others plus a draw from `processing`, so it is long for every eps <= 1/2.
  std::size_t planted_long_jobs = 0;
};

/// Deterministic in (params, seed); values uniform over the integer ranges.
scheduling::SchedulingInstance generate_instance(const GeneratorParams& params, std::uint64_t seed);

struct ExperimentConfig {
  /// Instance files; used when non-empty, otherwise the generator is used.
  std::vector<std::string> instance_files;
  GeneratorParams generator;
  std::vector<std::uint64_t> instance_seeds;
  /// Overrides generator.planted_long_jobs for every k-th instance seed
  /// (seed % k == 0) when nonzero.
  std::uint64_t plant_long_every = 0;

  Rational eps{1};
  std::size_t pop_size = 4;
  /// Generation budget per run; absent means 10 * (drift bound + n^(2+1/eps)).
  std::optional<std::int64_t> budget;
  std::vector<std::uint64_t> seeds{1};
  std::string strategy = "hybrid";
  PairSampling pair_sampling = PairSampling::without_replacement;
  /// Continue after the first satisfactory member until AuxMax = n as well.
  bool await_top_level = true;
  double walk_constant = 1.0;
  double min_success_rate = 0.95;
  std::size_t solver_limit = 10;
  std::string out_dir;
  bool verify = false;
};

/// JSON config file with the ExperimentConfig fields. Unknown keys are errors.
ExperimentConfig read_config_file(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& json_text);
void validate(const ExperimentConfig& config);

struct RunRow {
  std::string instance;
  std::size_t n = 0;
  std::size_t long_jobs = 0;
  std::uint64_t seed = 0;
  std::int64_t budget = 0;
  std::optional<std::int64_t> top_level_hit;
  std::optional<std::int64_t> satisfactory_hit;
  Rational final_best_lateness;
  std::optional<Rational> j_star;
  std::optional<double> ratio;
  double drift_bound = 0.0;
  double walk_bound = 0.0;
  /// Every generation kept AuxMax and the best lateness monotone.
  bool monotone = true;
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<RunRow> rows;
  std::size_t successes = 0;
  double success_rate = 0.0;
  std::optional<double> mean_top_level_hit;
  std::optional<double> median_top_level_hit;
  std::optional<double> mean_satisfactory_hit;
  std::optional<double> median_satisfactory_hit;
  std::vector<Check> checks;

  bool all_checks_pass() const;
};

/// Runs every (instance, seed) pair. Writes rows.csv and summary.json into
/// config.out_dir when it is set; generated instances go to out_dir/instances.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Row table. The first line is a '#'-prefixed timestamp header when
/// `timestamp` is given; everything after it is deterministic.
std::string render_rows_csv(const ExperimentReport& report, const std::optional<std::string>& timestamp = {});
std::string render_summary_json(const ExperimentReport& report);
void write_report(const ExperimentReport& report, const std::filesystem::path& dir);

std::string config_to_json(const ExperimentConfig& config);

}  // namespace hybridea::harness
