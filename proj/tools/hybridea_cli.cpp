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
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hybridea/drift_bounds.hpp"
#include "hybridea/errors.hpp"
#include "hybridea/exact_solver.hpp"
#include "hybridea/harness.hpp"
#include "hybridea/rational.hpp"
#include "hybridea/schema_bounds.hpp"
#include "hybridea/scheduling.hpp"
#include "hybridea/scheduling_strategy.hpp"
#include "json.hpp"

namespace {

using namespace hybridea;
using json = nlohmann::ordered_json;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitError = 2;

std::string perm_string(const std::vector<int>& perm) {
  std::string s;
  for (std::size_t k = 0; k < perm.size(); ++k) s += (k ? " " : "") + std::to_string(perm[k]);
  return s;
}

harness::IntRange parse_range(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    const auto v = std::stoll(text);
    return {v, v};
  }
  return {std::stoll(text.substr(0, comma)), std::stoll(text.substr(comma + 1))};
}

struct GenerateOptions {
  std::size_t n = 8;
  std::uint64_t seed = 1;
  std::size_t count = 1;
  std::string release = "0,30";
  std::string processing = "1,10";
  std::string delivery = "0,30";
  bool planted_long = false;
  std::string out;
};

int cmd_generate(const GenerateOptions& o) {
  harness::GeneratorParams params;
  params.n = o.n;
  params.release = parse_range(o.release);
  params.processing = parse_range(o.processing);
  params.delivery = parse_range(o.delivery);
  params.planted_long_jobs = o.planted_long ? 1 : 0;
  for (std::size_t k = 0; k < o.count; ++k) {
    const auto seed = o.seed + k;
    const auto instance = harness::generate_instance(params, seed);
    if (o.out.empty()) {
      harness::write_instance(std::cout, instance);
    } else {
      const auto path = std::filesystem::path(o.out) / ("gen-" + std::to_string(seed) + ".txt");
      harness::write_instance_file(path, instance);
      std::cout << path.string() << '\n';
    }
  }
  return 0;
}

struct RunOptions {
  std::string config;
  std::vector<std::uint64_t> seeds;
  std::string eps;
  std::optional<std::size_t> pop_size;
  std::optional<std::int64_t> budget;
  std::string out;
  bool verify = false;
};

int cmd_run(const RunOptions& o) {
  auto config = harness::read_config_file(o.config);
  if (!o.seeds.empty()) config.seeds = o.seeds;
  if (!o.eps.empty()) config.eps = parse_rational(o.eps);
  if (o.pop_size) config.pop_size = *o.pop_size;
  if (o.budget) config.budget = *o.budget;
  if (!o.out.empty()) config.out_dir = o.out;
  if (o.verify) config.verify = true;
  harness::validate(config);

  const auto report = harness::run_experiment(config);
  std::cout << harness::render_summary_json(report);
  if (config.verify && !report.all_checks_pass()) {
    for (const auto& c : report.checks) {
      if (!c.passed) std::cerr << "check failed: " << c.name << " (" << c.detail << ")\n";
    }
    return kExitVerifyFailed;
  }
  return 0;
}

struct BoundsOptions {
  std::size_t n = 8;
  std::size_t pop_size = 4;
  std::string eps = "1";
  std::optional<std::size_t> start_distance;
  double gamma = 1.0;
  double lambda = 1.0;
  double walk_constant = 1.0;
  std::optional<double> P;
  double delta = 0.5;
  std::optional<double> alpha;
  std::size_t count_s0 = 1;
  double beta = 1.0;
};

int cmd_bounds(const BoundsOptions& o) {
  json out;
  const auto table = drift::scheduling_level_table(o.n, o.pop_size);
  json levels = json::array();
  for (std::size_t k = 0; k < o.n; ++k) levels.push_back({{"level", k}, {"l_k", table.at(k)}});
  out["level_improvement"] = levels;
  const std::size_t d = o.start_distance.value_or(o.n);
  out["drift_bound"] = {{"start_distance", d}, {"value", drift::variable_drift_bound(table, d)}};

  const double e = to_double(parse_rational(o.eps));
  const auto runtime = drift::total_runtime_bound(table, d, o.n, o.gamma, o.lambda, o.walk_constant);
  out["runtime_bound"] = {{"drift_bound", runtime.drift_bound},
                          {"top_level_walk_bound", runtime.top_level_walk_bound},
                          {"total", runtime.total},
                          {"gamma", runtime.gamma},
                          {"lambda", runtime.lambda},
                          {"walk_constant", runtime.walk_constant}};
  out["scheduling_walk"] = {{"exponent", 2.0 + 1.0 / e},
                            {"value", o.walk_constant * std::pow(static_cast<double>(o.n), 2.0 + 1.0 / e)}};

  if (o.P) {
    const auto tails = schema::chernoff_count_bounds(*o.P, o.pop_size, o.delta);
    out["chernoff"] = {{"P", *o.P},
                       {"m", o.pop_size},
                       {"delta", o.delta},
                       {"lower_tail", tails.lower_tail},
                       {"upper_tail", tails.upper_tail}};
  }
  if (o.alpha) {
    out["small_count"] = {{"count_s0", o.count_s0},
                          {"m", o.pop_size},
                          {"alpha", *o.alpha},
                          {"beta", o.beta},
                          {"value", schema::small_count_lower_bound(o.count_s0, o.pop_size, *o.alpha, o.beta)}};
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_oracle_solve(const std::string& file, std::size_t limit) {
  const auto instance = harness::read_instance_file(file);
  const auto result = scheduling::optimum_lateness(instance, limit);
  json out{{"j_star", format_rational(result.j_star)}, {"witness", result.witness}, {"nodes", result.nodes}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_oracle_hitting(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open chain file " + file);
  const auto chain = drift::parse_chain(in);
  const auto exact = drift::exact_expected_hitting_time(chain);
  const auto table = drift::tightest_level_table(chain);
  json states = json::array();
  for (std::size_t s = 0; s < chain.size(); ++s) {
    json row{{"state", s}, {"distance", chain.distance[s]}, {"expected_hitting_time", exact[s]}};
    if (table) {
      row["drift_bound"] = chain.distance[s] > 0
                               ? drift::variable_drift_bound(*table, static_cast<std::size_t>(chain.distance[s]))
                               : 0.0;
    }
    states.push_back(row);
  }
  json out{{"drift_condition_holds", table.has_value()}, {"states", states}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

struct CountOptions {
  std::string file;
  std::string eps = "1";
  std::size_t pop_size = 4;
  int level = 1;
  std::uint64_t seed = 1;
  std::string stage = "recombination";
  std::size_t samples = 0;
};

int cmd_oracle_count(const CountOptions& o) {
  const auto shared = std::make_shared<const scheduling::SchedulingInstance>(harness::read_instance_file(o.file));
  const auto problem = std::make_shared<const scheduling::JacksonProblem>(shared, parse_rational(o.eps));
  const auto hooks = scheduling::make_hooks(problem);
  const auto strategy = scheduling::make_hybrid_strategy(problem);
  Rng rng(o.seed);
  const auto population = scheduling::random_population(hooks, shared->size(), o.pop_size, rng);
  const int level = o.level;
  const schema::SchemaPredicate<scheduling::Permutation> s{
      [level](const Individual<scheduling::Permutation>& x) { return x.aux_level >= level; },
      "auxFit >= " + std::to_string(level)};
  const auto stage = o.stage == "mutation" ? schema::Stage::mutation : schema::Stage::recombination;

  const auto exact = schema::exact_count_distribution(s, population, strategy, hooks, stage);
  json out{{"schema", s.label},
           {"stage", o.stage},
           {"average_success_probability",
            schema::average_success_probability(s, population, strategy, hooks, strategy.pair_sampling)},
           {"exact", {{"probabilities", exact.probabilities}, {"mean", exact.mean()}, {"atoms", exact.atoms}}}};
  if (o.samples > 0) {
    const auto mc = schema::monte_carlo_count_distribution(s, population, strategy, hooks, stage, o.samples, rng);
    out["monte_carlo"] = {{"probabilities", mc.probabilities}, {"mean", mc.mean()}, {"samples", o.samples}};
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_oracle_design(const std::string& file, const std::string& eps) {
  const auto instance = harness::read_instance_file(file);
  const auto r = scheduling::check_design_conditions(instance, parse_rational(eps));
  auto opt = [](const std::optional<Rational>& v) { return v ? json(format_rational(*v)) : json(nullptr); };
  json out{{"n", r.n},
           {"long_jobs", r.long_count},
           {"phi_count", r.phi_count},
           {"phi_bound", r.phi_bound},
           {"condition1", r.condition1},
           {"levels", {r.level_min, r.level_max}},
           {"condition2", r.condition2},
           {"j_star", opt(r.j_star)},
           {"best_top_level_lateness", opt(r.best_top_level_lateness)},
           {"condition3", r.condition3},
           {"reachability_states", r.reachability_states},
           {"condition4", r.condition4},
           {"partial", r.partial}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid evolutionary algorithm toolkit for single-machine scheduling with release and delivery times"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Write seeded random instance files");
  generate->add_option("--n", gen.n, "Number of jobs")->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen.seed, "First seed");
  generate->add_option("--count", gen.count, "Number of instances (seeds seed..seed+count-1)");
  generate->add_option("--release", gen.release, "Release range lo,hi");
  generate->add_option("--processing", gen.processing, "Processing range lo,hi");
  generate->add_option("--delivery", gen.delivery, "Delivery range lo,hi");
  generate->add_flag("--planted-long", gen.planted_long, "Make the last job long");
  generate->add_option("--out", gen.out, "Output directory (stdout when absent)");

  RunOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment from a JSON config");
  run_cmd->add_option("--config", run_opts.config, "Config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", run_opts.seeds, "Run seed(s), replaces the config list");
  run_cmd->add_option("--eps", run_opts.eps, "Approximation parameter, e.g. 1 or 1/2");
  run_cmd->add_option("--pop-size", run_opts.pop_size, "Population size m");
  run_cmd->add_option("--budget", run_opts.budget, "Generation budget per run");
  run_cmd->add_option("--out", run_opts.out, "Output directory for rows.csv and summary.json");
  run_cmd->add_flag("--verify", run_opts.verify, "Exit nonzero when a report check fails");

  BoundsOptions b;
  auto* bounds = app.add_subcommand("bounds", "Print drift, runtime and schema bounds");
  bounds->add_option("--n", b.n, "Number of jobs")->check(CLI::PositiveNumber);
  bounds->add_option("--pop-size", b.pop_size, "Population size m");
  bounds->add_option("--eps", b.eps, "Approximation parameter");
  bounds->add_option("--start-distance", b.start_distance, "Initial distance D (default n)");
  bounds->add_option("--gamma", b.gamma, "Top-level walk probability gamma");
  bounds->add_option("--lambda", b.lambda, "Top-level walk step bound lambda");
  bounds->add_option("--walk-constant", b.walk_constant, "Constant for the n^(2+1/eps) column");
  bounds->add_option("--P", b.P, "Per-position success probability for the Chernoff bounds");
  bounds->add_option("--delta", b.delta, "Chernoff deviation delta");
  bounds->add_option("--alpha", b.alpha, "Recombination floor alpha for the small-count bound");
  bounds->add_option("--count-s0", b.count_s0, "Leading-schema count for the small-count bound");
  bounds->add_option("--beta", b.beta, "Mutation preservation floor beta");

  auto* oracle = app.add_subcommand("oracle", "Exact cross-check oracles");
  oracle->require_subcommand(1);
  std::string solve_file;
  std::size_t solve_limit = scheduling::kDefaultSolverLimit;
  auto* solve = oracle->add_subcommand("solve", "Exact minimum lateness");
  solve->add_option("instance", solve_file, "Instance file")->required()->check(CLI::ExistingFile);
  solve->add_option("--limit", solve_limit, "Largest n the solver accepts");

  std::string chain_file;
  auto* hitting = oracle->add_subcommand("hitting", "Exact hitting times of a chain file vs the drift bound");
  hitting->add_option("chain", chain_file, "Chain file")->required()->check(CLI::ExistingFile);

  CountOptions count;
  auto* count_cmd = oracle->add_subcommand("count", "Exact count distribution of auxFit >= level offspring");
  count_cmd->add_option("instance", count.file, "Instance file")->required()->check(CLI::ExistingFile);
  count_cmd->add_option("--eps", count.eps, "Approximation parameter");
  count_cmd->add_option("--pop-size", count.pop_size, "Population size m");
  count_cmd->add_option("--level", count.level, "Schema level");
  count_cmd->add_option("--seed", count.seed, "Seed of the random population");
  count_cmd->add_option("--stage", count.stage, "recombination or mutation")
      ->check(CLI::IsMember({"recombination", "mutation"}));
  count_cmd->add_option("--samples", count.samples, "Also run a Monte Carlo estimate with this many samples");

  std::string design_file;
  std::string design_eps = "1";
  auto* design = oracle->add_subcommand("design", "Check the auxiliary-fitness design conditions");
  design->add_option("instance", design_file, "Instance file")->required()->check(CLI::ExistingFile);
  design->add_option("--eps", design_eps, "Approximation parameter");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) return cmd_generate(gen);
    if (*run_cmd) return cmd_run(run_opts);
    if (*bounds) return cmd_bounds(b);
    if (*solve) return cmd_oracle_solve(solve_file, solve_limit);
    if (*hitting) return cmd_oracle_hitting(chain_file);
    if (*count_cmd) return cmd_oracle_count(count);
    if (*design) return cmd_oracle_design(design_file, design_eps);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
