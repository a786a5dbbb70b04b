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

#include "hybridea/harness.hpp"

#include <algorithm>
#include <cmath>
#include <chrono>
#include <fstream>
#include <map>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "hybridea/drift_bounds.hpp"
#include "hybridea/errors.hpp"
#include "hybridea/exact_solver.hpp"
#include "hybridea/scheduling_strategy.hpp"
#include "json.hpp"

namespace hybridea::harness {

using scheduling::Job;
using scheduling::Permutation;
using scheduling::SchedulingInstance;
using json = nlohmann::ordered_json;

namespace {

std::string strip_comment(std::string line) {
  if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
  return line;
}

bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    line = strip_comment(line);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

void check_range(const IntRange& r, const char* name) {
  if (r.lo < 0 || r.hi < r.lo) {
    throw ConfigError(std::string(name) + " range must satisfy 0 <= lo <= hi");
  }
}

std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(10) << v;
  return out.str();
}

IntRange range_from_json(const json& j, const char* name) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(std::string(name) + " must be [lo, hi]");
  return {j[0].get<std::int64_t>(), j[1].get<std::int64_t>()};
}

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number()) return parse_rational(j.dump());
  throw ConfigError("expected a number or rational string");
}

template <class T>
std::optional<double> mean_of(const std::vector<T>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0.0;
  for (const auto x : v) s += static_cast<double>(x);
  return s / static_cast<double>(v.size());
}

template <class T>
std::optional<double> median_of(std::vector<T> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? static_cast<double>(v[mid]) : 0.5 * static_cast<double>(v[mid - 1] + v[mid]);
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

bool trace_is_monotone(const std::vector<GenerationRecord>& records) {
  for (std::size_t t = 1; t < records.size(); ++t) {
    if (records[t].aux_max < records[t - 1].aux_max) return false;
    if (records[t].best_objective > records[t - 1].best_objective) return false;
  }
  return true;
}

struct NamedInstance {
  std::string label;
  SchedulingInstance instance;
};

}  // namespace

SchedulingInstance read_instance(std::istream& in) {
  std::string line;
  if (!next_data_line(in, line)) throw DomainError("instance file is empty");
  std::istringstream head(line);
  long long n = 0;
  std::string extra;
  if (!(head >> n) || n < 1 || (head >> extra)) throw DomainError("first line must be the job count n >= 1");
  std::vector<Job> jobs;
  jobs.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    if (!next_data_line(in, line)) throw DomainError("instance file ends after " + std::to_string(i) + " jobs");
    std::istringstream fields(line);
    std::string r, p, q;
    if (!(fields >> r >> p >> q) || (fields >> extra)) {
      throw DomainError("job line " + std::to_string(i + 1) + " must hold exactly 'r p q'");
    }
    jobs.push_back({parse_rational(r), parse_rational(p), parse_rational(q)});
  }
  if (next_data_line(in, line)) throw DomainError("trailing data after the last job");
  return SchedulingInstance(std::move(jobs));
}

SchedulingInstance read_instance_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path.string());
  try {
    return read_instance(in);
  } catch (const std::exception& e) {
    throw DomainError(path.string() + ": " + e.what());
  }
}

void write_instance(std::ostream& out, const SchedulingInstance& instance) {
  out << instance.size() << '\n';
  for (const auto& j : instance.jobs()) {
    out << format_rational(j.release) << ' ' << format_rational(j.processing) << ' ' << format_rational(j.delivery)
        << '\n';
  }
}

void write_instance_file(const std::filesystem::path& path, const SchedulingInstance& instance) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file " + path.string());
  write_instance(out, instance);
  if (!out) throw std::runtime_error("failed writing instance file " + path.string());
}

SchedulingInstance generate_instance(const GeneratorParams& params, std::uint64_t seed) {
  if (params.n < 1) throw ConfigError("generator needs n >= 1");
  check_range(params.release, "release");
  check_range(params.processing, "processing");
  check_range(params.delivery, "delivery");
  if (params.planted_long_jobs > 1) throw ConfigError("at most one planted long job is supported");
  if (params.planted_long_jobs == 1 && params.n < 2) throw ConfigError("a planted long job needs n >= 2");

  Rng rng(seed);
  auto draw = [&rng](const IntRange& r) { return std::uniform_int_distribution<std::int64_t>(r.lo, r.hi)(rng); };
  std::vector<Job> jobs;
  jobs.reserve(params.n);
  for (std::size_t i = 0; i < params.n; ++i) {
    const auto r = draw(params.release);
    const auto p = draw(params.processing);
    const auto q = draw(params.delivery);
    jobs.push_back({Rational(r), Rational(p), Rational(q)});
  }
  if (params.planted_long_jobs == 1) {
    Rational others(0);
    for (std::size_t i = 0; i + 1 < params.n; ++i) others += jobs[i].processing;
    jobs.back().processing = others + Rational(draw(params.processing));
  }
  return SchedulingInstance(std::move(jobs));
}

void validate(const ExperimentConfig& config) {
  if (config.eps <= 0) throw ConfigError("eps must be positive");
  if (config.pop_size < 2) throw ConfigError("population size must be at least 2");
  if (config.budget && *config.budget < 0) throw ConfigError("budget must be nonnegative");
  if (config.seeds.empty()) throw ConfigError("at least one run seed is required");
  if (config.strategy != "hybrid") throw ConfigError("unknown strategy '" + config.strategy + "'");
  if (config.instance_files.empty() && config.instance_seeds.empty()) {
    throw ConfigError("config needs instance files or generator instance seeds");
  }
  if (config.instance_files.empty()) {
    if (config.generator.n < 1) throw ConfigError("generator needs n >= 1");
    check_range(config.generator.release, "release");
    check_range(config.generator.processing, "processing");
    check_range(config.generator.delivery, "delivery");
  }
  if (!(config.min_success_rate >= 0.0 && config.min_success_rate <= 1.0)) {
    throw ConfigError("min_success_rate must lie in [0, 1]");
  }
  if (config.walk_constant < 0.0) throw ConfigError("walk_constant must be nonnegative");
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "instance_files") {
        c.instance_files = v.get<std::vector<std::string>>();
      } else if (key == "generator") {
        for (const auto& [gk, gv] : v.items()) {
          if (gk == "n") c.generator.n = gv.get<std::size_t>();
          else if (gk == "release") c.generator.release = range_from_json(gv, "release");
          else if (gk == "processing") c.generator.processing = range_from_json(gv, "processing");
          else if (gk == "delivery") c.generator.delivery = range_from_json(gv, "delivery");
          else if (gk == "planted_long_jobs") c.generator.planted_long_jobs = gv.get<std::size_t>();
          else throw ConfigError("unknown generator key '" + gk + "'");
        }
      } else if (key == "instance_seeds") {
        c.instance_seeds = v.get<std::vector<std::uint64_t>>();
      } else if (key == "plant_long_every") {
        c.plant_long_every = v.get<std::uint64_t>();
      } else if (key == "eps") {
        c.eps = rational_from_json(v);
      } else if (key == "pop_size") {
        c.pop_size = v.get<std::size_t>();
      } else if (key == "budget") {
        if (v.is_string() && v.get<std::string>() == "auto") c.budget.reset();
        else c.budget = v.get<std::int64_t>();
      } else if (key == "seeds") {
        c.seeds = v.get<std::vector<std::uint64_t>>();
      } else if (key == "strategy") {
        c.strategy = v.get<std::string>();
      } else if (key == "pair_sampling") {
        const auto s = v.get<std::string>();
        if (s == "with_replacement") c.pair_sampling = PairSampling::with_replacement;
        else if (s == "without_replacement") c.pair_sampling = PairSampling::without_replacement;
        else throw ConfigError("pair_sampling must be with_replacement or without_replacement");
      } else if (key == "await_top_level") {
        c.await_top_level = v.get<bool>();
      } else if (key == "walk_constant") {
        c.walk_constant = v.get<double>();
      } else if (key == "min_success_rate") {
        c.min_success_rate = v.get<double>();
      } else if (key == "solver_limit") {
        c.solver_limit = v.get<std::size_t>();
      } else if (key == "out_dir") {
        c.out_dir = v.get<std::string>();
      } else if (key == "verify") {
        c.verify = v.get<bool>();
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  validate(c);
  return c;
}

ExperimentConfig read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["instance_files"] = c.instance_files;
  j["generator"] = {{"n", c.generator.n},
                    {"release", {c.generator.release.lo, c.generator.release.hi}},
                    {"processing", {c.generator.processing.lo, c.generator.processing.hi}},
                    {"delivery", {c.generator.delivery.lo, c.generator.delivery.hi}},
                    {"planted_long_jobs", c.generator.planted_long_jobs}};
  j["instance_seeds"] = c.instance_seeds;
  j["plant_long_every"] = c.plant_long_every;
  j["eps"] = format_rational(c.eps);
  j["pop_size"] = c.pop_size;
  j["budget"] = c.budget ? json(*c.budget) : json("auto");
  j["seeds"] = c.seeds;
  j["strategy"] = c.strategy;
  j["pair_sampling"] =
      c.pair_sampling == PairSampling::with_replacement ? "with_replacement" : "without_replacement";
  j["await_top_level"] = c.await_top_level;
  j["walk_constant"] = c.walk_constant;
  j["min_success_rate"] = c.min_success_rate;
  j["solver_limit"] = c.solver_limit;
  j["out_dir"] = c.out_dir;
  j["verify"] = c.verify;
  return j.dump(2);
}

bool ExperimentReport::all_checks_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  validate(config);
  ExperimentReport report;
  report.config = config;

  std::vector<NamedInstance> instances;
  if (!config.instance_files.empty()) {
    for (const auto& f : config.instance_files) {
      instances.push_back({std::filesystem::path(f).stem().string(), read_instance_file(f)});
    }
  } else {
    for (const auto s : config.instance_seeds) {
      GeneratorParams params = config.generator;
      if (config.plant_long_every != 0) params.planted_long_jobs = s % config.plant_long_every == 0 ? 1 : 0;
      instances.push_back({"gen-" + std::to_string(s), generate_instance(params, s)});
      if (!config.out_dir.empty()) {
        write_instance_file(std::filesystem::path(config.out_dir) / "instances" / (instances.back().label + ".txt"),
                            instances.back().instance);
      }
    }
  }

  const double walk_exponent = 2.0 + 1.0 / to_double(config.eps);
  std::vector<double> top_hits;
  std::vector<double> sat_hits;
  std::map<std::size_t, std::vector<double>> top_hits_by_n;
  std::map<std::size_t, double> drift_by_n;

  for (const auto& named : instances) {
    const auto shared = std::make_shared<const SchedulingInstance>(named.instance);
    const auto problem = std::make_shared<const scheduling::JacksonProblem>(shared, config.eps);
    const auto hooks = scheduling::make_hooks(problem);
    const auto strategy = scheduling::make_hybrid_strategy(problem, config.pair_sampling);
    const std::size_t n = named.instance.size();

    const auto table = drift::scheduling_level_table(n, config.pop_size);
    const double drift_bound = drift::variable_drift_bound(table, n);
    const double walk_bound = config.walk_constant * std::pow(static_cast<double>(n), walk_exponent);
    const std::int64_t budget =
        config.budget ? *config.budget : static_cast<std::int64_t>(std::ceil(10.0 * (drift_bound + walk_bound)));
    drift_by_n[n] = drift_bound;

    std::optional<Rational> j_star;
    if (n <= config.solver_limit) {
      j_star = scheduling::optimum_lateness(named.instance, config.solver_limit).j_star;
      if (*j_star <= 0) j_star.reset();
    }

    for (const auto seed : config.seeds) {
      Rng init_rng(seed ^ 0x5eedf00dULL);
      auto initial = scheduling::random_population(hooks, n, config.pop_size, init_rng);

      StopRule<Permutation> stop;
      stop.budget = budget;
      stop.top_level = static_cast<int>(n);
      stop.await_top_level = config.await_top_level;
      if (j_star) {
        const Rational js = *j_star;
        const Rational eps = config.eps;
        stop.satisfactory = [shared, js, eps](const Individual<Permutation>& x) {
          return scheduling::satisfactory(*shared, eps, x.genome, js);
        };
      }
      const auto trace = run(std::move(initial), strategy, hooks, stop, seed);

      RunRow row;
      row.instance = named.label;
      row.n = n;
      row.long_jobs = problem->partition().long_jobs.size();
      row.seed = seed;
      row.budget = budget;
      row.top_level_hit = trace.top_level_hit;
      row.satisfactory_hit = trace.satisfactory_hit;
      const auto& members = trace.final_population.members;
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      for (const auto& x : members) best = std::min(best, scheduling::lateness_ticks(named.instance, x.genome));
      row.final_best_lateness = named.instance.from_ticks(best);
      row.j_star = j_star;
      if (j_star) row.ratio = to_double(row.final_best_lateness / *j_star);
      row.drift_bound = drift_bound;
      row.walk_bound = walk_bound;
      row.monotone = trace_is_monotone(trace.records);

      if (row.top_level_hit) {
        top_hits.push_back(static_cast<double>(*row.top_level_hit));
        top_hits_by_n[n].push_back(static_cast<double>(*row.top_level_hit));
      }
      if (row.satisfactory_hit) {
        sat_hits.push_back(static_cast<double>(*row.satisfactory_hit));
        ++report.successes;
      }
      report.rows.push_back(std::move(row));
    }
  }

  report.success_rate = report.rows.empty() ? 0.0 : static_cast<double>(report.successes) / report.rows.size();
  report.mean_top_level_hit = mean_of(top_hits);
  report.median_top_level_hit = median_of(top_hits);
  report.mean_satisfactory_hit = mean_of(sat_hits);
  report.median_satisfactory_hit = median_of(sat_hits);

  // Checks: evaluated always, enforced through the exit status with --verify.
  std::size_t below_one = 0;
  std::size_t over_ratio = 0;
  std::size_t non_monotone = 0;
  const double ratio_cap = 1.0 + to_double(config.eps);
  for (const auto& row : report.rows) {
    if (row.ratio && *row.ratio < 1.0) ++below_one;
    if (row.ratio && row.satisfactory_hit && *row.ratio > ratio_cap * (1.0 + 1e-12)) ++over_ratio;
    if (!row.monotone) ++non_monotone;
  }
  report.checks.push_back({"ratio_at_least_one", below_one == 0, std::to_string(below_one) + " rows below 1"});
  report.checks.push_back(
      {"successful_ratio_within_1_plus_eps", over_ratio == 0, std::to_string(over_ratio) + " rows above 1+eps"});
  report.checks.push_back({"hybrid_elitist_monotone", non_monotone == 0,
                           std::to_string(non_monotone) + " traces with a decreasing AuxMax or best lateness"});
  report.checks.push_back({"success_rate", report.success_rate >= config.min_success_rate,
                           format_double(report.success_rate) + " vs required " +
                               format_double(config.min_success_rate)});
  for (const auto& [n, hits] : top_hits_by_n) {
    const double mean = *mean_of(hits);
    report.checks.push_back({"mean_top_level_hit_n" + std::to_string(n), mean <= drift_by_n[n],
                             format_double(mean) + " vs drift bound " + format_double(drift_by_n[n])});
  }

  if (!config.out_dir.empty()) write_report(report, config.out_dir);
  return report;
}

std::string render_rows_csv(const ExperimentReport& report, const std::optional<std::string>& timestamp) {
  std::ostringstream out;
  if (timestamp) out << "# timestamp: " << *timestamp << '\n';
  out << "instance,n,long_jobs,seed,budget,top_level_hit,satisfactory_hit,final_best_lateness,j_star,ratio,"
         "drift_bound,walk_bound,monotone\n";
  auto opt_int = [](const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : std::string(); };
  for (const auto& r : report.rows) {
    out << r.instance << ',' << r.n << ',' << r.long_jobs << ',' << r.seed << ',' << r.budget << ','
        << opt_int(r.top_level_hit) << ',' << opt_int(r.satisfactory_hit) << ','
        << format_rational(r.final_best_lateness) << ',' << (r.j_star ? format_rational(*r.j_star) : "") << ','
        << (r.ratio ? format_double(*r.ratio) : "") << ',' << format_double(r.drift_bound) << ','
        << format_double(r.walk_bound) << ',' << (r.monotone ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string render_summary_json(const ExperimentReport& report) {
  json j;
  j["config"] = json::parse(config_to_json(report.config));
  j["runs"] = report.rows.size();
  j["successes"] = report.successes;
  j["success_rate"] = report.success_rate;
  j["top_level_hit"] = {{"mean", optional_json(report.mean_top_level_hit)},
                        {"median", optional_json(report.median_top_level_hit)}};
  j["satisfactory_hit"] = {{"mean", optional_json(report.mean_satisfactory_hit)},
                           {"median", optional_json(report.median_satisfactory_hit)}};
  std::set<std::size_t> sizes;
  for (const auto& r : report.rows) sizes.insert(r.n);
  json theory = json::array();
  for (const auto n : sizes) {
    const auto row = std::find_if(report.rows.begin(), report.rows.end(), [n](const RunRow& r) { return r.n == n; });
    theory.push_back({{"n", n},
                      {"drift_bound", row->drift_bound},
                      {"walk_bound", row->walk_bound},
                      {"walk_exponent", 2.0 + 1.0 / to_double(report.config.eps)},
                      {"walk_constant", report.config.walk_constant}});
  }
  j["theory"] = theory;
  json checks = json::array();
  for (const auto& c : report.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

void write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto now = std::chrono::system_clock::now();
  const auto stamp = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  {
    std::ofstream rows(dir / "rows.csv");
    if (!rows) throw std::runtime_error("cannot write " + (dir / "rows.csv").string());
    rows << render_rows_csv(report, "unix " + std::to_string(stamp));
  }
  std::ofstream summary(dir / "summary.json");
  if (!summary) throw std::runtime_error("cannot write " + (dir / "summary.json").string());
  summary << render_summary_json(report);
}

}  // namespace hybridea::harness
