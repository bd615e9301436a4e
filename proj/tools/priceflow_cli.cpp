// priceflow command-line front end.
//
//   priceflow generate --generate crowd --seed 3 --out market.json
//   priceflow solve    --instance market.json --out prices.json
//   priceflow evaluate --instance market.json --prices prices.json --samples 100 --seed 1
//   priceflow compare  --generate crowd --count 10 --seed 1000 --out table.csv
//
// Exit codes: 0 success, 1 solver failure or violated bounds, 2 I/O or
// configuration error.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "priceflow/eval/evaluate.hpp"
#include "priceflow/instance/generators.hpp"
#include "priceflow/instance/instance_io.hpp"
#include "priceflow/pricer/pricer.hpp"
#include "priceflow/util/error.hpp"

namespace pf = priceflow;

namespace {

constexpr int kExitSolver = 1;
constexpr int kExitConfig = 2;

// Thrown for bad flags or files; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GeneratorConfig {
  std::string kind;  // "ridehail" or "crowd"
  std::uint64_t seed = 1;
  int resources = 0;  // 0 keeps the generator default
  int groups = 0;
  std::string shape = "linear";
  std::string family = "binomial";
  int count = 1;
};

struct Config {
  std::string instance;
  GeneratorConfig gen;
  std::optional<double> delta;
  std::int64_t samples = 100;
  std::uint64_t seed = 0;
  bool exact = false;
  bool check_bounds = false;
  std::string method = "proposed";
  std::vector<std::string> methods = {"proposed", "mrp", "capped_mrp", "grid"};
  std::string prices;
  std::string out;
  std::string samples_csv;
  int suite_size = 1;
  int grid_points = 20;
  bool no_timing = false;
};

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("priceflow");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("PRICEFLOW_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept it when asked for.
    if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
  }
}

pf::ResponseShape parse_shape(const std::string& s) {
  if (s == "linear") return pf::ResponseShape::kLinear;
  if (s == "logistic") return pf::ResponseShape::kLogistic;
  throw ConfigError(fmt::format("unknown shape '{}' (linear|logistic)", s));
}

pf::MarketInstance generate(const GeneratorConfig& g, std::uint64_t seed) {
  if (g.kind == "ridehail") {
    pf::RidehailParams p;
    if (g.resources > 0) p.num_taxis = g.resources;
    if (g.groups > 0) p.num_groups = g.groups;
    p.shape = parse_shape(g.shape);
    return pf::generate_ridehail(seed, p);
  }
  if (g.kind == "crowd") {
    pf::CrowdParams p;
    if (g.resources > 0) p.num_tasks = g.resources;
    if (g.groups > 0) p.num_worker_types = g.groups;
    p.shape = parse_shape(g.shape);
    p.family = pf::parse_family(g.family);
    p.count = g.count;
    return pf::generate_crowdsourcing(seed, p);
  }
  throw ConfigError(fmt::format("unknown generator '{}' (ridehail|crowd)", g.kind));
}

// The instances a command works on: one file, or a generated suite whose
// i-th member uses seed gen.seed + i.
std::vector<std::pair<std::string, pf::MarketInstance>> load_instances(const Config& c) {
  std::vector<std::pair<std::string, pf::MarketInstance>> out;
  if (!c.instance.empty()) {
    if (!std::filesystem::exists(c.instance)) {
      throw ConfigError(fmt::format("instance file '{}' not found", c.instance));
    }
    out.emplace_back(std::filesystem::path(c.instance).stem().string(),
                     pf::read_instance(c.instance));
    return out;
  }
  if (c.gen.kind.empty()) throw ConfigError("need --instance or --generate");
  for (int i = 0; i < c.suite_size; ++i) {
    const std::uint64_t seed = c.gen.seed + static_cast<std::uint64_t>(i);
    out.emplace_back(fmt::format("{}-{}", c.gen.kind, seed), generate(c.gen, seed));
  }
  return out;
}

pf::MarketInstance load_one(const Config& c) {
  auto all = load_instances(c);
  return std::move(all.front().second);
}

pf::PriceAssignment run_method(const pf::MarketInstance& inst, const std::string& method,
                               const Config& c) {
  const double delta = c.delta.value_or(pf::default_delta(inst));
  if (method == "proposed") return pf::solve_prices(inst, delta);
  if (method == "mrp") return pf::price_mrp(inst);
  if (method == "capped_mrp") return pf::price_capped_mrp(inst);
  if (method == "grid") {
    pf::GridSearchOptions o;
    o.points_per_node = c.grid_points;
    o.delta = delta;
    return pf::price_grid_search(inst, o);
  }
  throw ConfigError(
      fmt::format("unknown method '{}' (proposed|mrp|capped_mrp|grid)", method));
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError(fmt::format("cannot write '{}'", path));
  f << text;
  if (!f) throw ConfigError(fmt::format("write to '{}' failed", path));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_generate(const Config& c) {
  if (c.gen.kind.empty()) throw ConfigError("generate needs --generate ridehail|crowd");
  const pf::MarketInstance inst = generate(c.gen, c.gen.seed);
  if (c.out.empty()) {
    std::cout << pf::dump_market(inst.to_data());
  } else {
    pf::write_instance(inst, c.out);
    fmt::print("|U|={} |V|={} |E|={}\n", inst.num_resources(), inst.num_groups(),
               inst.edges().size());
  }
  return 0;
}

int cmd_solve(const Config& c) {
  const pf::MarketInstance inst = load_one(c);
  const auto t0 = std::chrono::steady_clock::now();
  const pf::PriceAssignment pa = run_method(inst, c.method, c);
  const double elapsed = seconds_since(t0);

  if (!c.out.empty()) pf::write_prices(inst, pa, c.out);
  fmt::print("method={} fhat={}\n", pa.method, pa.fhat);
  if (pa.flow) {
    fmt::print("delta={} phases={} augmentations={}\n", pa.flow->delta, pa.flow->stats.phases,
               pa.flow->stats.augmentations);
  }
  if (!c.no_timing) fmt::print("time_seconds={}\n", elapsed);
  for (const auto& note : pa.notes) spdlog::info("{}", note);
  if (c.out.empty()) std::cout << pf::dump_prices(inst, pa);
  return 0;
}

int cmd_evaluate(const Config& c) {
  const pf::MarketInstance inst = load_one(c);
  pf::PriceAssignment pa;
  if (!c.prices.empty()) {
    if (!std::filesystem::exists(c.prices)) {
      throw ConfigError(fmt::format("price file '{}' not found", c.prices));
    }
    pa = pf::read_prices(inst, c.prices);
  } else {
    pa = run_method(inst, c.method, c);
  }

  pf::EvalReport report;
  if (c.exact) {
    pf::ExactOptions o;
    o.delta = c.delta;
    report = pf::exact_expected_profit(inst, pa.prices, o);
  } else {
    report = pf::estimate_expected_profit(inst, pa.prices, c.samples, c.seed, c.delta);
  }
  write_text(c.out, pf::report_json(report));
  if (!c.samples_csv.empty()) write_text(c.samples_csv, pf::samples_csv(report));

  if (c.check_bounds && !(report.lower_bound_ok && report.upper_bound_ok)) {
    spdlog::error("bounds violated: lower margin {}, upper margin {}", report.lower_margin,
                  report.upper_margin);
    return kExitSolver;
  }
  return 0;
}

int cmd_compare(const Config& c) {
  const auto instances = load_instances(c);
  std::string csv = "instance,method,obj,stderr,time_seconds,best\n";
  for (const auto& [name, inst] : instances) {
    struct Row {
      std::string method;
      double obj, stderr_, time;
    };
    std::vector<Row> rows;
    for (const auto& method : c.methods) {
      const auto t0 = std::chrono::steady_clock::now();
      pf::PriceAssignment pa;
      try {
        pa = run_method(inst, method, c);
      } catch (const pf::BudgetExceeded& e) {
        spdlog::warn("{}: skipping {}: {}", name, method, e.what());
        continue;
      }
      const double elapsed = c.no_timing ? 0.0 : seconds_since(t0);
      // Same seed for every method: samples share their random numbers.
      const pf::EvalReport r =
          pf::estimate_expected_profit(inst, pa.prices, c.samples, c.seed, c.delta);
      rows.push_back({method, r.expected_profit, r.std_error, elapsed});
      spdlog::info("{} {} obj={} stderr={}", name, method, r.expected_profit, r.std_error);
    }
    double best = -INFINITY;
    for (const auto& r : rows) best = std::max(best, r.obj);
    for (const auto& r : rows) {
      csv += fmt::format("{},{},{},{},{},{}\n", name, r.method, r.obj, r.stderr_, r.time,
                         r.obj == best ? "true" : "false");
    }
  }
  write_text(c.out, csv);
  return 0;
}

void add_instance_flags(CLI::App* cmd, Config& c, bool suite) {
  cmd->add_option("--instance", c.instance, "Instance JSON file");
  cmd->add_option("--generate", c.gen.kind, "Generate instead of reading: ridehail|crowd")
      ->check(CLI::IsMember({"ridehail", "crowd"}));
  cmd->add_option("--gen-seed", c.gen.seed, "Generator seed (first of the suite)");
  cmd->add_option("--resources", c.gen.resources, "Taxis or tasks (generator default if 0)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--groups", c.gen.groups, "Requester groups or worker types")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--shape", c.gen.shape, "Response shape: linear|logistic")
      ->check(CLI::IsMember({"linear", "logistic"}));
  cmd->add_option("--family", c.gen.family, "Crowd demand family: binomial|poisson")
      ->check(CLI::IsMember({"binomial", "poisson"}));
  cmd->add_option("--count", c.gen.count, "Crowd n_v")->check(CLI::PositiveNumber);
  if (suite) {
    cmd->add_option("--suite", c.suite_size, "Number of generated instances")
        ->check(CLI::PositiveNumber);
  }
  cmd->add_option("--delta", c.delta, "Flow grid step (default 1e-3 * max n_v)")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  Config c;
  CLI::App app{"Price optimization for stochastic bipartite matching markets"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Write a synthetic instance");
  gen->add_option("--generate", c.gen.kind, "ridehail|crowd")
      ->required()
      ->check(CLI::IsMember({"ridehail", "crowd"}));
  gen->add_option("--seed", c.gen.seed, "Generator seed");
  gen->add_option("--resources", c.gen.resources, "Taxis or tasks")->check(CLI::NonNegativeNumber);
  gen->add_option("--groups", c.gen.groups, "Requester groups or worker types")
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--shape", c.gen.shape, "linear|logistic")
      ->check(CLI::IsMember({"linear", "logistic"}));
  gen->add_option("--family", c.gen.family, "binomial|poisson (crowd)")
      ->check(CLI::IsMember({"binomial", "poisson"}));
  gen->add_option("--count", c.gen.count, "n_v (crowd)")->check(CLI::PositiveNumber);
  gen->add_option("--out", c.out, "Output file (stdout if omitted)");

  auto* solve = app.add_subcommand("solve", "Compute prices");
  add_instance_flags(solve, c, false);
  solve->add_option("--method", c.method, "proposed|mrp|capped_mrp|grid");
  solve->add_option("--grid-points", c.grid_points, "Points per group for grid")
      ->check(CLI::PositiveNumber);
  solve->add_option("--out", c.out, "Price file (printed if omitted)");
  solve->add_flag("--no-timing", c.no_timing, "Omit wall time from the output");

  auto* eval = app.add_subcommand("evaluate", "Estimate expected profit of prices");
  add_instance_flags(eval, c, false);
  eval->add_option("--prices", c.prices, "Price file (otherwise computed with --method)");
  eval->add_option("--method", c.method, "Pricing method when --prices is absent");
  eval->add_option("--samples", c.samples, "Monte-Carlo samples")->check(CLI::PositiveNumber);
  eval->add_option("--seed", c.seed, "Sampling seed");
  eval->add_flag("--exact", c.exact, "Enumerate all outcomes instead of sampling");
  eval->add_flag("--check-bounds", c.check_bounds, "Exit 1 unless both profit bounds hold");
  eval->add_option("--out", c.out, "Report JSON (stdout if omitted)");
  eval->add_option("--samples-csv", c.samples_csv, "Per-sample profits as CSV");

  auto* cmp = app.add_subcommand("compare", "Compare pricing methods by Monte-Carlo profit");
  add_instance_flags(cmp, c, true);
  cmp->add_option("--methods", c.methods, "Comma separated methods")->delimiter(',');
  cmp->add_option("--samples", c.samples, "Monte-Carlo samples")->check(CLI::PositiveNumber);
  cmp->add_option("--seed", c.seed, "Sampling seed shared by all methods");
  cmp->add_option("--grid-points", c.grid_points, "Points per group for grid")
      ->check(CLI::PositiveNumber);
  cmp->add_option("--out", c.out, "CSV file (stdout if omitted)");
  cmp->add_flag("--no-timing", c.no_timing, "Write 0 for time_seconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*gen) return cmd_generate(c);
    if (*solve) return cmd_solve(c);
    if (*eval) return cmd_evaluate(c);
    if (*cmp) return cmd_compare(c);
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  } catch (const pf::InstanceError& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  } catch (const pf::Error& e) {
    spdlog::error("{}", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  }
  return 0;
}
