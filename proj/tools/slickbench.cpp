// slickbench: times slick hash tables against std::unordered_map and std::map.
//
//   slickbench bench [--block-size N ...] [--csv out.csv]   one configuration
//   slickbench grid  [--csv out.csv]                        hyperparameter sweep
//
// Without --csv the CSV goes to stdout. Exit code is nonzero on any
// validation failure.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slick/bench/csv.hpp"
#include "slick/bench/harness.hpp"

namespace {

using slick::CleaningPolicy;
using slick::SlickConfig;
using namespace slick::bench;

struct Options {
  std::size_t capacity = 100'000;
  std::size_t ops = 100'000;
  SlickConfig config = SlickConfig::defaults(100'000);
  std::uint64_t seed = 0;
  std::size_t reps = 3;
  std::vector<std::string> phases{"insert", "query", "delete"};
  std::vector<std::string> baselines{"both"};
  std::string cleaning = "targeted";
  std::string csv;
  bool paper_scale = false;
};

void add_common(CLI::App& cmd, Options& o) {
  cmd.add_option("--capacity", o.capacity, "Main-table slots")->check(CLI::PositiveNumber);
  cmd.add_option("--ops", o.ops, "Keys inserted, queried and deleted (default: capacity)")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--seed", o.seed, "Seed for keys and table hashing");
  cmd.add_option("--reps", o.reps, "Repetitions")->check(CLI::PositiveNumber);
  cmd.add_option("--phases", o.phases, "Phases: insert, query, delete")->delimiter(',');
  cmd.add_option("--baselines", o.baselines,
                 "Baselines: unordered_map, ordered_map, both or none")
      ->delimiter(',');
  cmd.add_option("--cleaning", o.cleaning, "Backyard cleaning on delete")
      ->check(CLI::IsMember({"none", "targeted", "naive"}));
  cmd.add_option("--csv", o.csv, "Output CSV path (default: stdout)");
  cmd.add_flag("--paper-scale", o.paper_scale, "Capacity and ops of 2,000,000");
}

BenchPlan make_plan(const Options& o, const CLI::App& cmd) {
  BenchPlan plan = o.paper_scale ? BenchPlan::paper_scale() : BenchPlan::desk();
  if (!o.paper_scale || cmd.count("--capacity") > 0) plan.capacity = o.capacity;
  if (cmd.count("--ops") > 0)
    plan.n_ops = o.ops;
  else
    plan.n_ops = plan.capacity;
  plan.seed = o.seed;
  plan.repetitions = o.reps;

  plan.phases.clear();
  for (const auto& name : o.phases) {
    const auto phase = parse_phase(name);
    if (!phase) throw BenchError("unknown phase '" + name + "'");
    if (std::find(plan.phases.begin(), plan.phases.end(), *phase) == plan.phases.end())
      plan.phases.push_back(*phase);
  }

  plan.baselines.clear();
  for (const auto& name : o.baselines) {
    if (name == "none") continue;
    if (name == "both") {
      plan.baselines = {Baseline::UnorderedMap, Baseline::OrderedMap};
      continue;
    }
    const auto baseline = parse_baseline(name);
    if (!baseline) throw BenchError("unknown baseline '" + name + "'");
    if (std::find(plan.baselines.begin(), plan.baselines.end(), *baseline) ==
        plan.baselines.end())
      plan.baselines.push_back(*baseline);
  }

  if (o.cleaning == "none") plan.cleaning = CleaningPolicy::Kind::None;
  if (o.cleaning == "targeted") plan.cleaning = CleaningPolicy::Kind::Targeted;
  if (o.cleaning == "naive") plan.cleaning = CleaningPolicy::Kind::NaiveFull;
  return plan;
}

void print_profiler_hint(int argc, char** argv) {
  std::ostringstream cmd;
  for (int i = 0; i < argc; ++i) cmd << (i ? " " : "") << argv[i];
  std::cerr << "hardware counters: perf stat -e cache-misses,branch-misses -- " << cmd.str()
            << '\n';
}

int emit(const GridResult& result, const Options& o) {
  for (const auto& f : result.failures)
    std::cerr << "config " << f.label << " rejected: " << f.message << '\n';
  if (o.csv.empty())
    write_csv(result.records, std::cout);
  else
    write_csv(result.records, std::filesystem::path(o.csv));
  return result.failures.empty() ? EXIT_SUCCESS : EXIT_FAILURE;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark harness for sliding-block hash tables"};
  app.require_subcommand(1);

  Options bench_opts;
  auto* bench = app.add_subcommand("bench", "Benchmark one slick configuration");
  add_common(*bench, bench_opts);
  bench->add_option("--block-size", bench_opts.config.block_size, "B")
      ->check(CLI::PositiveNumber);
  bench->add_option("--sliding-block-size", bench_opts.config.sliding_block_size, "B-hat");
  bench->add_option("--max-offset", bench_opts.config.max_offset, "o-hat");
  bench->add_option("--max-threshold", bench_opts.config.max_threshold, "t-hat")
      ->check(CLI::PositiveNumber);

  Options grid_opts;
  auto* grid = app.add_subcommand("grid", "Run the eight-configuration hyperparameter sweep");
  add_common(*grid, grid_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (bench->parsed()) {
      BenchPlan plan = make_plan(bench_opts, *bench);
      SlickConfig config = bench_opts.config;
      config.capacity = plan.capacity;
      config.seed = plan.seed;
      config.validate();
      plan.configs = {config};
      print_profiler_hint(argc, argv);
      return emit(run_plan(plan), bench_opts);
    }
    BenchPlan plan = make_plan(grid_opts, *grid);
    print_profiler_hint(argc, argv);
    return emit(run_grid(plan), grid_opts);
  } catch (const std::exception& e) {
    std::cerr << "slickbench: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
}
