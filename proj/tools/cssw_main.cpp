// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "cssw/config.hpp"
#include "cssw/run.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  int threads = 0;
  bool fast = false;
  int table = 1;
};

void add_shared(CLI::App* cmd, Options* o) {
  cmd->add_option("--seed", o->seed, "override the config seed");
  cmd->add_option("--threads", o->threads, "worker thread count")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--fast", o->fast, "nearest-neighbor accelerated solver");
  cmd->add_option("--out", o->out, "output directory (overrides config)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convex stochastic switching valuation toolkit"};
  app.require_subcommand(1);
  Options o;

  CLI::App* solve =
      app.add_subcommand("solve", "backward induction; writes values.bin and manifest.json");
  CLI::App* bounds =
      app.add_subcommand("bounds", "primal/dual estimates from a value dump; writes bounds.csv");
  CLI::App* policy =
      app.add_subcommand("policy", "switch-price thresholds; writes policy.csv");
  CLI::App* paths = app.add_subcommand("paths", "sample state paths; writes paths.csv");
  CLI::App* grid = app.add_subcommand("grid", "the experiment grid; writes grid.csv");
  for (CLI::App* cmd : {solve, bounds, policy, paths, grid}) {
    cmd->add_option("--config", o.config_path, "JSON config or manifest")
        ->required()
        ->check(CLI::ExistingFile);
    add_shared(cmd, &o);
  }
  CLI::App* table =
      app.add_subcommand("repro-table", "rerun the configurations behind a results table");
  table->add_option("table", o.table, "table number 1..5")->required();
  add_shared(table, &o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  CLI::App* cmd = app.get_subcommands().front();
  try {
    if (cmd->count("--threads")) omp_set_num_threads(o.threads);
    std::vector<std::string> written;
    if (cmd == table) {
      written = cssw::run_table(o.table, o.out.empty() ? "out" : o.out, o.seed);
    } else {
      cssw::RunConfig config = cssw::load_config(o.config_path);
      if (cmd->count("--seed")) config.seed = o.seed;
      if (cmd->count("--fast")) config.fast = true;
      if (cmd == solve)
        written = cssw::run_solve(config, o.out);
      else if (cmd == bounds)
        written = cssw::run_bounds(config, o.out);
      else if (cmd == policy)
        written = cssw::run_policy(config, o.out);
      else if (cmd == paths)
        written = cssw::run_paths(config, o.out);
      else
        written = cssw::run_grid(config, o.out);
    }
    for (const std::string& path : written) std::cout << path << "\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
