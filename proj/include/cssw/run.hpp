// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0
//
// Experiment assembly and the artifact-producing entry points behind the
// command-line tool. Tests drive the same functions so file formats stay
// in one place.

#ifndef CSSW_RUN_HPP_
#define CSSW_RUN_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "cssw/config.hpp"
#include "cssw/disturbance.hpp"
#include "cssw/duality.hpp"
#include "cssw/grid.hpp"
#include "cssw/model.hpp"
#include "cssw/solver.hpp"
#include "cssw/valuestore.hpp"

namespace cssw {

inline constexpr const char* kVersion = "0.1.0";

// A config resolved into working objects.
struct Experiment {
  RunConfig config;
  ResourceModel model;
  DisturbanceLaw law;
  DisturbanceSampling sampling;
  Grid grid;
};

// Validates the config and builds every component, including the simulated
// cloud grid for stochastic-grid models. Throws std::invalid_argument on
// inconsistent settings.
Experiment make_experiment(const RunConfig& config);

ValueDims experiment_dims(const Experiment& ex);

// Backward induction honoring the solver section of the config.
void solve_experiment(const Experiment& ex, ValueStore& store);

struct BoundsRow {
  double z0 = 0.0;
  Mode mode = Mode::opened;
  BoundEstimate estimate;
};

// One bound estimate per (z0, mode) pair of the config, full starting
// reserve, in config order.
std::vector<BoundsRow> bounds_rows(const Experiment& ex,
                                   const ValueStore& store);

std::string bounds_csv(const Experiment& ex,
                       const std::vector<BoundsRow>& rows);
// Policy switch prices at the config's policy epoch, per reserve and mode.
std::string policy_csv(const Experiment& ex, const ValueStore& store);

// Command bodies. `dir` overrides the config output directory when
// nonempty. Each returns the files it wrote. Failures surface as
// std::invalid_argument (bad configuration) or std::runtime_error.
std::vector<std::string> run_solve(const RunConfig& config,
                                   const std::string& dir);
std::vector<std::string> run_bounds(const RunConfig& config,
                                    const std::string& dir);
std::vector<std::string> run_policy(const RunConfig& config,
                                    const std::string& dir);
std::vector<std::string> run_paths(const RunConfig& config,
                                   const std::string& dir);
std::vector<std::string> run_grid(const RunConfig& config,
                                  const std::string& dir);

// Configurations behind `repro-table N`, one per table block.
std::vector<RunConfig> table_configs(int table);
std::vector<std::string> run_table(int table, const std::string& dir,
                                   std::uint64_t seed);

}  // namespace cssw

#endif  // CSSW_RUN_HPP_
