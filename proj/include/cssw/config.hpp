// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CSSW_CONFIG_HPP_
#define CSSW_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "cssw/model.hpp"

namespace cssw {

enum class PriceKind { gbm, ar1, garch };

struct GridConfig {
  std::string kind = "equidistant";  // or "stochastic"
  double lo = 0.0;
  double hi = 20.0;
  std::size_t size = 4001;
  // Stochastic grids cluster a simulated cloud: this many paths, started
  // at cloud_start, pooled over all epochs.
  std::size_t cloud_paths = 1000;
  double cloud_start = 0.4;
};

// One experiment, fully resolved. Serializes to/from the JSON config
// format; unknown keys are rejected by name.
struct RunConfig {
  std::string preset;  // name the config was derived from, if any

  // model
  PriceKind kind = PriceKind::gbm;
  double mu = 0.09;
  double sigma2 = 0.08;
  double phi = 1.0;    // log-price persistence (ar1, garch)
  double kappa = 0.05;  // garch drift
  double beta1 = 0.8;   // garch variance recursion
  double beta2 = 0.1;
  double sigma0_sq = 0.28284271247461903;  // garch initial variance
  double y0_sq = 1.0;                      // garch initial squared shock
  std::vector<double> z0 = {1.0};          // initial prices (levels)
  std::vector<Mode> modes = {Mode::opened, Mode::closed};

  EconomicParams econ;
  GridConfig grid;
  std::size_t sample_size = 20000;  // disturbance atoms

  // solver
  bool fast = false;
  std::size_t neighbors = 1;

  // diagnostics
  std::size_t num_paths = 1000;
  std::size_t num_subsims = 1000;
  int policy_epoch = 0;

  // output
  std::string out_dir = "out";

  std::uint64_t seed = 0;
};

const std::vector<std::string>& preset_names();
// Throws std::invalid_argument for unknown names.
RunConfig preset_config(const std::string& name);

// Parse a config document: either a bare config or a manifest produced by
// a previous run (its embedded "config" object is used). A "preset" key
// seeds defaults before the remaining keys overlay them. Unknown keys
// raise std::invalid_argument listing every offending key path.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

std::string config_json(const RunConfig& config);
// FNV-1a of the canonical serialization.
std::uint64_t config_hash(const RunConfig& config);

const char* kind_name(PriceKind kind);
const char* mode_name(Mode mode);
const char* action_name(Action action);

// Augmented initial state for a price level.
std::vector<double> initial_state(const RunConfig& config, double z0);

}  // namespace cssw

#endif  // CSSW_CONFIG_HPP_
