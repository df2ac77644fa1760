// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0

#include "cssw/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "cssw/kmeans.hpp"
#include "cssw/rng.hpp"

namespace cssw {
namespace {

StateSpec spec_for(PriceKind kind) {
  switch (kind) {
    case PriceKind::gbm:
      return {2, 1, PriceCoord::level};
    case PriceKind::ar1:
      return {2, 1, PriceCoord::log};
    case PriceKind::garch:
      return {4, 3, PriceCoord::log};
  }
  throw std::logic_error("spec_for: bad kind");
}

void validate(const RunConfig& c) {
  if (c.sample_size == 0)
    throw std::invalid_argument("config: sampling.size must be positive");
  if (c.num_paths == 0 || c.num_subsims == 0)
    throw std::invalid_argument("config: diagnostics sizes must be positive");
  if (c.neighbors == 0)
    throw std::invalid_argument("config: solver.neighbors must be positive");
  if (c.z0.empty()) throw std::invalid_argument("config: model.z0 is empty");
  if (c.modes.empty())
    throw std::invalid_argument("config: model.modes is empty");
  if (c.kind != PriceKind::gbm)
    for (const double z : c.z0)
      if (z <= 0.0)
        throw std::invalid_argument("config: log-price models need z0 > 0");
  if (c.kind == PriceKind::garch && c.grid.kind != "stochastic")
    throw std::invalid_argument("config: garch needs grid.kind = stochastic");
  if (c.grid.kind == "stochastic") {
    if (c.grid.cloud_paths == 0)
      throw std::invalid_argument("config: grid.cloud_paths must be positive");
    if (c.kind != PriceKind::gbm && c.grid.cloud_start <= 0.0)
      throw std::invalid_argument("config: grid.cloud_start must be positive");
  }
}

Grid build_grid(const RunConfig& c, const ResourceModel& model,
                const DisturbanceLaw& law) {
  if (c.grid.kind == "equidistant")
    return equidistant_grid(c.grid.lo, c.grid.hi, c.grid.size);
  // Cloud seeded away from the diagnostic streams so grid construction
  // never shares draws with the bound estimators.
  const std::uint64_t cloud_seed =
      splitmix64(c.seed ^ static_cast<std::uint64_t>(StreamTag::cloud));
  const std::vector<double> start = initial_state(c, c.grid.cloud_start);
  const std::size_t steps = static_cast<std::size_t>(model.num_epochs());
  const PathSet paths =
      simulate_paths(law, start, steps, c.grid.cloud_paths, cloud_seed);
  Matrix cloud(paths.num_paths * (steps + 1), law.dim);
  std::size_t row = 0;
  for (std::size_t k = 0; k < paths.num_paths; ++k)
    for (std::size_t t = 0; t <= steps; ++t, ++row)
      for (std::size_t cidx = 0; cidx < law.dim; ++cidx)
        cloud(row, cidx) = paths.states[k](t, cidx);
  return stochastic_grid(cloud, c.grid.size, c.seed);
}

std::string resolve_dir(const RunConfig& c, const std::string& dir) {
  const std::string out = dir.empty() ? c.out_dir : dir;
  std::filesystem::create_directories(out);
  return out;
}

std::string values_path(const std::string& dir) { return dir + "/values.bin"; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void append_row(std::string* out, const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  *out += buf;
}

}  // namespace

Experiment make_experiment(const RunConfig& config) {
  validate(config);
  const StateSpec spec = spec_for(config.kind);
  DisturbanceLaw law;
  DisturbanceSampling sampling;
  switch (config.kind) {
    case PriceKind::gbm: {
      const GbmParams p{config.mu, config.sigma2, config.econ.dt};
      law = {2, [p](double n) { return gbm_step(p, n); }};
      sampling = gbm_sampling(p, config.sample_size);
      break;
    }
    case PriceKind::ar1: {
      const Ar1Params p{config.mu, config.sigma2, config.phi, config.econ.dt};
      law = {2, [p](double n) { return ar1_step(p, n); }};
      sampling = ar1_sampling(p, config.sample_size);
      break;
    }
    case PriceKind::garch: {
      GarchParams p;
      p.kappa = config.kappa;
      p.phi = config.phi;
      p.beta1 = config.beta1;
      p.beta2 = config.beta2;
      // The variance recursion's long-run coefficient is the root of the
      // squared-volatility setting shared with the other models.
      p.sigma2 = std::sqrt(config.sigma2);
      p.dt = config.econ.dt;
      p.sigma0_sq = config.sigma0_sq;
      p.y0_sq = config.y0_sq;
      law = {4, [p](double n) { return garch_step(p, n); }};
      sampling = garch_sampling(p, config.sample_size);
      break;
    }
  }
  ResourceModel model(config.econ, spec);
  if (config.policy_epoch < 0 || config.policy_epoch >= model.num_epochs())
    throw std::invalid_argument("config: diagnostics.policy_epoch out of range");
  Grid grid = build_grid(config, model, law);
  return Experiment{config, std::move(model), std::move(law),
                    std::move(sampling), std::move(grid)};
}

ValueDims experiment_dims(const Experiment& ex) {
  return ValueDims{ex.model.num_epochs(), ex.model.num_positions(),
                   ex.grid.size(), ex.grid.dim()};
}

void solve_experiment(const Experiment& ex, ValueStore& store) {
  SolveOptions options;
  options.fast = ex.config.fast;
  options.neighbors = ex.config.neighbors;
  backward_induction(ex.model, ex.grid, ex.sampling, store, options);
}

std::vector<BoundsRow> bounds_rows(const Experiment& ex,
                                   const ValueStore& store) {
  BoundOptions options;
  options.num_paths = ex.config.num_paths;
  options.num_subsims = ex.config.num_subsims;
  options.seed = ex.config.seed;
  std::vector<BoundsRow> rows;
  for (const double z0 : ex.config.z0) {
    const std::vector<double> state = initial_state(ex.config, z0);
    for (const Mode mode : ex.config.modes) {
      const Position start{ex.config.econ.max_reserve, mode};
      BoundsRow row;
      row.z0 = z0;
      row.mode = mode;
      row.estimate = pathwise_bounds(ex.model, ex.law, store, start,
                                     state.data(), options);
      rows.push_back(row);
    }
  }
  return rows;
}

std::string bounds_csv(const Experiment& ex,
                       const std::vector<BoundsRow>& rows) {
  std::string out =
      "model,z0,mode,primal,primal_se,dual,dual_se,paths,subsims,seed\n";
  for (const BoundsRow& row : rows)
    append_row(&out, "%s,%.10g,%s,%.10g,%.10g,%.10g,%.10g,%zu,%zu,%llu\n",
               kind_name(ex.config.kind), row.z0, mode_name(row.mode),
               row.estimate.lower, row.estimate.lower_se, row.estimate.upper,
               row.estimate.upper_se, row.estimate.num_paths,
               row.estimate.num_subsims,
               static_cast<unsigned long long>(ex.config.seed));
  return out;
}

std::string policy_csv(const Experiment& ex, const ValueStore& store) {
  const int t = ex.config.policy_epoch;
  const std::vector<Matrix> cont = store.continuation(t + 1);
  std::string out = "reserve,mode,price,action_below,action_above\n";
  std::vector<Mode> modes;
  for (const Mode mode : ex.config.modes)
    if (std::find(modes.begin(), modes.end(), mode) == modes.end())
      modes.push_back(mode);
  for (const Mode mode : modes)
    for (const PolicyThreshold& th :
         policy_boundaries(ex.model, cont, t, ex.grid, mode))
      append_row(&out, "%d,%s,%.10g,%s,%s\n", th.reserve, mode_name(th.mode),
                 th.price, action_name(th.below), action_name(th.above));
  return out;
}

std::vector<std::string> run_solve(const RunConfig& config,
                                   const std::string& dir) {
  const Experiment ex = make_experiment(config);
  const std::string out = resolve_dir(config, dir);
  const std::string vpath = values_path(out);

  const auto started = std::chrono::steady_clock::now();
  {
    FileValueStore store(vpath, experiment_dims(ex));
    solve_experiment(ex, store);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();

  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config_hash(config)));
  nlohmann::json manifest{
      {"config", nlohmann::json::parse(config_json(config))},
      {"config_hash", hash},
      {"version", kVersion},
      {"timings", {{"solve_seconds", seconds}}}};
  const std::string mpath = out + "/manifest.json";
  write_text(mpath, manifest.dump(2) + "\n");
  return {vpath, mpath};
}

std::vector<std::string> run_bounds(const RunConfig& config,
                                    const std::string& dir) {
  const Experiment ex = make_experiment(config);
  const std::string out = resolve_dir(config, dir);
  const std::string vpath = values_path(out);
  if (!std::filesystem::exists(vpath))
    throw std::runtime_error("value dump missing, run solve first: " + vpath);
  FileValueStore store(vpath);
  const ValueDims dims = experiment_dims(ex);
  const ValueDims& have = store.dims();
  if (have.horizon != dims.horizon || have.positions != dims.positions ||
      have.grid_size != dims.grid_size || have.dim != dims.dim)
    throw std::runtime_error("value dump does not match config: " + vpath);
  const std::string path = out + "/bounds.csv";
  write_text(path, bounds_csv(ex, bounds_rows(ex, store)));
  return {path};
}

std::vector<std::string> run_policy(const RunConfig& config,
                                    const std::string& dir) {
  const Experiment ex = make_experiment(config);
  const std::string out = resolve_dir(config, dir);
  const std::string vpath = values_path(out);
  if (!std::filesystem::exists(vpath))
    throw std::runtime_error("value dump missing, run solve first: " + vpath);
  FileValueStore store(vpath);
  const std::string path = out + "/policy.csv";
  write_text(path, policy_csv(ex, store));
  return {path};
}

std::vector<std::string> run_paths(const RunConfig& config,
                                   const std::string& dir) {
  const Experiment ex = make_experiment(config);
  const std::string out = resolve_dir(config, dir);
  const std::vector<double> start = initial_state(config, config.z0.front());
  const PathSet paths = simulate_paths(
      ex.law, start, static_cast<std::size_t>(ex.model.num_epochs()),
      config.num_paths, config.seed);
  const std::string path = out + "/paths.csv";
  save_paths_csv(paths, path);
  return {path};
}

std::vector<std::string> run_grid(const RunConfig& config,
                                  const std::string& dir) {
  const Experiment ex = make_experiment(config);
  const std::string out = resolve_dir(config, dir);
  const std::string path = out + "/grid.csv";
  save_grid_csv(ex.grid, path);
  return {path};
}

std::vector<RunConfig> table_configs(int table) {
  std::vector<RunConfig> configs;
  switch (table) {
    case 1:
      configs.push_back(preset_config("gbm-bs"));
      break;
    case 2:
      for (const double phi : {1.0, 0.8, 0.6}) {
        RunConfig c = preset_config("ar1");
        c.phi = phi;
        configs.push_back(c);
      }
      break;
    case 3:
      for (const double phi : {1.0, 0.6})
        for (const double w : {0.0, 0.5}) {
          RunConfig c = preset_config("wastage");
          c.phi = phi;
          c.econ.wastage = w;
          configs.push_back(c);
        }
      break;
    case 4:
      for (const double phi : {1.0, 0.6})
        for (const double b : {0.0, 1.0}) {
          RunConfig c = preset_config("delivery");
          c.phi = phi;
          c.econ.penalty_scale = b;
          configs.push_back(c);
        }
      break;
    case 5:
      for (const double phi : {1.0, 0.8, 0.6}) {
        RunConfig c = preset_config("garch");
        c.phi = phi;
        configs.push_back(c);
      }
      break;
    default:
      throw std::invalid_argument("repro-table: table must be 1..5");
  }
  return configs;
}

std::vector<std::string> run_table(int table, const std::string& dir,
                                   std::uint64_t seed) {
  std::vector<std::string> written;
  for (RunConfig config : table_configs(table)) {
    config.seed = seed;
    char label[96];
    std::snprintf(label, sizeof label, "%s/t%d-%s-phi%g", dir.c_str(), table,
                  kind_name(config.kind), config.phi);
    std::string sub = label;
    if (config.econ.wastage != 0.0) {
      std::snprintf(label, sizeof label, "-w%g", config.econ.wastage);
      sub += label;
    }
    if (config.econ.penalty_scale != 0.0) {
      std::snprintf(label, sizeof label, "-b%g", config.econ.penalty_scale);
      sub += label;
    }
    for (std::string& path : run_solve(config, sub))
      written.push_back(std::move(path));
    for (std::string& path : run_bounds(config, sub))
      written.push_back(std::move(path));
  }
  return written;
}

}  // namespace cssw
