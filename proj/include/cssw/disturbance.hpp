// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CSSW_DISTURBANCE_HPP_
#define CSSW_DISTURBANCE_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cssw/matrix.hpp"

namespace cssw {

// Finite discretization of the random transition matrix W: atoms W(k) with
// probability weights nu(k). Every atom maps augmented states to augmented
// states, i.e. its first row is (1, 0, ..., 0).
struct DisturbanceSampling {
  std::vector<Matrix> atoms;
  std::vector<double> weights;

  std::size_t size() const { return atoms.size(); }
  std::size_t dim() const { return atoms.empty() ? 0 : atoms.front().rows(); }
};

// Midpoint quantiles Phi^{-1}((k - 1/2)/n), k = 1..n, uniform weights.
// Antisymmetric by construction: points[k] == -points[n-1-k] exactly.
struct NormalSampling {
  std::vector<double> points;
  std::vector<double> weights;
};
NormalSampling normal_quantile_sampling(std::size_t n);

struct GbmParams {
  double mu = 0.09;
  double sigma2 = 0.08;
  double dt = 0.25;
};

struct Ar1Params {
  double mu = 0.09;
  double sigma2 = 0.08;
  double phi = 1.0;
  double dt = 0.25;
};

struct GarchParams {
  double kappa = 0.05;
  double phi = 1.0;
  double beta1 = 0.8;
  double beta2 = 0.1;
  double sigma2 = 0.28284271247461903;  // sqrt(0.08), long-run coefficient
  double dt = 0.25;
  double sigma0_sq = 0.28284271247461903;
  double y0_sq = 1.0;
};

// One-step transition matrices driven by a single standard normal draw.
// d = 2, state (1, price): price multiplies by exp((mu - sigma2/2) dt + sigma sqrt(dt) N).
Matrix gbm_step(const GbmParams& p, double n);
// d = 2, state (1, log price): log price gets drift plus phi times itself.
Matrix ar1_step(const Ar1Params& p, double n);
// d = 4, state (1, sigma_t^2, Y_t^2, log price); variance recursion
// sigma_{t+1}^2 = sigma2 beta + beta1 sigma_t^2 + beta2 Y_t^2 with
// beta = 1 - beta1 - beta2, and the same draw feeds Y^2 and the log price.
Matrix garch_step(const GarchParams& p, double n);

DisturbanceSampling gbm_sampling(const GbmParams& p, std::size_t n);
DisturbanceSampling ar1_sampling(const Ar1Params& p, std::size_t n);
DisturbanceSampling garch_sampling(const GarchParams& p, std::size_t n);

// Continuous one-step law: N -> W(N), used for exact-law simulation.
struct DisturbanceLaw {
  std::size_t dim = 0;
  std::function<Matrix(double)> step;
};

// Simulated trajectories plus the driving draws, z_{t+1} = W(N_{t+1}) z_t.
struct PathSet {
  std::size_t num_paths = 0;
  std::size_t num_steps = 0;  // T
  std::size_t dim = 0;
  std::vector<Matrix> states;  // per path, (T+1) x d
  Matrix shocks;               // num_paths x T, standard normals
};

// Path k consumes its own stream keyed by (seed, k); identical output for
// any thread count or call order.
PathSet simulate_paths(const DisturbanceLaw& law, const std::vector<double>& z0, std::size_t steps,
                       std::size_t num_paths, std::uint64_t seed);

// Rows: path, t, state coordinates.
void save_paths_csv(const PathSet& paths, const std::string& path);

}  // namespace cssw

#endif  // CSSW_DISTURBANCE_HPP_
