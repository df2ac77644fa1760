// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0

#include "cssw/disturbance.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "cssw/rng.hpp"

namespace cssw {

namespace {

inline void matvec(const Matrix& w, const double* z, double* out) {
  const std::size_t d = w.rows();
  for (std::size_t c = 0; c < d; ++c) {
    double acc = 0.0;
    const double* row = w.row(c);
    for (std::size_t j = 0; j < d; ++j) acc = std::fma(row[j], z[j], acc);
    out[c] = acc;
  }
}

DisturbanceSampling map_sampling(std::size_t n, const std::function<Matrix(double)>& step) {
  if (n == 0) throw std::invalid_argument("disturbance sampling: n must be positive");
  NormalSampling q = normal_quantile_sampling(n);
  DisturbanceSampling s;
  s.atoms.reserve(n);
  for (double nk : q.points) s.atoms.push_back(step(nk));
  s.weights = std::move(q.weights);
  return s;
}

}  // namespace

NormalSampling normal_quantile_sampling(std::size_t n) {
  if (n == 0) throw std::invalid_argument("normal_quantile_sampling: n must be positive");
  NormalSampling s;
  s.points.resize(n);
  s.weights.assign(n, 1.0 / static_cast<double>(n));
  // Lower half computed, upper half mirrored, so the antisymmetry
  // N_k = -N_{n+1-k} holds exactly in floating point.
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double p = (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    s.points[k] = normal_quantile(p);
    s.points[n - 1 - k] = -s.points[k];
  }
  if (n % 2 == 1) s.points[n / 2] = 0.0;
  return s;
}

Matrix gbm_step(const GbmParams& p, double n) {
  const double sigma = std::sqrt(p.sigma2);
  const double factor = std::exp((p.mu - 0.5 * p.sigma2) * p.dt + sigma * std::sqrt(p.dt) * n);
  return Matrix::from_rows({{1.0, 0.0}, {0.0, factor}});
}

Matrix ar1_step(const Ar1Params& p, double n) {
  const double sigma = std::sqrt(p.sigma2);
  const double drift = (p.mu - 0.5 * p.sigma2) * p.dt + sigma * std::sqrt(p.dt) * n;
  return Matrix::from_rows({{1.0, 0.0}, {drift, p.phi}});
}

Matrix garch_step(const GarchParams& p, double n) {
  const double beta = 1.0 - p.beta1 - p.beta2;
  const double base = p.sigma2 * beta;
  const double n2 = n * n;
  const double sdt = std::sqrt(p.dt);
  return Matrix::from_rows({
      {1.0, 0.0, 0.0, 0.0},
      {base, p.beta1, p.beta2, 0.0},
      {base * n2, p.beta1 * n2, p.beta2 * n2, 0.0},
      {std::fma(base * sdt, n, p.kappa * p.dt), p.beta1 * sdt * n, p.beta2 * sdt * n, p.phi},
  });
}

DisturbanceSampling gbm_sampling(const GbmParams& p, std::size_t n) {
  return map_sampling(n, [&p](double nk) { return gbm_step(p, nk); });
}

DisturbanceSampling ar1_sampling(const Ar1Params& p, std::size_t n) {
  return map_sampling(n, [&p](double nk) { return ar1_step(p, nk); });
}

DisturbanceSampling garch_sampling(const GarchParams& p, std::size_t n) {
  return map_sampling(n, [&p](double nk) { return garch_step(p, nk); });
}

PathSet simulate_paths(const DisturbanceLaw& law, const std::vector<double>& z0, std::size_t steps,
                       std::size_t num_paths, std::uint64_t seed) {
  const std::size_t d = law.dim;
  if (z0.size() != d) throw std::invalid_argument("simulate_paths: initial state has wrong dimension");
  if (z0.empty() || z0[0] != 1.0) throw std::invalid_argument("simulate_paths: leading coordinate must be 1");
  PathSet out;
  out.num_paths = num_paths;
  out.num_steps = steps;
  out.dim = d;
  out.states.assign(num_paths, Matrix(steps + 1, d));
  out.shocks = Matrix(num_paths, steps == 0 ? 1 : steps);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(num_paths); ++k) {
    auto eng = make_stream(seed, StreamTag::path, static_cast<std::uint64_t>(k));
    Matrix& track = out.states[k];
    for (std::size_t c = 0; c < d; ++c) track(0, c) = z0[c];
    for (std::size_t t = 0; t < steps; ++t) {
      const double n = standard_normal(eng);
      out.shocks(k, t) = n;
      const Matrix w = law.step(n);
      matvec(w, track.row(t), track.row(t + 1));
    }
  }
  return out;
}

void save_paths_csv(const PathSet& paths, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_paths_csv: cannot open " + path);
  out << "path,t";
  for (std::size_t c = 0; c < paths.dim; ++c) out << ",z" << c;
  out << '\n';
  char buf[64];
  for (std::size_t k = 0; k < paths.num_paths; ++k) {
    for (std::size_t t = 0; t <= paths.num_steps; ++t) {
      out << k << ',' << t;
      for (std::size_t c = 0; c < paths.dim; ++c) {
        std::snprintf(buf, sizeof buf, "%.17g", paths.states[k](t, c));
        out << ',' << buf;
      }
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("save_paths_csv: write failed: " + path);
}

}  // namespace cssw
