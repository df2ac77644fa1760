// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0
//
// Parallel kernels against their serial references. Run with
// --benchmark_time_unit=ms; results are per expected_matrix or
// row_rearrange call at the stated grid size.

#include <benchmark/benchmark.h>

#include <cstddef>
#include <random>

#include "cssw/disturbance.hpp"
#include "cssw/grid.hpp"
#include "cssw/matrix.hpp"
#include "cssw/pwlc.hpp"
#include "cssw/rng.hpp"
#include "cssw/solver.hpp"

using namespace cssw;

namespace {

Matrix value_fixture(const Grid& grid) {
  // Tangents of a smooth convex function, the shape the solver produces.
  Matrix v(grid.size(), 2);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double y = grid.point(i)[1];
    v(i, 0) = -(y * y) * 0.25;
    v(i, 1) = 0.5 * y;
  }
  return v;
}

DisturbanceSampling sampling_fixture(std::size_t n) {
  return gbm_sampling(GbmParams{}, n);
}

void bm_expected_serial(benchmark::State& state) {
  const Grid grid = equidistant_grid(0.0, 20.0, static_cast<std::size_t>(state.range(0)));
  const Matrix v = value_fixture(grid);
  const DisturbanceSampling s = sampling_fixture(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(expected_matrix_serial(v, s, grid));
}

void bm_expected_parallel(benchmark::State& state) {
  const Grid grid = equidistant_grid(0.0, 20.0, static_cast<std::size_t>(state.range(0)));
  const Matrix v = value_fixture(grid);
  const DisturbanceSampling s = sampling_fixture(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(expected_matrix(v, s, grid));
}

void bm_rearrange_serial(benchmark::State& state) {
  const Grid grid = equidistant_grid(0.0, 20.0, static_cast<std::size_t>(state.range(0)));
  auto eng = make_stream(1, StreamTag::test);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix f(grid.size(), 2);
  for (std::size_t i = 0; i < f.rows(); ++i) {
    f(i, 0) = u(eng);
    f(i, 1) = u(eng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(row_rearrange_serial(f, grid));
}

void bm_rearrange_parallel(benchmark::State& state) {
  const Grid grid = equidistant_grid(0.0, 20.0, static_cast<std::size_t>(state.range(0)));
  auto eng = make_stream(1, StreamTag::test);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix f(grid.size(), 2);
  for (std::size_t i = 0; i < f.rows(); ++i) {
    f(i, 0) = u(eng);
    f(i, 1) = u(eng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(row_rearrange(f, grid));
}

}  // namespace

BENCHMARK(bm_expected_serial)->Args({1001, 500})->Args({4001, 2000});
BENCHMARK(bm_expected_parallel)->Args({1001, 500})->Args({4001, 2000});
BENCHMARK(bm_rearrange_serial)->Arg(1001)->Arg(4001);
BENCHMARK(bm_rearrange_parallel)->Arg(1001)->Arg(4001);

BENCHMARK_MAIN();
