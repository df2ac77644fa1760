// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CSSW_DUALITY_HPP_
#define CSSW_DUALITY_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cssw/disturbance.hpp"
#include "cssw/model.hpp"
#include "cssw/valuestore.hpp"

namespace cssw {

// Monte Carlo settings for the primal/dual estimators.
struct BoundOptions {
  std::size_t num_paths = 100;    // outer sample paths
  std::size_t num_subsims = 100;  // inner draws per (path, epoch)
  std::uint64_t seed = 0;
};

struct BoundEstimate {
  double lower = 0.0;
  double upper = 0.0;
  double lower_se = 0.0;  // zero when num_paths == 1
  double upper_se = 0.0;
  std::size_t num_paths = 0;
  std::size_t num_subsims = 0;
};

// Per-path estimator values, index-aligned with the simulated paths.
struct BoundSamples {
  std::vector<double> lower;
  std::vector<double> upper;
};

// Confidence bounds around the value of `start` at state z0, driven by the
// solved functions in `store`. Each path carries a backward recursion: the
// lower estimate follows the greedy policy of the stored continuations, the
// upper takes the best action against martingale-corrected continuations.
// Both reuse one batch of inner draws per (path, epoch), which keeps the
// correction zero-mean and makes lower <= upper hold path by path, not just
// in expectation. Deterministic for a given seed regardless of thread count.
BoundEstimate pathwise_bounds(const ResourceModel& model,
                              const DisturbanceLaw& law, const ValueStore& store,
                              Position start, const double* z0,
                              const BoundOptions& options,
                              BoundSamples* samples = nullptr);

}  // namespace cssw

#endif  // CSSW_DUALITY_HPP_
