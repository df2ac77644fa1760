// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CSSW_KMEANS_HPP_
#define CSSW_KMEANS_HPP_

#include <cstdint>

#include "cssw/grid.hpp"
#include "cssw/matrix.hpp"

namespace cssw {

// Lloyd iterations (at most 100) from a k-means++ start; stops when the
// largest relative centroid shift drops below 1e-6. Pure function of
// (cloud, k, seed): assignments, reductions and the seeding draw all run
// in pinned order regardless of thread count.
Matrix kmeans(const Matrix& cloud, std::size_t k, std::uint64_t seed);

// Cluster a cloud of augmented states into a grid: centroids get their
// leading coordinate reset to exactly 1, exact duplicates are nudged apart
// by minimal representable steps, and rows are sorted lexicographically.
Grid stochastic_grid(const Matrix& cloud, std::size_t k, std::uint64_t seed);

}  // namespace cssw

#endif  // CSSW_KMEANS_HPP_
