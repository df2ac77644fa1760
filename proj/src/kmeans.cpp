// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0

#include "cssw/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cssw/rng.hpp"

namespace cssw {
namespace {

double sq_dist(const double* a, const double* b, std::size_t d) {
  double acc = 0.0;
  for (std::size_t c = 0; c < d; ++c) {
    const double diff = a[c] - b[c];
    acc = std::fma(diff, diff, acc);
  }
  return acc;
}

// Draws an index proportional to weights[i]; total > 0 is the caller's
// responsibility. A single uniform is consumed per draw.
std::size_t draw_weighted(const std::vector<double>& weights, double total,
                          std::mt19937_64& eng) {
  const double u = ((static_cast<double>(eng() >> 11)) + 0.5) * 0x1p-53 * total;
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last = i;
    if (u < acc) return i;
  }
  return last;
}

}  // namespace

Matrix kmeans(const Matrix& cloud, std::size_t k, std::uint64_t seed) {
  const std::size_t n = cloud.rows();
  const std::size_t d = cloud.cols();
  if (k == 0) throw std::invalid_argument("kmeans: k must be positive");
  if (n < k) throw std::invalid_argument("kmeans: fewer points than clusters");

  std::mt19937_64 eng = make_stream(seed, StreamTag::cloud, k);

  // k-means++ seeding.
  Matrix centroids(k, d);
  std::vector<double> dist2(n, std::numeric_limits<double>::infinity());
  {
    const std::size_t first = static_cast<std::size_t>(eng() % n);
    std::memcpy(centroids.row(0), cloud.row(first), d * sizeof(double));
  }
  for (std::size_t c = 1; c < k; ++c) {
    const double* prev = centroids.row(c - 1);
    double total = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : total)
    for (std::size_t i = 0; i < n; ++i) {
      const double dd = sq_dist(cloud.row(i), prev, d);
      if (dd < dist2[i]) dist2[i] = dd;
      total += dist2[i];
    }
    std::size_t pick;
    if (total > 0.0) {
      pick = draw_weighted(dist2, total, eng);
    } else {
      // All mass sits on already chosen centroids; any point works.
      pick = static_cast<std::size_t>(eng() % n);
    }
    std::memcpy(centroids.row(c), cloud.row(pick), d * sizeof(double));
  }

  // Lloyd iterations. Assignment is parallel (each point independent);
  // the centroid accumulation runs serially in point order so sums do not
  // depend on the thread count.
  std::vector<std::size_t> assign(n, 0);
  std::vector<double> sums(k * d, 0.0);
  std::vector<std::size_t> counts(k, 0);
  Matrix next(k, d);
  for (int iter = 0; iter < 100; ++iter) {
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
      const double* x = cloud.row(i);
      double best = sq_dist(x, centroids.row(0), d);
      std::size_t bj = 0;
      for (std::size_t j = 1; j < k; ++j) {
        const double dd = sq_dist(x, centroids.row(j), d);
        if (dd < best) {
          best = dd;
          bj = j;
        }
      }
      assign[i] = bj;
    }

    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = assign[i];
      const double* x = cloud.row(i);
      double* s = &sums[j * d];
      for (std::size_t c = 0; c < d; ++c) s[c] += x[c];
      ++counts[j];
    }

    double worst_shift = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      double* out = next.row(j);
      const double* old = centroids.row(j);
      if (counts[j] == 0) {
        // Empty cluster keeps its previous centroid.
        std::memcpy(out, old, d * sizeof(double));
        continue;
      }
      const double inv = 1.0 / static_cast<double>(counts[j]);
      double shift2 = 0.0;
      double norm2 = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        out[c] = sums[j * d + c] * inv;
        const double diff = out[c] - old[c];
        shift2 = std::fma(diff, diff, shift2);
        norm2 = std::fma(old[c], old[c], norm2);
      }
      const double rel = std::sqrt(shift2) / std::max(1.0, std::sqrt(norm2));
      worst_shift = std::max(worst_shift, rel);
    }
    std::swap(centroids, next);
    if (worst_shift <= 1e-6) break;
  }
  return centroids;
}

Grid stochastic_grid(const Matrix& cloud, std::size_t k, std::uint64_t seed) {
  if (cloud.cols() < 2)
    throw std::invalid_argument("stochastic_grid: need at least one free coordinate");
  Matrix centroids = kmeans(cloud, k, seed);
  const std::size_t d = centroids.cols();
  for (std::size_t j = 0; j < k; ++j) centroids.row(j)[0] = 1.0;

  std::vector<std::size_t> order(k);
  for (std::size_t j = 0; j < k; ++j) order[j] = j;
  auto lex_less = [&](std::size_t a, std::size_t b) {
    const double* ra = centroids.row(a);
    const double* rb = centroids.row(b);
    for (std::size_t c = 0; c < d; ++c) {
      if (ra[c] != rb[c]) return ra[c] < rb[c];
    }
    return a < b;
  };
  std::sort(order.begin(), order.end(), lex_less);

  Matrix out(k, d);
  for (std::size_t j = 0; j < k; ++j)
    std::memcpy(out.row(j), centroids.row(order[j]), d * sizeof(double));

  // Exact duplicates would make the grid degenerate. Rows are sorted, so
  // duplicates sit in adjacent runs; push each later row strictly above its
  // predecessor by a minimal step in the trailing coordinate.
  for (std::size_t j = 1; j < k; ++j) {
    const double* prev = out.row(j - 1);
    double* cur = out.row(j);
    bool strictly_after = false;
    for (std::size_t c = 0; c < d; ++c) {
      if (prev[c] != cur[c]) {
        strictly_after = prev[c] < cur[c];
        break;
      }
    }
    if (!strictly_after) {
      std::memcpy(cur, prev, d * sizeof(double));
      cur[d - 1] = std::nextafter(prev[d - 1], std::numeric_limits<double>::infinity());
    }
  }
  return Grid(std::move(out));
}

}  // namespace cssw
