// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CSSW_GRID_HPP_
#define CSSW_GRID_HPP_

#include <cstddef>
#include <string>

#include "cssw/matrix.hpp"

namespace cssw {

// Finite set of states used to anchor tangent and rearrangement operations.
// Every point is an augmented state whose leading coordinate is exactly 1;
// points are pairwise distinct and kept in construction order.
class Grid {
 public:
  // Validates the invariants above; throws std::invalid_argument otherwise.
  explicit Grid(Matrix points);

  std::size_t size() const { return points_.rows(); }
  std::size_t dim() const { return points_.cols(); }
  const Matrix& points() const { return points_; }
  const double* point(std::size_t i) const { return points_.row(i); }

  // True iff dim() == 2 and the free coordinate is strictly increasing.
  bool sorted_1d() const { return sorted_1d_; }

 private:
  Matrix points_;
  bool sorted_1d_ = false;
};

// m equidistant points (1, x) with x from lo to hi inclusive. Requires
// lo < hi and m >= 2; endpoints are reproduced exactly.
Grid equidistant_grid(double lo, double hi, std::size_t m);

// One point per line, all coordinates including the leading 1.
void save_grid_csv(const Grid& grid, const std::string& path);
Grid load_grid_csv(const std::string& path);

}  // namespace cssw

#endif  // CSSW_GRID_HPP_
