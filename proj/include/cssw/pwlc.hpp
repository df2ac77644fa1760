// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CSSW_PWLC_HPP_
#define CSSW_PWLC_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "cssw/grid.hpp"
#include "cssw/matrix.hpp"

namespace cssw {

// A piecewise linear convex function f(z) = max_i row_i . z represented by
// the rows of a matrix. Any matrix with the state dimension's column count
// is a valid representative; operations never mutate their inputs.
//
// A matrix is called grid-aligned (for a grid G) when it has one row per
// grid point and row i attains the row-wise maximum at point g^i. Outputs
// of row_rearrange, envelope, max_of, add and compose_linear are aligned.

// Convex function with caller-supplied exact subgradients. grad writes the
// d-1 partial derivatives with respect to the free coordinates; the value
// and slopes must satisfy the supporting-hyperplane inequality everywhere.
struct ConvexHandle {
  std::function<double(const double*)> value;
  std::function<void(const double*, double*)> grad;
};

// max_i row_i . z
double evaluate(const Matrix& F, const double* z);

// Lowest row index attaining evaluate(F, z). Exact floating-point
// comparisons; no epsilon snapping.
std::size_t argmax_row(const Matrix& F, const double* z);

// Row i of the result is the row of F maximizing at grid point i.
Matrix row_rearrange(const Matrix& F, const Grid& grid);
Matrix row_rearrange_serial(const Matrix& F, const Grid& grid);

// Tangent of h at every grid point: row i = (h(g) - s.g_free, s) so that
// row_i . g^i = h(g^i) and the result minorizes h wherever h is convex.
Matrix envelope(const ConvexHandle& h, const Grid& grid);

// Pointwise maximum: row-bind then rearrange.
Matrix max_of(const Matrix& F1, const Matrix& F2, const Grid& grid);

// Pointwise sum: elementwise sum of the two rearranged inputs.
Matrix add(const Matrix& F1, const Matrix& F2, const Grid& grid);

// Representative of z -> f(W z): rearrangement of F * W.
Matrix compose_linear(const Matrix& F, const Matrix& W, const Grid& grid);

// Upper envelope of the rows of a 2-column matrix. Rows are ordered by
// slope internally, so any row order is accepted.
// Piece e wins on [cut[e], cut[e+1]); cut[0] = -inf. At an exact crossing
// either side may be selected; the evaluated value is the same.
struct Pieces1d {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> cut;

  static Pieces1d build(const Matrix& F);
  std::size_t size() const { return alpha.size(); }
  std::size_t piece(double y) const;
  double eval(double y) const {
    const std::size_t e = piece(y);
    return std::fma(beta[e], y, alpha[e]);
  }
};

// Repeated-evaluation helper for one matrix: a binary search on the 1-d
// envelope for 2-column matrices, otherwise a max scan over deduplicated
// rows held as column streams. Values agree exactly with evaluate() away
// from piece crossings and to rounding error at them.
class Evaluator {
 public:
  explicit Evaluator(const Matrix& F);

  double operator()(const double* z) const;
  // Only meaningful for an Evaluator over a 2-column matrix.
  double eval1(double y) const { return pieces_.eval(y); }

  std::size_t row_count() const { return rows_; }
  std::size_t dim() const { return d_; }
  // Column stream c of the deduplicated rows (length row_count()).
  const double* column(std::size_t c) const { return soa_.data() + c * rows_; }
  // Piece table when the sorted fast path is active, else nullptr.
  const Pieces1d* pieces() const { return sorted_ ? &pieces_ : nullptr; }

 private:
  std::size_t d_ = 0;
  std::size_t rows_ = 0;
  bool sorted_ = false;
  Pieces1d pieces_;
  std::vector<double> soa_;
};

namespace detail {

// Lowest index j maximizing alpha[j] + beta[j] * y over j < r. Blocked
// two-pass: reassociation-safe max per block, then a first-hit scan of the
// first block attaining the overall max. Exact max, no tolerance; all
// passes evaluate via std::fma so they see identical values.
std::size_t argmax_affine_1d(const double* alpha, const double* beta, std::size_t r, double y);

// Same contract over d-dimensional rows given as column streams of length r.
std::size_t argmax_rows_soa(const double* soa, std::size_t r, std::size_t d, const double* z);

// Plain scan used by argmax_row; kept simple for reference comparisons.
std::size_t argmax_rows(const Matrix& F, const double* z);

}  // namespace detail

}  // namespace cssw

#endif  // CSSW_PWLC_HPP_
