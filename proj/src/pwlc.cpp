// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0

#include "cssw/pwlc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace cssw {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double dot_row(const double* row, const double* z, std::size_t d) {
  double acc = 0.0;
  for (std::size_t c = 0; c < d; ++c) acc = std::fma(row[c], z[c], acc);
  return acc;
}

void check_dims(const Matrix& F, const Grid& grid, const char* op) {
  if (F.cols() != grid.dim()) throw std::invalid_argument(std::string(op) + ": column count does not match grid dimension");
  if (F.rows() == 0) throw std::invalid_argument(std::string(op) + ": empty matrix");
}

}  // namespace

namespace detail {

std::size_t argmax_affine_1d(const double* alpha, const double* beta, std::size_t r, double y) {
  // Block pass: maximum per block. max is exactly associative for finite
  // doubles, so the lane split cannot change the result, only enable SIMD.
  // Keeping the first block that raises the running max makes the final
  // scan find the lowest index attaining the overall max.
  constexpr std::size_t kBlock = 256;
  double best = kNegInf;
  std::size_t win = 0;
  for (std::size_t base = 0; base < r; base += kBlock) {
    const std::size_t end = std::min(base + kBlock, r);
    double m0 = kNegInf, m1 = kNegInf, m2 = kNegInf, m3 = kNegInf;
    std::size_t j = base;
    for (; j + 4 <= end; j += 4) {
      m0 = std::max(m0, std::fma(beta[j + 0], y, alpha[j + 0]));
      m1 = std::max(m1, std::fma(beta[j + 1], y, alpha[j + 1]));
      m2 = std::max(m2, std::fma(beta[j + 2], y, alpha[j + 2]));
      m3 = std::max(m3, std::fma(beta[j + 3], y, alpha[j + 3]));
    }
    double bm = std::max(std::max(m0, m1), std::max(m2, m3));
    for (; j < end; ++j) bm = std::max(bm, std::fma(beta[j], y, alpha[j]));
    if (bm > best) {
      best = bm;
      win = base;
    }
  }
  // First row of the winning block attaining the max; same fma expression.
  const std::size_t end = std::min(win + kBlock, r);
  for (std::size_t k = win; k < end; ++k) {
    if (std::fma(beta[k], y, alpha[k]) == best) return k;
  }
  return 0;  // unreachable for finite inputs
}

std::size_t argmax_rows_soa(const double* soa, std::size_t r, std::size_t d, const double* z) {
  constexpr std::size_t kBlock = 256;
  double best = kNegInf;
  std::size_t win = 0;
  for (std::size_t base = 0; base < r; base += kBlock) {
    const std::size_t end = std::min(base + kBlock, r);
    double bm = kNegInf;
    for (std::size_t j = base; j < end; ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < d; ++c) acc = std::fma(soa[c * r + j], z[c], acc);
      bm = std::max(bm, acc);
    }
    if (bm > best) {
      best = bm;
      win = base;
    }
  }
  const std::size_t end = std::min(win + kBlock, r);
  for (std::size_t j = win; j < end; ++j) {
    double acc = 0.0;
    for (std::size_t c = 0; c < d; ++c) acc = std::fma(soa[c * r + j], z[c], acc);
    if (acc == best) return j;
  }
  return 0;  // unreachable for finite inputs
}

std::size_t argmax_rows(const Matrix& F, const double* z) {
  const std::size_t d = F.cols();
  std::size_t arg = 0;
  double best = dot_row(F.row(0), z, d);
  for (std::size_t i = 1; i < F.rows(); ++i) {
    const double v = dot_row(F.row(i), z, d);
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  return arg;
}

}  // namespace detail

double evaluate(const Matrix& F, const double* z) {
  if (F.rows() == 0) throw std::invalid_argument("evaluate: empty matrix");
  const std::size_t d = F.cols();
  double best = kNegInf;
  for (std::size_t i = 0; i < F.rows(); ++i) best = std::max(best, dot_row(F.row(i), z, d));
  return best;
}

std::size_t argmax_row(const Matrix& F, const double* z) {
  if (F.rows() == 0) throw std::invalid_argument("argmax_row: empty matrix");
  return detail::argmax_rows(F, z);
}

namespace {

// Shared body; the d == 2 branch streams SoA columns, which evaluates the
// same fma as dot_row and therefore picks identical rows.
Matrix rearrange_impl(const Matrix& F, const Grid& grid, bool parallel) {
  check_dims(F, grid, "row_rearrange");
  const std::size_t m = grid.size();
  const std::size_t d = grid.dim();
  const std::size_t r = F.rows();
  Matrix out(m, d);
  if (d == 2) {
    std::vector<double> alpha(r), beta(r);
    for (std::size_t i = 0; i < r; ++i) {
      alpha[i] = F(i, 0);
      beta[i] = F(i, 1);
    }
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
      const std::size_t pick = detail::argmax_affine_1d(alpha.data(), beta.data(), r, grid.point(i)[1]);
      out(i, 0) = alpha[pick];
      out(i, 1) = beta[pick];
    }
    return out;
  }
  // Column streams let the per-point scan vectorize; the fma order per row
  // matches dot_row, so the selected rows equal the plain scan's.
  std::vector<double> soa(r * d);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t c = 0; c < d; ++c) soa[c * r + i] = F(i, c);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
    const std::size_t pick = detail::argmax_rows_soa(soa.data(), r, d, grid.point(i));
    const double* src = F.row(pick);
    double* dst = out.row(i);
    for (std::size_t c = 0; c < d; ++c) dst[c] = src[c];
  }
  return out;
}

}  // namespace

Matrix row_rearrange(const Matrix& F, const Grid& grid) { return rearrange_impl(F, grid, true); }

Matrix row_rearrange_serial(const Matrix& F, const Grid& grid) {
  check_dims(F, grid, "row_rearrange");
  const std::size_t m = grid.size();
  const std::size_t d = grid.dim();
  Matrix out(m, d);
  for (std::size_t i = 0; i < m; ++i) {
    const double* g = grid.point(i);
    std::size_t arg = 0;
    double best = kNegInf;
    for (std::size_t j = 0; j < F.rows(); ++j) {
      const double v = dot_row(F.row(j), g, d);
      if (v > best) {
        best = v;
        arg = j;
      }
    }
    for (std::size_t c = 0; c < d; ++c) out(i, c) = F(arg, c);
  }
  return out;
}

Matrix envelope(const ConvexHandle& h, const Grid& grid) {
  if (!h.value || !h.grad) throw std::invalid_argument("envelope: handle missing value or grad");
  const std::size_t m = grid.size();
  const std::size_t d = grid.dim();
  Matrix out(m, d);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
    const double* g = grid.point(i);
    double slope[16];
    const double v = h.value(g);
    h.grad(g, slope);
    double lin = 0.0;
    for (std::size_t c = 1; c < d; ++c) lin = std::fma(slope[c - 1], g[c], lin);
    out(i, 0) = v - lin;
    for (std::size_t c = 1; c < d; ++c) out(i, c) = slope[c - 1];
  }
  return out;
}

Matrix max_of(const Matrix& F1, const Matrix& F2, const Grid& grid) {
  check_dims(F1, grid, "max_of");
  check_dims(F2, grid, "max_of");
  Matrix bound(F1.rows() + F2.rows(), grid.dim());
  for (std::size_t i = 0; i < F1.rows(); ++i)
    for (std::size_t c = 0; c < grid.dim(); ++c) bound(i, c) = F1(i, c);
  for (std::size_t i = 0; i < F2.rows(); ++i)
    for (std::size_t c = 0; c < grid.dim(); ++c) bound(F1.rows() + i, c) = F2(i, c);
  return row_rearrange(bound, grid);
}

Matrix add(const Matrix& F1, const Matrix& F2, const Grid& grid) {
  Matrix a = row_rearrange(F1, grid);
  Matrix b = row_rearrange(F2, grid);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t c = 0; c < a.cols(); ++c) a(i, c) += b(i, c);
  return a;
}

Matrix compose_linear(const Matrix& F, const Matrix& W, const Grid& grid) {
  if (W.rows() != F.cols() || W.cols() != grid.dim())
    throw std::invalid_argument("compose_linear: disturbance shape mismatch");
  check_dims(F, grid, "compose_linear");
  Matrix prod(F.rows(), W.cols());
  for (std::size_t i = 0; i < F.rows(); ++i) {
    for (std::size_t j = 0; j < W.cols(); ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < F.cols(); ++c) acc = std::fma(F(i, c), W(c, j), acc);
      prod(i, j) = acc;
    }
  }
  return row_rearrange(prod, grid);
}

Pieces1d Pieces1d::build(const Matrix& F) {
  if (F.cols() != 2) throw std::invalid_argument("pieces: need 2 columns");
  if (F.rows() == 0) throw std::invalid_argument("pieces: empty matrix");
  const std::size_t r = F.rows();

  // Order by slope, then collapse equal slopes onto the best intercept;
  // afterwards the slopes are strictly increasing and every crossing below
  // is finite. Rearranged matrices arrive nearly sorted, so check first.
  std::vector<std::pair<double, double>> rows(r);
  for (std::size_t i = 0; i < r; ++i) rows[i] = {F(i, 1), F(i, 0)};
  if (!std::is_sorted(rows.begin(), rows.end())) std::sort(rows.begin(), rows.end());
  std::vector<double> a;
  std::vector<double> b;
  a.reserve(r);
  b.reserve(r);
  for (const auto& [bi, ai] : rows) {
    if (!b.empty() && bi == b.back()) {
      if (ai > a.back()) a.back() = ai;
    } else {
      a.push_back(ai);
      b.push_back(bi);
    }
  }

  Pieces1d out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double start = kNegInf;
    while (!out.alpha.empty()) {
      const double cross =
          (out.alpha.back() - a[i]) / (b[i] - out.beta.back());
      if (cross <= out.cut.back()) {
        // The incumbent never wins once the steeper line enters.
        out.alpha.pop_back();
        out.beta.pop_back();
        out.cut.pop_back();
      } else {
        start = cross;
        break;
      }
    }
    out.alpha.push_back(a[i]);
    out.beta.push_back(b[i]);
    out.cut.push_back(start);
  }
  return out;
}

std::size_t Pieces1d::piece(double y) const {
  const auto it = std::upper_bound(cut.begin() + 1, cut.end(), y);
  return static_cast<std::size_t>(it - cut.begin()) - 1;
}

Evaluator::Evaluator(const Matrix& F) : d_(F.cols()) {
  if (F.rows() == 0 || d_ == 0) throw std::invalid_argument("evaluator: empty matrix");
  if (d_ == 2) {
    sorted_ = true;
    pieces_ = Pieces1d::build(F);
    rows_ = pieces_.size();
    return;
  }

  // Duplicate rows are frequent in rearranged matrices and never change a
  // maximum; keep the first occurrence of each distinct row.
  std::vector<std::size_t> keep;
  keep.reserve(F.rows());
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < F.rows(); ++i) {
    std::string key(reinterpret_cast<const char*>(F.row(i)), d_ * sizeof(double));
    if (seen.insert(std::move(key)).second) keep.push_back(i);
  }
  rows_ = keep.size();
  soa_.resize(rows_ * d_);
  for (std::size_t j = 0; j < rows_; ++j)
    for (std::size_t c = 0; c < d_; ++c) soa_[c * rows_ + j] = F(keep[j], c);
}

double Evaluator::operator()(const double* z) const {
  if (sorted_) return pieces_.eval(z[1]);
  double best = kNegInf;
  for (std::size_t j = 0; j < rows_; ++j) {
    double acc = 0.0;
    for (std::size_t c = 0; c < d_; ++c) acc = std::fma(soa_[c * rows_ + j], z[c], acc);
    best = std::max(best, acc);
  }
  return best;
}

}  // namespace cssw
