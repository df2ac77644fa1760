// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0
//
// Backward induction over the switching model: expectation of rearranged
// compositions under a disturbance sampling, the nearest-neighbor
// accelerated variant, the Bellman recursion writing into a ValueStore,
// and policy extraction helpers.

#ifndef CSSW_SOLVER_HPP_
#define CSSW_SOLVER_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "cssw/disturbance.hpp"
#include "cssw/grid.hpp"
#include "cssw/matrix.hpp"
#include "cssw/model.hpp"
#include "cssw/pwlc.hpp"
#include "cssw/valuestore.hpp"

namespace cssw {

// sum_k weight_k * row_rearrange(V W_k, grid). On sorted 1-d grids with
// monotone atom images this runs as an envelope sweep; otherwise it falls
// back to the definition. Thread count never changes the result.
Matrix expected_matrix(const Matrix& V, const DisturbanceSampling& sampling,
                       const Grid& grid);

// Single-threaded reference built literally from compose + rearrange;
// kept for tests and benchmarks.
Matrix expected_matrix_serial(const Matrix& V,
                              const DisturbanceSampling& sampling,
                              const Grid& grid);

// Candidate row sets per (atom, grid point) by Euclidean distance between
// the mapped point W_k g^i and the grid, ties broken toward lower index.
// With neighbors == 1 the selection is value-independent, so the atoms
// collapse into per-point sparse blocks built once and reused every epoch.
// neighbors >= grid size degenerates to the exact computation.
class NeighborTable {
 public:
  NeighborTable(const Grid& grid, const DisturbanceSampling& sampling,
                std::size_t neighbors);

  std::size_t neighbors() const { return nb_; }
  bool exact() const { return exact_; }

 private:
  friend Matrix expected_matrix_fast(const Matrix&, const DisturbanceSampling&,
                                     const Grid&, const NeighborTable&);

  std::size_t nb_ = 1;
  bool exact_ = false;
  std::size_t m_ = 0, d_ = 0, n_ = 0;
  // neighbors == 1: per grid point, column-sorted sparse blocks of
  // sum nu_k W_k over atoms mapping to that column.
  std::vector<std::size_t> ptr_;
  std::vector<std::uint32_t> idx_;
  std::vector<double> block_;
  // 2 <= neighbors < m: candidate rows per (atom, point), ascending index.
  std::vector<std::uint32_t> cand_;
};

// Restriction of the maximization in expected_matrix to the candidate rows
// of the table; V must be grid-aligned (one row per grid point).
Matrix expected_matrix_fast(const Matrix& V, const DisturbanceSampling& sampling,
                            const Grid& grid, const NeighborTable& table);

struct SolveOptions {
  bool fast = false;
  std::size_t neighbors = 1;
  // Called after each epoch is stored, with the epoch index.
  std::function<void(int)> on_epoch;
};

// Writes V_T..V_0 and the continuations C_T..C_1 into the store.
void backward_induction(const ResourceModel& model, const Grid& grid,
                        const DisturbanceSampling& sampling, ValueStore& store,
                        const SolveOptions& options = {});

// argmax over actions of reward + expected continuation, ties toward the
// lowest action index. cont_next holds C_(t+1) per position.
Action policy_action(const ResourceModel& model,
                     const std::vector<Matrix>& cont_next, int t, Position p,
                     const double* z);

struct PolicyThreshold {
  int reserve = 0;
  Mode mode = Mode::closed;
  double price = 0.0;  // price at the first grid point with the new action
  Action below = Action::abandon;
  Action above = Action::abandon;
};

// Scans a sorted 1-d grid and reports where the policy changes, one list
// entry per change per reserve level.
std::vector<PolicyThreshold> policy_boundaries(
    const ResourceModel& model, const std::vector<Matrix>& cont_next, int t,
    const Grid& grid, Mode mode);

}  // namespace cssw

#endif  // CSSW_SOLVER_HPP_
