// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0
//
// Tiny instances whose exact value functions are computable by brute
// force. The grids contain every state reachable from z0 under the atom
// set, so the tangent envelopes are lossless there and backward induction
// must agree with plain scenario-tree enumeration up to rounding.

#ifndef CSSW_TESTS_ORACLE_HPP_
#define CSSW_TESTS_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "cssw/disturbance.hpp"
#include "cssw/grid.hpp"
#include "cssw/matrix.hpp"
#include "cssw/model.hpp"
#include "cssw/pwlc.hpp"
#include "cssw/solver.hpp"
#include "cssw/valuestore.hpp"

namespace cssw {
namespace testing {

struct TinyInstance {
  EconomicParams econ;
  StateSpec spec;
  DisturbanceSampling sampling;
  DisturbanceLaw law;
  // prices[t] holds every price reachable at epoch t, ascending.
  std::vector<std::vector<double>> prices;
  Matrix grid_points;
  double z0 = 1.0;
};

// Image of a price under one atom, with the same rounding the solver and
// the simulator use (a single fused multiply-add).
inline double atom_image(const Matrix& w, double y) {
  return std::fma(w(1, 1), y, w(1, 0));
}

// Price level model, three atoms, three decision epochs, reserve cap 2.
// The shuffled flag reorders the atoms so the monotone-image sweep
// precondition fails and the fallback path gets exercised instead.
inline TinyInstance tiny_level_instance(double wastage, double penalty_scale,
                                        bool shuffled = false) {
  TinyInstance ti;
  ti.econ.years = 0.75;
  ti.econ.max_reserve = 2;
  ti.econ.wastage = wastage;
  ti.econ.penalty_scale = penalty_scale;
  ti.econ.contract_reserve = penalty_scale > 0.0 ? 0 : 2;
  ti.spec = StateSpec{2, 1, PriceCoord::level};

  const double scale[3] = {0.8, 1.0, 1.25};
  const double shift[3] = {0.02, 0.0, -0.01};
  const double weight[3] = {0.25, 0.5, 0.25};
  for (int k = 0; k < 3; ++k) {
    ti.sampling.atoms.push_back(
        Matrix::from_rows({{1.0, 0.0}, {shift[k], scale[k]}}));
    ti.sampling.weights.push_back(weight[k]);
  }
  if (shuffled) {
    std::swap(ti.sampling.atoms[0], ti.sampling.atoms[2]);
    std::swap(ti.sampling.weights[0], ti.sampling.weights[2]);
  }

  // Quantized law with the same one-step marginals as the sampling, so
  // simulated paths stay inside the enumerated tree.
  const Matrix w0 = ti.sampling.atoms[shuffled ? 2 : 0];
  const Matrix w1 = ti.sampling.atoms[1];
  const Matrix w2 = ti.sampling.atoms[shuffled ? 0 : 2];
  const double q = 0.6744897501960817;  // Phi^-1(0.75)
  ti.law.dim = 2;
  ti.law.step = [w0, w1, w2, q](double n) {
    if (n < -q) return w0;
    if (n <= q) return w1;
    return w2;
  };

  ti.prices.assign(4, {});
  ti.prices[0] = {1.0};
  std::set<double> all(ti.prices[0].begin(), ti.prices[0].end());
  for (int t = 1; t <= 3; ++t) {
    std::set<double> level;
    for (double y : ti.prices[t - 1])
      for (const Matrix& w : ti.sampling.atoms) level.insert(atom_image(w, y));
    ti.prices[t].assign(level.begin(), level.end());
    all.insert(level.begin(), level.end());
  }
  ti.grid_points = Matrix(all.size(), 2);
  std::size_t i = 0;
  for (double y : all) {
    ti.grid_points(i, 0) = 1.0;
    ti.grid_points(i, 1) = y;
    ++i;
  }
  return ti;
}

// Single deterministic atom: every path is the same orbit, the envelopes
// are exact along it, and both pathwise bounds must collapse onto the
// optimal value. Wastage keeps the position transitions genuinely random.
inline TinyInstance tiny_deterministic_instance() {
  TinyInstance ti;
  ti.econ.years = 1.0;
  ti.econ.max_reserve = 2;
  ti.econ.wastage = 0.3;
  ti.spec = StateSpec{2, 1, PriceCoord::level};
  const Matrix w = Matrix::from_rows({{1.0, 0.0}, {0.01, 1.06}});
  ti.sampling.atoms = {w};
  ti.sampling.weights = {1.0};
  ti.law.dim = 2;
  ti.law.step = [w](double) { return w; };

  ti.prices.assign(5, {});
  double y = 1.0;
  std::set<double> all;
  for (int t = 0; t <= 4; ++t) {
    ti.prices[t] = {y};
    all.insert(y);
    y = atom_image(w, y);
  }
  ti.grid_points = Matrix(all.size(), 2);
  std::size_t i = 0;
  for (double p : all) {
    ti.grid_points(i, 0) = 1.0;
    ti.grid_points(i, 1) = p;
    ++i;
  }
  return ti;
}

// Optimal value of the sampled-disturbance problem by exhaustive
// enumeration. Reward, transition and scrap semantics come from the model
// itself; only the dynamic-programming recursion is independent.
inline double tree_value(const ResourceModel& model,
                         const DisturbanceSampling& s, int t, Position p,
                         double y) {
  const double z[2] = {1.0, y};
  if (t == model.num_epochs()) return model.scrap(p, z);
  double best = -1e300;
  for (Action a : {Action::abandon, Action::close, Action::open}) {
    double v = model.reward(t, p, z, a);
    for (const Transition& tr :
         model.transitions(ResourceModel::position_index(p), a)) {
      double cont = 0.0;
      for (std::size_t k = 0; k < s.size(); ++k)
        cont += s.weights[k] * tree_value(model, s, t + 1,
                                          model.position_at(tr.target),
                                          atom_image(s.atoms[k], y));
      v += tr.prob * cont;
    }
    best = std::max(best, v);
  }
  return best;
}

inline double eval_at(const Matrix& F, double y) {
  const double z[2] = {1.0, y};
  return evaluate(F, z);
}

}  // namespace testing
}  // namespace cssw

#endif  // CSSW_TESTS_ORACLE_HPP_
