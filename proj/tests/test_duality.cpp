// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "cssw/duality.hpp"
#include "cssw/grid.hpp"
#include "cssw/model.hpp"
#include "cssw/pwlc.hpp"
#include "cssw/rng.hpp"
#include "cssw/solver.hpp"
#include "cssw/valuestore.hpp"
#include "oracle.hpp"

using namespace cssw;
using namespace cssw::testing;

namespace {

MemoryValueStore solve_tiny(const TinyInstance& ti) {
  const ResourceModel model(ti.econ, ti.spec);
  const Grid grid(ti.grid_points);
  MemoryValueStore store(ValueDims{model.num_epochs(), model.num_positions(),
                                   grid.size(), grid.dim()});
  backward_induction(model, grid, ti.sampling, store);
  return store;
}

// Line-by-line restatement of the bound recursion with no Evaluator, no
// sorting and no shared scratch. Only the per-(path, epoch) draw streams are
// shared with the library; agreement pins the estimator itself.
BoundSamples replay_bounds(const ResourceModel& model, const DisturbanceLaw& law,
                           const ValueStore& store, Position start,
                           const std::vector<double>& z0,
                           const BoundOptions& opt) {
  const int T = model.num_epochs();
  const std::size_t P = model.num_positions();
  const std::size_t d = law.dim;
  const PathSet paths =
      simulate_paths(law, z0, static_cast<std::size_t>(T), opt.num_paths, opt.seed);
  BoundSamples out;
  for (std::size_t k = 0; k < opt.num_paths; ++k) {
    std::vector<double> low(P), up(P);
    const double* zT = paths.states[k].row(static_cast<std::size_t>(T));
    for (std::size_t p = 0; p < P; ++p)
      low[p] = up[p] = model.scrap(model.position_at(p), zT);
    for (int t = T - 1; t >= 0; --t) {
      const std::vector<Matrix> vs = store.value(t + 1);
      const std::vector<Matrix> cs = store.continuation(t + 1);
      const double* zt = paths.states[k].row(static_cast<std::size_t>(t));
      const double* zn = paths.states[k].row(static_cast<std::size_t>(t) + 1);
      auto eng = make_stream(opt.seed, StreamTag::subsim, k,
                             static_cast<std::uint64_t>(t) + 1);
      std::vector<std::vector<double>> images;
      for (std::size_t i = 0; i < opt.num_subsims; ++i) {
        const Matrix w = law.step(standard_normal(eng));
        std::vector<double> im(d);
        for (std::size_t r = 0; r < d; ++r) {
          double acc = 0.0;
          for (std::size_t c = 0; c < d; ++c) acc = std::fma(w(r, c), zt[c], acc);
          im[r] = acc;
        }
        images.push_back(im);
      }
      std::vector<double> sm(P), rv(P), cv(P), nlow(P), nup(P);
      for (std::size_t p = 0; p < P; ++p) {
        double acc = 0.0;
        for (const auto& im : images) acc += evaluate(vs[p], im.data());
        sm[p] = acc / static_cast<double>(opt.num_subsims);
        rv[p] = evaluate(vs[p], zn);
        cv[p] = evaluate(cs[p], zt);
      }
      const RewardParts parts = model.reward_parts(t, zt);
      for (std::size_t p = 0; p < P; ++p) {
        const Position pos = model.position_at(p);
        double best_q = -std::numeric_limits<double>::infinity();
        double best_up = best_q;
        double low_pick = 0.0;
        for (int ai = 0; ai < 3; ++ai) {
          const auto a = static_cast<Action>(ai);
          const double r = model.assemble_reward(t, parts, pos, a);
          const auto& trs = model.transitions(p, a);
          double q = r;
          double phi = 0.0;
          for (const Transition& tr : trs) {
            q = std::fma(tr.prob, cv[tr.target], q);
            phi = std::fma(tr.prob, sm[tr.target] - rv[tr.target], phi);
          }
          const double base = r + phi;
          double cand_up = base;
          for (const Transition& tr : trs)
            cand_up = std::fma(tr.prob, up[tr.target], cand_up);
          if (cand_up > best_up) best_up = cand_up;
          if (q > best_q) {
            best_q = q;
            double cand_low = base;
            for (const Transition& tr : trs)
              cand_low = std::fma(tr.prob, low[tr.target], cand_low);
            low_pick = cand_low;
          }
        }
        nlow[p] = low_pick;
        nup[p] = best_up;
      }
      low = nlow;
      up = nup;
    }
    const std::size_t p0 = ResourceModel::position_index(start);
    out.lower.push_back(low[p0]);
    out.upper.push_back(up[p0]);
  }
  return out;
}

}  // namespace

TEST_SUITE("duality") {

TEST_CASE("degenerate law collapses both bounds onto the true value") {
  const TinyInstance ti = tiny_deterministic_instance();
  const ResourceModel model(ti.econ, ti.spec);
  const MemoryValueStore store = solve_tiny(ti);
  const Position start{ti.econ.max_reserve, Mode::opened};
  const double z0[2] = {1.0, ti.z0};
  BoundOptions opt;
  opt.num_paths = 16;
  opt.num_subsims = 8;
  opt.seed = 3;
  BoundSamples samples;
  const BoundEstimate est =
      pathwise_bounds(model, ti.law, store, start, z0, opt, &samples);
  const double truth = tree_value(model, ti.sampling, 0, start, ti.z0);
  CHECK(std::abs(est.lower - truth) <= 1e-10);
  CHECK(std::abs(est.upper - truth) <= 1e-10);
  // Paths are indistinguishable, so the per-path estimates must be too.
  for (std::size_t k = 1; k < opt.num_paths; ++k) {
    CHECK(samples.lower[k] == samples.lower[0]);
    CHECK(samples.upper[k] == samples.upper[0]);
  }
  CHECK(est.lower_se <= 1e-12);
  CHECK(est.upper_se <= 1e-12);
}

TEST_CASE("bounds match an independent replay of the recursion") {
  const TinyInstance ti = tiny_level_instance(0.3, 0.0);
  const ResourceModel model(ti.econ, ti.spec);
  const MemoryValueStore store = solve_tiny(ti);
  const Position start{ti.econ.max_reserve, Mode::opened};
  const std::vector<double> z0{1.0, ti.z0};
  BoundOptions opt;
  opt.num_paths = 40;
  opt.num_subsims = 24;
  opt.seed = 11;
  BoundSamples samples;
  const BoundEstimate est =
      pathwise_bounds(model, ti.law, store, start, z0.data(), opt, &samples);
  const BoundSamples want =
      replay_bounds(model, ti.law, store, start, z0, opt);
  REQUIRE(samples.lower.size() == opt.num_paths);
  for (std::size_t k = 0; k < opt.num_paths; ++k) {
    CHECK(std::abs(samples.lower[k] - want.lower[k]) <= 1e-10);
    CHECK(std::abs(samples.upper[k] - want.upper[k]) <= 1e-10);
  }
  double lm = 0.0, um = 0.0;
  for (std::size_t k = 0; k < opt.num_paths; ++k) {
    lm += want.lower[k];
    um += want.upper[k];
  }
  lm /= static_cast<double>(opt.num_paths);
  um /= static_cast<double>(opt.num_paths);
  CHECK(std::abs(est.lower - lm) <= 1e-10);
  CHECK(std::abs(est.upper - um) <= 1e-10);
}

TEST_CASE("lower never exceeds upper on any single path") {
  for (const double w : {0.0, 0.5}) {
    const TinyInstance ti = tiny_level_instance(w, 0.0);
    const ResourceModel model(ti.econ, ti.spec);
    const MemoryValueStore store = solve_tiny(ti);
    const double z0[2] = {1.0, ti.z0};
    BoundOptions opt;
    opt.num_paths = 200;
    opt.num_subsims = 8;
    opt.seed = 5;
    for (Mode mode : {Mode::closed, Mode::opened}) {
      BoundSamples samples;
      pathwise_bounds(model, ti.law, store, {ti.econ.max_reserve, mode}, z0,
                      opt, &samples);
      for (std::size_t k = 0; k < opt.num_paths; ++k)
        CHECK(samples.lower[k] <= samples.upper[k]);
    }
  }
}

TEST_CASE("martingale correction is centered") {
  // The inner-batch mean and the realized next value estimate the same
  // expectation, so their gap averages to zero across paths.
  const TinyInstance ti = tiny_level_instance(0.0, 0.0);
  const ResourceModel model(ti.econ, ti.spec);
  const MemoryValueStore store = solve_tiny(ti);
  const std::size_t K = 500, I = 8;
  const std::uint64_t seed = 21;
  const std::vector<double> z0{1.0, ti.z0};
  const PathSet paths = simulate_paths(ti.law, z0, 1, K, seed);
  const std::vector<Matrix> vs = store.value(1);
  const std::size_t p0 =
      ResourceModel::position_index({ti.econ.max_reserve, Mode::opened});
  std::vector<double> phis(K);
  for (std::size_t k = 0; k < K; ++k) {
    auto eng = make_stream(seed, StreamTag::subsim, k, 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < I; ++i) {
      const Matrix w = ti.law.step(standard_normal(eng));
      const double im[2] = {std::fma(w(0, 0), z0[0], w(0, 1) * z0[1]),
                            std::fma(w(1, 1), z0[1], w(1, 0) * z0[0])};
      acc += evaluate(vs[p0], im);
    }
    phis[k] = acc / static_cast<double>(I) -
              evaluate(vs[p0], paths.states[k].row(1));
  }
  double mean = 0.0;
  for (const double x : phis) mean += x;
  mean /= static_cast<double>(K);
  double ss = 0.0;
  for (const double x : phis) ss += (x - mean) * (x - mean);
  const double se = std::sqrt(ss / static_cast<double>(K - 1)) /
                    std::sqrt(static_cast<double>(K));
  CHECK(std::abs(mean) <= 3.0 * se);
}

TEST_CASE("single-path estimates report zero standard error") {
  const TinyInstance ti = tiny_level_instance(0.0, 0.0);
  const ResourceModel model(ti.econ, ti.spec);
  const MemoryValueStore store = solve_tiny(ti);
  const double z0[2] = {1.0, ti.z0};
  BoundOptions opt;
  opt.num_paths = 1;
  opt.num_subsims = 4;
  opt.seed = 9;
  const BoundEstimate est = pathwise_bounds(
      model, ti.law, store, {ti.econ.max_reserve, Mode::opened}, z0, opt);
  CHECK(est.lower_se == 0.0);
  CHECK(est.upper_se == 0.0);
  CHECK(est.num_paths == 1);
}

TEST_CASE("invalid inputs are rejected") {
  const TinyInstance ti = tiny_level_instance(0.0, 0.0);
  const ResourceModel model(ti.econ, ti.spec);
  const MemoryValueStore store = solve_tiny(ti);
  const Position start{ti.econ.max_reserve, Mode::opened};
  const double z0[2] = {1.0, ti.z0};
  BoundOptions opt;
  opt.num_paths = 0;
  CHECK_THROWS_AS(pathwise_bounds(model, ti.law, store, start, z0, opt),
                  std::invalid_argument);
  opt.num_paths = 4;
  opt.num_subsims = 0;
  CHECK_THROWS_AS(pathwise_bounds(model, ti.law, store, start, z0, opt),
                  std::invalid_argument);
  opt.num_subsims = 4;
  DisturbanceLaw bad = ti.law;
  bad.dim = 3;
  CHECK_THROWS_AS(pathwise_bounds(model, bad, store, start, z0, opt),
                  std::invalid_argument);
  MemoryValueStore wrong(ValueDims{model.num_epochs(), model.num_positions() + 2,
                                   ti.grid_points.rows(), 2});
  CHECK_THROWS_AS(pathwise_bounds(model, ti.law, wrong, start, z0, opt),
                  std::invalid_argument);
}

}  // TEST_SUITE
