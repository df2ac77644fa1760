// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0

#include "cssw/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cssw/pwlc.hpp"
#include "cssw/rng.hpp"

namespace cssw {
namespace {

// Scratch owned by one worker thread.
struct PathWork {
  std::vector<double> images;  // num_subsims x d, row-major
  std::vector<double> ys;      // sorted price coordinates (d == 2 only)
  std::vector<double> tmp;     // per-row dot buffer
  std::vector<double> sm;      // subsimulation mean per position
  std::vector<double> rv;      // next value at the realized state
  std::vector<double> cv;      // continuation at the current state
  std::vector<double> nlow, nup;
};

// Mean of ev over the images. The sorted fast path walks the piece table
// against ascending coordinates; summation order is the sorted order either
// way, so the result does not depend on how the images were produced.
double subsim_mean_1d(const Evaluator& ev, const std::vector<double>& ys) {
  double acc = 0.0;
  if (const Pieces1d* pc = ev.pieces()) {
    const double* alpha = pc->alpha.data();
    const double* beta = pc->beta.data();
    const double* cut = pc->cut.data();
    const std::size_t pieces_n = pc->size();
    std::size_t e = 0;
    for (const double y : ys) {
      while (e + 1 < pieces_n && y >= cut[e + 1]) ++e;
      acc += std::fma(beta[e], y, alpha[e]);
    }
  } else {
    for (const double y : ys) acc += ev.eval1(y);
  }
  return acc / static_cast<double>(ys.size());
}

double subsim_mean(const Evaluator& ev, const std::vector<double>& images,
                   std::size_t count, std::size_t d, std::vector<double>& tmp) {
  const std::size_t rows = ev.row_count();
  tmp.resize(rows);
  const double* c0 = ev.column(0);
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double* w = images.data() + i * d;
    const double w0 = w[0];
    for (std::size_t j = 0; j < rows; ++j) tmp[j] = c0[j] * w0;
    for (std::size_t c = 1; c < d; ++c) {
      const double* cc = ev.column(c);
      const double wc = w[c];
      for (std::size_t j = 0; j < rows; ++j) tmp[j] = std::fma(cc[j], wc, tmp[j]);
    }
    double best = tmp[0];
    for (std::size_t j = 1; j < rows; ++j) best = std::max(best, tmp[j]);
    acc += best;
  }
  return acc / static_cast<double>(count);
}

void mean_and_se(const std::vector<double>& xs, double* mean, double* se) {
  const std::size_t n = xs.size();
  double acc = 0.0;
  for (const double x : xs) acc += x;
  *mean = acc / static_cast<double>(n);
  if (n < 2) {
    *se = 0.0;
    return;
  }
  double ss = 0.0;
  for (const double x : xs) {
    const double diff = x - *mean;
    ss = std::fma(diff, diff, ss);
  }
  *se = std::sqrt(ss / static_cast<double>(n - 1)) /
        std::sqrt(static_cast<double>(n));
}

}  // namespace

BoundEstimate pathwise_bounds(const ResourceModel& model,
                              const DisturbanceLaw& law, const ValueStore& store,
                              Position start, const double* z0,
                              const BoundOptions& options,
                              BoundSamples* samples) {
  const int T = model.num_epochs();
  const std::size_t P = model.num_positions();
  const std::size_t d = model.state_spec().dim;
  const std::size_t K = options.num_paths;
  const std::size_t I = options.num_subsims;
  if (K == 0 || I == 0)
    throw std::invalid_argument("pathwise_bounds: need paths and subsims");
  if (law.dim != d)
    throw std::invalid_argument("pathwise_bounds: law dimension mismatch");
  const ValueDims& dims = store.dims();
  if (dims.horizon != T || dims.positions != P || dims.dim != d)
    throw std::invalid_argument("pathwise_bounds: store dimension mismatch");

  const std::vector<double> z0v(z0, z0 + d);
  const PathSet paths = simulate_paths(law, z0v, static_cast<std::size_t>(T),
                                       K, options.seed);

  // low/up hold the running per-path estimates for every position; the
  // recursion at t rewrites them from their t+1 values.
  std::vector<double> low(K * P), up(K * P);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ks = 0; ks < static_cast<std::ptrdiff_t>(K); ++ks) {
    const std::size_t k = static_cast<std::size_t>(ks);
    const double* zT = paths.states[k].row(static_cast<std::size_t>(T));
    for (std::size_t p = 0; p < P; ++p) {
      const double s = model.scrap(model.position_at(p), zT);
      low[k * P + p] = s;
      up[k * P + p] = s;
    }
  }

  std::vector<Evaluator> vev, cev;
  for (int t = T - 1; t >= 0; --t) {
    const std::vector<Matrix> vslice = store.value(t + 1);
    const std::vector<Matrix> cslice = store.continuation(t + 1);
    vev.clear();
    cev.clear();
    vev.reserve(P);
    cev.reserve(P);
    for (std::size_t p = 0; p < P; ++p) {
      vev.emplace_back(vslice[p]);
      cev.emplace_back(cslice[p]);
    }

#pragma omp parallel
    {
      PathWork ws;
      ws.images.resize(I * d);
      ws.ys.resize(I);
      ws.sm.resize(P);
      ws.rv.resize(P);
      ws.cv.resize(P);
      ws.nlow.resize(P);
      ws.nup.resize(P);
#pragma omp for schedule(static)
      for (std::ptrdiff_t ks = 0; ks < static_cast<std::ptrdiff_t>(K); ++ks) {
        const std::size_t k = static_cast<std::size_t>(ks);
        const double* zt = paths.states[k].row(static_cast<std::size_t>(t));
        const double* zn = paths.states[k].row(static_cast<std::size_t>(t) + 1);

        // One inner batch per (path, epoch); every position and both bound
        // recursions see the same draws.
        std::mt19937_64 eng = make_stream(options.seed, StreamTag::subsim, k,
                                          static_cast<std::uint64_t>(t) + 1);
        for (std::size_t i = 0; i < I; ++i) {
          const Matrix w = law.step(standard_normal(eng));
          for (std::size_t r = 0; r < d; ++r) {
            double acc = 0.0;
            for (std::size_t c = 0; c < d; ++c)
              acc = std::fma(w(r, c), zt[c], acc);
            ws.images[i * d + r] = acc;
          }
        }
        if (d == 2) {
          for (std::size_t i = 0; i < I; ++i) ws.ys[i] = ws.images[i * 2 + 1];
          std::sort(ws.ys.begin(), ws.ys.end());
        }

        for (std::size_t p = 0; p < P; ++p) {
          const Evaluator& ve = vev[p];
          ws.sm[p] = d == 2 ? subsim_mean_1d(ve, ws.ys)
                            : subsim_mean(ve, ws.images, I, d, ws.tmp);
          ws.rv[p] = d == 2 ? ve.eval1(zn[1]) : ve(zn);
          ws.cv[p] = d == 2 ? cev[p].eval1(zt[1]) : cev[p](zt);
        }

        const RewardParts parts = model.reward_parts(t, zt);
        for (std::size_t p = 0; p < P; ++p) {
          const Position pos = model.position_at(p);
          double best_q = -std::numeric_limits<double>::infinity();
          double best_up = -std::numeric_limits<double>::infinity();
          double low_pick = 0.0;
          for (int ai = 0; ai < 3; ++ai) {
            const auto a = static_cast<Action>(ai);
            const double r = model.assemble_reward(t, parts, pos, a);
            const auto& trs = model.transitions(p, a);
            double q = r;
            double phi = 0.0;
            for (const Transition& tr : trs) {
              q = std::fma(tr.prob, ws.cv[tr.target], q);
              phi = std::fma(tr.prob, ws.sm[tr.target] - ws.rv[tr.target], phi);
            }
            const double base = r + phi;
            double cand_up = base;
            for (const Transition& tr : trs)
              cand_up = std::fma(tr.prob, up[k * P + tr.target], cand_up);
            if (cand_up > best_up) best_up = cand_up;
            if (q > best_q) {
              best_q = q;
              double cand_low = base;
              for (const Transition& tr : trs)
                cand_low = std::fma(tr.prob, low[k * P + tr.target], cand_low);
              low_pick = cand_low;
            }
          }
          ws.nlow[p] = low_pick;
          ws.nup[p] = best_up;
        }
        std::copy(ws.nlow.begin(), ws.nlow.end(), low.begin() + k * P);
        std::copy(ws.nup.begin(), ws.nup.end(), up.begin() + k * P);
      }
    }
  }

  const std::size_t p0 = ResourceModel::position_index(start);
  std::vector<double> lows(K), ups(K);
  for (std::size_t k = 0; k < K; ++k) {
    lows[k] = low[k * P + p0];
    ups[k] = up[k * P + p0];
  }
  BoundEstimate est;
  est.num_paths = K;
  est.num_subsims = I;
  mean_and_se(lows, &est.lower, &est.lower_se);
  mean_and_se(ups, &est.upper, &est.upper_se);
  if (samples != nullptr) {
    samples->lower = std::move(lows);
    samples->upper = std::move(ups);
  }
  return est;
}

}  // namespace cssw
