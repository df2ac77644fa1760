// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0

#include "cssw/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cssw {
namespace {

int checked_horizon(const EconomicParams& e) {
  if (!(e.dt > 0.0)) throw std::invalid_argument("model: dt must be positive");
  if (!(e.years > 0.0)) throw std::invalid_argument("model: years must be positive");
  if (e.wastage < 0.0 || e.wastage > 1.0)
    throw std::invalid_argument("model: wastage outside [0,1]");
  if (e.penalty_scale < 0.0)
    throw std::invalid_argument("model: penalty proportion must be nonnegative");
  if (e.max_reserve < 0) throw std::invalid_argument("model: negative reserve cap");
  const double steps = e.years / e.dt;
  const int horizon = static_cast<int>(std::lround(steps));
  if (horizon < 1 || std::abs(steps - horizon) > 1e-9)
    throw std::invalid_argument("model: years must be a whole number of steps");
  return horizon;
}

}  // namespace

ResourceModel::ResourceModel(const EconomicParams& econ, const StateSpec& spec)
    : econ_(econ), spec_(spec), horizon_(checked_horizon(econ)) {
  if (spec_.dim < 2 || spec_.price_coord < 1 || spec_.price_coord >= spec_.dim)
    throw std::invalid_argument("model: bad state spec");

  // Transition lists are tiny and consulted in every Bellman and bound
  // step; precompute them per (position, action) with zero-probability
  // outcomes pruned and duplicate targets merged.
  const std::size_t np = num_positions();
  transitions_.resize(np * 3);
  for (std::size_t pi = 0; pi < np; ++pi) {
    const Position p = position_at(pi);
    for (int ai = 0; ai < 3; ++ai) {
      const auto a = static_cast<Action>(ai);
      std::vector<Transition>& out = transitions_[pi * 3 + ai];
      switch (a) {
        case Action::abandon:
          out.push_back({static_cast<std::uint32_t>(
                             position_index({0, p.mode})),
                         1.0});
          break;
        case Action::close:
          out.push_back({static_cast<std::uint32_t>(
                             position_index({p.reserve, Mode::closed})),
                         1.0});
          break;
        case Action::open: {
          const int drop1 = std::max(p.reserve - 1, 0);
          const int drop2 = std::max(p.reserve - 2, 0);
          const double w = econ_.wastage;
          if (drop1 == drop2) {
            out.push_back({static_cast<std::uint32_t>(
                               position_index({drop1, Mode::opened})),
                           1.0});
          } else {
            if (w < 1.0)
              out.push_back({static_cast<std::uint32_t>(
                                 position_index({drop1, Mode::opened})),
                             1.0 - w});
            if (w > 0.0)
              out.push_back({static_cast<std::uint32_t>(
                                 position_index({drop2, Mode::opened})),
                             w});
          }
          break;
        }
      }
    }
  }
}

Position ResourceModel::position_at(std::size_t index) const {
  if (index >= num_positions()) throw std::out_of_range("model: position index");
  return {static_cast<int>(index / 2),
          (index % 2 == 0) ? Mode::closed : Mode::opened};
}

double ResourceModel::maintenance_cost(int t) const {
  const EconomicParams& e = econ_;
  return e.maintenance0 * e.dt *
         std::exp((e.inflation - e.rate - e.tax) * t * e.dt);
}

double ResourceModel::switching_cost(int t) const {
  const EconomicParams& e = econ_;
  return e.switching0 * std::exp((e.inflation - e.rate - e.tax) * t * e.dt);
}

double ResourceModel::price_of(const double* z) const {
  const double x = z[spec_.price_coord];
  return spec_.kind == PriceCoord::level ? x : std::exp(x);
}

double ResourceModel::price_slope(const double* z) const {
  return spec_.kind == PriceCoord::level ? 1.0 : std::exp(z[spec_.price_coord]);
}

double ResourceModel::revenue(int t, const double* z) const {
  const EconomicParams& e = econ_;
  const double sell = e.revenue_slope * e.dt * price_of(z) *
                      std::exp(-(e.rate + e.tax) * t * e.dt);
  const double run = e.revenue_intercept * e.dt *
                     std::exp((e.inflation - e.rate - e.tax) * t * e.dt);
  return sell - run;
}

int ResourceModel::delivery_target(int t) const {
  const int p0 = econ_.contract_reserve;
  if (!econ_.delivery_schedule.empty()) {
    const auto it = econ_.delivery_schedule.find(t);
    return it != econ_.delivery_schedule.end() ? it->second : p0;
  }
  if (t >= 5 && t <= 41 && (t - 1) % 4 == 0) return p0 - (3 * (t - 1)) / 4;
  return p0;
}

double ResourceModel::penalty(int t, int reserve, const double* z) const {
  if (econ_.penalty_scale == 0.0) return 0.0;
  const int target = delivery_target(t);
  if (reserve <= target) return 0.0;
  return econ_.penalty_scale * price_of(z) * (reserve - target);
}

RewardParts ResourceModel::reward_parts(int t, const double* z) const {
  RewardParts parts;
  parts.price = price_of(z);
  parts.maintenance = maintenance_cost(t);
  parts.switching = switching_cost(t);
  const EconomicParams& e = econ_;
  const double sell = e.revenue_slope * e.dt * parts.price *
                      std::exp(-(e.rate + e.tax) * t * e.dt);
  const double run = e.revenue_intercept * e.dt *
                     std::exp((e.inflation - e.rate - e.tax) * t * e.dt);
  parts.revenue = sell - run;
  return parts;
}

double ResourceModel::assemble_reward(int t, const RewardParts& parts,
                                      Position p, Action a) const {
  if (p.reserve == 0) return 0.0;  // exhausted: neither costs nor revenue
  double value = 0.0;
  const int mode = static_cast<int>(p.mode);
  switch (a) {
    case Action::abandon:
      break;
    case Action::close:
      value = -parts.maintenance - parts.switching * std::abs(mode - 1);
      break;
    case Action::open:
      value = parts.revenue - parts.switching * std::abs(mode - 2);
      break;
  }
  if (econ_.penalty_scale != 0.0) {
    const int target = delivery_target(t);
    if (p.reserve > target)
      value -= econ_.penalty_scale * parts.price * (p.reserve - target);
  }
  return value;
}

double ResourceModel::reward(int t, Position p, const double* z, Action a) const {
  if (t < 0 || t >= horizon_) throw std::out_of_range("model: reward epoch");
  return assemble_reward(t, reward_parts(t, z), p, a);
}

double ResourceModel::scrap(Position p, const double* z) const {
  const RewardParts parts = reward_parts(horizon_, z);
  double best = assemble_reward(horizon_, parts, p, Action::abandon);
  best = std::max(best, assemble_reward(horizon_, parts, p, Action::close));
  best = std::max(best, assemble_reward(horizon_, parts, p, Action::open));
  return best;
}

ConvexHandle ResourceModel::reward_handle(int t, Position p, Action a) const {
  if (t < 0 || t > horizon_) throw std::out_of_range("model: reward epoch");
  ConvexHandle h;
  h.value = [this, t, p, a](const double* z) {
    return assemble_reward(t, reward_parts(t, z), p, a);
  };
  const std::size_t dim = spec_.dim;
  const std::size_t pc = spec_.price_coord;
  h.grad = [this, t, p, a, dim, pc](const double* z, double* slope) {
    for (std::size_t c = 0; c + 1 < dim; ++c) slope[c] = 0.0;
    if (p.reserve == 0) return;
    double s = 0.0;
    const double dp = price_slope(z);
    if (a == Action::open) {
      const EconomicParams& e = econ_;
      s += e.revenue_slope * e.dt * std::exp(-(e.rate + e.tax) * t * e.dt) * dp;
    }
    if (econ_.penalty_scale != 0.0 && p.reserve > delivery_target(t))
      s -= econ_.penalty_scale * (p.reserve - delivery_target(t)) * dp;
    slope[pc - 1] = s;
  };
  return h;
}

Matrix ResourceModel::envelope_matrix(int t, Position p, Action a,
                                      const Grid& grid) const {
  if (t < 0 || t > horizon_) throw std::out_of_range("model: reward epoch");
  if (grid.dim() != spec_.dim)
    throw std::invalid_argument("model: grid dimension mismatch");
  const std::size_t m = grid.size();
  const std::size_t d = spec_.dim;
  const std::size_t pc = spec_.price_coord;
  Matrix out(m, d);

  if (p.reserve == 0) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t c = 0; c < d; ++c) out(i, c) = 0.0;
    return out;
  }

  const EconomicParams& e = econ_;
  const double sell_coef =
      e.revenue_slope * e.dt * std::exp(-(e.rate + e.tax) * t * e.dt);
  const int target = delivery_target(t);
  const double short_units =
      (e.penalty_scale != 0.0 && p.reserve > target)
          ? static_cast<double>(p.reserve - target)
          : 0.0;

  for (std::size_t i = 0; i < m; ++i) {
    const double* g = grid.point(i);
    const RewardParts parts = reward_parts(t, g);
    const double v = assemble_reward(t, parts, p, a);
    const double dp = spec_.kind == PriceCoord::level ? 1.0 : parts.price;
    double s = 0.0;
    if (a == Action::open) s += sell_coef * dp;
    if (short_units != 0.0) s -= e.penalty_scale * short_units * dp;
    for (std::size_t c = 1; c < d; ++c) out(i, c) = 0.0;
    out(i, pc) = s;
    out(i, 0) = v - std::fma(s, g[pc], 0.0);
  }
  return out;
}

}  // namespace cssw
