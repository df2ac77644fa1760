// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0
//
// Commodity-extraction switching model: positions (reserve level, mode),
// three actions, controlled transition probabilities, and the discounted
// reward/scrap functions together with their subgradient forms.

#ifndef CSSW_MODEL_HPP_
#define CSSW_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "cssw/grid.hpp"
#include "cssw/matrix.hpp"
#include "cssw/pwlc.hpp"

namespace cssw {

enum class Mode : int { closed = 1, opened = 2 };
enum class Action : int { abandon = 0, close = 1, open = 2 };

struct Position {
  int reserve = 0;
  Mode mode = Mode::closed;
};

// Economic coefficients. Rates are per year; dt converts epoch index to
// years. Maintenance and switching enter rewards as negative cash flows.
struct EconomicParams {
  double dt = 0.25;
  double years = 30.0;
  double rate = 0.10;       // interest r
  double inflation = 0.08;  // rho
  double tax = 0.02;        // zeta
  double maintenance0 = 0.5;
  double switching0 = 0.2;
  double revenue_slope = 5.0;      // price coefficient of h_t
  double revenue_intercept = 2.5;  // running-cost coefficient of h_t
  int max_reserve = 60;
  double wastage = 0.0;        // probability of losing one extra unit per
                               // opened period
  double penalty_scale = 0.0;  // proportion b of shortfall market value
  int contract_reserve = 60;   // starting level the delivery schedule is
                               // written against
  // Explicit epoch -> target overrides; epochs not listed fall back to the
  // contract level. Empty means the built-in quarterly ramp.
  std::map<int, int> delivery_schedule;
};

// How the continuous state carries the commodity price.
enum class PriceCoord { level, log };

struct StateSpec {
  std::size_t dim = 2;          // augmented state dimension
  std::size_t price_coord = 1;  // index of the (log-)price coordinate
  PriceCoord kind = PriceCoord::level;
};

// Reward pieces depending on (t, z) only; rewards for every (p, a) are
// assembled from one instance, so all callers price cash flows identically.
struct RewardParts {
  double revenue = 0.0;      // h_t(z)
  double maintenance = 0.0;  // m_t
  double switching = 0.0;    // c_t
  double price = 0.0;        // market price implied by z
};

struct Transition {
  std::uint32_t target = 0;  // position index
  double prob = 0.0;
};

class ResourceModel {
 public:
  ResourceModel(const EconomicParams& econ, const StateSpec& spec);

  const EconomicParams& econ() const { return econ_; }
  const StateSpec& state_spec() const { return spec_; }

  // Decision epochs are 0..num_epochs()-1; scrap is collected at
  // t = num_epochs().
  int num_epochs() const { return horizon_; }
  std::size_t num_positions() const {
    return static_cast<std::size_t>(econ_.max_reserve + 1) * 2;
  }

  static std::size_t position_index(Position p) {
    return static_cast<std::size_t>(p.reserve) * 2 +
           static_cast<std::size_t>(p.mode == Mode::opened ? 1 : 0);
  }
  Position position_at(std::size_t index) const;

  double maintenance_cost(int t) const;
  double switching_cost(int t) const;
  double revenue(int t, const double* z) const;
  // Contracted minimum remaining level at epoch t.
  int delivery_target(int t) const;
  double penalty(int t, int reserve, const double* z) const;

  RewardParts reward_parts(int t, const double* z) const;
  double assemble_reward(int t, const RewardParts& parts, Position p,
                         Action a) const;

  double reward(int t, Position p, const double* z, Action a) const;
  double scrap(Position p, const double* z) const;

  // Exact value/subgradient pair of z -> reward(t, p, z, a).
  ConvexHandle reward_handle(int t, Position p, Action a) const;
  // Tangent matrix of the reward on a grid, built in closed form; agrees
  // with envelope(reward_handle(t,p,a), grid). t may equal num_epochs()
  // for the terminal rewards.
  Matrix envelope_matrix(int t, Position p, Action a, const Grid& grid) const;

  const std::vector<Transition>& transitions(std::size_t p_index,
                                             Action a) const {
    return transitions_[p_index * 3 + static_cast<std::size_t>(a)];
  }

 private:
  double price_of(const double* z) const;
  double price_slope(const double* z) const;

  EconomicParams econ_;
  StateSpec spec_;
  int horizon_;
  std::vector<std::vector<Transition>> transitions_;
};

}  // namespace cssw

#endif  // CSSW_MODEL_HPP_
