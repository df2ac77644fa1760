// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0

#include "cssw/rng.hpp"

#include <boost/math/distributions/normal.hpp>
#include <stdexcept>

namespace cssw {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(tag));
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  return std::mt19937_64(h);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p must lie in (0,1)");
  static const boost::math::normal_distribution<double> unit_normal(0.0, 1.0);
  return boost::math::quantile(unit_normal, p);
}

double standard_normal(std::mt19937_64& eng) {
  // 53 uniform bits mapped to the open interval (0,1).
  const double u = (static_cast<double>(eng() >> 11) + 0.5) * 0x1p-53;
  return normal_quantile(u);
}

}  // namespace cssw
