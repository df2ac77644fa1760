// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CSSW_RNG_HPP_
#define CSSW_RNG_HPP_

#include <cstdint>
#include <random>

namespace cssw {

// Stream purposes; part of the key so draws never collide across uses.
enum class StreamTag : std::uint64_t {
  path = 0x70617468,
  subsim = 0x73756273,
  cloud = 0x636c6f75,
  test = 0x74657374,
};

std::uint64_t splitmix64(std::uint64_t x);

// Deterministic engine for the (seed, tag, a, b) stream. All randomness in
// the library flows through these; results are reproducible bit for bit on
// a given platform regardless of thread count.
std::mt19937_64 make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t a = 0, std::uint64_t b = 0);

// Phi^{-1}(p) for p in (0,1).
double normal_quantile(double p);

// Standard normal via inverse transform; consumes exactly one engine step.
double standard_normal(std::mt19937_64& eng);

}  // namespace cssw

#endif  // CSSW_RNG_HPP_
