// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace shapediff {

/// Master seed for a simulation run. Identical SeedSpec values produce
/// bitwise-identical outputs on the same build, independent of thread count.
struct SeedSpec {
  std::uint64_t master_seed = 0;
};

namespace rng {

// Domain tags keep sub-stream key spaces disjoint between consumers.
inline constexpr std::uint64_t kDomainCoefficient = 0x1;
inline constexpr std::uint64_t kDomainPathMatrix = 0x2;
inline constexpr std::uint64_t kDomainFbm = 0x3;

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

/// SplitMix64 finalizer; avalanche-quality 64-bit mix.
inline std::uint64_t mix64(std::uint64_t x) {
  x += kGamma;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t combine(std::uint64_t h, std::uint64_t v) { return mix64(h ^ (v * kGamma + 0x632be59bd9b4e019ULL)); }

/// Derive an independent sub-stream key from the master seed and a stream
/// identity (domain tag plus up to three indices, e.g. channel/degree/order).
/// Keyed derivation makes the per-coefficient noise reproducible regardless
/// of evaluation order or parallel schedule.
inline std::uint64_t derive_stream(SeedSpec seed, std::uint64_t domain, std::uint64_t a = 0,
                                   std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = mix64(seed.master_seed);
  h = combine(h, domain);
  h = combine(h, a);
  h = combine(h, b);
  h = combine(h, c);
  return h;
}

/// Raw 64-bit draw at position `i` of the keyed counter stream.
inline std::uint64_t bits_at(std::uint64_t stream_key, std::uint64_t i) {
  return mix64(stream_key + i * kGamma);
}

/// Uniform draw in [0, 1) at counter position `i`.
inline double uniform_at(std::uint64_t stream_key, std::uint64_t i) {
  return static_cast<double>(bits_at(stream_key, i) >> 11) * 0x1.0p-53;
}

/// Standard normal draw at counter position `i` (Box-Muller on two uniforms;
/// consumes raw positions 2i and 2i+1). Pure function of (key, i).
inline double normal_at(std::uint64_t stream_key, std::uint64_t i) {
  const std::uint64_t r1 = bits_at(stream_key, 2 * i);
  const std::uint64_t r2 = bits_at(stream_key, 2 * i + 1);
  const double u1 = (static_cast<double>(r1 >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  const double u2 = static_cast<double>(r2 >> 11) * 0x1.0p-53;          // [0, 1)
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace rng
}  // namespace shapediff
