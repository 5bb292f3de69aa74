// SPDX-License-Identifier: Apache-2.0
//
// Seed derivation and Gaussian draw helpers shared by the simulation modules.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace dxl {

/// splitmix64 finalizer; used to derive decorrelated seeds for sub-streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a) {
  return splitmix64(splitmix64(seed) ^ (a + 0x9e3779b97f4a7c15ULL));
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return mix_seed(mix_seed(seed, a), b);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                              std::uint64_t c) {
  return mix_seed(mix_seed(seed, a, b), c);
}

/// Standard complex Gaussian with E[|z|^2] = 1.
inline std::complex<double> complex_gaussian(std::mt19937_64& rng,
                                             std::normal_distribution<double>& normal) {
  const double re = normal(rng);
  const double im = normal(rng);
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

inline std::complex<double> complex_gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  return complex_gaussian(rng, normal);
}

}  // namespace dxl
