#pragma once

#include <cmath>
#include <cstdint>

#include "zel/numeric.hpp"

namespace zel {
namespace rng {

// Counter-based generation: every variate is a pure function of
// (seed, key...) words pushed through an avalanche mixer.  No stream state,
// so parallel sweeps get identical draws regardless of scheduling.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash2(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b + 0x632be59bd9b4e019ULL));
}

inline std::uint64_t hash3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix64(hash2(a, b) ^ mix64(c + 0xd1b54a32d192ed03ULL));
}

// Derived seed for the i-th independent sub-stream (trial, sample, ...).
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
  return hash2(seed, index);
}

// Uniform on [0, 1).
inline double unit(std::uint64_t bits) {
  return (double)(bits >> 11) * 0x1.0p-53;
}

inline double uniform(std::uint64_t seed, std::uint64_t index) {
  return unit(hash2(seed, index));
}

// Uniform angle on [0, 2*pi).
inline double angle(std::uint64_t seed, std::uint64_t key) {
  return kTwoPi * unit(hash2(seed, key));
}

// Standard normal via Box-Muller on two counter-derived uniforms.
inline double gaussian(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t b1 = hash3(seed, index, 0x9d2c5680ULL);
  std::uint64_t b2 = hash3(seed, index, 0xefc60000ULL);
  double u1 = unit(b1);
  double u2 = unit(b2);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace rng
}  // namespace zel
