#pragma once

// Counter-based random numbers: every variate is a pure function of
// (seed, key), so samples never depend on draw order or worker count.

#include <cmath>
#include <cstdint>

#include <boost/math/special_functions/erf.hpp>

#include "polycore.hpp"

namespace randhyp {

constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) {
  return mix64(seed ^ mix64(key ^ 0x6A09E667F3BCC909ull));
}

inline std::uint64_t hash_multi_index(const MultiIndex& I) {
  std::uint64_t h = mix64(I.size());
  for (unsigned e : I) h = mix64(h ^ (static_cast<std::uint64_t>(e) + 0x632BE59BD9B4E019ull));
  return h;
}

/// Uniform on the open interval (0, 1), 53-bit resolution.
inline double uniform_open(std::uint64_t seed, std::uint64_t key) {
  const std::uint64_t u = derive_seed(seed, key);
  return (static_cast<double>(u >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal by inverse CDF.
inline double standard_normal(std::uint64_t seed, std::uint64_t key) {
  const double p = uniform_open(seed, key);
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

}  // namespace randhyp
