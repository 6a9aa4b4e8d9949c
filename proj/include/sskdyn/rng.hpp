#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

// Counter-based randomness: every variate is a pure function of a 64-bit key,
// so sampling is reproducible under any parallel schedule.

namespace sskdyn::rng {

constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += golden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t chain(std::uint64_t key, std::uint64_t word) {
  return mix64(key ^ (word + golden));
}

constexpr std::uint64_t key_of(std::uint64_t seed, std::uint64_t a) {
  return chain(mix64(seed), a);
}

constexpr std::uint64_t key_of(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return chain(key_of(seed, a), b);
}

constexpr std::uint64_t key_of(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                               std::uint64_t c) {
  return chain(key_of(seed, a, b), c);
}

// strictly inside (0,1); safe as a log or Box-Muller argument
inline double uniform01(std::uint64_t key, std::uint64_t ctr = 0) {
  const std::uint64_t bits = mix64(key + ctr * golden);
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

inline std::pair<double, double> gaussian_pair(std::uint64_t key) {
  const double u1 = uniform01(key, 0);
  const double u2 = uniform01(key, 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(a), r * std::sin(a)};
}

inline double gaussian(std::uint64_t key) { return gaussian_pair(key).first; }

inline double rademacher(std::uint64_t key) {
  return uniform01(key) < 0.5 ? -1.0 : 1.0;
}

// uniform on [-sqrt(3), sqrt(3)]: unit variance
inline double uniform_sym(std::uint64_t key) {
  return (2.0 * uniform01(key) - 1.0) * std::numbers::sqrt3;
}

}  // namespace sskdyn::rng
