#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace wordle {

/// SplitMix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for the substream identified by `key` under a master seed.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t key) noexcept {
  return splitmix64(master ^ splitmix64(key));
}

using Rng = std::mt19937_64;

/// Unbiased integer in [0, n) (Lemire's multiply-and-reject). n must be > 0.
/// Implemented here rather than with std::uniform_int_distribution so that
/// draws are identical across standard libraries.
template <class Engine>
std::uint64_t uniform_below(Engine& rng, std::uint64_t n) {
  static_assert(Engine::max() == ~std::uint64_t{0} && Engine::min() == 0);
  std::uint64_t x = rng();
  auto m = static_cast<unsigned __int128>(x) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      x = rng();
      m = static_cast<unsigned __int128>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Standard normal via Box-Muller; portable across standard libraries.
template <class Engine>
double standard_normal(Engine& rng) {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  double u1 = 0.0;
  do {
    u1 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  } while (u1 <= 0.0);
  double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

/// Uniform double in [0, 1).
template <class Engine>
double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace wordle
