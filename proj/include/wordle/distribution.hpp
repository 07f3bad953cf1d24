#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>

#include "wordle/errors.hpp"

namespace wordle {

/// Number of guess-count bins: success in 1..6 tries, then failure.
inline constexpr std::size_t kBins = 7;
inline constexpr int kMaxGuesses = 6;
/// Tries value recorded for a failed game; also its weight in expectations.
inline constexpr int kFail = 7;

inline constexpr double kDistributionTolerance = 1e-9;

/// Guess-count distribution in percent. bins[i] is the share of games
/// solved in i+1 tries; bins[6] is the failure share.
struct GuessDistribution {
  std::array<double, kBins> bins{};

  double sum() const noexcept { return std::accumulate(bins.begin(), bins.end(), 0.0); }

  /// Expected tries with failure valued at 7.
  double expectation() const noexcept {
    double e = 0.0;
    for (std::size_t i = 0; i < kBins; ++i) {
      e += static_cast<double>(i + 1) * bins[i];
    }
    return e / 100.0;
  }

  bool is_valid(double tol = kDistributionTolerance) const noexcept {
    for (double b : bins) {
      if (!std::isfinite(b) || b < 0.0) {
        return false;
      }
    }
    return std::abs(sum() - 100.0) <= tol;
  }

  void validate() const {
    if (!is_valid()) {
      throw DataError("guess distribution must be non-negative and sum to 100 (sum=" +
                      std::to_string(sum()) + ")");
    }
  }

  /// Builds bins from raw tries counts (index 0 = solved in 1 try, 6 = failed).
  static GuessDistribution from_counts(std::span<const std::size_t, kBins> counts) {
    std::size_t total = 0;
    for (auto c : counts) {
      total += c;
    }
    if (total == 0) {
      throw DataError("cannot build a distribution from zero games");
    }
    GuessDistribution d;
    for (std::size_t i = 0; i < kBins; ++i) {
      d.bins[i] = 100.0 * static_cast<double>(counts[i]) / static_cast<double>(total);
    }
    return d;
  }

  bool operator==(const GuessDistribution&) const = default;
};

inline double expectation(const GuessDistribution& d) noexcept { return d.expectation(); }

} // namespace wordle
