#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "wordle/distribution.hpp"
#include "wordle/errors.hpp"

namespace wordle::numerics {

/// Scale of D' inside the exp(-D') weights.
enum class WeightScale {
  Percent,  // D' in percentage points, as stored
  Fraction, // D' / 100
};

struct QpOptions {
  WeightScale weight_scale = WeightScale::Fraction;
  int max_iterations = 200;
};

/// Correction of a raw distribution: delta[i] is added to bin i.
struct QpSolution {
  std::array<double, kBins> delta{};
  /// 1-based bins where delta = -D' binds.
  std::vector<int> active_set;
  double objective = 0.0;
  /// Target after clamping into the feasible interval.
  double target = 0.0;
  double requested_target = 0.0;
  bool clamped = false;
  int iterations = 0;
};

inline constexpr double kMinQpWeight = 1e-12;

inline std::array<double, kBins> qp_weights(const GuessDistribution& raw, WeightScale scale = WeightScale::Fraction) {
  std::array<double, kBins> w{};
  const double k = scale == WeightScale::Fraction ? 0.01 : 1.0;
  for (std::size_t i = 0; i < kBins; ++i) {
    w[i] = std::max(std::exp(-k * raw.bins[i]), kMinQpWeight);
  }
  return w;
}

/// Range of sum(i * delta_i) reachable while keeping raw + delta a distribution.
inline std::pair<double, double> qp_feasible_interval(const GuessDistribution& raw) {
  const double e = raw.expectation();
  return {100.0 * (1.0 - e), 100.0 * (7.0 - e)};
}

namespace detail {

/// Minimiser of sum_F w_i d_i^2 subject to sum_F d_i = r0 and
/// sum_F (i+1) d_i = r1 over the free bins F. Writes free entries of `d`;
/// returns the affine multiplier terms (a, b, centre) so that
/// w_i d_i = a + b (i+1 - centre) on F.
struct FreeSolve {
  double a = 0.0, b = 0.0, centre = 0.0;
};

inline FreeSolve solve_free(const std::array<double, kBins>& w, const std::array<bool, kBins>& free, double r0,
                            double r1, std::array<double, kBins>& d) {
  using real = long double;
  std::array<real, kBins> inv{}, dl{};
  real s_sum = 0.0L, s_i = 0.0L;
  for (std::size_t i = 0; i < kBins; ++i) {
    if (free[i]) {
      inv[i] = 1.0L / static_cast<real>(w[i]);
      s_sum += inv[i];
      s_i += static_cast<real>(i + 1) * inv[i];
    }
  }
  const real centre = s_i / s_sum;
  real q = 0.0L;
  for (std::size_t i = 0; i < kBins; ++i) {
    if (free[i]) {
      const real j = static_cast<real>(i + 1) - centre;
      q += j * j * inv[i];
    }
  }
  // The closed form loses digits when one weight is tiny; refine on the residuals.
  real e0 = r0, e1 = r1, fa = 0.0L, fb = 0.0L;
  for (int pass = 0; pass < 6; ++pass) {
    const real a = e0 / s_sum;
    const real b = (e1 - centre * e0) / q;
    fa += a;
    fb += b;
    real c0 = 0.0L, c1 = 0.0L;
    for (std::size_t i = 0; i < kBins; ++i) {
      if (free[i]) {
        dl[i] += (a + b * (static_cast<real>(i + 1) - centre)) * inv[i];
        c0 += dl[i];
        c1 += static_cast<real>(i + 1) * dl[i];
      }
    }
    e0 = r0 - c0;
    e1 = r1 - c1;
    if (std::abs(e0) <= 1e-17L * (1.0L + std::abs(static_cast<real>(r0))) &&
        std::abs(e1) <= 1e-17L * (1.0L + std::abs(static_cast<real>(r1)))) {
      break;
    }
  }
  for (std::size_t i = 0; i < kBins; ++i) {
    if (free[i]) {
      d[i] = static_cast<double>(dl[i]);
    }
  }
  return {static_cast<double>(fa), static_cast<double>(fb), static_cast<double>(centre)};
}

} // namespace detail

/// Minimises sum w_i delta_i^2, w_i = max(exp(-D'_i), 1e-12), subject to
/// sum delta = 0, sum (i+1) delta_i = target and delta_i >= -D'_i, by a
/// primal active-set method started from a two-bin feasible point. Targets
/// outside the feasible interval are clamped onto it and flagged.
inline QpSolution qp_correct(const GuessDistribution& raw, double target, const QpOptions& opts = {}) {
  if (!raw.is_valid()) {
    throw DataError("qp_correct needs a valid raw distribution");
  }
  if (!std::isfinite(target)) {
    throw DataError("qp_correct target must be finite");
  }
  QpSolution sol;
  sol.requested_target = target;
  const auto [lo, hi] = qp_feasible_interval(raw);
  if (target < lo) {
    target = lo;
    sol.clamped = true;
  } else if (target > hi) {
    target = hi;
    sol.clamped = true;
  }
  sol.target = target;

  const auto w = qp_weights(raw, opts.weight_scale);
  std::array<double, kBins> lb{};
  for (std::size_t i = 0; i < kBins; ++i) {
    lb[i] = -raw.bins[i];
  }
  auto finish = [&](const std::array<double, kBins>& d) {
    sol.delta = d;
    sol.objective = 0.0;
    sol.active_set.clear();
    for (std::size_t i = 0; i < kBins; ++i) {
      sol.objective += w[i] * d[i] * d[i];
      if (d[i] <= lb[i] + 1e-12 * (1.0 + raw.bins[i])) {
        sol.active_set.push_back(static_cast<int>(i + 1));
      }
    }
    return sol;
  };

  // Feasible start: all mass on the two bins bracketing the target mean.
  const double mean_tries = (100.0 * raw.expectation() + target) / 100.0;
  std::array<double, kBins> x{};
  {
    const double m = std::clamp(mean_tries, 1.0, 7.0);
    const auto low = static_cast<std::size_t>(std::min(std::floor(m), 6.0)); // 1-based
    const double frac = m - static_cast<double>(low);
    std::array<double, kBins> p{};
    p[low - 1] = 100.0 * (1.0 - frac);
    p[low] = 100.0 * frac;
    for (std::size_t i = 0; i < kBins; ++i) {
      x[i] = p[i] - raw.bins[i];
    }
  }
  if (target == lo || target == hi) {
    // Single feasible point: everything in bin 1 or bin 7.
    sol.iterations = 0;
    return finish(x);
  }

  std::array<bool, kBins> working{};
  const double step_tol = 1e-11;
  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    sol.iterations = iter;
    std::array<bool, kBins> free{};
    double r0 = 0.0, r1 = target;
    std::array<double, kBins> cand{};
    for (std::size_t i = 0; i < kBins; ++i) {
      free[i] = !working[i];
      if (working[i]) {
        cand[i] = lb[i];
        r0 -= lb[i];
        r1 -= static_cast<double>(i + 1) * lb[i];
      }
    }
    const auto fs = detail::solve_free(w, free, r0, r1, cand);

    double step_norm = 0.0;
    for (std::size_t i = 0; i < kBins; ++i) {
      step_norm = std::max(step_norm, std::abs(cand[i] - x[i]));
    }
    if (step_norm <= step_tol * (1.0 + std::abs(target))) {
      // Stationary on the working set: drop the most negative multiplier.
      std::size_t worst = kBins;
      double worst_nu = 0.0;
      for (std::size_t i = 0; i < kBins; ++i) {
        if (!working[i]) {
          continue;
        }
        const double affine = fs.a + fs.b * (static_cast<double>(i + 1) - fs.centre);
        const double nu = w[i] * lb[i] - affine;
        const double scale = std::abs(w[i] * lb[i]) + std::abs(affine);
        if (nu < -1e-12 * scale && nu < worst_nu) {
          worst_nu = nu;
          worst = i;
        }
      }
      if (worst == kBins) {
        return finish(cand);
      }
      working[worst] = false;
      x = cand;
      continue;
    }

    double alpha = 1.0;
    std::size_t blocking = kBins;
    for (std::size_t i = 0; i < kBins; ++i) {
      const double p = cand[i] - x[i];
      if (working[i] || p >= 0.0) {
        continue;
      }
      const double a = (lb[i] - x[i]) / p;
      if (a < alpha) {
        alpha = std::max(a, 0.0);
        blocking = i;
      }
    }
    for (std::size_t i = 0; i < kBins; ++i) {
      x[i] += alpha * (cand[i] - x[i]);
    }
    if (blocking != kBins) {
      if (std::count(working.begin(), working.end(), true) >= static_cast<long>(kBins) - 2) {
        throw NumericalError("active-set QP: working set would leave fewer than two free bins");
      }
      x[blocking] = lb[blocking];
      working[blocking] = true;
    }
  }
  throw NumericalError("active-set QP did not converge in " + std::to_string(opts.max_iterations) +
                       " iterations");
}

} // namespace wordle::numerics
