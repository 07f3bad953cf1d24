#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wordle/associativity.hpp"
#include "wordle/errors.hpp"
#include "wordle/lexicon.hpp"
#include "wordle/word.hpp"

namespace wordle {

inline constexpr std::size_t kFeatureCount = 10;

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "FREQ", "Orth", "N1_C", "N2_C", "N3_C", "UN1_C", "UN2_C", "UN3_C", "MARKOV", "DISTANCE"};

/// Column index of each lexical attribute in feature arrays and matrices.
enum FeatureColumn : std::size_t {
  kFreq = 0, kOrth, kN1C, kN2C, kN3C, kUN1C, kUN2C, kUN3C, kMarkov, kDistance
};

/// Lexical attributes of one word.
struct FeatureVector {
  double freq = 0.0;       // occurrences per million
  double orth = 0.0;       // orthographic neighbours
  std::array<double, 3> constrained{};   // N1_C..N3_C
  std::array<double, 3> unconstrained{}; // UN1_C..UN3_C
  double markov = 0.0;     // log-associativity
  double distance = 0.0;   // mean edit distance to the rest of the dictionary

  std::array<double, kFeatureCount> to_array() const {
    return {freq, orth, constrained[0], constrained[1], constrained[2],
            unconstrained[0], unconstrained[1], unconstrained[2], markov, distance};
  }

  static FeatureVector from_array(const std::array<double, kFeatureCount>& a) {
    FeatureVector f;
    f.freq = a[kFreq];
    f.orth = a[kOrth];
    f.constrained = {a[kN1C], a[kN2C], a[kN3C]};
    f.unconstrained = {a[kUN1C], a[kUN2C], a[kUN3C]};
    f.markov = a[kMarkov];
    f.distance = a[kDistance];
    return f;
  }

  bool operator==(const FeatureVector&) const = default;
};

/// How per-window string counts are combined into one number per word.
enum class WindowAggregate { Sum, Mean, Max };

struct FeatureOptions {
  WindowAggregate aggregate = WindowAggregate::Sum;
};

/// Words other than `w` that differ from it in exactly one position.
inline int orth_neighbors(const Word& w, const Lexicon& lex) {
  int count = 0;
  for (const auto& other : lex.words()) {
    int diff = 0;
    for (std::size_t i = 0; i < kWordLength; ++i) {
      diff += other[i] != w[i];
    }
    count += diff == 1;
  }
  return count;
}

namespace detail {

inline bool contains_run(const Word& hay, const Word& needle, std::size_t start, std::size_t len) {
  for (std::size_t p = 0; p + len <= kWordLength; ++p) {
    bool match = true;
    for (std::size_t k = 0; k < len && match; ++k) {
      match = hay[p + k] == needle[start + k];
    }
    if (match) {
      return true;
    }
  }
  return false;
}

} // namespace detail

/// Per-window counts of other words sharing each contiguous x-letter window of
/// `w`: at the same positions when `constrained`, anywhere otherwise.
inline std::vector<int> string_window_counts(const Word& w, int x, bool constrained, const Lexicon& lex) {
  if (x < 1 || x > 3) {
    throw DataError("string window length must be 1, 2 or 3");
  }
  const auto len = static_cast<std::size_t>(x);
  std::vector<int> counts(kWordLength - len + 1, 0);
  for (const auto& other : lex.words()) {
    if (other == w) {
      continue;
    }
    for (std::size_t start = 0; start + len <= kWordLength; ++start) {
      bool hit;
      if (constrained) {
        hit = true;
        for (std::size_t k = 0; k < len && hit; ++k) {
          hit = other[start + k] == w[start + k];
        }
      } else {
        hit = detail::contains_run(other, w, start, len);
      }
      counts[start] += hit;
    }
  }
  return counts;
}

inline double aggregate_windows(const std::vector<int>& counts, WindowAggregate how) {
  switch (how) {
  case WindowAggregate::Mean:
    return std::accumulate(counts.begin(), counts.end(), 0.0) / static_cast<double>(counts.size());
  case WindowAggregate::Max:
    return *std::max_element(counts.begin(), counts.end());
  case WindowAggregate::Sum:
  default:
    return std::accumulate(counts.begin(), counts.end(), 0.0);
  }
}

/// N_x_C (constrained) or UN_x_C (unconstrained), summed over windows.
inline int string_count(const Word& w, int x, bool constrained, const Lexicon& lex) {
  auto c = string_window_counts(w, x, constrained, lex);
  return std::accumulate(c.begin(), c.end(), 0);
}

/// Levenshtein distance with unit costs.
template <class A, class B>
std::size_t levenshtein(const A& a, const B& b) {
  const std::size_t n = std::size(a), m = std::size(b);
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

/// Mean Levenshtein distance from `w` to every other dictionary word.
inline double mean_edit_distance(const Word& w, const Lexicon& lex) {
  std::size_t total = 0, others = 0;
  for (const auto& other : lex.words()) {
    if (other == w) {
      continue;
    }
    total += levenshtein(w.letters(), other.letters());
    ++others;
  }
  if (others == 0) {
    throw DataError("mean edit distance of '" + w.str() + "' needs at least one other dictionary word");
  }
  return static_cast<double>(total) / static_cast<double>(others);
}

inline FeatureVector feature_vector(const Word& w, const Lexicon& lex, const FrequencyTable& freq,
                                    const MarkovModel& markov, const FeatureOptions& opts = {}) {
  FeatureVector f;
  f.freq = freq(w);
  f.orth = orth_neighbors(w, lex);
  for (int x = 1; x <= 3; ++x) {
    f.constrained[x - 1] = aggregate_windows(string_window_counts(w, x, true, lex), opts.aggregate);
    f.unconstrained[x - 1] = aggregate_windows(string_window_counts(w, x, false, lex), opts.aggregate);
  }
  f.markov = associativity(markov, w).log_raw;
  f.distance = mean_edit_distance(w, lex);
  return f;
}

/// Column means and sample standard deviations. FREQ is mapped through
/// log(1 + FREQ) before centring.
struct Standardization {
  std::array<double, kFeatureCount> mean{};
  std::array<double, kFeatureCount> sd{};

  static double transform(std::size_t col, double v) { return col == kFreq ? std::log1p(v) : v; }
  static double untransform(std::size_t col, double v) { return col == kFreq ? std::expm1(v) : v; }

  Eigen::VectorXd apply(const FeatureVector& f) const {
    auto a = f.to_array();
    Eigen::VectorXd z(kFeatureCount);
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      z[static_cast<Eigen::Index>(j)] = (transform(j, a[j]) - mean[j]) / sd[j];
    }
    return z;
  }

  FeatureVector invert(const Eigen::VectorXd& z) const {
    std::array<double, kFeatureCount> a{};
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      a[j] = untransform(j, z[static_cast<Eigen::Index>(j)] * sd[j] + mean[j]);
    }
    return FeatureVector::from_array(a);
  }

  void validate() const {
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      if (!std::isfinite(mean[j]) || !std::isfinite(sd[j]) || !(sd[j] > 0.0)) {
        throw DataError("standardization for column " + std::string(kFeatureNames[j]) +
                        " needs a finite mean and positive sd");
      }
    }
  }

  bool operator==(const Standardization&) const = default;
};

struct StandardizedFeatures {
  Eigen::MatrixXd z;
  Standardization params;
};

inline StandardizedFeatures standardize(std::span<const FeatureVector> rows) {
  if (rows.size() < 2) {
    throw DataError("standardization needs at least 2 rows");
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(kFeatureCount));
  for (Eigen::Index i = 0; i < n; ++i) {
    auto a = rows[static_cast<std::size_t>(i)].to_array();
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      x(i, static_cast<Eigen::Index>(j)) = Standardization::transform(j, a[j]);
    }
  }
  StandardizedFeatures out;
  out.z.resize(n, x.cols());
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    auto col = x.col(static_cast<Eigen::Index>(j));
    const double mean = col.mean();
    const double var = (col.array() - mean).square().sum() / static_cast<double>(n - 1);
    const double sd = std::sqrt(var);
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
      throw DataError("feature column " + std::string(kFeatureNames[j]) + " has zero variance");
    }
    out.params.mean[j] = mean;
    out.params.sd[j] = sd;
    out.z.col(static_cast<Eigen::Index>(j)) = (col.array() - mean) / sd;
  }
  return out;
}

} // namespace wordle
