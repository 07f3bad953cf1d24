#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "wordle/errors.hpp"
#include "wordle/lexicon.hpp"
#include "wordle/word.hpp"

namespace wordle {

/// First-order letter chain: first-letter probabilities and letter-to-letter
/// transition probabilities estimated from a dictionary.
struct MarkovModel {
  std::array<double, kAlphabetSize> first{};
  std::array<std::array<double, kAlphabetSize>, kAlphabetSize> trans{};
  double smoothing = 0.0;

  void validate(double tol = 1e-12) const {
    if (!(smoothing >= 0.0) || !std::isfinite(smoothing)) {
      throw DataError("markov smoothing must be a non-negative finite number");
    }
    double fs = 0.0;
    for (double p : first) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw DataError("markov first-letter probabilities must be finite and non-negative");
      }
      fs += p;
    }
    if (std::abs(fs - 1.0) > tol) {
      throw DataError("markov first-letter probabilities sum to " + std::to_string(fs));
    }
    for (int i = 0; i < kAlphabetSize; ++i) {
      double rs = 0.0;
      for (double p : trans[i]) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
          throw DataError("markov transition probabilities must be finite and non-negative");
        }
        rs += p;
      }
      if (rs != 0.0 && std::abs(rs - 1.0) > tol) {
        throw DataError("markov transition row '" + std::string(1, static_cast<char>('a' + i)) +
                        "' sums to " + std::to_string(rs));
      }
    }
  }

  bool operator==(const MarkovModel&) const = default;
};

/// Counts are uniform over words. With smoothing k, every count gets +k and
/// every denominator +26k. A letter that never precedes another gets an all-zero
/// row when k = 0.
inline MarkovModel build_markov(const Lexicon& lex, double smoothing = 0.0) {
  if (lex.empty()) {
    throw DataError("cannot build a letter chain from an empty dictionary");
  }
  if (!(smoothing >= 0.0) || !std::isfinite(smoothing)) {
    throw DataError("smoothing must be a non-negative finite number");
  }
  std::array<double, kAlphabetSize> first_count{};
  std::array<std::array<double, kAlphabetSize>, kAlphabetSize> pair_count{};
  std::array<double, kAlphabetSize> from_count{};
  for (const auto& w : lex.words()) {
    first_count[w[0]] += 1.0;
    for (std::size_t i = 1; i < kWordLength; ++i) {
      pair_count[w[i - 1]][w[i]] += 1.0;
      from_count[w[i - 1]] += 1.0;
    }
  }
  MarkovModel m;
  m.smoothing = smoothing;
  const double n = static_cast<double>(lex.size());
  for (int i = 0; i < kAlphabetSize; ++i) {
    m.first[i] = (first_count[i] + smoothing) / (n + kAlphabetSize * smoothing);
    const double denom = from_count[i] + kAlphabetSize * smoothing;
    for (int j = 0; j < kAlphabetSize; ++j) {
      m.trans[i][j] = denom > 0.0 ? (pair_count[i][j] + smoothing) / denom : 0.0;
    }
  }
  return m;
}

inline constexpr double kAssociativityFloor = 1e-300;

struct AssociativityScore {
  double raw = 0.0;
  /// ln(max(raw, 1e-300)).
  double log_raw = 0.0;
};

/// Probability that the chain spells out `w`.
inline AssociativityScore associativity(const MarkovModel& model, const Word& w) {
  double p = model.first[w[0]];
  for (std::size_t i = 1; i < kWordLength; ++i) {
    p *= model.trans[w[i - 1]][w[i]];
  }
  return {p, std::log(std::max(p, kAssociativityFloor))};
}

} // namespace wordle
