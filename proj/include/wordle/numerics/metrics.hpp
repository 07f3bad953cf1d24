#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wordle/distribution.hpp"
#include "wordle/errors.hpp"

namespace wordle::numerics {

/// Mean of squared per-bin differences on the 0-100 scale.
inline double distribution_mse(const GuessDistribution& pred, const GuessDistribution& actual) {
  double s = 0.0;
  for (std::size_t i = 0; i < kBins; ++i) {
    const double d = pred.bins[i] - actual.bins[i];
    s += d * d;
  }
  return s / static_cast<double>(kBins);
}

inline double average_distribution_mse(std::span<const GuessDistribution> pred,
                                       std::span<const GuessDistribution> actual) {
  if (pred.size() != actual.size()) {
    throw DataError("distribution lists differ in length");
  }
  if (pred.empty()) {
    return 0.0;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    s += distribution_mse(pred[i], actual[i]);
  }
  return s / static_cast<double>(pred.size());
}

inline double accuracy(std::span<const int> pred, std::span<const int> actual) {
  if (pred.size() != actual.size()) {
    throw DataError("label lists differ in length");
  }
  if (pred.empty()) {
    return 0.0;
  }
  std::size_t hit = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    hit += pred[i] == actual[i];
  }
  return static_cast<double>(hit) / static_cast<double>(pred.size());
}

/// Area under the ROC curve via the Mann-Whitney statistic; ties count one half.
inline double binary_auc(std::span<const double> scores, std::span<const std::uint8_t> positive) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  std::size_t npos = 0;
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) {
      ++j;
    }
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      if (positive[idx[t]]) {
        rank_sum += avg_rank;
        ++npos;
      }
    }
    i = j;
  }
  const std::size_t nneg = scores.size() - npos;
  if (npos == 0 || nneg == 0) {
    throw DataError("AUC needs both positive and negative examples");
  }
  const double u = rank_sum - 0.5 * static_cast<double>(npos) * static_cast<double>(npos + 1);
  return u / (static_cast<double>(npos) * static_cast<double>(nneg));
}

/// Macro-averaged one-vs-rest AUC. `class_scores[i][j]` scores observation i
/// for level j+1. Levels absent from `actual` (or present in every row) are skipped.
inline double macro_auc(std::span<const int> actual, const std::vector<std::vector<double>>& class_scores) {
  if (actual.size() != class_scores.size() || actual.empty()) {
    throw DataError("macro AUC: labels and scores differ in length");
  }
  const std::size_t k = class_scores.front().size();
  double total = 0.0;
  std::size_t used = 0;
  std::vector<double> s(actual.size());
  std::vector<std::uint8_t> pos(actual.size());
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t npos = 0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
      s[i] = class_scores[i][j];
      pos[i] = actual[i] == static_cast<int>(j + 1);
      npos += pos[i];
    }
    if (npos == 0 || npos == actual.size()) {
      continue;
    }
    total += binary_auc(s, pos);
    ++used;
  }
  if (used == 0) {
    throw DataError("macro AUC needs at least two observed levels");
  }
  return total / static_cast<double>(used);
}

/// One-hot scores from hard labels, for AUC of a plain classifier.
inline std::vector<std::vector<double>> one_hot(std::span<const int> labels, int k) {
  std::vector<std::vector<double>> out(labels.size(), std::vector<double>(static_cast<std::size_t>(k), 0.0));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= 1 && labels[i] <= k) {
      out[i][static_cast<std::size_t>(labels[i] - 1)] = 1.0;
    }
  }
  return out;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DataError("correlation inputs differ in length");
  }
  if (x.size() < 2) {
    throw DataError("correlation needs at least 2 pairs");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return sxy / std::sqrt(sxx * syy);
}

struct MetricsReport {
  double average_mse = 0.0;
  double accuracy = 0.0;
  double macro_auc = 0.0;
  double pearson_r = 0.0;
};

/// Distribution MSE, label accuracy, macro AUC (from `class_scores`, or from
/// one-hot predicted labels when absent) and Pearson r of the paired scores.
inline MetricsReport metrics(std::span<const GuessDistribution> pred, std::span<const GuessDistribution> actual,
                             std::span<const int> pred_labels, std::span<const int> actual_labels,
                             std::span<const double> score_x, std::span<const double> score_y,
                             const std::optional<std::vector<std::vector<double>>>& class_scores = std::nullopt) {
  if (pred_labels.size() != actual_labels.size()) {
    throw DataError("label lists differ in length");
  }
  MetricsReport r;
  r.average_mse = average_distribution_mse(pred, actual);
  if (!actual_labels.empty()) {
    r.accuracy = accuracy(pred_labels, actual_labels);
    int k = std::max(*std::max_element(actual_labels.begin(), actual_labels.end()),
                     *std::max_element(pred_labels.begin(), pred_labels.end()));
    r.macro_auc = macro_auc(actual_labels, class_scores ? *class_scores : one_hot(pred_labels, k));
  }
  r.pearson_r = score_x.size() >= 2 ? pearson(score_x, score_y) : std::numeric_limits<double>::quiet_NaN();
  return r;
}

} // namespace wordle::numerics
