#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "wordle/errors.hpp"
#include "wordle/random.hpp"

namespace wordle::numerics {

enum class Linkage { Ward, Average };

inline const char* to_string(Linkage l) { return l == Linkage::Ward ? "ward" : "average"; }

/// Renumbers arbitrary cluster ids to 1..k so that cluster means increase with the label.
inline std::vector<int> order_labels_by_mean(std::span<const double> values, std::span<const int> ids) {
  std::map<int, std::pair<double, std::size_t>> acc; // id -> (sum, count)
  std::map<int, std::size_t> first_seen;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto& a = acc[ids[i]];
    a.first += values[i];
    ++a.second;
    first_seen.try_emplace(ids[i], i);
  }
  std::vector<std::pair<double, int>> order;
  for (const auto& [id, a] : acc) {
    order.emplace_back(a.first / static_cast<double>(a.second), id);
  }
  std::sort(order.begin(), order.end(), [&](const auto& l, const auto& r) {
    return l.first != r.first ? l.first < r.first : first_seen[l.second] < first_seen[r.second];
  });
  std::map<int, int> relabel;
  for (std::size_t r = 0; r < order.size(); ++r) {
    relabel[order[r].second] = static_cast<int>(r + 1);
  }
  std::vector<int> out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out[i] = relabel[ids[i]];
  }
  return out;
}

/// Merge history of agglomerative clustering on scalars.
class Dendrogram {
public:
  struct Merge {
    std::size_t keep;   // representative index that absorbs `absorbed`
    std::size_t absorbed;
    double height;
  };

  /// Lance-Williams updates over a full distance matrix. Ward works on squared
  /// distances (heights are twice the increase in within-cluster sum of
  /// squares); average linkage on absolute distances. Ties go to the lowest
  /// index pair.
  Dendrogram(std::span<const double> values, Linkage linkage) : n_(values.size()) {
    if (n_ == 0) {
      throw DataError("cannot cluster an empty sample");
    }
    std::vector<double> d(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        const double diff = values[i] - values[j];
        d[i * n_ + j] = linkage == Linkage::Ward ? diff * diff : std::abs(diff);
      }
    }
    std::vector<std::size_t> size(n_, 1);
    std::vector<bool> active(n_, true);
    merges_.reserve(n_ - 1);
    for (std::size_t step = 0; step + 1 < n_; ++step) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t bi = 0, bj = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (!active[i]) {
          continue;
        }
        for (std::size_t j = i + 1; j < n_; ++j) {
          if (active[j] && d[i * n_ + j] < best) {
            best = d[i * n_ + j];
            bi = i;
            bj = j;
          }
        }
      }
      const double ni = static_cast<double>(size[bi]), nj = static_cast<double>(size[bj]);
      for (std::size_t k = 0; k < n_; ++k) {
        if (!active[k] || k == bi || k == bj) {
          continue;
        }
        double updated;
        if (linkage == Linkage::Ward) {
          const double nk = static_cast<double>(size[k]);
          updated = ((ni + nk) * d[bi * n_ + k] + (nj + nk) * d[bj * n_ + k] - nk * best) / (ni + nj + nk);
        } else {
          updated = (ni * d[bi * n_ + k] + nj * d[bj * n_ + k]) / (ni + nj);
        }
        d[bi * n_ + k] = d[k * n_ + bi] = updated;
      }
      size[bi] += size[bj];
      active[bj] = false;
      merges_.push_back({bi, bj, best});
    }
  }

  std::size_t size() const noexcept { return n_; }
  const std::vector<Merge>& merges() const noexcept { return merges_; }

  /// Cluster ids (representative indices) after stopping at k clusters.
  std::vector<int> cut_ids(std::size_t k) const {
    if (k < 1 || k > n_) {
      throw DataError("cluster count must be in [1, " + std::to_string(n_) + "]");
    }
    std::vector<std::size_t> parent(n_);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto root = [&](std::size_t i) {
      while (parent[i] != i) {
        i = parent[i] = parent[parent[i]];
      }
      return i;
    };
    for (std::size_t m = 0; m < n_ - k; ++m) {
      parent[root(merges_[m].absorbed)] = root(merges_[m].keep);
    }
    std::vector<int> ids(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      ids[i] = static_cast<int>(root(i));
    }
    return ids;
  }

private:
  std::size_t n_;
  std::vector<Merge> merges_;
};

/// Agglomerative clustering of scalars into k groups. Label k holds the
/// largest values.
inline std::vector<int> hcluster(std::span<const double> values, int k, Linkage linkage = Linkage::Ward) {
  if (k < 2 || static_cast<std::size_t>(k) > values.size()) {
    throw DataError("cluster count k=" + std::to_string(k) + " must be in [2, " +
                    std::to_string(values.size()) + "]");
  }
  Dendrogram tree(values, linkage);
  auto ids = tree.cut_ids(static_cast<std::size_t>(k));
  return order_labels_by_mean(values, ids);
}

/// Lloyd's algorithm on scalars with k-means++ seeding; best of `restarts`
/// by inertia. Labels ordered by cluster mean.
inline std::vector<int> kmeans_1d(std::span<const double> values, int k, int restarts = 50,
                                  std::uint64_t seed = 20220107) {
  const std::size_t n = values.size();
  if (k < 2 || static_cast<std::size_t>(k) > n) {
    throw DataError("cluster count k=" + std::to_string(k) + " must be in [2, " + std::to_string(n) + "]");
  }
  Rng rng(seed);
  std::vector<int> best_ids;
  double best_inertia = std::numeric_limits<double>::infinity();
  std::vector<double> centres(static_cast<std::size_t>(k));
  std::vector<int> ids(n);
  std::vector<double> dist2(n);
  for (int r = 0; r < restarts; ++r) {
    centres[0] = values[uniform_below(rng, n)];
    for (int c = 1; c < k; ++c) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double m = std::numeric_limits<double>::infinity();
        for (int e = 0; e < c; ++e) {
          m = std::min(m, (values[i] - centres[e]) * (values[i] - centres[e]));
        }
        dist2[i] = m;
        total += m;
      }
      std::size_t pick = uniform_below(rng, n);
      if (total > 0.0) {
        double u = uniform01(rng) * total;
        for (std::size_t i = 0; i < n; ++i) {
          u -= dist2[i];
          if (u < 0.0) {
            pick = i;
            break;
          }
        }
      }
      centres[static_cast<std::size_t>(c)] = values[pick];
    }
    for (int it = 0; it < 300; ++it) {
      bool changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        int best = 0;
        for (int c = 1; c < k; ++c) {
          if (std::abs(values[i] - centres[c]) < std::abs(values[i] - centres[best])) {
            best = c;
          }
        }
        changed |= ids[i] != best || it == 0;
        ids[i] = best;
      }
      if (!changed) {
        break;
      }
      std::vector<double> sum(static_cast<std::size_t>(k), 0.0);
      std::vector<std::size_t> cnt(static_cast<std::size_t>(k), 0);
      for (std::size_t i = 0; i < n; ++i) {
        sum[ids[i]] += values[i];
        ++cnt[ids[i]];
      }
      for (int c = 0; c < k; ++c) {
        if (cnt[c] > 0) {
          centres[c] = sum[c] / static_cast<double>(cnt[c]);
        } else {
          // Re-seed an empty cluster at the point farthest from its centre.
          std::size_t far = 0;
          double fd = -1.0;
          for (std::size_t i = 0; i < n; ++i) {
            const double dd = std::abs(values[i] - centres[ids[i]]);
            if (dd > fd) {
              fd = dd;
              far = i;
            }
          }
          centres[c] = values[far];
        }
      }
    }
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      inertia += (values[i] - centres[ids[i]]) * (values[i] - centres[ids[i]]);
    }
    std::vector<bool> seen(static_cast<std::size_t>(k), false);
    for (int id : ids) {
      seen[static_cast<std::size_t>(id)] = true;
    }
    const bool all_used = std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
    if (all_used && inertia < best_inertia) {
      best_inertia = inertia;
      best_ids = ids;
    }
  }
  if (best_ids.empty()) {
    throw NumericalError("k-means could not populate " + std::to_string(k) + " clusters");
  }
  return order_labels_by_mean(values, best_ids);
}

/// Mean silhouette over points using absolute distance. Points in singleton
/// clusters score 0.
inline double silhouette(std::span<const double> values, std::span<const int> labels) {
  if (values.size() != labels.size()) {
    throw DataError("silhouette: values and labels differ in length");
  }
  std::map<int, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    members[labels[i]].push_back(i);
  }
  if (members.size() < 2) {
    throw DataError("silhouette needs at least 2 clusters");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& own = members[labels[i]];
    if (own.size() == 1) {
      continue;
    }
    double a = 0.0;
    for (auto j : own) {
      a += std::abs(values[i] - values[j]);
    }
    a /= static_cast<double>(own.size() - 1);
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [label, idx] : members) {
      if (label == labels[i]) {
        continue;
      }
      double s = 0.0;
      for (auto j : idx) {
        s += std::abs(values[i] - values[j]);
      }
      b = std::min(b, s / static_cast<double>(idx.size()));
    }
    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(values.size());
}

} // namespace wordle::numerics
