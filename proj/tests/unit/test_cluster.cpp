#include <gtest/gtest.h>

#include <random>
#include <set>

#include "wordle/numerics/cluster.hpp"
#include "support/oracles.hpp"

using namespace wordle;
using namespace wordle::numerics;

namespace {

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> nd(4.0, 0.6);
  std::vector<double> v(n);
  for (auto& x : v) {
    x = nd(rng);
  }
  return v;
}

void expect_ordered(const std::vector<double>& v, const std::vector<int>& labels, int k) {
  std::vector<double> sum(static_cast<std::size_t>(k) + 1, 0.0);
  std::vector<int> cnt(static_cast<std::size_t>(k) + 1, 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    ASSERT_GE(labels[i], 1);
    ASSERT_LE(labels[i], k);
    sum[static_cast<std::size_t>(labels[i])] += v[i];
    ++cnt[static_cast<std::size_t>(labels[i])];
  }
  for (int j = 1; j <= k; ++j) {
    ASSERT_GT(cnt[static_cast<std::size_t>(j)], 0);
  }
  for (int j = 2; j <= k; ++j) {
    EXPECT_LT(sum[static_cast<std::size_t>(j - 1)] / cnt[static_cast<std::size_t>(j - 1)],
              sum[static_cast<std::size_t>(j)] / cnt[static_cast<std::size_t>(j)]);
  }
}

} // namespace

TEST(HCluster, SeparatedPairs) {
  std::vector<double> v{1.0, 1.01, 5.0, 5.02};
  for (auto l : {Linkage::Ward, Linkage::Average}) {
    EXPECT_EQ(hcluster(v, 2, l), (std::vector<int>{1, 1, 2, 2}));
  }
  std::vector<double> rev{5.0, 1.0, 5.02, 1.01};
  EXPECT_EQ(hcluster(rev, 2), (std::vector<int>{2, 1, 2, 1}));
}

TEST(HCluster, KEqualsN) {
  std::vector<double> v{3.0, -1.0, 2.5, 7.0, 0.0};
  EXPECT_EQ(hcluster(v, 5), (std::vector<int>{4, 1, 3, 5, 2}));
}

TEST(HCluster, RejectsBadK) {
  std::vector<double> v{1, 2, 3};
  EXPECT_THROW(hcluster(v, 1), DataError);
  EXPECT_THROW(hcluster(v, 4), DataError);
  EXPECT_THROW(kmeans_1d(v, 4), DataError);
}

TEST(HCluster, MatchesNaiveAgglomeration) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 25);
    auto v = random_values(rng, n);
    const auto k = 2 + static_cast<std::size_t>(trial) % (n - 1);
    for (bool ward : {true, false}) {
      Dendrogram tree(v, ward ? Linkage::Ward : Linkage::Average);
      EXPECT_EQ(tree.cut_ids(k), oracle::naive_agglomerate(v, k, ward)) << "trial " << trial;
    }
  }
}

TEST(HCluster, WardPartitionIsContiguousAndNearOptimal) {
  std::mt19937_64 rng(72);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 6);
    auto v = random_values(rng, n);
    const int k = 2 + trial % static_cast<int>(n - 2);
    auto labels = hcluster(v, k);
    expect_ordered(v, labels, k);
    // Sorted by value, labels never decrease.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    for (std::size_t i = 1; i < n; ++i) {
      EXPECT_LE(labels[idx[i - 1]], labels[idx[i]]);
    }
    EXPECT_GE(oracle::within_ss(v, labels), oracle::optimal_1d_ss(v, static_cast<std::size_t>(k)) - 1e-12);
  }
}

TEST(HCluster, LabelOrderingProperty) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 100; ++trial) {
    auto v = random_values(rng, 40 + static_cast<std::size_t>(trial));
    for (int k = 2; k <= 8; ++k) {
      expect_ordered(v, hcluster(v, k, Linkage::Ward), k);
      expect_ordered(v, hcluster(v, k, Linkage::Average), k);
      expect_ordered(v, kmeans_1d(v, k), k);
    }
  }
}

TEST(KMeans, SeparatedGroupsAndDeterminism) {
  std::vector<double> v{1.0, 1.1, 0.9, 10.0, 10.2, 20.0, 19.8};
  EXPECT_EQ(kmeans_1d(v, 3), (std::vector<int>{1, 1, 1, 2, 2, 3, 3}));
  std::mt19937_64 rng(74);
  auto r = random_values(rng, 200);
  EXPECT_EQ(kmeans_1d(r, 4), kmeans_1d(r, 4));
  // Lloyd optimum is never worse than the optimal-partition bound.
  EXPECT_GE(oracle::within_ss(r, kmeans_1d(r, 4)), oracle::optimal_1d_ss(r, 4) - 1e-9);
}

TEST(Silhouette, Examples) {
  std::vector<double> v{0.0, 0.001, 100.0, 100.001};
  std::vector<int> l{1, 1, 2, 2};
  EXPECT_GT(silhouette(v, l), 0.999);
  std::vector<int> singles{1, 2, 3, 4};
  EXPECT_EQ(silhouette(v, singles), 0.0);
  std::vector<int> one{1, 1, 1, 1};
  EXPECT_THROW(silhouette(v, one), DataError);
}

TEST(Silhouette, MatchesDefinitionOracle) {
  std::mt19937_64 rng(75);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 20);
    auto v = random_values(rng, n);
    std::vector<int> labels(n);
    std::uniform_int_distribution<int> ld(1, 2 + trial % 4);
    for (auto& x : labels) {
      x = ld(rng);
    }
    labels[0] = 1;
    labels[1] = 2;
    const double s = silhouette(v, labels);
    EXPECT_NEAR(s, oracle::silhouette(v, labels), 1e-12);
    EXPECT_GE(s, -1.0);
    EXPECT_LE(s, 1.0);
  }
}
