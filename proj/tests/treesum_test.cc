#include <bit>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "contcount/counters.h"
#include "contcount/errors.h"

namespace contcount {
namespace {

// Random Delta_m update whose entries are multiples of 1/1024, so every
// partial sum is exact and any summation order gives the same bits.
std::vector<double> DyadicUpdate(RandomSource& rng, int m) {
  std::vector<double> a(m, 0.0);
  int left = 1024;
  for (int r = 0; r < m && left > 0; ++r) {
    const int take = static_cast<int>(rng.NextU64() % (left + 1));
    a[r] = take / 1024.0;
    left -= take;
  }
  return a;
}

TEST(TreeSum, ZeroNoiseEqualsPrefixSums) {
  for (int trial = 0; trial < 200; ++trial) {
    RandomSource rng(trial, 0);
    const int n = 1 + rng.NextU64() % 256;
    const int m = 1 + rng.NextU64() % 8;
    TreeSum tree(n, m, {}, RandomSource::ZeroNoise(trial, 1));
    std::vector<double> prefix(m, 0.0);
    for (int t = 0; t < n; ++t) {
      const auto a = DyadicUpdate(rng, m);
      for (int r = 0; r < m; ++r) prefix[r] += a[r];
      ASSERT_EQ(tree.Update(a), prefix) << "n=" << n << " t=" << t + 1;
    }
  }
}

TEST(TreeSum, ZeroNoiseCloseOnArbitraryReals) {
  RandomSource rng(5, 5);
  TreeSum tree(300, 3, {}, RandomSource::ZeroNoise());
  std::vector<double> prefix(3, 0.0);
  for (int t = 0; t < 300; ++t) {
    std::vector<double> a = {rng.Uniform(0, 0.3), rng.Uniform(0, 0.3),
                             rng.Uniform(0, 0.3)};
    for (int r = 0; r < 3; ++r) prefix[r] += a[r];
    const auto& y = tree.Update(a);
    for (int r = 0; r < 3; ++r) ASSERT_NEAR(y[r], prefix[r], 1e-12);
  }
}

TEST(TreeSum, CoveringNodesReproduceRelease) {
  TreeSum tree(100, 2, {1.0, 0.1, 4.0}, RandomSource(3, 0));
  for (int t = 1; t <= 100; ++t) {
    tree.Update(std::vector<double>{0.5, 0.25});
    std::vector<double> sum(2, 0.0);
    int covered = 0;
    int prev_level = 1 << 20;
    for (const auto& node : tree.CoveringNodes()) {
      EXPECT_LT(node.level, prev_level);
      prev_level = node.level;
      EXPECT_EQ(node.end - node.start + 1, 1 << node.level);
      covered += node.end - node.start + 1;
      for (int r = 0; r < 2; ++r) sum[r] += node.exact[r] + node.noise[r];
    }
    EXPECT_EQ(covered, t);
    EXPECT_EQ(static_cast<int>(tree.CoveringNodes().size()), std::popcount(static_cast<unsigned>(t)));
    EXPECT_EQ(sum, tree.Current());
  }
}

TEST(TreeSum, LevelsAndScale) {
  TreeSum tree(1024, 1, {2.0, 0.1, 4.0}, RandomSource(1, 1));
  EXPECT_EQ(tree.levels(), 11);
  EXPECT_DOUBLE_EQ(tree.node_noise_scale(), 11.0 / 2.0);
  TreeSum odd(1000, 1, {1.0, 0.1, 4.0}, RandomSource(1, 1));
  EXPECT_EQ(odd.levels(), 11);
  TreeSum one(1, 1, {1.0, 0.1, 4.0}, RandomSource(1, 1));
  EXPECT_EQ(one.levels(), 1);
}

TEST(TreeSum, AdditiveBound) {
  // 4 * 10 * log2(2048 / 0.1) / 1
  EXPECT_DOUBLE_EQ(TreeSum::AdditiveBound(1024, 2, 1.0, 0.1, 4.0),
                   40.0 * std::log2(20480.0));
  // log2(n) is floored at one.
  EXPECT_DOUBLE_EQ(TreeSum::AdditiveBound(1, 1, 1.0, 0.5, 1.0), 1.0);
  TreeSum tree(1024, 2, {1.0, 0.1, 4.0}, RandomSource(1, 1));
  const AccuracyEnvelope env = tree.envelope();
  EXPECT_EQ(env.alpha, 1.0);
  EXPECT_EQ(env.gamma, 0.1);
  EXPECT_FALSE(env.underestimator);
}

TEST(TreeSum, InfiniteEpsilonIsExact) {
  TreeSum tree(64, 2, {kInfinity, 0.1, 4.0}, RandomSource(1, 1));
  EXPECT_EQ(tree.node_noise_scale(), 0.0);
  for (int t = 1; t <= 64; ++t) {
    const auto& y = tree.Update(std::vector<double>{1.0, 0.0});
    EXPECT_EQ(y[0], t);
    EXPECT_EQ(y[1], 0.0);
  }
}

TEST(TreeSum, Deterministic) {
  TreeSum a(50, 3, {}, RandomSource(77, 2));
  TreeSum b(50, 3, {}, RandomSource(77, 2));
  for (int t = 0; t < 50; ++t) {
    const std::vector<double> u = {0.2, 0.3, 0.5};
    EXPECT_EQ(a.Update(u), b.Update(u));
  }
}

TEST(TreeSum, Errors) {
  EXPECT_THROW(TreeSum(0, 1, {}, RandomSource(1, 1)), ParameterError);
  EXPECT_THROW(TreeSum(4, 0, {}, RandomSource(1, 1)), ParameterError);
  EXPECT_THROW(TreeSum(4, 1, {0.0, 0.1, 4.0}, RandomSource(1, 1)), ParameterError);
  EXPECT_THROW(TreeSum(4, 1, {1.0, 1.5, 4.0}, RandomSource(1, 1)), ParameterError);
  TreeSum tree(2, 2, {}, RandomSource(1, 1));
  EXPECT_THROW(tree.Update(std::vector<double>{0.7, 0.7}), ValidationError);
  EXPECT_THROW(tree.Update(std::vector<double>{-0.1, 0.0}), ValidationError);
  EXPECT_THROW(tree.Update(std::vector<double>{1.0}), ValidationError);
  tree.Update(std::vector<double>{1.0, 0.0});
  tree.Update(std::vector<double>{0.0, 1.0});
  EXPECT_THROW(tree.Update(std::vector<double>{0.0, 1.0}), StateError);
}

TEST(TreeSum, EnvelopeUsuallyHolds) {
  int inside = 0;
  for (int trial = 0; trial < 50; ++trial) {
    TreeSum tree(256, 2, {1.0, 0.1, 4.0}, RandomSource(trial, 9));
    const AccuracyEnvelope env = tree.envelope();
    bool ok = true;
    for (int t = 0; t < 256; ++t) {
      const auto& y = tree.Update(std::vector<double>{1.0, 0.0});
      for (int r = 0; r < 2; ++r) ok = ok && env.Contains(tree.TrueCounts()[r], y[r]);
    }
    inside += ok;
  }
  EXPECT_GE(inside, 45);
}

}  // namespace
}  // namespace contcount
