#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "contcount/counters.h"
#include "contcount/errors.h"

namespace contcount {
namespace {

TEST(FtSum, PhaseSwitchAndPerComparisonBudget) {
  const FtSumOptions o{1.0, 2.0, 0.1, 1.0};
  // log2(2 * 1 * log2(10240)) = log2(26.64...) -> 5
  EXPECT_EQ(FtSum::PhaseSwitchIndex(1024, 1, o), 5);
  FtSum ft(1024, 1, o, RandomSource(1, 1));
  EXPECT_EQ(ft.k(), 5);
  EXPECT_DOUBLE_EQ(ft.budget().per_comparison, 1.0 / 12.0);
  EXPECT_DOUBLE_EQ(ft.budget().per_comparison * 2 * 1 * (ft.k() + 1), 1.0);
}

TEST(FtSum, BudgetIdentityOnManyShapes) {
  for (int n : {2, 16, 100, 1024}) {
    for (int m : {1, 3, 8}) {
      for (double eps : {0.1, 1.0, 5.0}) {
        const FtSumOptions o{eps, 2.0, 0.1, 4.0};
        FtSum ft(n, m, o, RandomSource(n, m));
        const FtSumBudget& b = ft.budget();
        EXPECT_NEAR(b.phase_one, m * (ft.k() + 1) * b.per_comparison, 1e-15);
        EXPECT_DOUBLE_EQ(b.tree, eps / 2);
        EXPECT_LE(b.total, eps * (1 + 1e-12));
        EXPECT_NEAR(2.0 * m * (ft.k() + 1) * b.per_comparison, eps, 1e-12);
      }
    }
  }
}

// Sparse-vector flag phase with noise switched off, simulated by hand:
// threshold log2(n) * alpha^j, flag when the running count exceeds it.
TEST(FtSum, ZeroNoiseUnitStreamHandSimulation) {
  const int n = 16;
  FtSum ft(n, 1, {1.0, 2.0, 0.1, 4.0}, RandomSource::ZeroNoise(1, 1));
  ASSERT_GE(ft.k(), 3);
  std::vector<double> expect = {0, 0, 0, 0, 4, 4, 4, 4,
                                8, 8, 8, 8, 8, 8, 8, 8};
  for (int t = 1; t <= n; ++t) {
    const auto& y = ft.Update(std::vector<double>{1.0});
    EXPECT_EQ(y[0], expect[t - 1]) << "t=" << t;
    if (t == 4) EXPECT_EQ(ft.flags(0), 0);
    if (t == 5) EXPECT_EQ(ft.flags(0), 1);
  }
  EXPECT_EQ(ft.flags(0), 2);
  EXPECT_FALSE(ft.in_phase_two(0));
}

TEST(FtSum, ZeroNoiseSwitchesToTreePhase) {
  // Large epsilon gives k = 1: after two flags the exact tree takes over.
  const FtSumOptions o{500.0, 2.0, 0.1, 4.0};
  std::ostringstream sink;
  auto* old = std::clog.rdbuf(sink.rdbuf());
  FtSum ft(64, 1, o, RandomSource::ZeroNoise(1, 1));
  std::clog.rdbuf(old);
  EXPECT_EQ(ft.k(), 1);
  EXPECT_NE(sink.str().find("clamped"), std::string::npos);
  bool seen_tree = false;
  for (int t = 1; t <= 64; ++t) {
    const auto& y = ft.Update(std::vector<double>{1.0});
    if (ft.in_phase_two(0) && ft.flags(0) == 2 && y[0] == t) seen_tree = true;
  }
  EXPECT_TRUE(seen_tree);
  EXPECT_EQ(ft.Current()[0], 64.0);
}

TEST(FtSum, PhaseOneReleasesNondecreasing) {
  for (int trial = 0; trial < 200; ++trial) {
    RandomSource rng(trial, 3);
    const int n = 16 + rng.NextU64() % 500;
    const int m = 1 + rng.NextU64() % 3;
    FtSum ft(n, m, {1.0, 2.0, 0.1, 4.0}, RandomSource(trial, 4));
    std::vector<double> last(m, 0.0);
    for (int t = 0; t < n; ++t) {
      std::vector<double> a(m, 0.0);
      a[rng.NextU64() % m] = rng.UniformOpen();
      const auto& y = ft.Update(a);
      for (int r = 0; r < m; ++r) {
        if (ft.in_phase_two(r)) continue;
        ASSERT_GE(y[r], last[r]);
        last[r] = y[r];
      }
    }
  }
}

TEST(FtSum, PhaseOneValues) {
  FtSum ft(16, 1, {1.0, 2.0, 0.1, 4.0}, RandomSource(1, 1));
  EXPECT_EQ(ft.PhaseOneValue(0), 0.0);
  EXPECT_EQ(ft.PhaseOneValue(1), 4.0);
  EXPECT_EQ(ft.PhaseOneValue(3), 16.0);
}

TEST(FtSum, DeclaredBetaFormula) {
  const int n = 1024;
  const FtSumOptions o{1.0, 2.0, 0.1, 4.0};
  const int k = FtSum::PhaseSwitchIndex(n, 1, o);
  const double eps_prime = 1.0 / (2.0 * (k + 1));
  const double e1 =
      2 * (2 / eps_prime) * std::log(2.0 * (n + (k + 2)) / 0.1) + 10.0;
  EXPECT_NEAR(FtSum::PhaseOneBound(n, 1, o), e1, 1e-9);
  const double b2 = TreeSum::AdditiveBound(n, 1, 0.5, 0.05, 4.0);
  const double a = 10.0 * std::pow(2.0, k);
  EXPECT_NEAR(FtSum::DeclaredBeta(n, 1, o),
              std::max(e1, b2 - 0.5 * std::max(0.0, a - e1)), 1e-9);
  FtSum ft(n, 1, o, RandomSource(1, 1));
  EXPECT_EQ(ft.envelope().alpha, 2.0);
}

TEST(FtSum, Errors) {
  EXPECT_THROW(FtSum(16, 1, {1.0, 1.0, 0.1, 4.0}, RandomSource(1, 1)),
               ParameterError);
  EXPECT_THROW(FtSum(16, 1, {1.0, 2.0, 0.0, 4.0}, RandomSource(1, 1)),
               ParameterError);
  EXPECT_THROW(FtSum(0, 1, {}, RandomSource(1, 1)), ParameterError);
  EXPECT_THROW(FtSum(16, 1, {-1.0, 2.0, 0.1, 4.0}, RandomSource(1, 1)),
               ParameterError);
}

}  // namespace
}  // namespace contcount
