#include <cmath>
#include <memory>
#include <vector>

#include <gtest/gtest.h>

#include "contcount/counters.h"
#include "contcount/errors.h"

namespace contcount {
namespace {

TEST(Underestimator, GridNeverExceedsTruth) {
  const AccuracyEnvelope inner{2.0, 3.0, 0.0, false};
  const AccuracyEnvelope out{4.0, 3.0, 0.0, true};
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    const double x = i * 0.73;
    for (int j = 0; j < 100; ++j) {
      // Sweep y across the inner envelope.
      const double y = inner.Lower(x) + (inner.Upper(x) - inner.Lower(x)) * j / 99.0;
      const double z = UnderestimatorWrapper::Shift(y, inner.alpha, inner.beta);
      ASSERT_LE(z, x + 1e-12);
      ASSERT_GE(z, out.Lower(x) - 1e-12);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 10000);
}

TEST(Underestimator, DeclaredEnvelope) {
  auto inner = std::make_unique<TreeSum>(64, 1, TreeSumOptions{1.0, 0.1, 4.0},
                                         RandomSource(1, 1));
  const AccuracyEnvelope e = inner->envelope();
  UnderestimatorWrapper u(std::move(inner));
  EXPECT_EQ(u.envelope().alpha, 1.0);
  EXPECT_DOUBLE_EQ(u.envelope().beta, 2 * e.beta);
  EXPECT_TRUE(u.envelope().underestimator);
  EXPECT_DOUBLE_EQ(u.Current()[0], -e.beta);
}

TEST(Monotone, ExampleSequence) {
  double c = 0.0;
  std::vector<double> got;
  for (double y : {0.4, 1.2, 1.9, 3.5}) {
    c = MonotoneWrapper::Next(c, y);
    got.push_back(c);
  }
  EXPECT_EQ(got, (std::vector<double>{0, 1, 2, 3}));
}

TEST(Monotone, IntegralUnitStepsOnNoisyStreams) {
  for (int trial = 0; trial < 50; ++trial) {
    MonotoneWrapper mono(std::make_unique<TreeSum>(
        200, 2, TreeSumOptions{0.5, 0.1, 4.0}, RandomSource(trial, 1)));
    std::vector<double> last = mono.Current();
    EXPECT_EQ(last, (std::vector<double>{0.0, 0.0}));
    RandomSource rng(trial, 2);
    for (int t = 0; t < 200; ++t) {
      const double u = rng.UniformOpen();
      const auto& y = mono.Update(std::vector<double>{u, 1.0 - u});
      for (int r = 0; r < 2; ++r) {
        ASSERT_EQ(y[r], std::floor(y[r]));
        ASSERT_TRUE(y[r] == last[r] || y[r] == last[r] + 1.0);
      }
      last = y;
    }
  }
}

TEST(Monotone, BetaGrowsByOne) {
  auto inner = std::make_unique<PerfectCounter>(4, 1);
  MonotoneWrapper mono(std::move(inner));
  EXPECT_EQ(mono.envelope().beta, 1.0);
}

TEST(ZeroFailure, NeverLeavesEnvelope) {
  int violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    // Tiny C_tree makes the raw tree leave its envelope almost always.
    ZeroFailureWrapper clamp(std::make_unique<TreeSum>(
        8, 1, TreeSumOptions{1.0, 0.1, 0.01}, RandomSource(trial, 0)));
    const AccuracyEnvelope env = clamp.envelope();
    EXPECT_EQ(env.gamma, 0.0);
    violations += !env.Contains(0.0, clamp.Current()[0]);
    for (int t = 0; t < 8; ++t) {
      const auto& y = clamp.Update(std::vector<double>{1.0});
      violations += !env.Contains(clamp.TrueCounts()[0], y[0]);
    }
  }
  EXPECT_EQ(violations, 0);
}

TEST(ZeroFailure, MovesGammaIntoDelta) {
  ZeroFailureWrapper clamp(std::make_unique<TreeSum>(
      8, 1, TreeSumOptions{1.0, 0.1, 4.0}, RandomSource(1, 0)));
  EXPECT_DOUBLE_EQ(clamp.privacy().delta, 0.1);
  EXPECT_DOUBLE_EQ(clamp.privacy().epsilon, 1.0);
}

TEST(ZeroFailure, ClampFormula) {
  const AccuracyEnvelope env{2.0, 1.0, 0.1, false};
  EXPECT_EQ(ZeroFailureWrapper::Clamp(10.0, 100.0, env), 21.0);
  EXPECT_EQ(ZeroFailureWrapper::Clamp(10.0, -5.0, env), 4.0);
  EXPECT_EQ(ZeroFailureWrapper::Clamp(10.0, 7.0, env), 7.0);
}

TEST(Scaled, FeedsNormalizedUpdates) {
  ScaledCounter s(std::make_unique<PerfectCounter>(3, 2), 4.0);
  EXPECT_EQ(s.l1_bound(), 4.0);
  s.Update(std::vector<double>{3.0, 1.0});
  EXPECT_EQ(s.Current(), (std::vector<double>{3.0, 1.0}));
  EXPECT_THROW(s.Update(std::vector<double>{3.0, 2.0}), ValidationError);
  ScaledCounter t(std::make_unique<TreeSum>(3, 1, TreeSumOptions{1.0, 0.1, 4.0},
                                            RandomSource(1, 1)),
                  5.0);
  EXPECT_DOUBLE_EQ(t.envelope().beta,
                   5.0 * TreeSum::AdditiveBound(3, 1, 1.0, 0.1, 4.0));
}

TEST(RandomWarmup, UniformThenInner) {
  const int c = 5;
  RandomWarmupCounter w(std::make_unique<PerfectCounter>(20, 2), c,
                        RandomSource(4, 4));
  for (double v : w.Current()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, c);
  }
  for (int t = 1; t <= 20; ++t) {
    const auto& y = w.Update(std::vector<double>{1.0, 0.0});
    if (t < c) {
      for (double v : y) {
        EXPECT_GE(v, 0.0);
        EXPECT_LT(v, c);
      }
    } else {
      EXPECT_EQ(y, (std::vector<double>{static_cast<double>(t), 0.0}));
    }
  }
  EXPECT_EQ(w.envelope().beta, c);
  EXPECT_EQ(w.envelope().alpha, 1.0);
}

TEST(MakeMechanism, WrapperOrderAndScaling) {
  MechanismSpec spec;
  spec.kind = MechanismKind::kTreeSum;
  spec.wrappers = {WrapperKind::kZeroFailure, WrapperKind::kUnderestimator};
  auto m = MakeMechanism(spec, 16, 4, 3.0, RandomSource(1, 1));
  EXPECT_EQ(m->Describe().rfind("under(clamp(scaled(3,treesum", 0), 0u);
  EXPECT_EQ(m->envelope().gamma, 0.0);
  EXPECT_TRUE(m->envelope().underestimator);
  EXPECT_EQ(m->l1_bound(), 3.0);
  EXPECT_THROW(ParseWrapperKind("nope"), LookupError);
  EXPECT_THROW(ParseMechanismKind("nope"), LookupError);
}

}  // namespace
}  // namespace contcount
