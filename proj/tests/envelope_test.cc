#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "contcount/envelope.h"
#include "contcount/errors.h"

namespace contcount {
namespace {

TEST(EnvelopeCheck, EmptyCounterFirstViolation) {
  Trace x;
  Trace y;
  for (int t = 1; t <= 10; ++t) {
    x.push_back({static_cast<double>(t)});
    y.push_back({0.0});
  }
  const EnvelopeReport r = EnvelopeCheck(x, y, {1.0, 5.0, 0.0, false});
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.first_violation, 5);
  EXPECT_FALSE(r.violations[4][0]);
  EXPECT_TRUE(r.violations[5][0]);
  EXPECT_EQ(r.max_abs_error, 10.0);
}

TEST(EnvelopeCheck, UnderestimatorUpperEdge) {
  const AccuracyEnvelope env{2.0, 1.0, 0.0, true};
  EXPECT_TRUE(env.Contains(4.0, 4.0));
  EXPECT_FALSE(env.Contains(4.0, 4.5));
  EXPECT_TRUE(env.Contains(4.0, 1.0));
  EXPECT_FALSE(env.Contains(4.0, 0.9));
  const AccuracyEnvelope two{2.0, 1.0, 0.0, false};
  EXPECT_TRUE(two.Contains(4.0, 9.0));
  EXPECT_FALSE(two.Contains(4.0, 9.1));
  // Rounding-level excursions at the edges still count as inside.
  EXPECT_TRUE(two.Contains(4.0, std::nextafter(9.0, 10.0)));
  EXPECT_FALSE(two.Contains(4.0, 9.0 + 1e-9));
}

TEST(EnvelopeCheck, PassAndShapeErrors) {
  const Trace x = {{1, 2}, {2, 3}};
  EXPECT_TRUE(EnvelopeCheck(x, x, {}).pass);
  EXPECT_EQ(EnvelopeCheck(x, x, {}).first_violation, -1);
  EXPECT_THROW(EnvelopeCheck(x, {{1, 2}}, {}), ValidationError);
  EXPECT_THROW(EnvelopeCheck(x, {{1, 2}, {2}}, {}), ValidationError);
}

TEST(EnvelopeCheck, InfiniteBetaAcceptsAnything) {
  const Trace x = {{100.0}};
  const Trace y = {{-1e9}};
  EXPECT_TRUE(EnvelopeCheck(x, y, {1.0, kInfinity, 0.0, false}).pass);
}

}  // namespace
}  // namespace contcount
