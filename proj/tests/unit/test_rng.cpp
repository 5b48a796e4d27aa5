#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "z2lab/rng.hpp"

using namespace z2lab;

TEST(Rng, SameSeedSameStream) {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next(), b.next());
}

TEST(Rng, StreamsDiffer) {
  std::set<std::uint64_t> first;
  for (std::uint64_t s = 0; s < 64; ++s) first.insert(Rng::for_stream(7, s).next());
  EXPECT_EQ(first.size(), 64u);
  EXPECT_NE(Rng::for_stream(7, 0).next(), Rng::for_stream(8, 0).next());
}

// Neighbouring streams must not be correlated.
TEST(Rng, StreamCrossCorrelationIsSmall) {
  Rng a = Rng::for_stream(1, 0), b = Rng::for_stream(1, 1);
  const int n = 200000;
  double sab = 0, sa = 0, sb = 0, saa = 0, sbb = 0;
  for (int i = 0; i < n; ++i) {
    const double x = a.uniform(), y = b.uniform();
    sab += x * y;
    sa += x;
    sb += y;
    saa += x * x;
    sbb += y * y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  const double corr = cov / std::sqrt((saa / n - sa * sa / n / n) * (sbb / n - sb * sb / n / n));
  EXPECT_LT(std::abs(corr), 5.0 / std::sqrt(n));
}

TEST(Rng, StateRoundTrip) {
  Rng a(99);
  for (int i = 0; i < 17; ++i) a.next();
  Rng b;
  b.set_state(a.state());
  EXPECT_TRUE(a == b);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.uniform(), b.uniform());
  EXPECT_THROW(b.set_state("not a state"), std::runtime_error);
}

TEST(Rng, UniformOpenIntervalAndMoments) {
  Rng r(5);
  const int n = 400000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
  }
  EXPECT_NEAR(s / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(s2 / n, 1.0 / 3.0, 5 * std::sqrt(4.0 / 45 / n));
}

TEST(Rng, NormalMoments) {
  Rng r(6);
  const int n = 400000;
  double s = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 5 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 5 * std::sqrt(2.0 / n));
  EXPECT_NEAR(s4 / n, 3.0, 5 * std::sqrt(96.0 / n));
}
