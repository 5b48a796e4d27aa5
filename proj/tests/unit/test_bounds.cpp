#include <gtest/gtest.h>

#include <cmath>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "z2lab/bounds.hpp"

using namespace z2lab;
using Big = boost::multiprecision::cpp_dec_float_50;

namespace {

// 50-digit evaluation of the closed forms.
Big big_s(double beta, double omega, int k) {
  const Big b(beta), w(omega);
  return sqrt(4 * w / (boost::math::constants::pi<Big>() * b)) * exp(-w * b - 1) + 2 * (w - k);
}

Big big_rate(const Big& s) {
  const Big x = s / sqrt(Big(8));
  // The log form cancels for tiny x; the series is exact to 50 digits there.
  if (abs(x) < Big(1e-5)) return Big(2 * (x - x * x * x / 6 + 3 * x * x * x * x * x / 40));
  return Big(2 * log(x + sqrt(x * x + 1)));
}

}  // namespace

TEST(Bounds, WorkedExample) {
  const double s = bounds::s_tilde(1.0, 3.0, 3);
  EXPECT_NEAR(s, std::sqrt(12 / M_PI) * std::exp(-4.0), 1e-15);
  EXPECT_NEAR(s, 0.03580, 5e-6);
  const auto r = bounds::sigma_tilde(1.0, 3.0, 4);
  ASSERT_TRUE(r.valid);
  EXPECT_NEAR(*r.rate, big_rate(big_s(1.0, 3.0, 3)).convert_to<double>(), 1e-15);
  EXPECT_NEAR(*r.rate, 0.02531, 5e-6);
}

TEST(Bounds, CouplingFormAtOmegaEqualK) {
  for (int k : {1, 2, 3}) {
    for (double g : {0.1, 0.5, 1.0, 4.0}) {
      const double expect = std::sqrt(4 * k * g / M_PI) * std::exp(-k / g - 1);
      EXPECT_NEAR(bounds::s_tilde_from_coupling(g, k, k), expect, 1e-14 * expect + 1e-300);
      EXPECT_EQ(bounds::sigma_tilde_from_coupling(g, k, k + 1).rate,
                bounds::sigma_tilde(1 / g, k, k + 1).rate);
    }
  }
}

TEST(Bounds, RateFromS) {
  EXPECT_NEAR(*bounds::rate_from_s(std::sqrt(8.0)), 2 * std::log(1 + std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(*bounds::rate_from_s(1e-9), 1e-9 / std::sqrt(2.0), 1e-20);
  EXPECT_FALSE(bounds::rate_from_s(0.0).has_value());
  EXPECT_FALSE(bounds::rate_from_s(-1.0).has_value());
  double prev = 0;
  for (double s = 0.01; s < 20; s *= 1.3) {
    const double r = *bounds::rate_from_s(s);
    EXPECT_GT(r, prev);
    prev = r;
  }
}

TEST(Bounds, AgreesWithHighPrecision) {
  for (double beta : {0.01, 0.3, 1.0, 2.5, 7.0}) {
    for (double omega : {0.5, 1.0, 3.0, 6.0}) {
      for (int k : {1, 2, 3}) {
        const Big s = big_s(beta, omega, k);
        const double got = bounds::s_tilde(beta, omega, k);
        const double want = s.convert_to<double>();
        if (std::abs(want) < 1e-3) continue;  // cancellation, covered by the acceptance grid
        EXPECT_NEAR(got, want, 1e-12 * std::abs(want));
        const auto m = bounds::mass_bound(beta, omega, k);
        EXPECT_EQ(m.valid, want > 0);
        if (m.valid) {
          EXPECT_NEAR(*m.rate, big_rate(s).convert_to<double>(), 1e-12 * *m.rate);
        }
      }
    }
  }
}

TEST(Bounds, SigmaTildeIsMassBoundInOneDimensionLess) {
  for (double beta : {0.2, 1.0, 5.0}) {
    for (double omega : {0.5, 2.0, 4.0}) {
      for (int d : {2, 3, 4}) {
        EXPECT_EQ(bounds::sigma_tilde(beta, omega, d).rate,
                  bounds::rate_from_s(bounds::s_tilde(beta, omega, d - 1)));
      }
    }
  }
}

TEST(Bounds, ValidAtCriticalDampingAndDecreasing) {
  for (int d : {2, 3, 4}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double beta = 1e-3; beta < 100; beta *= 1.2) {
      const auto r = bounds::sigma_tilde(beta, d - 1, d);
      ASSERT_TRUE(r.valid);
      EXPECT_LT(*r.rate, prev);
      prev = *r.rate;
    }
  }
}

TEST(Bounds, ValidityThreshold) {
  EXPECT_FALSE(bounds::validity_threshold(3.0, 4).has_value());
  for (double omega : {0.5, 1.0, 1.5}) {
    const auto b = bounds::validity_threshold(omega, 3);
    ASSERT_TRUE(b.has_value());
    EXPECT_GT(bounds::s_tilde(*b * (1 - 1e-9), omega, 2), 0.0);
    EXPECT_LT(bounds::s_tilde(*b * (1 + 1e-9), omega, 2), 0.0);
    EXPECT_TRUE(bounds::sigma_tilde(*b * 0.5, omega, 3).valid);
    EXPECT_FALSE(bounds::sigma_tilde(*b * 2, omega, 3).valid);
  }
}

TEST(Bounds, LargeDampingIsLinearDominated) {
  const double a = *bounds::sigma_tilde(1.0, 20.0, 3).rate;
  EXPECT_NEAR(a, 2 * std::asinh(2 * (20.0 - 2) / std::sqrt(8.0)), 1e-8);
  EXPECT_GT(*bounds::sigma_tilde(1.0, 21.0, 3).rate, a);
}

TEST(Bounds, RejectsBadInput) {
  EXPECT_THROW(bounds::s_tilde(0.0, 1.0, 2), std::invalid_argument);
  EXPECT_THROW(bounds::s_tilde(1.0, -1.0, 2), std::invalid_argument);
  EXPECT_THROW(bounds::s_tilde(1.0, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(bounds::sigma_tilde(1.0, 1.0, 1), std::invalid_argument);
  EXPECT_THROW(bounds::s_tilde_from_coupling(0.0, 1.0, 2), std::invalid_argument);
}
