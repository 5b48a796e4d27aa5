#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "z2lab/rng.hpp"
#include "z2lab/statistics.hpp"

using namespace z2lab;

namespace {

std::vector<double> ar1(double rho, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(static_cast<std::size_t>(n));
  double v = rng.normal();
  const double s = std::sqrt(1 - rho * rho);
  for (double& xi : x) {
    v = rho * v + s * rng.normal();
    xi = v;
  }
  return x;
}

}  // namespace

TEST(Statistics, BinMeansDropsPartialBin) {
  const std::vector<double> x{1, 2, 3, 4, 5, 6, 7};
  EXPECT_EQ(bin_means(x, 3), (std::vector<double>{2, 5}));
  EXPECT_THROW(bin_means(x, 0), StatisticsError);
}

TEST(Statistics, BinnedEstimateByHand) {
  const std::vector<double> x{1, 3, 2, 6};
  const auto e = binned_estimate(x, 1);
  EXPECT_DOUBLE_EQ(e.mean, 3.0);
  // sample variance 14/3, error sqrt(14/3/4)
  EXPECT_NEAR(e.error, std::sqrt(14.0 / 12.0), 1e-14);
  const auto b = binned_estimate(x, 2);
  EXPECT_NEAR(b.error, std::sqrt(2.0 / 2.0), 1e-14);  // bins 2 and 4
  EXPECT_THROW(binned_estimate(x, 3), StatisticsError);
}

TEST(Statistics, AutocorrelationOfAr1) {
  for (double rho : {0.0, 0.5, 0.8}) {
    const auto x = ar1(rho, 400000, 17);
    const double expect = (1 + rho) / (2 * (1 - rho));
    EXPECT_NEAR(integrated_autocorrelation_time(x), expect, 0.06 * expect + 0.02) << rho;
  }
}

TEST(Statistics, AutoBinningCapturesCorrelation) {
  const double rho = 0.9;
  const int n = 400000;
  const auto x = ar1(rho, n, 5);
  const auto e = auto_binned_estimate(x);
  const double tau = (1 + rho) / (2 * (1 - rho));
  const double expect = std::sqrt(2 * tau / n);
  EXPECT_NEAR(e.error, expect, 0.2 * expect);
  EXPECT_GT(e.bin_size, 8u);
  EXPECT_EQ(e.n_samples, static_cast<std::size_t>(n));
}

TEST(Statistics, JackknifeOfMeanEqualsBinnedError) {
  const auto x = ar1(0.3, 10000, 9);
  const std::span<const double> s(x);
  const std::vector<std::span<const double>> series{s};
  const auto jk = jackknife(series, 50, [](std::span<const double> m) { return m[0]; });
  const auto b = binned_estimate(x, 50);
  EXPECT_NEAR(jk.mean, b.mean, 1e-12);
  EXPECT_NEAR(jk.error, b.error, 1e-12);
}

TEST(Statistics, JackknifeOfRatioMatchesDeltaMethod) {
  Rng rng(3);
  const int n = 20000;
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = 2 + 0.5 * rng.normal();
    b[i] = 4 + 0.5 * rng.normal();
  }
  const std::vector<std::span<const double>> series{a, b};
  const auto jk = jackknife(series, 10, [](std::span<const double> m) { return m[0] / m[1]; });
  // Var(a/b) ~ (0.5/4)^2 + (2 * 0.5 / 16)^2 per sample.
  const double expect = std::sqrt((0.0156250 + 0.00390625) / n);
  EXPECT_NEAR(jk.mean, 0.5, 4 * expect);
  EXPECT_NEAR(jk.error, expect, 0.1 * expect);
}

TEST(Statistics, JackknifeNonFiniteGivesInfiniteError) {
  const std::vector<double> a{1, -1, 1, -1, 1, -1, 2, 2};
  const std::vector<std::span<const double>> series{a};
  const auto jk = jackknife(series, 2, [](std::span<const double> m) { return std::log(m[0]); });
  EXPECT_TRUE(std::isinf(jk.error));
}
