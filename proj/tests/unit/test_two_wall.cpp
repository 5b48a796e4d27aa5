#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "z2lab/oracle.hpp"
#include "z2lab/two_wall.hpp"

using namespace z2lab;

namespace {

double brute_spin_action(const SpinField& f, const WallParams& p) {
  const LatticeGeometry& g = *f.geometry;
  double s = 0;
  for (std::size_t y = 0; y < g.site_count(); ++y) {
    for (int mu = 0; mu < g.dim(); ++mu) {
      const std::size_t z = g.forward(y, mu);
      if (z != LatticeGeometry::npos) s -= p.beta * f.values[y] * f.values[z];
    }
    s += p.beta * p.omega * f.values[y] * f.values[y];
  }
  return s;
}

SpinField random_spins(std::vector<int> ext, Boundary b, std::uint64_t seed) {
  Rng rng(seed);
  return random_spin_field(build_spin_lattice(std::move(ext), b), rng);
}

}  // namespace

TEST(TwoWall, ActionMatchesBruteForce) {
  const WallParams p{0.8, 1.7, HardInterval{}};
  for (auto b : {Boundary::periodic, Boundary::open}) {
    for (auto ext : {std::vector<int>{7}, std::vector<int>{4, 5}, std::vector<int>{2, 3, 4}}) {
      const SpinField f = random_spins(ext, b, 4);
      EXPECT_NEAR(spin_action(f, p), brute_spin_action(f, p), 1e-12);
    }
  }
}

TEST(TwoWall, LocalFieldIsTheLinearCoefficient) {
  const WallParams p{1.3, 0.4, HardInterval{}};
  SpinField f = random_spins({4, 4}, Boundary::periodic, 6);
  for (std::size_t y = 0; y < f.values.size(); ++y) {
    const double keep = f.values[y];
    f.values[y] = 1;
    const double up = spin_action(f, p);
    f.values[y] = -1;
    const double down = spin_action(f, p);
    f.values[y] = keep;
    EXPECT_NEAR(spin_local_field(f, p, y), -(up - down) / 2, 1e-12);
  }
}

TEST(TwoWall, CorrelatorSampleByHand) {
  SpinField f(build_spin_lattice({4}, Boundary::open));
  f.values = {1.0, -0.5, 0.5, 0.25};
  EXPECT_DOUBLE_EQ(correlator_sample(f, 0, 0), (1 + 0.25 + 0.25 + 0.0625) / 4);
  EXPECT_DOUBLE_EQ(correlator_sample(f, 0, 1), (-0.5 - 0.25 + 0.125) / 3);
  EXPECT_DOUBLE_EQ(correlator_sample(f, 0, 3), 0.25);
  EXPECT_DOUBLE_EQ(correlator_sample(f, 0, 2, true), (1 - 1) / 2.0);
  EXPECT_EQ(max_separation(*f.geometry, 0), 3);

  SpinField p(build_spin_lattice({4}, Boundary::periodic));
  p.values = {1.0, -0.5, 0.5, 0.25};
  EXPECT_DOUBLE_EQ(correlator_sample(p, 0, 1), (-0.5 - 0.25 + 0.125 + 0.25) / 4);
  const std::vector<int> sep{-1};
  EXPECT_DOUBLE_EQ(correlator_sample(p, sep), correlator_sample(p, 0, 1));
  EXPECT_EQ(max_separation(*p.geometry, 0), 2);
}

TEST(TwoWall, SingleSiteMomentsClosedForm) {
  EXPECT_NEAR(single_site_moment(HardInterval{}, 0.0, 0.0, 2), 1.0 / 3.0, 1e-13);
  EXPECT_NEAR(single_site_moment(HardInterval{}, 2.0, 0.0, 4), 0.2, 1e-13);
  EXPECT_NEAR(single_site_moment(HardInterval{}, 1.0, 3.0, 1), 0.0, 1e-14);
  // a = beta omega: <t^2> = 1/(2a) - e^{-a} / (a Z), Z = sqrt(pi/a) erf(sqrt a).
  for (double a : {0.5, 3.0, 40.0}) {
    const double z = std::sqrt(M_PI / a) * std::erf(std::sqrt(a));
    EXPECT_NEAR(single_site_moment(HardInterval{}, 1.0, a, 2), 1 / (2 * a) - std::exp(-a) / (a * z), 1e-12);
  }
  // Pure smooth measure: Gamma(3/2p) / Gamma(1/2p).
  for (int p : {1, 2, 3}) {
    const double expect = boost::math::tgamma(1.5 / p) / boost::math::tgamma(0.5 / p);
    EXPECT_NEAR(single_site_moment(SmoothMeasure{p}, 1.0, 0.0, 2), expect, 1e-11) << p;
  }
}

TEST(TwoWall, HardWallMap) {
  const auto p = hard_wall_map(2.0, 1.0, 3);
  EXPECT_DOUBLE_EQ(p.beta, 4.0);
  EXPECT_DOUBLE_EQ(p.omega, 3.5);
  EXPECT_EQ(hard_wall_map(1.0, 0.0, 3), (WallParams{1.0, 3.0, HardInterval{}}));
  EXPECT_EQ(hard_wall_map(2.0, 2.0, 2), (WallParams{4.0, 3.0, HardInterval{}}));
  EXPECT_EQ(hard_wall_map(3.0, 0.0, 1), (WallParams{9.0, 1.0, HardInterval{}}));
  EXPECT_THROW(hard_wall_map(0.0, 1.0, 3), ParameterError);
  EXPECT_THROW(hard_wall_map(1.0, -1.0, 3), ParameterError);
  EXPECT_THROW(hard_wall_map(1.0, 1.0, 0), ParameterError);
}

// The unscaled membrane divided by D has the law of the mapped model.
TEST(TwoWall, MembraneMatchesMappedModel) {
  const double D = 1.5, r = 0.6;
  const auto g = build_spin_lattice({6}, Boundary::periodic);
  const WallParams mapped = hard_wall_map(D, r, 1);
  Rng rng_a(1), rng_b(2);
  SpinField a = random_spin_field(g, rng_a);
  SpinField b = random_spin_field(g, rng_b);
  for (double& v : a.values) v *= D;
  std::vector<double> ca, cb;
  for (int i = 0; i < 60000; ++i) {
    membrane_sweep(a, D, r, rng_a);
    spin_sweep(b, mapped, rng_b, SweepScheme::heatbath());
    if (i < 200) continue;
    ca.push_back(correlator_sample(a, 0, 1) / (D * D));
    cb.push_back(correlator_sample(b, 0, 1));
  }
  const auto ea = auto_binned_estimate(ca), eb = auto_binned_estimate(cb);
  EXPECT_NEAR(ea.mean, eb.mean, 4 * std::hypot(ea.error, eb.error));
  SpinField open(build_spin_lattice({6}, Boundary::open));
  EXPECT_THROW(membrane_sweep(open, D, r, rng_a), GeometryError);
}

TEST(TwoWall, FrozenSpatialLoop) {
  const std::vector<double> c(100, 0.3);
  const auto e = frozen_spatial_loop(c, 10, 3);
  EXPECT_NEAR(e.mean, 0.027, 1e-15);
  EXPECT_NEAR(e.error, 0.0, 1e-15);
  const std::vector<double> neg(100, -0.1);
  EXPECT_THROW(frozen_spatial_loop(neg, 10, 2), CorrelatorError);
}

class SpinSchemeVsOracle : public ::testing::TestWithParam<SweepScheme> {};

TEST_P(SpinSchemeVsOracle, OpenChainCorrelator) {
  const auto g = build_spin_lattice({4}, Boundary::open);
  const WallParams p{2.0, 0.5, HardInterval{}};
  const auto sys = oracle::spin_system(*g, p);
  Rng rng(31);
  SpinField f = random_spin_field(g, rng);
  std::vector<std::vector<double>> s(4);
  for (int i = 0; i < 150000; ++i) {
    spin_sweep(f, p, rng, GetParam());
    if (i < 500) continue;
    for (int x = 0; x < 4; ++x) s[x].push_back(f.values[0] * f.values[x]);
  }
  for (int x = 0; x < 4; ++x) {
    oracle::Monomial m;
    m.powers[0] += 1;
    m.powers[x] += 1;
    const double exact = oracle::exact_expectation(sys, m).value;
    const auto e = auto_binned_estimate(s[x]);
    EXPECT_NEAR(e.mean, exact, 4 * e.error) << "x=" << x;
  }
}

INSTANTIATE_TEST_SUITE_P(Schemes, SpinSchemeVsOracle,
                         ::testing::Values(SweepScheme::heatbath(), SweepScheme::metropolis(0.8)));

TEST(TwoWall, SmoothMeasureSingleSite) {
  // beta = 0 decouples the sites: each follows exp(-t^4).
  const auto g = build_spin_lattice({8}, Boundary::periodic);
  const WallParams p{1e-300, 0.0, SmoothMeasure{2}};
  Rng rng(3);
  SpinField f = random_spin_field(g, rng);
  std::vector<double> t2;
  for (int i = 0; i < 20000; ++i) {
    spin_sweep(f, p, rng, SweepScheme::metropolis(1.0));
    if (i >= 100) t2.push_back(correlator_sample(f, 0, 0));
  }
  const auto e = auto_binned_estimate(t2);
  EXPECT_NEAR(e.mean, single_site_moment(SmoothMeasure{2}, 1.0, 0.0, 2), 4 * e.error);
}
