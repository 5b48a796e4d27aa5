#include <gtest/gtest.h>

#include <cmath>

#include "z2lab/model.hpp"
#include "z2lab/oracle.hpp"

using namespace z2lab;

namespace {

// Action summed over sites and planes from coordinates alone.
double brute_action(const GaugeField& f, const ModelParams& p) {
  const LatticeGeometry& g = *f.geometry;
  double s = 0;
  for (std::size_t x = 0; x < g.site_count(); ++x) {
    for (int mu = 0; mu < g.dim(); ++mu) {
      for (int nu = mu + 1; nu < g.dim(); ++nu) {
        const std::size_t xm = g.forward(x, mu), xn = g.forward(x, nu);
        if (xm == LatticeGeometry::npos || xn == LatticeGeometry::npos) continue;
        const double prod = f.at({x, mu}) * f.at({xm, nu}) * f.at({xn, mu}) * f.at({x, nu});
        s -= (mu == 0 ? p.beta : p.beta_spatial) * prod;
      }
    }
  }
  for (double v : f.values) s += p.beta * p.omega * v * v;
  return s;
}

GaugeField filled(GeometryPtr g, std::uint64_t seed) {
  Rng rng(seed);
  return random_field(std::move(g), rng);
}

}  // namespace

TEST(Model, ActionMatchesBruteForce) {
  const ModelParams p{1.3, 0.7, 0.4, HardInterval{}};
  for (auto b : {Boundary::periodic, Boundary::open}) {
    for (auto ext : {std::vector<int>{4, 3}, std::vector<int>{3, 4, 3}, std::vector<int>{3, 3, 3, 3}}) {
      const GaugeField f = filled(build_geometry(ext, b), 3);
      EXPECT_NEAR(action(f, p), brute_action(f, p), 1e-11);
    }
  }
}

TEST(Model, StapleSumIsTheLinearCoefficient) {
  const ModelParams p{0.9, 1.1, 2.5, HardInterval{}};
  GaugeField f = filled(build_geometry({4, 4, 4}, Boundary::periodic), 8);
  for (std::size_t l = 0; l < f.values.size(); l += 7) {
    const double keep = f[l];
    f[l] = 1.0;
    const double up = action(f, p);
    f[l] = -1.0;
    const double down = action(f, p);
    f[l] = keep;
    EXPECT_NEAR(staple_sum(f, p, l), -(up - down) / 2, 1e-11);
  }
}

TEST(Model, StapleSumOnOpenEdges) {
  const ModelParams p = ModelParams::isotropic(1.0, 0.0);
  GaugeField f(build_geometry({2, 2}, Boundary::open), 1.0);
  // Single plaquette: every link sees one staple of product 1.
  for (std::size_t l = 0; l < f.values.size(); ++l) EXPECT_DOUBLE_EQ(staple_sum(f, p, l), 1.0);
}

TEST(Model, ValidateNamesTheField) {
  ModelParams p = ModelParams::isotropic(-1.0, 1.0);
  try {
    p.validate();
    FAIL();
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("model.beta"), std::string::npos);
  }
  p = ModelParams::isotropic(1.0, std::nan(""));
  EXPECT_THROW(p.validate(), ParameterError);
  p = ModelParams::isotropic(1.0, 1.0);
  p.beta_spatial = std::numeric_limits<double>::infinity();
  EXPECT_NO_THROW(p.validate());
  EXPECT_TRUE(p.frozen_spatial());
}

TEST(Model, Reflection) {
  EXPECT_DOUBLE_EQ(reflect_into_interval(0.3), 0.3);
  EXPECT_DOUBLE_EQ(reflect_into_interval(1.25), 0.75);
  EXPECT_DOUBLE_EQ(reflect_into_interval(-1.5), -0.5);
  EXPECT_DOUBLE_EQ(reflect_into_interval(1.0), 1.0);
}

TEST(Model, SignMagnitude) {
  GaugeField f(build_geometry({2, 2}, Boundary::open));
  f.values = {-0.5, 0.0, 0.25, -1.0};
  const auto sm = decompose_sign_magnitude(f);
  EXPECT_EQ(sm.tau, (std::vector<int>{-1, 1, 1, -1}));
  EXPECT_EQ(sm.f, (std::vector<double>{0.5, 0.0, 0.25, 1.0}));
}

TEST(Model, HotStartCoversInterval) {
  const GaugeField f = filled(build_geometry({6, 6, 6}, Boundary::periodic), 1);
  double lo = 1, hi = -1, sum = 0;
  for (double v : f.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  EXPECT_LT(lo, -0.9);
  EXPECT_GT(hi, 0.9);
  EXPECT_NEAR(sum / static_cast<double>(f.values.size()), 0.0, 0.1);
}

// Both update schemes against exact expectations on one plaquette.
class SchemeVsOracle : public ::testing::TestWithParam<SweepScheme> {};

TEST_P(SchemeVsOracle, PlaquetteAndLinkSquare) {
  const auto geometry = build_geometry({2, 2}, Boundary::open);
  const ModelParams p = ModelParams::isotropic(3.0, 0.3);
  const auto sys = oracle::gauge_system(*geometry, p);
  const double plaq = oracle::exact_expectation(sys, oracle::Monomial::of({0, 1, 2, 3})).value;
  oracle::Monomial sq;
  sq.powers[0] = 2;
  const double phi2 = oracle::exact_expectation(sys, sq).value;

  Rng rng(2024);
  GaugeField f = random_field(geometry, rng);
  const int n = 200000;
  std::vector<double> ps, qs;
  ps.reserve(n);
  qs.reserve(n);
  for (int i = 0; i < 500; ++i) sweep(f, p, rng, GetParam());
  for (int i = 0; i < n; ++i) {
    sweep(f, p, rng, GetParam());
    ps.push_back(plaquette_value(f, 0));
    qs.push_back(f[0] * f[0]);
  }
  const auto ep = auto_binned_estimate(ps);
  const auto eq = auto_binned_estimate(qs);
  EXPECT_NEAR(ep.mean, plaq, 4 * ep.error);
  EXPECT_NEAR(eq.mean, phi2, 4 * eq.error);
  EXPECT_LT(ep.error, 0.01);
}

INSTANTIATE_TEST_SUITE_P(Schemes, SchemeVsOracle,
                         ::testing::Values(SweepScheme::heatbath(), SweepScheme::metropolis(0.7)));

TEST(Model, MetropolisAcceptanceIsReported) {
  const auto geometry = build_geometry({4, 4}, Boundary::periodic);
  Rng rng(4);
  GaugeField f = random_field(geometry, rng);
  const auto stats = sweep(f, ModelParams::isotropic(2.0, 1.0), rng, SweepScheme::metropolis(2.0));
  EXPECT_EQ(stats.proposed, geometry->link_count());
  EXPECT_GT(stats.acceptance(), 0.0);
  EXPECT_LT(stats.acceptance(), 1.0);
}
