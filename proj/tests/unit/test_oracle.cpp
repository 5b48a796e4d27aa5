#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "z2lab/oracle.hpp"
#include "z2lab/quadrature.hpp"

using namespace z2lab;
using namespace z2lab::oracle;

namespace {

// Direct sum over the full tensor-product grid.
double brute_contract(const GibbsSystem& sys, const Monomial& m, int n) {
  const auto rule = gauss_legendre(n);
  std::vector<int> idx(sys.n_vars, 0);
  double total = 0;
  for (;;) {
    double w = 1;
    std::vector<double> t(sys.n_vars);
    for (int i = 0; i < sys.n_vars; ++i) {
      t[i] = rule.nodes[idx[i]];
      w *= rule.weights[idx[i]] * std::exp(-sys.quadratic * t[i] * t[i]);
    }
    for (const auto& term : sys.terms) {
      double p = 1;
      for (int v : term.vars) p *= t[v];
      w *= std::exp(term.coupling * p - std::abs(term.coupling));
    }
    for (const auto& [v, e] : m.powers) w *= std::pow(t[v], e);
    total += w;
    int i = 0;
    while (i < sys.n_vars && ++idx[i] == n) idx[i++] = 0;
    if (i == sys.n_vars) break;
  }
  return total;
}

Monomial power(int var, int e) {
  Monomial m;
  m.powers[var] = e;
  return m;
}

}  // namespace

TEST(Quadrature, GaussLegendreExactness) {
  for (int n : {1, 3, 8, 24}) {
    const auto r = gauss_legendre(n);
    ASSERT_EQ(r.nodes.size(), static_cast<std::size_t>(n));
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double s = 0;
      for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      EXPECT_NEAR(s, exact, 1e-14) << n << " " << deg;
    }
    for (int i = 0; i < n; ++i) EXPECT_EQ(r.nodes[i], -r.nodes[n - 1 - i]);
  }
}

TEST(Oracle, ContractionMatchesBruteForce) {
  GibbsSystem sys;
  sys.n_vars = 5;
  sys.quadratic = 0.7;
  sys.terms = {{{0, 1, 2}, 1.3}, {{2, 3}, -0.4}, {{1, 3, 4}, 2.0}, {{0, 4}, 0.9}, {{4}, 0.2}};
  for (const Monomial& m : {Monomial{}, Monomial::of({0, 3}), power(2, 3) * Monomial::of({4})}) {
    for (int n : {3, 6}) {
      // Odd monomials vanish up to roundoff on the scale of Z.
      const double scale = brute_contract(sys, Monomial{}, n);
      EXPECT_NEAR(contract(sys, m, n), brute_contract(sys, m, n), 1e-13 * scale) << m.str();
    }
  }
}

TEST(Oracle, SignFixingMatchesFullIntegral) {
  const auto g = build_geometry({3, 2}, Boundary::open);
  const ModelParams p{1.2, 0.8, 1.2, HardInterval{}};
  GibbsSystem full = gauge_system(*g, p);
  const auto tree = gauge_fixing_tree(*g);
  EXPECT_EQ(tree.size(), g->site_count() - 1);
  for (const RectLoop& loop : {RectLoop{0, 1, 0, 1, 1}, RectLoop{0, 1, 0, 2, 1}}) {
    Monomial m;
    for (std::size_t l : g->rect_loop_indices(loop)) m.powers[static_cast<int>(l)] = 1;
    ASSERT_TRUE(gauge_invariant(*g, m));
    const double a = exact_expectation(full, m).value;
    const double b = exact_expectation(*g, p, m).value;
    EXPECT_NEAR(a, b, 1e-12);
    EXPECT_NEAR(exact_loop(*g, p, loop).value, b, 1e-12);
  }
  EXPECT_FALSE(gauge_invariant(*g, Monomial::of({0})));
  EXPECT_TRUE(gauge_invariant(*g, power(0, 2)));
  EXPECT_FALSE(gauge_invariant(*g, Monomial::of({99})));
}

TEST(Oracle, ZeroCouplingValues) {
  const auto g = build_geometry({2, 2}, Boundary::open);
  const ModelParams p = ModelParams::isotropic(0.0, 0.0);
  EXPECT_NEAR(exact_expectation(*g, p, Monomial::of({0})).value, 0.0, 1e-15);
  EXPECT_NEAR(exact_expectation(*g, p, power(0, 2)).value, 1.0 / 3.0, 1e-13);
  EXPECT_NEAR(exact_loop(*g, p, {0, 1, 0, 1, 1}).value, 0.0, 1e-15);
}

// <X e^{bX}> / <e^{bX}> for X a product of four uniforms on [-1, 1]:
// b m2 + b^3 (m4/6 - m2^2/2) + O(b^5), m2 = 1/81, m4 = 1/625.
TEST(Oracle, WeakCouplingPlaquette) {
  const auto g = build_geometry({2, 2}, Boundary::open);
  const double b = 0.1, m2 = 1.0 / 81, m4 = 1.0 / 625;
  const double series = b * m2 + b * b * b * (m4 / 6 - m2 * m2 / 2);
  const auto v = exact_loop(*g, ModelParams::isotropic(b, 0.0), {0, 1, 0, 1, 1});
  EXPECT_TRUE(v.converged);
  EXPECT_NEAR(v.value, series, 1e-8);
  EXPECT_NEAR(v.value, b / 81, 1e-6);
}

TEST(Oracle, PeriodicTwoByTwoIsFeasible) {
  const auto g = build_geometry({2, 2}, Boundary::periodic);
  const auto sys = gauge_system(*g, ModelParams::isotropic(1.0, 1.0));
  EXPECT_EQ(sys.n_vars, 8);
  const auto v = exact_loop(*g, ModelParams::isotropic(1.0, 1.0), {0, 1, 0, 1, 1});
  EXPECT_TRUE(v.converged);
  EXPECT_GT(v.value, 0.0);
}

TEST(Oracle, FerromagneticScanIsClean) {
  const auto g = build_geometry({2, 2}, Boundary::open);
  const auto scan = gks_scan(gauge_system(*g, ModelParams::isotropic(1.0, 0.5)), 1);
  EXPECT_TRUE(scan.violations.empty());
  EXPECT_EQ(scan.monomials_checked, 81u);  // degree <= 2 per link
  EXPECT_EQ(scan.pairs_checked, 136u);
  EXPECT_GT(scan.pairs_checked, 0u);
}

TEST(Oracle, AntiferromagneticCouplingIsCaught) {
  GibbsSystem sys;
  sys.n_vars = 2;
  sys.terms = {{{0, 1}, -1.0}};
  const auto scan = gks_scan(sys, 1);
  ASSERT_FALSE(scan.violations.empty());
  bool saw_first = false;
  for (const auto& v : scan.violations) {
    if (v.kind == GksViolation::Kind::first && v.a == Monomial::of({0, 1})) {
      saw_first = true;
      EXPECT_LT(v.value, -1e-3);
    }
  }
  EXPECT_TRUE(saw_first);
}

TEST(Oracle, MonotonicityOnSmallLattice) {
  const auto g = build_geometry({2, 2, 2}, Boundary::open);
  // Weak couplings converge with small rules; the full grid is an acceptance check.
  const ModelParams p = ModelParams::isotropic(0.3, 0.3);
  const QuadratureSpec q{8, 1e-10, 16, 1e-15};
  const auto m = monotonicity_check(*g, p, {0, 1, 0, 1, 1}, {0.0, 0.3}, q);
  EXPECT_TRUE(m.nondecreasing);
  EXPECT_LE(m.values[0].value, m.values[1].value);
}

TEST(Oracle, GuardsAndErrors) {
  GibbsSystem big;
  big.n_vars = kMaxVariables + 1;
  EXPECT_THROW(exact_expectation(big, Monomial{}), BudgetExceeded);
  GibbsSystem small;
  small.n_vars = 1;
  EXPECT_THROW(exact_expectation(small, Monomial::of({3})), std::invalid_argument);
  QuadratureSpec q;
  q.max_nodes = 96;
  EXPECT_THROW(exact_expectation(small, Monomial::of({0}), q), BudgetExceeded);

  // A sharp system cannot converge within one doubling.
  GibbsSystem sharp;
  sharp.n_vars = 2;
  sharp.terms = {{{0, 1}, 200.0}};
  QuadratureSpec tight{4, 1e-12, 8, 1e-15};
  EXPECT_THROW(exact_expectation(sharp, Monomial::of({0, 1}), tight), ConvergenceFailure);

  const auto g = build_geometry({2, 2}, Boundary::open);
  ModelParams frozen = ModelParams::isotropic(1.0, 1.0);
  frozen.beta_spatial = std::numeric_limits<double>::infinity();
  EXPECT_THROW(gauge_system(*g, frozen), ParameterError);
  ModelParams smooth = ModelParams::isotropic(1.0, 1.0);
  smooth.measure = SmoothMeasure{2};
  EXPECT_THROW(gauge_system(*g, smooth), ParameterError);
}

TEST(Oracle, MonomialAlgebra) {
  const Monomial a = Monomial::of({0, 2});
  const Monomial b = Monomial::of({2, 5});
  const Monomial c = a * b;
  EXPECT_EQ(c.powers.at(2), 2);
  EXPECT_EQ(c.total_degree(), 4);
  EXPECT_EQ(Monomial{}.total_degree(), 0);
}
