#include "z2lab/two_wall.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "z2lab/conditional.hpp"

namespace z2lab {

void WallParams::validate() const {
  ModelParams{beta, omega, beta, measure}.validate();
}

GeometryPtr build_spin_lattice(std::vector<int> extents, Boundary boundary) {
  return std::make_shared<const LatticeGeometry>(
      LatticeGeometry::spin_lattice(std::move(extents), boundary));
}

double spin_action(const SpinField& field, const WallParams& params) {
  const LatticeGeometry& g = *field.geometry;
  double bonds = 0.0, quad = 0.0;
  for (std::size_t y = 0; y < g.site_count(); ++y) {
    const double v = field.values[y];
    quad += v * v;
    for (int mu = 0; mu < g.dim(); ++mu) {
      const std::size_t n = g.forward(y, mu);
      if (n != LatticeGeometry::npos) bonds += v * field.values[n];
    }
  }
  return -params.beta * bonds + params.site_damping() * quad;
}

double spin_local_field(const SpinField& field, const WallParams& params,
                        std::size_t site) {
  const LatticeGeometry& g = *field.geometry;
  double s = 0.0;
  for (int mu = 0; mu < g.dim(); ++mu) {
    const std::size_t f = g.forward(site, mu);
    const std::size_t b = g.backward(site, mu);
    if (f != LatticeGeometry::npos) s += field.values[f];
    if (b != LatticeGeometry::npos) s += field.values[b];
  }
  return params.beta * s;
}

SweepStats spin_sweep(SpinField& field, const WallParams& params, Rng& rng,
                      const SweepScheme& scheme) {
  const std::size_t n = field.values.size();
  const double a = params.site_damping();
  const auto* smooth = std::get_if<SmoothMeasure>(&params.measure);
  SweepStats stats;
  stats.proposed = n;
  if (scheme.kind == SweepScheme::Kind::heatbath) {
    for (std::size_t y = 0; y < n; ++y) {
      const double h = spin_local_field(field, params, y);
      field.values[y] = smooth ? sample_smooth_conditional(h, a, smooth->p, rng)
                               : BoundedConditional(h, a).sample(rng);
    }
    stats.accepted = n;
    return stats;
  }
  if (!(scheme.width > 0.0 && scheme.width <= 2.0)) {
    throw ParameterError("sampler.width must lie in (0, 2]");
  }
  for (std::size_t y = 0; y < n; ++y) {
    const double old = field.values[y];
    double prop = old + rng.uniform(-scheme.width, scheme.width);
    if (!smooth) prop = reflect_into_interval(prop);
    const double h = spin_local_field(field, params, y);
    double delta = -h * (prop - old) + a * (prop * prop - old * old);
    if (smooth) delta += std::pow(prop * prop, smooth->p) - std::pow(old * old, smooth->p);
    if (delta <= 0.0 || rng.uniform() < std::exp(-delta)) {
      field.values[y] = prop;
      ++stats.accepted;
    }
  }
  return stats;
}

SpinField random_spin_field(GeometryPtr geometry, Rng& rng) {
  SpinField f(std::move(geometry));
  for (double& v : f.values) v = rng.uniform(-1.0, 1.0);
  return f;
}

int max_separation(const LatticeGeometry& g, int axis) {
  return g.periodic() ? g.extent(axis) / 2 : g.extent(axis) - 1;
}

double correlator_sample(const SpinField& field, int axis, int x, bool signs) {
  const LatticeGeometry& g = *field.geometry;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t y = 0; y < g.site_count(); ++y) {
    const std::size_t z = g.shift(y, axis, x);
    if (z == LatticeGeometry::npos) continue;
    const double a = field.values[y];
    const double b = field.values[z];
    sum += signs ? static_cast<double>(sign_of(a) * sign_of(b)) : a * b;
    ++count;
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

double correlator_sample(const SpinField& field, std::span<const int> sep) {
  const LatticeGeometry& g = *field.geometry;
  if (static_cast<int>(sep.size()) != g.dim()) {
    throw GeometryError("separation rank does not match lattice dimension");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t y = 0; y < g.site_count(); ++y) {
    std::size_t z = y;
    for (int mu = 0; mu < g.dim() && z != LatticeGeometry::npos; ++mu) {
      int steps = sep[static_cast<std::size_t>(mu)];
      if (g.periodic()) steps = ((steps % g.extent(mu)) + g.extent(mu)) % g.extent(mu);
      if (steps < 0) {
        for (int i = 0; i < -steps && z != LatticeGeometry::npos; ++i) z = g.backward(z, mu);
      } else {
        z = g.shift(z, mu, steps);
      }
    }
    if (z == LatticeGeometry::npos) continue;
    sum += field.values[y] * field.values[z];
    ++count;
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

std::vector<EstimateWithError> correlator(std::span<const SpinField> ensemble,
                                          int axis) {
  if (ensemble.empty()) throw StatisticsError("empty ensemble");
  const int xmax = max_separation(*ensemble.front().geometry, axis);
  std::vector<EstimateWithError> out;
  for (int x = 0; x <= xmax; ++x) {
    std::vector<double> s;
    s.reserve(ensemble.size());
    for (const SpinField& f : ensemble) s.push_back(correlator_sample(f, axis, x));
    out.push_back(auto_binned_estimate(s));
  }
  return out;
}

double smooth_measure_weight(double t, int p, double beta, double omega) {
  if (p < 1) throw ParameterError("smooth measure needs p >= 1");
  return std::exp(-beta * omega * t * t - std::pow(t * t, p));
}

double single_site_moment(const Measure& measure, double beta, double omega,
                          int power) {
  using boost::math::quadrature::gauss_kronrod;
  const double a = beta * omega;
  double num = 0.0, den = 0.0;
  auto add = [&](auto&& w, double lo, double hi) {
    num += gauss_kronrod<double, 61>::integrate(
        [&](double t) { return std::pow(t, power) * w(t); }, lo, hi, 15, 1e-14);
    den += gauss_kronrod<double, 61>::integrate(w, lo, hi, 15, 1e-14);
  };
  if (const auto* s = std::get_if<SmoothMeasure>(&measure)) {
    const int p = s->p;
    const double cut = std::pow(750.0, 1.0 / (2.0 * p)) + 1.0;
    auto w = [&](double t) { return std::exp(-a * t * t - std::pow(t * t, p)); };
    add(w, -cut, -1.0);
    add(w, -1.0, 1.0);
    add(w, 1.0, cut);
  } else {
    auto w = [&](double t) { return std::exp(-a * t * t); };
    add(w, -1.0, 1.0);
  }
  return num / den;
}

WallParams hard_wall_map(double wall_half_width, double r, int k) {
  if (!(wall_half_width > 0.0)) throw ParameterError("wall half-width D must be > 0");
  if (!(r >= 0.0)) throw ParameterError("mass term r must be >= 0");
  if (k < 1) throw ParameterError("membrane dimension k must be >= 1");
  return {wall_half_width * wall_half_width, k + 0.5 * r, HardInterval{}};
}

void membrane_sweep(SpinField& field, double wall_half_width, double r,
                    Rng& rng) {
  const LatticeGeometry& g = *field.geometry;
  if (!g.periodic()) {
    throw GeometryError("membrane sweep assumes a periodic lattice");
  }
  const double D = wall_half_width;
  const double a = (g.dim() + 0.5 * r) * D * D;
  for (std::size_t y = 0; y < g.site_count(); ++y) {
    double s = 0.0;
    for (int mu = 0; mu < g.dim(); ++mu) {
      s += field.values[g.forward(y, mu)] + field.values[g.backward(y, mu)];
    }
    field.values[y] = D * BoundedConditional(D * s, a).sample(rng);
  }
}

EstimateWithError frozen_spatial_loop(std::span<const double> correlator_samples,
                                      std::size_t bin_size, int n0) {
  if (n0 < 1) throw std::invalid_argument("N0 must be >= 1");
  const std::array<std::span<const double>, 1> s{correlator_samples};
  auto f = [n0](std::span<const double> m) {
    return m[0] > 0.0 ? std::pow(m[0], n0) : std::numeric_limits<double>::quiet_NaN();
  };
  EstimateWithError e = jackknife(s, bin_size, f);
  if (!(e.mean > 0.0)) {
    throw CorrelatorError("two-wall correlator is not positive");
  }
  return e;
}

}  // namespace z2lab
