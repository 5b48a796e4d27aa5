#include "z2lab/observables.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace z2lab {

double wilson_loop(const GaugeField& field, const RectLoop& loop) {
  double prod = 1.0;
  for (std::size_t l : field.geometry->rect_loop_indices(loop)) {
    prod *= field.values[l];
  }
  return prod;
}

int ising_loop(const GaugeField& field, const RectLoop& loop) {
  int prod = 1;
  for (std::size_t l : field.geometry->rect_loop_indices(loop)) {
    prod *= sign_of(field.values[l]);
  }
  return prod;
}

PlaquetteAverages average_plaquette(const GaugeField& field) {
  const LatticeGeometry& g = *field.geometry;
  double sum_t = 0.0, sum_s = 0.0;
  std::size_t n_t = 0, n_s = 0;
  for (std::size_t p = 0; p < g.plaquette_count(); ++p) {
    const double v = plaquette_value(field, p);
    if (g.spatial_plaquette(p)) {
      sum_s += v;
      ++n_s;
    } else {
      sum_t += v;
      ++n_t;
    }
  }
  PlaquetteAverages out;
  out.temporal = n_t ? sum_t / static_cast<double>(n_t) : 0.0;
  if (n_s) out.spatial = sum_s / static_cast<double>(n_s);
  return out;
}

double mean_link_square(const GaugeField& field) {
  double s = 0.0;
  for (double v : field.values) s += v * v;
  return field.values.empty() ? 0.0 : s / static_cast<double>(field.values.size());
}

std::string_view to_string(LoopKind k) {
  return k == LoopKind::wilson ? "wilson" : "ising";
}

std::string_view to_string(PlaneClass p) {
  switch (p) {
    case PlaneClass::temporal: return "temporal";
    case PlaneClass::spatial: return "spatial";
    case PlaneClass::all: return "all";
  }
  return "all";
}

PlaneClass plane_class_from_string(std::string_view s) {
  if (s == "temporal") return PlaneClass::temporal;
  if (s == "spatial") return PlaneClass::spatial;
  if (s == "all") return PlaneClass::all;
  throw std::invalid_argument("unknown plane class '" + std::string(s) + "'");
}

namespace {

std::vector<std::pair<int, int>> planes_of(const LatticeGeometry& g,
                                           PlaneClass planes) {
  std::vector<std::pair<int, int>> out;
  for (int mu = 0; mu < g.dim(); ++mu) {
    for (int nu = mu + 1; nu < g.dim(); ++nu) {
      const bool temporal = mu == 0;
      if (planes == PlaneClass::all || (planes == PlaneClass::temporal && temporal) ||
          (planes == PlaneClass::spatial && !temporal)) {
        out.emplace_back(mu, nu);
      }
    }
  }
  return out;
}

}  // namespace

std::vector<std::vector<std::optional<double>>> measure_loops(
    const GaugeField& field, PlaneClass planes, int max_r, int max_t,
    LoopKind kind) {
  const LatticeGeometry& g = *field.geometry;
  const std::size_t V = g.site_count();
  const int d = g.dim();
  const int maxlen = std::max(max_r, max_t);

  std::vector<double> vals = field.values;
  if (kind == LoopKind::ising) {
    for (double& v : vals) v = sign_of(v);
  }

  // line[(s * d + mu) * maxlen + (n - 1)]: product of n links from s along
  // mu, NaN if the line leaves an open lattice.
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> line(V * static_cast<std::size_t>(d * maxlen), nan);
  for (std::size_t s = 0; s < V; ++s) {
    for (int mu = 0; mu < d; ++mu) {
      double prod = 1.0;
      std::size_t x = s;
      for (int n = 1; n <= maxlen && n < g.extent(mu); ++n) {
        if (g.forward(x, mu) == LatticeGeometry::npos) break;
        prod *= vals[g.link_index({x, mu})];
        line[(s * static_cast<std::size_t>(d) + static_cast<std::size_t>(mu)) *
                 static_cast<std::size_t>(maxlen) +
             static_cast<std::size_t>(n - 1)] = prod;
        x = g.forward(x, mu);
      }
    }
  }
  auto line_at = [&](std::size_t s, int mu, int n) {
    return line[(s * static_cast<std::size_t>(d) + static_cast<std::size_t>(mu)) *
                    static_cast<std::size_t>(maxlen) +
                static_cast<std::size_t>(n - 1)];
  };

  std::vector<std::vector<std::optional<double>>> out(
      static_cast<std::size_t>(max_r),
      std::vector<std::optional<double>>(static_cast<std::size_t>(max_t)));
  const auto plane_list = planes_of(g, planes);
  for (int r = 1; r <= max_r; ++r) {
    for (int t = 1; t <= max_t; ++t) {
      double sum = 0.0;
      std::size_t count = 0;
      for (const auto& [mu, nu] : plane_list) {
        if (t >= g.extent(mu) || r >= g.extent(nu)) continue;
        for (std::size_t s = 0; s < V; ++s) {
          const std::size_t s_t = g.shift(s, mu, t);
          const std::size_t s_r = g.shift(s, nu, r);
          if (s_t == LatticeGeometry::npos || s_r == LatticeGeometry::npos) continue;
          const double a = line_at(s, mu, t);
          const double b = line_at(s_t, nu, r);
          const double c = line_at(s_r, mu, t);
          const double e = line_at(s, nu, r);
          if (std::isnan(a) || std::isnan(b) || std::isnan(c) || std::isnan(e)) continue;
          sum += a * b * c * e;
          ++count;
        }
      }
      if (count) {
        out[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(t - 1)] =
            sum / static_cast<double>(count);
      }
    }
  }
  return out;
}

std::optional<double> loop_average(const GaugeField& field, PlaneClass planes,
                                   int r, int t, LoopKind kind) {
  const auto all = measure_loops(field, planes, r, t, kind);
  return all[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(t - 1)];
}

void Series::finalize() {
  estimate = auto_binned_estimate(samples);
}

const Series& LoopTable::at(int r, int t) const {
  auto it = entries.find({r, t});
  if (it == entries.end()) {
    throw std::out_of_range("loop table has no entry R=" + std::to_string(r) +
                            " T=" + std::to_string(t));
  }
  return it->second;
}

EstimateWithError creutz_ratio(const LoopTable& table, int r, int t) {
  if (r < 1 || t < 1) throw std::invalid_argument("Creutz ratio needs R, T >= 1");
  // Loops with a zero side are the identity.
  std::array<std::pair<int, int>, 4> keys{{{r, t}, {r - 1, t - 1}, {r - 1, t}, {r, t - 1}}};
  std::vector<const Series*> used(4, nullptr);
  std::size_t bin = 1;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto [kr, kt] = keys[i];
    if (kr == 0 || kt == 0) continue;
    used[i] = &table.at(kr, kt);
    if (!(used[i]->estimate.mean > 0.0)) {
      throw NoisyLoopError("W(" + std::to_string(kr) + "," + std::to_string(kt) +
                           ") = " + std::to_string(used[i]->estimate.mean) +
                           " is not positive; loop is noise dominated");
    }
    bin = std::max(bin, used[i]->estimate.bin_size);
  }
  std::vector<std::span<const double>> series;
  std::vector<int> slot(4, -1);
  for (std::size_t i = 0; i < 4; ++i) {
    if (!used[i]) continue;
    slot[i] = static_cast<int>(series.size());
    series.emplace_back(used[i]->samples);
  }
  const std::size_t n = series.front().size();
  while (bin > 1 && n / bin < 2) bin /= 2;
  auto f = [&](std::span<const double> m) {
    auto w = [&](std::size_t i) { return slot[i] < 0 ? 1.0 : m[static_cast<std::size_t>(slot[i])]; };
    const double num = w(0) * w(1);
    const double den = w(2) * w(3);
    if (!(num > 0.0) || !(den > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return -std::log(num / den);
  };
  return jackknife(series, bin, f);
}

namespace {

struct Fit3 {
  std::array<double, 3> p{};
  std::array<std::array<double, 3>, 3> cov{};
  bool ok = false;
};

// Weighted least squares for y = -(sigma x1 + rho x2 + c).
Fit3 solve_weighted(const std::vector<std::array<double, 3>>& x,
                    const std::vector<double>& y, const std::vector<double>& w) {
  std::array<std::array<double, 3>, 3> a{};
  std::array<double, 3> b{};
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (int j = 0; j < 3; ++j) {
      b[static_cast<std::size_t>(j)] += w[i] * x[i][static_cast<std::size_t>(j)] * (-y[i]);
      for (int k = 0; k < 3; ++k) {
        a[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] +=
            w[i] * x[i][static_cast<std::size_t>(j)] * x[i][static_cast<std::size_t>(k)];
      }
    }
  }
  const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                     a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                     a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  Fit3 out;
  // Rank-deficient designs (e.g. only R = 1 loops, where R + T = R T + 1)
  // leave a roundoff-sized determinant.
  const double scale = a[0][0] * a[1][1] * a[2][2];
  if (!std::isfinite(det) || !(std::abs(det) > 1e-10 * scale)) return out;
  std::array<std::array<double, 3>, 3> inv{};
  inv[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / det;
  inv[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det;
  inv[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det;
  inv[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / det;
  inv[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det;
  inv[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det;
  inv[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / det;
  inv[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det;
  inv[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t k = 0; k < 3; ++k) out.p[j] += inv[j][k] * b[k];
  }
  out.cov = inv;
  out.ok = true;
  return out;
}

}  // namespace

AreaLawFit fit_area_law(std::span<const LoopRow> rows, int min_area) {
  std::vector<std::array<double, 3>> x;
  std::vector<double> y, w;
  for (const LoopRow& row : rows) {
    if (row.r * row.t < min_area || !(row.mean > 0.0) || !(row.error > 0.0)) continue;
    x.push_back({static_cast<double>(row.r * row.t),
                 static_cast<double>(row.r + row.t), 1.0});
    y.push_back(std::log(row.mean));
    const double rel = row.error / row.mean;
    w.push_back(1.0 / (rel * rel));
  }
  if (y.size() < 3) throw std::domain_error("area-law fit needs at least 3 usable loops");
  const Fit3 fit = solve_weighted(x, y, w);
  if (!fit.ok) throw std::domain_error("area-law fit is degenerate");
  AreaLawFit out;
  out.n_points = y.size();
  out.sigma = {fit.p[0], std::sqrt(fit.cov[0][0]), y.size(), 1};
  out.perimeter = {fit.p[1], std::sqrt(fit.cov[1][1]), y.size(), 1};
  out.constant = {fit.p[2], std::sqrt(fit.cov[2][2]), y.size(), 1};
  return out;
}

AreaLawFit fit_area_law(const LoopTable& table, int min_area) {
  std::vector<std::pair<int, int>> keys;
  std::vector<std::span<const double>> series;
  std::vector<double> weights;
  std::size_t bin = 1;
  for (const auto& [key, s] : table.entries) {
    const auto [r, t] = key;
    if (r * t < min_area || !(s.estimate.mean > 0.0) || !(s.estimate.error > 0.0)) continue;
    keys.push_back(key);
    series.emplace_back(s.samples);
    const double rel = s.estimate.error / s.estimate.mean;
    weights.push_back(1.0 / (rel * rel));
    bin = std::max(bin, s.estimate.bin_size);
  }
  if (keys.size() < 3) throw std::domain_error("area-law fit needs at least 3 usable loops");
  const std::size_t n = series.front().size();
  while (bin > 1 && n / bin < 2) bin /= 2;

  std::vector<std::array<double, 3>> x;
  for (const auto& [r, t] : keys) {
    x.push_back({static_cast<double>(r * t), static_cast<double>(r + t), 1.0});
  }
  auto param = [&](std::size_t which) {
    return [&, which](std::span<const double> means) {
      std::vector<double> y;
      for (double m : means) {
        if (!(m > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        y.push_back(std::log(m));
      }
      const Fit3 f = solve_weighted(x, y, weights);
      return f.ok ? f.p[which] : std::numeric_limits<double>::quiet_NaN();
    };
  };
  AreaLawFit out;
  out.n_points = keys.size();
  out.sigma = jackknife(series, bin, param(0));
  out.perimeter = jackknife(series, bin, param(1));
  out.constant = jackknife(series, bin, param(2));
  return out;
}

namespace {

double log_cosh(double z) {
  const double a = std::abs(z);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

}  // namespace

double cosh_mass(double ratio, int x, int period) {
  const double half = 0.5 * static_cast<double>(period);
  const double a = half - static_cast<double>(x);
  const double b = half - static_cast<double>(x + 1);
  if (!(b >= 0.0) || !(ratio > 1.0) || !std::isfinite(ratio)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double target = std::log(ratio);
  auto g = [&](double m) { return log_cosh(m * a) - log_cosh(m * b) - target; };
  // g is increasing from -target < 0 at m = 0 and grows like m (a - b) = m.
  double lo = 0.0, hi = std::max(1.0, 2.0 * target);
  while (g(hi) < 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> effective_mass(std::span<const double> correlator,
                                   Boundary boundary, int period) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (correlator.size() < 2) return {};
  std::vector<double> out(correlator.size() - 1, nan);
  for (std::size_t x = 0; x + 1 < correlator.size(); ++x) {
    if (boundary == Boundary::periodic &&
        2 * static_cast<int>(x + 1) > period) {
      break;
    }
    const double c0 = correlator[x];
    const double c1 = correlator[x + 1];
    if (!(c0 > 0.0) || !(c1 > 0.0)) {
      throw CorrelatorError("correlator entry at x=" +
                            std::to_string(c0 > 0.0 ? x + 1 : x) +
                            " is not positive");
    }
    out[x] = boundary == Boundary::open
                 ? std::log(c0 / c1)
                 : cosh_mass(c0 / c1, static_cast<int>(x), period);
  }
  return out;
}

std::vector<EstimateWithError> effective_mass_jackknife(
    std::span<const Series> correlator, std::size_t bin_size,
    Boundary boundary, int period) {
  std::vector<EstimateWithError> out;
  for (std::size_t x = 0; x + 1 < correlator.size(); ++x) {
    if (boundary == Boundary::periodic && 2 * static_cast<int>(x + 1) > period) break;
    const std::array<std::span<const double>, 2> s{
        std::span<const double>(correlator[x].samples),
        std::span<const double>(correlator[x + 1].samples)};
    const int xi = static_cast<int>(x);
    auto f = [&](std::span<const double> m) {
      if (!(m[0] > 0.0) || !(m[1] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
      return boundary == Boundary::open ? std::log(m[0] / m[1])
                                        : cosh_mass(m[0] / m[1], xi, period);
    };
    out.push_back(jackknife(s, bin_size, f));
  }
  return out;
}

}  // namespace z2lab
