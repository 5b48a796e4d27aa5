#include "z2lab/bounds.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace z2lab::bounds {

double s_tilde(double beta, double omega, int k) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("s_tilde needs finite beta > 0, got " + std::to_string(beta));
  }
  if (!(omega >= 0.0)) throw std::invalid_argument("s_tilde needs omega >= 0");
  if (k < 1) throw std::invalid_argument("s_tilde needs k >= 1");
  return std::sqrt(4.0 * omega / (std::numbers::pi * beta)) *
             std::exp(-omega * beta - 1.0) +
         2.0 * (omega - k);
}

double s_tilde_from_coupling(double g, double omega, int k) {
  if (!(g > 0.0)) throw std::invalid_argument("coupling g must be > 0");
  return s_tilde(1.0 / g, omega, k);
}

std::optional<double> rate_from_s(double s) {
  if (!(s > 0.0)) return std::nullopt;
  return 2.0 * std::asinh(s / std::sqrt(8.0));
}

BoundResult mass_bound(double beta, double omega, int k) {
  BoundResult r;
  r.s_tilde = s_tilde(beta, omega, k);
  r.rate = rate_from_s(r.s_tilde);
  r.valid = r.rate.has_value();
  return r;
}

BoundResult sigma_tilde(double beta, double omega, int d) {
  if (d < 2) throw std::invalid_argument("sigma_tilde needs d >= 2");
  return mass_bound(beta, omega, d - 1);
}

BoundResult sigma_tilde_from_coupling(double g, double omega, int d) {
  if (!(g > 0.0)) throw std::invalid_argument("coupling g must be > 0");
  return sigma_tilde(1.0 / g, omega, d);
}

std::optional<double> validity_threshold(double omega, int d) {
  if (omega >= d - 1) return std::nullopt;
  const int k = d - 1;
  // s -> +inf as beta -> 0 (for omega > 0) and s -> 2(omega - k) < 0 as
  // beta -> inf; the first term is decreasing in beta.
  if (omega == 0.0) return 0.0;
  double lo = 1e-12, hi = 1.0;
  while (s_tilde(hi, omega, k) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (s_tilde(mid, omega, k) > 0.0 ? lo : hi) = mid;
    if (hi - lo <= 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace z2lab::bounds
