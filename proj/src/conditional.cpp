#include "z2lab/conditional.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>

namespace z2lab {

namespace {

constexpr double kTailCut = 8.0;

double upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }
double lower_tail(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Quantile of the standard normal from an upper-tail probability q.
double upper_quantile(double q) {
  q = std::clamp(q, 1e-300, 1.0 - 1e-16);
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q);
}

}  // namespace

double sample_truncated_exponential(double slope, double u) {
  if (std::abs(slope) < 1e-300) return 2.0 * u - 1.0;
  if (slope < 0.0) return -sample_truncated_exponential(-slope, 1.0 - u);
  // F^{-1}(u) = 1 + log(u + (1-u) e^{-2s}) / s, written to stay accurate
  // for both small and large slopes.
  const double t = 1.0 + std::log1p((1.0 - u) * std::expm1(-2.0 * slope)) / slope;
  return std::clamp(t, -1.0, 1.0);
}

BoundedConditional::BoundedConditional(double h, double a) : h_(h), a_(a) {
  if (!(a >= 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("conditional needs finite h and a >= 0");
  }
}

double BoundedConditional::sample_exponential(double slope, Rng& rng) const {
  return sample_truncated_exponential(slope, rng.uniform());
}

double BoundedConditional::sample_tangent(Rng& rng) const {
  const double mean = h_ / (2.0 * a_);
  const double t0 = mean >= 1.0 ? 1.0 : (mean <= -1.0 ? -1.0 : 0.0);
  const double slope = h_ - 2.0 * a_ * t0;
  for (;;) {
    const double t = sample_exponential(slope, rng);
    const double d = t - t0;
    if (rng.uniform() <= std::exp(-a_ * d * d)) return t;
  }
}

double BoundedConditional::sample(Rng& rng) const {
  if (a_ == 0.0) return sample_exponential(h_, rng);

  const double sd = 1.0 / std::sqrt(2.0 * a_);
  const double mean = h_ / (2.0 * a_);
  const double lo = (-1.0 - mean) / sd;
  const double hi = (1.0 - mean) / sd;
  if (lo > kTailCut || hi < -kTailCut || sd > 1e3) return sample_tangent(rng);

  const double u = rng.uniform();
  double x;
  if (lo >= 0.0) {
    const double qlo = upper_tail(lo);
    const double qhi = upper_tail(hi);
    x = upper_quantile(qlo - u * (qlo - qhi));
  } else if (hi <= 0.0) {
    const double plo = lower_tail(lo);
    const double phi = lower_tail(hi);
    x = -upper_quantile(plo + u * (phi - plo));
  } else {
    const double plo = lower_tail(lo);
    const double mass = lower_tail(hi) - plo;
    const double p = plo + u * mass;
    if (p < 0.5) {
      x = -upper_quantile(p);
    } else {
      x = upper_quantile(upper_tail(lo) - u * mass);
    }
  }
  return std::clamp(mean + sd * x, -1.0, 1.0);
}

double sample_smooth_conditional(double h, double a, int p, Rng& rng) {
  if (!(a > 0.0) || p < 1) {
    throw std::invalid_argument(
        "smooth conditional needs a > 0 and p >= 1");
  }
  const double sd = 1.0 / std::sqrt(2.0 * a);
  const double mean = h / (2.0 * a);
  for (;;) {
    const double t = mean + sd * rng.normal();
    const double t2 = t * t;
    if (rng.uniform() <= std::exp(-std::pow(t2, p))) return t;
  }
}

}  // namespace z2lab
