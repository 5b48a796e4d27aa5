#pragma once

#include "z2lab/rng.hpp"

namespace z2lab {

/// Single-variable full conditional with density proportional to
/// exp(h t - a t^2) on [-1, 1], a >= 0.
///
/// This is the conditional of one link (gauge model, h = staple sum,
/// a = beta * omega) or one site (two-wall model, h = beta * sum of
/// neighbours). The density is log-concave, so it can be sampled exactly.
class BoundedConditional {
 public:
  BoundedConditional(double h, double a);

  double h() const { return h_; }
  double a() const { return a_; }

  /// Exact draw. Inverse CDF of the truncated Gaussian (or truncated
  /// exponential when a = 0); when the whole interval sits more than eight
  /// standard deviations into a Gaussian tail the inverse CDF loses
  /// precision, and an exponential proposal tangent to the log-density at
  /// the near endpoint is used with rejection instead.
  double sample(Rng& rng) const;

  /// Unnormalised log-density h t - a t^2.
  double log_weight(double t) const { return h_ * t - a_ * t * t; }

 private:
  double h_;
  double a_;

  double sample_exponential(double slope, Rng& rng) const;
  double sample_tangent(Rng& rng) const;
};

/// Draw from the unbounded density proportional to
/// exp(h t - a t^2 - t^(2p)), a > 0, by rejection against the Gaussian
/// envelope exp(h t - a t^2).
double sample_smooth_conditional(double h, double a, int p, Rng& rng);

/// Draw t from exp(slope * t) restricted to [-1, 1] by inverse CDF.
double sample_truncated_exponential(double slope, double u);

}  // namespace z2lab
