#pragma once

#include <optional>
#include <stdexcept>

namespace z2lab::bounds {

// Closed-form confinement bounds.
//
// s(beta, omega, k) = sqrt(4 omega / (pi beta)) exp(-omega beta - 1) + 2 (omega - k)
// rate(s)           = 2 asinh(s / sqrt(8))          (s > 0 only)
//
// The two-wall correlator in k dimensions decays at least at rate(s(k)); the
// Wilson loop of the d-dimensional gauge model has area-law coefficient at
// least rate(s(d - 1)).

struct BoundResult {
  double s_tilde = 0.0;
  std::optional<double> rate;  // set iff valid
  bool valid = false;
};

double s_tilde(double beta, double omega, int k);
/// Same quantity in terms of the gauge coupling g = 1 / beta.
double s_tilde_from_coupling(double g, double omega, int k);

/// 2 asinh(s / sqrt(8)) for s > 0; nullopt when the bound is vacuous.
std::optional<double> rate_from_s(double s);

/// Two-wall mass lower bound.
BoundResult mass_bound(double beta, double omega, int k);

/// String-tension lower bound in d dimensions (k = d - 1).
BoundResult sigma_tilde(double beta, double omega, int d);
BoundResult sigma_tilde_from_coupling(double g, double omega, int d);

/// For omega < d - 1 the bound holds only below some beta*; returns it by
/// bisection (s_tilde changes sign across the returned value). nullopt when
/// omega >= d - 1, where the bound holds for every beta.
std::optional<double> validity_threshold(double omega, int d);

}  // namespace z2lab::bounds
