#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "z2lab/lattice.hpp"
#include "z2lab/rng.hpp"

namespace z2lab {

/// Uniform measure on [-1, 1] (times the Gaussian damping).
struct HardInterval {
  friend bool operator==(const HardInterval&, const HardInterval&) = default;
};
/// Smooth measure dphi exp(-beta omega phi^2 - phi^(2p)) on the real line.
struct SmoothMeasure {
  int p = 1;
  friend bool operator==(const SmoothMeasure&, const SmoothMeasure&) = default;
};
using Measure = std::variant<HardInterval, SmoothMeasure>;

std::string describe(const Measure& m);

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Couplings of the gauge action. Plaquettes in planes (0, j) couple with
/// `beta`; plaquettes in planes (j, k), j, k >= 1, couple with
/// `beta_spatial`. The quadratic link term is always beta * omega.
struct ModelParams {
  double beta = 0.0;
  double omega = 0.0;
  double beta_spatial = 0.0;
  Measure measure = HardInterval{};

  static ModelParams isotropic(double beta, double omega) {
    return {beta, omega, beta, HardInterval{}};
  }

  double coupling(int mu, int /*nu*/) const {
    return mu == 0 ? beta : beta_spatial;
  }
  double link_damping() const { return beta * omega; }
  bool frozen_spatial() const {
    return beta_spatial == std::numeric_limits<double>::infinity();
  }

  /// Throws ParameterError naming the offending field.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// -sum_P coupling(P) phi(P) + beta omega sum_l phi(l)^2, so that the Gibbs
/// weight is exp(-action).
double action(const GaugeField& field, const ModelParams& params);

/// Product of the four link values of plaquette `p`.
double plaquette_value(const GaugeField& field, std::size_t p);

/// Coefficient H(l) of phi(l) in the plaquette part of the exponent.
double staple_sum(const GaugeField& field, const ModelParams& params,
                  std::size_t link);

/// Resample phi(l) from its full conditional exp(H t - beta omega t^2) on
/// [-1, 1].
void heatbath_update(GaugeField& field, const ModelParams& params,
                     std::size_t link, Rng& rng);

/// Reflected uniform proposal of half-width `width` in (0, 2], accepted
/// with probability min(1, exp(-delta action)).
bool metropolis_update(GaugeField& field, const ModelParams& params,
                       std::size_t link, Rng& rng, double width);

/// Map t + delta back into [-1, 1] by reflection at the endpoints.
double reflect_into_interval(double t);

struct SweepScheme {
  enum class Kind { heatbath, metropolis };
  Kind kind = Kind::heatbath;
  double width = 1.0;

  static SweepScheme heatbath() { return {Kind::heatbath, 1.0}; }
  static SweepScheme metropolis(double w) { return {Kind::metropolis, w}; }
};

struct SweepStats {
  std::size_t proposed = 0;
  std::size_t accepted = 0;
  double acceptance() const {
    return proposed == 0 ? 1.0
                         : static_cast<double>(accepted) /
                               static_cast<double>(proposed);
  }
};

/// One update of every link in increasing link-index order.
SweepStats sweep(GaugeField& field, const ModelParams& params, Rng& rng,
                 const SweepScheme& scheme);

/// Hot start: every link uniform on [-1, 1].
GaugeField random_field(GeometryPtr geometry, Rng& rng);

struct SignMagnitude {
  std::vector<int> tau;     // sgn(phi), with sgn(0) = +1
  std::vector<double> f;    // |phi|
};

SignMagnitude decompose_sign_magnitude(const GaugeField& field);
inline int sign_of(double v) { return v < 0.0 ? -1 : 1; }

}  // namespace z2lab
