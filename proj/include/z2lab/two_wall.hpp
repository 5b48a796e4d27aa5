#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "z2lab/lattice.hpp"
#include "z2lab/model.hpp"
#include "z2lab/observables.hpp"
#include "z2lab/rng.hpp"
#include "z2lab/statistics.hpp"

namespace z2lab {

// Membrane between two hard walls: one real spin per site of a
// k-dimensional lattice, Gibbs weight
//   prod_y dm(phi(y)) exp(beta sum_{y,mu} phi(y) phi(y + e_mu)),
// dm = dphi exp(-beta omega phi^2) on [-1, 1] (or the smooth measure).

struct WallParams {
  double beta = 0.0;
  double omega = 0.0;
  Measure measure = HardInterval{};

  double site_damping() const { return beta * omega; }
  void validate() const;
  friend bool operator==(const WallParams&, const WallParams&) = default;
};

struct SpinField {
  GeometryPtr geometry;
  std::vector<double> values;

  SpinField() = default;
  explicit SpinField(GeometryPtr g, double fill = 0.0)
      : geometry(std::move(g)), values(geometry->site_count(), fill) {}
};

GeometryPtr build_spin_lattice(std::vector<int> extents, Boundary boundary);

/// -beta sum_{y,mu} phi(y) phi(y + e_mu) + beta omega sum_y phi(y)^2.
/// On periodic lattices every forward bond is counted, so an extent-2
/// direction couples each pair twice.
double spin_action(const SpinField& field, const WallParams& params);

/// beta times the sum of neighbour spins (with multiplicity).
double spin_local_field(const SpinField& field, const WallParams& params,
                        std::size_t site);

/// One update per site in index order; heatbath draws from the exact
/// conditional (rejection against the Gaussian envelope for the smooth
/// measure), Metropolis uses a reflected proposal on [-1, 1] and an
/// unreflected one for the smooth measure.
SweepStats spin_sweep(SpinField& field, const WallParams& params, Rng& rng,
                      const SweepScheme& scheme);

SpinField random_spin_field(GeometryPtr geometry, Rng& rng);

/// Translation average of phi(y) phi(y + x e_axis) over all y for which the
/// partner site exists. `signs` uses sgn(phi) instead of phi.
double correlator_sample(const SpinField& field, int axis, int x,
                         bool signs = false);

/// Translation average of phi(y) phi(y + sep) for a general separation
/// vector (wrapped on periodic lattices).
double correlator_sample(const SpinField& field, std::span<const int> sep);

/// Largest axis separation measured: L/2 periodic, L-1 open.
int max_separation(const LatticeGeometry& g, int axis);

/// Ensemble two-point function <phi(0) phi(x e_axis)>, x = 0..max_separation,
/// from a list of configurations.
std::vector<EstimateWithError> correlator(std::span<const SpinField> ensemble,
                                          int axis);

/// exp(-beta omega t^2 - t^(2p)).
double smooth_measure_weight(double t, int p, double beta, double omega);

/// Normalised single-site moment <t^power> under the bare site measure
/// (hard interval or smooth_p), by adaptive quadrature.
double single_site_moment(const Measure& measure, double beta, double omega,
                          int power);

/// Rescaling a membrane between walls at +-D with mass term r/2 phi^2 onto
/// the unit interval: beta = D^2, omega = k + r/2.
WallParams hard_wall_map(double wall_half_width, double r, int k);

/// Heatbath sweep of the unscaled membrane:
/// exp(-1/2 sum (phi(y+mu) - phi(y))^2 - r/2 sum phi^2), |phi| <= D,
/// on a periodic lattice.
void membrane_sweep(SpinField& field, double wall_half_width, double r,
                    Rng& rng);

/// The beta_spatial -> infinity limit of an N0 x N1 temporal Wilson loop:
/// <phi(0) phi(N1 e_1)>^N0 in the two-wall model with k = d - 1. Takes the
/// per-measurement correlator samples at separation N1; the error comes
/// from a delete-one-bin jackknife. Throws CorrelatorError when the
/// correlator mean is not positive.
EstimateWithError frozen_spatial_loop(std::span<const double> correlator_samples,
                                      std::size_t bin_size, int n0);

}  // namespace z2lab
