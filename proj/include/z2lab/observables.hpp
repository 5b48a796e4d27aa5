#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "z2lab/lattice.hpp"
#include "z2lab/model.hpp"
#include "z2lab/statistics.hpp"

namespace z2lab {

/// A(C): product of link values around the rectangle.
double wilson_loop(const GaugeField& field, const RectLoop& loop);

/// A'(C): product of sgn(phi) around the rectangle, sgn(0) = +1.
int ising_loop(const GaugeField& field, const RectLoop& loop);

struct PlaquetteAverages {
  double temporal = 0.0;
  /// Empty for d = 2, which has no (j, k) planes.
  std::optional<double> spatial;
};

/// Mean plaquette over (0, j) planes and over (j, k) planes separately.
PlaquetteAverages average_plaquette(const GaugeField& field);

/// Mean of phi(l)^2 over all links.
double mean_link_square(const GaugeField& field);

enum class LoopKind { wilson, ising };
/// Which planes a loop average runs over: (0, j), (j, k), or every plane.
enum class PlaneClass { temporal, spatial, all };

std::string_view to_string(LoopKind k);
std::string_view to_string(PlaneClass p);
PlaneClass plane_class_from_string(std::string_view s);

/// Average of A(C) (or A'(C)) over every translate of an R x T rectangle in
/// each plane (mu, nu) of the class, with T links along mu and R along nu.
/// Loops that do not fit (open boundary, winding) are skipped; returns
/// nullopt when no translate fits.
std::optional<double> loop_average(const GaugeField& field, PlaneClass planes,
                                   int r, int t, LoopKind kind);

/// Measures every R x T loop with 1 <= R <= max_r, 1 <= T <= max_t at once,
/// reusing straight-line link products. Result is indexed [r-1][t-1];
/// entries that do not fit are nullopt.
std::vector<std::vector<std::optional<double>>> measure_loops(
    const GaugeField& field, PlaneClass planes, int max_r, int max_t,
    LoopKind kind);

/// Per-measurement time series of one observable and its binned estimate.
struct Series {
  std::vector<double> samples;
  EstimateWithError estimate;

  void finalize();
};

/// Loop expectations keyed by (R, T) for one plane class and loop kind.
struct LoopTable {
  PlaneClass planes = PlaneClass::all;
  LoopKind kind = LoopKind::wilson;
  std::map<std::pair<int, int>, Series> entries;

  const Series& at(int r, int t) const;
  bool contains(int r, int t) const { return entries.count({r, t}) > 0; }
};

class NoisyLoopError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// chi(R, T) = -ln[W(R,T) W(R-1,T-1) / (W(R-1,T) W(R,T-1))], W(0, .) = 1,
/// with a delete-one-bin jackknife error. Throws NoisyLoopError when one of
/// the loop means is not positive.
EstimateWithError creutz_ratio(const LoopTable& table, int r, int t);

struct AreaLawFit {
  EstimateWithError sigma;
  EstimateWithError perimeter;
  EstimateWithError constant;
  std::size_t n_points = 0;
};

/// Least-squares fit ln W = -sigma R T - rho (R + T) - c over entries with
/// positive mean and R T >= min_area, weighted by the binned errors of
/// ln W, with jackknife errors on the parameters.
AreaLawFit fit_area_law(const LoopTable& table, int min_area = 1);

/// Same fit from plain (R, T, mean, error) rows, without jackknife;
/// parameter errors come from the weighted normal equations.
struct LoopRow {
  int r;
  int t;
  double mean;
  double error;
};
AreaLawFit fit_area_law(std::span<const LoopRow> rows, int min_area = 1);

class CorrelatorError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Effective mass of a correlator C(0..n-1). Open boundary:
/// m(x) = ln[C(x)/C(x+1)]. Periodic with period `period`: m(x) solves
/// C(x)/C(x+1) = cosh(m(x - L/2)) / cosh(m(x + 1 - L/2)), for x + 1 <= L/2.
/// Entries where the ratio is not defined are NaN. Throws CorrelatorError if
/// a used correlator entry is not positive.
std::vector<double> effective_mass(std::span<const double> correlator,
                                   Boundary boundary, int period = 0);

/// Single cosh-ratio inversion used by effective_mass.
double cosh_mass(double ratio, int x, int period);

/// Effective masses with jackknife errors from per-measurement correlator
/// series (one series per separation x).
std::vector<EstimateWithError> effective_mass_jackknife(
    std::span<const Series> correlator, std::size_t bin_size,
    Boundary boundary, int period = 0);

}  // namespace z2lab
