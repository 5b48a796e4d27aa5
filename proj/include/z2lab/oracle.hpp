#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "z2lab/lattice.hpp"
#include "z2lab/model.hpp"
#include "z2lab/two_wall.hpp"

namespace z2lab::oracle {

/// Gibbs measure on n_vars bounded variables:
///   prod_i dt_i exp(-quadratic t_i^2) on [-1, 1]
///   times prod_terms exp(coupling * prod_{i in vars} t_i).
/// Both gauge and two-wall models reduce to this form; so does any
/// ferromagnetic toy used to probe the inequality scanner.
struct GibbsSystem {
  struct Interaction {
    std::vector<int> vars;
    double coupling = 0.0;
  };
  int n_vars = 0;
  double quadratic = 0.0;
  std::vector<Interaction> terms;
  /// Variables integrated over [0, 1] with doubled weight. Valid only when
  /// every integrand is invariant under a symmetry that flips exactly
  /// these signs independently (gauge fixing on a spanning tree).
  std::vector<int> sign_fixed;
};

/// Links become variables (dense link index), plaquettes become
/// interactions with the plane coupling.
GibbsSystem gauge_system(const LatticeGeometry& geometry,
                         const ModelParams& params);
/// Sites become variables, forward bonds interactions with coupling beta.
GibbsSystem spin_system(const LatticeGeometry& lattice,
                        const WallParams& params);

/// Links of a spanning tree of the lattice, in BFS order from site 0. Their
/// signs can be fixed to + for gauge-invariant integrands.
std::vector<int> gauge_fixing_tree(const LatticeGeometry& geometry);

struct Monomial;
/// True when every site touches an even total link exponent, i.e. the
/// monomial is invariant under all gauge transformations.
bool gauge_invariant(const LatticeGeometry& geometry, const Monomial& m);

/// phi^A as variable index -> exponent.
struct Monomial {
  std::map<int, int> powers;

  static Monomial of(std::initializer_list<int> vars);
  int total_degree() const;
  Monomial operator*(const Monomial& other) const;
  std::string str() const;
  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

struct QuadratureSpec {
  int n_nodes = 12;               // starting rule; doubled until converged
  double convergence_tol = 1e-10; // relative change between n and 2n
  int max_nodes = 48;
  /// Changes below this are roundoff (values vanishing by symmetry).
  double absolute_floor = 1e-15;
};

struct OracleValue {
  double value = 0.0;
  int n_nodes = 0;
  bool converged = false;
  double last_change = 0.0;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest system contracted densely.
inline constexpr int kMaxVariables = 12;
inline constexpr int kMaxNodes = 48;

/// Unnormalised integral of exp(...) * prod t_i^{e_i} at a fixed rule size;
/// the common factor exp(-sum |coupling|) is divided out. Exposed for
/// testing the contraction against brute force.
double contract(const GibbsSystem& system, const Monomial& insertion,
                int n_nodes);

/// <phi^A> with node doubling until converged. The geometry overload gauge
/// fixes on a spanning tree when the monomial is gauge invariant.
OracleValue exact_expectation(const GibbsSystem& system,
                              const Monomial& monomial,
                              const QuadratureSpec& quad = {});
OracleValue exact_expectation(const LatticeGeometry& geometry,
                              const ModelParams& params,
                              const Monomial& monomial,
                              const QuadratureSpec& quad = {});

/// <A(C)> for one rectangle.
OracleValue exact_loop(const LatticeGeometry& geometry,
                       const ModelParams& params, const RectLoop& loop,
                       const QuadratureSpec& quad = {});

struct GksViolation {
  enum class Kind { first, second };
  Kind kind;
  Monomial a;
  Monomial b;  // empty for GKS I
  double value;  // <A> or <AB> - <A><B>
};

struct GksScan {
  std::vector<GksViolation> violations;
  std::size_t monomials_checked = 0;
  std::size_t pairs_checked = 0;
  int n_nodes = 0;
  double tolerance = 1e-10;
};

/// Checks <phi^A> >= -tol and <phi^A phi^B> - <phi^A><phi^B> >= -tol over
/// every monomial pair with per-variable degree <= max_degree.
GksScan gks_scan(const GibbsSystem& system, int max_degree,
                 const QuadratureSpec& quad = {}, double tol = 1e-10);

struct MonotonicityResult {
  std::vector<double> beta_spatial;
  std::vector<OracleValue> values;
  bool nondecreasing = true;
};

/// Exact <A(C)> at each beta_spatial of the grid (kept in the given order);
/// flags any decrease larger than 1e-10 along the grid.
MonotonicityResult monotonicity_check(const LatticeGeometry& geometry,
                                      const ModelParams& params,
                                      const RectLoop& loop,
                                      const std::vector<double>& grid,
                                      const QuadratureSpec& quad = {});

}  // namespace z2lab::oracle
