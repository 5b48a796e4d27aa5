#include "z2lab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <bit>
#include <cstdio>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "z2lab/quadrature.hpp"

namespace z2lab::oracle {

GibbsSystem gauge_system(const LatticeGeometry& geometry,
                         const ModelParams& params) {
  params.validate();
  if (!std::holds_alternative<HardInterval>(params.measure)) {
    throw ParameterError("the quadrature oracle integrates the hard-interval measure only");
  }
  if (params.frozen_spatial()) {
    throw ParameterError("the quadrature oracle needs a finite beta_spatial");
  }
  GibbsSystem sys;
  sys.n_vars = static_cast<int>(geometry.link_count());
  sys.quadratic = params.link_damping();
  for (std::size_t p = 0; p < geometry.plaquette_count(); ++p) {
    const PlaquetteRef ref = geometry.plaquette_ref(p);
    GibbsSystem::Interaction term;
    for (std::uint32_t l : geometry.plaquette_link_indices(p)) {
      term.vars.push_back(static_cast<int>(l));
    }
    term.coupling = params.coupling(ref.mu, ref.nu);
    sys.terms.push_back(std::move(term));
  }
  return sys;
}

GibbsSystem spin_system(const LatticeGeometry& lattice,
                        const WallParams& params) {
  params.validate();
  if (!std::holds_alternative<HardInterval>(params.measure)) {
    throw ParameterError("the quadrature oracle integrates the hard-interval measure only");
  }
  GibbsSystem sys;
  sys.n_vars = static_cast<int>(lattice.site_count());
  sys.quadratic = params.site_damping();
  for (std::size_t y = 0; y < lattice.site_count(); ++y) {
    for (int mu = 0; mu < lattice.dim(); ++mu) {
      const std::size_t z = lattice.forward(y, mu);
      if (z == LatticeGeometry::npos) continue;
      sys.terms.push_back({{static_cast<int>(y), static_cast<int>(z)}, params.beta});
    }
  }
  return sys;
}

std::vector<int> gauge_fixing_tree(const LatticeGeometry& geometry) {
  std::vector<int> tree;
  std::vector<char> seen(geometry.site_count(), 0);
  std::vector<std::size_t> queue{0};
  seen[0] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t x = queue[head];
    for (int mu = 0; mu < geometry.dim(); ++mu) {
      const std::size_t f = geometry.forward(x, mu);
      if (f != LatticeGeometry::npos && !seen[f]) {
        seen[f] = 1;
        queue.push_back(f);
        tree.push_back(static_cast<int>(geometry.link_index({x, mu})));
      }
      const std::size_t b = geometry.backward(x, mu);
      if (b != LatticeGeometry::npos && !seen[b]) {
        seen[b] = 1;
        queue.push_back(b);
        tree.push_back(static_cast<int>(geometry.link_index({b, mu})));
      }
    }
  }
  return tree;
}

bool gauge_invariant(const LatticeGeometry& geometry, const Monomial& m) {
  std::vector<int> parity(geometry.site_count(), 0);
  for (const auto& [v, e] : m.powers) {
    if (v < 0 || static_cast<std::size_t>(v) >= geometry.link_count()) return false;
    const LinkRef l = geometry.link_ref(static_cast<std::size_t>(v));
    parity[l.site] ^= e & 1;
    parity[geometry.forward(l.site, l.dir)] ^= e & 1;
  }
  return std::all_of(parity.begin(), parity.end(), [](int p) { return p == 0; });
}

Monomial Monomial::of(std::initializer_list<int> vars) {
  Monomial m;
  for (int v : vars) ++m.powers[v];
  return m;
}

int Monomial::total_degree() const {
  int s = 0;
  for (const auto& [v, e] : powers) s += e;
  return s;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial m = *this;
  for (const auto& [v, e] : other.powers) m.powers[v] += e;
  return m;
}

std::string Monomial::str() const {
  if (powers.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, e] : powers) {
    if (e == 0) continue;
    if (!first) os << '*';
    os << "x" << v;
    if (e > 1) os << '^' << e;
    first = false;
  }
  return first ? "1" : os.str();
}

namespace {

constexpr std::size_t kMaxEntries = std::size_t{1} << 24;
constexpr double kMaxCost = 2e11;

double ipow(double x, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 0; i < k; ++i) r *= x;
  return r;
}

using Mask = std::uint32_t;

struct Plan {
  std::vector<int> sliced;
  std::vector<int> order;
  double max_entries = 0.0;
  double cost = 0.0;  // multiply-adds over all slices
};

// Variables outside S u {v} reachable from v through paths inside S: the
// scope of the factor produced by eliminating v after the set S.
Mask reach(int v, Mask s, const std::vector<Mask>& adj) {
  Mask seen = Mask{1} << v, frontier = seen, out = 0;
  while (frontier) {
    Mask next = 0;
    for (Mask f = frontier; f; f &= f - 1) next |= adj[static_cast<std::size_t>(std::countr_zero(f))];
    next &= ~seen;
    seen |= next;
    out |= next & ~s;
    frontier = next & s;
  }
  return out;
}

double mask_size(Mask m, const std::vector<std::size_t>& dims) {
  double p = 1.0;
  for (; m; m &= m - 1) p *= static_cast<double>(dims[static_cast<std::size_t>(std::countr_zero(m))]);
  return p;
}

// Elimination order of least total cost by dynamic programming over the
// subsets of eliminated variables (n_vars <= 12 keeps this at 4096 states).
Plan optimal_order(const std::vector<std::vector<int>>& scopes, int n_vars,
                   const std::vector<std::size_t>& dims, Mask sliced) {
  std::vector<Mask> adj(static_cast<std::size_t>(n_vars), 0);
  for (const auto& s : scopes) {
    Mask m = 0;
    for (int v : s) m |= Mask{1} << v;
    m &= ~sliced;
    for (int v : s) {
      if (!(sliced >> v & 1)) adj[static_cast<std::size_t>(v)] |= m & ~(Mask{1} << v);
    }
  }
  const Mask all = ((Mask{1} << n_vars) - 1) & ~sliced;
  const std::size_t n_states = std::size_t{1} << n_vars;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(n_states, inf);
  std::vector<int> choice(n_states, -1);
  best[sliced] = 0.0;
  for (Mask s = 0; s < n_states; ++s) {
    if ((s & sliced) != sliced || best[s] == inf) continue;
    for (int v = 0; v < n_vars; ++v) {
      if (s >> v & 1) continue;
      const Mask nb = reach(v, s & ~sliced, adj);
      const double c = best[s] + static_cast<double>(dims[static_cast<std::size_t>(v)]) * mask_size(nb, dims);
      const Mask t = s | (Mask{1} << v);
      if (c < best[t]) {
        best[t] = c;
        choice[t] = v;
      }
    }
  }
  Plan plan;
  for (Mask t = all | sliced; t != sliced;) {
    const int v = choice[t];
    plan.order.push_back(v);
    t &= ~(Mask{1} << v);
  }
  std::reverse(plan.order.begin(), plan.order.end());
  Mask done = 0;
  for (int v : plan.order) {
    plan.max_entries = std::max(plan.max_entries, mask_size(reach(v, done, adj), dims));
    done |= Mask{1} << v;
  }
  for (int v = 0; v < n_vars; ++v) {
    if (sliced >> v & 1) plan.sliced.push_back(v);
  }
  plan.cost = best[all | sliced] * mask_size(sliced, dims);
  return plan;
}

Plan make_plan(const std::vector<std::vector<int>>& scopes, int n_vars,
               const std::vector<std::size_t>& dims) {
  Mask sliced = 0;
  Plan plan = optimal_order(scopes, n_vars, dims, sliced);
  while (plan.max_entries > static_cast<double>(kMaxEntries)) {
    // Condition on the variable that leaves the cheapest remaining plan.
    std::optional<Plan> pick;
    Mask pick_mask = 0;
    for (int v = 0; v < n_vars; ++v) {
      if (sliced >> v & 1) continue;
      const Mask m = sliced | (Mask{1} << v);
      Plan p = optimal_order(scopes, n_vars, dims, m);
      if (!pick || p.cost < pick->cost) {
        pick = std::move(p);
        pick_mask = m;
      }
    }
    sliced = pick_mask;
    plan = std::move(*pick);
  }
  return plan;
}

// Dense tensor over `vars`, last variable fastest.
struct Tensor {
  std::vector<int> vars;
  std::vector<std::size_t> strides;
  std::vector<double> own;
  const double* data = nullptr;
  std::size_t base = 0;
};

Tensor eliminate(const std::vector<const Tensor*>& involved, int var,
                 const std::vector<double>& weight,
                 const std::vector<std::size_t>& dims) {
  std::set<int> scope_set;
  for (const Tensor* t : involved) scope_set.insert(t->vars.begin(), t->vars.end());
  scope_set.erase(var);
  Tensor out;
  out.vars.assign(scope_set.begin(), scope_set.end());
  const std::size_t rank = out.vars.size();
  std::vector<std::size_t> extent(rank);
  for (std::size_t i = 0; i < rank; ++i) extent[i] = dims[static_cast<std::size_t>(out.vars[i])];
  out.strides.assign(rank, 1);
  for (std::size_t i = rank; i-- > 1;) out.strides[i - 1] = out.strides[i] * extent[i];
  const std::size_t size = rank == 0 ? 1 : out.strides[0] * extent[0];
  out.own.assign(size, 0.0);
  const std::size_t nq = weight.size();

  const std::size_t k = involved.size();
  // Per involved tensor: stride for each output position and for `var`.
  std::vector<std::vector<std::size_t>> st(k, std::vector<std::size_t>(rank, 0));
  std::vector<std::size_t> se(k, 0);
  std::vector<std::size_t> off(k);
  std::vector<const double*> data(k);
  for (std::size_t f = 0; f < k; ++f) {
    const Tensor& t = *involved[f];
    for (std::size_t j = 0; j < t.vars.size(); ++j) {
      if (t.vars[j] == var) {
        se[f] = t.strides[j];
        continue;
      }
      const auto pos = static_cast<std::size_t>(
          std::lower_bound(out.vars.begin(), out.vars.end(), t.vars[j]) - out.vars.begin());
      st[f][pos] = t.strides[j];
    }
    off[f] = t.base;
    data[f] = t.data;
  }

  std::vector<double> prod(nq);
  std::vector<std::size_t> idx(rank, 0);
  for (std::size_t o = 0; o < size; ++o) {
    std::copy(weight.begin(), weight.end(), prod.begin());
    for (std::size_t f = 0; f < k; ++f) {
      const double* d = data[f] + off[f];
      const std::size_t s = se[f];
      for (std::size_t q = 0; q < nq; ++q) prod[q] *= d[q * s];
    }
    double acc = 0.0;
    for (std::size_t q = 0; q < nq; ++q) acc += prod[q];
    out.own[o] = acc;
    for (std::size_t pos = rank; pos-- > 0;) {
      ++idx[pos];
      for (std::size_t f = 0; f < k; ++f) off[f] += st[f][pos];
      if (idx[pos] < extent[pos]) break;
      for (std::size_t f = 0; f < k; ++f) off[f] -= st[f][pos] * extent[pos];
      idx[pos] = 0;
    }
  }
  out.data = out.own.data();
  return out;
}

void check_system(const GibbsSystem& system, int n) {
  if (system.n_vars > kMaxVariables) {
    throw BudgetExceeded("oracle budget: " + std::to_string(system.n_vars) +
                         " variables exceed the dense-contraction limit of " +
                         std::to_string(kMaxVariables));
  }
  if (n > kMaxNodes) {
    throw BudgetExceeded("oracle budget: " + std::to_string(n) +
                         " nodes per variable exceed " + std::to_string(kMaxNodes));
  }
  for (const auto& term : system.terms) {
    std::set<int> uniq(term.vars.begin(), term.vars.end());
    if (uniq.size() != term.vars.size()) {
      throw std::invalid_argument("interaction lists a variable twice");
    }
    for (int v : term.vars) {
      if (v < 0 || v >= system.n_vars) throw std::invalid_argument("interaction variable out of range");
    }
  }
  for (int v : system.sign_fixed) {
    if (v < 0 || v >= system.n_vars) throw std::invalid_argument("sign-fixed variable out of range");
  }
  if (!system.sign_fixed.empty() && n % 2 != 0) {
    throw std::invalid_argument("sign-fixed variables need an even rule size");
  }
}

}  // namespace

double contract(const GibbsSystem& system, const Monomial& insertion,
                int n_nodes) {
  check_system(system, n_nodes);
  const QuadratureRule rule = gauss_legendre(n_nodes);
  const auto nv = static_cast<std::size_t>(system.n_vars);

  // Node set per variable: the full rule, or its positive half with doubled
  // weights for sign-fixed variables.
  std::vector<std::vector<double>> nodes(nv), weights(nv);
  std::vector<std::size_t> dims(nv);
  std::vector<char> fixed(nv, 0);
  for (int v : system.sign_fixed) fixed[static_cast<std::size_t>(v)] = 1;
  for (std::size_t v = 0; v < nv; ++v) {
    int power = 0;
    if (auto it = insertion.powers.find(static_cast<int>(v)); it != insertion.powers.end()) {
      power = it->second;
    }
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double x = rule.nodes[q];
      if (fixed[v] && x < 0.0) continue;
      nodes[v].push_back(x);
      weights[v].push_back((fixed[v] ? 2.0 : 1.0) * rule.weights[q] *
                           std::exp(-system.quadratic * x * x) *
                           ipow(x, static_cast<std::size_t>(power)));
    }
    dims[v] = nodes[v].size();
  }

  // Merge interactions over the same variable set.
  std::map<std::vector<int>, double> merged;
  for (const auto& term : system.terms) {
    if (term.coupling == 0.0 || term.vars.empty()) continue;
    std::vector<int> key = term.vars;
    std::sort(key.begin(), key.end());
    merged[key] += term.coupling;
  }

  std::vector<Tensor> factors;
  std::vector<std::vector<int>> scopes;
  for (const auto& [vars, c] : merged) {
    if (c == 0.0) continue;
    Tensor t;
    t.vars = vars;
    const std::size_t rank = vars.size();
    std::vector<std::size_t> extent(rank);
    for (std::size_t i = 0; i < rank; ++i) extent[i] = dims[static_cast<std::size_t>(vars[i])];
    t.strides.assign(rank, 1);
    for (std::size_t i = rank; i-- > 1;) t.strides[i - 1] = t.strides[i] * extent[i];
    const std::size_t size = t.strides[0] * extent[0];
    t.own.resize(size);
    std::vector<std::size_t> idx(rank, 0);
    const double shift = std::abs(c);
    for (std::size_t o = 0; o < size; ++o) {
      double prod = 1.0;
      for (std::size_t j = 0; j < rank; ++j) prod *= nodes[static_cast<std::size_t>(vars[j])][idx[j]];
      t.own[o] = std::exp(c * prod - shift);
      for (std::size_t pos = rank; pos-- > 0;) {
        if (++idx[pos] < extent[pos]) break;
        idx[pos] = 0;
      }
    }
    t.data = t.own.data();
    scopes.push_back(vars);
    factors.push_back(std::move(t));
  }

  const Plan plan = make_plan(scopes, system.n_vars, dims);
  if (plan.cost > kMaxCost) {
    throw BudgetExceeded("oracle budget: estimated contraction cost " +
                         std::to_string(plan.cost) + " exceeds " + std::to_string(kMaxCost));
  }

  const std::size_t n_sliced = plan.sliced.size();
  std::vector<std::size_t> sidx(n_sliced, 0);
  double total = 0.0;
  for (;;) {
    // Condition every factor on the current slice assignment.
    double scalar = 1.0;
    for (std::size_t i = 0; i < n_sliced; ++i) {
      scalar *= weights[static_cast<std::size_t>(plan.sliced[i])][sidx[i]];
    }
    std::vector<Tensor> live;
    for (const Tensor& f : factors) {
      Tensor v;
      v.data = f.data;
      v.base = f.base;
      for (std::size_t j = 0; j < f.vars.size(); ++j) {
        const auto it = std::find(plan.sliced.begin(), plan.sliced.end(), f.vars[j]);
        if (it != plan.sliced.end()) {
          v.base += f.strides[j] * sidx[static_cast<std::size_t>(it - plan.sliced.begin())];
        } else {
          v.vars.push_back(f.vars[j]);
          v.strides.push_back(f.strides[j]);
        }
      }
      if (v.vars.empty()) {
        scalar *= v.data[v.base];
      } else {
        live.push_back(std::move(v));
      }
    }

    for (int var : plan.order) {
      std::vector<const Tensor*> involved;
      std::vector<Tensor> rest;
      std::vector<std::size_t> take;
      for (std::size_t i = 0; i < live.size(); ++i) {
        if (std::find(live[i].vars.begin(), live[i].vars.end(), var) != live[i].vars.end()) {
          take.push_back(i);
        }
      }
      const auto& w = weights[static_cast<std::size_t>(var)];
      if (take.empty()) {
        scalar *= std::accumulate(w.begin(), w.end(), 0.0);
        continue;
      }
      for (std::size_t i : take) involved.push_back(&live[i]);
      Tensor produced = eliminate(involved, var, w, dims);
      for (std::size_t i = 0; i < live.size(); ++i) {
        if (std::find(take.begin(), take.end(), i) == take.end()) rest.push_back(std::move(live[i]));
      }
      if (produced.vars.empty()) {
        scalar *= produced.own[0];
      } else {
        rest.push_back(std::move(produced));
      }
      live = std::move(rest);
    }
    total += scalar;

    std::size_t pos = n_sliced;
    while (pos-- > 0) {
      if (++sidx[pos] < dims[static_cast<std::size_t>(plan.sliced[pos])]) break;
      sidx[pos] = 0;
    }
    if (pos == static_cast<std::size_t>(-1)) break;
  }
  return total;
}

namespace {

bool close_enough(double prev, double cur, const QuadratureSpec& quad) {
  const double change = std::abs(cur - prev);
  return change <= quad.convergence_tol * std::max(std::abs(cur), 1e-30) ||
         change <= quad.absolute_floor;
}

void check_spec(const QuadratureSpec& quad) {
  if (quad.n_nodes < 1) throw std::invalid_argument("quadrature n_nodes must be >= 1");
  if (!(quad.convergence_tol > 0.0)) throw std::invalid_argument("convergence_tol must be > 0");
  if (quad.max_nodes > kMaxNodes) {
    throw BudgetExceeded("oracle budget: max_nodes " + std::to_string(quad.max_nodes) +
                         " exceeds " + std::to_string(kMaxNodes));
  }
}

// Node doubling over a batch of monomials; all must converge together.
std::vector<OracleValue> converge_batch(const GibbsSystem& system,
                                        const std::vector<Monomial>& monomials,
                                        const QuadratureSpec& quad) {
  check_spec(quad);
  check_system(system, std::min(quad.n_nodes, kMaxNodes));
  auto evaluate = [&](int n) {
    const double z = contract(system, Monomial{}, n);
    std::vector<double> v;
    v.reserve(monomials.size());
    for (const Monomial& m : monomials) {
      v.push_back(m.powers.empty() ? 1.0 : contract(system, m, n) / z);
    }
    return v;
  };
  int n = quad.n_nodes;
  std::vector<double> prev = evaluate(n);
  for (;;) {
    const int n2 = 2 * n;
    if (n2 > quad.max_nodes) {
      char tol[32];
      std::snprintf(tol, sizeof tol, "%g", quad.convergence_tol);
      throw ConvergenceFailure(std::string("oracle did not converge to ") + tol +
                               " before exceeding " + std::to_string(quad.max_nodes) +
                               " nodes");
    }
    std::vector<double> cur = evaluate(n2);
    bool ok = true;
    for (std::size_t i = 0; i < cur.size(); ++i) ok = ok && close_enough(prev[i], cur[i], quad);
    if (ok) {
      std::vector<OracleValue> out;
      for (std::size_t i = 0; i < cur.size(); ++i) {
        out.push_back({cur[i], n2, true, std::abs(cur[i] - prev[i])});
      }
      return out;
    }
    prev = std::move(cur);
    n = n2;
  }
}

}  // namespace

OracleValue exact_expectation(const GibbsSystem& system,
                              const Monomial& monomial,
                              const QuadratureSpec& quad) {
  for (const auto& [v, e] : monomial.powers) {
    if (v < 0 || v >= system.n_vars || e < 0) {
      throw std::invalid_argument("monomial refers to an unknown variable or has a negative exponent");
    }
  }
  return converge_batch(system, {monomial}, quad).front();
}

OracleValue exact_expectation(const LatticeGeometry& geometry,
                              const ModelParams& params,
                              const Monomial& monomial,
                              const QuadratureSpec& quad) {
  GibbsSystem sys = gauge_system(geometry, params);
  if (gauge_invariant(geometry, monomial)) sys.sign_fixed = gauge_fixing_tree(geometry);
  return exact_expectation(sys, monomial, quad);
}

OracleValue exact_loop(const LatticeGeometry& geometry,
                       const ModelParams& params, const RectLoop& loop,
                       const QuadratureSpec& quad) {
  Monomial m;
  for (std::size_t l : geometry.rect_loop_indices(loop)) ++m.powers[static_cast<int>(l)];
  return exact_expectation(geometry, params, m, quad);
}

GksScan gks_scan(const GibbsSystem& system, int max_degree,
                 const QuadratureSpec& quad, double tol) {
  if (max_degree < 0) throw std::invalid_argument("max_degree must be >= 0");
  check_system(system, std::min(quad.n_nodes, kMaxNodes));
  const int nv = system.n_vars;
  // Exponent vectors with entries in [0, max_degree] (the pair products go
  // up to 2 * max_degree).
  auto enumerate = [nv](int deg) {
    std::vector<Monomial> out;
    std::vector<int> e(static_cast<std::size_t>(nv), 0);
    for (;;) {
      Monomial m;
      for (int v = 0; v < nv; ++v) {
        if (e[static_cast<std::size_t>(v)]) m.powers[v] = e[static_cast<std::size_t>(v)];
      }
      out.push_back(std::move(m));
      int pos = nv;
      while (pos-- > 0) {
        if (++e[static_cast<std::size_t>(pos)] <= deg) break;
        e[static_cast<std::size_t>(pos)] = 0;
      }
      if (pos < 0) break;
    }
    return out;
  };
  const double n_pairs_est = std::pow(max_degree + 1.0, 2.0 * nv);
  if (n_pairs_est > 5e7) {
    throw BudgetExceeded("GKS scan budget: too many monomial pairs (" +
                         std::to_string(n_pairs_est) + ")");
  }
  const std::vector<Monomial> base = enumerate(max_degree);
  const std::vector<Monomial> all = enumerate(2 * max_degree);
  const std::vector<OracleValue> values = converge_batch(system, all, quad);
  std::map<Monomial, double> expect;
  for (std::size_t i = 0; i < all.size(); ++i) expect[all[i]] = values[i].value;

  GksScan scan;
  scan.tolerance = tol;
  scan.n_nodes = values.front().n_nodes;
  for (const Monomial& m : all) {
    ++scan.monomials_checked;
    const double v = expect.at(m);
    if (v < -tol) scan.violations.push_back({GksViolation::Kind::first, m, {}, v});
  }
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (std::size_t j = i; j < base.size(); ++j) {
      ++scan.pairs_checked;
      const double cov = expect.at(base[i] * base[j]) -
                         expect.at(base[i]) * expect.at(base[j]);
      if (cov < -tol) {
        scan.violations.push_back({GksViolation::Kind::second, base[i], base[j], cov});
      }
    }
  }
  return scan;
}

MonotonicityResult monotonicity_check(const LatticeGeometry& geometry,
                                      const ModelParams& params,
                                      const RectLoop& loop,
                                      const std::vector<double>& grid,
                                      const QuadratureSpec& quad) {
  MonotonicityResult out;
  for (double bs : grid) {
    ModelParams p = params;
    p.beta_spatial = bs;
    out.beta_spatial.push_back(bs);
    out.values.push_back(exact_loop(geometry, p, loop, quad));
  }
  for (std::size_t i = 1; i < out.values.size(); ++i) {
    if (out.beta_spatial[i] >= out.beta_spatial[i - 1] &&
        out.values[i].value < out.values[i - 1].value - 1e-10) {
      out.nondecreasing = false;
    }
  }
  return out;
}

}  // namespace z2lab::oracle
