// Command-line driver: sampling runs, bounds tables, quadrature oracle,
// inequality scans and post-processing fits.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "z2lab/bounds.hpp"
#include "z2lab/checkpoint.hpp"
#include "z2lab/config.hpp"
#include "z2lab/csv.hpp"
#include "z2lab/observables.hpp"
#include "z2lab/oracle.hpp"
#include "z2lab/runner.hpp"

namespace {

using namespace z2lab;
using nlohmann::json;

enum Exit { kOk = 0, kInvalidConfig = 1, kRuntime = 2, kConvergence = 3 };

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> chains;
  std::optional<std::string> out;
};

RunConfig load_with_overrides(const std::string& path, RunKind kind,
                              const Overrides& o) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  if (!j.contains("kind")) j["kind"] = std::string(to_string(kind));
  if (o.seed) j["seed"] = *o.seed;
  if (o.chains) j["chains"] = *o.chains;
  if (o.out) j["output"]["dir"] = *o.out;
  RunConfig c = parse_config(j);
  if (c.kind != kind) {
    throw ConfigError("kind: config describes a " + std::string(to_string(c.kind)) +
                      " run, subcommand expects " + std::string(to_string(kind)));
  }
  return c;
}

void report(const RunResult& r) {
  if (!r.completed) {
    std::cout << "interrupted at sweep " << r.sweeps << "; resume with: z2lab resume "
              << r.checkpoint.string() << '\n';
    return;
  }
  std::cout << "completed " << r.sweeps << " sweeps (n_therm " << r.n_therm
            << ", acceptance " << format_double(r.acceptance) << ")\n";
  for (const auto& f : r.files) std::cout << "  wrote " << f.string() << '\n';
}

std::string params_string(const RunConfig& c) {
  std::ostringstream os;
  os << "beta=" << format_double(c.model.beta) << ";omega=" << format_double(c.model.omega);
  if (c.kind == RunKind::gauge) os << ";beta_spatial=" << format_double(c.model.beta_spatial);
  os << ";extents=";
  for (std::size_t i = 0; i < c.model.extents.size(); ++i) {
    os << (i ? "x" : "") << c.model.extents[i];
  }
  os << ";boundary=" << to_string(c.model.boundary);
  return os.str();
}

int cmd_oracle(const RunConfig& c, const oracle::QuadratureSpec& quad,
               const std::string& out) {
  std::vector<std::pair<std::string, oracle::Monomial>> observables;
  oracle::GibbsSystem sys;
  if (c.kind == RunKind::gauge) {
    const GeometryPtr g = build_geometry(c.model.extents, c.model.boundary);
    sys = oracle::gauge_system(*g, c.gauge_params());
    for (int r = 1; r <= c.observables.max_r; ++r) {
      for (int t = 1; t <= c.observables.max_t; ++t) {
        const RectLoop loop{0, 1, 0, t, r};
        if (!g->loop_fits(loop)) continue;
        oracle::Monomial m;
        for (std::size_t l : g->rect_loop_indices(loop)) ++m.powers[static_cast<int>(l)];
        observables.emplace_back("wilson(R=" + std::to_string(r) + ",T=" + std::to_string(t) +
                                     ",plane=0-1,corner=0)",
                                 m);
      }
    }
    observables.emplace_back("link_square(link=0)", oracle::Monomial{{{0, 2}}});
  } else {
    const GeometryPtr g = build_spin_lattice(c.model.extents, c.model.boundary);
    sys = oracle::spin_system(*g, c.wall_params());
    for (int axis : c.observables.correlator_axes) {
      for (int x = 0; x <= max_separation(*g, axis); ++x) {
        const std::size_t partner = g->shift(0, axis, x);
        oracle::Monomial m;
        ++m.powers[0];
        ++m.powers[static_cast<int>(partner)];
        observables.emplace_back("correlator(axis=" + std::to_string(axis) +
                                     ",x=" + std::to_string(x) + ")",
                                 m);
      }
    }
  }
  std::vector<std::vector<std::string>> rows;
  const std::string params = params_string(c);
  for (const auto& [name, m] : observables) {
    const oracle::OracleValue v = oracle::exact_expectation(sys, m, quad);
    rows.push_back({name, params, format_double(v.value), std::to_string(v.n_nodes),
                    v.converged ? "true" : "false"});
  }
  const std::vector<std::string> cols{"observable", "params", "value", "n_nodes", "converged"};
  if (out.empty()) {
    write_csv(std::cout, echo_json(c), cols, rows);
  } else {
    std::ofstream f(out);
    if (!f) throw OutputError("cannot write " + out);
    write_csv(f, echo_json(c), cols, rows);
  }
  return kOk;
}

int cmd_gks(const RunConfig& c, int max_degree, const oracle::QuadratureSpec& quad,
            double tol) {
  oracle::GibbsSystem sys;
  if (c.kind == RunKind::gauge) {
    const GeometryPtr g = build_geometry(c.model.extents, c.model.boundary);
    sys = oracle::gauge_system(*g, c.gauge_params());
  } else {
    const GeometryPtr g = build_spin_lattice(c.model.extents, c.model.boundary);
    sys = oracle::spin_system(*g, c.wall_params());
  }
  const oracle::GksScan scan = oracle::gks_scan(sys, max_degree, quad, tol);
  std::vector<std::vector<std::string>> rows;
  for (const auto& v : scan.violations) {
    rows.push_back({v.kind == oracle::GksViolation::Kind::first ? "I" : "II", v.a.str(),
                    v.b.str(), format_double(v.value)});
  }
  write_csv(std::cout, echo_json(c), {"inequality", "A", "B", "value"}, rows);
  std::cerr << "checked " << scan.monomials_checked << " monomials and " << scan.pairs_checked
            << " pairs at " << scan.n_nodes << " nodes; " << scan.violations.size()
            << " violations (tol " << format_double(tol) << ")\n";
  return kOk;
}

json config_echo_of(const CsvTable& t) {
  for (const std::string& c : t.comments) {
    if (c.rfind("config: ", 0) == 0) return json::parse(c.substr(8));
  }
  throw std::runtime_error("input CSV carries no config echo");
}

int cmd_fit_loops(const std::string& path, int min_area) {
  const CsvTable t = read_csv(path);
  std::map<std::pair<std::string, std::string>, std::vector<LoopRow>> groups;
  for (const auto& row : t.rows) {
    groups[{row[t.column("plane")], row[t.column("loop_kind")]}].push_back(
        {std::stoi(row[t.column("R")]), std::stoi(row[t.column("T")]),
         std::stod(row[t.column("mean")]), std::stod(row[t.column("err")])});
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& [key, pts] : groups) {
    try {
      const AreaLawFit f = fit_area_law(pts, min_area);
      rows.push_back({key.first, key.second, format_double(f.sigma.mean),
                      format_double(f.sigma.error), format_double(f.perimeter.mean),
                      format_double(f.perimeter.error), format_double(f.constant.mean),
                      format_double(f.constant.error), std::to_string(f.n_points)});
    } catch (const std::exception& e) {
      std::cerr << key.first << "/" << key.second << ": " << e.what() << '\n';
    }
  }
  write_csv(std::cout, config_echo_of(t),
            {"plane", "loop_kind", "sigma", "sigma_err", "perimeter", "perimeter_err",
             "constant", "constant_err", "n_points"},
            rows);
  return kOk;
}

int cmd_fit_correlators(const std::string& path) {
  const CsvTable t = read_csv(path);
  const json echo = config_echo_of(t);
  const auto extents = echo.at("model").at("extents").get<std::vector<int>>();
  const Boundary boundary = boundary_from_string(echo.at("model").at("boundary").get<std::string>());
  std::map<std::string, std::vector<std::pair<double, double>>> by_axis;
  for (const auto& row : t.rows) {
    by_axis[row[t.column("axis")]].emplace_back(std::stod(row[t.column("mean")]),
                                                std::stod(row[t.column("err")]));
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& [axis, pts] : by_axis) {
    const int a = axis == "all" ? 0 : std::stoi(axis);
    const int period = extents.at(static_cast<std::size_t>(a));
    // Errors of neighbouring entries are propagated as if independent.
    for (std::size_t x = 0; x + 1 < pts.size(); ++x) {
      const auto [c0, e0] = pts[x];
      const auto [c1, e1] = pts[x + 1];
      auto mass = [&](double ratio) {
        return boundary == Boundary::open ? std::log(ratio)
                                          : cosh_mass(ratio, static_cast<int>(x), period);
      };
      if (boundary == Boundary::periodic && 2 * static_cast<int>(x + 1) > period) break;
      double m = std::nan(""), err = std::nan("");
      if (c0 > 0.0 && c1 > 0.0) {
        m = mass(c0 / c1);
        const double rel = std::hypot(e0 / c0, e1 / c1);
        err = std::abs(mass(c0 / c1 * std::exp(rel)) - m);
      }
      rows.push_back({axis, std::to_string(x), format_double(m), format_double(err)});
    }
  }
  write_csv(std::cout, echo, {"axis", "x", "m_eff", "err"}, rows);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo, bounds and exact quadrature for Z2 lattice gauge theory with "
               "link values in [-1, 1]"};
  app.require_subcommand(1);

  std::string config_path, out, checkpoint_path, loops_path, corr_path;
  Overrides ov;
  std::uint64_t seed = 0, stop_after = 0;
  int chains = 0;
  unsigned workers = 0;
  bool quiet = false;
  int max_nodes = oracle::kMaxNodes, nodes = 12, max_degree = 2, min_area = 1;
  double tol = 1e-10, gks_tol = 1e-10;
  std::vector<double> betas, omegas, gs;
  std::vector<int> dims;

  auto add_run_flags = [&](CLI::App* s) {
    s->add_option("--config", config_path, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    s->add_option("--seed", seed, "Override the RNG seed");
    s->add_option("--chains", chains, "Override the chain count");
    s->add_option("--out", out, "Override the output directory");
    s->add_option("--stop-after", stop_after, "Checkpoint and stop after N sweeps");
    s->add_option("--workers", workers, "Worker threads across chains (0: automatic)");
    s->add_flag("--quiet", quiet, "No progress messages");
  };
  CLI::App* run_gauge = app.add_subcommand("run-gauge", "Sample the gauge model");
  add_run_flags(run_gauge);
  CLI::App* run_twowall = app.add_subcommand("run-twowall", "Sample the two-wall spin model");
  add_run_flags(run_twowall);

  CLI::App* resume_cmd = app.add_subcommand("resume", "Continue a run from its checkpoint");
  resume_cmd->add_option("checkpoint", checkpoint_path, "Checkpoint file")->required();
  resume_cmd->add_option("--config", config_path, "Refuse unless this config matches the checkpoint");
  resume_cmd->add_option("--out", out, "Output directory (default: the checkpoint's)");
  resume_cmd->add_option("--stop-after", stop_after, "Checkpoint and stop after N total sweeps");
  resume_cmd->add_option("--workers", workers, "Worker threads across chains (0: automatic)");
  resume_cmd->add_flag("--quiet", quiet, "No progress messages");

  CLI::App* bounds_cmd = app.add_subcommand("bounds", "Tabulate s~ and sigma~ over a grid");
  bounds_cmd->add_option("--beta", betas, "Inverse couplings");
  bounds_cmd->add_option("--g", gs, "Couplings g = 1/beta (alternative to --beta)");
  bounds_cmd->add_option("--omega", omegas, "Damping coefficients")->required();
  bounds_cmd->add_option("--dim", dims, "Dimensions d")->required();
  bounds_cmd->add_option("--out", out, "CSV file (default: stdout)");

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Exact expectations by quadrature");
  oracle_cmd->add_option("--config", config_path, "Model configuration (JSON)")->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--max-nodes", max_nodes, "Largest Gauss-Legendre rule");
  oracle_cmd->add_option("--nodes", nodes, "Starting rule size");
  oracle_cmd->add_option("--tol", tol, "Relative convergence tolerance");
  oracle_cmd->add_option("--out", out, "CSV file (default: stdout)");

  CLI::App* gks_cmd = app.add_subcommand("gks-scan", "Scan GKS I and II over low-degree monomials");
  gks_cmd->add_option("--config", config_path, "Model configuration (JSON)")->required()->check(CLI::ExistingFile);
  gks_cmd->add_option("--max-degree", max_degree, "Per-variable degree of A and B");
  gks_cmd->add_option("--max-nodes", max_nodes, "Largest Gauss-Legendre rule");
  gks_cmd->add_option("--tol", gks_tol, "Violation tolerance");

  CLI::App* fit_cmd = app.add_subcommand("fit", "Area-law fit or effective masses from result CSVs");
  auto* lopt = fit_cmd->add_option("--loops", loops_path, "loops.csv from run-gauge");
  auto* copt = fit_cmd->add_option("--correlators", corr_path, "correlators.csv from run-twowall");
  lopt->excludes(copt);
  fit_cmd->add_option("--min-area", min_area, "Smallest R*T used in the area-law fit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInvalidConfig;
  }

  try {
    if (run_gauge->parsed() || run_twowall->parsed()) {
      CLI::App* s = run_gauge->parsed() ? run_gauge : run_twowall;
      if (s->count("--seed")) ov.seed = seed;
      if (s->count("--chains")) ov.chains = chains;
      if (s->count("--out")) ov.out = out;
      const RunConfig c = load_with_overrides(
          config_path, run_gauge->parsed() ? RunKind::gauge : RunKind::twowall, ov);
      RunOptions opt;
      if (s->count("--stop-after")) opt.stop_after = stop_after;
      opt.workers = workers;
      opt.log = quiet ? nullptr : &std::cerr;
      report(run(c, opt));
      return kOk;
    }
    if (resume_cmd->parsed()) {
      std::optional<RunConfig> expected;
      if (!config_path.empty()) expected = load_config(config_path);
      RunOptions opt;
      if (resume_cmd->count("--stop-after")) opt.stop_after = stop_after;
      opt.workers = workers;
      opt.log = quiet ? nullptr : &std::cerr;
      std::optional<std::filesystem::path> dir;
      if (!out.empty()) dir = out;
      report(resume(checkpoint_path, expected, opt, dir));
      return kOk;
    }
    if (bounds_cmd->parsed()) {
      if (!gs.empty() && !betas.empty()) throw ConfigError("bounds: give --beta or --g, not both");
      if (gs.empty() && betas.empty()) throw ConfigError("bounds: --beta or --g is required");
      for (double g : gs) betas.push_back(g > 0.0 ? 1.0 / g : 0.0);
      const auto rows = run_bounds(betas, omegas, dims);
      std::vector<std::vector<std::string>> cells;
      for (const auto& r : rows) cells.push_back(bounds_cells(r));
      const json echo = {{"beta", betas}, {"omega", omegas}, {"d", dims}};
      if (out.empty()) {
        write_csv(std::cout, echo, bounds_columns(), cells);
      } else {
        std::ofstream f(out);
        if (!f) throw OutputError("cannot write " + out);
        write_csv(f, echo, bounds_columns(), cells);
      }
      return kOk;
    }
    if (oracle_cmd->parsed() || gks_cmd->parsed()) {
      const RunConfig c = load_config(config_path);
      oracle::QuadratureSpec quad;
      quad.n_nodes = nodes;
      quad.max_nodes = max_nodes;
      quad.convergence_tol = tol;
      return oracle_cmd->parsed() ? cmd_oracle(c, quad, out)
                                  : cmd_gks(c, max_degree, quad, gks_tol);
    }
    if (fit_cmd->parsed()) {
      if (!loops_path.empty()) return cmd_fit_loops(loops_path, min_area);
      if (!corr_path.empty()) return cmd_fit_correlators(corr_path);
      throw ConfigError("fit: give --loops or --correlators");
    }
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const ParameterError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const oracle::ConvergenceFailure& e) {
    std::cerr << "convergence failure: " << e.what() << '\n';
    return kConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
