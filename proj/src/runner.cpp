#include "z2lab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>

#include "z2lab/bounds.hpp"
#include "z2lab/checkpoint.hpp"
#include "z2lab/csv.hpp"
#include "z2lab/statistics.hpp"
#include "z2lab/two_wall.hpp"

namespace z2lab {

using nlohmann::json;

std::string loop_key(PlaneClass planes, LoopKind kind, int r, int t) {
  return "loop/" + std::string(to_string(planes)) + "/" + std::string(to_string(kind)) +
         "/" + std::to_string(r) + "/" + std::to_string(t);
}

std::string correlator_key(const std::string& axis, int x, bool signs) {
  return std::string(signs ? "sign_corr/" : "corr/") + axis + "/" + std::to_string(x);
}

LoopTable loop_table(const RunResult& result, PlaneClass planes, LoopKind kind) {
  LoopTable table;
  table.planes = planes;
  table.kind = kind;
  const std::string prefix = "loop/" + std::string(to_string(planes)) + "/" +
                             std::string(to_string(kind)) + "/";
  for (const auto& [key, series] : result.series) {
    if (key.compare(0, prefix.size(), prefix) != 0) continue;
    const std::string rest = key.substr(prefix.size());
    const auto slash = rest.find('/');
    const int r = std::stoi(rest.substr(0, slash));
    const int t = std::stoi(rest.substr(slash + 1));
    table.entries[{r, t}] = series;
  }
  return table;
}

std::vector<Series> correlator_series(const RunResult& result,
                                      const std::string& axis, bool signs) {
  std::vector<Series> out;
  for (int x = 0;; ++x) {
    auto it = result.series.find(correlator_key(axis, x, signs));
    if (it == result.series.end()) break;
    out.push_back(it->second);
  }
  return out;
}

namespace {

void say(const RunOptions& opt, const std::string& msg) {
  if (opt.log) *opt.log << msg << '\n';
}

// Axes whose correlators are averaged into the "all" rows: only when more
// than one axis is listed and they share the same extent.
bool average_axes(const RunConfig& c) {
  const auto& axes = c.observables.correlator_axes;
  if (axes.size() < 2) return false;
  for (int a : axes) {
    if (c.model.extents[static_cast<std::size_t>(a)] !=
        c.model.extents[static_cast<std::size_t>(axes.front())]) {
      return false;
    }
  }
  return true;
}

class Engine {
 public:
  Engine(RunConfig cfg, std::filesystem::path out_dir)
      : cfg_(std::move(cfg)), out_dir_(std::move(out_dir)) {
    if (gauge()) {
      geometry_ = build_geometry(cfg_.model.extents, cfg_.model.boundary);
    } else {
      geometry_ = build_spin_lattice(cfg_.model.extents, cfg_.model.boundary);
    }
  }

  bool gauge() const { return cfg_.kind == RunKind::gauge; }

  void fresh() {
    chains_.clear();
    for (int i = 0; i < cfg_.chains; ++i) {
      ChainState s;
      s.rng = Rng::for_stream(cfg_.seed, static_cast<std::uint64_t>(i));
      if (gauge()) {
        s.field = random_field(geometry_, s.rng).values;
      } else {
        s.field = random_spin_field(geometry_, s.rng).values;
      }
      chains_.push_back(std::move(s));
    }
    sweeps_ = 0;
    n_therm_ = cfg_.sampler.n_therm;
  }

  void load(Checkpoint cp) {
    const std::size_t expect = gauge() ? geometry_->link_count() : geometry_->site_count();
    if (static_cast<int>(cp.chains.size()) != cfg_.chains) {
      throw ResumeError("checkpoint holds " + std::to_string(cp.chains.size()) +
                        " chains, config asks for " + std::to_string(cfg_.chains));
    }
    for (const ChainState& c : cp.chains) {
      if (c.field.size() != expect) throw ResumeError("checkpoint field size does not match the lattice");
    }
    chains_ = std::move(cp.chains);
    sweeps_ = cp.sweeps;
    n_therm_ = cp.n_therm;
  }

  RunResult drive(const RunOptions& opt) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir_, ec);
    if (ec || !std::filesystem::is_directory(out_dir_)) {
      throw OutputError("cannot create output directory " + out_dir_.string());
    }
    const std::filesystem::path cp_path = out_dir_ / "checkpoint.json";
    for (;;) {
      if (!n_therm_ && sweeps_ >= kThermFloor) resolve_therm(opt);
      const std::optional<std::uint64_t> end = total();
      if (end && sweeps_ >= *end) break;
      if (opt.stop_after && sweeps_ >= *opt.stop_after) {
        write_checkpoint(cp_path, snapshot(), *geometry_);
        say(opt, "stopped after " + std::to_string(sweeps_) + " sweeps; checkpoint " +
                     cp_path.string());
        RunResult r = collect(false);
        r.checkpoint = cp_path;
        return r;
      }
      std::uint64_t next = end ? *end : kThermFloor;
      const std::uint64_t every = cfg_.output.checkpoint_every;
      next = std::min(next, (sweeps_ / every + 1) * every);
      if (opt.stop_after) next = std::min(next, *opt.stop_after);
      advance_all(next, opt);
      sweeps_ = next;
      if (sweeps_ % every == 0) write_checkpoint(cp_path, snapshot(), *geometry_);
    }
    write_checkpoint(cp_path, snapshot(), *geometry_);
    RunResult r = collect(true);
    r.checkpoint = cp_path;
    if (opt.write_outputs) {
      if (gauge()) {
        write_gauge_outputs(r);
      } else {
        write_twowall_outputs(r);
      }
    }
    say(opt, "done: " + std::to_string(sweeps_) + " sweeps, n_therm " +
                 std::to_string(*n_therm_));
    return r;
  }

 private:
  std::optional<std::uint64_t> total() const {
    if (!n_therm_) return std::nullopt;
    return *n_therm_ + cfg_.sampler.n_measure * cfg_.sampler.stride;
  }

  void resolve_therm(const RunOptions& opt) {
    double tau = 0.5;
    for (const ChainState& c : chains_) {
      const auto& h = c.therm_history;
      // The first half carries the relaxation from the hot start.
      std::span<const double> tail(h.data() + h.size() / 2, h.size() - h.size() / 2);
      if (tail.size() >= 4) tau = std::max(tau, integrated_autocorrelation_time(tail));
    }
    const auto need = static_cast<std::uint64_t>(std::ceil(10.0 * tau));
    n_therm_ = std::max(kThermFloor, need);
    for (ChainState& c : chains_) c.therm_history.clear();
    say(opt, "thermalization: tau_int " + format_double(tau) + ", n_therm " +
                 std::to_string(*n_therm_));
  }

  void advance_all(std::uint64_t target, const RunOptions& opt) {
    const std::size_t n = chains_.size();
    unsigned workers = opt.workers ? opt.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
      for (ChainState& c : chains_) advance(c, target);
      return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) advance(chains_[i], target);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  void advance(ChainState& c, std::uint64_t target) const {
    if (gauge()) {
      GaugeField f(geometry_);
      f.values = std::move(c.field);
      const ModelParams params = cfg_.gauge_params();
      for (std::uint64_t s = sweeps_ + 1; s <= target; ++s) {
        const SweepStats st = sweep(f, params, c.rng, cfg_.sampler.scheme);
        c.stats.proposed += st.proposed;
        c.stats.accepted += st.accepted;
        after_sweep(c, s, [&] { return plaquette_mean(f); }, [&] { measure_gauge(c, f); });
      }
      c.field = std::move(f.values);
    } else {
      SpinField f(geometry_);
      f.values = std::move(c.field);
      const WallParams params = cfg_.wall_params();
      for (std::uint64_t s = sweeps_ + 1; s <= target; ++s) {
        const SweepStats st = spin_sweep(f, params, c.rng, cfg_.sampler.scheme);
        c.stats.proposed += st.proposed;
        c.stats.accepted += st.accepted;
        after_sweep(c, s, [&] { return correlator_sample(f, 0, 1); },
                    [&] { measure_twowall(c, f); });
      }
      c.field = std::move(f.values);
    }
  }

  template <class Monitor, class Measure>
  void after_sweep(ChainState& c, std::uint64_t s, Monitor&& monitor,
                   Measure&& measure) const {
    if (!n_therm_) {
      c.therm_history.push_back(monitor());
      return;
    }
    if (s > *n_therm_ && (s - *n_therm_) % cfg_.sampler.stride == 0) measure();
  }

  static double plaquette_mean(const GaugeField& f) {
    const std::size_t n = f.geometry->plaquette_count();
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p) s += plaquette_value(f, p);
    return s / static_cast<double>(n);
  }

  void measure_gauge(ChainState& c, const GaugeField& f) const {
    const PlaquetteAverages pa = average_plaquette(f);
    c.series["plaquette/temporal"].push_back(pa.temporal);
    if (pa.spatial) c.series["plaquette/spatial"].push_back(*pa.spatial);
    if (cfg_.observables.link_square) c.series["link_square"].push_back(mean_link_square(f));
    for (PlaneClass pc : cfg_.observables.planes) {
      for (LoopKind kind : {LoopKind::wilson, LoopKind::ising}) {
        const auto table = measure_loops(f, pc, cfg_.observables.max_r,
                                         cfg_.observables.max_t, kind);
        for (int r = 1; r <= cfg_.observables.max_r; ++r) {
          for (int t = 1; t <= cfg_.observables.max_t; ++t) {
            const auto& v = table[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(t - 1)];
            if (v) c.series[loop_key(pc, kind, r, t)].push_back(*v);
          }
        }
      }
    }
  }

  void measure_twowall(ChainState& c, const SpinField& f) const {
    const bool avg = average_axes(cfg_);
    for (bool signs : {false, true}) {
      if (signs && !cfg_.observables.sign_correlator) continue;
      std::vector<double> sum;
      for (int axis : cfg_.observables.correlator_axes) {
        const int xmax = max_separation(*geometry_, axis);
        sum.resize(static_cast<std::size_t>(xmax + 1), 0.0);
        for (int x = 0; x <= xmax; ++x) {
          const double v = correlator_sample(f, axis, x, signs);
          c.series[correlator_key(std::to_string(axis), x, signs)].push_back(v);
          sum[static_cast<std::size_t>(x)] += v;
        }
      }
      if (avg) {
        const auto na = static_cast<double>(cfg_.observables.correlator_axes.size());
        for (std::size_t x = 0; x < sum.size(); ++x) {
          c.series[correlator_key("all", static_cast<int>(x), signs)].push_back(sum[x] / na);
        }
      }
    }
  }

  Checkpoint snapshot() const {
    Checkpoint cp;
    cp.config = to_json(cfg_);
    cp.sweeps = sweeps_;
    cp.n_therm = n_therm_;
    cp.chains = chains_;
    return cp;
  }

  RunResult collect(bool completed) const {
    RunResult r;
    r.completed = completed;
    r.sweeps = sweeps_;
    r.n_therm = n_therm_.value_or(0);
    std::size_t prop = 0, acc = 0;
    for (const ChainState& c : chains_) {
      prop += c.stats.proposed;
      acc += c.stats.accepted;
      for (const auto& [key, values] : c.series) {
        auto& s = r.series[key].samples;
        s.insert(s.end(), values.begin(), values.end());
      }
    }
    r.acceptance = prop ? static_cast<double>(acc) / static_cast<double>(prop) : 1.0;
    for (auto& [key, s] : r.series) {
      if (s.samples.size() >= 2) s.finalize();
    }
    return r;
  }

  json summary_base(const RunResult& r) const {
    return {{"config", to_json(cfg_)},
            {"sweeps", r.sweeps},
            {"n_therm", r.n_therm},
            {"acceptance", r.acceptance}};
  }

  static json estimate_json(const Series& s) {
    return {{"mean", s.estimate.mean},
            {"err", s.estimate.error},
            {"n_meas", s.samples.size()},
            {"bin_size", s.estimate.bin_size},
            {"tau_int", s.samples.size() >= 4 ? integrated_autocorrelation_time(s.samples) : 0.5}};
  }

  void write_summary(RunResult& r, json summary) const {
    json files = json::array();
    for (const auto& f : r.files) files.push_back(f.filename().string());
    summary["files"] = files;
    const auto path = out_dir_ / "summary.json";
    std::ofstream out(path);
    if (!out) throw OutputError("cannot write " + path.string());
    out << summary.dump(2) << '\n';
    r.files.push_back(path);
  }

  void write_gauge_outputs(RunResult& r) const {
    const json echo = echo_json(cfg_);
    const std::string beta = format_double(cfg_.model.beta);
    const std::string omega = format_double(cfg_.model.omega);
    const std::string beta_s = format_double(cfg_.model.beta_spatial);

    const auto loops_path = out_dir_ / "loops.csv";
    CsvWriter loops(loops_path, echo,
                    {"beta", "omega", "beta_spatial", "plane", "R", "T", "loop_kind",
                     "mean", "err", "n_meas", "bin_size"});
    const auto creutz_path = out_dir_ / "creutz.csv";
    CsvWriter creutz(creutz_path, echo,
                     {"beta", "omega", "beta_spatial", "plane", "R", "T", "loop_kind",
                      "chi", "err", "status"});
    json fits = json::array();
    for (PlaneClass pc : cfg_.observables.planes) {
      for (LoopKind kind : {LoopKind::wilson, LoopKind::ising}) {
        const LoopTable table = loop_table(r, pc, kind);
        for (const auto& [rt, s] : table.entries) {
          loops.row({beta, omega, beta_s, std::string(to_string(pc)), std::to_string(rt.first),
                     std::to_string(rt.second), std::string(to_string(kind)),
                     format_double(s.estimate.mean), format_double(s.estimate.error),
                     std::to_string(s.samples.size()), std::to_string(s.estimate.bin_size)});
        }
        for (const auto& [rt, s] : table.entries) {
          const auto [rr, tt] = rt;
          bool have = true;
          for (auto [a, b] : {std::pair{rr - 1, tt - 1}, std::pair{rr - 1, tt}, std::pair{rr, tt - 1}}) {
            if (a > 0 && b > 0 && !table.contains(a, b)) have = false;
          }
          if (!have) continue;
          std::vector<std::string> row{beta, omega, beta_s, std::string(to_string(pc)),
                                       std::to_string(rr), std::to_string(tt),
                                       std::string(to_string(kind))};
          try {
            const EstimateWithError chi = creutz_ratio(table, rr, tt);
            row.insert(row.end(), {format_double(chi.mean), format_double(chi.error), "ok"});
          } catch (const NoisyLoopError&) {
            row.insert(row.end(), {"nan", "nan", "noisy"});
          }
          creutz.row(row);
        }
        json fit = {{"plane", to_string(pc)}, {"loop_kind", to_string(kind)}};
        try {
          const AreaLawFit a = fit_area_law(table);
          fit["sigma"] = {a.sigma.mean, a.sigma.error};
          fit["perimeter"] = {a.perimeter.mean, a.perimeter.error};
          fit["constant"] = {a.constant.mean, a.constant.error};
          fit["n_points"] = a.n_points;
        } catch (const std::exception& e) {
          fit["error"] = e.what();
        }
        fits.push_back(fit);
      }
    }
    loops.close();
    creutz.close();
    r.files.push_back(loops_path);
    r.files.push_back(creutz_path);

    const auto plaq_path = out_dir_ / "plaquette.csv";
    CsvWriter plaq(plaq_path, echo,
                   {"beta", "omega", "beta_spatial", "observable", "mean", "err", "n_meas",
                    "bin_size"});
    json obs = json::object();
    for (const char* key : {"plaquette/temporal", "plaquette/spatial", "link_square"}) {
      auto it = r.series.find(key);
      if (it == r.series.end()) continue;
      const Series& s = it->second;
      plaq.row({beta, omega, beta_s, key, format_double(s.estimate.mean),
                format_double(s.estimate.error), std::to_string(s.samples.size()),
                std::to_string(s.estimate.bin_size)});
      obs[key] = estimate_json(s);
    }
    plaq.close();
    r.files.push_back(plaq_path);

    json summary = summary_base(r);
    summary["observables"] = obs;
    summary["area_law_fits"] = fits;
    write_summary(r, summary);
  }

  void write_twowall_outputs(RunResult& r) const {
    const json echo = echo_json(cfg_);
    const std::string k = std::to_string(cfg_.model.dimension);
    const std::string beta = format_double(cfg_.model.beta);
    const std::string omega = format_double(cfg_.model.omega);
    std::vector<std::string> axes;
    for (int a : cfg_.observables.correlator_axes) axes.push_back(std::to_string(a));
    if (average_axes(cfg_)) axes.push_back("all");

    json meff_json = json::array();
    const auto meff_path = out_dir_ / "effective_mass.csv";
    CsvWriter meff(meff_path, echo,
                   {"k", "beta", "omega", "axis", "x", "kind", "m_eff", "err"});
    for (bool signs : {false, true}) {
      if (signs && !cfg_.observables.sign_correlator) continue;
      const auto path = out_dir_ / (signs ? "sign_correlators.csv" : "correlators.csv");
      CsvWriter corr(path, echo, {"k", "beta", "omega", "axis", "x", "mean", "err", "n_meas"});
      for (const std::string& axis : axes) {
        const std::vector<Series> series = correlator_series(r, axis, signs);
        for (std::size_t x = 0; x < series.size(); ++x) {
          const Series& s = series[x];
          corr.row({k, beta, omega, axis, std::to_string(x), format_double(s.estimate.mean),
                    format_double(s.estimate.error), std::to_string(s.samples.size())});
        }
        std::size_t bin = 1;
        for (const Series& s : series) bin = std::max(bin, s.estimate.bin_size);
        const int a = axis == "all" ? cfg_.observables.correlator_axes.front() : std::stoi(axis);
        const std::vector<EstimateWithError> m = effective_mass_jackknife(
            series, bin, cfg_.model.boundary, cfg_.model.extents[static_cast<std::size_t>(a)]);
        for (std::size_t x = 0; x < m.size(); ++x) {
          meff.row({k, beta, omega, axis, std::to_string(x), signs ? "sign" : "field",
                    format_double(m[x].mean), format_double(m[x].error)});
        }
      }
      corr.close();
      r.files.push_back(path);
    }
    meff.close();
    r.files.push_back(meff_path);
    write_summary(r, summary_base(r));
  }

  RunConfig cfg_;
  std::filesystem::path out_dir_;
  GeometryPtr geometry_;
  std::vector<ChainState> chains_;
  std::uint64_t sweeps_ = 0;
  std::optional<std::uint64_t> n_therm_;
};

}  // namespace

RunResult run(const RunConfig& config, const RunOptions& options) {
  Engine e(config, config.output.dir);
  e.fresh();
  return e.drive(options);
}

RunResult resume(const std::filesystem::path& checkpoint,
                 const std::optional<RunConfig>& expected,
                 const RunOptions& options,
                 const std::optional<std::filesystem::path>& out_dir) {
  Checkpoint cp = read_checkpoint(checkpoint);
  RunConfig cfg;
  try {
    cfg = parse_config(cp.config);
  } catch (const ConfigError& e) {
    throw ResumeError(std::string("checkpoint config is invalid: ") + e.what());
  }
  if (expected && canonical_dump(*expected) != canonical_dump(cfg)) {
    throw ResumeError("config does not match the checkpoint's config echo; refusing to resume "
                      "(checkpoint: " + canonical_dump(cfg) + ")");
  }
  const std::filesystem::path dir =
      out_dir ? *out_dir : checkpoint.parent_path().empty() ? std::filesystem::path(".")
                                                           : checkpoint.parent_path();
  Engine e(cfg, dir);
  e.load(std::move(cp));
  return e.drive(options);
}

std::vector<std::vector<double>> checkpoint_fields(const std::filesystem::path& checkpoint) {
  Checkpoint cp = read_checkpoint(checkpoint);
  std::vector<std::vector<double>> out;
  for (auto& c : cp.chains) out.push_back(std::move(c.field));
  return out;
}

std::vector<BoundsRow> run_bounds(std::span<const double> betas,
                                  std::span<const double> omegas,
                                  std::span<const int> dims) {
  if (betas.empty() || omegas.empty() || dims.empty()) {
    throw std::invalid_argument("bounds grid is empty");
  }
  std::vector<BoundsRow> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int d : dims) {
    for (double omega : omegas) {
      for (double beta : betas) {
        BoundsRow row{beta, omega, d, nan, nan, "invalid-input"};
        if (beta > 0.0 && std::isfinite(beta) && omega >= 0.0 && std::isfinite(omega) && d >= 2) {
          const bounds::BoundResult b = bounds::sigma_tilde(beta, omega, d);
          row.s_tilde = b.s_tilde;
          row.sigma_tilde = b.rate.value_or(nan);
          row.valid = b.valid ? "true" : "false";
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<std::string> bounds_columns() {
  return {"beta", "omega", "d", "s_tilde", "sigma_tilde", "valid"};
}

std::vector<std::string> bounds_cells(const BoundsRow& row) {
  return {format_double(row.beta), format_double(row.omega), std::to_string(row.d),
          format_double(row.s_tilde), format_double(row.sigma_tilde), row.valid};
}

}  // namespace z2lab
