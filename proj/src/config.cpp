#include "z2lab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace z2lab {

using nlohmann::json;

std::string_view to_string(RunKind k) {
  return k == RunKind::gauge ? "gauge" : "twowall";
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw ConfigError(field + ": " + why);
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> known) {
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      fail(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

const json& section(const json& root, const char* name) {
  static const json empty = json::object();
  if (!root.contains(name)) return empty;
  const json& s = root.at(name);
  if (!s.is_object()) fail(name, "must be an object");
  return s;
}

double get_double(const json& obj, const std::string& path, const char* key,
                  std::optional<double> fallback) {
  if (!obj.contains(key)) {
    if (!fallback) fail(path + "." + key, "is required");
    return *fallback;
  }
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(path + "." + key, "must be finite");
  return d;
}

std::int64_t get_int(const json& obj, const std::string& path, const char* key,
                     std::optional<std::int64_t> fallback) {
  if (!obj.contains(key)) {
    if (!fallback) fail(path + "." + key, "is required");
    return *fallback;
  }
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "must be an integer");
  return v.get<std::int64_t>();
}

bool get_bool(const json& obj, const std::string& path, const char* key,
              bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) fail(path + "." + key, "must be true or false");
  return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& path,
                       const char* key, std::optional<std::string> fallback) {
  if (!obj.contains(key)) {
    if (!fallback) fail(path + "." + key, "is required");
    return *fallback;
  }
  const json& v = obj.at(key);
  if (!v.is_string()) fail(path + "." + key, "must be a string");
  return v.get<std::string>();
}

std::uint64_t get_count(const json& obj, const std::string& path,
                        const char* key, std::uint64_t fallback,
                        std::uint64_t min) {
  const std::int64_t v = get_int(obj, path, key, static_cast<std::int64_t>(fallback));
  if (v < static_cast<std::int64_t>(min)) {
    fail(path + "." + key, "must be >= " + std::to_string(min) + " (got " + std::to_string(v) + ")");
  }
  return static_cast<std::uint64_t>(v);
}

ModelSection parse_model(const json& m, RunKind kind) {
  const std::string p = "model";
  reject_unknown(m, p, {"dimension", "extents", "boundary", "beta", "omega",
                        "beta_spatial", "measure", "measure_p"});
  ModelSection s;
  s.dimension = static_cast<int>(get_int(m, p, "dimension", std::nullopt));
  const int min_dim = kind == RunKind::gauge ? 2 : 1;
  if (s.dimension < min_dim) {
    fail("model.dimension", "must be >= " + std::to_string(min_dim) +
                                " (got " + std::to_string(s.dimension) + ")");
  }
  if (!m.contains("extents")) fail("model.extents", "is required");
  const json& ext = m.at("extents");
  if (ext.is_number_integer()) {
    s.extents.assign(static_cast<std::size_t>(s.dimension), ext.get<int>());
  } else if (ext.is_array()) {
    for (const json& e : ext) {
      if (!e.is_number_integer()) fail("model.extents", "entries must be integers");
      s.extents.push_back(e.get<int>());
    }
  } else {
    fail("model.extents", "must be an integer or a list of integers");
  }
  if (static_cast<int>(s.extents.size()) != s.dimension) {
    fail("model.extents", "has " + std::to_string(s.extents.size()) +
                              " entries for dimension " + std::to_string(s.dimension));
  }
  for (int e : s.extents) {
    if (e < 2) fail("model.extents", "every extent must be >= 2 (got " + std::to_string(e) + ")");
  }
  const std::string b = get_string(m, p, "boundary", std::string("periodic"));
  try {
    s.boundary = boundary_from_string(b);
  } catch (const std::exception&) {
    fail("model.boundary", "must be \"periodic\" or \"open\" (got \"" + b + "\")");
  }
  s.beta = get_double(m, p, "beta", std::nullopt);
  s.omega = get_double(m, p, "omega", std::nullopt);
  if (kind == RunKind::gauge) {
    s.beta_spatial = get_double(m, p, "beta_spatial", s.beta);
  } else if (m.contains("beta_spatial")) {
    fail("model.beta_spatial", "applies to gauge runs only");
  }
  const std::string meas = get_string(m, p, "measure", std::string("hard_interval"));
  if (meas == "hard_interval") {
    if (m.contains("measure_p")) fail("model.measure_p", "applies to the smooth measure only");
    s.measure = HardInterval{};
  } else if (meas == "smooth") {
    const std::int64_t pw = get_int(m, p, "measure_p", 1);
    if (pw < 1) fail("model.measure_p", "must be >= 1");
    s.measure = SmoothMeasure{static_cast<int>(pw)};
  } else {
    fail("model.measure", "must be \"hard_interval\" or \"smooth\" (got \"" + meas + "\")");
  }
  return s;
}

SamplerSection parse_sampler(const json& m) {
  const std::string p = "sampler";
  reject_unknown(m, p, {"scheme", "width", "n_therm", "n_measure", "stride"});
  SamplerSection s;
  const std::string scheme = get_string(m, p, "scheme", std::string("heatbath"));
  if (scheme == "heatbath") {
    s.scheme = SweepScheme::heatbath();
    if (m.contains("width")) fail("sampler.width", "applies to the metropolis scheme only");
  } else if (scheme == "metropolis") {
    const double w = get_double(m, p, "width", 1.0);
    if (!(w > 0.0 && w <= 2.0)) fail("sampler.width", "must lie in (0, 2]");
    s.scheme = SweepScheme::metropolis(w);
  } else {
    fail("sampler.scheme", "must be \"heatbath\" or \"metropolis\" (got \"" + scheme + "\")");
  }
  if (m.contains("n_therm")) {
    const json& v = m.at("n_therm");
    if (v.is_string()) {
      if (v.get<std::string>() != "auto") fail("sampler.n_therm", "must be \"auto\" or an integer >= 0");
    } else {
      s.n_therm = get_count(m, p, "n_therm", 0, 0);
    }
  }
  s.n_measure = get_count(m, p, "n_measure", s.n_measure, 1);
  s.stride = get_count(m, p, "stride", s.stride, 1);
  return s;
}

ObservablesSection parse_observables(const json& m, const ModelSection& model) {
  const std::string p = "observables";
  reject_unknown(m, p, {"max_r", "max_t", "planes", "link_square", "correlator_axes",
                        "sign_correlator"});
  ObservablesSection s;
  s.max_r = static_cast<int>(get_int(m, p, "max_r", s.max_r));
  s.max_t = static_cast<int>(get_int(m, p, "max_t", s.max_t));
  if (s.max_r < 1) fail("observables.max_r", "must be >= 1");
  if (s.max_t < 1) fail("observables.max_t", "must be >= 1");
  if (m.contains("planes")) {
    const json& v = m.at("planes");
    if (!v.is_array() || v.empty()) fail("observables.planes", "must be a nonempty list");
    s.planes.clear();
    for (const json& e : v) {
      if (!e.is_string()) fail("observables.planes", "entries must be strings");
      try {
        s.planes.push_back(plane_class_from_string(e.get<std::string>()));
      } catch (const std::exception&) {
        fail("observables.planes", "unknown plane class \"" + e.get<std::string>() +
                                       "\" (temporal, spatial, all)");
      }
    }
  }
  for (PlaneClass pc : s.planes) {
    if (pc == PlaneClass::spatial && model.dimension < 3) {
      fail("observables.planes", "spatial planes need dimension >= 3");
    }
  }
  s.link_square = get_bool(m, p, "link_square", s.link_square);
  if (m.contains("correlator_axes")) {
    const json& v = m.at("correlator_axes");
    if (!v.is_array() || v.empty()) fail("observables.correlator_axes", "must be a nonempty list");
    s.correlator_axes.clear();
    for (const json& e : v) {
      if (!e.is_number_integer()) fail("observables.correlator_axes", "entries must be integers");
      const int a = e.get<int>();
      if (a < 0 || a >= model.dimension) {
        fail("observables.correlator_axes", "axis " + std::to_string(a) + " outside 0.." +
                                                std::to_string(model.dimension - 1));
      }
      s.correlator_axes.push_back(a);
    }
  }
  s.sign_correlator = get_bool(m, p, "sign_correlator", s.sign_correlator);
  return s;
}

}  // namespace

ModelParams RunConfig::gauge_params() const {
  return {model.beta, model.omega, model.beta_spatial, model.measure};
}

WallParams RunConfig::wall_params() const {
  return {model.beta, model.omega, model.measure};
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(j, "", {"kind", "model", "sampler", "observables", "seed", "chains", "output"});
  RunConfig c;
  const std::string kind = get_string(j, "config", "kind", std::string("gauge"));
  if (kind == "gauge") {
    c.kind = RunKind::gauge;
  } else if (kind == "twowall") {
    c.kind = RunKind::twowall;
  } else {
    fail("kind", "must be \"gauge\" or \"twowall\" (got \"" + kind + "\")");
  }
  if (!j.contains("model")) fail("model", "is required");
  c.model = parse_model(section(j, "model"), c.kind);
  c.sampler = parse_sampler(section(j, "sampler"));
  c.observables = parse_observables(section(j, "observables"), c.model);
  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (s.is_number_unsigned()) {
      c.seed = s.get<std::uint64_t>();
    } else if (s.is_number_integer() && s.get<std::int64_t>() >= 0) {
      c.seed = static_cast<std::uint64_t>(s.get<std::int64_t>());
    } else {
      fail("seed", "must be a nonnegative 64-bit integer");
    }
  }
  c.chains = static_cast<int>(get_int(j, "config", "chains", 1));
  if (c.chains < 1) fail("chains", "must be >= 1");
  const json& out = section(j, "output");
  reject_unknown(out, "output", {"dir", "checkpoint_every"});
  c.output.dir = get_string(out, "output", "dir", std::string("out"));
  c.output.checkpoint_every = get_count(out, "output", "checkpoint_every", c.output.checkpoint_every, 1);

  try {
    if (c.kind == RunKind::gauge) {
      c.gauge_params().validate();
    } else {
      c.wall_params().validate();
    }
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  if (c.kind == RunKind::gauge && !std::holds_alternative<HardInterval>(c.model.measure)) {
    fail("model.measure", "gauge runs support hard_interval only");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json echo_json(const RunConfig& c) {
  json model = {
      {"dimension", c.model.dimension},
      {"extents", c.model.extents},
      {"boundary", std::string(to_string(c.model.boundary))},
      {"beta", c.model.beta},
      {"omega", c.model.omega},
  };
  if (c.kind == RunKind::gauge) model["beta_spatial"] = c.model.beta_spatial;
  if (const auto* s = std::get_if<SmoothMeasure>(&c.model.measure)) {
    model["measure"] = "smooth";
    model["measure_p"] = s->p;
  } else {
    model["measure"] = "hard_interval";
  }
  json sampler = {
      {"scheme", c.sampler.scheme.kind == SweepScheme::Kind::heatbath ? "heatbath" : "metropolis"},
      {"n_measure", c.sampler.n_measure},
      {"stride", c.sampler.stride},
  };
  if (c.sampler.scheme.kind == SweepScheme::Kind::metropolis) sampler["width"] = c.sampler.scheme.width;
  if (c.sampler.n_therm) {
    sampler["n_therm"] = *c.sampler.n_therm;
  } else {
    sampler["n_therm"] = "auto";
  }
  json planes = json::array();
  for (PlaneClass pc : c.observables.planes) planes.push_back(std::string(to_string(pc)));
  json obs;
  if (c.kind == RunKind::gauge) {
    obs = {{"max_r", c.observables.max_r},
           {"max_t", c.observables.max_t},
           {"planes", planes},
           {"link_square", c.observables.link_square}};
  } else {
    obs = {{"correlator_axes", c.observables.correlator_axes},
           {"sign_correlator", c.observables.sign_correlator}};
  }
  return {{"kind", std::string(to_string(c.kind))},
          {"model", model},
          {"sampler", sampler},
          {"observables", obs},
          {"seed", c.seed},
          {"chains", c.chains}};
}

json to_json(const RunConfig& c) {
  json j = echo_json(c);
  j["output"] = {{"dir", c.output.dir.string()},
                 {"checkpoint_every", c.output.checkpoint_every}};
  return j;
}

std::string canonical_dump(const RunConfig& c) { return echo_json(c).dump(); }

}  // namespace z2lab
