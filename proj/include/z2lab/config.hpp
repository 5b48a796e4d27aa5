#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "z2lab/lattice.hpp"
#include "z2lab/model.hpp"
#include "z2lab/observables.hpp"
#include "z2lab/two_wall.hpp"

namespace z2lab {

/// Invalid configuration; the message starts with the dotted field path.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class RunKind { gauge, twowall };
std::string_view to_string(RunKind k);

struct ModelSection {
  int dimension = 2;
  std::vector<int> extents;
  Boundary boundary = Boundary::periodic;
  double beta = 0.0;
  double omega = 0.0;
  /// Gauge runs only; defaults to beta.
  double beta_spatial = 0.0;
  Measure measure = HardInterval{};
};

struct SamplerSection {
  SweepScheme scheme = SweepScheme::heatbath();
  /// nullopt: max(1000, 10 tau_int of the plaquette), decided at sweep 1000.
  std::optional<std::uint64_t> n_therm;
  std::uint64_t n_measure = 1000;
  std::uint64_t stride = 1;
};

struct ObservablesSection {
  int max_r = 2;
  int max_t = 2;
  std::vector<PlaneClass> planes{PlaneClass::temporal};
  bool link_square = true;
  /// Two-wall runs: axes of the correlator; an "all" row averages them
  /// when more than one is listed.
  std::vector<int> correlator_axes{0};
  bool sign_correlator = true;
};

struct OutputSection {
  std::filesystem::path dir = "out";
  /// A checkpoint holds every measurement so far, so each write costs
  /// O(samples); keep this coarse for long runs.
  std::uint64_t checkpoint_every = 10000;
};

struct RunConfig {
  RunKind kind = RunKind::gauge;
  ModelSection model;
  SamplerSection sampler;
  ObservablesSection observables;
  std::uint64_t seed = 0;
  int chains = 1;
  OutputSection output;

  ModelParams gauge_params() const;
  WallParams wall_params() const;
};

inline constexpr std::uint64_t kThermFloor = 1000;

/// Parses and validates. Unknown keys are rejected.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Every field, including defaults, in a fixed key order.
nlohmann::json to_json(const RunConfig& c);
/// to_json without the output section: the part that determines the
/// emitted numbers. Echoed into every output file and compared on resume.
nlohmann::json echo_json(const RunConfig& c);
std::string canonical_dump(const RunConfig& c);

}  // namespace z2lab
