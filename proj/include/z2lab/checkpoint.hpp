#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "z2lab/lattice.hpp"
#include "z2lab/model.hpp"
#include "z2lab/rng.hpp"

namespace z2lab {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kCheckpointVersion = 1;

struct ChainState {
  Rng rng;
  /// Link values (gauge) or site values (two-wall).
  std::vector<double> field;
  /// Thermalization monitor, one entry per sweep until n_therm is decided.
  std::vector<double> therm_history;
  /// Measurement series by observable key.
  std::map<std::string, std::vector<double>> series;
  SweepStats stats;
};

struct Checkpoint {
  /// Full config (to_json), including the output section.
  nlohmann::json config;
  std::uint64_t sweeps = 0;
  std::optional<std::uint64_t> n_therm;
  std::vector<ChainState> chains;
};

/// Two lines: a header {"format_version", "checksum"} and the payload JSON.
/// The checksum is FNV-1a 64 over the payload bytes. Doubles are stored as
/// their IEEE bit patterns, so a round trip is exact. Written through a
/// temporary file and renamed into place.
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp,
                      const LatticeGeometry& geometry);
Checkpoint read_checkpoint(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes);
std::string encode_doubles(const std::vector<double>& v);
std::vector<double> decode_doubles(std::string_view hex);

}  // namespace z2lab
