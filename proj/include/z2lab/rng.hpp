#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace z2lab {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t& state);

/// Random stream for one Markov chain.
///
/// All variates are built from raw 64-bit engine output with fixed
/// conversions, so a stream is fully described by its engine state and the
/// state round-trips through `state()` / `set_state()`.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  /// Stream `stream` of the family rooted at `seed`. Seeds for distinct
  /// streams go through SplitMix64 and a seed_seq, so nearby (seed, stream)
  /// pairs give unrelated engine states.
  static Rng for_stream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next() { return engine_(); }
  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller, no cached second variate).
  double normal();

  std::string state() const;
  void set_state(const std::string& s);

  friend bool operator==(const Rng& a, const Rng& b) {
    return a.engine_ == b.engine_;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace z2lab
