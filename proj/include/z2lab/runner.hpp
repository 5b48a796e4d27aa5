#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "z2lab/config.hpp"
#include "z2lab/observables.hpp"

namespace z2lab {

struct RunOptions {
  /// Stop (with a checkpoint) once this many sweeps are done; simulates an
  /// interrupted run.
  std::optional<std::uint64_t> stop_after;
  /// Threads used across chains; 0 means one per chain up to the hardware
  /// concurrency. Results do not depend on it.
  unsigned workers = 0;
  /// Progress messages; null for silence.
  std::ostream* log = nullptr;
  /// Write CSV/JSON results on completion.
  bool write_outputs = true;
};

struct RunResult {
  bool completed = false;
  std::uint64_t sweeps = 0;
  std::uint64_t n_therm = 0;
  double acceptance = 1.0;
  /// Series keyed as in the checkpoint, chains concatenated in chain order,
  /// finalized with automatic binning.
  std::map<std::string, Series> series;
  std::vector<std::filesystem::path> files;
  std::filesystem::path checkpoint;
};

/// Series keys.
std::string loop_key(PlaneClass planes, LoopKind kind, int r, int t);
std::string correlator_key(const std::string& axis, int x, bool signs);

/// LoopTable view of the loop series of a gauge run.
LoopTable loop_table(const RunResult& result, PlaneClass planes, LoopKind kind);
/// Correlator series x = 0.. for one axis ("0", "1", ..., or "all").
std::vector<Series> correlator_series(const RunResult& result,
                                      const std::string& axis, bool signs);

/// Fresh run from a hot start into config.output.dir.
RunResult run(const RunConfig& config, const RunOptions& options = {});

/// Continues from a checkpoint. If `expected` is given, its echo must match
/// the checkpoint's config echo. The output directory is the checkpoint's
/// unless `out_dir` is given.
RunResult resume(const std::filesystem::path& checkpoint,
                 const std::optional<RunConfig>& expected = std::nullopt,
                 const RunOptions& options = {},
                 const std::optional<std::filesystem::path>& out_dir = std::nullopt);

class ResumeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Field values (links or sites) of every chain in a checkpoint.
std::vector<std::vector<double>> checkpoint_fields(const std::filesystem::path& checkpoint);

struct BoundsRow {
  double beta;
  double omega;
  int d;
  double s_tilde;      // with k = d - 1
  double sigma_tilde;  // NaN when not positive
  std::string valid;   // "true", "false" or "invalid-input"
};

/// Every (beta, omega, d) combination of the grid, in nested order.
std::vector<BoundsRow> run_bounds(std::span<const double> betas,
                                  std::span<const double> omegas,
                                  std::span<const int> dims);
std::vector<std::string> bounds_columns();
std::vector<std::string> bounds_cells(const BoundsRow& row);

}  // namespace z2lab
