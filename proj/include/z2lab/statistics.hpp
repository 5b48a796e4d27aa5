#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace z2lab {

struct EstimateWithError {
  double mean = 0.0;
  double error = 0.0;
  std::size_t n_samples = 0;
  std::size_t bin_size = 1;
};

class StatisticsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Means of consecutive bins of `bin_size` samples; a trailing partial bin
/// is dropped.
std::vector<double> bin_means(std::span<const double> samples,
                              std::size_t bin_size);

/// Mean of all samples, error = sample std of bin means / sqrt(n_bins).
/// Requires n_samples >= 2 * bin_size.
EstimateWithError binned_estimate(std::span<const double> samples,
                                  std::size_t bin_size);

/// Doubles the bin size while the error still grows by more than 5% per
/// doubling, keeping at least `min_bins` bins.
EstimateWithError auto_binned_estimate(std::span<const double> samples,
                                       std::size_t min_bins = 16);

/// Delete-one-bin jackknife of a function of several series' means. All
/// series are binned with the same bin size. A non-finite leave-one-out
/// value gives an infinite error.
EstimateWithError jackknife(
    std::span<const std::span<const double>> series, std::size_t bin_size,
    const std::function<double(std::span<const double>)>& f);

/// Integrated autocorrelation time with Sokal's automatic window (c = 6);
/// tau = 1/2 for uncorrelated data.
double integrated_autocorrelation_time(std::span<const double> samples);

}  // namespace z2lab
