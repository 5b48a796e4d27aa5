#include "z2lab/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace z2lab {

std::vector<double> bin_means(std::span<const double> samples,
                              std::size_t bin_size) {
  if (bin_size == 0) throw StatisticsError("bin size must be positive");
  const std::size_t n_bins = samples.size() / bin_size;
  std::vector<double> out(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) {
    double s = 0.0;
    for (std::size_t i = 0; i < bin_size; ++i) s += samples[b * bin_size + i];
    out[b] = s / static_cast<double>(bin_size);
  }
  return out;
}

EstimateWithError binned_estimate(std::span<const double> samples,
                                  std::size_t bin_size) {
  if (bin_size == 0 || samples.size() < 2 * bin_size) {
    throw StatisticsError("binned estimate needs at least two full bins (" +
                          std::to_string(samples.size()) + " samples, bin size " +
                          std::to_string(bin_size) + ")");
  }
  const std::vector<double> bins = bin_means(samples, bin_size);
  const double nb = static_cast<double>(bins.size());
  const double bin_mean = std::accumulate(bins.begin(), bins.end(), 0.0) / nb;
  double var = 0.0;
  for (double b : bins) var += (b - bin_mean) * (b - bin_mean);
  var /= (nb - 1.0);

  EstimateWithError e;
  e.mean = std::accumulate(samples.begin(), samples.end(), 0.0) /
           static_cast<double>(samples.size());
  e.error = std::sqrt(var / nb);
  e.n_samples = samples.size();
  e.bin_size = bin_size;
  return e;
}

EstimateWithError auto_binned_estimate(std::span<const double> samples,
                                       std::size_t min_bins) {
  min_bins = std::max<std::size_t>(min_bins, 2);
  if (samples.size() < 2) {
    throw StatisticsError("automatic binning needs at least two samples");
  }
  EstimateWithError current = binned_estimate(samples, 1);
  std::size_t b = 1;
  while (samples.size() / (2 * b) >= min_bins) {
    const EstimateWithError next = binned_estimate(samples, 2 * b);
    b *= 2;
    if (next.error > 1.05 * current.error) {
      current = next;
      continue;
    }
    if (next.error > current.error) current = next;
    break;
  }
  return current;
}

EstimateWithError jackknife(
    std::span<const std::span<const double>> series, std::size_t bin_size,
    const std::function<double(std::span<const double>)>& f) {
  if (series.empty()) throw StatisticsError("jackknife needs at least one series");
  std::vector<std::vector<double>> bins;
  for (const auto& s : series) bins.push_back(bin_means(s, bin_size));
  const std::size_t nb = bins.front().size();
  for (const auto& b : bins) {
    if (b.size() != nb) throw StatisticsError("jackknife series lengths differ");
  }
  if (nb < 2) throw StatisticsError("jackknife needs at least two bins");

  const std::size_t k = bins.size();
  std::vector<double> totals(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    totals[i] = std::accumulate(bins[i].begin(), bins[i].end(), 0.0);
  }
  std::vector<double> means(k);
  for (std::size_t i = 0; i < k; ++i) means[i] = totals[i] / static_cast<double>(nb);

  EstimateWithError e;
  e.mean = f(means);
  e.n_samples = nb * bin_size;
  e.bin_size = bin_size;

  std::vector<double> loo(nb);
  std::vector<double> args(k);
  bool finite = std::isfinite(e.mean);
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t i = 0; i < k; ++i) {
      args[i] = (totals[i] - bins[i][b]) / static_cast<double>(nb - 1);
    }
    loo[b] = f(args);
    finite = finite && std::isfinite(loo[b]);
  }
  if (!finite) {
    e.error = std::numeric_limits<double>::infinity();
    return e;
  }
  const double avg = std::accumulate(loo.begin(), loo.end(), 0.0) / static_cast<double>(nb);
  double var = 0.0;
  for (double v : loo) var += (v - avg) * (v - avg);
  e.error = std::sqrt(var * static_cast<double>(nb - 1) / static_cast<double>(nb));
  return e;
}

double integrated_autocorrelation_time(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 4) return 0.5;
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) /
                      static_cast<double>(n);
  auto autocov = [&](std::size_t t) {
    double s = 0.0;
    for (std::size_t i = 0; i + t < n; ++i) {
      s += (samples[i] - mean) * (samples[i + t] - mean);
    }
    return s / static_cast<double>(n - t);
  };
  const double c0 = autocov(0);
  if (c0 <= 0.0) return 0.5;
  double tau = 0.5;
  for (std::size_t t = 1; t < n / 2; ++t) {
    tau += autocov(t) / c0;
    if (static_cast<double>(t) >= 6.0 * tau) break;
  }
  return std::max(tau, 0.5);
}

}  // namespace z2lab
