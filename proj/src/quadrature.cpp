#include "z2lab/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

#include <boost/math/special_functions/legendre.hpp>

namespace z2lab {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs n >= 1");
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  // Nonnegative zeros in ascending order; mirror them for the full rule.
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
  std::vector<std::pair<double, double>> half;
  for (double x : zeros) {
    const double dp = boost::math::legendre_p_prime(n, x);
    half.emplace_back(x, 2.0 / ((1.0 - x * x) * dp * dp));
  }
  QuadratureRule rule;
  for (auto it = half.rbegin(); it != half.rend(); ++it) {
    if (it->first == 0.0) continue;
    rule.nodes.push_back(-it->first);
    rule.weights.push_back(it->second);
  }
  for (const auto& [x, w] : half) {
    rule.nodes.push_back(x);
    rule.weights.push_back(w);
  }
  if (static_cast<int>(rule.nodes.size()) != n) {
    throw std::logic_error("Gauss-Legendre node count mismatch");
  }
  cache.emplace(n, rule);
  return rule;
}

}  // namespace z2lab
