#pragma once

#include <vector>

namespace z2lab {

struct QuadratureRule {
  std::vector<double> nodes;    // ascending, exactly antisymmetric
  std::vector<double> weights;  // symmetric, sum to 2
};

/// n-point Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree
/// 2n - 1.
QuadratureRule gauss_legendre(int n);

}  // namespace z2lab
