#pragma once

#include <vector>

namespace gpm {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [a, b]. Nodes by Newton iteration
/// on P_n started from the Chebyshev guesses.
QuadratureRule gauss_legendre(int n, double a, double b);

}  // namespace gpm
