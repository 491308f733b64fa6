#pragma once

#include <vector>

namespace shdtn {

struct GaussRule {
  std::vector<double> points;   // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre rule with n points, exact for polynomials of degree 2n-1.
const GaussRule& gauss_legendre(int n);

}  // namespace shdtn
