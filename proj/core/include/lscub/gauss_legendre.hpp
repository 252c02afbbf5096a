#pragma once

#include "lscub/types.hpp"

namespace lscub {

struct Rule1D {
  Vector nodes;
  Vector weights;
};

// n-point Gauss-Legendre rule on [-1,1]: nodes are the Legendre roots found by
// Newton iteration from Chebyshev-type initial guesses, weights are positive
// and symmetric, and the rule is exact through degree 2n-1.
Rule1D gauss_legendre_1d(int n);

}  // namespace lscub
