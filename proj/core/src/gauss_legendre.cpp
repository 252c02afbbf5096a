#include "lscub/gauss_legendre.hpp"

#include <cmath>
#include <numbers>

#include "lscub/errors.hpp"

namespace lscub {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = (n == 0) ? 1.0 : p1;
  dp = (n == 0) ? 0.0 : n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

Rule1D gauss_legendre_1d(int n) {
  if (n < 1) throw config_error("gauss_legendre_1d needs n >= 1");
  Rule1D rule;
  rule.nodes = Vector::Zero(n);
  rule.weights = Vector::Zero(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // i-th root counted from +1, Chebyshev-type initial guess
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    if (n % 2 == 1 && i == half - 1) x = 0.0;
    double p = 0.0, dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      legendre(n, x, p, dp);
      const double dx = -p / dp;
      x += dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre(n, x, p, dp);
    if (n % 2 == 1 && i == half - 1) x = 0.0;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }
  return rule;
}

}  // namespace lscub
