#pragma once

#include "lscub/lscf.hpp"

namespace lscub {

struct SubsampleMethod {
  enum class Kind { Steinitz, Nnls };

  Kind kind = Kind::Steinitz;
  double zero_weight_tol = 1e-13;    // relative to the largest updated weight
  double nnls_gradient_tol = 1e-10;  // relative to ||Phi^T m||_inf
  long max_iterations = 0;           // nnls; 0 means 10 K
};

// A unit-norm element of null(Phi) (the last column of an orthogonal kernel
// basis from a Householder factorization of Phi^T), sign-flipped so at least
// one entry is positive. Requires N > K.
Vector kernel_vector(const Matrix& phi);

struct SubsampleInfo {
  long passes = 0;
  double residual_before = 0.0;
  double residual_after = 0.0;
  bool converged = true;  // nnls only
};

// Steinitz exchange: while N > K, take a kernel vector a, sigma = max_n a_n/w_n,
// update w_n <- w_n - a_n/sigma, and drop every weight at or below
// zero_weight_tol times the largest (ties are removed together). Preserves
// Phi w exactly in exact arithmetic; the output is interpolatory with N <= K
// and nonnegative weights.
CubatureRule steinitz_reduce(const CubatureRule& rule, const Basis& basis, const Vector& m,
                             const SubsampleMethod& method = {}, SubsampleInfo* info = nullptr);

struct NnlsResult {
  Vector weights;
  double residual = 0.0;
  long iterations = 0;
  bool converged = true;
};

// Lawson-Hanson active set for min ||Phi w - m|| s.t. w >= 0. Support size
// stays at or below K; a hit iteration cap returns the best iterate flagged
// non-converged. The residual is reported, never hidden.
NnlsResult nnls_weights(const Matrix& phi, const Vector& m, const SubsampleMethod& method = {});

// Dispatch on method.kind; nnls keeps only the support points of the rule.
CubatureRule subsample(const CubatureRule& rule, const Basis& basis, const Vector& m,
                       const SubsampleMethod& method = {}, SubsampleInfo* info = nullptr);

}  // namespace lscub
