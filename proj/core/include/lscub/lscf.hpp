#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "lscub/spaces.hpp"

namespace lscub {

struct DiscreteWeights {
  Vector r;  // r_n > 0
};

// r_n = |Omega| * omega(x_n) / N. Rejects any point with omega(x_n) = 0;
// generate_in_domain never produces one.
DiscreteWeights discrete_weights(const PointSet& pts, const WeightFunction& weight,
                                 double volume);

struct CubatureRule {
  enum class Kind { LeastSquares, Interpolatory, Qmc, ProductLegendre };

  PointSet points;
  Vector weights;
  BasisSpec basis_id;
  double residual = std::numeric_limits<double>::quiet_NaN();  // ||Phi w - m||_2 at construction
  bool positive = false;                                       // min weight > 0
  Kind kind = Kind::LeastSquares;
};

// C_N[f] = sum_n w_n f(x_n). Throws on a non-finite sample.
double apply_rule(const CubatureRule& rule, const std::function<double(const Vector&)>& f);

// ||Phi w - m||_2 recomputed from scratch.
double exactness_residual(const CubatureRule& rule, const Basis& basis, const Domain& domain,
                          const WeightFunction& weight, const MomentOptions& opts = {});

// Numerical rank: pivoted-QR diagonal magnitudes above rel_tol times the largest.
long rank_of(const Matrix& phi, double rel_tol = 1e-10);

// The unique minimizer of ||R^{-1/2} w||_2 over {Phi w = m}, computed through a
// column-pivoted Householder factorization of R^{1/2} Phi^T at cost O(N K^2).
// Throws rank_error (carrying the numerical rank) on rank deficiency.
Vector ls_weights(const Matrix& phi, const DiscreteWeights& r, const Vector& m,
                  double rank_rel_tol = 1e-10);

struct BuildOptions {
  long n_max = 1L << 20;
  double rank_rel_tol = 1e-10;
  double exactness_tol = 1e-8;
  MomentOptions moments{};
};

struct BuildAttempt {
  long n = 0;
  long rank = 0;
  double min_weight = std::numeric_limits<double>::quiet_NaN();  // valid iff solved
  bool solved = false;
};

struct BuildReport {
  enum class Termination { Success, RankCap, PositivityCap };

  std::vector<BuildAttempt> attempts;  // N doubles between consecutive entries
  long final_n = 0;
  Termination terminated = Termination::Success;
};

struct build_error : numerical_error {
  BuildReport report;
  build_error(const std::string& what, BuildReport rep)
      : numerical_error(what), report(std::move(rep)) {}
};

struct BuildResult {
  CubatureRule rule;
  BuildReport report;
};

// Doubling construction of a positive exact LS rule: start at N = K, gate each
// attempt on rank(Phi) = K, solve, and accept once the smallest weight is
// strictly positive; otherwise N <- 2N up to n_max. Failures throw build_error
// ("unisolvency not reached" / "positivity not reached") with the attempt trace.
BuildResult build_positive_lscf(const BasisSpec& spec, const Domain& domain,
                                const WeightFunction& weight, const GeneratorSpec& gen,
                                const BuildOptions& opts = {});

// Same loop with an explicit point source; prefix(count) must be deterministic
// and a prefix of prefix(2*count).
using PointProvider = std::function<PointSet(long)>;
BuildResult build_positive_lscf(const Basis& basis, const MomentVector& m, const Domain& domain,
                                const WeightFunction& weight, const PointProvider& provider,
                                const BuildOptions& opts = {});

struct DiscreteOrthonormalBasis {
  Matrix b;  // K x N, rows discretely orthonormal: B diag(r) B^T = I
  Matrix t;  // K x K lower triangular, B = T Phi
};

// Gram-Schmidt in the discrete inner product [u,v] = sum_n r_n u_n v_n.
// Breakdown (a vanishing norm) throws rank_error.
DiscreteOrthonormalBasis discrete_orthonormalize(const Matrix& phi, const DiscreteWeights& r);

// w_n = r_n sum_k B(k,n) pi_moments(k) with pi_moments = T m; agrees with
// ls_weights on full-rank inputs.
Vector explicit_ls_weights(const DiscreteOrthonormalBasis& onb, const DiscreteWeights& r,
                           const Vector& pi_moments);

// Integral of the discrete LS approximant of f: sum_k [f,pi_k]_N I[pi_k].
// Equals apply_rule on the same inputs.
double ls_approximant_integral(const Matrix& phi, const DiscreteWeights& r, const Vector& m,
                               const Vector& f_samples);

// max_n |w_n^LS - r_n| for each requested N at a fixed basis.
std::vector<double> qmc_drift(const BasisSpec& spec, const Domain& domain,
                              const WeightFunction& weight, const GeneratorSpec& gen,
                              const std::vector<long>& n_list, const BuildOptions& opts = {});

}  // namespace lscub
