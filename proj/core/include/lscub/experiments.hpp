#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lscub/genz.hpp"
#include "lscub/subsample.hpp"

namespace lscub {

// QMC baseline on a given point set: w_n = |Omega| omega(x_n) / N, identical to
// the discrete weights.
CubatureRule qmc_rule(const PointSet& pts, const Domain& domain, const WeightFunction& weight);

// Tensor product of gauss_legendre_1d mapped onto a box; N = n^d.
CubatureRule product_legendre_rule(int n_per_axis, const Domain& box);

struct ExperimentConfig {
  Domain domain;
  WeightFunction weight = WeightFunction::one();
  BasisSpec::Family family = BasisSpec::Family::AlgebraicTotalDegree;
  std::vector<int> degrees;  // phs family: center counts
  std::vector<GeneratorSpec::Kind> generators;
  int trials = 20;
  std::uint64_t seed = 0;
  // Genz kind names ("oscillatory", "product-peak", "corner-peak", "gaussian",
  // randomized per trial) or fixed named integrands ("test-a", "test-b",
  // "test-c", "nonstandard-exp", one trial each).
  std::vector<std::string> functions;
  bool refine = false;  // ratio experiment: bisect the last doubling interval
  BuildOptions build{};
};

struct ErrorRecord {
  std::string function;
  GeneratorSpec::Kind generator = GeneratorSpec::Kind::Halton;
  int degree = 0;
  long k = 0;
  long n_ls = 0;
  long n_interp = 0;
  int trial = 0;
  double err_ls = 0.0;
  double err_interp = 0.0;
  double err_qmc = 0.0;
  double err_legendre = 0.0;
  std::string status;  // empty on success; builder failures are recorded, not fatal
};

struct ErrorTable {
  std::vector<ErrorRecord> records;
};

struct AggregateRecord {
  std::string function;
  GeneratorSpec::Kind generator = GeneratorSpec::Kind::Halton;
  int degree = 0;
  long k = 0;
  long n_ls = 0;
  long n_interp = 0;
  long trials = 0;
  double median_ls = 0.0, max_ls = 0.0;
  double median_interp = 0.0, max_interp = 0.0;
  double median_qmc = 0.0, max_qmc = 0.0;
  double median_legendre = 0.0, max_legendre = 0.0;
};

// For each degree and generator: build the LS rule once, Steinitz-reduce it,
// form the QMC baseline on the same points and a product-Legendre baseline of
// comparable budget, then record relative errors against the reference
// integral per function and trial.
ErrorTable run_error_experiment(const ExperimentConfig& cfg);

// Median and maximum over trials per (function, generator, degree) cell.
std::vector<AggregateRecord> aggregate_errors(const ErrorTable& table);

struct FitResult {
  double c = 0.0;
  double s = 0.0;
  std::vector<std::pair<long, long>> pairs;  // (K, N)
};

// Ordinary least squares for log N = log C + s log K. Requires >= 3 pairs.
FitResult fit_power_law(const std::vector<std::pair<long, long>>& pairs);

struct RatioPoint {
  int degree = 0;
  long k = 0;
  long n = 0;
  bool refined = false;
  std::string status;  // empty on success
};

struct RatioResult {
  std::vector<RatioPoint> points;
  std::optional<FitResult> fit;  // absent when fewer than 3 usable pairs remain
};

// N(K) study: run the doubling builder per degree, optionally sharpen N inside
// the last doubling interval by bisection, and fit the power law over the
// successful pairs with K >= 2.
RatioResult run_ratio_experiment(const ExperimentConfig& cfg);

}  // namespace lscub
