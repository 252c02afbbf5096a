#include "lscub/lscf.hpp"

#include <Eigen/QR>
#include <cmath>
#include <string>
#include <utility>

namespace lscub {

namespace {

struct MinNormSolve {
  long rank = 0;
  Vector w;  // empty unless rank == K
};

// Minimum of ||R^{-1/2} w|| over {Phi w = m} through one column-pivoted
// Householder factorization of A^T = R^{1/2} Phi^T: with A^T P = Q S,
// A w' = m becomes S^T (Q^T v) = P^T m for v = R^{-1/2} w, and the minimum-norm
// choice zeroes the trailing components of Q^T v.
MinNormSolve min_norm_solve(const Matrix& phi, const Vector& r, const Vector& m,
                            double rank_rel_tol, bool want_solution) {
  const long k = phi.rows();
  const long n = phi.cols();
  if (r.size() != n) throw config_error("discrete weights and points disagree in size");
  if (m.size() != k) throw config_error("moment vector and basis disagree in size");

  const Vector rsqrt = r.array().sqrt();
  const Matrix at = rsqrt.asDiagonal() * phi.transpose();  // N x K
  Eigen::ColPivHouseholderQR<Matrix> qr(at);
  const Matrix& packed = qr.matrixQR();

  const long diag_len = std::min(n, k);
  const double dmax = diag_len > 0 ? std::abs(packed(0, 0)) : 0.0;
  MinNormSolve out;
  for (long i = 0; i < diag_len; ++i) {
    if (std::abs(packed(i, i)) > rank_rel_tol * dmax && dmax > 0.0) {
      ++out.rank;
    } else {
      break;
    }
  }
  if (out.rank < k || !want_solution) return out;

  const Vector pm = qr.colsPermutation().transpose() * m;
  const Vector y =
      packed.topLeftCorner(k, k).triangularView<Eigen::Upper>().transpose().solve(pm);
  Vector u = Vector::Zero(n);
  u.head(k) = y;
  const Vector v = qr.householderQ() * u;
  out.w = rsqrt.asDiagonal() * v;
  return out;
}

}  // namespace

DiscreteWeights discrete_weights(const PointSet& pts, const WeightFunction& weight,
                                 double volume) {
  if (!(volume > 0.0)) throw config_error("discrete_weights needs a positive volume");
  const long n = pts.size();
  if (n < 1) throw config_error("discrete_weights needs at least one point");
  DiscreteWeights dw;
  dw.r.resize(n);
  for (long i = 0; i < n; ++i) {
    const double w = weight(pts.pts.col(i));
    if (!(w > 0.0)) {
      throw config_error("discrete_weights: weight function vanishes at point " +
                         std::to_string(i));
    }
    dw.r[i] = volume * w / static_cast<double>(n);
  }
  return dw;
}

double apply_rule(const CubatureRule& rule, const std::function<double(const Vector&)>& f) {
  double total = 0.0;
  for (long i = 0; i < rule.points.size(); ++i) {
    const double v = f(rule.points.pts.col(i));
    if (!std::isfinite(v)) {
      throw numerical_error("apply_rule: non-finite sample at point " + std::to_string(i));
    }
    total += rule.weights[i] * v;
  }
  return total;
}

double exactness_residual(const CubatureRule& rule, const Basis& basis, const Domain& domain,
                          const WeightFunction& weight, const MomentOptions& opts) {
  const Matrix phi = basis.eval_matrix(rule.points.pts);
  const MomentVector m = moments(basis, domain, weight, opts);
  return (phi * rule.weights - m.values).norm();
}

long rank_of(const Matrix& phi, double rel_tol) {
  Eigen::ColPivHouseholderQR<Matrix> qr(phi);
  const Matrix& packed = qr.matrixQR();
  const long diag_len = std::min(phi.rows(), phi.cols());
  if (diag_len == 0) return 0;
  const double dmax = std::abs(packed(0, 0));
  if (dmax == 0.0) return 0;
  long rank = 0;
  for (long i = 0; i < diag_len; ++i) {
    if (std::abs(packed(i, i)) > rel_tol * dmax) {
      ++rank;
    } else {
      break;
    }
  }
  return rank;
}

Vector ls_weights(const Matrix& phi, const DiscreteWeights& r, const Vector& m,
                  double rank_rel_tol) {
  auto sol = min_norm_solve(phi, r.r, m, rank_rel_tol, true);
  if (sol.rank < phi.rows()) {
    throw rank_error("ls_weights: rank-deficient basis matrix (numerical rank " +
                         std::to_string(sol.rank) + " of " + std::to_string(phi.rows()) + ")",
                     sol.rank);
  }
  return std::move(sol.w);
}

BuildResult build_positive_lscf(const Basis& basis, const MomentVector& m, const Domain& domain,
                                const WeightFunction& weight, const PointProvider& provider,
                                const BuildOptions& opts) {
  const long k = basis.size();
  if (m.values.size() != k) throw config_error("moment vector does not match the basis");
  if (opts.n_max < k) throw config_error("n_max is below K");

  BuildReport report;
  long n = k;
  while (true) {
    PointSet ps = provider(n);
    if (ps.size() != n) throw config_error("point provider returned the wrong count");
    const Matrix phi = basis.eval_matrix(ps.pts);
    const DiscreteWeights r = discrete_weights(ps, weight, domain.volume());
    auto sol = min_norm_solve(phi, r.r, m.values, opts.rank_rel_tol, true);

    BuildAttempt attempt;
    attempt.n = n;
    attempt.rank = sol.rank;
    if (sol.rank == k) {
      attempt.solved = true;
      attempt.min_weight = sol.w.minCoeff();
    }
    report.attempts.push_back(attempt);
    report.final_n = n;

    if (attempt.solved && attempt.min_weight > 0.0) {
      report.terminated = BuildReport::Termination::Success;
      CubatureRule rule;
      rule.weights = std::move(sol.w);
      rule.points = std::move(ps);
      rule.basis_id = basis.spec();
      rule.residual = (phi * rule.weights - m.values).norm();
      rule.positive = true;
      rule.kind = CubatureRule::Kind::LeastSquares;
      return {std::move(rule), std::move(report)};
    }
    if (2 * n > opts.n_max) {
      if (sol.rank < k) {
        report.terminated = BuildReport::Termination::RankCap;
        const std::string what = "unisolvency not reached: rank " + std::to_string(sol.rank) +
                                 " < K = " + std::to_string(k) + " at N = " + std::to_string(n);
        throw build_error(what, std::move(report));
      }
      report.terminated = BuildReport::Termination::PositivityCap;
      const std::string what = "positivity not reached: min weight " +
                               std::to_string(report.attempts.back().min_weight) + " at N = " +
                               std::to_string(n);
      throw build_error(what, std::move(report));
    }
    n *= 2;
  }
}

BuildResult build_positive_lscf(const BasisSpec& spec, const Domain& domain,
                                const WeightFunction& weight, const GeneratorSpec& gen,
                                const BuildOptions& opts) {
  const Basis basis = make_basis(spec, domain);
  const MomentVector m = moments(basis, domain, weight, opts.moments);
  const PointProvider provider = [&](long count) {
    return generate_in_domain(gen, domain, weight, count);
  };
  return build_positive_lscf(basis, m, domain, weight, provider, opts);
}

DiscreteOrthonormalBasis discrete_orthonormalize(const Matrix& phi, const DiscreteWeights& rw) {
  const long k = phi.rows();
  const long n = phi.cols();
  if (rw.r.size() != n) throw config_error("discrete weights and matrix disagree in size");
  if ((rw.r.array() <= 0.0).any()) throw config_error("discrete weights must be positive");

  const Eigen::RowVectorXd r = rw.r.transpose();
  DiscreteOrthonormalBasis onb;
  onb.b = Matrix::Zero(k, n);
  onb.t = Matrix::Zero(k, k);
  for (long row = 0; row < k; ++row) {
    Eigen::RowVectorXd b = phi.row(row);
    Eigen::RowVectorXd t = Eigen::RowVectorXd::Zero(k);
    t[row] = 1.0;
    const double init_norm = std::sqrt((b.array().square() * r.array()).sum());
    // two Gram-Schmidt sweeps keep the rows orthonormal to roundoff
    for (int pass = 0; pass < 2; ++pass) {
      for (long l = 0; l < row; ++l) {
        const double c = (b.array() * onb.b.row(l).array() * r.array()).sum();
        b -= c * onb.b.row(l);
        t -= c * onb.t.row(l);
      }
    }
    const double nrm = std::sqrt((b.array().square() * r.array()).sum());
    if (!std::isfinite(nrm) || !(nrm > 1e-14 * init_norm)) {
      throw rank_error("discrete orthonormalization broke down at function " +
                           std::to_string(row),
                       row);
    }
    onb.b.row(row) = b / nrm;
    onb.t.row(row) = t / nrm;
  }
  return onb;
}

Vector explicit_ls_weights(const DiscreteOrthonormalBasis& onb, const DiscreteWeights& r,
                           const Vector& pi_moments) {
  if (pi_moments.size() != onb.b.rows()) {
    throw config_error("pi_moments does not match the orthonormal basis");
  }
  return r.r.asDiagonal() * (onb.b.transpose() * pi_moments);
}

double ls_approximant_integral(const Matrix& phi, const DiscreteWeights& r, const Vector& m,
                               const Vector& f_samples) {
  if (f_samples.size() != phi.cols()) throw config_error("sample vector has the wrong length");
  const DiscreteOrthonormalBasis onb = discrete_orthonormalize(phi, r);
  const Vector pi_moments = onb.t * m;
  const Vector coeffs = onb.b * r.r.cwiseProduct(f_samples);  // [f, pi_k]_N
  return coeffs.dot(pi_moments);
}

std::vector<double> qmc_drift(const BasisSpec& spec, const Domain& domain,
                              const WeightFunction& weight, const GeneratorSpec& gen,
                              const std::vector<long>& n_list, const BuildOptions& opts) {
  const Basis basis = make_basis(spec, domain);
  const MomentVector m = moments(basis, domain, weight, opts.moments);
  std::vector<double> drift;
  drift.reserve(n_list.size());
  for (long n : n_list) {
    const PointSet ps = generate_in_domain(gen, domain, weight, n);
    const Matrix phi = basis.eval_matrix(ps.pts);
    const DiscreteWeights r = discrete_weights(ps, weight, domain.volume());
    const Vector w = ls_weights(phi, r, m.values, opts.rank_rel_tol);
    drift.push_back((w - r.r).cwiseAbs().maxCoeff());
  }
  return drift;
}

}  // namespace lscub
