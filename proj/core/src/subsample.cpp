#include "lscub/subsample.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace lscub {

namespace {

// Orthonormal basis of null(Phi): the trailing N-K columns of the full Q from
// a Householder factorization of Phi^T.
Matrix kernel_basis(const Matrix& phi) {
  const long k = phi.rows();
  const long n = phi.cols();
  Eigen::HouseholderQR<Matrix> qr(phi.transpose());
  Matrix tail = Matrix::Zero(n, n - k);
  tail.bottomRows(n - k).setIdentity();
  return qr.householderQ() * tail;
}

void apply_sign_rule(Vector& a) {
  if (a.maxCoeff() <= 0.0) a = -a;
}

}  // namespace

Vector kernel_vector(const Matrix& phi) {
  const long k = phi.rows();
  const long n = phi.cols();
  if (n <= k) {
    throw numerical_error("kernel_vector: trivial kernel, N = " + std::to_string(n) +
                          " <= K = " + std::to_string(k));
  }
  Matrix z = kernel_basis(phi);
  Vector a = z.col(z.cols() - 1);
  a.normalize();
  if ((phi * a).cwiseAbs().maxCoeff() > 1e-10) {
    throw numerical_error("kernel_vector: candidate is not in the kernel");
  }
  apply_sign_rule(a);
  return a;
}

namespace {

void check_method(const SubsampleMethod& method) {
  if (!(method.zero_weight_tol > 0.0) || !(method.nnls_gradient_tol > 0.0) ||
      method.max_iterations < 0) {
    throw config_error("subsample tolerances must be positive");
  }
}

}  // namespace

CubatureRule steinitz_reduce(const CubatureRule& rule, const Basis& basis, const Vector& m,
                             const SubsampleMethod& method, SubsampleInfo* info) {
  check_method(method);
  const long k = basis.size();
  const long n_initial = rule.points.size();
  if (rule.weights.size() != n_initial) throw config_error("rule weights and points disagree");
  if (m.size() != k) throw config_error("moment vector does not match the basis");
  if (n_initial > k && rule.weights.minCoeff() <= 0.0) {
    throw config_error("steinitz_reduce needs a positive input rule");
  }

  const double m_norm = m.norm();
  const double scale = std::max(1.0, m_norm);

  // Points are streamed through a working buffer of at most 2K columns. A
  // kernel vector of the buffer columns, extended by zeros, is a kernel vector
  // of the full matrix, so every inner pass is a plain exchange step; the
  // buffer bound makes the whole reduction O(N K^2).
  const long capacity = std::min(n_initial, 2 * k);
  Matrix phi_buf(k, capacity);
  Vector w_buf(capacity);
  std::vector<long> ids_buf;
  ids_buf.reserve(capacity);

  double residual_before = 0.0;
  {
    Vector v0 = Vector::Zero(k);
    for (long i = 0; i < n_initial; ++i) {
      Vector col(k);
      for (long row = 0; row < k; ++row) col[row] = basis.eval(row, rule.points.pts.col(i));
      v0 += rule.weights[i] * col;
    }
    residual_before = (v0 - m).norm();
  }

  // untouched queue weights never change; their running maximum is a suffix max
  std::vector<double> suffix_max(static_cast<size_t>(n_initial) + 1, 0.0);
  for (long i = n_initial - 1; i >= 0; --i) {
    suffix_max[i] = std::max(suffix_max[i + 1], rule.weights[i]);
  }

  long next_id = 0;
  long passes = 0;
  Matrix z;  // kernel window of the buffer columns
  long live = 0;

  const auto refill = [&] {
    while (static_cast<long>(ids_buf.size()) < capacity && next_id < n_initial) {
      const long pos = static_cast<long>(ids_buf.size());
      for (long row = 0; row < k; ++row) {
        phi_buf(row, pos) = basis.eval(row, rule.points.pts.col(next_id));
      }
      w_buf[pos] = rule.weights[next_id];
      ids_buf.push_back(next_id);
      ++next_id;
    }
    live = 0;
  };

  const auto refresh_kernel = [&] {
    const long b = static_cast<long>(ids_buf.size());
    const long width = b - k;
    Eigen::HouseholderQR<Matrix> qr(phi_buf.leftCols(b).transpose());
    Matrix tail = Matrix::Zero(b, width);
    tail.bottomRows(width).setIdentity();
    z = qr.householderQ() * tail;
    live = width;
  };

  refill();
  while (static_cast<long>(ids_buf.size()) > k) {
    const long b = static_cast<long>(ids_buf.size());
    if (live < 1) refresh_kernel();

    Vector a = z.col(live - 1).head(b);
    bool fresh = false;
    for (int attempt = 0;; ++attempt) {
      const double nrm = a.norm();
      if (nrm > 0.0) {
        a /= nrm;
        if ((phi_buf.leftCols(b) * a).cwiseAbs().maxCoeff() <= 1e-10 * scale) break;
      }
      if (fresh || attempt > 1) {
        throw numerical_error("steinitz_reduce: kernel vector check failed");
      }
      refresh_kernel();
      a = z.col(live - 1).head(b);
      fresh = true;
    }
    if (a.maxCoeff() <= 0.0) {
      a = -a;
      z.col(live - 1).head(b) = a;
    }

    // sigma = max a_n / w_n > 0; the update w <- w - a/sigma zeroes the argmax.
    double sigma = -std::numeric_limits<double>::infinity();
    long argmax = 0;
    for (long i = 0; i < b; ++i) {
      const double q = a[i] / w_buf[i];
      if (q > sigma) {
        sigma = q;
        argmax = i;
      }
    }
    if (!(sigma > 0.0)) throw numerical_error("steinitz_reduce: nonpositive sigma");
    double max_w = suffix_max[next_id];
    for (long i = 0; i < b; ++i) {
      w_buf[i] -= a[i] / sigma;
      max_w = std::max(max_w, w_buf[i]);
    }

    std::vector<long> removed;  // buffer positions, ascending
    for (long i = 0; i < b; ++i) {
      if (w_buf[i] <= method.zero_weight_tol * max_w) removed.push_back(i);
    }
    if (removed.empty()) removed.push_back(argmax);

    // Row elimination keeps the surviving window columns inside the kernel of
    // the shrunk buffer: pivot on the largest entry of the removed row, clear
    // that row from the other columns, retire the pivot column.
    for (long row : removed) {
      long pivot = -1;
      double best = 0.0;
      for (long c = 0; c < live; ++c) {
        const double mag = std::abs(z(row, c));
        if (mag > best) {
          best = mag;
          pivot = c;
        }
      }
      if (pivot < 0 || !(best > 0.0)) {
        live = 0;
        break;
      }
      const Vector pivot_col = z.col(pivot);
      for (long c = 0; c < live; ++c) {
        if (c == pivot) continue;
        const double factor = z(row, c) / pivot_col[row];
        if (factor != 0.0) z.col(c) -= factor * pivot_col;
      }
      if (pivot != live - 1) z.col(pivot) = z.col(live - 1);
      --live;
    }

    // compact the buffer (and the kernel window rows) in place
    {
      long out = 0;
      size_t next_removed = 0;
      for (long i = 0; i < b; ++i) {
        if (next_removed < removed.size() && removed[next_removed] == i) {
          ++next_removed;
          continue;
        }
        if (out != i) {
          phi_buf.col(out) = phi_buf.col(i);
          w_buf[out] = w_buf[i];
          ids_buf[out] = ids_buf[i];
          if (live > 0) z.row(out) = z.row(i);
        }
        ++out;
      }
      ids_buf.resize(out);
    }

    ++passes;
    if (passes > n_initial) {
      throw numerical_error("steinitz_reduce: no progress after " + std::to_string(passes) +
                            " passes");
    }
    if (static_cast<long>(ids_buf.size()) <= k) refill();
  }

  const long n_final = static_cast<long>(ids_buf.size());
  const double residual_after =
      (phi_buf.leftCols(n_final) * w_buf.head(n_final) - m).norm();
  const double exactness_tol = 1e-8;
  if (residual_after > exactness_tol * (1.0 + m_norm)) {
    throw numerical_error("steinitz_reduce: residual blew up to " +
                          std::to_string(residual_after) + " over " + std::to_string(passes) +
                          " passes (before: " + std::to_string(residual_before) + ")");
  }

  CubatureRule out;
  out.points.pts.resize(rule.points.dim(), n_final);
  for (long i = 0; i < n_final; ++i) out.points.pts.col(i) = rule.points.pts.col(ids_buf[i]);
  out.points.provenance = rule.points.provenance;
  out.weights = w_buf.head(n_final);
  out.basis_id = rule.basis_id;
  out.residual = residual_after;
  out.positive = out.weights.size() > 0 && out.weights.minCoeff() > 0.0;
  out.kind = CubatureRule::Kind::Interpolatory;
  if (info) {
    info->passes = passes;
    info->residual_before = residual_before;
    info->residual_after = residual_after;
    info->converged = true;
  }
  return out;
}

NnlsResult nnls_weights(const Matrix& phi, const Vector& m, const SubsampleMethod& method) {
  check_method(method);
  const long k = phi.rows();
  const long n = phi.cols();
  if (m.size() != k) throw config_error("moment vector does not match the matrix");
  const long max_iter = method.max_iterations > 0 ? method.max_iterations : 10 * k;

  NnlsResult res;
  res.weights = Vector::Zero(n);
  std::vector<bool> passive(n, false);
  std::vector<long> support;

  const double gref = (phi.transpose() * m).cwiseAbs().maxCoeff();
  const double gtol = method.nnls_gradient_tol * gref;

  auto solve_passive = [&](const std::vector<long>& cols) -> Vector {
    Matrix sub(k, cols.size());
    for (size_t i = 0; i < cols.size(); ++i) sub.col(i) = phi.col(cols[i]);
    return sub.colPivHouseholderQr().solve(m);
  };

  Vector gradient = phi.transpose() * m;  // Phi^T (m - Phi w), w = 0
  while (true) {
    long best = -1;
    double best_g = gtol;
    for (long j = 0; j < n; ++j) {
      if (!passive[j] && gradient[j] > best_g) {
        best_g = gradient[j];
        best = j;
      }
    }
    if (best < 0 || static_cast<long>(support.size()) >= k) break;
    passive[best] = true;
    support.push_back(best);

    while (true) {
      const Vector z = solve_passive(support);
      double min_z = z.size() > 0 ? z.minCoeff() : 1.0;
      if (min_z > 0.0) {
        for (size_t i = 0; i < support.size(); ++i) res.weights[support[i]] = z[i];
        break;
      }
      // step toward z until the first passive weight hits zero
      double alpha = 1.0;
      for (size_t i = 0; i < support.size(); ++i) {
        if (z[i] <= 0.0) {
          const double wi = res.weights[support[i]];
          alpha = std::min(alpha, wi / (wi - z[i]));
        }
      }
      for (size_t i = 0; i < support.size(); ++i) {
        const long j = support[i];
        res.weights[j] += alpha * (z[i] - res.weights[j]);
      }
      std::vector<long> kept;
      for (long j : support) {
        if (res.weights[j] > 0.0) {
          kept.push_back(j);
        } else {
          res.weights[j] = 0.0;
          passive[j] = false;
        }
      }
      support = std::move(kept);
      if (++res.iterations > max_iter) {
        res.converged = false;
        res.residual = (phi * res.weights - m).norm();
        return res;
      }
    }

    gradient = phi.transpose() * (m - phi * res.weights);
    if (++res.iterations > max_iter) {
      res.converged = false;
      break;
    }
  }
  res.residual = (phi * res.weights - m).norm();
  return res;
}

CubatureRule subsample(const CubatureRule& rule, const Basis& basis, const Vector& m,
                       const SubsampleMethod& method, SubsampleInfo* info) {
  switch (method.kind) {
    case SubsampleMethod::Kind::Steinitz:
      return steinitz_reduce(rule, basis, m, method, info);
    case SubsampleMethod::Kind::Nnls: {
      const Matrix phi = basis.eval_matrix(rule.points.pts);
      const double residual_before = (phi * rule.weights - m).norm();
      const NnlsResult nnls = nnls_weights(phi, m, method);
      std::vector<long> support;
      for (long i = 0; i < nnls.weights.size(); ++i) {
        if (nnls.weights[i] > 0.0) support.push_back(i);
      }
      CubatureRule out;
      out.points.pts.resize(rule.points.dim(), static_cast<long>(support.size()));
      out.weights.resize(static_cast<long>(support.size()));
      for (size_t i = 0; i < support.size(); ++i) {
        out.points.pts.col(static_cast<long>(i)) = rule.points.pts.col(support[i]);
        out.weights[static_cast<long>(i)] = nnls.weights[support[i]];
      }
      out.points.provenance = rule.points.provenance;
      out.basis_id = rule.basis_id;
      out.residual = nnls.residual;
      out.positive = out.weights.size() > 0 && out.weights.minCoeff() > 0.0;
      out.kind = CubatureRule::Kind::Interpolatory;
      if (info) {
        info->passes = nnls.iterations;
        info->residual_before = residual_before;
        info->residual_after = nnls.residual;
        info->converged = nnls.converged;
      }
      return out;
    }
  }
  throw config_error("unknown subsample method");
}

}  // namespace lscub
