#include "lscub/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace lscub {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void monomials_of_degree(int dim, int total, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == dim - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = total; v >= 0; --v) {
    cur.push_back(v);
    monomials_of_degree(dim, total - v, cur, out);
    cur.pop_back();
  }
}

// Integer vectors with |alpha|_1 = total, axis values descending; the caller
// keeps the canonical half (first nonzero entry positive).
void freqs_of_norm(int dim, int total, std::vector<int>& cur,
                   std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == dim - 1) {
    if (total == 0) {
      cur.push_back(0);
      out.push_back(cur);
      cur.pop_back();
    } else {
      for (int v : {total, -total}) {
        cur.push_back(v);
        out.push_back(cur);
        cur.pop_back();
      }
    }
    return;
  }
  for (int v = total; v >= -total; --v) {
    if (std::abs(v) > total) continue;
    cur.push_back(v);
    freqs_of_norm(dim, total - std::abs(v), cur, out);
    cur.pop_back();
  }
}

bool canonical_frequency(const std::vector<int>& alpha) {
  for (int v : alpha) {
    if (v > 0) return true;
    if (v < 0) return false;
  }
  return false;  // all zero
}

bool is_unit_sym_box(const std::vector<Interval>& bounds) {
  for (const auto& iv : bounds) {
    if (iv.lo != -1.0 || iv.hi != 1.0) return false;
  }
  return true;
}

bool same_box(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].lo != b[i].lo || a[i].hi != b[i].hi) return false;
  }
  return true;
}

// int_lo^hi x^a dx
double power_integral(double lo, double hi, int a) {
  return (std::pow(hi, a + 1) - std::pow(lo, a + 1)) / (a + 1);
}

// int_{-1}^{1} x^a sqrt(1-x^2) dx; zero for odd a, W_0 = pi/2,
// W_{2j} = W_{2j-2} (2j-1)/(2j+2).
double cheb_power_integral(int a) {
  if (a % 2 == 1) return 0.0;
  double w = std::numbers::pi / 2.0;
  for (int j = 1; 2 * j <= a; ++j) w *= (2.0 * j - 1.0) / (2.0 * j + 2.0);
  return w;
}

// int_{B(0,r)} ||x||^p x^alpha dx; zero unless every exponent is even.
double ball_monomial_integral(int dim, double radius, double p, const std::vector<int>& alpha) {
  int total = 0;
  for (int a : alpha) {
    if (a % 2 == 1) return 0.0;
    total += a;
  }
  double log_surface = 0.0, beta_sum = 0.0;
  for (int a : alpha) {
    const double beta = (a + 1.0) / 2.0;
    log_surface += std::lgamma(beta);
    beta_sum += beta;
  }
  log_surface -= std::lgamma(beta_sum);
  const double q = total + p + dim;
  return 2.0 * std::exp(log_surface) * std::pow(radius, q) / q;
}

bool is_origin(const Vector& c) {
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (c[i] != 0.0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Tensor quadrature machinery. An axis holds mapped nodes and weights, with
// any per-axis weight-function factor already folded in.

struct Axis {
  std::vector<double> nodes;
  std::vector<double> weights;
};

std::vector<double> interior_splits(const std::vector<double>* splits, double lo, double hi) {
  std::vector<double> s;
  if (splits) {
    for (double v : *splits) {
      if (v > lo && v < hi) s.push_back(v);
    }
    std::sort(s.begin(), s.end());
  }
  return s;
}

Axis axis_plain(double lo, double hi, const std::vector<double>* splits, const Rule1D& gl) {
  Axis axis;
  std::vector<double> edges{lo};
  for (double v : interior_splits(splits, lo, hi)) edges.push_back(v);
  edges.push_back(hi);
  for (size_t s = 0; s + 1 < edges.size(); ++s) {
    const double mid = 0.5 * (edges[s] + edges[s + 1]);
    const double half = 0.5 * (edges[s + 1] - edges[s]);
    for (Eigen::Index i = 0; i < gl.nodes.size(); ++i) {
      axis.nodes.push_back(mid + half * gl.nodes[i]);
      axis.weights.push_back(half * gl.weights[i]);
    }
  }
  return axis;
}

// Chebyshev-product factor absorbed through x = cos(theta):
// int_{-1}^1 h(x) sqrt(1-x^2) dx = int_0^pi h(cos t) sin^2 t dt.
Axis axis_chebyshev(const std::vector<double>* splits, const Rule1D& gl) {
  Axis axis;
  std::vector<double> edges{0.0};
  for (double v : interior_splits(splits, -1.0, 1.0)) edges.push_back(std::acos(v));
  edges.push_back(std::numbers::pi);
  std::sort(edges.begin(), edges.end());
  for (size_t s = 0; s + 1 < edges.size(); ++s) {
    const double mid = 0.5 * (edges[s] + edges[s + 1]);
    const double half = 0.5 * (edges[s + 1] - edges[s]);
    for (Eigen::Index i = 0; i < gl.nodes.size(); ++i) {
      const double theta = mid + half * gl.nodes[i];
      const double st = std::sin(theta);
      axis.nodes.push_back(std::cos(theta));
      axis.weights.push_back(half * gl.weights[i] * st * st);
    }
  }
  return axis;
}

using Integrand = std::function<double(const Vector&)>;

double checked(const Integrand& f, const Vector& x) {
  const double v = f(x);
  if (!std::isfinite(v)) throw numerical_error("non-finite integrand sample");
  return v;
}

double tensor_sum(const std::vector<Axis>& axes, const Integrand& g) {
  const int dim = static_cast<int>(axes.size());
  std::vector<size_t> idx(dim, 0);
  Vector x(dim);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (int j = 0; j < dim; ++j) {
      x[j] = axes[j].nodes[idx[j]];
      w *= axes[j].weights[idx[j]];
    }
    total += w * checked(g, x);
    int j = 0;
    while (j < dim && ++idx[j] == axes[j].nodes.size()) idx[j++] = 0;
    if (j == dim) break;
  }
  return total;
}

struct RadialRule {
  std::vector<double> nodes;    // rho values
  std::vector<double> weights;  // include jacobian rho^{d-1} and any absorbed rho^p
};

// When `absorb_exponent` is set (radial-power weight about the ball center),
// the substitution rho = t^2 keeps the radial integrand smooth:
// int_0^R g(rho) rho^{p+d-1} drho = 2 int_0^{sqrt(R)} g(t^2) t^{2p+2d-1} dt.
RadialRule radial_rule(double radius, int dim, std::optional<double> absorb_exponent,
                       const Rule1D& gl) {
  RadialRule rule;
  if (absorb_exponent) {
    const double p = *absorb_exponent;
    const double tmax = std::sqrt(radius);
    for (Eigen::Index i = 0; i < gl.nodes.size(); ++i) {
      const double t = 0.5 * tmax * (gl.nodes[i] + 1.0);
      const double w = 0.5 * tmax * gl.weights[i];
      rule.nodes.push_back(t * t);
      rule.weights.push_back(2.0 * w * std::pow(t, 2.0 * p + 2.0 * dim - 1.0));
    }
  } else {
    for (Eigen::Index i = 0; i < gl.nodes.size(); ++i) {
      const double rho = 0.5 * radius * (gl.nodes[i] + 1.0);
      const double w = 0.5 * radius * gl.weights[i];
      rule.nodes.push_back(rho);
      rule.weights.push_back(w * std::pow(rho, dim - 1));
    }
  }
  return rule;
}

double ball_integrate(const Integrand& g, const Vector& center, double radius, int level,
                      std::optional<double> absorb_exponent) {
  const int dim = static_cast<int>(center.size());
  const Rule1D gl = gauss_legendre_1d(level);
  const RadialRule rad = radial_rule(radius, dim, absorb_exponent, gl);
  const int n_angle = std::max(8, 2 * level);
  const double wa = kTwoPi / n_angle;
  double total = 0.0;
  Vector x(dim);
  if (dim == 2) {
    for (size_t ir = 0; ir < rad.nodes.size(); ++ir) {
      for (int ia = 0; ia < n_angle; ++ia) {
        const double phi = wa * ia;
        x[0] = center[0] + rad.nodes[ir] * std::cos(phi);
        x[1] = center[1] + rad.nodes[ir] * std::sin(phi);
        total += rad.weights[ir] * wa * checked(g, x);
      }
    }
    return total;
  }
  if (dim == 3) {
    for (size_t ir = 0; ir < rad.nodes.size(); ++ir) {
      for (Eigen::Index iu = 0; iu < gl.nodes.size(); ++iu) {
        const double u = gl.nodes[iu];  // cos of the polar angle
        const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
        for (int ia = 0; ia < n_angle; ++ia) {
          const double phi = wa * ia;
          x[0] = center[0] + rad.nodes[ir] * su * std::cos(phi);
          x[1] = center[1] + rad.nodes[ir] * su * std::sin(phi);
          x[2] = center[2] + rad.nodes[ir] * u;
          total += rad.weights[ir] * gl.weights[iu] * wa * checked(g, x);
        }
      }
    }
    return total;
  }
  throw config_error("reference integration on balls supports dimensions 2 and 3");
}

// One level of the oracle; `splits` (x-space, per axis) subdivides box axes so
// interior kinks land on cell boundaries.
double integrate_level(const Integrand& f, const Domain& domain, const WeightFunction& weight,
                       int level, const std::vector<std::vector<double>>* splits) {
  switch (domain.kind()) {
    case Domain::Kind::Box: {
      const auto& bounds = domain.box_bounds();
      const Rule1D gl = gauss_legendre_1d(level);
      std::vector<Axis> axes;
      axes.reserve(bounds.size());
      const bool absorb_cheb =
          weight.kind() == WeightFunction::Kind::ChebyshevProduct && is_unit_sym_box(bounds);
      for (size_t j = 0; j < bounds.size(); ++j) {
        const std::vector<double>* ax_splits = splits ? &(*splits)[j] : nullptr;
        axes.push_back(absorb_cheb ? axis_chebyshev(ax_splits, gl)
                                   : axis_plain(bounds[j].lo, bounds[j].hi, ax_splits, gl));
      }
      if (absorb_cheb || weight.kind() == WeightFunction::Kind::ConstantOne) {
        return tensor_sum(axes, f);
      }
      return tensor_sum(axes, [&](const Vector& x) { return f(x) * weight(x); });
    }
    case Domain::Kind::Ball: {
      const Vector& c = domain.ball_center();
      std::optional<double> absorb;
      if (weight.kind() == WeightFunction::Kind::RadialPower && is_origin(c)) {
        absorb = weight.exponent();
      }
      if (absorb || weight.kind() == WeightFunction::Kind::ConstantOne) {
        return ball_integrate(f, c, domain.ball_radius(), level, absorb);
      }
      return ball_integrate([&](const Vector& x) { return f(x) * weight(x); }, c,
                            domain.ball_radius(), level, std::nullopt);
    }
    case Domain::Kind::Union: {
      double total = 0.0;
      for (const auto& mem : domain.members()) {
        total += integrate_level(f, mem, weight, level, splits);
      }
      return total;
    }
  }
  throw config_error("unknown domain kind");
}

IntegrationResult integrate_with_estimate(const Integrand& f, const Domain& domain,
                                          const WeightFunction& weight, int level,
                                          const std::vector<std::vector<double>>* splits) {
  if (level < 1) throw config_error("reference_integrate needs level >= 1");
  IntegrationResult res;
  res.value = integrate_level(f, domain, weight, level, splits);
  const int cmp_level = std::max(1, level - 8);
  const double cmp = integrate_level(f, domain, weight, cmp_level, splits);
  res.error_estimate = std::abs(res.value - cmp);
  return res;
}

}  // namespace

Basis make_basis_with_centers(const BasisSpec& spec, const Domain& domain,
                              const Matrix& centers) {
  if (spec.family != BasisSpec::Family::CubicPhsPlusConstant) {
    throw config_error("explicit centers are a PHS-family feature");
  }
  if (centers.rows() != domain.dim()) throw config_error("PHS centers have the wrong dimension");
  if (centers.cols() < 2) throw config_error("PHS basis needs at least 2 centers");
  for (Eigen::Index i = 0; i < centers.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < centers.cols(); ++j) {
      if ((centers.col(i) - centers.col(j)).norm() == 0.0) {
        throw config_error("PHS centers are not distinct");
      }
    }
  }
  Basis basis;
  basis.spec_ = spec;
  basis.spec_.center_count = centers.cols();
  basis.dim_ = domain.dim();
  basis.centers_ = centers;
  basis.ref_box_ = domain.bounding_box();
  basis.functions_.resize(centers.cols() + 1);
  basis.functions_[0].center_index = -1;
  for (Eigen::Index j = 0; j < centers.cols(); ++j) {
    basis.functions_[j + 1].center_index = j;
  }
  return basis;
}

Basis make_basis(const BasisSpec& spec, const Domain& domain) {
  const int dim = domain.dim();
  switch (spec.family) {
    case BasisSpec::Family::AlgebraicTotalDegree: {
      if (spec.degree < 0) throw config_error("algebraic basis needs degree >= 0");
      // monomial conditioning cap at double precision
      const int cap = dim <= 1 ? 30 : dim == 2 ? 14 : 9;
      if (spec.degree > cap) {
        throw config_error("algebraic degree " + std::to_string(spec.degree) +
                           " exceeds the conditioning cap m <= " + std::to_string(cap) +
                           " for d = " + std::to_string(dim));
      }
      Basis basis;
      basis.spec_ = spec;
      basis.dim_ = dim;
      basis.ref_box_ = domain.bounding_box();
      std::vector<std::vector<int>> exps;
      std::vector<int> cur;
      for (int t = 0; t <= spec.degree; ++t) monomials_of_degree(dim, t, cur, exps);
      basis.functions_.resize(exps.size());
      for (size_t k = 0; k < exps.size(); ++k) basis.functions_[k].exponent = std::move(exps[k]);
      return basis;
    }
    case BasisSpec::Family::TrigonometricDegree: {
      if (spec.degree < 0) throw config_error("trigonometric basis needs degree >= 0");
      Basis basis;
      basis.spec_ = spec;
      basis.dim_ = dim;
      basis.ref_box_ = domain.bounding_box();
      basis.functions_.emplace_back();  // the constant
      std::vector<int> cur;
      for (int t = 1; t <= spec.degree; ++t) {
        std::vector<std::vector<int>> freqs;
        freqs_of_norm(dim, t, cur, freqs);
        for (auto& alpha : freqs) {
          if (!canonical_frequency(alpha)) continue;
          BasisFunction cosf;
          cosf.frequency = alpha;
          cosf.is_sin = false;
          BasisFunction sinf;
          sinf.frequency = std::move(alpha);
          sinf.is_sin = true;
          basis.functions_.push_back(std::move(cosf));
          basis.functions_.push_back(std::move(sinf));
        }
      }
      return basis;
    }
    case BasisSpec::Family::CubicPhsPlusConstant: {
      if (spec.center_count < 2) throw config_error("PHS basis needs center-count >= 2");
      const PointSet centers =
          generate_in_domain(spec.center_generator, domain, WeightFunction::one(),
                             spec.center_count);
      return make_basis_with_centers(spec, domain, centers.pts);
    }
  }
  throw config_error("unknown basis family");
}

double Basis::eval(long k, const Vector& x) const {
  const BasisFunction& fn = functions_.at(static_cast<size_t>(k));
  switch (spec_.family) {
    case BasisSpec::Family::AlgebraicTotalDegree: {
      double v = 1.0;
      for (int j = 0; j < dim_; ++j) {
        for (int e = 0; e < fn.exponent[j]; ++e) v *= x[j];
      }
      return v;
    }
    case BasisSpec::Family::TrigonometricDegree: {
      if (fn.frequency.empty()) return 1.0;
      double arg = 0.0;
      for (int j = 0; j < dim_; ++j) {
        const double xt = (x[j] - ref_box_[j].lo) / ref_box_[j].length();
        arg += fn.frequency[j] * xt;
      }
      arg *= kTwoPi;
      return fn.is_sin ? std::sin(arg) : std::cos(arg);
    }
    case BasisSpec::Family::CubicPhsPlusConstant: {
      if (fn.center_index < 0) return 1.0;
      const double r = (x - centers_.col(fn.center_index)).norm();
      return r * r * r;
    }
  }
  return 0.0;
}

Matrix Basis::eval_matrix(const Matrix& pts) const {
  if (pts.rows() != dim_) throw config_error("dimension mismatch in eval_matrix");
  const long k = size();
  const long n = pts.cols();
  Matrix phi(k, n);
  for (long c = 0; c < n; ++c) {
    const Vector x = pts.col(c);
    for (long row = 0; row < k; ++row) phi(row, c) = eval(row, x);
  }
  return phi;
}

std::string Basis::descriptor(long k) const {
  const BasisFunction& fn = functions_.at(static_cast<size_t>(k));
  std::ostringstream os;
  auto join = [&os](const std::vector<int>& v) {
    os << "(";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ")";
  };
  switch (spec_.family) {
    case BasisSpec::Family::AlgebraicTotalDegree:
      os << "x^";
      join(fn.exponent);
      break;
    case BasisSpec::Family::TrigonometricDegree:
      if (fn.frequency.empty()) {
        os << "1";
      } else {
        os << (fn.is_sin ? "sin2pi*" : "cos2pi*");
        join(fn.frequency);
      }
      break;
    case BasisSpec::Family::CubicPhsPlusConstant:
      if (fn.center_index < 0) {
        os << "1";
      } else {
        os << "phs[" << fn.center_index << "](";
        for (int j = 0; j < dim_; ++j) {
          char buf[32];
          std::snprintf(buf, sizeof(buf), "%.9g", centers_(j, fn.center_index));
          os << (j ? "," : "") << buf;
        }
        os << ")";
      }
      break;
  }
  return os.str();
}

Matrix eval_basis_matrix(const Basis& basis, const PointSet& pts) {
  return basis.eval_matrix(pts.pts);
}

namespace {

// Closed-form monomial moment over one non-union domain, if available.
std::optional<double> monomial_moment(const Domain& domain, const WeightFunction& weight,
                                      const std::vector<int>& alpha) {
  if (domain.kind() == Domain::Kind::Box) {
    const auto& bounds = domain.box_bounds();
    if (weight.kind() == WeightFunction::Kind::ConstantOne) {
      double v = 1.0;
      for (size_t j = 0; j < bounds.size(); ++j) {
        v *= power_integral(bounds[j].lo, bounds[j].hi, alpha[j]);
      }
      return v;
    }
    if (weight.kind() == WeightFunction::Kind::ChebyshevProduct && is_unit_sym_box(bounds)) {
      double v = 1.0;
      for (size_t j = 0; j < bounds.size(); ++j) v *= cheb_power_integral(alpha[j]);
      return v;
    }
    return std::nullopt;
  }
  if (domain.kind() == Domain::Kind::Ball && is_origin(domain.ball_center())) {
    if (weight.kind() == WeightFunction::Kind::ConstantOne) {
      return ball_monomial_integral(domain.dim(), domain.ball_radius(), 0.0, alpha);
    }
    if (weight.kind() == WeightFunction::Kind::RadialPower) {
      return ball_monomial_integral(domain.dim(), domain.ball_radius(), weight.exponent(),
                                    alpha);
    }
  }
  return std::nullopt;
}

std::optional<double> monomial_moment_any(const Domain& domain, const WeightFunction& weight,
                                          const std::vector<int>& alpha) {
  if (domain.kind() == Domain::Kind::Union) {
    double total = 0.0;
    for (const auto& mem : domain.members()) {
      const auto v = monomial_moment_any(mem, weight, alpha);
      if (!v) return std::nullopt;
      total += *v;
    }
    return total;
  }
  return monomial_moment(domain, weight, alpha);
}

std::optional<Vector> closed_form_moments(const Basis& basis, const Domain& domain,
                                          const WeightFunction& weight) {
  switch (basis.spec().family) {
    case BasisSpec::Family::AlgebraicTotalDegree: {
      Vector m(basis.size());
      for (long k = 0; k < basis.size(); ++k) {
        const auto v = monomial_moment_any(domain, weight, basis.functions()[k].exponent);
        if (!v) return std::nullopt;
        m[k] = *v;
      }
      return m;
    }
    case BasisSpec::Family::TrigonometricDegree: {
      // Over the full reference box every nonconstant trig monomial averages to
      // zero; sub-boxes of a union do not, so only the exact-box case is closed.
      if (domain.kind() != Domain::Kind::Box ||
          weight.kind() != WeightFunction::Kind::ConstantOne ||
          !same_box(domain.box_bounds(), basis.reference_box())) {
        return std::nullopt;
      }
      Vector m = Vector::Zero(basis.size());
      m[0] = domain.volume();
      return m;
    }
    case BasisSpec::Family::CubicPhsPlusConstant:
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<std::vector<double>> phs_splits(const Basis& basis, long k) {
  std::vector<std::vector<double>> splits(basis.dim());
  const long ci = basis.functions()[static_cast<size_t>(k)].center_index;
  if (ci >= 0) {
    for (int j = 0; j < basis.dim(); ++j) splits[j].push_back(basis.centers()(j, ci));
  }
  return splits;
}

}  // namespace

MomentVector moments(const Basis& basis, const Domain& domain, const WeightFunction& weight,
                     const MomentOptions& opts) {
  if (const auto closed = closed_form_moments(basis, domain, weight)) {
    MomentVector m;
    m.values = *closed;
    m.method = MomentVector::Method::ClosedForm;
    return m;
  }

  const bool phs = basis.spec().family == BasisSpec::Family::CubicPhsPlusConstant;
  for (const int level : {opts.level, 2 * opts.level, 4 * opts.level}) {
    Vector values(basis.size());
    double est_sq = 0.0;
    for (long k = 0; k < basis.size(); ++k) {
      const auto f = [&](const Vector& x) { return basis.eval(k, x); };
      const auto splits = phs ? phs_splits(basis, k) : std::vector<std::vector<double>>{};
      const IntegrationResult res =
          integrate_with_estimate(f, domain, weight, level, phs ? &splits : nullptr);
      values[k] = res.value;
      est_sq += res.error_estimate * res.error_estimate;
    }
    const double est = std::sqrt(est_sq);
    if (est <= opts.tolerance * (1.0 + values.norm())) {
      MomentVector m;
      m.values = std::move(values);
      m.method = MomentVector::Method::ReferenceQuadrature;
      m.error_estimate = est;
      return m;
    }
  }
  throw numerical_error("reference quadrature for moments failed to converge");
}

IntegrationResult reference_integrate(const std::function<double(const Vector&)>& f,
                                      const Domain& domain, const WeightFunction& weight,
                                      int level) {
  return integrate_with_estimate(f, domain, weight, level, nullptr);
}

}  // namespace lscub
