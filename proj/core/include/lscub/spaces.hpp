#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lscub/gauss_legendre.hpp"
#include "lscub/geometry.hpp"
#include "lscub/points.hpp"

namespace lscub {

struct BasisSpec {
  enum class Family { AlgebraicTotalDegree, TrigonometricDegree, CubicPhsPlusConstant };

  Family family = Family::AlgebraicTotalDegree;
  int degree = 0;                    // algebraic / trigonometric
  long center_count = 0;             // phs: number of radial centers, K = center_count + 1
  GeneratorSpec center_generator{};  // phs
};

// Per-function metadata. Exactly the fields of the owning family are meaningful.
struct BasisFunction {
  std::vector<int> exponent;   // algebraic: monomial multi-index
  std::vector<int> frequency;  // trig: integer frequency vector (empty for the constant)
  bool is_sin = false;         // trig
  long center_index = -1;      // phs: column into centers(), -1 for the constant
};

// K pointwise evaluators over one domain. Function 1 is the constant 1 in
// every family so the space always contains constants.
class Basis {
 public:
  const BasisSpec& spec() const { return spec_; }
  long size() const { return static_cast<long>(functions_.size()); }  // K
  int dim() const { return dim_; }

  double eval(long k, const Vector& x) const;
  Matrix eval_matrix(const Matrix& pts) const;  // K rows x N columns

  const std::vector<BasisFunction>& functions() const { return functions_; }
  std::string descriptor(long k) const;

  const Matrix& centers() const { return centers_; }                       // phs, d x (K-1)
  const std::vector<Interval>& reference_box() const { return ref_box_; }  // trig affine map

 private:
  friend Basis make_basis_with_centers(const BasisSpec&, const Domain&, const Matrix&);
  friend Basis make_basis(const BasisSpec&, const Domain&);

  BasisSpec spec_;
  int dim_ = 0;
  std::vector<BasisFunction> functions_;
  Matrix centers_;
  std::vector<Interval> ref_box_;
};

// Algebraic: monomials x^alpha, |alpha| <= m, ordered by total degree then
// lexicographically descending on alpha. Trigonometric: the constant, then
// cos/sin(2 pi alpha . xt) for canonical alpha with |alpha|_1 <= m, where xt is
// x mapped affinely from the bounding box onto [0,1]^d. PHS: the constant plus
// ||x - c_j||^3 for centers drawn by generate_in_domain(center_generator).
Basis make_basis(const BasisSpec& spec, const Domain& domain);
Basis make_basis_with_centers(const BasisSpec& spec, const Domain& domain, const Matrix& centers);

Matrix eval_basis_matrix(const Basis& basis, const PointSet& pts);

struct MomentVector {
  enum class Method { ClosedForm, ReferenceQuadrature };

  Vector values;
  Method method = Method::ClosedForm;
  double error_estimate = 0.0;  // reference-quadrature only
};

struct MomentOptions {
  int level = 60;            // reference-quadrature nodes per axis
  double tolerance = 1e-10;  // accepted error estimate; higher levels are tried above it
};

// m_k = I[phi_k]. Closed forms cover algebraic monomials on boxes (unit and
// Chebyshev-product weights) and origin-centered balls (unit and radial-power
// weights), trig monomials on their reference box with unit weight, and unions
// of such members; everything else goes through reference_integrate.
MomentVector moments(const Basis& basis, const Domain& domain, const WeightFunction& weight,
                     const MomentOptions& opts = {});

struct IntegrationResult {
  double value = 0.0;
  double error_estimate = 0.0;  // |value(level) - value(level-8)|
};

// Tensor-quadrature oracle for I[f] = int f * omega. Boxes use tensor
// Gauss-Legendre, balls a polar rule (trapezoid in angle); Chebyshev-product
// and radial-power weights are absorbed by cos- and rho = t^2 substitutions so
// the integrand stays smooth. Unions sum their members.
IntegrationResult reference_integrate(const std::function<double(const Vector&)>& f,
                                      const Domain& domain, const WeightFunction& weight,
                                      int level);

}  // namespace lscub
