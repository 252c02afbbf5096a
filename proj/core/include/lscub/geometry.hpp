#pragma once

#include <vector>

#include "lscub/errors.hpp"
#include "lscub/types.hpp"

namespace lscub {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

// Bounded integration domain: axis-aligned box, ball, or disjoint union of
// sub-domains. Immutable after construction; membership uses closed-set
// comparisons (the boundary has measure zero).
class Domain {
 public:
  enum class Kind { Box, Ball, Union };

  // An uninitialized domain (dim 0); any geometric query throws until one of
  // the factories below replaces it.
  Domain() = default;

  static Domain box(std::vector<Interval> bounds);
  static Domain ball(Vector center, double radius);
  static Domain disjoint_union(std::vector<Domain> members);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }

  bool contains(const Vector& x) const;
  double volume() const;

  // Smallest axis-aligned box containing the domain.
  const std::vector<Interval>& bounding_box() const { return bbox_; }

  const std::vector<Interval>& box_bounds() const;  // Kind::Box only
  const Vector& ball_center() const;                // Kind::Ball only
  double ball_radius() const;                       // Kind::Ball only
  const std::vector<Domain>& members() const;       // Kind::Union only

 private:
  void require_valid() const;

  Kind kind_ = Kind::Box;
  int dim_ = 0;
  std::vector<Interval> bounds_;
  Vector center_;
  double radius_ = 0.0;
  std::vector<Domain> members_;
  std::vector<Interval> bbox_;
};

// Nonnegative weight functions shipped with the library. Radial power is
// ||x||_2^p about the origin with p >= 0, defined as 0 at the origin for p > 0.
class WeightFunction {
 public:
  enum class Kind { ConstantOne, ChebyshevProduct, RadialPower };

  static WeightFunction one();
  static WeightFunction chebyshev_product();
  static WeightFunction radial_power(double exponent);

  Kind kind() const { return kind_; }
  double exponent() const { return exponent_; }

  double operator()(const Vector& x) const;

 private:
  WeightFunction(Kind kind, double exponent) : kind_(kind), exponent_(exponent) {}
  Kind kind_ = Kind::ConstantOne;
  double exponent_ = 0.0;
};

double weight_eval(const WeightFunction& w, const Vector& x);

// Preset used by the nonstandard-domain experiment: unit disk at the origin
// plus the square [1,2]^2; volume pi + 1.
Domain nonstandard_union_domain();

}  // namespace lscub
