#include "lscub/geometry.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace lscub {

Domain Domain::box(std::vector<Interval> bounds) {
  if (bounds.empty()) throw config_error("box domain needs at least one axis");
  for (const auto& iv : bounds) {
    if (!(iv.hi > iv.lo)) throw config_error("box domain needs hi > lo on every axis");
  }
  Domain d;
  d.kind_ = Kind::Box;
  d.dim_ = static_cast<int>(bounds.size());
  d.bounds_ = bounds;
  d.bbox_ = std::move(bounds);
  return d;
}

Domain Domain::ball(Vector center, double radius) {
  if (center.size() < 1) throw config_error("ball domain needs a center of dimension >= 1");
  if (!(radius > 0.0)) throw config_error("ball domain needs radius > 0");
  Domain d;
  d.kind_ = Kind::Ball;
  d.dim_ = static_cast<int>(center.size());
  d.center_ = std::move(center);
  d.radius_ = radius;
  d.bbox_.reserve(d.dim_);
  for (int i = 0; i < d.dim_; ++i) {
    d.bbox_.push_back({d.center_[i] - radius, d.center_[i] + radius});
  }
  return d;
}

Domain Domain::disjoint_union(std::vector<Domain> members) {
  if (members.empty()) throw config_error("union domain needs at least one member");
  const int dim = members.front().dim();
  for (const auto& mem : members) {
    if (mem.dim() != dim) throw config_error("union members must share one dimension");
  }
  Domain d;
  d.kind_ = Kind::Union;
  d.dim_ = dim;
  d.bbox_ = members.front().bounding_box();
  for (const auto& mem : members) {
    const auto& bb = mem.bounding_box();
    for (int i = 0; i < dim; ++i) {
      d.bbox_[i].lo = std::min(d.bbox_[i].lo, bb[i].lo);
      d.bbox_[i].hi = std::max(d.bbox_[i].hi, bb[i].hi);
    }
  }
  d.members_ = std::move(members);
  return d;
}

void Domain::require_valid() const {
  if (dim_ == 0) throw config_error("uninitialized domain");
}

bool Domain::contains(const Vector& x) const {
  require_valid();
  if (x.size() != dim_) throw config_error("dimension mismatch in Domain::contains");
  switch (kind_) {
    case Kind::Box:
      for (int i = 0; i < dim_; ++i) {
        if (x[i] < bounds_[i].lo || x[i] > bounds_[i].hi) return false;
      }
      return true;
    case Kind::Ball:
      return (x - center_).norm() <= radius_;
    case Kind::Union:
      for (const auto& mem : members_) {
        if (mem.contains(x)) return true;
      }
      return false;
  }
  return false;
}

double Domain::volume() const {
  require_valid();
  switch (kind_) {
    case Kind::Box: {
      double v = 1.0;
      for (const auto& iv : bounds_) v *= iv.length();
      return v;
    }
    case Kind::Ball: {
      const double d = static_cast<double>(dim_);
      return std::pow(std::numbers::pi, d / 2.0) * std::pow(radius_, d) /
             std::tgamma(d / 2.0 + 1.0);
    }
    case Kind::Union: {
      double v = 0.0;
      for (const auto& mem : members_) v += mem.volume();
      return v;
    }
  }
  return 0.0;
}

const std::vector<Interval>& Domain::box_bounds() const {
  if (kind_ != Kind::Box) throw config_error("box_bounds on a non-box domain");
  return bounds_;
}

const Vector& Domain::ball_center() const {
  if (kind_ != Kind::Ball) throw config_error("ball_center on a non-ball domain");
  return center_;
}

double Domain::ball_radius() const {
  if (kind_ != Kind::Ball) throw config_error("ball_radius on a non-ball domain");
  return radius_;
}

const std::vector<Domain>& Domain::members() const {
  if (kind_ != Kind::Union) throw config_error("members on a non-union domain");
  return members_;
}

WeightFunction WeightFunction::one() { return {Kind::ConstantOne, 0.0}; }

WeightFunction WeightFunction::chebyshev_product() { return {Kind::ChebyshevProduct, 0.0}; }

WeightFunction WeightFunction::radial_power(double exponent) {
  if (!(exponent >= 0.0)) throw config_error("radial-power weight needs exponent >= 0");
  return {Kind::RadialPower, exponent};
}

double WeightFunction::operator()(const Vector& x) const {
  switch (kind_) {
    case Kind::ConstantOne:
      return 1.0;
    case Kind::ChebyshevProduct: {
      double w = 1.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        w *= std::sqrt(std::max(0.0, 1.0 - x[i] * x[i]));
      }
      return w;
    }
    case Kind::RadialPower: {
      if (exponent_ == 0.0) return 1.0;
      return std::pow(x.norm(), exponent_);
    }
  }
  return 1.0;
}

double weight_eval(const WeightFunction& w, const Vector& x) { return w(x); }

Domain nonstandard_union_domain() {
  std::vector<Domain> members;
  members.push_back(Domain::ball(Vector::Zero(2), 1.0));
  members.push_back(Domain::box({{1.0, 2.0}, {1.0, 2.0}}));
  return Domain::disjoint_union(std::move(members));
}

}  // namespace lscub
