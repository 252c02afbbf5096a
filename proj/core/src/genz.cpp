#include "lscub/genz.hpp"

#include <cmath>
#include <numbers>

namespace lscub {

namespace {

void check_params(const GenzFunction& g, int dim) {
  if (g.a.size() != dim || g.b.size() != dim) {
    throw config_error("genz parameter vectors must have length d");
  }
}

// int_0^1 exp(-a^2 (x-b)^2) dx
double gaussian_axis_integral(double a, double b) {
  if (std::abs(a) < 1e-8) return 1.0;
  const double sp = std::sqrt(std::numbers::pi);
  return sp / (2.0 * a) * (std::erf(a * (1.0 - b)) + std::erf(a * b));
}

// int_0^1 a^2 / (1 + a^2 (x-b)^2) dx
double product_peak_axis_integral(double a, double b) {
  return a * (std::atan(a * (1.0 - b)) + std::atan(a * b));
}

}  // namespace

double genz_eval(const GenzFunction& g, const Vector& x) {
  check_params(g, static_cast<int>(x.size()));
  const int d = static_cast<int>(x.size());
  switch (g.kind) {
    case GenzFunction::Kind::Oscillatory: {
      double arg = 2.0 * std::numbers::pi * g.b[0];
      for (int i = 0; i < d; ++i) arg += g.a[i] * x[i];
      return std::cos(arg);
    }
    case GenzFunction::Kind::ProductPeak: {
      double v = 1.0;
      for (int i = 0; i < d; ++i) {
        const double t = x[i] - g.b[i];
        v *= g.a[i] * g.a[i] / (1.0 + g.a[i] * g.a[i] * t * t);
      }
      return v;
    }
    case GenzFunction::Kind::CornerPeak: {
      double s = 1.0;
      for (int i = 0; i < d; ++i) s += g.a[i] * x[i];
      return std::pow(s, -(d + 1.0));
    }
    case GenzFunction::Kind::Gaussian: {
      double s = 0.0;
      for (int i = 0; i < d; ++i) {
        const double t = x[i] - g.b[i];
        s += g.a[i] * g.a[i] * t * t;
      }
      return std::exp(-s);
    }
  }
  throw config_error("unknown genz kind");
}

double genz_reference(const GenzFunction& g, int dim) {
  check_params(g, dim);
  std::vector<Interval> bounds(dim, Interval{0.0, 1.0});
  const Domain cube = Domain::box(std::move(bounds));
  const auto f = [&](const Vector& x) { return genz_eval(g, x); };
  const IntegrationResult res = reference_integrate(f, cube, WeightFunction::one(), 60);
  if (res.error_estimate > 1e-12) {
    throw numerical_error("genz_reference error estimate above 1e-12");
  }
  if (g.kind == GenzFunction::Kind::Gaussian || g.kind == GenzFunction::Kind::ProductPeak) {
    double closed = 1.0;
    for (int i = 0; i < dim; ++i) {
      closed *= g.kind == GenzFunction::Kind::Gaussian
                    ? gaussian_axis_integral(g.a[i], g.b[i])
                    : product_peak_axis_integral(g.a[i], g.b[i]);
    }
    if (std::abs(closed - res.value) > 1e-10 * std::max(1.0, std::abs(res.value))) {
      throw numerical_error("genz_reference cross-check against the closed form failed");
    }
  }
  return res.value;
}

const char* genz_kind_name(GenzFunction::Kind kind) {
  switch (kind) {
    case GenzFunction::Kind::Oscillatory:
      return "oscillatory";
    case GenzFunction::Kind::ProductPeak:
      return "product-peak";
    case GenzFunction::Kind::CornerPeak:
      return "corner-peak";
    case GenzFunction::Kind::Gaussian:
      return "gaussian";
  }
  return "unknown";
}

std::optional<GenzFunction::Kind> genz_kind_from_name(const std::string& name) {
  if (name == "oscillatory") return GenzFunction::Kind::Oscillatory;
  if (name == "product-peak") return GenzFunction::Kind::ProductPeak;
  if (name == "corner-peak") return GenzFunction::Kind::CornerPeak;
  if (name == "gaussian") return GenzFunction::Kind::Gaussian;
  return std::nullopt;
}

}  // namespace lscub
