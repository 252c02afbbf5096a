#pragma once

#include <optional>
#include <string>

#include "lscub/spaces.hpp"

namespace lscub {

// The four parametric integrand families used by the error studies; a and b
// hold shape and translation parameters in [0,1]^d.
struct GenzFunction {
  enum class Kind { Oscillatory, ProductPeak, CornerPeak, Gaussian };

  Kind kind = Kind::Gaussian;
  Vector a;
  Vector b;
};

double genz_eval(const GenzFunction& g, const Vector& x);

// I[g] over [0,1]^d with unit weight, via reference_integrate at level 60 with
// a required error estimate <= 1e-12; the separable erf/arctan closed forms of
// the gaussian and product-peak kinds cross-check the oracle.
double genz_reference(const GenzFunction& g, int dim);

const char* genz_kind_name(GenzFunction::Kind kind);
std::optional<GenzFunction::Kind> genz_kind_from_name(const std::string& name);

}  // namespace lscub
