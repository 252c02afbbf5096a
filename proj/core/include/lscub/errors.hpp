#pragma once

#include <stdexcept>
#include <string>

namespace lscub {

// Base class of every error thrown by the library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent input: bad dimensions, malformed descriptors, unusable options.
struct config_error : error {
  using error::error;
};

// Numerical failure: rank deficiency, caps exceeded, non-finite samples, non-convergence.
struct numerical_error : error {
  using error::error;
};

// A rank-revealing factorization found fewer independent rows than required.
struct rank_error : numerical_error {
  long numerical_rank;
  rank_error(const std::string& what, long rank)
      : numerical_error(what), numerical_rank(rank) {}
};

}  // namespace lscub
