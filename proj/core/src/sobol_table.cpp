#include <array>
#include <cstdint>

namespace lscub::detail {

// Primitive polynomials and initial direction numbers for Sobol dimensions
// 2..16 (dimension 1 is the plain van der Corput recurrence). `a` encodes the
// interior coefficients of x^s + a_1 x^{s-1} + ... + a_{s-1} x + 1, a_1 first.
struct SobolPoly {
  int degree;
  unsigned a;
  std::array<unsigned, 6> m;
};

extern const SobolPoly kSobolTable[15];
const SobolPoly kSobolTable[15] = {
    {1, 0, {1, 0, 0, 0, 0, 0}},
    {2, 1, {1, 3, 0, 0, 0, 0}},
    {3, 1, {1, 3, 1, 0, 0, 0}},
    {3, 2, {1, 1, 1, 0, 0, 0}},
    {4, 1, {1, 1, 3, 3, 0, 0}},
    {4, 4, {1, 3, 5, 13, 0, 0}},
    {5, 2, {1, 1, 5, 5, 17, 0}},
    {5, 4, {1, 1, 5, 5, 5, 0}},
    {5, 7, {1, 1, 7, 11, 19, 0}},
    {5, 11, {1, 1, 5, 1, 1, 0}},
    {5, 13, {1, 1, 1, 3, 11, 0}},
    {5, 14, {1, 3, 5, 5, 31, 0}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
};

}  // namespace lscub::detail
