#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "lscub/geometry.hpp"
#include "lscub/types.hpp"

namespace lscub {

struct GeneratorSpec {
  enum class Kind { Halton, Sobol, Random };

  Kind kind = Kind::Halton;
  std::uint64_t seed = 0;  // Kind::Random only
  long skip = -1;          // raw elements discarded up front; -1 selects the family default

  // Defaults: halton 0 (the sequence starts at index 1 anyway), sobol 1 (index 0
  // sits exactly on a box corner), random 0.
  long effective_skip() const;
};

struct Provenance {
  GeneratorSpec spec;
  long raw_consumed = 0;  // raw sequence elements drawn, including rejected ones
};

struct PointSet {
  Matrix pts;  // d x N, one column per point
  std::optional<Provenance> provenance;

  int dim() const { return static_cast<int>(pts.rows()); }
  long size() const { return pts.cols(); }
};

// Coordinate j is the radical inverse of `index` in the j-th prime base.
// The sequence starts at index 1; index 0 would be the all-zeros point.
Vector halton_point(long index, int dim);

// Gray-code Sobol point; dimension 1 equals the base-2 radical-inverse
// (van der Corput) sequence. Supported up to sobol_max_dimension().
Vector sobol_point(long index, int dim);
int sobol_max_dimension();

// Deterministic uniform stream on [0,1)^d; identical seeds give identical points.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, int dim);
  Vector next();

 private:
  std::mt19937_64 engine_;
  int dim_;
};

inline constexpr long kMaxRawCandidates = 1'000'000'000;

// Rejection restriction of a cube sequence to a general domain: raw points are
// mapped affinely onto the bounding box and kept iff they lie in the domain
// with positive weight. Returns the first `count` survivors in order; the
// provenance records how many raw candidates were consumed. Fails once
// kMaxRawCandidates raw elements have been drawn.
PointSet generate_in_domain(const GeneratorSpec& spec, const Domain& domain,
                            const WeightFunction& weight, long count);

}  // namespace lscub
