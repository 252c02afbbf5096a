#include "lscub/points.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace lscub {

namespace detail {
struct SobolPoly {
  int degree;
  unsigned a;
  std::array<unsigned, 6> m;
};
extern const SobolPoly kSobolTable[15];
}  // namespace detail

namespace {

constexpr int kSobolMaxDim = 16;
constexpr int kSobolBits = 52;  // supports indices below 2^52, exact in a double

std::vector<int> first_primes(int count) {
  std::vector<int> primes;
  primes.reserve(count);
  for (int n = 2; static_cast<int>(primes.size()) < count; ++n) {
    bool is_prime = true;
    for (int p : primes) {
      if (p * p > n) break;
      if (n % p == 0) {
        is_prime = false;
        break;
      }
    }
    if (is_prime) primes.push_back(n);
  }
  return primes;
}

double radical_inverse(long index, int base) {
  double x = 0.0;
  double digit_weight = 1.0 / base;
  for (long n = index; n > 0; n /= base) {
    x += static_cast<double>(n % base) * digit_weight;
    digit_weight /= base;
  }
  return x;
}

// v[j][k]: direction number k (1-based) of dimension j+1, as a 2^-64 fixed point.
const std::vector<std::array<std::uint64_t, kSobolBits + 1>>& sobol_directions() {
  static const auto table = [] {
    std::vector<std::array<std::uint64_t, kSobolBits + 1>> v(kSobolMaxDim);
    for (int dim = 0; dim < kSobolMaxDim; ++dim) {
      std::array<std::uint64_t, kSobolBits + 1> m{};
      if (dim == 0) {
        for (int k = 1; k <= kSobolBits; ++k) m[k] = 1;
      } else {
        const auto& poly = detail::kSobolTable[dim - 1];
        const int s = poly.degree;
        for (int k = 1; k <= s; ++k) m[k] = poly.m[k - 1];
        for (int k = s + 1; k <= kSobolBits; ++k) {
          std::uint64_t mk = m[k - s] ^ (m[k - s] << s);
          for (int t = 1; t < s; ++t) {
            if ((poly.a >> (s - 1 - t)) & 1u) mk ^= m[k - t] << t;
          }
          m[k] = mk;
        }
      }
      for (int k = 1; k <= kSobolBits; ++k) v[dim][k] = m[k] << (64 - k);
    }
    return v;
  }();
  return table;
}

double to_unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

long GeneratorSpec::effective_skip() const {
  if (skip >= 0) return skip;
  return kind == Kind::Sobol ? 1 : 0;
}

Vector halton_point(long index, int dim) {
  if (dim < 1) throw config_error("halton_point needs dimension >= 1");
  if (index < 1) throw config_error("halton_point needs index >= 1");
  static const std::vector<int> primes = first_primes(64);
  std::vector<int> extra;
  const std::vector<int>* bases = &primes;
  if (dim > static_cast<int>(primes.size())) {
    extra = first_primes(dim);
    bases = &extra;
  }
  Vector x(dim);
  for (int j = 0; j < dim; ++j) x[j] = radical_inverse(index, (*bases)[j]);
  return x;
}

int sobol_max_dimension() { return kSobolMaxDim; }

Vector sobol_point(long index, int dim) {
  if (dim < 1) throw config_error("sobol_point needs dimension >= 1");
  if (dim > kSobolMaxDim) {
    throw config_error("sobol_point supports dimensions up to " +
                       std::to_string(kSobolMaxDim));
  }
  if (index < 0 || index >= (1L << kSobolBits)) {
    throw config_error("sobol_point index out of range");
  }
  const auto& v = sobol_directions();
  const std::uint64_t gray =
      static_cast<std::uint64_t>(index) ^ (static_cast<std::uint64_t>(index) >> 1);
  Vector x(dim);
  for (int j = 0; j < dim; ++j) {
    std::uint64_t acc = 0;
    for (int bit = 0; bit < kSobolBits; ++bit) {
      if ((gray >> bit) & 1u) acc ^= v[j][bit + 1];
    }
    x[j] = to_unit_double(acc);
  }
  return x;
}

RandomStream::RandomStream(std::uint64_t seed, int dim) : engine_(seed), dim_(dim) {
  if (dim < 1) throw config_error("RandomStream needs dimension >= 1");
}

Vector RandomStream::next() {
  Vector x(dim_);
  for (int j = 0; j < dim_; ++j) x[j] = to_unit_double(engine_());
  return x;
}

PointSet generate_in_domain(const GeneratorSpec& spec, const Domain& domain,
                            const WeightFunction& weight, long count) {
  if (count < 1) throw config_error("generate_in_domain needs count >= 1");
  const int dim = domain.dim();
  const auto& bbox = domain.bounding_box();
  const long skip = spec.effective_skip();

  RandomStream stream(spec.seed, dim);
  if (spec.kind == GeneratorSpec::Kind::Random) {
    for (long i = 0; i < skip; ++i) stream.next();
  }
  auto raw_point = [&](long i) -> Vector {
    switch (spec.kind) {
      case GeneratorSpec::Kind::Halton:
        return halton_point(1 + skip + i, dim);
      case GeneratorSpec::Kind::Sobol:
        return sobol_point(skip + i, dim);
      case GeneratorSpec::Kind::Random:
        return stream.next();
    }
    throw config_error("unknown generator kind");
  };

  Matrix pts(dim, count);
  long accepted = 0;
  long raw = 0;
  Vector x(dim);
  while (accepted < count) {
    if (raw >= kMaxRawCandidates) {
      throw numerical_error("acceptance rate too low: " + std::to_string(raw) +
                            " raw candidates produced only " + std::to_string(accepted) +
                            " in-domain points");
    }
    const Vector u = raw_point(raw);
    ++raw;
    for (int j = 0; j < dim; ++j) x[j] = bbox[j].lo + bbox[j].length() * u[j];
    if (!domain.contains(x)) continue;
    if (!(weight(x) > 0.0)) continue;
    pts.col(accepted++) = x;
  }

  PointSet out;
  out.pts = std::move(pts);
  out.provenance = Provenance{spec, raw};
  return out;
}

}  // namespace lscub
