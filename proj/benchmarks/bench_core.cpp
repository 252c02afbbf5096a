#include <benchmark/benchmark.h>

#include "lscub/experiments.hpp"
#include "lscub/io.hpp"

using namespace lscub;

namespace {

Domain cube2() { return *io::domain_preset("cube2"); }

BasisSpec algebraic(int degree) {
  BasisSpec spec;
  spec.degree = degree;
  return spec;
}

void BM_HaltonGenerate(benchmark::State& state) {
  const long count = state.range(0);
  GeneratorSpec gen;
  const Domain domain = cube2();
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_in_domain(gen, domain, WeightFunction::one(), count));
  }
  state.SetItemsProcessed(state.iterations() * count);
}
BENCHMARK(BM_HaltonGenerate)->Arg(1 << 10)->Arg(1 << 14);

void BM_EvalBasisMatrix(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  const Domain domain = cube2();
  const Basis basis = make_basis(algebraic(degree), domain);
  GeneratorSpec gen;
  const PointSet pts = generate_in_domain(gen, domain, WeightFunction::one(), 4096);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_basis_matrix(basis, pts));
  }
}
BENCHMARK(BM_EvalBasisMatrix)->Arg(4)->Arg(8)->Arg(12);

void BM_LsWeights(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  const Domain domain = cube2();
  const Basis basis = make_basis(algebraic(degree), domain);
  GeneratorSpec gen;
  const PointSet pts =
      generate_in_domain(gen, domain, WeightFunction::one(), 16 * basis.size());
  const Matrix phi = eval_basis_matrix(basis, pts);
  const DiscreteWeights r = discrete_weights(pts, WeightFunction::one(), 4.0);
  const MomentVector m = moments(basis, domain, WeightFunction::one());
  for (auto _ : state) {
    benchmark::DoNotOptimize(ls_weights(phi, r, m.values));
  }
}
BENCHMARK(BM_LsWeights)->Arg(4)->Arg(8)->Arg(12);

void BM_BuildPositive(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  const Domain domain = cube2();
  GeneratorSpec gen;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        build_positive_lscf(algebraic(degree), domain, WeightFunction::one(), gen));
  }
}
BENCHMARK(BM_BuildPositive)->Arg(4)->Arg(8);

void BM_SteinitzReduce(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  const Domain domain = cube2();
  const Basis basis = make_basis(algebraic(degree), domain);
  const MomentVector m = moments(basis, domain, WeightFunction::one());
  GeneratorSpec gen;
  const BuildResult built =
      build_positive_lscf(algebraic(degree), domain, WeightFunction::one(), gen);
  for (auto _ : state) {
    benchmark::DoNotOptimize(steinitz_reduce(built.rule, basis, m.values));
  }
  state.counters["N"] = static_cast<double>(built.rule.points.size());
  state.counters["K"] = static_cast<double>(basis.size());
}
BENCHMARK(BM_SteinitzReduce)->Arg(4)->Arg(8)->Arg(12);

void BM_NnlsWeights(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  const Domain domain = cube2();
  const Basis basis = make_basis(algebraic(degree), domain);
  const MomentVector m = moments(basis, domain, WeightFunction::one());
  GeneratorSpec gen;
  const BuildResult built =
      build_positive_lscf(algebraic(degree), domain, WeightFunction::one(), gen);
  const Matrix phi = eval_basis_matrix(basis, built.rule.points);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nnls_weights(phi, m.values));
  }
}
BENCHMARK(BM_NnlsWeights)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
