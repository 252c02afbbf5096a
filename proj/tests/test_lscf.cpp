#include <doctest.h>

#include <Eigen/LU>
#include <cmath>
#include <numbers>
#include <random>

#include "lscub/io.hpp"
#include "lscub/lscf.hpp"
#include "lscub/subsample.hpp"

using namespace lscub;

namespace {

Domain cube2() { return *io::domain_preset("cube2"); }
Domain line() { return Domain::box({{-1, 1}}); }

BasisSpec algebraic(int degree) {
  BasisSpec spec;
  spec.degree = degree;
  return spec;
}

// the {1, x} setup at nodes (-1, 0, 1) with unit weight on [-1, 1]
struct LineFixture {
  Basis basis = make_basis(algebraic(1), line());
  PointSet pts;
  DiscreteWeights r;
  Vector m;

  LineFixture() {
    pts.pts.resize(1, 3);
    pts.pts << -1, 0, 1;
    r = discrete_weights(pts, WeightFunction::one(), 2.0);
    m.resize(2);
    m << 2, 0;
  }
};

}  // namespace

TEST_CASE("discrete weights r_n = |Omega| omega(x_n) / N") {
  PointSet four;
  four.pts = 0.25 * Matrix::Random(2, 4);
  const DiscreteWeights r4 = discrete_weights(four, WeightFunction::one(), 4.0);
  CHECK((r4.r.array() == 1.0).all());

  PointSet ten;
  ten.pts = 0.25 * Matrix::Random(2, 10);
  const DiscreteWeights r10 =
      discrete_weights(ten, WeightFunction::one(), std::numbers::pi);
  CHECK(r10.r[3] == doctest::Approx(std::numbers::pi / 10.0).epsilon(1e-15));

  PointSet origin;
  origin.pts = Matrix::Zero(2, 2);
  const DiscreteWeights rc =
      discrete_weights(origin, WeightFunction::chebyshev_product(), 4.0);
  CHECK(rc.r[0] == doctest::Approx(2.0).epsilon(1e-15));

  // radial weight vanishes at the origin: rejected
  CHECK_THROWS_AS(discrete_weights(origin, WeightFunction::radial_power(0.5), 4.0),
                  config_error);
}

TEST_CASE("ls_weights: constants give the uniform minimum-norm solution") {
  const Basis constant = make_basis(algebraic(0), cube2());
  GeneratorSpec gen;
  const PointSet pts = generate_in_domain(gen, cube2(), WeightFunction::one(), 37);
  const Matrix phi = eval_basis_matrix(constant, pts);
  const DiscreteWeights r = discrete_weights(pts, WeightFunction::one(), 4.0);
  Vector m(1);
  m << 4.0;
  const Vector w = ls_weights(phi, r, m);
  for (long i = 0; i < w.size(); ++i) {
    CHECK(w[i] == doctest::Approx(4.0 / 37.0).epsilon(1e-13));
  }
}

TEST_CASE("ls_weights: the {1,x} example solves to (2/3, 2/3, 2/3)") {
  LineFixture fx;
  const Matrix phi = eval_basis_matrix(fx.basis, fx.pts);
  const Vector w = ls_weights(phi, fx.r, fx.m);

  // independent oracle: w = R Phi^T (Phi R Phi^T)^{-1} m with the 2x2 gram
  // system solved by Cramer's rule
  const Matrix gram = phi * fx.r.r.asDiagonal() * phi.transpose();
  const double det = gram(0, 0) * gram(1, 1) - gram(0, 1) * gram(1, 0);
  Vector y(2);
  y[0] = (fx.m[0] * gram(1, 1) - fx.m[1] * gram(0, 1)) / det;
  y[1] = (gram(0, 0) * fx.m[1] - gram(1, 0) * fx.m[0]) / det;
  const Vector oracle = fx.r.r.asDiagonal() * phi.transpose() * y;

  REQUIRE(w.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(w[i] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(w[i] == doctest::Approx(oracle[i]).epsilon(1e-14));
  }
}

TEST_CASE("ls_weights at N = K returns the unique interpolatory solution") {
  const Basis basis = make_basis(algebraic(1), line());
  PointSet pts;
  pts.pts.resize(1, 2);
  pts.pts << 0, 1;
  const Matrix phi = eval_basis_matrix(basis, pts);
  const DiscreteWeights r = discrete_weights(pts, WeightFunction::one(), 2.0);
  Vector m(2);
  m << 2, 0;
  const Vector w = ls_weights(phi, r, m);
  CHECK(w[0] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(std::abs(w[1]) <= 1e-13);
}

TEST_CASE("rank_of") {
  CHECK(rank_of(Matrix::Identity(5, 5)) == 5);

  Matrix dup(2, 2);
  dup << 1, 1, 2, 2;
  CHECK(rank_of(dup) == 1);

  // 1d Vandermonde {1, x, x^2} at five distinct nodes is full rank; the
  // leading 3x3 subblock has a nonzero determinant as the independent witness
  Matrix vander(3, 5);
  const double nodes[5] = {-1.0, -0.3, 0.2, 0.6, 1.0};
  for (int c = 0; c < 5; ++c) {
    vander(0, c) = 1.0;
    vander(1, c) = nodes[c];
    vander(2, c) = nodes[c] * nodes[c];
  }
  const Matrix sub = vander.leftCols(3);
  const double det = sub.determinant();
  REQUIRE(std::abs(det) > 1e-3);
  CHECK(rank_of(vander) == 3);
}

TEST_CASE("builder: K = 1 terminates immediately with w = I[1]") {
  GeneratorSpec gen;
  const Domain ball = *io::domain_preset("ball2");
  const BuildResult res =
      build_positive_lscf(algebraic(0), ball, WeightFunction::radial_power(0.5), gen);
  CHECK(res.rule.points.size() == 1);
  CHECK(res.report.final_n == 1);
  CHECK(res.rule.weights[0] ==
        doctest::Approx(4.0 * std::numbers::pi / 5.0).epsilon(1e-14));
  CHECK(res.rule.positive);
  CHECK(res.report.terminated == BuildReport::Termination::Success);
}

TEST_CASE("builder: a repeating point source never reaches unisolvency") {
  const Basis basis = make_basis(algebraic(1), line());
  const MomentVector m = moments(basis, line(), WeightFunction::one());
  const PointProvider degenerate = [](long count) {
    PointSet ps;
    ps.pts = Matrix::Constant(1, count, 0.5);
    return ps;
  };
  BuildOptions opts;
  opts.n_max = 64;
  try {
    build_positive_lscf(basis, m, line(), WeightFunction::one(), degenerate, opts);
    FAIL("expected build_error");
  } catch (const build_error& e) {
    CHECK(std::string(e.what()).find("unisolvency not reached") != std::string::npos);
    CHECK(e.report.terminated == BuildReport::Termination::RankCap);
    CHECK(e.report.attempts.back().rank == 1);
    // attempt trace doubles N
    for (size_t i = 1; i < e.report.attempts.size(); ++i) {
      CHECK(e.report.attempts[i].n == 2 * e.report.attempts[i - 1].n);
    }
  }
}

TEST_CASE("builder: one-sided points keep a negative weight forever") {
  // all points in (0,1) but m = (2,0): sum w x = 0 forces a negative weight
  const Basis basis = make_basis(algebraic(1), line());
  const MomentVector m = moments(basis, line(), WeightFunction::one());
  const PointProvider one_sided = [](long count) {
    PointSet ps;
    ps.pts.resize(1, count);
    for (long i = 0; i < count; ++i) {
      ps.pts(0, i) = 0.1 + 0.8 * static_cast<double>(i) / std::max<long>(1, count);
    }
    return ps;
  };
  BuildOptions opts;
  opts.n_max = 64;
  try {
    build_positive_lscf(basis, m, line(), WeightFunction::one(), one_sided, opts);
    FAIL("expected build_error");
  } catch (const build_error& e) {
    CHECK(std::string(e.what()).find("positivity not reached") != std::string::npos);
    CHECK(e.report.terminated == BuildReport::Termination::PositivityCap);
  }
}

TEST_CASE("builder succeeds on the cube at degree 4") {
  GeneratorSpec gen;
  const BuildResult res = build_positive_lscf(algebraic(4), cube2(), WeightFunction::one(), gen);
  const Basis basis = make_basis(algebraic(4), cube2());
  const MomentVector m = moments(basis, cube2(), WeightFunction::one());
  CHECK(basis.size() == 15);
  CHECK(res.rule.positive);
  CHECK(res.rule.weights.minCoeff() > 0.0);
  CHECK(res.rule.points.size() <= 240);  // order-of-magnitude band around C K^s
  CHECK(res.rule.residual <= 1e-8 * (1.0 + m.values.norm()));

  // apply_rule: exactness on each basis function, f = 1, f = 0
  for (long k = 0; k < basis.size(); ++k) {
    const double ck = apply_rule(res.rule, [&](const Vector& x) { return basis.eval(k, x); });
    CHECK(std::abs(ck - m.values[k]) <= 1e-8 * (1.0 + std::abs(m.values[k])));
  }
  CHECK(apply_rule(res.rule, [](const Vector&) { return 1.0; }) ==
        doctest::Approx(4.0).epsilon(1e-12));
  CHECK(apply_rule(res.rule, [](const Vector&) { return 0.0; }) == 0.0);
  CHECK_THROWS_AS(apply_rule(res.rule, [](const Vector& x) { return std::sqrt(x[0] - 5.0); }),
                  numerical_error);

  // stability identity for the positive rule
  CHECK(std::abs(res.rule.weights.cwiseAbs().sum() - res.rule.weights.sum()) == 0.0);
  CHECK(std::abs(res.rule.weights.sum() - 4.0) <= 1e-10 * 4.0);
}

TEST_CASE("exactness_residual recomputes from scratch") {
  GeneratorSpec gen;
  const BuildResult res = build_positive_lscf(algebraic(3), cube2(), WeightFunction::one(), gen);
  const Basis basis = make_basis(algebraic(3), cube2());
  const MomentVector m = moments(basis, cube2(), WeightFunction::one());

  const double resid = exactness_residual(res.rule, basis, cube2(), WeightFunction::one());
  CHECK(resid <= 1e-10 * (1.0 + m.values.norm()));

  // perturbing one weight by +1 raises the residual to at least half the
  // perturbed column norm
  CubatureRule bumped = res.rule;
  bumped.weights[2] += 1.0;
  const Matrix phi = eval_basis_matrix(basis, res.rule.points);
  const double column_norm = phi.col(2).norm();
  CHECK(exactness_residual(bumped, basis, cube2(), WeightFunction::one()) >=
        0.5 * column_norm);

  // qmc rules are not exact
  CubatureRule qmc = res.rule;
  qmc.kind = CubatureRule::Kind::Qmc;
  qmc.weights = discrete_weights(res.rule.points, WeightFunction::one(), 4.0).r;
  CHECK(exactness_residual(qmc, basis, cube2(), WeightFunction::one()) > 1e-3);
}

TEST_CASE("minimum-norm optimality against kernel perturbations") {
  GeneratorSpec gen;
  const BuildResult res = build_positive_lscf(algebraic(3), cube2(), WeightFunction::one(), gen);
  const Basis basis = make_basis(algebraic(3), cube2());
  const Matrix phi = eval_basis_matrix(basis, res.rule.points);
  const DiscreteWeights r = discrete_weights(res.rule.points, WeightFunction::one(), 4.0);
  const Vector z = kernel_vector(phi);
  REQUIRE((phi * z).cwiseAbs().maxCoeff() <= 1e-10);

  const Vector rinv_sqrt = r.r.array().rsqrt();
  const double base = (rinv_sqrt.asDiagonal() * res.rule.weights).norm();
  for (const double t : {-1.0, -1e-3, 1e-3, 1.0}) {
    const Vector moved = res.rule.weights + t * z;
    CHECK((rinv_sqrt.asDiagonal() * moved).norm() > base);
  }
}

TEST_CASE("discrete orthonormalization") {
  // K = 1, four unit discrete weights: the normalized row is 1/2
  Matrix ones_row = Matrix::Ones(1, 4);
  DiscreteWeights r_unit;
  r_unit.r = Vector::Ones(4);
  const DiscreteOrthonormalBasis onb1 = discrete_orthonormalize(ones_row, r_unit);
  CHECK((onb1.b.array() == 0.5).all());

  // the {1,x} example: pi_2 takes values (-sqrt(3)/2, 0, sqrt(3)/2)
  LineFixture fx;
  const Matrix phi = eval_basis_matrix(fx.basis, fx.pts);
  const DiscreteOrthonormalBasis onb = discrete_orthonormalize(phi, fx.r);
  CHECK(onb.b(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(onb.b(1, 0) == doctest::Approx(-std::sqrt(3.0) / 2.0).epsilon(1e-14));
  CHECK(onb.b(1, 1) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(onb.b(1, 2) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
  CHECK(std::abs(onb.t(0, 1)) == 0.0);  // lower triangular

  // gram identity and idempotence: feeding back B returns B with T = I
  const Matrix gram = onb.b * fx.r.r.asDiagonal() * onb.b.transpose();
  CHECK((gram - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-10);
  const DiscreteOrthonormalBasis again = discrete_orthonormalize(onb.b, fx.r);
  CHECK((again.b - onb.b).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK((again.t - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-13);

  // breakdown on duplicated rows
  Matrix dup(2, 3);
  dup << 1, 1, 1, 1, 1, 1;
  DiscreteWeights r3;
  r3.r = Vector::Ones(3);
  CHECK_THROWS_AS(discrete_orthonormalize(dup, r3), rank_error);
}

TEST_CASE("explicit LS weights reproduce the minimum-norm solve") {
  // constants: w_n = r_n I[1] / sum(r)
  Matrix ones_row = Matrix::Ones(1, 4);
  DiscreteWeights r_unit;
  r_unit.r = Vector::Ones(4);
  const DiscreteOrthonormalBasis onb1 = discrete_orthonormalize(ones_row, r_unit);
  Vector m1(1);
  m1 << 4.0;
  const Vector w1 = explicit_ls_weights(onb1, r_unit, onb1.t * m1);
  CHECK((w1.array() == 1.0).all());

  // {1,x}: matches both the hand value and ls_weights
  LineFixture fx;
  const Matrix phi = eval_basis_matrix(fx.basis, fx.pts);
  const DiscreteOrthonormalBasis onb = discrete_orthonormalize(phi, fx.r);
  const Vector w = explicit_ls_weights(onb, fx.r, onb.t * fx.m);
  const Vector w_ls = ls_weights(phi, fx.r, fx.m);
  CHECK((w - w_ls).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(w[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  // seeded full-rank random instance, K = 4, N = 12
  std::mt19937_64 eng(2024);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Matrix phi_rand(4, 12);
  for (long i = 0; i < 4; ++i) {
    for (long j = 0; j < 12; ++j) phi_rand(i, j) = unif(eng);
  }
  DiscreteWeights r_rand;
  r_rand.r.resize(12);
  for (long j = 0; j < 12; ++j) r_rand.r[j] = 0.5 + 0.5 * std::abs(unif(eng));
  Vector m_rand(4);
  for (long i = 0; i < 4; ++i) m_rand[i] = unif(eng);

  const Vector a = ls_weights(phi_rand, r_rand, m_rand);
  const DiscreteOrthonormalBasis onb_rand = discrete_orthonormalize(phi_rand, r_rand);
  const Vector b = explicit_ls_weights(onb_rand, r_rand, onb_rand.t * m_rand);
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-9 * a.cwiseAbs().maxCoeff());
}

TEST_CASE("LS approximant integral equals the rule application") {
  GeneratorSpec gen;
  const BuildResult res = build_positive_lscf(algebraic(6), cube2(), WeightFunction::one(), gen);
  const Basis basis = make_basis(algebraic(6), cube2());
  const MomentVector m = moments(basis, cube2(), WeightFunction::one());
  const Matrix phi = eval_basis_matrix(basis, res.rule.points);
  const DiscreteWeights r = discrete_weights(res.rule.points, WeightFunction::one(), 4.0);

  // f = phi_j reproduces m_j, f = 0 gives 0
  CHECK(ls_approximant_integral(phi, r, m.values, phi.row(4).transpose()) ==
        doctest::Approx(m.values[4]).epsilon(1e-10));
  CHECK(ls_approximant_integral(phi, r, m.values, Vector::Zero(phi.cols())) == 0.0);

  // the gaussian integrand on the same samples matches apply_rule
  const auto f = [](const Vector& x) {
    return std::exp(-0.7 * (x[0] - 0.3) * (x[0] - 0.3) - 1.1 * (x[1] - 0.6) * (x[1] - 0.6));
  };
  Vector samples(phi.cols());
  for (long i = 0; i < phi.cols(); ++i) samples[i] = f(res.rule.points.pts.col(i));
  const double via_approximant = ls_approximant_integral(phi, r, m.values, samples);
  const double via_rule = apply_rule(res.rule, f);
  CHECK(std::abs(via_approximant - via_rule) <= 1e-9 * std::abs(via_rule));
}

TEST_CASE("qmc drift") {
  // K = 1 on a unit-weight box: w = r exactly, drift 0 at every N
  GeneratorSpec gen;
  const auto drift0 =
      qmc_drift(algebraic(0), cube2(), WeightFunction::one(), gen, {8, 64, 512});
  for (double d : drift0) CHECK(d <= 1e-15);

  // K = 15: strictly decreasing along N = 2^10, 2^12, 2^14
  const auto drift =
      qmc_drift(algebraic(4), cube2(), WeightFunction::one(), gen, {1 << 10, 1 << 12, 1 << 14});
  CHECK(drift[0] > drift[1]);
  CHECK(drift[1] > drift[2]);

  // deterministic
  const auto again =
      qmc_drift(algebraic(4), cube2(), WeightFunction::one(), gen, {1 << 10, 1 << 12, 1 << 14});
  for (size_t i = 0; i < drift.size(); ++i) CHECK(drift[i] == again[i]);
}
