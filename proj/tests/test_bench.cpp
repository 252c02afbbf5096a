#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lscub/experiments.hpp"
#include "lscub/io.hpp"

using namespace lscub;

namespace {

Domain cube2() { return *io::domain_preset("cube2"); }
Domain unit_cube2() { return *io::domain_preset("unit-cube2"); }

Vector vec2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

GenzFunction genz(GenzFunction::Kind kind, Vector a, Vector b) {
  GenzFunction g;
  g.kind = kind;
  g.a = std::move(a);
  g.b = std::move(b);
  return g;
}

}  // namespace

TEST_CASE("genz evaluation") {
  CHECK(genz_eval(genz(GenzFunction::Kind::Gaussian, Vector::Zero(2), vec2(0.3, 0.9)),
                  vec2(0.5, 0.5)) == 1.0);
  CHECK(genz_eval(genz(GenzFunction::Kind::Oscillatory, Vector::Zero(2), Vector::Zero(2)),
                  vec2(0.8, 0.1)) == 1.0);
  CHECK(genz_eval(genz(GenzFunction::Kind::CornerPeak, vec2(1, 1), Vector::Zero(2)),
                  vec2(1, 1)) == doctest::Approx(1.0 / 27.0).epsilon(1e-15));
  CHECK_THROWS_AS(genz_eval(genz(GenzFunction::Kind::Gaussian, Vector::Zero(3), Vector::Zero(2)),
                            vec2(0, 0)),
                  config_error);
}

TEST_CASE("genz references against separable closed forms") {
  // gaussian a=(1,1), b=(.5,.5): (sqrt(pi) erf(1/2))^2
  const double g = genz_reference(genz(GenzFunction::Kind::Gaussian, vec2(1, 1), vec2(0.5, 0.5)), 2);
  const double axis = std::sqrt(std::numbers::pi) * std::erf(0.5);
  CHECK(g == doctest::Approx(axis * axis).epsilon(1e-13));

  // product peak a=(1,1), b=(0,0): (arctan 1)^2 = pi^2/16
  const double p =
      genz_reference(genz(GenzFunction::Kind::ProductPeak, vec2(1, 1), Vector::Zero(2)), 2);
  CHECK(p == doctest::Approx(std::pow(std::numbers::pi, 2) / 16.0).epsilon(1e-13));

  // oscillatory with a = 0, b1 = 0 integrates to 1
  CHECK(genz_reference(genz(GenzFunction::Kind::Oscillatory, Vector::Zero(2), Vector::Zero(2)),
                       2) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("qmc rule weights are the discrete weights") {
  GeneratorSpec gen;
  const PointSet pts = generate_in_domain(gen, cube2(), WeightFunction::one(), 8);
  const CubatureRule rule = qmc_rule(pts, cube2(), WeightFunction::one());
  CHECK((rule.weights.array() == 0.5).all());
  const DiscreteWeights r = discrete_weights(pts, WeightFunction::one(), 4.0);
  CHECK((rule.weights - r.r).cwiseAbs().maxCoeff() == 0.0);
  CHECK(apply_rule(rule, [](const Vector&) { return 1.0; }) ==
        doctest::Approx(4.0).epsilon(1e-14));
  CHECK(rule.kind == CubatureRule::Kind::Qmc);
}

TEST_CASE("product legendre rule") {
  const CubatureRule r1 = product_legendre_rule(1, cube2());
  REQUIRE(r1.points.size() == 1);
  CHECK(r1.points.pts.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r1.weights[0] == doctest::Approx(4.0).epsilon(1e-15));

  const CubatureRule r2 = product_legendre_rule(2, cube2());
  REQUIRE(r2.points.size() == 4);
  for (long i = 0; i < 4; ++i) {
    CHECK(std::abs(std::abs(r2.points.pts(0, i)) - 1.0 / std::sqrt(3.0)) <= 1e-15);
    CHECK(r2.weights[i] == doctest::Approx(1.0).epsilon(1e-14));
  }

  const CubatureRule r3 = product_legendre_rule(3, cube2());
  const double v =
      apply_rule(r3, [](const Vector& x) { return x[0] * x[0] * x[1] * x[1]; });
  CHECK(std::abs(v - 4.0 / 9.0) <= 1e-14);
  CHECK(r3.weights.minCoeff() > 0.0);
  CHECK(std::abs(r3.weights.sum() - 4.0) <= 1e-13 * 4.0);

  CHECK_THROWS_AS(product_legendre_rule(2, *io::domain_preset("ball2")), config_error);
}

TEST_CASE("power-law fit on synthetic pairs") {
  std::vector<std::pair<long, long>> quadratic, linear;
  for (long k = 2; k <= 40; k += 3) {
    quadratic.emplace_back(k, 2 * k * k);
    linear.emplace_back(k, k);
  }
  const FitResult f2 = fit_power_law(quadratic);
  CHECK(std::abs(f2.c - 2.0) <= 1e-12);
  CHECK(std::abs(f2.s - 2.0) <= 1e-12);
  const FitResult f1 = fit_power_law(linear);
  CHECK(std::abs(f1.c - 1.0) <= 1e-12);
  CHECK(std::abs(f1.s - 1.0) <= 1e-12);
  CHECK_THROWS_AS(fit_power_law({{2, 4}, {3, 9}}), config_error);
}

TEST_CASE("ratio experiment on the cube") {
  ExperimentConfig cfg;
  cfg.domain = cube2();
  cfg.degrees = {1, 2, 3, 4, 5};
  cfg.generators = {GeneratorSpec::Kind::Halton};
  cfg.refine = true;
  const RatioResult res = run_ratio_experiment(cfg);
  REQUIRE(res.points.size() == 5);
  long prev_n = 0;
  for (const auto& p : res.points) {
    CHECK(p.status.empty());
    CHECK(p.n >= p.k);
    CHECK(p.n >= prev_n);
    prev_n = p.n;
  }
  CHECK(res.points[1].k == 6);
  REQUIRE(res.fit.has_value());
  CHECK(res.fit->s > 0.5);
  CHECK(res.fit->s < 2.5);

  // refinement never reports a larger N than plain doubling
  ExperimentConfig coarse = cfg;
  coarse.refine = false;
  const RatioResult res2 = run_ratio_experiment(coarse);
  for (size_t i = 0; i < res.points.size(); ++i) {
    CHECK(res.points[i].n <= res2.points[i].n);
  }
}

TEST_CASE("error experiment: determinism and cell structure") {
  ExperimentConfig cfg;
  cfg.domain = unit_cube2();
  cfg.degrees = {2, 4};
  cfg.generators = {GeneratorSpec::Kind::Halton};
  cfg.trials = 3;
  cfg.seed = 7;
  cfg.functions = {"gaussian"};
  const ErrorTable a = run_error_experiment(cfg);
  const ErrorTable b = run_error_experiment(cfg);
  REQUIRE(a.records.size() == 6);  // 2 degrees x 3 trials
  REQUIRE(b.records.size() == 6);
  for (size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].err_ls == b.records[i].err_ls);
    CHECK(a.records[i].err_qmc == b.records[i].err_qmc);
    CHECK(a.records[i].status.empty());
    CHECK(a.records[i].n_interp <= a.records[i].k);
    CHECK(a.records[i].err_ls >= 0.0);
    CHECK(std::isfinite(a.records[i].err_legendre));
  }

  const auto agg = aggregate_errors(a);
  REQUIRE(agg.size() == 2);
  CHECK(agg[0].trials == 3);
  // the same 3 gaussian integrands at a higher degree: median error shrinks
  CHECK(agg[1].median_ls < agg[0].median_ls);
}

TEST_CASE("error experiment records builder failures per cell without aborting") {
  ExperimentConfig cfg;
  cfg.domain = unit_cube2();
  cfg.degrees = {1, 6};  // degree 6 cannot reach positivity under the tiny cap
  cfg.generators = {GeneratorSpec::Kind::Halton};
  cfg.trials = 2;
  cfg.functions = {"gaussian"};
  cfg.build.n_max = 40;
  const ErrorTable table = run_error_experiment(cfg);
  REQUIRE(table.records.size() == 4);
  int failed = 0, ok = 0;
  for (const auto& rec : table.records) {
    if (rec.status.empty()) {
      ++ok;
    } else {
      ++failed;
      CHECK(rec.degree == 6);
    }
  }
  CHECK(ok == 2);
  CHECK(failed == 2);
  // failed cells drop out of the aggregates
  const auto agg = aggregate_errors(table);
  REQUIRE(agg.size() == 1);
  CHECK(agg[0].degree == 1);
}

TEST_CASE("error experiment covers the fixed named integrands") {
  ExperimentConfig cfg;
  cfg.domain = *io::domain_preset("nonstandard");
  cfg.degrees = {2};
  cfg.generators = {GeneratorSpec::Kind::Halton};
  cfg.trials = 5;  // fixed integrands still run a single trial
  cfg.functions = {"nonstandard-exp"};
  const ErrorTable table = run_error_experiment(cfg);
  REQUIRE(table.records.size() == 1);
  CHECK(table.records[0].status.empty());
  CHECK(table.records[0].err_ls < 1.0);
  CHECK(table.records[0].err_qmc < 1.0);
}
