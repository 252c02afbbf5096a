#include "lscub/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <tuple>

namespace lscub {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

BasisSpec spec_for_degree(const ExperimentConfig& cfg, int degree) {
  BasisSpec spec;
  spec.family = cfg.family;
  if (cfg.family == BasisSpec::Family::CubicPhsPlusConstant) {
    spec.center_count = degree;
  } else {
    spec.degree = degree;
  }
  return spec;
}

double relative_error(double approx, double reference) {
  const double denom = std::abs(reference) > 1e-300 ? std::abs(reference) : 1.0;
  return std::abs(approx - reference) / denom;
}

struct TrialIntegrand {
  std::function<double(const Vector&)> f;
  double reference = 0.0;
};

// Named fixed integrands from the error studies; references go through the
// quadrature oracle on the configured domain and weight.
std::optional<std::function<double(const Vector&)>> fixed_integrand(const std::string& name) {
  if (name == "test-a") {
    return [](const Vector& x) { return std::acos(x[0]) * std::acos(x[1]); };
  }
  if (name == "test-b" || name == "test-c") {
    return [](const Vector& x) { return 1.0 / (1.0 + x.squaredNorm()) + std::sin(x[0]); };
  }
  if (name == "nonstandard-exp") {
    return [](const Vector& x) { return std::exp(-x.squaredNorm()); };
  }
  return std::nullopt;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const size_t mid = v.size() / 2;
  if (v.size() % 2 == 1) return v[mid];
  return 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

CubatureRule qmc_rule(const PointSet& pts, const Domain& domain, const WeightFunction& weight) {
  CubatureRule rule;
  rule.weights = discrete_weights(pts, weight, domain.volume()).r;
  rule.points = pts;
  rule.positive = rule.weights.minCoeff() > 0.0;
  rule.kind = CubatureRule::Kind::Qmc;
  return rule;
}

CubatureRule product_legendre_rule(int n_per_axis, const Domain& box) {
  if (box.kind() != Domain::Kind::Box) {
    throw config_error("product_legendre_rule needs a box domain");
  }
  if (n_per_axis < 1) throw config_error("product_legendre_rule needs n >= 1");
  const auto& bounds = box.box_bounds();
  const int dim = box.dim();
  const Rule1D gl = gauss_legendre_1d(n_per_axis);

  long total = 1;
  for (int j = 0; j < dim; ++j) total *= n_per_axis;
  CubatureRule rule;
  rule.points.pts.resize(dim, total);
  rule.weights.resize(total);

  std::vector<int> idx(dim, 0);
  for (long c = 0; c < total; ++c) {
    double w = 1.0;
    for (int j = 0; j < dim; ++j) {
      const double mid = 0.5 * (bounds[j].lo + bounds[j].hi);
      const double half = 0.5 * bounds[j].length();
      rule.points.pts(j, c) = mid + half * gl.nodes[idx[j]];
      w *= half * gl.weights[idx[j]];
    }
    rule.weights[c] = w;
    int j = 0;
    while (j < dim && ++idx[j] == n_per_axis) idx[j++] = 0;
  }
  rule.positive = true;
  rule.kind = CubatureRule::Kind::ProductLegendre;
  return rule;
}

FitResult fit_power_law(const std::vector<std::pair<long, long>>& pairs) {
  if (pairs.size() < 3) throw config_error("fit_power_law needs at least 3 pairs");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [k, n] : pairs) {
    if (k <= 0 || n <= 0) throw config_error("fit_power_law needs positive pairs");
    const double x = std::log(static_cast<double>(k));
    const double y = std::log(static_cast<double>(n));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double count = static_cast<double>(pairs.size());
  const double denom = count * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) throw config_error("fit_power_law: degenerate abscissae");
  FitResult fit;
  fit.s = (count * sxy - sx * sy) / denom;
  fit.c = std::exp((sy - fit.s * sx) / count);
  fit.pairs = pairs;
  return fit;
}

RatioResult run_ratio_experiment(const ExperimentConfig& cfg) {
  if (cfg.degrees.empty()) throw config_error("ratio experiment needs a degree range");
  if (cfg.generators.size() != 1) {
    throw config_error("ratio experiment runs one generator kind at a time");
  }
  GeneratorSpec gen;
  gen.kind = cfg.generators.front();
  gen.seed = cfg.seed;

  RatioResult result;
  for (int degree : cfg.degrees) {
    const BasisSpec spec = spec_for_degree(cfg, degree);
    const Basis basis = make_basis(spec, cfg.domain);
    const MomentVector m = moments(basis, cfg.domain, cfg.weight, cfg.build.moments);
    const auto provider = [&](long count) {
      return generate_in_domain(gen, cfg.domain, cfg.weight, count);
    };

    RatioPoint point;
    point.degree = degree;
    point.k = basis.size();
    try {
      const BuildResult built =
          build_positive_lscf(basis, m, cfg.domain, cfg.weight, provider, cfg.build);
      point.n = built.report.final_n;
      if (cfg.refine && built.report.attempts.size() >= 2) {
        // smallest positive N inside the last doubling interval
        const auto positive_at = [&](long count) {
          const PointSet ps = provider(count);
          const Matrix phi = basis.eval_matrix(ps.pts);
          const DiscreteWeights r = discrete_weights(ps, cfg.weight, cfg.domain.volume());
          try {
            return ls_weights(phi, r, m.values, cfg.build.rank_rel_tol).minCoeff() > 0.0;
          } catch (const rank_error&) {
            return false;
          }
        };
        long lo = point.n / 2;
        long hi = point.n;
        while (hi - lo > 1) {
          const long mid = lo + (hi - lo) / 2;
          if (positive_at(mid)) {
            hi = mid;
          } else {
            lo = mid;
          }
        }
        point.n = hi;
        point.refined = true;
      }
    } catch (const build_error& e) {
      point.n = 0;
      point.status = e.what();
    }
    result.points.push_back(std::move(point));
  }

  std::vector<std::pair<long, long>> pairs;
  for (const auto& p : result.points) {
    if (p.status.empty() && p.k >= 2) pairs.emplace_back(p.k, p.n);
  }
  if (pairs.size() >= 3) result.fit = fit_power_law(pairs);
  return result;
}

ErrorTable run_error_experiment(const ExperimentConfig& cfg) {
  if (cfg.degrees.empty()) throw config_error("error experiment needs a degree range");
  if (cfg.generators.empty()) throw config_error("error experiment needs generator kinds");
  if (cfg.functions.empty()) throw config_error("error experiment needs integrands");
  if (cfg.trials < 1) throw config_error("error experiment needs trial count >= 1");
  const int dim = cfg.domain.dim();

  // Genz shape/translation draws are fixed per (function, trial) so every
  // degree and generator sees the same 20 integrands.
  std::map<std::pair<std::string, int>, TrialIntegrand> genz_cache;
  std::map<std::string, TrialIntegrand> fixed_cache;
  const auto integrand_for = [&](const std::string& name, int trial) -> const TrialIntegrand& {
    if (const auto kind = genz_kind_from_name(name)) {
      const auto key = std::make_pair(name, trial);
      auto it = genz_cache.find(key);
      if (it == genz_cache.end()) {
        const std::uint64_t s = splitmix64(splitmix64(cfg.seed ^ 0x67656e7aULL) +
                                           1000003ULL * static_cast<int>(*kind) +
                                           static_cast<std::uint64_t>(trial));
        RandomStream stream(s, dim);
        GenzFunction g;
        g.kind = *kind;
        g.a = stream.next();
        g.b = stream.next();
        TrialIntegrand ti;
        ti.f = [g](const Vector& x) { return genz_eval(g, x); };
        ti.reference = genz_reference(g, dim);
        it = genz_cache.emplace(key, std::move(ti)).first;
      }
      return it->second;
    }
    auto it = fixed_cache.find(name);
    if (it == fixed_cache.end()) {
      const auto f = fixed_integrand(name);
      if (!f) throw config_error("unknown experiment integrand: " + name);
      const IntegrationResult res = reference_integrate(*f, cfg.domain, cfg.weight, 60);
      if (res.error_estimate > 1e-10 * (1.0 + std::abs(res.value))) {
        throw numerical_error("reference for integrand '" + name + "' did not converge");
      }
      TrialIntegrand ti;
      ti.f = *f;
      ti.reference = res.value;
      it = fixed_cache.emplace(name, std::move(ti)).first;
    }
    return it->second;
  };

  // basis and moments are shared across generators
  std::map<int, std::pair<Basis, MomentVector>> space_cache;
  const auto space_for = [&](int degree) -> const std::pair<Basis, MomentVector>& {
    auto it = space_cache.find(degree);
    if (it == space_cache.end()) {
      Basis basis = make_basis(spec_for_degree(cfg, degree), cfg.domain);
      MomentVector m = moments(basis, cfg.domain, cfg.weight, cfg.build.moments);
      it = space_cache.emplace(degree, std::make_pair(std::move(basis), std::move(m))).first;
    }
    return it->second;
  };

  ErrorTable table;
  for (const auto gen_kind : cfg.generators) {
    GeneratorSpec gen;
    gen.kind = gen_kind;
    gen.seed = cfg.seed;
    for (int degree : cfg.degrees) {
      const auto& [basis, m] = space_for(degree);

      std::string cell_status;
      std::optional<CubatureRule> ls, interp, qmc, legendre;
      try {
        const auto provider = [&](long count) {
          return generate_in_domain(gen, cfg.domain, cfg.weight, count);
        };
        BuildResult built =
            build_positive_lscf(basis, m, cfg.domain, cfg.weight, provider, cfg.build);
        interp = steinitz_reduce(built.rule, basis, m.values);
        qmc = qmc_rule(built.rule.points, cfg.domain, cfg.weight);
        int n_leg = std::max(1, static_cast<int>(std::floor(
                                    std::pow(static_cast<double>(built.rule.points.size()),
                                             1.0 / dim))));
        while (std::pow(static_cast<double>(n_leg), dim) <
               static_cast<double>(built.rule.points.size())) {
          ++n_leg;
        }
        const Domain leg_box = cfg.domain.kind() == Domain::Kind::Box
                                   ? cfg.domain
                                   : Domain::box(cfg.domain.bounding_box());
        legendre = product_legendre_rule(n_leg, leg_box);
        ls = std::move(built.rule);
      } catch (const error& e) {
        cell_status = e.what();
      }

      for (const auto& name : cfg.functions) {
        const bool randomized = genz_kind_from_name(name).has_value();
        const int trials = randomized ? cfg.trials : 1;
        for (int trial = 1; trial <= trials; ++trial) {
          ErrorRecord rec;
          rec.function = name;
          rec.generator = gen_kind;
          rec.degree = degree;
          rec.k = basis.size();
          rec.trial = trial;
          if (!cell_status.empty()) {
            rec.status = cell_status;
            table.records.push_back(std::move(rec));
            continue;
          }
          rec.n_ls = ls->points.size();
          rec.n_interp = interp->points.size();
          try {
            const TrialIntegrand& ti = integrand_for(name, trial);
            rec.err_ls = relative_error(apply_rule(*ls, ti.f), ti.reference);
            rec.err_interp = relative_error(apply_rule(*interp, ti.f), ti.reference);
            rec.err_qmc = relative_error(apply_rule(*qmc, ti.f), ti.reference);
            // the product rule integrates f*omega over the (bounding) box,
            // restricted to the domain when the domain is not the box itself
            const auto& f = ti.f;
            const auto transformed = [&](const Vector& x) {
              if (cfg.domain.kind() != Domain::Kind::Box && !cfg.domain.contains(x)) return 0.0;
              return f(x) * cfg.weight(x);
            };
            rec.err_legendre = relative_error(apply_rule(*legendre, transformed), ti.reference);
          } catch (const error& e) {
            rec.status = e.what();
          }
          table.records.push_back(std::move(rec));
        }
      }
    }
  }
  return table;
}

std::vector<AggregateRecord> aggregate_errors(const ErrorTable& table) {
  std::vector<AggregateRecord> out;
  const auto find_cell = [&](const ErrorRecord& rec) -> AggregateRecord* {
    for (auto& agg : out) {
      if (agg.function == rec.function && agg.generator == rec.generator &&
          agg.degree == rec.degree) {
        return &agg;
      }
    }
    return nullptr;
  };

  for (const auto& rec : table.records) {
    if (!rec.status.empty()) continue;
    if (!find_cell(rec)) {
      AggregateRecord fresh;
      fresh.function = rec.function;
      fresh.generator = rec.generator;
      fresh.degree = rec.degree;
      fresh.k = rec.k;
      fresh.n_ls = rec.n_ls;
      fresh.n_interp = rec.n_interp;
      out.push_back(std::move(fresh));
    }
  }
  std::map<std::tuple<std::string, int, int>, std::array<std::vector<double>, 4>> buckets;
  for (const auto& rec : table.records) {
    if (!rec.status.empty()) continue;
    auto& bucket =
        buckets[{rec.function, static_cast<int>(rec.generator), rec.degree}];
    bucket[0].push_back(rec.err_ls);
    bucket[1].push_back(rec.err_interp);
    bucket[2].push_back(rec.err_qmc);
    bucket[3].push_back(rec.err_legendre);
  }
  for (auto& agg : out) {
    const auto& bucket =
        buckets[{agg.function, static_cast<int>(agg.generator), agg.degree}];
    agg.trials = static_cast<long>(bucket[0].size());
    agg.median_ls = median_of(bucket[0]);
    agg.max_ls = bucket[0].empty() ? 0.0 : *std::max_element(bucket[0].begin(), bucket[0].end());
    agg.median_interp = median_of(bucket[1]);
    agg.max_interp =
        bucket[1].empty() ? 0.0 : *std::max_element(bucket[1].begin(), bucket[1].end());
    agg.median_qmc = median_of(bucket[2]);
    agg.max_qmc = bucket[2].empty() ? 0.0 : *std::max_element(bucket[2].begin(), bucket[2].end());
    agg.median_legendre = median_of(bucket[3]);
    agg.max_legendre =
        bucket[3].empty() ? 0.0 : *std::max_element(bucket[3].begin(), bucket[3].end());
  }
  return out;
}

}  // namespace lscub
