// Command-line frontend: config parsing, subcommand dispatch, CSV/JSON output.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lscub/io.hpp"

namespace {

namespace fs = std::filesystem;
using njson = nlohmann::ordered_json;
using namespace lscub;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerify = 4;

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;  // key=value, dotted keys descend
};

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--config", common.config_path, "JSON config file (see CONFIG KEYS in --help)");
  cmd->add_option("--out", common.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--set", common.overrides,
                  "Override a config key, e.g. --set experiment.trials=5 (repeatable)");
}

void apply_override(njson& cfg, const std::string& expr) {
  const auto eq = expr.find('=');
  if (eq == std::string::npos) throw config_error("--set expects key=value: " + expr);
  const std::string key = expr.substr(0, eq);
  const std::string value = expr.substr(eq + 1);
  njson parsed;
  try {
    parsed = njson::parse(value);
  } catch (const nlohmann::json::exception&) {
    parsed = value;  // plain string
  }
  njson* node = &cfg;
  std::istringstream path(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(path, part, '.')) parts.push_back(part);
  if (parts.empty()) throw config_error("--set has an empty key");
  for (size_t i = 0; i + 1 < parts.size(); ++i) node = &((*node)[parts[i]]);
  (*node)[parts.back()] = std::move(parsed);
}

njson load_config(const CommonOptions& common) {
  njson cfg = njson::object();
  if (!common.config_path.empty()) {
    std::ifstream in(common.config_path);
    if (!in) throw config_error("cannot open config: " + common.config_path);
    try {
      cfg = njson::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw config_error(std::string("malformed config JSON: ") + e.what());
    }
  }
  for (const auto& expr : common.overrides) apply_override(cfg, expr);
  return cfg;
}

std::uint64_t config_hash(const njson& cfg) { return io::fnv1a(cfg.dump()); }

Domain get_domain(const njson& cfg) {
  if (!cfg.contains("domain")) throw config_error("config needs a 'domain'");
  return io::domain_from_json(cfg.at("domain").dump());
}

WeightFunction get_weight(const njson& cfg) {
  if (!cfg.contains("weight")) return WeightFunction::one();
  return io::weight_from_json(cfg.at("weight").dump());
}

BasisSpec get_basis(const njson& cfg) {
  if (!cfg.contains("basis")) throw config_error("config needs a 'basis'");
  return io::basis_from_json(cfg.at("basis").dump());
}

GeneratorSpec get_generator(const njson& cfg) {
  if (!cfg.contains("generator")) return GeneratorSpec{};
  return io::generator_from_json(cfg.at("generator").dump());
}

BuildOptions get_build_options(const njson& cfg) {
  BuildOptions opts;
  if (!cfg.contains("build")) return opts;
  const auto& b = cfg.at("build");
  if (b.contains("n_max")) opts.n_max = b.at("n_max").get<long>();
  if (b.contains("rank_tol")) opts.rank_rel_tol = b.at("rank_tol").get<double>();
  if (b.contains("exactness_tol")) opts.exactness_tol = b.at("exactness_tol").get<double>();
  if (b.contains("moment_level")) opts.moments.level = b.at("moment_level").get<int>();
  if (b.contains("moment_tol")) opts.moments.tolerance = b.at("moment_tol").get<double>();
  return opts;
}

BasisSpec::Family family_from_name(const std::string& name) {
  if (name == "algebraic") return BasisSpec::Family::AlgebraicTotalDegree;
  if (name == "trigonometric") return BasisSpec::Family::TrigonometricDegree;
  if (name == "cubic-phs") return BasisSpec::Family::CubicPhsPlusConstant;
  throw config_error("unknown basis family: " + name);
}

ExperimentConfig get_experiment(const njson& cfg) {
  ExperimentConfig ex;
  ex.domain = get_domain(cfg);
  ex.weight = get_weight(cfg);
  ex.build = get_build_options(cfg);
  if (!cfg.contains("experiment")) throw config_error("config needs an 'experiment'");
  const auto& e = cfg.at("experiment");
  if (e.contains("family")) ex.family = family_from_name(e.at("family").get<std::string>());
  if (e.contains("degrees")) {
    for (const auto& d : e.at("degrees")) ex.degrees.push_back(d.get<int>());
  } else if (e.contains("degree_from") && e.contains("degree_to")) {
    for (int d = e.at("degree_from").get<int>(); d <= e.at("degree_to").get<int>(); ++d) {
      ex.degrees.push_back(d);
    }
  }
  if (e.contains("generators")) {
    for (const auto& g : e.at("generators")) {
      const auto kind = io::generator_kind_from_name(g.get<std::string>());
      if (!kind) throw config_error("unknown generator kind: " + g.get<std::string>());
      ex.generators.push_back(*kind);
    }
  }
  if (e.contains("trials")) ex.trials = e.at("trials").get<int>();
  if (e.contains("seed")) ex.seed = e.at("seed").get<std::uint64_t>();
  if (e.contains("functions")) {
    for (const auto& f : e.at("functions")) ex.functions.push_back(f.get<std::string>());
  }
  if (e.contains("refine")) ex.refine = e.at("refine").get<bool>();
  return ex;
}

// ---------------------------------------------------------------------------

int run_points(const CommonOptions& common, const std::string& kind, int dim, long count,
               const std::string& domain_text, const std::string& weight_text,
               std::uint64_t seed, long skip) {
  njson cfg = load_config(common);
  if (!kind.empty()) cfg["generator"]["kind"] = kind;
  if (seed != static_cast<std::uint64_t>(-1)) cfg["generator"]["seed"] = seed;
  if (skip >= 0) cfg["generator"]["skip"] = skip;
  if (!domain_text.empty()) {
    njson parsed;
    try {
      parsed = njson::parse(domain_text);
    } catch (const nlohmann::json::exception&) {
      parsed = domain_text;  // preset name
    }
    cfg["domain"] = parsed;
  }
  if (!weight_text.empty()) cfg["weight"] = weight_text;
  if (dim > 0 && !cfg.contains("domain")) {
    njson bounds = njson::array();
    for (int j = 0; j < dim; ++j) bounds.push_back({0.0, 1.0});
    cfg["domain"] = njson{{"kind", "box"}, {"bounds", bounds}};
  }
  if (count > 0) cfg["count"] = count;

  const Domain domain = get_domain(cfg);
  const WeightFunction weight = get_weight(cfg);
  const GeneratorSpec gen = get_generator(cfg);
  if (!cfg.contains("count")) throw config_error("points needs --count");
  const long n = cfg.at("count").get<long>();

  const PointSet pts = generate_in_domain(gen, domain, weight, n);
  io::FileMetadata meta;
  meta.config_hash = config_hash(cfg);
  meta.seed = gen.seed;
  const fs::path out = fs::path(common.out_dir) / "points.csv";
  io::write_points_csv(out, pts, meta);
  std::cout << "wrote " << out.string() << " (" << n << " points, "
            << pts.provenance->raw_consumed << " raw candidates)\n";
  return kExitOk;
}

int run_moments(const CommonOptions& common) {
  const njson cfg = load_config(common);
  const Domain domain = get_domain(cfg);
  const WeightFunction weight = get_weight(cfg);
  const BasisSpec spec = get_basis(cfg);
  const BuildOptions opts = get_build_options(cfg);

  const Basis basis = make_basis(spec, domain);
  const MomentVector m = moments(basis, domain, weight, opts.moments);
  io::FileMetadata meta;
  meta.config_hash = config_hash(cfg);
  const fs::path out = fs::path(common.out_dir) / "moments.csv";
  io::write_moments_csv(out, basis, m, meta);
  std::cout << "wrote " << out.string() << " (K = " << basis.size() << ", method = "
            << (m.method == MomentVector::Method::ClosedForm ? "closed-form"
                                                             : "reference-quadrature")
            << ")\n";
  return kExitOk;
}

int run_build(const CommonOptions& common) {
  const njson cfg = load_config(common);
  const Domain domain = get_domain(cfg);
  const WeightFunction weight = get_weight(cfg);
  const BasisSpec spec = get_basis(cfg);
  const GeneratorSpec gen = get_generator(cfg);
  const BuildOptions opts = get_build_options(cfg);

  const BuildResult result = build_positive_lscf(spec, domain, weight, gen, opts);

  io::RuleFile file;
  file.rule = result.rule;
  file.domain = domain;
  file.weight = weight;
  file.generator = gen;
  file.exactness_tol = opts.exactness_tol;
  file.attempts = result.report.attempts;
  file.meta.config_hash = config_hash(cfg);
  file.meta.seed = gen.seed;
  const fs::path out = fs::path(common.out_dir) / "rule.csv";
  io::write_rule(out, file);
  std::cout << "wrote " << out.string() << " and sidecar: N = " << result.rule.points.size()
            << ", residual = " << io::format_double(result.rule.residual)
            << ", min weight = " << io::format_double(result.rule.weights.minCoeff()) << "\n";
  return kExitOk;
}

int run_subsample(const CommonOptions& common, const std::string& rule_path,
                  const std::string& method_name) {
  const njson cfg = load_config(common);
  const io::RuleFile file = io::read_rule(rule_path);

  SubsampleMethod method;
  if (method_name == "steinitz") {
    method.kind = SubsampleMethod::Kind::Steinitz;
  } else if (method_name == "nnls") {
    method.kind = SubsampleMethod::Kind::Nnls;
  } else {
    throw config_error("unknown subsample method: " + method_name);
  }
  if (cfg.contains("subsample")) {
    const auto& s = cfg.at("subsample");
    if (s.contains("zero_weight_tol")) {
      method.zero_weight_tol = s.at("zero_weight_tol").get<double>();
    }
    if (s.contains("nnls_gradient_tol")) {
      method.nnls_gradient_tol = s.at("nnls_gradient_tol").get<double>();
    }
    if (s.contains("max_iterations")) method.max_iterations = s.at("max_iterations").get<long>();
  }

  const Basis basis = make_basis(file.rule.basis_id, file.domain);
  const MomentVector m =
      moments(basis, file.domain, file.weight, get_build_options(cfg).moments);
  SubsampleInfo info;
  const CubatureRule reduced = subsample(file.rule, basis, m.values, method, &info);

  io::RuleFile out_file = file;
  out_file.rule = reduced;
  out_file.subsample = io::SubsampleRecord{method_name, info.passes, info.residual_before,
                                           info.residual_after, info.converged};
  out_file.meta.config_hash = config_hash(cfg);
  const fs::path in_path(rule_path);
  const fs::path out =
      fs::path(common.out_dir) / (in_path.stem().string() + "_" + method_name + ".csv");
  io::write_rule(out, out_file);
  std::cout << "method,passes,residual_before,residual_after\n"
            << method_name << "," << info.passes << "," << io::format_double(info.residual_before)
            << "," << io::format_double(info.residual_after) << "\n"
            << "wrote " << out.string() << " (N = " << reduced.points.size() << ")\n";
  return kExitOk;
}

int run_genz_bench(const CommonOptions& common) {
  const njson cfg = load_config(common);
  ExperimentConfig ex = get_experiment(cfg);
  if (ex.functions.empty()) {
    ex.functions = {"oscillatory", "product-peak", "corner-peak", "gaussian"};
  }
  const ErrorTable table = run_error_experiment(ex);
  io::FileMetadata meta;
  meta.config_hash = config_hash(cfg);
  meta.seed = ex.seed;
  const fs::path errors = fs::path(common.out_dir) / "errors.csv";
  const fs::path summary = fs::path(common.out_dir) / "errors_summary.csv";
  io::write_error_table_csv(errors, table, meta);
  io::write_error_summary_csv(summary, aggregate_errors(table), meta);
  long failed = 0;
  for (const auto& rec : table.records) {
    if (!rec.status.empty()) ++failed;
  }
  std::cout << "wrote " << errors.string() << " and " << summary.string() << " ("
            << table.records.size() << " rows, " << failed << " failed cells)\n";
  return kExitOk;
}

int run_ratio(const CommonOptions& common) {
  const njson cfg = load_config(common);
  const ExperimentConfig ex = get_experiment(cfg);
  if (ex.generators.empty()) throw config_error("ratio needs experiment.generators");
  io::FileMetadata meta;
  meta.config_hash = config_hash(cfg);
  meta.seed = ex.seed;
  const bool single = ex.generators.size() == 1;
  for (const auto kind : ex.generators) {
    ExperimentConfig one = ex;
    one.generators = {kind};
    const RatioResult result = run_ratio_experiment(one);
    const std::string tag = single ? "" : "_" + io::generator_kind_name(kind);
    const fs::path csv = fs::path(common.out_dir) / ("ratio" + tag + ".csv");
    io::write_ratio_csv(csv, result, meta);
    std::cout << "wrote " << csv.string();
    if (result.fit) {
      const fs::path fit = fs::path(common.out_dir) / ("fit" + tag + ".json");
      io::write_fit_json(fit, *result.fit);
      std::cout << " and " << fit.string() << " (C = " << io::format_double(result.fit->c)
                << ", s = " << io::format_double(result.fit->s) << ")";
    } else {
      std::cout << " (no fit: fewer than 3 usable pairs)";
    }
    std::cout << "\n";
  }
  return kExitOk;
}

int run_verify(const std::string& rule_path) {
  const io::VerifyReport report = io::verify_rule(rule_path);
  std::cout << report.to_json();
  return report.pass ? kExitOk : kExitVerify;
}

const char* kConfigKeysHelp = R"(CONFIG KEYS (JSON file passed via --config, each overridable via --set key=value):
  domain      preset name ("cube2", "cube3", "unit-cube2", "unit-cube3", "ball2",
              "nonstandard") or descriptor: {"kind":"box","bounds":[[lo,hi],...]},
              {"kind":"ball","center":[...],"radius":r}, {"kind":"union","members":[...]}
  weight      preset name ("one", "chebyshev", "radial-half") or descriptor:
              {"kind":"constant-one"} | {"kind":"chebyshev-product"} |
              {"kind":"radial-power","exponent":p}
  basis       {"family":"algebraic"|"trigonometric","degree":m} or
              {"family":"cubic-phs","centers":M,"center_generator":{...}}
  generator   {"kind":"halton"|"sobol"|"random","skip":s,"seed":n}; seed only for random
  count       number of points (points subcommand)
  build       {"n_max":1048576,"rank_tol":1e-10,"exactness_tol":1e-8,
               "moment_level":60,"moment_tol":1e-10}
  subsample   {"zero_weight_tol":1e-13,"nnls_gradient_tol":1e-10,"max_iterations":0}
  experiment  {"family":"algebraic","degrees":[...] (or degree_from/degree_to),
               "generators":["halton","sobol","random"],"trials":20,"seed":7,
               "functions":["oscillatory","product-peak","corner-peak","gaussian",
                            "test-a","test-b","test-c","nonstandard-exp"],
               "refine":false}

Exit codes: 0 ok, 2 config error, 3 numerical failure, 4 verification failure.
)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lscub: positive exactness-guaranteed least-squares cubature"};
  app.require_subcommand(1);
  app.footer(kConfigKeysHelp);

  int exit_code = kExitOk;

  auto* points_cmd = app.add_subcommand("points", "Generate in-domain points as CSV");
  CommonOptions points_common;
  add_common(points_cmd, points_common);
  std::string points_kind, points_domain, points_weight;
  int points_dim = 0;
  long points_count = 0, points_skip = -1;
  std::uint64_t points_seed = static_cast<std::uint64_t>(-1);
  points_cmd->add_option("--kind", points_kind, "Generator kind: halton, sobol, random");
  points_cmd->add_option("--dim", points_dim, "Dimension (with the default unit-cube domain)");
  points_cmd->add_option("--count", points_count, "Number of points");
  points_cmd->add_option("--domain", points_domain, "Domain preset name or JSON descriptor");
  points_cmd->add_option("--weight", points_weight, "Weight preset name");
  points_cmd->add_option("--seed", points_seed, "Seed (random kind)");
  points_cmd->add_option("--skip", points_skip, "Raw elements to skip");
  points_cmd->callback([&] {
    exit_code = run_points(points_common, points_kind, points_dim, points_count, points_domain,
                           points_weight, points_seed, points_skip);
  });

  auto* moments_cmd = app.add_subcommand("moments", "Compute basis moments as CSV");
  CommonOptions moments_common;
  add_common(moments_cmd, moments_common);
  moments_cmd->callback([&] { exit_code = run_moments(moments_common); });

  auto* build_cmd = app.add_subcommand("build", "Build a positive LS cubature rule");
  CommonOptions build_common;
  add_common(build_cmd, build_common);
  build_cmd->callback([&] { exit_code = run_build(build_common); });

  auto* sub_cmd = app.add_subcommand("subsample", "Compress a rule to an interpolatory one");
  CommonOptions sub_common;
  add_common(sub_cmd, sub_common);
  std::string sub_rule, sub_method = "steinitz";
  sub_cmd->add_option("--rule", sub_rule, "Rule CSV path (sidecar found next to it)")->required();
  sub_cmd->add_option("--method", sub_method, "steinitz or nnls")->capture_default_str();
  sub_cmd->callback([&] { exit_code = run_subsample(sub_common, sub_rule, sub_method); });

  auto* genz_cmd = app.add_subcommand("genz-bench", "Run the error experiment");
  CommonOptions genz_common;
  add_common(genz_cmd, genz_common);
  genz_cmd->callback([&] { exit_code = run_genz_bench(genz_common); });

  auto* ratio_cmd = app.add_subcommand("ratio", "Run the N(K) ratio experiment and power-law fit");
  CommonOptions ratio_common;
  add_common(ratio_cmd, ratio_common);
  ratio_cmd->callback([&] { exit_code = run_ratio(ratio_common); });

  auto* verify_cmd = app.add_subcommand("verify", "Re-check a stored rule against its sidecar");
  std::string verify_rule_path;
  verify_cmd->add_option("--rule", verify_rule_path, "Rule CSV path")->required();
  verify_cmd->callback([&] { exit_code = run_verify(verify_rule_path); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const config_error& e) {
    std::cout << njson{{"error", e.what()}, {"type", "config"}}.dump() << "\n";
    return kExitConfig;
  } catch (const build_error& e) {
    njson j{{"error", e.what()}, {"type", "numerical"}};
    njson attempts = njson::array();
    for (const auto& a : e.report.attempts) {
      attempts.push_back({{"n", a.n}, {"rank", a.rank}, {"solved", a.solved}});
    }
    j["attempts"] = std::move(attempts);
    std::cout << j.dump() << "\n";
    return kExitNumerical;
  } catch (const numerical_error& e) {
    std::cout << njson{{"error", e.what()}, {"type", "numerical"}}.dump() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cout << njson{{"error", e.what()}, {"type", "internal"}}.dump() << "\n";
    return kExitNumerical;
  }
  return exit_code;
}
