#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lscub/io.hpp"

using namespace lscub;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / "lscub_io_tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

BasisSpec algebraic(int degree) {
  BasisSpec spec;
  spec.degree = degree;
  return spec;
}

io::RuleFile build_rule_file(int degree) {
  GeneratorSpec gen;
  const Domain domain = *io::domain_preset("cube2");
  const BuildResult res = build_positive_lscf(algebraic(degree), domain,
                                              WeightFunction::one(), gen);
  io::RuleFile file;
  file.rule = res.rule;
  file.domain = domain;
  file.weight = WeightFunction::one();
  file.generator = gen;
  file.attempts = res.report.attempts;
  return file;
}

}  // namespace

TEST_CASE("format_double round-trips awkward values") {
  for (const double v : {1.0 / 3.0, 2.0 / 3.0, 0.1, 1e-300, 3.141592653589793,
                         -7.0 / 9.0, 6.02214076e23}) {
    CHECK(io::parse_double(io::format_double(v)) == v);
  }
  CHECK_THROWS_AS(io::parse_double("1.5x"), config_error);
}

TEST_CASE("descriptor JSON round trips") {
  const Domain uni = nonstandard_union_domain();
  const Domain uni2 = io::domain_from_json(io::domain_to_json(uni));
  CHECK(uni2.kind() == Domain::Kind::Union);
  CHECK(uni2.volume() == uni.volume());
  CHECK(io::domain_to_json(uni2) == io::domain_to_json(uni));

  const WeightFunction w = WeightFunction::radial_power(0.5);
  CHECK(io::weight_from_json(io::weight_to_json(w)).exponent() == 0.5);

  BasisSpec phs;
  phs.family = BasisSpec::Family::CubicPhsPlusConstant;
  phs.center_count = 12;
  phs.center_generator.kind = GeneratorSpec::Kind::Sobol;
  const BasisSpec phs2 = io::basis_from_json(io::basis_to_json(phs));
  CHECK(phs2.center_count == 12);
  CHECK(phs2.center_generator.kind == GeneratorSpec::Kind::Sobol);

  GeneratorSpec rnd;
  rnd.kind = GeneratorSpec::Kind::Random;
  rnd.seed = 99;
  const GeneratorSpec rnd2 = io::generator_from_json(io::generator_to_json(rnd));
  CHECK(rnd2.seed == 99);

  CHECK_THROWS_AS(io::domain_from_json("{\"kind\":\"torus\"}"), config_error);
  CHECK_THROWS_AS(io::generator_from_json("{\"kind\":\"halton\",\"seed\":3}"), config_error);
  CHECK_THROWS_AS(io::generator_from_json("{\"kind\":\"random\"}"), config_error);
  CHECK_THROWS_AS(io::domain_from_json("not json"), config_error);
}

TEST_CASE("points CSV round trips bit-exactly") {
  GeneratorSpec gen;
  gen.kind = GeneratorSpec::Kind::Sobol;
  const PointSet pts =
      generate_in_domain(gen, *io::domain_preset("ball2"), WeightFunction::one(), 200);
  const fs::path path = temp_dir() / "points.csv";
  io::write_points_csv(path, pts, {});
  const PointSet back = io::read_points_csv(path);
  REQUIRE(back.size() == pts.size());
  CHECK((back.pts - pts.pts).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(back.provenance.has_value());
  CHECK(back.provenance->spec.kind == GeneratorSpec::Kind::Sobol);
  CHECK(back.provenance->raw_consumed == pts.provenance->raw_consumed);

  // a second write is byte-identical
  const fs::path path2 = temp_dir() / "points2.csv";
  io::write_points_csv(path2, pts, {});
  CHECK(slurp(path) == slurp(path2));
}

TEST_CASE("rule files round trip bit-exactly") {
  const io::RuleFile file = build_rule_file(3);
  const fs::path path = temp_dir() / "rule.csv";
  io::write_rule(path, file);
  const io::RuleFile back = io::read_rule(path);

  CHECK((back.rule.points.pts - file.rule.points.pts).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.rule.weights - file.rule.weights).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.rule.kind == CubatureRule::Kind::LeastSquares);
  CHECK(back.rule.residual == file.rule.residual);
  CHECK(back.domain.volume() == 4.0);
  CHECK(back.attempts.size() == file.attempts.size());
  REQUIRE(back.generator.has_value());
  CHECK(back.generator->kind == GeneratorSpec::Kind::Halton);

  // writing the parsed copy reproduces both files byte for byte
  const fs::path path2 = temp_dir() / "rule2.csv";
  io::RuleFile copy = back;
  io::write_rule(path2, copy);
  CHECK(slurp(path) == slurp(path2));
  CHECK(slurp(io::sidecar_path(path)) == slurp(io::sidecar_path(path2)));
}

TEST_CASE("verify accepts fresh rules and flags corruption") {
  const io::RuleFile file = build_rule_file(4);
  const fs::path good = temp_dir() / "verify_good.csv";
  io::write_rule(good, file);
  CHECK(io::verify_rule(good).pass);

  // flipping a weight sign breaks the positivity flag (and the residual)
  io::RuleFile flipped = file;
  flipped.rule.weights[1] = -flipped.rule.weights[1];
  const fs::path bad1 = temp_dir() / "verify_flip.csv";
  io::write_rule(bad1, flipped);
  const io::VerifyReport rep1 = io::verify_rule(bad1);
  CHECK_FALSE(rep1.pass);
  bool flag_mismatch = false;
  for (const auto& c : rep1.checks) {
    if (c.name == "positive_flag" && !c.pass) flag_mismatch = true;
  }
  CHECK(flag_mismatch);

  // truncating the CSV behind the sidecar's back is flagged as corruption
  std::string text = slurp(good);
  const auto last_newline = text.rfind('\n', text.size() - 2);
  std::ofstream(temp_dir() / "verify_cut.csv", std::ios::binary)
      << text.substr(0, last_newline + 1);
  fs::copy_file(io::sidecar_path(good), io::sidecar_path(temp_dir() / "verify_cut.csv"),
                fs::copy_options::overwrite_existing);
  CHECK_THROWS_AS(io::verify_rule(temp_dir() / "verify_cut.csv"), config_error);

  // dropping a point (with a consistent sidecar) surfaces as a residual violation
  io::RuleFile dropped = file;
  const long n1 = dropped.rule.points.size() - 1;
  dropped.rule.points.pts.conservativeResize(Eigen::NoChange, n1);
  dropped.rule.weights.conservativeResize(n1);
  const fs::path bad3 = temp_dir() / "verify_drop.csv";
  io::write_rule(bad3, dropped);
  const io::VerifyReport rep3 = io::verify_rule(bad3);
  CHECK_FALSE(rep3.pass);
  bool drop_violated = false;
  for (const auto& c : rep3.checks) {
    if (c.name == "residual_bound" && !c.pass) drop_violated = true;
  }
  CHECK(drop_violated);

  // a truncated weight perturbation shows up as a residual violation
  io::RuleFile bumped = file;
  bumped.rule.weights[0] += 0.25;
  const fs::path bad2 = temp_dir() / "verify_bump.csv";
  io::write_rule(bad2, bumped);
  const io::VerifyReport rep2 = io::verify_rule(bad2);
  CHECK_FALSE(rep2.pass);
  bool residual_violated = false;
  for (const auto& c : rep2.checks) {
    if (c.name == "residual_bound" && !c.pass) residual_violated = true;
  }
  CHECK(residual_violated);
}

#ifdef LSCUB_CLI_PATH
namespace {

int run_cli(const std::string& args, const fs::path& workdir, std::string* out = nullptr) {
  const fs::path out_file = workdir / "cli_output.txt";
  const std::string cmd = std::string(LSCUB_CLI_PATH) + " " + args + " > " +
                          out_file.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (out) *out = slurp(out_file);
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("cli: points subcommand maps the first halton point onto cube2") {
  const fs::path dir = temp_dir() / "cli_points";
  fs::create_directories(dir);
  const int rc =
      run_cli("points --kind halton --dim 2 --count 4 --domain cube2 --out " + dir.string(), dir);
  REQUIRE(rc == 0);
  const PointSet pts = io::read_points_csv(dir / "points.csv");
  REQUIRE(pts.size() == 4);
  CHECK(pts.pts(0, 0) == 0.0);
  CHECK(pts.pts(1, 0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));

  // same invocation twice: byte-identical output
  const fs::path dir2 = temp_dir() / "cli_points2";
  fs::create_directories(dir2);
  run_cli("points --kind halton --dim 2 --count 4 --domain cube2 --out " + dir2.string(), dir2);
  CHECK(slurp(dir / "points.csv") == slurp(dir2 / "points.csv"));
}

TEST_CASE("cli: build, verify, subsample, and exit codes") {
  const fs::path dir = temp_dir() / "cli_build";
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"domain":"cube2","basis":{"family":"algebraic","degree":0},)"
        << R"("generator":{"kind":"halton"}})";
  }
  REQUIRE(run_cli("build --config " + (dir / "cfg.json").string() + " --out " + dir.string(),
                  dir) == 0);
  const io::RuleFile file = io::read_rule(dir / "rule.csv");
  REQUIRE(file.rule.points.size() == 1);
  CHECK(file.rule.weights[0] == doctest::Approx(4.0).epsilon(1e-14));

  CHECK(run_cli("verify --rule " + (dir / "rule.csv").string(), dir) == 0);

  // corrupt the stored weight: verify exits 4
  io::RuleFile corrupt = file;
  corrupt.rule.weights[0] += 0.5;
  io::write_rule(dir / "corrupt.csv", corrupt);
  CHECK(run_cli("verify --rule " + (dir / "corrupt.csv").string(), dir) == 4);

  // unknown subcommand and malformed config: exit 2
  CHECK(run_cli("frobnicate", dir) == 2);
  {
    std::ofstream cfg(dir / "bad.json");
    cfg << "{ not json";
  }
  CHECK(run_cli("build --config " + (dir / "bad.json").string(), dir) == 2);

  // numerical failure (positivity cap unreachable at tiny n_max): exit 3
  {
    std::ofstream cfg(dir / "hard.json");
    cfg << R"({"domain":"cube2","basis":{"family":"algebraic","degree":6},)"
        << R"("generator":{"kind":"halton"},"build":{"n_max":28}})";
  }
  CHECK(run_cli("build --config " + (dir / "hard.json").string() + " --out " + dir.string(),
                dir) == 3);

  // a deeper rule for subsample
  {
    std::ofstream cfg(dir / "cfg4.json");
    cfg << R"({"domain":"cube2","basis":{"family":"algebraic","degree":4},)"
        << R"("generator":{"kind":"halton"}})";
  }
  REQUIRE(run_cli("build --config " + (dir / "cfg4.json").string() + " --out " + dir.string(),
                  dir) == 0);
  CHECK(run_cli("subsample --rule " + (dir / "rule.csv").string() + " --method bogus --out " +
                    dir.string(),
                dir) == 2);
  std::string sub_out;
  REQUIRE(run_cli("subsample --rule " + (dir / "rule.csv").string() + " --method steinitz --out " +
                      dir.string(),
                  dir, &sub_out) == 0);
  CHECK(sub_out.find("method,passes,residual_before,residual_after") != std::string::npos);
  const io::RuleFile reduced = io::read_rule(dir / "rule_steinitz.csv");
  CHECK(reduced.rule.kind == CubatureRule::Kind::Interpolatory);
  CHECK(reduced.rule.points.size() <= 15);
  REQUIRE(reduced.subsample.has_value());
  CHECK(reduced.subsample->method == "steinitz");
  CHECK(run_cli("verify --rule " + (dir / "rule_steinitz.csv").string(), dir) == 0);
}

TEST_CASE("cli: ratio and genz-bench emit the pinned CSV schemas") {
  const fs::path dir = temp_dir() / "cli_experiments";
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "ratio.json");
    cfg << R"({"domain":"cube2","experiment":{"degrees":[1,2,3,4],)"
        << R"("generators":["halton"],"refine":true}})";
  }
  REQUIRE(run_cli("ratio --config " + (dir / "ratio.json").string() + " --out " + dir.string(),
                  dir) == 0);
  {
    std::istringstream in(slurp(dir / "ratio.csv"));
    std::string line, header;
    while (std::getline(in, line)) {
      if (!line.empty() && line[0] != '#') {
        header = line;
        break;
      }
    }
    CHECK(header == "degree,K,N,refined");
  }
  CHECK(slurp(dir / "fit.json").find("\"pairs\"") != std::string::npos);

  {
    std::ofstream cfg(dir / "genz.json");
    cfg << R"({"domain":"unit-cube2","experiment":{"degrees":[2],)"
        << R"("generators":["halton"],"trials":2,"seed":5,"functions":["gaussian"]}})";
  }
  REQUIRE(run_cli("genz-bench --config " + (dir / "genz.json").string() + " --out " + dir.string(),
                  dir) == 0);
  {
    std::istringstream in(slurp(dir / "errors.csv"));
    std::string line, header;
    while (std::getline(in, line)) {
      if (!line.empty() && line[0] != '#') {
        header = line;
        break;
      }
    }
    CHECK(header ==
          "genz_kind,generator,degree,K,N_ls,N_interp,trial,err_ls,err_interp,err_qmc,"
          "err_legendre");
  }
}
#endif  // LSCUB_CLI_PATH
