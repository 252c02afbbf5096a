#include "lscub/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lscub::io {

namespace {

using njson = nlohmann::ordered_json;

njson parse_json(const std::string& text, const char* what) {
  try {
    return njson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

njson domain_node(const Domain& d) {
  njson j;
  switch (d.kind()) {
    case Domain::Kind::Box: {
      j["kind"] = "box";
      njson bounds = njson::array();
      for (const auto& iv : d.box_bounds()) bounds.push_back({iv.lo, iv.hi});
      j["bounds"] = std::move(bounds);
      break;
    }
    case Domain::Kind::Ball: {
      j["kind"] = "ball";
      njson center = njson::array();
      for (Eigen::Index i = 0; i < d.ball_center().size(); ++i) {
        center.push_back(d.ball_center()[i]);
      }
      j["center"] = std::move(center);
      j["radius"] = d.ball_radius();
      break;
    }
    case Domain::Kind::Union: {
      j["kind"] = "union";
      njson members = njson::array();
      for (const auto& mem : d.members()) members.push_back(domain_node(mem));
      j["members"] = std::move(members);
      break;
    }
  }
  return j;
}

Domain domain_node_parse(const njson& j) {
  if (j.is_string()) {
    if (const auto preset = domain_preset(j.get<std::string>())) return *preset;
    throw config_error("unknown domain preset: " + j.get<std::string>());
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "box") {
    std::vector<Interval> bounds;
    for (const auto& iv : j.at("bounds")) {
      bounds.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
    }
    return Domain::box(std::move(bounds));
  }
  if (kind == "ball") {
    const auto& c = j.at("center");
    Vector center(c.size());
    for (size_t i = 0; i < c.size(); ++i) center[static_cast<Eigen::Index>(i)] = c.at(i).get<double>();
    return Domain::ball(std::move(center), j.at("radius").get<double>());
  }
  if (kind == "union") {
    std::vector<Domain> members;
    for (const auto& mem : j.at("members")) members.push_back(domain_node_parse(mem));
    return Domain::disjoint_union(std::move(members));
  }
  throw config_error("unknown domain kind: " + kind);
}

njson weight_node(const WeightFunction& w) {
  njson j;
  switch (w.kind()) {
    case WeightFunction::Kind::ConstantOne:
      j["kind"] = "constant-one";
      break;
    case WeightFunction::Kind::ChebyshevProduct:
      j["kind"] = "chebyshev-product";
      break;
    case WeightFunction::Kind::RadialPower:
      j["kind"] = "radial-power";
      j["exponent"] = w.exponent();
      break;
  }
  return j;
}

WeightFunction weight_node_parse(const njson& j) {
  if (j.is_string()) {
    if (const auto preset = weight_preset(j.get<std::string>())) return *preset;
    throw config_error("unknown weight preset: " + j.get<std::string>());
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant-one") return WeightFunction::one();
  if (kind == "chebyshev-product") return WeightFunction::chebyshev_product();
  if (kind == "radial-power") return WeightFunction::radial_power(j.at("exponent").get<double>());
  throw config_error("unknown weight kind: " + kind);
}

njson generator_node(const GeneratorSpec& g) {
  njson j;
  j["kind"] = generator_kind_name(g.kind);
  if (g.kind == GeneratorSpec::Kind::Random) j["seed"] = g.seed;
  j["skip"] = g.effective_skip();
  return j;
}

GeneratorSpec generator_node_parse(const njson& j) {
  GeneratorSpec g;
  const std::string kind = j.at("kind").get<std::string>();
  const auto parsed = generator_kind_from_name(kind);
  if (!parsed) throw config_error("unknown generator kind: " + kind);
  g.kind = *parsed;
  if (j.contains("seed")) {
    if (g.kind != GeneratorSpec::Kind::Random) {
      throw config_error("generator seed is only valid for kind 'random'");
    }
    g.seed = j.at("seed").get<std::uint64_t>();
  } else if (g.kind == GeneratorSpec::Kind::Random) {
    throw config_error("generator kind 'random' needs a seed");
  }
  if (j.contains("skip")) g.skip = j.at("skip").get<long>();
  return g;
}

njson basis_node(const BasisSpec& b) {
  njson j;
  switch (b.family) {
    case BasisSpec::Family::AlgebraicTotalDegree:
      j["family"] = "algebraic";
      j["degree"] = b.degree;
      break;
    case BasisSpec::Family::TrigonometricDegree:
      j["family"] = "trigonometric";
      j["degree"] = b.degree;
      break;
    case BasisSpec::Family::CubicPhsPlusConstant:
      j["family"] = "cubic-phs";
      j["centers"] = b.center_count;
      j["center_generator"] = generator_node(b.center_generator);
      break;
  }
  return j;
}

BasisSpec basis_node_parse(const njson& j) {
  BasisSpec b;
  const std::string family = j.at("family").get<std::string>();
  if (family == "algebraic") {
    b.family = BasisSpec::Family::AlgebraicTotalDegree;
    b.degree = j.at("degree").get<int>();
  } else if (family == "trigonometric") {
    b.family = BasisSpec::Family::TrigonometricDegree;
    b.degree = j.at("degree").get<int>();
  } else if (family == "cubic-phs") {
    b.family = BasisSpec::Family::CubicPhsPlusConstant;
    b.center_count = j.at("centers").get<long>();
    if (j.contains("center_generator")) {
      b.center_generator = generator_node_parse(j.at("center_generator"));
    }
  } else {
    throw config_error("unknown basis family: " + family);
  }
  return b;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw config_error("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

void append_metadata(std::ostringstream& os, const FileMetadata& meta) {
  os << "# tool " << meta.tool << "\n";
  os << "# config_hash " << hex64(meta.config_hash) << "\n";
  os << "# seed " << meta.seed << "\n";
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || end != s.c_str() + s.size()) {
    throw config_error("not a number: '" + s + "'");
  }
  return v;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string domain_to_json(const Domain& d) { return domain_node(d).dump(); }
Domain domain_from_json(const std::string& text) {
  return domain_node_parse(parse_json(text, "domain"));
}
std::string weight_to_json(const WeightFunction& w) { return weight_node(w).dump(); }
WeightFunction weight_from_json(const std::string& text) {
  return weight_node_parse(parse_json(text, "weight"));
}
std::string basis_to_json(const BasisSpec& b) { return basis_node(b).dump(); }
BasisSpec basis_from_json(const std::string& text) {
  return basis_node_parse(parse_json(text, "basis"));
}
std::string generator_to_json(const GeneratorSpec& g) { return generator_node(g).dump(); }
GeneratorSpec generator_from_json(const std::string& text) {
  return generator_node_parse(parse_json(text, "generator"));
}

std::optional<Domain> domain_preset(const std::string& name) {
  if (name == "cube2") return Domain::box({{-1.0, 1.0}, {-1.0, 1.0}});
  if (name == "cube3") return Domain::box({{-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}});
  if (name == "unit-cube2") return Domain::box({{0.0, 1.0}, {0.0, 1.0}});
  if (name == "unit-cube3") return Domain::box({{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}});
  if (name == "ball2") return Domain::ball(Vector::Zero(2), 1.0);
  if (name == "nonstandard") return nonstandard_union_domain();
  return std::nullopt;
}

std::optional<WeightFunction> weight_preset(const std::string& name) {
  if (name == "one") return WeightFunction::one();
  if (name == "chebyshev") return WeightFunction::chebyshev_product();
  if (name == "radial-half") return WeightFunction::radial_power(0.5);
  return std::nullopt;
}

std::string generator_kind_name(GeneratorSpec::Kind kind) {
  switch (kind) {
    case GeneratorSpec::Kind::Halton:
      return "halton";
    case GeneratorSpec::Kind::Sobol:
      return "sobol";
    case GeneratorSpec::Kind::Random:
      return "random";
  }
  return "unknown";
}

std::optional<GeneratorSpec::Kind> generator_kind_from_name(const std::string& name) {
  if (name == "halton") return GeneratorSpec::Kind::Halton;
  if (name == "sobol") return GeneratorSpec::Kind::Sobol;
  if (name == "random") return GeneratorSpec::Kind::Random;
  return std::nullopt;
}

std::string rule_kind_name(CubatureRule::Kind kind) {
  switch (kind) {
    case CubatureRule::Kind::LeastSquares:
      return "least-squares";
    case CubatureRule::Kind::Interpolatory:
      return "interpolatory";
    case CubatureRule::Kind::Qmc:
      return "qmc";
    case CubatureRule::Kind::ProductLegendre:
      return "product-legendre";
  }
  return "unknown";
}

std::optional<CubatureRule::Kind> rule_kind_from_name(const std::string& name) {
  if (name == "least-squares") return CubatureRule::Kind::LeastSquares;
  if (name == "interpolatory") return CubatureRule::Kind::Interpolatory;
  if (name == "qmc") return CubatureRule::Kind::Qmc;
  if (name == "product-legendre") return CubatureRule::Kind::ProductLegendre;
  return std::nullopt;
}

void write_points_csv(const std::filesystem::path& path, const PointSet& pts,
                      const FileMetadata& meta) {
  std::ostringstream os;
  append_metadata(os, meta);
  if (pts.provenance) {
    os << "# generator " << generator_node(pts.provenance->spec).dump() << "\n";
    os << "# raw_consumed " << pts.provenance->raw_consumed << "\n";
  }
  os << "index";
  for (int j = 1; j <= pts.dim(); ++j) os << ",x" << j;
  os << "\n";
  for (long i = 0; i < pts.size(); ++i) {
    os << (i + 1);
    for (int j = 0; j < pts.dim(); ++j) os << "," << format_double(pts.pts(j, i));
    os << "\n";
  }
  write_text(path, os.str());
}

PointSet read_points_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  std::optional<GeneratorSpec> gen;
  long raw_consumed = 0;
  std::vector<std::vector<double>> rows;
  bool header_seen = false;
  int dim = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line);
      std::string hash, key;
      ls >> hash >> key;
      if (key == "generator") {
        std::string rest;
        std::getline(ls, rest);
        gen = generator_node_parse(parse_json(rest, "generator"));
      } else if (key == "raw_consumed") {
        ls >> raw_consumed;
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      dim = static_cast<int>(split_csv(line).size()) - 1;
      if (dim < 1) throw config_error("points CSV header is malformed");
      continue;
    }
    const auto fields = split_csv(line);
    if (static_cast<int>(fields.size()) != dim + 1) {
      throw config_error("points CSV row has the wrong arity");
    }
    std::vector<double> row(dim);
    for (int j = 0; j < dim; ++j) row[j] = parse_double(fields[j + 1]);
    rows.push_back(std::move(row));
  }
  PointSet pts;
  pts.pts.resize(dim, static_cast<long>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < dim; ++j) pts.pts(j, static_cast<long>(i)) = rows[i][j];
  }
  if (gen) pts.provenance = Provenance{*gen, raw_consumed};
  return pts;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p.replace_extension(".json");
  return p;
}

void write_rule(const std::filesystem::path& csv_path, const RuleFile& file) {
  const long n = file.rule.points.size();
  const int dim = file.rule.points.dim();
  std::ostringstream os;
  append_metadata(os, file.meta);
  os << "n";
  for (int j = 1; j <= dim; ++j) os << ",x" << j;
  os << ",w\n";
  for (long i = 0; i < n; ++i) {
    os << (i + 1);
    for (int j = 0; j < dim; ++j) os << "," << format_double(file.rule.points.pts(j, i));
    os << "," << format_double(file.rule.weights[i]) << "\n";
  }
  write_text(csv_path, os.str());

  const Basis basis = make_basis(file.rule.basis_id, file.domain);
  njson j;
  j["tool"] = file.meta.tool;
  j["config_hash"] = hex64(file.meta.config_hash);
  j["seed"] = file.meta.seed;
  j["kind"] = rule_kind_name(file.rule.kind);
  j["dim"] = dim;
  j["n"] = n;
  j["k"] = basis.size();
  j["residual"] = file.rule.residual;
  j["min_weight"] = n > 0 ? file.rule.weights.minCoeff() : 0.0;
  j["positive"] = file.rule.positive;
  j["exactness_tol"] = file.exactness_tol;
  j["basis"] = basis_node(file.rule.basis_id);
  j["domain"] = domain_node(file.domain);
  j["weight"] = weight_node(file.weight);
  j["generator"] = file.generator ? generator_node(*file.generator) : njson(nullptr);
  njson attempts = njson::array();
  for (const auto& a : file.attempts) {
    njson node;
    node["n"] = a.n;
    node["rank"] = a.rank;
    node["solved"] = a.solved;
    if (a.solved) node["min_weight"] = a.min_weight;
    attempts.push_back(std::move(node));
  }
  j["attempts"] = std::move(attempts);
  if (file.subsample) {
    njson sub;
    sub["method"] = file.subsample->method;
    sub["passes"] = file.subsample->passes;
    sub["residual_before"] = file.subsample->residual_before;
    sub["residual_after"] = file.subsample->residual_after;
    sub["converged"] = file.subsample->converged;
    sub["kernel"] = "qr-orthogonal-basis-incremental";
    sub["tie_rule"] = "remove-all-at-zero-tol";
    j["subsample"] = std::move(sub);
  }
  write_text(sidecar_path(csv_path), j.dump(2) + "\n");
}

RuleFile read_rule(const std::filesystem::path& csv_path) {
  RuleFile file;

  const njson j = parse_json(read_text(sidecar_path(csv_path)), "rule sidecar");
  file.meta.tool = j.at("tool").get<std::string>();
  file.meta.config_hash = std::strtoull(j.at("config_hash").get<std::string>().c_str(), nullptr, 16);
  file.meta.seed = j.at("seed").get<std::uint64_t>();
  const auto kind = rule_kind_from_name(j.at("kind").get<std::string>());
  if (!kind) throw config_error("unknown rule kind in sidecar");
  file.rule.kind = *kind;
  file.rule.residual = j.at("residual").get<double>();
  file.rule.positive = j.at("positive").get<bool>();
  file.exactness_tol = j.at("exactness_tol").get<double>();
  file.rule.basis_id = basis_node_parse(j.at("basis"));
  file.domain = domain_node_parse(j.at("domain"));
  file.weight = weight_node_parse(j.at("weight"));
  if (!j.at("generator").is_null()) file.generator = generator_node_parse(j.at("generator"));
  for (const auto& node : j.at("attempts")) {
    BuildAttempt a;
    a.n = node.at("n").get<long>();
    a.rank = node.at("rank").get<long>();
    a.solved = node.at("solved").get<bool>();
    if (a.solved) a.min_weight = node.at("min_weight").get<double>();
    file.attempts.push_back(a);
  }
  if (j.contains("subsample")) {
    const auto& sub = j.at("subsample");
    SubsampleRecord rec;
    rec.method = sub.at("method").get<std::string>();
    rec.passes = sub.at("passes").get<long>();
    rec.residual_before = sub.at("residual_before").get<double>();
    rec.residual_after = sub.at("residual_after").get<double>();
    rec.converged = sub.at("converged").get<bool>();
    file.subsample = std::move(rec);
  }

  std::istringstream in(read_text(csv_path));
  std::string line;
  bool header_seen = false;
  int dim = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      dim = static_cast<int>(split_csv(line).size()) - 2;
      if (dim < 1) throw config_error("rule CSV header is malformed");
      continue;
    }
    const auto fields = split_csv(line);
    if (static_cast<int>(fields.size()) != dim + 2) {
      throw config_error("rule CSV row has the wrong arity");
    }
    std::vector<double> row(dim + 1);
    for (int j2 = 0; j2 <= dim; ++j2) row[j2] = parse_double(fields[j2 + 1]);
    rows.push_back(std::move(row));
  }
  const long n = static_cast<long>(rows.size());
  if (j.at("n").get<long>() != n) throw config_error("rule CSV row count disagrees with sidecar");
  file.rule.points.pts.resize(dim, n);
  file.rule.weights.resize(n);
  for (long i = 0; i < n; ++i) {
    for (int j2 = 0; j2 < dim; ++j2) file.rule.points.pts(j2, i) = rows[i][j2];
    file.rule.weights[i] = rows[i][dim];
  }
  if (file.generator) file.rule.points.provenance = Provenance{*file.generator, 0};
  return file;
}

void write_moments_csv(const std::filesystem::path& path, const Basis& basis,
                       const MomentVector& m, const FileMetadata& meta) {
  std::ostringstream os;
  append_metadata(os, meta);
  os << "k,descriptor,moment,method,error_estimate\n";
  const char* method =
      m.method == MomentVector::Method::ClosedForm ? "closed-form" : "reference-quadrature";
  for (long k = 0; k < basis.size(); ++k) {
    os << (k + 1) << "," << basis.descriptor(k) << "," << format_double(m.values[k]) << ","
       << method << ","
       << format_double(m.method == MomentVector::Method::ClosedForm ? 0.0 : m.error_estimate)
       << "\n";
  }
  write_text(path, os.str());
}

void write_error_table_csv(const std::filesystem::path& path, const ErrorTable& table,
                           const FileMetadata& meta) {
  std::ostringstream os;
  append_metadata(os, meta);
  for (const auto& rec : table.records) {
    if (!rec.status.empty()) {
      os << "# failed " << rec.function << "," << generator_kind_name(rec.generator) << ","
         << rec.degree << ": " << rec.status << "\n";
    }
  }
  os << "genz_kind,generator,degree,K,N_ls,N_interp,trial,err_ls,err_interp,err_qmc,"
        "err_legendre\n";
  for (const auto& rec : table.records) {
    if (!rec.status.empty()) continue;
    os << rec.function << "," << generator_kind_name(rec.generator) << "," << rec.degree << ","
       << rec.k << "," << rec.n_ls << "," << rec.n_interp << "," << rec.trial << ","
       << format_double(rec.err_ls) << "," << format_double(rec.err_interp) << ","
       << format_double(rec.err_qmc) << "," << format_double(rec.err_legendre) << "\n";
  }
  write_text(path, os.str());
}

void write_error_summary_csv(const std::filesystem::path& path,
                             const std::vector<AggregateRecord>& rows,
                             const FileMetadata& meta) {
  std::ostringstream os;
  append_metadata(os, meta);
  os << "genz_kind,generator,degree,K,N_ls,N_interp,trials,median_ls,max_ls,median_interp,"
        "max_interp,median_qmc,max_qmc,median_legendre,max_legendre\n";
  for (const auto& agg : rows) {
    os << agg.function << "," << generator_kind_name(agg.generator) << "," << agg.degree << ","
       << agg.k << "," << agg.n_ls << "," << agg.n_interp << "," << agg.trials << ","
       << format_double(agg.median_ls) << "," << format_double(agg.max_ls) << ","
       << format_double(agg.median_interp) << "," << format_double(agg.max_interp) << ","
       << format_double(agg.median_qmc) << "," << format_double(agg.max_qmc) << ","
       << format_double(agg.median_legendre) << "," << format_double(agg.max_legendre) << "\n";
  }
  write_text(path, os.str());
}

void write_ratio_csv(const std::filesystem::path& path, const RatioResult& result,
                     const FileMetadata& meta) {
  std::ostringstream os;
  append_metadata(os, meta);
  for (const auto& p : result.points) {
    if (!p.status.empty()) {
      os << "# failed degree " << p.degree << ": " << p.status << "\n";
    }
  }
  os << "degree,K,N,refined\n";
  for (const auto& p : result.points) {
    if (!p.status.empty()) continue;
    os << p.degree << "," << p.k << "," << p.n << "," << (p.refined ? 1 : 0) << "\n";
  }
  write_text(path, os.str());
}

void write_fit_json(const std::filesystem::path& path, const FitResult& fit) {
  njson j;
  j["C"] = fit.c;
  j["s"] = fit.s;
  njson pairs = njson::array();
  for (const auto& [k, n] : fit.pairs) pairs.push_back({k, n});
  j["pairs"] = std::move(pairs);
  write_text(path, j.dump(2) + "\n");
}

std::string VerifyReport::to_json() const {
  njson j;
  j["pass"] = pass;
  j["n"] = n;
  j["k"] = k;
  j["residual"] = residual;
  j["min_weight"] = min_weight;
  j["weight_sum"] = weight_sum;
  j["weight_abs_sum"] = weight_abs_sum;
  j["i_of_one"] = i_of_one;
  njson checks = njson::array();
  for (const auto& c : this->checks) {
    njson node;
    node["name"] = c.name;
    node["pass"] = c.pass;
    node["detail"] = c.detail;
    checks.push_back(std::move(node));
  }
  j["checks"] = std::move(checks);
  return j.dump(2) + "\n";
}

VerifyReport verify_rule(const std::filesystem::path& csv_path, const MomentOptions& opts) {
  const RuleFile file = read_rule(csv_path);
  const Basis basis = make_basis(file.rule.basis_id, file.domain);
  const Matrix phi = basis.eval_matrix(file.rule.points.pts);
  const MomentVector m = moments(basis, file.domain, file.weight, opts);

  VerifyReport rep;
  rep.n = file.rule.points.size();
  rep.k = basis.size();
  rep.residual = (phi * file.rule.weights - m.values).norm();
  rep.min_weight = rep.n > 0 ? file.rule.weights.minCoeff() : 0.0;
  rep.weight_sum = file.rule.weights.sum();
  rep.weight_abs_sum = file.rule.weights.cwiseAbs().sum();
  rep.i_of_one = m.values[0];

  auto add = [&rep](const std::string& name, bool pass, const std::string& detail) {
    rep.checks.push_back({name, pass, detail});
    rep.pass = rep.pass && pass;
  };

  const bool exact_kind = file.rule.kind == CubatureRule::Kind::LeastSquares ||
                          file.rule.kind == CubatureRule::Kind::Interpolatory;
  const double scale = 1.0 + m.values.norm();
  if (exact_kind) {
    add("residual_bound", rep.residual <= file.exactness_tol * scale,
        "residual " + format_double(rep.residual) + " vs tol*" + format_double(scale));
    add("residual_matches_sidecar",
        std::abs(rep.residual - file.rule.residual) <= 1e-9 * scale,
        "recomputed " + format_double(rep.residual) + ", sidecar " +
            format_double(file.rule.residual));
    add("interpolatory_size",
        file.rule.kind != CubatureRule::Kind::Interpolatory || rep.n <= rep.k,
        "N = " + std::to_string(rep.n) + ", K = " + std::to_string(rep.k));
  }
  add("positive_flag", file.rule.positive == (rep.min_weight > 0.0),
      "flag " + std::string(file.rule.positive ? "true" : "false") + ", min weight " +
          format_double(rep.min_weight));
  if (file.rule.positive && exact_kind) {
    add("stability_identity",
        std::abs(rep.weight_sum - rep.i_of_one) <= 1e-10 * std::abs(rep.i_of_one),
        "sum w = " + format_double(rep.weight_sum) + ", I[1] = " + format_double(rep.i_of_one));
  }
  return rep;
}

}  // namespace lscub::io
