#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lscub/experiments.hpp"

namespace lscub::io {

// 17 significant digits; round-trips every finite double exactly.
std::string format_double(double v);
double parse_double(const std::string& s);

std::uint64_t fnv1a(std::string_view s);

// JSON descriptors ({"kind": ..., ...}); parsers accept exactly what the
// emitters produce.
std::string domain_to_json(const Domain& d);
Domain domain_from_json(const std::string& text);
std::string weight_to_json(const WeightFunction& w);
WeightFunction weight_from_json(const std::string& text);
std::string basis_to_json(const BasisSpec& b);
BasisSpec basis_from_json(const std::string& text);
std::string generator_to_json(const GeneratorSpec& g);
GeneratorSpec generator_from_json(const std::string& text);

// Named presets: cube2/cube3 = [-1,1]^d, unit-cube2/unit-cube3 = [0,1]^d,
// ball2 = unit disk, nonstandard = disk plus offset square.
std::optional<Domain> domain_preset(const std::string& name);
std::optional<WeightFunction> weight_preset(const std::string& name);  // one, chebyshev, radial-half

std::string generator_kind_name(GeneratorSpec::Kind kind);
std::optional<GeneratorSpec::Kind> generator_kind_from_name(const std::string& name);
std::string rule_kind_name(CubatureRule::Kind kind);
std::optional<CubatureRule::Kind> rule_kind_from_name(const std::string& name);

struct FileMetadata {
  std::string tool = std::string("lscub ") + kVersion;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

// CSV header `index,x1,...,xd`; metadata rides in leading '#' comment lines.
void write_points_csv(const std::filesystem::path& path, const PointSet& pts,
                      const FileMetadata& meta);
PointSet read_points_csv(const std::filesystem::path& path);

struct SubsampleRecord {
  std::string method;
  long passes = 0;
  double residual_before = 0.0;
  double residual_after = 0.0;
  bool converged = true;
};

// One rule on disk: CSV `n,x1,...,xd,w` plus a JSON sidecar carrying the
// descriptors needed to recompute Phi and m from scratch.
struct RuleFile {
  CubatureRule rule;
  Domain domain;
  WeightFunction weight = WeightFunction::one();
  std::optional<GeneratorSpec> generator;
  double exactness_tol = 1e-8;
  std::vector<BuildAttempt> attempts;
  std::optional<SubsampleRecord> subsample;
  FileMetadata meta;
};

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);
void write_rule(const std::filesystem::path& csv_path, const RuleFile& file);
RuleFile read_rule(const std::filesystem::path& csv_path);

void write_moments_csv(const std::filesystem::path& path, const Basis& basis,
                       const MomentVector& m, const FileMetadata& meta);

// `genz_kind,generator,degree,K,N_ls,N_interp,trial,err_ls,err_interp,err_qmc,err_legendre`
void write_error_table_csv(const std::filesystem::path& path, const ErrorTable& table,
                           const FileMetadata& meta);
void write_error_summary_csv(const std::filesystem::path& path,
                             const std::vector<AggregateRecord>& rows, const FileMetadata& meta);

// `degree,K,N,refined` and the fit JSON {C, s, pairs}.
void write_ratio_csv(const std::filesystem::path& path, const RatioResult& result,
                     const FileMetadata& meta);
void write_fit_json(const std::filesystem::path& path, const FitResult& fit);

struct VerifyCheck {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct VerifyReport {
  bool pass = true;
  long n = 0;
  long k = 0;
  double residual = 0.0;
  double min_weight = 0.0;
  double weight_sum = 0.0;
  double weight_abs_sum = 0.0;
  double i_of_one = 0.0;
  std::vector<VerifyCheck> checks;

  std::string to_json() const;
};

// Recomputes Phi and m from the sidecar descriptors and checks every stored
// invariant of the rule: residual bound, positivity flag, interpolatory size,
// stability identity, and agreement with the sidecar values.
VerifyReport verify_rule(const std::filesystem::path& csv_path, const MomentOptions& opts = {});

}  // namespace lscub::io
