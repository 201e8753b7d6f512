#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "l1cert/certify.hpp"
#include "l1cert/geometry.hpp"
#include "l1cert/recover.hpp"
#include "l1cert/weak.hpp"

namespace l1cert {

std::string_view version();

enum class Command { Gen, Certify, Decode, WeakSim, Geometry, Sweep };

std::string_view to_string(Command command);
Command parse_command(std::string_view name);

struct GeneratorSpec {
  std::string ensemble;  // "gaussian" or "rademacher"
  Index m = 0;
  Index n = 0;
};

/// "gaussian:m,n" / "rademacher:m,n"; nothing for anything else (a file path).
std::optional<GeneratorSpec> parse_generator(std::string_view text);

Matrix generate_matrix(const GeneratorSpec& spec, RngStream& rng);

/// Generator spec (drawn from RngStream(seed)) or matrix file.
Matrix resolve_matrix(const std::string& source, std::uint64_t seed);

struct SweepGrid {
  std::string task = "certify";  // certify | weak-sim
  std::string ensemble = "gaussian";
  std::vector<Index> m;
  std::vector<Index> n;
  /// Pair m and n elementwise; otherwise every (m, n) with m < n.
  bool zip = false;
  std::vector<double> k{1.0};
  std::vector<long> trials{100};
};

struct ExperimentConfig {
  Command command = Command::Certify;
  std::string matrix;
  std::string signal;
  bool box = false;
  std::uint64_t seed = 0;
  double lp_tol = 1e-8;
  double sdp_tol = 1e-6;
  long sdp_max_iters = 100000;
  bool exact = false;
  bool lp_bound = true;
  double k = 1.0;
  long trials = 100;
  double beta = 1.0;
  long samples = 1000;
  long mstar_samples = 0;
  std::optional<Index> codim;
  GeometryConstants constants{};
  std::string out;
  std::string csv;
  SweepGrid grid;
  /// 0 picks default_workers().
  unsigned workers = 0;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

nlohmann::json config_to_json(const ExperimentConfig& config);
/// Throws ConfigError for unknown fields and wrong types.
ExperimentConfig config_from_json(const nlohmann::json& j);
/// Throws ConfigError with line and column on malformed JSON.
ExperimentConfig load_config_file(const std::string& path);

/// "c=1,c1=2" style overrides.
GeometryConstants parse_constants(std::string_view text, GeometryConstants base = {});

nlohmann::json to_json(const CertificateReport& report);
nlohmann::json to_json(const DecodeResult& result);
nlohmann::json to_json(const WeakBoundReport& report, const MembershipRate& rate);
nlohmann::json to_json(const GeometryReport& report);

struct ResultRecord {
  nlohmann::json config;
  nlohmann::json output;
  /// Matrix text for gen, CSV table for sweep.
  std::string text;
  double wall_clock = 0.0;
  std::string version;
  std::uint64_t seed = 0;
  /// Some sweep point (or the single command) failed.
  bool failed = false;

  nlohmann::json to_json() const;
  static ResultRecord from_json(const nlohmann::json& j);
};

/// Validates, dispatches, and writes `out` (record JSON, or the matrix for gen)
/// and `csv` (sweeps). Sweep points run on the worker pool; a failing point is
/// recorded with its error and does not stop the sweep.
ResultRecord run(const ExperimentConfig& config);

/// Two-column CSV of (x, y) over every record's output; sweep records
/// contribute one row per successful point. Rows sorted by x, ties in input
/// order. Throws FieldMissing.
std::string emit_plot_data(const std::vector<ResultRecord>& records, const std::string& x, const std::string& y);

}  // namespace l1cert
