// Command-line front end: one subcommand per experiment kind.
//
// Exit codes: 0 success, 1 configuration or input error, 2 computation
// failure (including any failed sweep point).

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "l1cert/error.hpp"
#include "l1cert/harness.hpp"

namespace {

using l1cert::Command;
using l1cert::ExperimentConfig;

void add_common(CLI::App* sub, ExperimentConfig& c) {
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--out", c.out, "write the result record (or the matrix, for gen) here");
  sub->add_option("--workers", c.workers, "threads; 0 uses L1CERT_WORKERS or the core count");
}

void add_solver(CLI::App* sub, ExperimentConfig& c) {
  sub->add_option("--tol,--lp-tol", c.lp_tol, "LP tolerance");
  sub->add_option("--sdp-tol", c.sdp_tol, "SDP tolerance");
  sub->add_option("--sdp-max-iters", c.sdp_max_iters, "SDP iteration cap");
}

int run_records(const std::vector<std::string>& files, const std::string& x, const std::string& y) {
  std::vector<l1cert::ResultRecord> records;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) l1cert::fail(l1cert::ErrorKind::ConfigError, "cannot open " + f);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      l1cert::fail(l1cert::ErrorKind::ParseError, f + ": " + e.what());
    }
    records.push_back(l1cert::ResultRecord::from_json(j));
  }
  std::cout << l1cert::emit_plot_data(records, x, y);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse-recovery certificates for sensing matrices"};
  app.set_version_flag("--version", std::string(l1cert::version()));
  app.require_subcommand(1);

  ExperimentConfig c;
  std::string config_file;
  std::string constants;
  long codim = 0;
  std::vector<std::string> record_files;
  std::string plot_x, plot_y;

  auto* gen = app.add_subcommand("gen", "generate a matrix from gaussian:m,n or rademacher:m,n");
  gen->add_option("spec", c.matrix, "generator spec")->required();
  add_common(gen, c);

  auto* cert = app.add_subcommand("certify", "bounds on S(A) and the certified cardinality");
  cert->add_option("--matrix", c.matrix, "matrix file or generator spec")->required();
  cert->add_flag("--exact", c.exact, "add the brute-force value (n <= 14, m <= 7)");
  cert->add_flag("!--no-lp", c.lp_bound, "skip the LP relaxation");
  add_solver(cert, c);
  add_common(cert, c);

  auto* dec = app.add_subcommand("decode", "ell_1 decoding of A u");
  dec->add_option("--matrix", c.matrix, "matrix file or generator spec")->required();
  dec->add_option("--signal", c.signal, "signal file (n x 1)")->required();
  dec->add_flag("--box", c.box, "add the constraint ||x||_inf <= 1");
  add_solver(dec, c);
  add_common(dec, c);

  auto* weak = app.add_subcommand("weak-sim", "random-signal bounds and Monte-Carlo failure rate");
  weak->add_option("--matrix", c.matrix, "matrix file or generator spec")->required();
  weak->add_option("--k", c.k, "expected cardinality");
  weak->add_option("--trials", c.trials, "Monte-Carlo trials");
  weak->add_option("--beta", c.beta, "beta in the recovery condition");
  weak->add_flag("--exact", c.exact, "use the brute-force S(A) when available");
  add_solver(weak, c);
  add_common(weak, c);

  auto* geo = app.add_subcommand("geometry", "M(K), b(K), Dvoretzky dimension, M*(K) and diameter bounds");
  geo->add_option("--matrix", c.matrix, "matrix file or generator spec")->required();
  geo->add_option("--samples", c.samples, "sphere samples");
  geo->add_option("--mstar-samples", c.mstar_samples, "dual-norm samples (default: --samples)");
  geo->add_option("--constants", constants, "overrides such as c=1,c1=1,c2=1,c3=1");
  geo->add_option("--codim", codim, "codimension of the random section (default ceil(d/2))");
  add_solver(geo, c);
  add_common(geo, c);

  auto* sweep = app.add_subcommand("sweep", "grid of generated instances; CSV plus JSON record");
  sweep->add_option("--task", c.grid.task, "certify or weak-sim");
  sweep->add_option("--ensemble", c.grid.ensemble, "gaussian or rademacher");
  sweep->add_option("--m", c.grid.m, "row counts")->delimiter(',')->required();
  sweep->add_option("--n", c.grid.n, "column counts")->delimiter(',')->required();
  sweep->add_flag("--zip", c.grid.zip, "pair m and n elementwise");
  sweep->add_option("--k", c.grid.k, "expected cardinalities (weak-sim)")->delimiter(',');
  sweep->add_option("--trials", c.grid.trials, "trial counts (weak-sim)")->delimiter(',');
  sweep->add_option("--beta", c.beta, "beta (weak-sim)");
  sweep->add_option("--csv", c.csv, "CSV output path (default: stdout)");
  sweep->add_flag("--exact", c.exact, "brute-force S(A) per point");
  sweep->add_flag("!--no-lp", c.lp_bound, "skip the LP relaxation");
  add_solver(sweep, c);
  add_common(sweep, c);

  auto* plot = app.add_subcommand("plot", "two-column CSV from result records");
  plot->add_option("records", record_files, "result record JSON files");
  plot->add_option("--x", plot_x, "x field")->required();
  plot->add_option("--y", plot_y, "y field")->required();

  auto* runc = app.add_subcommand("run", "run a JSON experiment configuration");
  runc->add_option("--config", config_file, "configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (plot->parsed()) return run_records(record_files, plot_x, plot_y);

    if (runc->parsed()) {
      c = l1cert::load_config_file(config_file);
    } else {
      if (gen->parsed()) c.command = Command::Gen;
      else if (cert->parsed()) c.command = Command::Certify;
      else if (dec->parsed()) c.command = Command::Decode;
      else if (weak->parsed()) c.command = Command::WeakSim;
      else if (geo->parsed()) c.command = Command::Geometry;
      else c.command = Command::Sweep;
      if (!constants.empty()) c.constants = l1cert::parse_constants(constants, c.constants);
      if (geo->count("--codim")) c.codim = codim;
    }

    const l1cert::ResultRecord rec = l1cert::run(c);
    if (c.command == Command::Gen) {
      if (c.out.empty()) std::cout << rec.text;
    } else if (c.command == Command::Sweep) {
      if (c.csv.empty()) std::cout << rec.text;
      else std::cout << rec.output.dump(2) << '\n';
    } else {
      std::cout << rec.output.dump(2) << '\n';
    }
    return rec.failed ? 2 : 0;
  } catch (const l1cert::Error& e) {
    std::cerr << "l1cert: " << e.what() << '\n';
    const auto k = e.kind();
    return k == l1cert::ErrorKind::ConfigError || k == l1cert::ErrorKind::ParseError ||
                   k == l1cert::ErrorKind::FieldMissing
               ? 1
               : 2;
  } catch (const std::exception& e) {
    std::cerr << "l1cert: " << e.what() << '\n';
    return 2;
  }
}
