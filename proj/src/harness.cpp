#include "l1cert/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "l1cert/error.hpp"
#include "l1cert/matrix_io.hpp"
#include "l1cert/parallel.hpp"

#ifndef L1CERT_VERSION
#define L1CERT_VERSION "0.0.0"
#endif

namespace l1cert {

using nlohmann::json;

std::string_view version() { return L1CERT_VERSION; }

namespace {

constexpr std::pair<Command, std::string_view> kCommandNames[] = {
    {Command::Gen, "gen"},           {Command::Certify, "certify"},   {Command::Decode, "decode"},
    {Command::WeakSim, "weak-sim"},  {Command::Geometry, "geometry"}, {Command::Sweep, "sweep"},
};

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  fail(ErrorKind::ConfigError, "field '" + field + "': " + what);
}

template <class T>
bool parse_number(std::string_view text, T& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::string csv_number(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// ---- config parsing helpers

void expect(bool ok, const std::string& field, const char* type) {
  if (!ok) config_error(field, std::string("expected ") + type);
}

double get_double(const json& j, const std::string& f) {
  expect(j.is_number(), f, "a number");
  return j.get<double>();
}

long get_long(const json& j, const std::string& f) {
  expect(j.is_number_integer(), f, "an integer");
  return j.get<long>();
}

std::uint64_t get_u64(const json& j, const std::string& f) {
  expect(j.is_number_unsigned(), f, "a nonnegative integer");
  return j.get<std::uint64_t>();
}

bool get_bool(const json& j, const std::string& f) {
  expect(j.is_boolean(), f, "true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& f) {
  expect(j.is_string(), f, "a string");
  return j.get<std::string>();
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& prefix) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) config_error(prefix + key, "unknown field");
}

bool is_file_source(const std::string& source) { return !parse_generator(source).has_value(); }

void require_file(const std::string& field, const std::string& path) {
  if (path.empty()) config_error(field, "required");
  if (!std::filesystem::exists(path)) config_error(field, "file not found: " + path);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::ConfigError, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorKind::ConfigError, "failed writing " + path);
}

// ---- per-command work

CertifyOptions certify_options(const ExperimentConfig& c, unsigned workers) {
  CertifyOptions o;
  o.lp_tol = c.lp_tol;
  o.sdp.tol = c.sdp_tol;
  o.sdp.max_iters = c.sdp_max_iters;
  o.exact = c.exact;
  o.with_lp_bound = c.lp_bound;
  o.workers = workers;
  return o;
}

struct WeakOutcome {
  WeakBoundReport bound;
  MembershipRate rate;
};

WeakOutcome weak_sim(const Matrix& M, const ExperimentConfig& c, double k, long trials, const RngStream& rng,
                     unsigned workers) {
  const SensingMatrix A(M);
  CertifyOptions o = certify_options(c, workers);
  o.with_lp_bound = false;
  const CertificateReport cert = certify(A, o);
  const double S_A = cert.s_exact.value_or(cert.s_upper);
  const SignalModel model{A.cols(), k};
  WeakOutcome w;
  w.bound = weak_bound_report(S_A, model, c.beta);
  w.rate = monte_carlo_membership_rate(M, model, trials, rng, workers);
  return w;
}

json run_certify(const Matrix& M, const ExperimentConfig& c, unsigned workers) {
  return to_json(certify(SensingMatrix(M), certify_options(c, workers)));
}

json run_weak(const Matrix& M, const ExperimentConfig& c, double k, long trials, const RngStream& rng,
              unsigned workers) {
  const WeakOutcome w = weak_sim(M, c, k, trials, rng, workers);
  json j = to_json(w.bound, w.rate);
  j["k"] = k;
  return j;
}

json run_geometry(const Matrix& M, const ExperimentConfig& c, unsigned workers) {
  GeometryOptions o;
  o.samples = c.samples;
  o.mstar_samples = c.mstar_samples;
  o.codim = c.codim;
  o.constants = c.constants;
  o.sdp.tol = c.sdp_tol;
  o.sdp.max_iters = c.sdp_max_iters;
  o.lp_tol = c.lp_tol;
  o.workers = workers;
  return to_json(geometry_report(SensingMatrix(M), RngStream(c.seed, 2), o));
}

json run_decode(const Matrix& M, const ExperimentConfig& c) {
  const Matrix s = read_matrix_file(c.signal);
  if (s.cols() != 1) config_error("signal", "expected an n x 1 matrix");
  if (s.rows() != M.cols()) config_error("signal", "length does not match the matrix column count");
  const SparseSignal u{Vector(s.col(0))};
  json j = to_json(decode_signal(M, u, c.box, c.lp_tol));
  j["box"] = c.box;
  return j;
}

struct GridPoint {
  Index m = 0;
  Index n = 0;
  double k = 0.0;
  long trials = 0;
};

std::vector<GridPoint> expand_grid(const SweepGrid& g) {
  std::vector<std::pair<Index, Index>> shapes;
  if (g.zip) {
    for (std::size_t i = 0; i < g.m.size(); ++i) shapes.emplace_back(g.m[i], g.n[i]);
  } else {
    for (Index m : g.m)
      for (Index n : g.n)
        if (m < n) shapes.emplace_back(m, n);
  }
  std::vector<GridPoint> points;
  for (auto [m, n] : shapes) {
    if (g.task == "weak-sim") {
      for (double k : g.k)
        for (long t : g.trials) points.push_back({m, n, k, t});
    } else {
      points.push_back({m, n, 0.0, 0});
    }
  }
  return points;
}

const std::vector<std::string>& sweep_columns(const std::string& task) {
  static const std::vector<std::string> certify_cols{
      "alpha1", "sdp", "lp", "s_lower", "s_upper", "recovery_S", "certified_cardinality"};
  static const std::vector<std::string> weak_cols{
      "S_A", "E_norm", "xi", "tail_probability", "condition_holds", "failure_probability",
      "failures", "rate", "wilson_halfwidth"};
  return task == "weak-sim" ? weak_cols : certify_cols;
}

json run_sweep(const ExperimentConfig& c, unsigned workers, std::string& csv, bool& failed) {
  const std::vector<GridPoint> points = expand_grid(c.grid);
  std::vector<json> results(points.size());
  const bool weak = c.grid.task == "weak-sim";
  // Points run in parallel; each solve inside a point stays single-threaded.
  parallel_for(points.size(), workers, [&](std::size_t i) {
    const GridPoint& p = points[i];
    json row;
    row["index"] = i;
    row["m"] = p.m;
    row["n"] = p.n;
    if (weak) {
      row["k"] = p.k;
      row["trials"] = p.trials;
    }
    try {
      RngStream matrix_rng = RngStream(c.seed, 0).derive(i);
      const Matrix M = generate_matrix({c.grid.ensemble, p.m, p.n}, matrix_rng);
      const json out = weak ? run_weak(M, c, p.k, p.trials, RngStream(c.seed, 1).derive(i), 1)
                            : run_certify(M, c, 1);
      for (const auto& [key, value] : out.items()) row[key] = value;
      row["status"] = "ok";
    } catch (const std::exception& e) {
      row["status"] = "error";
      row["error"] = e.what();
    }
    results[i] = std::move(row);
  });

  std::ostringstream table;
  table << "index,m,n";
  if (weak) table << ",k,trials";
  table << ",status";
  for (const auto& col : sweep_columns(c.grid.task)) table << ',' << col;
  table << ",error\n";
  json out;
  out["task"] = c.grid.task;
  out["points"] = json::array();
  failed = false;
  for (const json& row : results) {
    table << row["index"].dump() << ',' << row["m"].dump() << ',' << row["n"].dump();
    if (weak) table << ',' << csv_number(row["k"]) << ',' << row["trials"].dump();
    table << ',' << row["status"].get<std::string>();
    for (const auto& col : sweep_columns(c.grid.task))
      table << ',' << (row.contains(col) ? csv_number(row[col]) : std::string());
    table << ',' << (row.contains("error") ? csv_escape(row["error"].get<std::string>()) : std::string()) << '\n';
    if (row["status"] != "ok") failed = true;
    out["points"].push_back(row);
  }
  csv = table.str();
  return out;
}

}  // namespace

std::string_view to_string(Command command) {
  for (const auto& [c, name] : kCommandNames)
    if (c == command) return name;
  return "unknown";
}

Command parse_command(std::string_view name) {
  for (const auto& [c, n] : kCommandNames)
    if (n == name) return c;
  config_error("command", "unknown command '" + std::string(name) + "'");
}

std::optional<GeneratorSpec> parse_generator(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  GeneratorSpec spec;
  spec.ensemble = std::string(text.substr(0, colon));
  if (spec.ensemble != "gaussian" && spec.ensemble != "rademacher") return std::nullopt;
  const std::string_view dims = text.substr(colon + 1);
  const auto comma = dims.find(',');
  if (comma == std::string_view::npos || !parse_number(dims.substr(0, comma), spec.m) ||
      !parse_number(dims.substr(comma + 1), spec.n) || spec.m < 1 || spec.n < 1)
    fail(ErrorKind::ConfigError, "generator spec must look like " + spec.ensemble + ":m,n with m, n >= 1");
  return spec;
}

Matrix generate_matrix(const GeneratorSpec& spec, RngStream& rng) {
  if (spec.ensemble == "gaussian") return gaussian_matrix(spec.m, spec.n, rng);
  if (spec.ensemble == "rademacher") return rademacher_matrix(spec.m, spec.n, rng);
  fail(ErrorKind::ConfigError, "unknown ensemble '" + spec.ensemble + "'");
}

Matrix resolve_matrix(const std::string& source, std::uint64_t seed) {
  if (auto spec = parse_generator(source)) {
    RngStream rng(seed, 0);
    return generate_matrix(*spec, rng);
  }
  return read_matrix_file(source);
}

void ExperimentConfig::validate() const {
  const bool needs_matrix = command != Command::Sweep;
  if (needs_matrix) {
    if (matrix.empty()) config_error("matrix", "required");
    if (command == Command::Gen) {
      if (!parse_generator(matrix)) config_error("matrix", "gen needs a generator spec such as gaussian:m,n");
    } else if (is_file_source(matrix)) {
      require_file("matrix", matrix);
    }
  }
  if (command == Command::Decode) require_file("signal", signal);
  if (!(lp_tol > 0.0)) config_error("lp_tol", "must be positive");
  if (!(sdp_tol > 0.0)) config_error("sdp_tol", "must be positive");
  if (sdp_max_iters < 1) config_error("sdp_max_iters", "must be at least 1");
  if (command == Command::WeakSim) {
    if (!(k >= 0.0)) config_error("k", "must be nonnegative");
    if (trials < 1) config_error("trials", "must be at least 1");
  }
  if ((command == Command::WeakSim || (command == Command::Sweep && grid.task == "weak-sim")) && !(beta > 0.0))
    config_error("beta", "must be positive");
  if (command == Command::Geometry) {
    if (samples < 2) config_error("samples", "must be at least 2");
    if (mstar_samples != 0 && mstar_samples < 2) config_error("mstar_samples", "must be 0 or at least 2");
    if (codim && *codim < 1) config_error("codim", "must be at least 1");
  }
  if (!(constants.c > 0.0 && constants.c1 > 0.0 && constants.c2 > 0.0 && constants.c3 > 0.0))
    config_error("constants", "all constants must be positive");
  if (command == Command::Sweep) {
    if (grid.task != "certify" && grid.task != "weak-sim") config_error("grid.task", "must be certify or weak-sim");
    if (grid.ensemble != "gaussian" && grid.ensemble != "rademacher")
      config_error("grid.ensemble", "must be gaussian or rademacher");
    if (grid.m.empty()) config_error("grid.m", "needs at least one value");
    if (grid.n.empty()) config_error("grid.n", "needs at least one value");
    for (Index v : grid.m)
      if (v < 1) config_error("grid.m", "values must be at least 1");
    for (Index v : grid.n)
      if (v < 1) config_error("grid.n", "values must be at least 1");
    if (grid.zip && grid.m.size() != grid.n.size()) config_error("grid.zip", "m and n lists differ in length");
    if (grid.task == "weak-sim") {
      if (grid.k.empty()) config_error("grid.k", "needs at least one value");
      if (grid.trials.empty()) config_error("grid.trials", "needs at least one value");
      for (long t : grid.trials)
        if (t < 1) config_error("grid.trials", "values must be at least 1");
    }
    if (expand_grid(grid).empty()) config_error("grid", "no (m, n) pair with m < n");
  }
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["command"] = std::string(to_string(c.command));
  j["matrix"] = c.matrix;
  j["signal"] = c.signal;
  j["box"] = c.box;
  j["seed"] = c.seed;
  j["lp_tol"] = c.lp_tol;
  j["sdp_tol"] = c.sdp_tol;
  j["sdp_max_iters"] = c.sdp_max_iters;
  j["exact"] = c.exact;
  j["lp_bound"] = c.lp_bound;
  j["k"] = c.k;
  j["trials"] = c.trials;
  j["beta"] = c.beta;
  j["samples"] = c.samples;
  j["mstar_samples"] = c.mstar_samples;
  j["codim"] = c.codim ? json(*c.codim) : json(nullptr);
  j["constants"] = {{"c", c.constants.c}, {"c1", c.constants.c1}, {"c2", c.constants.c2}, {"c3", c.constants.c3}};
  j["out"] = c.out;
  j["csv"] = c.csv;
  j["grid"] = {{"task", c.grid.task}, {"ensemble", c.grid.ensemble}, {"m", c.grid.m},
               {"n", c.grid.n},       {"zip", c.grid.zip},           {"k", c.grid.k},
               {"trials", c.grid.trials}};
  j["workers"] = c.workers;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorKind::ConfigError, "configuration must be a JSON object");
  reject_unknown(j,
                 {"command", "matrix", "signal", "box", "seed", "lp_tol", "sdp_tol", "sdp_max_iters", "exact",
                  "lp_bound", "k", "trials", "beta", "samples", "mstar_samples", "codim", "constants", "out", "csv",
                  "grid", "workers"},
                 "");
  ExperimentConfig c;
  if (!j.contains("command")) config_error("command", "required");
  c.command = parse_command(get_string(j["command"], "command"));
  auto has = [&](const char* key) { return j.contains(key) && !j[key].is_null(); };
  if (has("matrix")) c.matrix = get_string(j["matrix"], "matrix");
  if (has("signal")) c.signal = get_string(j["signal"], "signal");
  if (has("box")) c.box = get_bool(j["box"], "box");
  if (has("seed")) c.seed = get_u64(j["seed"], "seed");
  if (has("lp_tol")) c.lp_tol = get_double(j["lp_tol"], "lp_tol");
  if (has("sdp_tol")) c.sdp_tol = get_double(j["sdp_tol"], "sdp_tol");
  if (has("sdp_max_iters")) c.sdp_max_iters = get_long(j["sdp_max_iters"], "sdp_max_iters");
  if (has("exact")) c.exact = get_bool(j["exact"], "exact");
  if (has("lp_bound")) c.lp_bound = get_bool(j["lp_bound"], "lp_bound");
  if (has("k")) c.k = get_double(j["k"], "k");
  if (has("trials")) c.trials = get_long(j["trials"], "trials");
  if (has("beta")) c.beta = get_double(j["beta"], "beta");
  if (has("samples")) c.samples = get_long(j["samples"], "samples");
  if (has("mstar_samples")) c.mstar_samples = get_long(j["mstar_samples"], "mstar_samples");
  if (has("codim")) c.codim = get_long(j["codim"], "codim");
  if (has("out")) c.out = get_string(j["out"], "out");
  if (has("csv")) c.csv = get_string(j["csv"], "csv");
  if (has("workers")) c.workers = static_cast<unsigned>(get_u64(j["workers"], "workers"));
  if (has("constants")) {
    const json& k = j["constants"];
    expect(k.is_object(), "constants", "an object");
    reject_unknown(k, {"c", "c1", "c2", "c3"}, "constants.");
    if (k.contains("c")) c.constants.c = get_double(k["c"], "constants.c");
    if (k.contains("c1")) c.constants.c1 = get_double(k["c1"], "constants.c1");
    if (k.contains("c2")) c.constants.c2 = get_double(k["c2"], "constants.c2");
    if (k.contains("c3")) c.constants.c3 = get_double(k["c3"], "constants.c3");
  }
  if (has("grid")) {
    const json& g = j["grid"];
    expect(g.is_object(), "grid", "an object");
    reject_unknown(g, {"task", "ensemble", "m", "n", "zip", "k", "trials"}, "grid.");
    if (g.contains("task")) c.grid.task = get_string(g["task"], "grid.task");
    if (g.contains("ensemble")) c.grid.ensemble = get_string(g["ensemble"], "grid.ensemble");
    if (g.contains("zip")) c.grid.zip = get_bool(g["zip"], "grid.zip");
    auto list = [&](const char* key, auto& target, auto getter) {
      if (!g.contains(key)) return;
      const std::string field = std::string("grid.") + key;
      expect(g[key].is_array(), field, "an array");
      target.clear();
      for (std::size_t i = 0; i < g[key].size(); ++i)
        target.push_back(getter(g[key][i], field + "[" + std::to_string(i) + "]"));
    };
    list("m", c.grid.m, [](const json& v, const std::string& f) { return static_cast<Index>(get_long(v, f)); });
    list("n", c.grid.n, [](const json& v, const std::string& f) { return static_cast<Index>(get_long(v, f)); });
    list("k", c.grid.k, get_double);
    list("trials", c.grid.trials, get_long);
  }
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::ConfigError, "cannot open config file " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t pos = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const long line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n');
    const std::size_t line_start = text.rfind('\n', pos == 0 ? 0 : pos - 1);
    const std::size_t column = line_start == std::string::npos ? pos + 1 : pos - line_start;
    fail(ErrorKind::ConfigError,
         path + ":" + std::to_string(line) + ":" + std::to_string(column) + ": malformed JSON");
  }
  return config_from_json(j);
}

GeometryConstants parse_constants(std::string_view text, GeometryConstants base) {
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) config_error("constants", "expected name=value, got '" + std::string(item) + "'");
    const std::string_view name = item.substr(0, eq);
    double value = 0.0;
    if (!parse_number(item.substr(eq + 1), value))
      config_error("constants", "bad value in '" + std::string(item) + "'");
    if (name == "c") base.c = value;
    else if (name == "c1") base.c1 = value;
    else if (name == "c2") base.c2 = value;
    else if (name == "c3") base.c3 = value;
    else config_error("constants", "unknown constant '" + std::string(name) + "'");
  }
  return base;
}

json to_json(const CertificateReport& r) {
  json j;
  j["alpha1"] = r.alpha1;
  j["sdp"] = r.sdp_value;
  j["lp"] = optional_number(r.lp_value);
  j["s_lower"] = r.s_lower;
  j["s_upper"] = r.s_upper;
  j["s_exact"] = optional_number(r.s_exact);
  j["recovery_S"] = optional_number(r.recovery_S);
  j["certified_cardinality"] = r.certified_cardinality;
  json d;
  d["trivial_nullspace"] = r.trivial_nullspace;
  d["s_convention"] = "radius";
  d["sdp_lower"] = r.sdp_lower;
  d["sdp_upper"] = r.sdp_upper;
  d["sdp_status"] = std::string(to_string(r.sdp_status));
  d["sdp_iterations"] = r.sdp_iterations;
  d["sdp_primal_residual"] = r.sdp_primal_residual;
  d["sdp_dual_residual"] = r.sdp_dual_residual;
  d["sdp_reduced_dim"] = r.sdp_reduced_dim;
  d["alpha1_lp_solves"] = r.alpha1_lp_solves;
  d["alpha1_pivots"] = r.alpha1_pivots;
  d["lp_status"] = r.lp_status ? json(std::string(to_string(*r.lp_status))) : json(nullptr);
  d["lp_iterations"] = r.lp_iterations;
  j["diagnostics"] = d;
  return j;
}

json to_json(const DecodeResult& r) {
  json j;
  j["x"] = std::vector<double>(r.x.data(), r.x.data() + r.x.size());
  j["objective"] = r.objective;
  j["signature_subset_of_u"] = r.signature_subset_of_u;
  j["exact_match"] = r.exact_match;
  j["iterations"] = r.iterations;
  return j;
}

json to_json(const WeakBoundReport& r, const MembershipRate& rate) {
  json j;
  j["S_A"] = r.S_A;
  j["E_norm"] = r.E_norm;
  j["xi"] = optional_number(r.xi);
  j["M_A_bound"] = r.M_A_bound;
  j["tail_probability"] = r.tail_probability;
  j["tail_vacuous"] = r.tail_vacuous;
  j["condition_holds"] = r.condition_holds;
  j["failure_probability"] = r.failure_probability;
  j["failure_vacuous"] = r.failure_vacuous;
  j["beta"] = r.beta;
  j["trials"] = rate.trials;
  j["failures"] = rate.failures;
  j["rate"] = rate.rate;
  j["wilson_low"] = rate.interval.low;
  j["wilson_high"] = rate.interval.high;
  j["wilson_halfwidth"] = rate.interval.halfwidth;
  return j;
}

json to_json(const GeometryReport& r) {
  json j;
  j["n"] = r.n;
  j["d"] = r.d;
  j["codim"] = r.codim;
  j["M_K"] = r.M_K;
  j["M_K_mc"] = {{"mean", r.M_K_mc.mean}, {"std_error", r.M_K_mc.std_error}};
  j["b_K_sdp"] = r.b_K_sdp;
  j["b_K_lower"] = r.b_K_lower;
  j["dvoretzky_k"] = r.dvoretzky_k;
  j["M_star"] = {{"mean", r.M_star.mean}, {"std_error", r.M_star.std_error}};
  j["diameter_bound"] = r.diameter_bound;
  j["S_from_diameter"] = r.S_from_diameter;
  if (r.low_m) {
    j["low_m"] = {{"diameter", r.low_m->diameter},
                  {"delta", optional_number(r.low_m->delta)},
                  {"M_normalized", r.M_normalized},
                  {"lambda", r.lambda}};
  } else {
    j["low_m"] = nullptr;
  }
  j["constants_used"] = {{"c", r.constants_used.c},
                         {"c1", r.constants_used.c1},
                         {"c2", r.constants_used.c2},
                         {"c3", r.constants_used.c3}};
  j["conventions"] = {{"diameter_bound", "diameter"},
                      {"S_from_diameter", "1/diameter^2"},
                      {"low_m", "diameter of the body scaled by 1/b_K_sdp"}};
  j["diagnostics"] = {{"sdp_status", std::string(to_string(r.sdp_status))}, {"sdp_iterations", r.sdp_iterations}};
  return j;
}

json ResultRecord::to_json() const {
  json j;
  j["config"] = config;
  j["output"] = output;
  j["wall_clock"] = wall_clock;
  j["version"] = version;
  j["seed"] = seed;
  j["failed"] = failed;
  return j;
}

ResultRecord ResultRecord::from_json(const json& j) {
  if (!j.is_object() || !j.contains("output")) fail(ErrorKind::ParseError, "result record needs an 'output' object");
  ResultRecord r;
  r.config = j.value("config", json::object());
  r.output = j["output"];
  r.wall_clock = j.value("wall_clock", 0.0);
  r.version = j.value("version", std::string());
  r.seed = j.value("seed", std::uint64_t{0});
  r.failed = j.value("failed", false);
  return r;
}

ResultRecord run(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const unsigned workers = config.workers == 0 ? default_workers() : config.workers;

  ResultRecord rec;
  rec.config = config_to_json(config);
  rec.version = std::string(version());
  rec.seed = config.seed;

  switch (config.command) {
    case Command::Gen: {
      const Matrix M = resolve_matrix(config.matrix, config.seed);
      rec.text = format_matrix(M);
      rec.output = {{"generator", config.matrix}, {"rows", M.rows()}, {"cols", M.cols()}};
      break;
    }
    case Command::Certify:
      rec.output = run_certify(resolve_matrix(config.matrix, config.seed), config, workers);
      break;
    case Command::Decode:
      rec.output = run_decode(resolve_matrix(config.matrix, config.seed), config);
      break;
    case Command::WeakSim:
      rec.output = run_weak(resolve_matrix(config.matrix, config.seed), config, config.k, config.trials,
                            RngStream(config.seed, 1), workers);
      break;
    case Command::Geometry:
      rec.output = run_geometry(resolve_matrix(config.matrix, config.seed), config, workers);
      break;
    case Command::Sweep:
      rec.output = run_sweep(config, workers, rec.text, rec.failed);
      break;
  }
  rec.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!config.out.empty())
    write_text_file(config.out, config.command == Command::Gen ? rec.text : rec.to_json().dump(2) + "\n");
  if (!config.csv.empty() && config.command == Command::Sweep) write_text_file(config.csv, rec.text);
  return rec;
}

std::string emit_plot_data(const std::vector<ResultRecord>& records, const std::string& x, const std::string& y) {
  struct Row {
    double key;
    json xv;
    json yv;
  };
  std::vector<Row> rows;
  auto take = [&](const json& obj, std::size_t record) {
    for (const std::string& f : {x, y})
      if (!obj.contains(f) || !obj[f].is_number())
        fail(ErrorKind::FieldMissing, "record " + std::to_string(record) + " has no numeric field '" + f + "'");
    rows.push_back({obj[x].get<double>(), obj[x], obj[y]});
  };
  for (std::size_t r = 0; r < records.size(); ++r) {
    const json& out = records[r].output;
    if (out.contains("points") && out["points"].is_array()) {
      for (const json& p : out["points"])
        if (p.value("status", std::string()) == "ok") take(p, r);
    } else {
      take(out, r);
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.key < b.key; });
  std::string csv = csv_escape(x) + "," + csv_escape(y) + "\n";
  for (const Row& row : rows) csv += row.xv.dump() + "," + row.yv.dump() + "\n";
  return csv;
}

}  // namespace l1cert
