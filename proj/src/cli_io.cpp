#include "tdflow/cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

#include "tdflow/error.hpp"

namespace tdflow {
namespace fs = std::filesystem;
namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "benchmark",   "pipe_length",   "force_x",         "force_y",        "nx",
      "ny",          "tau0",          "eta",             "tau_threshold",  "adaptive",
      "adapt_tolerance", "stop_tolerance", "gamma",      "alpha_bar",      "beta",
      "max_iterations", "decay_check", "conv_boundary",  "init",           "seed",
      "init_center_x", "init_center_y", "init_radius",   "output_dir",     "emit_energy",
      "emit_velocity", "fields_every", "final_only"};
  return keys;
}

struct Entry {
  int line = 0;
  std::string value;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Entries {
 public:
  explicit Entries(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const auto hash = raw.find('#');
      const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (s.empty()) continue;
      const auto eq = s.find('=');
      if (eq == std::string::npos) fail(line, "", "expected 'key = value'");
      const std::string key = trim(s.substr(0, eq));
      const std::string value = trim(s.substr(eq + 1));
      if (key.empty()) fail(line, "", "missing key");
      if (!known_keys().count(key)) fail(line, key, "unknown key");
      if (value.empty()) fail(line, key, "missing value");
      if (map_.count(key)) fail(line, key, "repeated (first set on line " + std::to_string(map_[key].line) + ")");
      map_[key] = {line, value};
    }
  }

  [[noreturn]] static void fail(int line, const std::string& key, const std::string& msg) {
    std::string where = "config line " + std::to_string(line);
    if (!key.empty()) where += ", key '" + key + "'";
    throw ConfigError(where + ": " + msg);
  }

  bool has(const std::string& key) const { return map_.count(key) > 0; }
  const Entry& at(const std::string& key) const { return map_.at(key); }

  std::string text(const std::string& key) const { return at(key).value; }

  double real(const std::string& key) const {
    const Entry& e = at(key);
    double v = 0.0;
    const auto* first = e.value.data();
    const auto* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) fail(e.line, key, "not a finite number: " + e.value);
    return v;
  }

  long long integer(const std::string& key) const {
    const Entry& e = at(key);
    long long v = 0;
    const auto* first = e.value.data();
    const auto* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) fail(e.line, key, "not an integer: " + e.value);
    return v;
  }

  bool boolean(const std::string& key) const {
    const std::string v = text(key);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail(at(key).line, key, "expected true or false: " + v);
  }

  // Reads the key into `out` when present, checking `ok`.
  template <class Pred>
  void real_if(const std::string& key, double& out, Pred ok, const char* what) const {
    if (!has(key)) return;
    const double v = real(key);
    if (!ok(v)) fail(at(key).line, key, what);
    out = v;
  }

  template <class T>
  T parsed(const std::string& key, T (*parse)(const std::string&)) const {
    try {
      return parse(text(key));
    } catch (const ConfigError& e) {
      fail(at(key).line, key, e.what());
    }
  }

 private:
  std::map<std::string, Entry> map_;
};

ConvBoundary conv_boundary_from_string(const std::string& name) {
  if (name == "periodic") return ConvBoundary::periodic;
  if (name == "mirror") return ConvBoundary::mirror;
  throw ConfigError("unknown conv_boundary '" + name + "' (expected periodic or mirror)");
}

Benchmark benchmark_from(const Entries& e) {
  if (!e.has("benchmark")) throw ConfigError("config: missing required key 'benchmark'");
  const std::string name = e.text("benchmark");
  Benchmark b = e.parsed<Benchmark>("benchmark", benchmark_by_name);
  if (e.has("pipe_length")) {
    if (name != "double-pipes") Entries::fail(e.at("pipe_length").line, "pipe_length", "only for double-pipes");
    const double d = e.real("pipe_length");
    if (!(d > 0.0)) Entries::fail(e.at("pipe_length").line, "pipe_length", "must be positive");
    b = double_pipes(d);
  }
  for (const char* key : {"force_x", "force_y"}) {
    if (e.has(key) && name != "body-force") Entries::fail(e.at(key).line, key, "only for body-force");
  }
  if (name == "body-force" && (e.has("force_x") || e.has("force_y"))) {
    Vec2 f = b.body_force->force;
    if (e.has("force_x")) f[0] = e.real("force_x");
    if (e.has("force_y")) f[1] = e.real("force_y");
    b = body_force_roundabout(f);
  }
  return b;
}

DomainSpec grid_from(const Entries& e, const Benchmark& b) {
  DomainSpec g = b.domain();
  auto cells = [&](const char* key) {
    const long long n = e.integer(key);
    if (n < 2 || n > 100000) Entries::fail(e.at(key).line, key, "must lie in [2, 100000]");
    return int(n);
  };
  const bool hx = e.has("nx");
  const bool hy = e.has("ny");
  if (hx) g.nx = cells("nx");
  if (hy) g.ny = cells("ny");
  if (hx && !hy) g.ny = int(std::lround(g.nx * b.extent[1] / b.extent[0]));
  if (hy && !hx) g.nx = int(std::lround(g.ny * b.extent[0] / b.extent[1]));
  try {
    g.validate();
  } catch (const ConfigError& err) {
    throw ConfigError(std::string("config: grid ") + std::to_string(g.nx) + "x" + std::to_string(g.ny) + ": " +
                      err.what());
  }
  return g;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

RunConfig parse_config(const std::string& text) {
  const Entries e(text);
  RunConfig rc;
  rc.benchmark = benchmark_from(e);
  rc.grid = grid_from(e, rc.benchmark);

  OptimizerConfig oc = rc.benchmark.config;
  auto positive = [](double v) { return v > 0.0; };
  auto nonneg = [](double v) { return v >= 0.0; };
  e.real_if("tau0", oc.tau0, positive, "must be positive");
  e.real_if("eta", oc.eta, [](double v) { return v > 0.0 && v < 1.0; }, "must lie in (0, 1)");
  e.real_if("tau_threshold", oc.tau_threshold, positive, "must be positive");
  e.real_if("adapt_tolerance", oc.adapt_tolerance, nonneg, "must be nonnegative");
  e.real_if("stop_tolerance", oc.stop_tolerance, nonneg, "must be nonnegative");
  e.real_if("gamma", oc.gamma, nonneg, "must be nonnegative");
  e.real_if("alpha_bar", oc.alpha_bar, positive, "must be positive");
  e.real_if("beta", oc.beta, [](double v) { return v > 0.0 && v < 1.0; }, "must lie in (0, 1)");
  if (e.has("adaptive")) oc.adaptive = e.boolean("adaptive");
  if (e.has("max_iterations")) {
    const long long n = e.integer("max_iterations");
    if (n < 0 || n > 1000000) Entries::fail(e.at("max_iterations").line, "max_iterations", "must lie in [0, 1e6]");
    oc.max_iterations = int(n);
  }
  if (e.has("decay_check")) oc.decay_check = e.parsed<DecayCheck>("decay_check", decay_check_from_string);
  if (e.has("conv_boundary")) oc.conv_boundary = e.parsed<ConvBoundary>("conv_boundary", conv_boundary_from_string);
  rc.optimizer = oc.resolved(rc.grid);
  try {
    rc.optimizer.validate();
  } catch (const ConfigError& err) {
    throw ConfigError(std::string("config: ") + err.what());
  }

  rc.initial = rc.benchmark.initial;
  if (e.has("init")) rc.initial.kind = e.parsed<InitKind>("init", init_kind_from_string);
  if (e.has("seed")) {
    const long long s = e.integer("seed");
    if (s < 0) Entries::fail(e.at("seed").line, "seed", "must be nonnegative");
    rc.initial.seed = std::uint64_t(s);
  }
  auto any = [](double) { return true; };
  e.real_if("init_center_x", rc.initial.center[0], any, "");
  e.real_if("init_center_y", rc.initial.center[1], any, "");
  e.real_if("init_radius", rc.initial.radius, positive, "must be positive");

  if (e.has("output_dir")) rc.output_dir = e.text("output_dir");
  if (e.has("emit_energy")) rc.emit.energy = e.boolean("emit_energy");
  if (e.has("emit_velocity")) rc.emit.velocity = e.boolean("emit_velocity");
  if (e.has("final_only")) rc.emit.final_only = e.boolean("final_only");
  if (e.has("fields_every")) {
    const long long k = e.integer("fields_every");
    if (k < 0) Entries::fail(e.at("fields_every").line, "fields_every", "must be nonnegative");
    rc.emit.fields_every = int(k);
  }
  return rc;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void write_pgm(const fs::path& path, const IndicatorField& chi) {
  const int w = chi.grid().nodes_x();
  const int h = chi.grid().nodes_y();
  std::string data = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  // first image row is the top of the domain
  for (int j = h - 1; j >= 0; --j) {
    for (int i = 0; i < w; ++i) data.push_back(chi.chi1(std::size_t(chi.grid().node(i, j))) ? char(255) : char(0));
  }
  std::ofstream out(path, std::ios::binary);
  out.write(data.data(), std::streamsize(data.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

namespace {

std::string velocity_csv(const FlowSolution& flow) {
  std::string s = "x,y,ux,uy\n";
  const DomainSpec& g = flow.grid;
  for (int j = 0; j < g.nodes_y(); ++j) {
    for (int i = 0; i < g.nodes_x(); ++i) {
      const Vec2 p = g.node_position(i, j);
      const Vec2 u = flow.node_velocity(g.node(i, j));
      s += format_double(p[0]) + "," + format_double(p[1]) + "," + format_double(u[0]) + "," +
           format_double(u[1]) + "\n";
    }
  }
  return s;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), std::streamsize(content.size()));
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

}  // namespace

void write_velocity_csv(const fs::path& path, const FlowSolution& flow) { write_file(path, velocity_csv(flow)); }

std::string energy_csv(const std::vector<EnergyRecord>& rows) {
  std::string s = "iteration,tau,dissipation,penalty,forcing,perimeter,total,flips\n";
  for (const auto& r : rows) {
    s += std::to_string(r.iteration) + "," + format_double(r.tau) + "," + format_double(r.dissipation) + "," +
         format_double(r.penalty) + "," + format_double(r.forcing) + "," + format_double(r.perimeter) + "," +
         format_double(r.total) + "," + std::to_string(r.flips) + "\n";
  }
  return s;
}

OutputWriter::OutputWriter(RunConfig config) : config_(std::move(config)) {
  std::error_code ec;
  fs::create_directories(config_.output_dir, ec);
  if (ec || !fs::is_directory(config_.output_dir)) {
    throw IoError("output directory " + config_.output_dir.string() + " cannot be created: " + ec.message());
  }
  const fs::path probe = config_.output_dir / ".write_probe";
  {
    std::ofstream out(probe, std::ios::binary);
    out << "probe\n";
    out.close();
    if (!out) throw IoError("output directory " + config_.output_dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

void OutputWriter::write_atomic(const std::string& name, const std::string& content) const {
  const fs::path target = config_.output_dir / name;
  const fs::path tmp = config_.output_dir / (name + ".tmp");
  write_file(tmp, content);
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

void OutputWriter::write_chi(int iteration, const IndicatorField& chi) const {
  char name[32];
  std::snprintf(name, sizeof name, "chi_%04d.pgm", iteration);
  const fs::path tmp = config_.output_dir / (std::string(name) + ".tmp");
  write_pgm(tmp, chi);
  std::error_code ec;
  fs::rename(tmp, config_.output_dir / name, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

void OutputWriter::iteration(int iteration, const EnergyRecord& record, const IndicatorField& chi) {
  if (iteration == 0) rows_.clear();
  rows_.push_back(record);
  if (config_.emit.energy) write_atomic("energy.csv", energy_csv(rows_));
  const int k = config_.emit.fields_every;
  if (!config_.emit.final_only && k > 0 && iteration % k == 0) write_chi(iteration, chi);
}

void OutputWriter::finish(const OptimizationResult& result) {
  if (config_.emit.energy) write_atomic("energy.csv", energy_csv(rows_));
  const int k = config_.emit.fields_every;
  const bool already = !config_.emit.final_only && k > 0 && result.iterations % k == 0;
  if (!already) write_chi(result.iterations, result.chi_final);
  if (config_.emit.velocity) write_atomic("velocity.csv", velocity_csv(result.flow_final));

  const EnergyRecord& last = result.history.empty() ? result.initial : result.history.back();
  std::string s;
  s += "benchmark: " + config_.benchmark.name + "\n";
  s += "grid: " + std::to_string(config_.grid.nx) + "x" + std::to_string(config_.grid.ny) + "\n";
  s += "termination_reason: " + std::string(to_string(result.termination_reason)) + "\n";
  s += "converged: " + std::string(result.converged ? "true" : "false") + "\n";
  s += "iterations: " + std::to_string(result.iterations) + "\n";
  s += "fluid_nodes: " + std::to_string(result.chi_final.volume()) + "\n";
  s += "final_tau: " + format_double(last.tau) + "\n";
  s += "final_energy: " + format_double(last.total) + "\n";
  s += "decay_warnings: " + std::to_string(result.decay_warnings) + "\n";
  s += "worst_relative_energy_increase: " + format_double(result.worst_decay_violation) + "\n";
  write_atomic("run_summary.txt", s);
}

OptimizationResult execute(const RunConfig& config, OutputWriter* writer) {
  const BrinkmanProblem problem = make_problem(config.benchmark, config.grid, config.optimizer.alpha_bar);
  const IndicatorField chi0 = initial_chi(config.initial, config.grid, config.optimizer.beta);
  IterationObserver observer;
  if (writer) {
    observer = [writer](int it, const EnergyRecord& rec, const IndicatorField& chi, const FlowSolution&) {
      writer->iteration(it, rec, chi);
    };
  }
  OptimizationResult result = run(problem, chi0, config.optimizer, observer);
  if (writer) writer->finish(result);
  return result;
}

}  // namespace tdflow
