#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tdflow/cli_io.hpp"
#include "tdflow/error.hpp"

using namespace tdflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tdflow_unit_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

int chi_files(const fs::path& dir) {
  int n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ".pgm";
  return n;
}

}  // namespace

TEST_CASE("minimal config takes the benchmark defaults") {
  const RunConfig c = parse_config("benchmark = diffuser\n");
  CHECK(c.benchmark.name == "diffuser");
  CHECK(c.grid.nx == 128);
  CHECK(c.optimizer.gamma == 0.1);
  CHECK(c.optimizer.tau_threshold == doctest::Approx(0.01 / 16));
  CHECK(c.optimizer.adapt_tolerance == doctest::Approx(2.0 / 128));
  CHECK(c.initial.kind == InitKind::stripe);
  CHECK(c.output_dir == fs::path("out"));
}

TEST_CASE("overrides change only their field") {
  const RunConfig base = parse_config("benchmark = diffuser");
  const RunConfig c = parse_config("# comment\nbenchmark = diffuser\n  gamma = 0.001   # inline\n");
  CHECK(c.optimizer.gamma == 0.001);
  CHECK(c.optimizer.tau0 == base.optimizer.tau0);
  CHECK(c.optimizer.beta == base.optimizer.beta);
  CHECK(c.grid == base.grid);

  const RunConfig p = parse_config("benchmark = double-pipes\npipe_length = 0.5\nny = 64\n");
  CHECK(p.grid.nx == 32);
  CHECK(p.grid.ny == 64);
  const RunConfig f = parse_config("benchmark = body-force\nforce_x = 562.5\n");
  CHECK(f.benchmark.body_force->force[0] == 562.5);
}

TEST_CASE("schema violations name the line and key") {
  CHECK(error_of("benchmark = diffuser\nbeta = 1.5\n").find("line 2, key 'beta'") != std::string::npos);
  CHECK(error_of("benchmark = diffuser\ncolour = red\n").find("key 'colour': unknown key") != std::string::npos);
  CHECK(error_of("benchmark = diffuser\ngamma = 1\ngamma = 2\n").find("line 3, key 'gamma'") != std::string::npos);
  CHECK(error_of("benchmark = diffuser\nnx = 12.5\n").find("key 'nx'") != std::string::npos);
  CHECK(error_of("benchmark = diffuser\nadaptive = maybe\n").find("key 'adaptive'") != std::string::npos);
  CHECK(error_of("benchmark = diffuser\ntau0 = 0.01\ntau_threshold = 0.1\n").find("tau_threshold") !=
        std::string::npos);
  CHECK(error_of("benchmark = nope\n").find("key 'benchmark'") != std::string::npos);
  CHECK(error_of("gamma = 0.1\n").find("benchmark") != std::string::npos);
  CHECK(error_of("benchmark = diffuser\nforce_x = 1\n").find("only for body-force") != std::string::npos);
  CHECK(error_of("benchmark diffuser\n").find("line 1") != std::string::npos);
}

TEST_CASE("PGM layout") {
  const DomainSpec g{{0, 0}, {1, 1}, 2, 2};
  std::vector<std::uint8_t> v(9, 0);
  v[g.node(0, 0)] = 1;  // bottom-left
  v[g.node(2, 2)] = 1;  // top-right
  const fs::path dir = scratch("pgm");
  fs::create_directories(dir);
  write_pgm(dir / "a.pgm", IndicatorField(g, v));
  const std::string s = slurp(dir / "a.pgm");
  const std::string header = "P5\n3 3\n255\n";
  REQUIRE(s.size() == header.size() + 9);
  CHECK(s.substr(0, header.size()) == header);
  const std::string px = s.substr(header.size());
  CHECK(std::uint8_t(px[2]) == 255);  // first row is the top
  CHECK(std::uint8_t(px[6]) == 255);
  CHECK(std::count(px.begin(), px.end(), char(0)) == 7);
}

TEST_CASE("energy csv uses full precision") {
  EnergyRecord r;
  r.iteration = 3;
  r.tau = 0.1;
  r.dissipation = 1.0 / 3.0;
  r.total = 1.0 / 3.0;
  r.flips = 12;
  const std::string s = energy_csv({r});
  CHECK(s == "iteration,tau,dissipation,penalty,forcing,perimeter,total,flips\n"
             "3,0.10000000000000001,0.33333333333333331,0,0,0,0.33333333333333331,12\n");
  CHECK(std::stod(format_double(0.1)) == 0.1);
}

TEST_CASE("run outputs, final-only and determinism") {
  const fs::path a = scratch("run_a");
  const fs::path b = scratch("run_b");
  const std::string base = "benchmark = diffuser\nnx = 16\nadaptive = false\nmax_iterations = 5\nfields_every = 2\n";
  RunConfig ca = parse_config(base + "output_dir = " + a.string() + "\n");
  OutputWriter wa(ca);
  const auto ra = execute(ca, &wa);
  CHECK(fs::exists(a / "energy.csv"));
  CHECK(fs::exists(a / "velocity.csv"));
  CHECK(fs::exists(a / "run_summary.txt"));
  CHECK(fs::exists(a / "chi_0000.pgm"));
  CHECK(fs::exists(a / "chi_0002.pgm"));
  CHECK(fs::exists(a / ("chi_" + std::string(4 - std::to_string(ra.iterations).size(), '0') +
                        std::to_string(ra.iterations) + ".pgm")));

  const std::string csv = slurp(a / "energy.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == ra.iterations + 2);
  std::istringstream rows(csv);
  std::string line;
  std::getline(rows, line);
  while (std::getline(rows, line)) {
    std::vector<double> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(std::stod(cell));
    REQUIRE(f.size() == 8);
    CHECK(f[6] == doctest::Approx(f[2] + f[3] + f[4] + f[5]).epsilon(1e-12));
  }
  const std::string vel = slurp(a / "velocity.csv");
  CHECK(vel.rfind("x,y,ux,uy\n", 0) == 0);
  CHECK(std::count(vel.begin(), vel.end(), '\n') == 17 * 17 + 1);
  CHECK(slurp(a / "run_summary.txt").find("benchmark: diffuser") != std::string::npos);

  RunConfig cb = parse_config(base + "output_dir = " + b.string() + "\nfinal_only = true\n");
  OutputWriter wb(cb);
  execute(cb, &wb);
  CHECK(chi_files(b) == 1);
  CHECK(slurp(b / "energy.csv") == csv);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("unusable output directory fails before the run") {
  const fs::path f = scratch("blocker");
  std::ofstream(f) << "x";
  RunConfig c = parse_config("benchmark = diffuser\nnx = 8\n");
  c.output_dir = f / "sub";
  CHECK_THROWS_AS(OutputWriter{c}, IoError);
  fs::remove(f);
}
