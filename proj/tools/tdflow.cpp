#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>

#include "tdflow/cli_io.hpp"
#include "tdflow/conv.hpp"
#include "tdflow/error.hpp"

using namespace tdflow;

namespace {

int cmd_list() {
  for (const auto& name : benchmark_names()) std::cout << name << "\n";
  return 0;
}

int cmd_run(const std::string& path, const std::string& output_override) {
  RunConfig config = load_config(path);
  if (!output_override.empty()) config.output_dir = output_override;
  OutputWriter writer(config);
  std::cout << "benchmark " << config.benchmark.name << " on " << config.grid.nx << "x" << config.grid.ny
            << ", output in " << writer.directory().string() << "\n";
  const OptimizationResult result = execute(config, &writer);
  const EnergyRecord& last = result.history.empty() ? result.initial : result.history.back();
  std::cout << to_string(result.termination_reason) << " after " << result.iterations
            << " iterations, energy " << format_double(last.total) << "\n";
  return 0;
}

bool check(bool ok, const std::string& label, const std::string& detail) {
  std::cout << (ok ? "ok    " : "FAIL  ") << label << " (" << detail << ")\n";
  return ok;
}

int cmd_verify(const std::string& path, int iterations) {
  RunConfig config = load_config(path);
  bool all = true;

  // convolution against direct summation
  {
    const DomainSpec lattice{{0.0, 0.0}, {15.0 / 64.0, 15.0 / 64.0}, 15, 15};
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    NodalScalarField f(lattice);
    for (std::size_t n = 0; n < f.size(); ++n) f[n] = u(rng);
    double worst = 0.0;
    for (double tau : {1e-3, 1e-2, 1e-1}) {
      const auto a = gaussian_convolve(f, tau);
      const auto b = direct_convolve_oracle(f, tau);
      for (std::size_t n = 0; n < f.size(); ++n) worst = std::max(worst, std::abs(a[n] - b[n]));
    }
    all &= check(worst <= 1e-10, "convolution oracle", "max diff " + format_double(worst));
  }

  const BrinkmanProblem problem = make_problem(config.benchmark, config.grid, config.optimizer.alpha_bar);
  {
    const double flux = dirichlet_net_flux(problem.mesh, problem.dofmap);
    const bool closed = !problem.dofmap.has_neumann();
    all &= check(!closed || std::abs(flux) <= 1e-10, "flux balance",
                 "net Dirichlet flux " + format_double(flux) + (closed ? "" : ", open boundary present"));
  }

  {
    RunConfig short_run = config;
    short_run.optimizer.max_iterations = iterations;
    short_run.optimizer.decay_check = DecayCheck::strict;
    bool ok = true;
    std::string detail;
    try {
      const OptimizationResult r = execute(short_run);
      ok = r.chi_final.volume() == target_volume(config.grid, config.optimizer.beta);
      detail = std::to_string(r.iterations) + " iterations, worst relative increase " +
               format_double(r.worst_decay_violation);
    } catch (const InvariantError& e) {
      ok = false;
      detail = e.what();
    }
    all &= check(ok, "strict energy decay", detail);
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Threshold-dynamics topology optimization for Stokes flow"};
  app.require_subcommand(1);

  std::string run_path;
  std::string output_dir;
  auto* run = app.add_subcommand("run", "Run the optimizer on a config file");
  run->add_option("config", run_path, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output", output_dir, "Override output_dir");

  auto* list = app.add_subcommand("list-benchmarks", "Print the built-in benchmark names");

  std::string verify_path;
  int verify_iterations = 8;
  auto* verify = app.add_subcommand("verify", "Run the invariant checks for a config");
  verify->add_option("config", verify_path, "Config file")->required()->check(CLI::ExistingFile);
  verify->add_option("--iterations", verify_iterations, "Iterations of the strict decay run")
      ->check(CLI::Range(1, 1000));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) return cmd_list();
    if (*run) return cmd_run(run_path, output_dir);
    if (*verify) return cmd_verify(verify_path, verify_iterations);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
