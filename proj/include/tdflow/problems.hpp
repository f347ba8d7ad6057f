#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tdflow/brinkman.hpp"
#include "tdflow/fields.hpp"
#include "tdflow/grid.hpp"
#include "tdflow/optimizer.hpp"

namespace tdflow {

enum class PortKind { dirichlet_parabolic_in, dirichlet_parabolic_out, neumann_zero };

struct PortSpec {
  Side side = Side::left;
  double center = 0.5;  // coordinate along the side
  double length = 1.0;
  double peak_speed = 1.0;
  PortKind kind = PortKind::dirichlet_parabolic_in;
};

/// Constant force density on a disk, zero elsewhere.
struct BodyForceSpec {
  Vec2 center{0.5, 0.5};
  double radius = 0.1;
  Vec2 force{0.0, 0.0};
};

/// gbar * (1 - (2t/l)^2) for |t| <= l/2, zero outside.
double parabolic_profile(double gbar, double l, double t);

enum class InitKind { stripe, random, disk, parallel_pipes };

const char* to_string(InitKind kind);
InitKind init_kind_from_string(const std::string& name);

struct InitialSpec {
  InitKind kind = InitKind::stripe;
  std::uint64_t seed = 0;
  Vec2 center{0.5, 0.5};
  double radius = 0.25;
};

/// Exactly target_volume(grid, beta) fluid nodes. Nodes are ranked by signed
/// distance to the nominal region (ties by node index) and the first M are
/// taken, so regions that are too small or too large are padded or trimmed
/// from their boundary.
IndicatorField initial_chi(const InitialSpec& spec, const DomainSpec& grid, double beta);

struct Benchmark {
  std::string name;
  Vec2 extent{1.0, 1.0};
  int nx = 128;
  int ny = 128;
  std::vector<PortSpec> ports;
  std::optional<BodyForceSpec> body_force;
  double mu = 1.0;
  OptimizerConfig config;
  InitialSpec initial;

  DomainSpec domain() const { return {{0.0, 0.0}, extent, nx, ny}; }
};

Benchmark diffuser();
Benchmark double_pipes(double d = 1.5);
Benchmark body_force_roundabout(Vec2 force = {-1125.0, 0.0});
Benchmark three_terminal();

std::vector<std::string> benchmark_names();
/// Benchmark by CLI name with its default parameters; ConfigError if unknown.
Benchmark benchmark_by_name(const std::string& name);

/// Throws ConfigError if a port leaves its side or two ports on one side
/// overlap, or the force disk leaves the domain.
void validate_benchmark(const Benchmark& benchmark);

/// Builds mesh and boundary data on `grid` (which must cover the benchmark's
/// extent). Walls are no-slip. Parabolic ports use the edge-snapped port
/// interval; with no Neumann port the outflow speeds are scaled so the
/// discrete boundary flux balances exactly.
BrinkmanProblem make_problem(const Benchmark& benchmark, const DomainSpec& grid, double alpha_bar);
BrinkmanProblem make_problem(const Benchmark& benchmark);

}  // namespace tdflow
