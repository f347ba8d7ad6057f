#include "tdflow/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "tdflow/error.hpp"

namespace tdflow {
namespace {

Vec2 outward(Side side) {
  switch (side) {
    case Side::left: return {-1.0, 0.0};
    case Side::right: return {1.0, 0.0};
    case Side::bottom: return {0.0, -1.0};
    case Side::top: return {0.0, 1.0};
  }
  return {0.0, 0.0};
}

bool vertical(Side side) { return side == Side::left || side == Side::right; }

double side_length(const Vec2& extent, Side side) { return vertical(side) ? extent[1] : extent[0]; }

std::string port_tag(const PortSpec& port, int index) {
  switch (port.kind) {
    case PortKind::dirichlet_parabolic_in: return "inlet" + std::to_string(index);
    case PortKind::dirichlet_parabolic_out: return "outlet" + std::to_string(index);
    case PortKind::neumann_zero: return "open" + std::to_string(index);
  }
  return "port" + std::to_string(index);
}

// Takes the M nodes with the smallest key; stable in node index.
IndicatorField lowest_m(const DomainSpec& grid, const std::vector<double>& key, long m) {
  std::vector<int> order(key.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key[a] < key[b]; });
  std::vector<std::uint8_t> chi(key.size(), 0);
  for (long k = 0; k < m; ++k) chi[order[k]] = 1;
  return IndicatorField(grid, std::move(chi));
}

}  // namespace

double parabolic_profile(double gbar, double l, double t) {
  if (!(l > 0.0)) throw ArgumentError("parabolic_profile: length must be positive");
  const double s = 2.0 * t / l;
  return std::abs(s) <= 1.0 ? gbar * (1.0 - s * s) : 0.0;
}

const char* to_string(InitKind kind) {
  switch (kind) {
    case InitKind::stripe: return "stripe";
    case InitKind::random: return "random";
    case InitKind::disk: return "disk";
    case InitKind::parallel_pipes: return "parallel_pipes";
  }
  return "?";
}

InitKind init_kind_from_string(const std::string& name) {
  if (name == "stripe") return InitKind::stripe;
  if (name == "random") return InitKind::random;
  if (name == "disk") return InitKind::disk;
  if (name == "parallel_pipes") return InitKind::parallel_pipes;
  throw ConfigError("unknown initializer '" + name + "' (expected stripe, random, disk or parallel_pipes)");
}

IndicatorField initial_chi(const InitialSpec& spec, const DomainSpec& grid, double beta) {
  grid.validate();
  const long m = target_volume(grid, beta);
  const int count = grid.node_count();

  if (spec.kind == InitKind::random) {
    std::mt19937_64 rng(spec.seed);
    std::vector<int> perm(count);
    std::iota(perm.begin(), perm.end(), 0);
    // hand-rolled so the sequence does not depend on the standard library
    for (int i = count - 1; i > 0; --i) {
      const auto j = static_cast<int>(rng() % std::uint64_t(i + 1));
      std::swap(perm[i], perm[j]);
    }
    std::vector<std::uint8_t> chi(count, 0);
    for (long k = 0; k < m; ++k) chi[perm[k]] = 1;
    return IndicatorField(grid, std::move(chi));
  }

  std::vector<double> key(count);
  const double y_mid = grid.origin[1] + 0.5 * grid.extent[1];
  for (int j = 0; j < grid.nodes_y(); ++j) {
    for (int i = 0; i < grid.nodes_x(); ++i) {
      const Vec2 p = grid.node_position(i, j);
      double d = 0.0;
      switch (spec.kind) {
        case InitKind::stripe:
          d = std::abs(p[1] - y_mid);
          break;
        case InitKind::disk:
          d = std::hypot(p[0] - spec.center[0], p[1] - spec.center[1]);
          break;
        case InitKind::parallel_pipes: {
          // signed distance to [13/60, 23/60] u [37/60, 47/60]
          const double bands[2][2] = {{13.0 / 60, 23.0 / 60}, {37.0 / 60, 47.0 / 60}};
          d = std::numeric_limits<double>::infinity();
          for (const auto& b : bands) d = std::min(d, std::max(b[0] - p[1], p[1] - b[1]));
          break;
        }
        case InitKind::random:
          break;
      }
      key[grid.node(i, j)] = d;
    }
  }
  return lowest_m(grid, key, m);
}

Benchmark diffuser() {
  Benchmark b;
  b.name = "diffuser";
  b.ports = {{Side::left, 0.5, 1.0, 1.0, PortKind::dirichlet_parabolic_in},
             {Side::right, 0.5, 1.0 / 3.0, 3.0, PortKind::dirichlet_parabolic_out}};
  b.config.tau0 = 0.01;
  b.config.gamma = 0.1;
  b.config.alpha_bar = 2.5e4;
  b.config.beta = 0.5;
  b.initial.kind = InitKind::stripe;
  return b;
}

Benchmark double_pipes(double d) {
  if (!(d > 0.0)) throw ConfigError("double-pipes: length must be positive");
  Benchmark b;
  b.name = "double-pipes";
  b.extent = {d, 1.0};
  const double l = 1.0 / 6.0;
  for (double y : {0.25, 0.75}) {
    b.ports.push_back({Side::left, y, l, 1.0, PortKind::dirichlet_parabolic_in});
    b.ports.push_back({Side::right, y, l, 1.0, PortKind::dirichlet_parabolic_out});
  }
  b.config.alpha_bar = 2.5e4;
  b.config.beta = 1.0 / 3.0;
  if (d < 1.0) {
    b.nx = 128;
    b.ny = 256;
    b.config.tau0 = 0.001;
    b.config.gamma = 0.001;
    b.config.adaptive = false;
    b.initial.kind = InitKind::random;
    b.initial.seed = 1;
  } else {
    b.ny = 128;
    b.nx = int(std::lround(d * 128));
    b.config.tau0 = 0.01;
    b.config.gamma = 1e-4;
    b.initial.kind = InitKind::stripe;
  }
  return b;
}

Benchmark body_force_roundabout(Vec2 force) {
  Benchmark b;
  b.name = "body-force";
  const double l = 1.0 / 6.0;
  b.ports = {{Side::left, 2.0 / 3.0, l, 1.0, PortKind::dirichlet_parabolic_in},
             {Side::right, 2.0 / 3.0, l, 1.0, PortKind::dirichlet_parabolic_out}};
  b.body_force = BodyForceSpec{{0.5, 1.0 / 3.0}, 1.0 / 12.0, force};
  b.config.tau0 = 0.01;
  b.config.gamma = 1e-4;
  b.config.alpha_bar = 2.5e4;
  b.config.beta = 0.25;
  b.initial = {InitKind::disk, 0, {0.5, 0.5}, 1.0 / std::sqrt(3.0 * std::numbers::pi)};
  return b;
}

Benchmark three_terminal() {
  Benchmark b;
  b.name = "three-terminal";
  b.extent = {1.0, 1.4};
  b.nx = 80;
  b.ny = 112;
  b.ports = {{Side::left, 0.3, 0.2, 0.5, PortKind::dirichlet_parabolic_in},
             {Side::right, 0.7, 0.2, 0.25, PortKind::dirichlet_parabolic_out},
             {Side::left, 1.1, 0.2, 0.0, PortKind::neumann_zero}};
  b.config.tau0 = 0.01;
  b.config.gamma = 1e-4;
  b.config.alpha_bar = 2.5e4;
  b.config.beta = 0.3;
  b.initial.kind = InitKind::parallel_pipes;
  return b;
}

std::vector<std::string> benchmark_names() { return {"diffuser", "double-pipes", "body-force", "three-terminal"}; }

Benchmark benchmark_by_name(const std::string& name) {
  if (name == "diffuser") return diffuser();
  if (name == "double-pipes") return double_pipes();
  if (name == "body-force") return body_force_roundabout();
  if (name == "three-terminal") return three_terminal();
  throw ConfigError("unknown benchmark '" + name + "'");
}

void validate_benchmark(const Benchmark& b) {
  if (!(b.extent[0] > 0.0 && b.extent[1] > 0.0)) throw ConfigError(b.name + ": extent must be positive");
  for (std::size_t i = 0; i < b.ports.size(); ++i) {
    const auto& p = b.ports[i];
    if (!(p.length > 0.0)) throw ConfigError(b.name + ": port length must be positive");
    const double len = side_length(b.extent, p.side);
    const double tol = 1e-12 * len;
    if (p.center - 0.5 * p.length < -tol || p.center + 0.5 * p.length > len + tol) {
      throw ConfigError(b.name + ": port " + std::to_string(i) + " leaves the " + to_string(p.side) + " side");
    }
    for (std::size_t k = 0; k < i; ++k) {
      const auto& q = b.ports[k];
      if (q.side != p.side) continue;
      const double overlap = std::min(p.center + 0.5 * p.length, q.center + 0.5 * q.length) -
                             std::max(p.center - 0.5 * p.length, q.center - 0.5 * q.length);
      if (overlap > tol) {
        throw ConfigError(b.name + ": ports " + std::to_string(k) + " and " + std::to_string(i) + " overlap");
      }
    }
  }
  if (b.body_force) {
    const auto& f = *b.body_force;
    if (!(f.radius > 0.0)) throw ConfigError(b.name + ": force radius must be positive");
    if (f.center[0] - f.radius < 0.0 || f.center[0] + f.radius > b.extent[0] || f.center[1] - f.radius < 0.0 ||
        f.center[1] + f.radius > b.extent[1]) {
      throw ConfigError(b.name + ": force disk leaves the domain");
    }
  }
}

BrinkmanProblem make_problem(const Benchmark& b, const DomainSpec& grid, double alpha_bar) {
  validate_benchmark(b);
  grid.validate();
  if (std::abs(grid.extent[0] - b.extent[0]) > 1e-12 || std::abs(grid.extent[1] - b.extent[1]) > 1e-12 ||
      grid.origin != Vec2{0.0, 0.0}) {
    throw ConfigError(b.name + ": grid does not cover the benchmark domain");
  }

  std::vector<BoundarySegment> segments;
  for (std::size_t i = 0; i < b.ports.size(); ++i) {
    const auto& p = b.ports[i];
    segments.push_back({p.side, p.center, p.length, port_tag(p, int(i))});
  }
  Mesh mesh = build_mesh(grid, segments);

  struct Snapped {
    double center;
    double length;
  };
  std::vector<Snapped> snapped;
  double inflow = 0.0;
  double outflow = 0.0;
  bool has_open = false;
  for (std::size_t i = 0; i < b.ports.size(); ++i) {
    const auto [lo, hi] = snapped_interval(grid, segments[i]);
    if (!(hi > lo)) throw ConfigError(b.name + ": port " + segments[i].tag + " covers no boundary edge");
    snapped.push_back({0.5 * (lo + hi), hi - lo});
    // the P2 trace of a parabola vanishing at the port ends is exact, so the
    // discrete flux is (2/3) gbar l
    const double flux = 2.0 / 3.0 * b.ports[i].peak_speed * (hi - lo);
    if (b.ports[i].kind == PortKind::dirichlet_parabolic_in) inflow += flux;
    if (b.ports[i].kind == PortKind::dirichlet_parabolic_out) outflow += flux;
    if (b.ports[i].kind == PortKind::neumann_zero) has_open = true;
  }
  double out_scale = 1.0;
  if (!has_open) {
    if (outflow > 0.0) {
      out_scale = inflow / outflow;
    } else if (inflow > 0.0) {
      throw ConfigError(b.name + ": inflow without outflow on a closed domain");
    }
  }

  BoundarySpec bc;
  bc.emplace_back(kWallTag, BoundaryCondition::dirichlet());
  for (std::size_t i = 0; i < b.ports.size(); ++i) {
    const auto& p = b.ports[i];
    if (p.kind == PortKind::neumann_zero) {
      bc.emplace_back(segments[i].tag, BoundaryCondition::neumann());
      continue;
    }
    const Vec2 n = outward(p.side);
    const double sign = p.kind == PortKind::dirichlet_parabolic_in ? -1.0 : 1.0;
    const double gbar = p.kind == PortKind::dirichlet_parabolic_out ? p.peak_speed * out_scale : p.peak_speed;
    const Snapped s = snapped[i];
    const bool vert = vertical(p.side);
    bc.emplace_back(segments[i].tag, BoundaryCondition::dirichlet([=](const Vec2& x) {
      const double t = (vert ? x[1] : x[0]) - s.center;
      const double speed = sign * parabolic_profile(gbar, s.length, t);
      return Vec2{speed * n[0], speed * n[1]};
    }));
  }
  // the wall tag may be absent when ports cover the whole boundary
  const auto tags = mesh.tags();
  if (std::find(tags.begin(), tags.end(), std::string(kWallTag)) == tags.end()) bc.erase(bc.begin());

  DofMap dofmap = build_dofmap(mesh, bc);

  VectorFunction force;
  if (b.body_force) {
    const BodyForceSpec f = *b.body_force;
    force = [f](const Vec2& x) {
      const double dx = x[0] - f.center[0];
      const double dy = x[1] - f.center[1];
      return dx * dx + dy * dy <= f.radius * f.radius ? f.force : Vec2{0.0, 0.0};
    };
  }
  return BrinkmanProblem::create(std::move(mesh), std::move(dofmap), b.mu, alpha_bar, std::move(force));
}

BrinkmanProblem make_problem(const Benchmark& b) { return make_problem(b, b.domain(), b.config.alpha_bar); }

}  // namespace tdflow
