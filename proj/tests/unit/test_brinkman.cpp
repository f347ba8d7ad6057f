#include <doctest.h>

#include <cmath>

#include "manufactured.hpp"
#include "tdflow/brinkman.hpp"
#include "tdflow/error.hpp"
#include "tdflow/problems.hpp"

using namespace tdflow;

namespace {

BrinkmanProblem poiseuille(int n) {
  const DomainSpec d{{0, -0.5}, {1, 1}, n, n};
  Mesh mesh = build_mesh(d);
  auto profile = [](const Vec2& p) { return Vec2{1.0 - 4.0 * p[1] * p[1], 0.0}; };
  DofMap dm = build_dofmap(mesh, {{kWallTag, BoundaryCondition::dirichlet(profile)}});
  return BrinkmanProblem::create(std::move(mesh), std::move(dm), 1.0, 1.0);
}

FlowSolution solve_uniform(const BrinkmanProblem& pb, double alpha) {
  return solve(assemble(pb, NodalScalarField(pb.grid(), alpha)));
}

}  // namespace

TEST_CASE("homogeneous problem has the zero solution") {
  const DomainSpec d{{0, 0}, {1, 1}, 2, 2};
  Mesh mesh = build_mesh(d);
  DofMap dm = build_dofmap(mesh, {{kWallTag, BoundaryCondition::dirichlet()}});
  const auto pb = BrinkmanProblem::create(std::move(mesh), std::move(dm), 1.0, 1.0);
  const auto sol = solve_uniform(pb, 0.0);
  for (double v : sol.velocity) CHECK(v == 0.0);
  for (double v : sol.pressure) CHECK(v == 0.0);
  CHECK(sol.residual_norm == 0.0);
  CHECK(dissipation(sol, pb) == 0.0);
  CHECK(speed_squared_nodal(sol).max() == 0.0);
}

TEST_CASE("Poiseuille flow is reproduced exactly") {
  const auto pb = poiseuille(8);
  const auto sol = solve_uniform(pb, 0.0);
  for (int n = 0; n < pb.dofmap.p2_count(); ++n) {
    const Vec2& p = pb.dofmap.p2_nodes[n];
    CHECK(std::abs(sol.velocity[2 * n] - (1.0 - 4.0 * p[1] * p[1])) <= 1e-10);
    CHECK(std::abs(sol.velocity[2 * n + 1]) <= 1e-10);
  }
  CHECK(dissipation(sol, pb) == doctest::Approx(8.0 / 3.0).epsilon(1e-10));
  const auto s = speed_squared_nodal(sol);
  for (int j = 0; j <= 8; ++j) {
    const double y = -0.5 + j / 8.0;
    for (int i = 0; i <= 8; ++i) CHECK(std::abs(s(i, j) - std::pow(1 - 4 * y * y, 2)) <= 1e-12);
  }
  // Pressure drop 8 per unit length, zero mean.
  const auto& p = sol.pressure;
  CHECK(p[pb.grid().node(0, 3)] - p[pb.grid().node(8, 3)] == doctest::Approx(8.0).epsilon(1e-9));
  double mean = 0.0;
  for (double v : p) mean += v;
  CHECK(std::abs(mean) <= 1e-9);
}

TEST_CASE("dissipation is quadratic in u") {
  const auto pb = poiseuille(6);
  auto sol = solve_uniform(pb, 0.0);
  const double d1 = dissipation(sol, pb);
  for (double& v : sol.velocity) v *= 2.0;
  CHECK(dissipation(sol, pb) == doctest::Approx(4.0 * d1).epsilon(1e-12));
}

TEST_CASE("manufactured solution converges at the Taylor-Hood rates") {
  const auto ref = testing::manufactured_reference();
  ErrorNorms prev;
  for (int n : {8, 16, 32}) {
    const auto pb = testing::manufactured_problem(n);
    const auto sol = solve_uniform(pb, 0.0);
    const ErrorNorms e = error_norms(sol, pb, ref);
    if (n > 8) {
      CHECK(std::log2(prev.velocity_l2 / e.velocity_l2) >= 2.8);
      CHECK(std::log2(prev.velocity_h1 / e.velocity_h1) >= 1.8);
      CHECK(std::log2(prev.pressure_l2 / e.pressure_l2) >= 1.8);
    }
    if (n == 32) CHECK(dissipation(sol, pb) == doctest::Approx(M_PI * M_PI).epsilon(1e-3));
    prev = e;
  }
}

TEST_CASE("weak-form energy balance and divergence") {
  const auto pb = testing::manufactured_problem(12);
  NodalScalarField alpha(pb.grid());
  for (int j = 0; j <= 12; ++j)
    for (int i = 0; i <= 12; ++i) alpha(i, j) = 50.0 * (i + j);
  const auto sol = solve(assemble(pb, alpha));
  const double lhs = 2.0 * dissipation(sol, pb) + 2.0 * penalty_energy(sol, pb, alpha);
  CHECK(lhs == doctest::Approx(load_work(sol, pb)).epsilon(1e-8));
  for (double m : divergence_moments(sol, pb)) CHECK(std::abs(m) <= 1e-10);

  // The lattice density reproduces the assembled penalty exactly.
  const auto s = speed_squared_density(sol, pb);
  const double h = pb.grid().h();
  CHECK(0.5 * h * h * nodal_dot(alpha, s) == doctest::Approx(penalty_energy(sol, pb, alpha)).epsilon(1e-12));
}

TEST_CASE("strong penalization suppresses the flow") {
  const auto pb = testing::manufactured_problem(8);
  // Zero load: replace the force by nothing.
  BrinkmanProblem still = pb;
  still.body_force = {};
  const auto sol = solve_uniform(still, 2.5e4);
  for (double v : sol.velocity) CHECK(std::abs(v) <= 1e-8);
}

TEST_CASE("half-plane permeability reaches half strength at the interface") {
  const DomainSpec d{{0, 0}, {1, 1}, 128, 128};
  std::vector<std::uint8_t> chi1(d.node_count(), 0);
  for (int j = 0; j <= 128; ++j)
    for (int i = 0; i < 64; ++i) chi1[d.node(i, j)] = 1;
  const IndicatorField chi(d, chi1);
  const double abar = 2.5e4;
  const auto alpha = build_alpha_field(chi, 1e-3, abar);
  // The interface lies halfway between columns 63 and 64.
  const double mid = 0.5 * (alpha(63, 40) + alpha(64, 40));
  CHECK(mid == doctest::Approx(abar / 2).epsilon(0.02));
  for (int i = 40; i < 88; ++i) CHECK(alpha(i + 1, 40) >= alpha(i, 40));
  CHECK(alpha.min() >= -1e-12 * abar);
  CHECK(alpha.max() <= abar * (1 + 1e-12));

  const IndicatorField solid(d, std::vector<std::uint8_t>(d.node_count(), 0));
  CHECK(build_alpha_field(solid, 0.01, abar).min() == doctest::Approx(abar));
  const IndicatorField fluid(d, std::vector<std::uint8_t>(d.node_count(), 1));
  CHECK(std::abs(build_alpha_field(fluid, 0.01, abar).max()) <= 1e-9);
}

TEST_CASE("diffuser flux balances on the first solve") {
  const Benchmark b = diffuser();
  const DomainSpec grid{{0, 0}, {1, 1}, 32, 32};
  const auto pb = make_problem(b, grid, b.config.alpha_bar);
  CHECK(std::abs(dirichlet_net_flux(pb.mesh, pb.dofmap)) <= 1e-12);
  const auto chi = initial_chi(b.initial, grid, b.config.beta);
  const auto sol = solve(assemble(pb, build_alpha_field(chi, b.config.tau0, b.config.alpha_bar)));
  const double in = boundary_flux(sol, pb, "inlet0");
  const double out = boundary_flux(sol, pb, "outlet1");
  CHECK(in == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(in + out) <= 1e-10);
}

TEST_CASE("flow through the solid does not grow with the penalty") {
  // The minimum energy is concave in alpha_bar, so its derivative, the
  // solid-weighted kinetic term, is non-increasing.
  const Benchmark b = diffuser();
  const DomainSpec grid{{0, 0}, {1, 1}, 16, 16};
  const auto chi = initial_chi(b.initial, grid, b.config.beta);
  const NodalScalarField weight = build_alpha_field(chi, 0.01, 1.0);
  double prev = INFINITY, prev_energy = 0.0;
  for (double abar : {1e2, 1e3, 1e4, 1e5}) {
    const auto pb = make_problem(b, grid, abar);
    const auto alpha = build_alpha_field(chi, 0.01, abar);
    const auto sol = solve(assemble(pb, alpha));
    const double leak = penalty_energy(sol, pb, weight);
    const double energy = dissipation(sol, pb) + penalty_energy(sol, pb, alpha);
    CHECK(leak <= prev * (1 + 1e-9));
    CHECK(energy >= prev_energy);
    prev = leak;
    prev_energy = energy;
  }
}

TEST_CASE("assembly rejects negative permeability and mismatched grids") {
  const auto pb = poiseuille(4);
  CHECK_THROWS_AS(assemble(pb, NodalScalarField(pb.grid(), -1.0)), ArgumentError);
  CHECK_THROWS_AS(assemble(pb, NodalScalarField(DomainSpec{{0, 0}, {1, 1}, 5, 5})), ArgumentError);
}

TEST_CASE("all-Dirichlet data must be mass compatible") {
  const DomainSpec d{{0, 0}, {1, 1}, 4, 4};
  Mesh mesh = build_mesh(d);
  DofMap dm = build_dofmap(mesh, {{kWallTag, BoundaryCondition::dirichlet([](const Vec2&) { return Vec2{0, 1}; })}});
  // Uniform (0,1) flux in at the bottom and out at the top: balanced.
  CHECK_NOTHROW(BrinkmanProblem::create(mesh, dm, 1.0, 1.0));
  DofMap bad = build_dofmap(mesh, {{kWallTag, BoundaryCondition::dirichlet([](const Vec2& p) { return Vec2{p[0], 0}; })}});
  CHECK_THROWS_AS(BrinkmanProblem::create(mesh, bad, 1.0, 1.0), ConfigError);
}
