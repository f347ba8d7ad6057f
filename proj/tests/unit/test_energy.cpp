#include <doctest.h>

#include <cmath>
#include <random>

#include "tdflow/energy.hpp"
#include "tdflow/problems.hpp"

using namespace tdflow;

namespace {

IndicatorField disk(const DomainSpec& g, Vec2 c, double r) {
  std::vector<std::uint8_t> v(g.node_count(), 0);
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const Vec2 p = g.node_position(i, j);
      v[g.node(i, j)] = std::hypot(p[0] - c[0], p[1] - c[1]) < r;
    }
  }
  return IndicatorField(g, v);
}

}  // namespace

TEST_CASE("empty and full indicators have no perimeter") {
  const DomainSpec g{{0, 0}, {1, 1}, 16, 16};
  CHECK(perimeter_estimate(IndicatorField(g, std::vector<std::uint8_t>(g.node_count(), 0)), 1e-2) == 0.0);
  CHECK(std::abs(perimeter_estimate(IndicatorField(g, std::vector<std::uint8_t>(g.node_count(), 1)), 1e-2)) <=
        1e-12);
}

TEST_CASE("periodic half-plane has two unit interfaces") {
  const DomainSpec g{{0, 0}, {1, 1}, 256, 256};
  std::vector<std::uint8_t> v(g.node_count(), 0);
  for (int j = 0; j <= 256; ++j)
    for (int i = 0; i <= 128; ++i) v[g.node(i, j)] = 1;
  const IndicatorField chi(g, v);
  const double est = perimeter_estimate(chi, 1e-3);
  CHECK(est == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("estimate is symmetric in the two phases") {
  const DomainSpec g{{0, 0}, {1, 1}, 40, 40};
  std::mt19937_64 rng(3);
  std::vector<std::uint8_t> v(g.node_count()), w(g.node_count());
  for (std::size_t n = 0; n < v.size(); ++n) {
    v[n] = rng() % 3 == 0;
    w[n] = 1 - v[n];
  }
  const double a = perimeter_estimate(IndicatorField(g, v), 5e-3);
  const double b = perimeter_estimate(IndicatorField(g, w), 5e-3);
  CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
}

TEST_CASE("disk perimeter converges as tau decreases") {
  const DomainSpec g{{0, 0}, {1, 1}, 512, 512};
  const IndicatorField chi = disk(g, {0.5, 0.5}, 0.25);
  const double exact = 2.0 * M_PI * 0.25;
  double prev = INFINITY;
  for (double tau : {4e-3, 1e-3, 2.5e-4}) {
    const double err = std::abs(perimeter_estimate(chi, tau) - exact);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(perimeter_estimate(chi, 1e-3) == doctest::Approx(exact).epsilon(0.05));
}

TEST_CASE("record terms add up and vanish for a still fluid") {
  const Benchmark b = diffuser();
  const DomainSpec g{{0, 0}, {1, 1}, 16, 16};
  const auto pb = make_problem(b, g, b.config.alpha_bar);
  const auto chi = initial_chi(b.initial, g, b.config.beta);
  FlowSolution zero;
  zero.grid = g;
  zero.velocity.assign(pb.dofmap.velocity_dof_count(), 0.0);
  zero.pressure.assign(pb.dofmap.pressure_dof_count(), 0.0);
  const EnergyRecord still = evaluate_energy(chi, zero, pb, 0.01, 0.0);
  CHECK(still.total == 0.0);
  CHECK(still.penalty == 0.0);
  CHECK(still.forcing == 0.0);

  const auto flow = solve(assemble(pb, build_alpha_field(chi, 0.01, b.config.alpha_bar)));
  const EnergyRecord r = evaluate_energy(chi, flow, pb, 0.01, 0.1);
  CHECK(r.dissipation > 0.0);
  CHECK(r.penalty > 0.0);
  CHECK(r.perimeter > 0.0);
  CHECK(r.total == doctest::Approx(r.dissipation + r.penalty + r.forcing + r.perimeter).epsilon(1e-12));
  CHECK(r.perimeter == doctest::Approx(0.1 * perimeter_estimate(chi, 0.01)).epsilon(1e-14));
  const auto alpha = build_alpha_field(chi, 0.01, b.config.alpha_bar);
  CHECK(r.penalty == doctest::Approx(penalty_energy(flow, pb, alpha)).epsilon(1e-12));
}

TEST_CASE("body force enters with a negative sign") {
  const Benchmark b = body_force_roundabout();
  const DomainSpec g{{0, 0}, {1, 1}, 24, 24};
  const auto pb = make_problem(b, g, b.config.alpha_bar);
  const auto chi = initial_chi(b.initial, g, b.config.beta);
  const auto flow = solve(assemble(pb, build_alpha_field(chi, 0.01, b.config.alpha_bar)));
  const EnergyRecord r = evaluate_energy(chi, flow, pb, 0.01, 1e-4);
  CHECK(r.forcing == doctest::Approx(-load_work(flow, pb)).epsilon(1e-14));
  CHECK(r.forcing != 0.0);
}
