#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "tdflow/error.hpp"
#include "tdflow/problems.hpp"

using namespace tdflow;

TEST_CASE("parabolic profile") {
  CHECK(parabolic_profile(1.0, 1.0, 0.0) == 1.0);
  CHECK(parabolic_profile(3.0, 1.0 / 3.0, 1.0 / 6.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::abs(parabolic_profile(3.0, 1.0 / 3.0, -1.0 / 6.0)) <= 1e-14);
  CHECK(parabolic_profile(3.0, 1.0 / 3.0, 0.2) == 0.0);
  CHECK_THROWS_AS(parabolic_profile(1.0, 0.0, 0.0), ArgumentError);
  // Simpson is exact for the parabola: flux (2/3) gbar l.
  auto flux = [](double g, double l) {
    return l / 6.0 * (parabolic_profile(g, l, -l / 2) + 4 * parabolic_profile(g, l, 0) + parabolic_profile(g, l, l / 2));
  };
  CHECK(flux(1.0, 1.0) == doctest::Approx(2.0 / 3.0));
  CHECK(flux(3.0, 1.0 / 3.0) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("benchmark parameters") {
  const Benchmark d = diffuser();
  CHECK(d.config.alpha_bar == 2.5e4);
  CHECK(d.config.tau0 == 0.01);
  CHECK(d.config.gamma == 0.1);
  CHECK(d.config.beta == 0.5);
  CHECK(d.nx == 128);

  const Benchmark p = double_pipes(1.5);
  CHECK(p.nx == 192);
  CHECK(p.ny == 128);
  CHECK(p.extent[0] == 1.5);
  CHECK(p.config.gamma == 1e-4);
  CHECK(p.config.beta == doctest::Approx(1.0 / 3.0));
  const Benchmark q = double_pipes(0.5);
  CHECK(q.nx == 128);
  CHECK(q.ny == 256);

  const Benchmark f = body_force_roundabout({-1125.0, 0.0});
  REQUIRE(f.body_force.has_value());
  CHECK(f.body_force->center[0] == 0.5);
  CHECK(f.body_force->center[1] == doctest::Approx(1.0 / 3.0));
  CHECK(f.body_force->radius == doctest::Approx(1.0 / 12.0));
  CHECK(f.body_force->force[0] == -1125.0);
  CHECK(f.config.beta == 0.25);

  const Benchmark t = three_terminal();
  CHECK(t.config.beta == 0.3);
  CHECK(t.nx == 80);
  CHECK(t.ny == 112);
  CHECK(t.ports[0].peak_speed == 0.5);
}

TEST_CASE("benchmark names") {
  CHECK(benchmark_names() == std::vector<std::string>{"diffuser", "double-pipes", "body-force", "three-terminal"});
  for (const auto& n : benchmark_names()) {
    const Benchmark b = benchmark_by_name(n);
    CHECK(b.name == n);
    CHECK_NOTHROW(validate_benchmark(b));
  }
  CHECK_THROWS_AS(benchmark_by_name("teapot"), ConfigError);
}

TEST_CASE("all-Dirichlet benchmarks balance the boundary flux") {
  for (const auto& b : {diffuser(), double_pipes(1.5), double_pipes(0.5), body_force_roundabout()}) {
    DomainSpec g = b.domain();
    g.nx /= 4;
    g.ny /= 4;
    const auto pb = make_problem(b, g, b.config.alpha_bar);
    CHECK_FALSE(pb.dofmap.has_neumann());
    CHECK(std::abs(dirichlet_net_flux(pb.mesh, pb.dofmap)) <= 1e-10);
  }
  const Benchmark t = three_terminal();
  const auto pb = make_problem(t);
  CHECK(pb.dofmap.has_neumann());
  const auto tags = pb.mesh.tags();
  CHECK(std::find(tags.begin(), tags.end(), "open2") != tags.end());
}

TEST_CASE("initializers hit the volume exactly") {
  const DomainSpec g{{0, 0}, {1, 1}, 128, 128};
  const long m = target_volume(g, 0.25);
  const InitialSpec d{InitKind::disk, 0, {0.5, 0.5}, 1.0 / std::sqrt(3.0 * M_PI)};
  const auto chi = initial_chi(d, g, 0.25);
  CHECK(chi.volume() == m);
  CHECK(chi.volume() == std::lround(0.25 * 129 * 129));
  CHECK(connected_components(chi) == 1);

  const InitialSpec r{InitKind::random, 7};
  const auto a = initial_chi(r, g, 0.4);
  CHECK(a == initial_chi(r, g, 0.4));
  CHECK(a.volume() == target_volume(g, 0.4));
  CHECK_FALSE(a == initial_chi(InitialSpec{InitKind::random, 8}, g, 0.4));

  const DomainSpec g2{{0, 0}, {1, 1}, 30, 30};
  const auto s = initial_chi(InitialSpec{InitKind::stripe}, g2, 0.5);
  CHECK(s.volume() == target_volume(g2, 0.5));
  CHECK(connected_components(s) == 1);
  // Whole rows except possibly the two boundary rows of the band.
  int full_rows = 0;
  for (int j = 0; j <= 30; ++j) {
    int c = 0;
    for (int i = 0; i <= 30; ++i) c += s.chi1(g2.node(i, j));
    full_rows += c == 31;
  }
  CHECK(full_rows >= 14);

  const DomainSpec g3{{0, 0}, {1, 1.4}, 80, 112};
  const auto p = initial_chi(InitialSpec{InitKind::parallel_pipes}, g3, 0.3);
  CHECK(p.volume() == target_volume(g3, 0.3));
}

TEST_CASE("invalid geometry is rejected") {
  Benchmark b = diffuser();
  b.ports[1].center = 0.95;
  CHECK_THROWS_AS(validate_benchmark(b), ConfigError);
  Benchmark f = body_force_roundabout();
  f.body_force->radius = 0.6;
  CHECK_THROWS_AS(validate_benchmark(f), ConfigError);
}
