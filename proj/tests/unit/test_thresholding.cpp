#include <doctest.h>

#include <cmath>
#include <bit>
#include <limits>
#include <random>

#include "tdflow/conv.hpp"
#include "tdflow/error.hpp"
#include "tdflow/thresholding.hpp"

using namespace tdflow;

namespace {

const DomainSpec k3{{0, 0}, {1, 1}, 2, 2};

PhiPair random_phi(const DomainSpec& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PhiPair phi{NodalScalarField(g), NodalScalarField(g)};
  for (std::size_t n = 0; n < phi.phi1.size(); ++n) {
    phi.phi1[n] = u(rng);
    phi.phi2[n] = u(rng);
  }
  return phi;
}

}  // namespace

TEST_CASE("phi vanishes without flow or perimeter weight") {
  const DomainSpec g{{0, 0}, {1, 1}, 8, 8};
  const IndicatorField chi(g, std::vector<std::uint8_t>(g.node_count(), 1));
  const PhiPair phi = compute_phi(chi, NodalScalarField(g), 0.01, 0.0, 2.5e4);
  CHECK(phi.phi1.max() == 0.0);
  CHECK(phi.phi2.max() == 0.0);
}

TEST_CASE("phi with tau = pi and an all-solid indicator") {
  const DomainSpec g{{0, 0}, {1, 1}, 8, 8};
  const IndicatorField chi(g, std::vector<std::uint8_t>(g.node_count(), 0));
  const PhiPair phi = compute_phi(chi, NodalScalarField(g), M_PI, 1.0, 2.5e4);
  CHECK(phi.phi1.min() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(phi.phi1.max() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(phi.phi2.max()) <= 1e-12);
}

TEST_CASE("perimeter parts of phi add up to the constant weight") {
  const DomainSpec g{{0, 0}, {1, 1}, 20, 20};
  std::mt19937_64 rng(4);
  std::vector<std::uint8_t> c(g.node_count());
  for (auto& v : c) v = rng() % 2;
  const IndicatorField chi(g, c);
  const double tau = 0.004, gamma = 0.3;
  const PhiPair phi = compute_phi(chi, NodalScalarField(g), tau, gamma, 1.0);
  for (std::size_t n = 0; n < phi.phi1.size(); ++n) {
    CHECK(std::abs(phi.phi1[n] + phi.phi2[n] - gamma * std::sqrt(M_PI / tau)) <= 1e-12);
  }
}

TEST_CASE("equal keys fall back to node order") {
  const DomainSpec g{{0, 0}, {1, 1}, 3, 3};
  PhiPair phi{NodalScalarField(g, 0.0), NodalScalarField(g, 1.0)};
  const auto out = threshold_update(phi, 8);
  for (std::size_t n = 0; n < out.chi_new.size(); ++n) CHECK(out.chi_new.chi1(n) == (n < 8 ? 1 : 0));
  CHECK(out.delta == -1.0);
}

TEST_CASE("increasing keys select a prefix") {
  PhiPair phi{NodalScalarField(k3), NodalScalarField(k3)};
  for (std::size_t n = 0; n < 9; ++n) phi.phi1[n] = 0.5 * n;
  const auto out = threshold_update(phi, 3);
  for (std::size_t n = 0; n < 9; ++n) CHECK(out.chi_new.chi1(n) == (n < 3 ? 1 : 0));
  CHECK(out.delta == 1.5);
  CHECK(out.chi_new.volume() == 3);
  CHECK(threshold_update(phi, 9).delta == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(threshold_update(phi, 10), ArgumentError);
  CHECK_THROWS_AS(threshold_update(phi, 0), ArgumentError);
}

TEST_CASE("threshold minimizes the linearized energy over every competitor on 3x3") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const PhiPair phi = random_phi(k3, rng);
    for (long m = 1; m <= 8; ++m) {
      const auto out = threshold_update(phi, m);
      const double best = linearized_energy(phi, out.chi_new);
      for (unsigned mask = 0; mask < 512; ++mask) {
        if (std::popcount(mask) != m) continue;
        std::vector<std::uint8_t> c(9);
        for (int b = 0; b < 9; ++b) c[b] = (mask >> b) & 1;
        CHECK(best <= linearized_energy(phi, IndicatorField(k3, c)) + 1e-14);
      }
    }
  }
}

TEST_CASE("threshold consistency, flips and determinism") {
  const DomainSpec g{{0, 0}, {1, 1}, 15, 15};
  std::mt19937_64 rng(77);
  const PhiPair phi = random_phi(g, rng);
  const long m = 100;
  std::vector<std::uint8_t> c(g.node_count(), 0);
  for (long n = 0; n < m; ++n) c[n] = 1;
  const IndicatorField prev(g, c);
  const auto out = threshold_update(phi, m, prev);
  CHECK(out.chi_new.volume() == m);
  CHECK(out.flips == out.chi_new.flips_from(prev));
  double worst_fluid = -INFINITY, best_solid = INFINITY;
  for (std::size_t n = 0; n < out.chi_new.size(); ++n) {
    const double key = phi.phi1[n] - phi.phi2[n];
    if (out.chi_new.chi1(n)) worst_fluid = std::max(worst_fluid, key);
    else best_solid = std::min(best_solid, key);
  }
  CHECK(worst_fluid <= out.delta);
  CHECK(best_solid == out.delta);
  CHECK(linearized_energy(phi, out.chi_new) <= linearized_energy(phi, prev));
  const auto again = threshold_update(phi, m, prev);
  CHECK(again.chi_new == out.chi_new);
  CHECK(again.delta == out.delta);
}

TEST_CASE("weighted toy problem") {
  const std::vector<double> keys{0.3, 0.1, 0.2};
  const std::vector<double> w{1, 2, 3};
  const Selection s = select_by_weight(keys, w, 4.0);
  CHECK(s.selected == std::vector<std::uint8_t>{0, 1, 1});
  CHECK(s.delta == 0.3);
  const Selection all = select_by_weight(keys, w, 6.0);
  CHECK(all.selected == std::vector<std::uint8_t>{1, 1, 1});
  CHECK(all.delta == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(select_by_weight(keys, w, 6.5), ArgumentError);
  const std::vector<double> zero_weight{1, 0, 1};
  CHECK_THROWS_AS(select_by_weight(keys, zero_weight, 1.0), ArgumentError);
}

TEST_CASE("uniform weights reduce to the plain threshold") {
  const DomainSpec g{{0, 0}, {1, 1}, 10, 10};
  std::mt19937_64 rng(8);
  const PhiPair phi = random_phi(g, rng);
  const double h2 = g.h() * g.h();
  for (long m : {1L, 37L, 60L, 120L}) {
    const auto a = threshold_update(phi, m);
    const auto b = weighted_threshold_update(phi, NodalScalarField(g, h2), m * h2);
    CHECK(a.chi_new == b.chi_new);
    CHECK(a.delta == b.delta);
  }
}
