#include "tdflow/energy.hpp"

#include <cmath>
#include <numbers>

#include "tdflow/error.hpp"

namespace tdflow {

double perimeter_estimate(const IndicatorField& chi, double tau, ConvBoundary boundary) {
  if (!(tau > 0.0)) throw ArgumentError("perimeter_estimate: tau must be positive");
  const NodalScalarField g_solid = gaussian_convolve(chi.solid(), tau, boundary);
  double s = 0.0;
  for (std::size_t n = 0; n < chi.size(); ++n) {
    if (chi.chi1(n)) s += g_solid[n];
  }
  const double h = chi.grid().h();
  return std::sqrt(std::numbers::pi / tau) * h * h * s;
}

EnergyRecord evaluate_energy(const IndicatorField& chi, const FlowSolution& solution, const BrinkmanProblem& problem,
                             double tau, double gamma, ConvBoundary boundary) {
  if (!(tau > 0.0)) throw ArgumentError("evaluate_energy: tau must be positive");
  if (!(gamma >= 0.0)) throw ArgumentError("evaluate_energy: gamma must be nonnegative");
  if (!(chi.grid() == problem.grid())) throw ArgumentError("evaluate_energy: grid mismatch");

  const double h2 = problem.grid().h() * problem.grid().h();
  const NodalScalarField g_solid = gaussian_convolve(chi.solid(), tau, boundary);
  const NodalScalarField density = speed_squared_density(solution, problem);

  EnergyRecord r;
  r.tau = tau;
  r.dissipation = dissipation(solution, problem);
  double pen = 0.0;
  double per = 0.0;
  for (std::size_t n = 0; n < chi.size(); ++n) {
    pen += density[n] * g_solid[n];
    if (chi.chi1(n)) per += g_solid[n];
  }
  r.penalty = 0.5 * problem.alpha_bar * h2 * pen;
  r.forcing = 0.0 - load_work(solution, problem);
  r.perimeter = gamma * std::sqrt(std::numbers::pi / tau) * h2 * per;
  r.total = r.dissipation + r.penalty + r.forcing + r.perimeter;
  return r;
}

}  // namespace tdflow
