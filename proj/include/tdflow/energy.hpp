#pragma once

#include "tdflow/brinkman.hpp"
#include "tdflow/conv.hpp"
#include "tdflow/fields.hpp"

namespace tdflow {

/// Breakdown of the approximate objective
///   J = int (mu/2)|grad u|^2 + (alpha_bar/2)|u|^2 G*chi2 - u.f
///       + gamma sqrt(pi/tau) chi1 G*chi2.
struct EnergyRecord {
  int iteration = 0;
  double tau = 0.0;
  double dissipation = 0.0;
  double penalty = 0.0;
  double forcing = 0.0;  // minus the work of body force and Neumann traction
  double perimeter = 0.0;
  double total = 0.0;
  long flips = 0;
};

/// Velocity terms come from the finite-element solution; the penalty is the
/// lattice sum (alpha_bar/2) h^2 sum_n s_n (G*chi2)_n with s the
/// speed_squared_density, which equals the assembled (1/2)(alpha u, u).
/// The perimeter term is gamma * perimeter_estimate(chi, tau).
EnergyRecord evaluate_energy(const IndicatorField& chi, const FlowSolution& solution, const BrinkmanProblem& problem,
                             double tau, double gamma, ConvBoundary boundary = ConvBoundary::periodic);

/// sqrt(pi/tau) h^2 sum_n chi1 (G*chi2).
double perimeter_estimate(const IndicatorField& chi, double tau, ConvBoundary boundary = ConvBoundary::periodic);

}  // namespace tdflow
