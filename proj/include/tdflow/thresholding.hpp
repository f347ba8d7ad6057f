#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tdflow/conv.hpp"
#include "tdflow/fields.hpp"

namespace tdflow {

/// Coefficients of the functional linearized at the current indicator:
/// L(chi) = sum_n chi1(n) phi1(n) + chi2(n) phi2(n).
struct PhiPair {
  NodalScalarField phi1;
  NodalScalarField phi2;
};

struct ThresholdOutcome {
  IndicatorField chi_new;
  double delta = 0.0;  // key of the first excluded node, +inf if none
  long flips = 0;      // nodes changed relative to the previous indicator, if given
};

/// phi1 = gamma sqrt(pi/tau) G*chi2,
/// phi2 = (alpha_bar/2) G*speed_sq + gamma sqrt(pi/tau) G*chi1.
PhiPair compute_phi(const IndicatorField& chi, const NodalScalarField& speed_sq, double tau, double gamma,
                    double alpha_bar, ConvBoundary boundary = ConvBoundary::periodic);

/// Fluid on the `volume` nodes with the smallest phi1 - phi2 (stable
/// ascending sort, ties by node index).
ThresholdOutcome threshold_update(const PhiPair& phi, long volume);
ThresholdOutcome threshold_update(const PhiPair& phi, long volume, const IndicatorField& previous);

/// Nonuniform-weight variant: fill in ascending key order until the
/// accumulated weight first reaches target_volume (relative slack 1e-12 of
/// the total weight absorbs summation round-off).
ThresholdOutcome weighted_threshold_update(const PhiPair& phi, const NodalScalarField& weights, double target_volume,
                                           const IndicatorField* previous = nullptr);

/// sum_n chi1 phi1 + chi2 phi2.
double linearized_energy(const PhiPair& phi, const IndicatorField& chi);

struct Selection {
  std::vector<std::uint8_t> selected;
  double delta = 0.0;
};

/// Index-level kernels behind the field operations.
Selection select_smallest(std::span<const double> keys, long count);
Selection select_by_weight(std::span<const double> keys, std::span<const double> weights, double target);

}  // namespace tdflow
