#include "tdflow/thresholding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "tdflow/error.hpp"

namespace tdflow {
namespace {

std::vector<int> ascending_order(std::span<const double> keys) {
  std::vector<int> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return keys[a] < keys[b]; });
  return order;
}

void check_keys(std::span<const double> keys) {
  for (double k : keys) {
    if (std::isnan(k)) throw ArgumentError("threshold: NaN key");
  }
}

std::vector<double> keys_of(const PhiPair& phi) {
  if (!(phi.phi1.grid() == phi.phi2.grid())) throw ArgumentError("threshold: phi1/phi2 grid mismatch");
  std::vector<double> keys(phi.phi1.size());
  for (std::size_t n = 0; n < keys.size(); ++n) keys[n] = phi.phi1[n] - phi.phi2[n];
  return keys;
}

}  // namespace

Selection select_smallest(std::span<const double> keys, long count) {
  check_keys(keys);
  if (count < 1 || count > long(keys.size())) {
    throw ArgumentError("threshold: volume " + std::to_string(count) + " outside [1, " +
                        std::to_string(keys.size()) + "]");
  }
  const auto order = ascending_order(keys);
  Selection out;
  out.selected.assign(keys.size(), 0);
  for (long k = 0; k < count; ++k) out.selected[order[k]] = 1;
  out.delta = count < long(keys.size()) ? keys[order[count]] : std::numeric_limits<double>::infinity();
  return out;
}

Selection select_by_weight(std::span<const double> keys, std::span<const double> weights, double target) {
  check_keys(keys);
  if (weights.size() != keys.size()) throw ArgumentError("weighted threshold: weight/key size mismatch");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ArgumentError("weighted threshold: weights must be positive");
    total += w;
  }
  const double slack = 1e-12 * total;
  if (!(target > 0.0) || target > total + slack) {
    throw ArgumentError("weighted threshold: target volume outside (0, total weight]");
  }
  const auto order = ascending_order(keys);
  Selection out;
  out.selected.assign(keys.size(), 0);
  double accumulated = 0.0;
  std::size_t i = 0;
  while (accumulated < target - slack && i < order.size()) {
    out.selected[order[i]] = 1;
    accumulated += weights[order[i]];
    ++i;
  }
  out.delta = i < order.size() ? keys[order[i]] : std::numeric_limits<double>::infinity();
  return out;
}

PhiPair compute_phi(const IndicatorField& chi, const NodalScalarField& speed_sq, double tau, double gamma,
                    double alpha_bar, ConvBoundary boundary) {
  if (!(tau > 0.0)) throw ArgumentError("compute_phi: tau must be positive");
  if (!(gamma >= 0.0)) throw ArgumentError("compute_phi: gamma must be nonnegative");
  if (!(speed_sq.grid() == chi.grid())) throw ArgumentError("compute_phi: grid mismatch");
  const double scale = gamma * std::sqrt(std::numbers::pi / tau);
  NodalScalarField phi1 = gaussian_convolve(chi.solid(), tau, boundary);
  const NodalScalarField g_fluid = gaussian_convolve(chi.fluid(), tau, boundary);
  NodalScalarField phi2 = gaussian_convolve(speed_sq, tau, boundary);
  for (std::size_t n = 0; n < phi1.size(); ++n) {
    phi1[n] *= scale;
    phi2[n] = 0.5 * alpha_bar * phi2[n] + scale * g_fluid[n];
  }
  return {std::move(phi1), std::move(phi2)};
}

ThresholdOutcome threshold_update(const PhiPair& phi, long volume) {
  const auto keys = keys_of(phi);
  auto sel = select_smallest(keys, volume);
  return {IndicatorField(phi.phi1.grid(), std::move(sel.selected)), sel.delta, 0};
}

ThresholdOutcome threshold_update(const PhiPair& phi, long volume, const IndicatorField& previous) {
  auto out = threshold_update(phi, volume);
  out.flips = out.chi_new.flips_from(previous);
  return out;
}

ThresholdOutcome weighted_threshold_update(const PhiPair& phi, const NodalScalarField& weights, double target_volume,
                                           const IndicatorField* previous) {
  const auto keys = keys_of(phi);
  if (!(weights.grid() == phi.phi1.grid())) throw ArgumentError("weighted threshold: grid mismatch");
  auto sel = select_by_weight(keys, weights.values(), target_volume);
  ThresholdOutcome out{IndicatorField(phi.phi1.grid(), std::move(sel.selected)), sel.delta, 0};
  if (previous) out.flips = out.chi_new.flips_from(*previous);
  return out;
}

double linearized_energy(const PhiPair& phi, const IndicatorField& chi) {
  double total = 0.0;
  for (std::size_t n = 0; n < chi.size(); ++n) total += chi.chi1(n) ? phi.phi1[n] : phi.phi2[n];
  return total;
}

}  // namespace tdflow
