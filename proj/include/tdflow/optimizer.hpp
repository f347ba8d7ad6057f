#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tdflow/brinkman.hpp"
#include "tdflow/conv.hpp"
#include "tdflow/energy.hpp"
#include "tdflow/fields.hpp"

namespace tdflow {

enum class DecayCheck { off, warn, strict };

const char* to_string(DecayCheck mode);
DecayCheck decay_check_from_string(const std::string& name);

struct OptimizerConfig {
  double tau0 = 0.01;
  double eta = 0.5;
  /// Floor for the adaptive tau; <= 0 selects tau0 / 16. Ignored (set to
  /// tau0) when adaptive is false.
  double tau_threshold = 0.0;
  bool adaptive = true;
  /// Flip-norm below which tau is shrunk; < 0 selects 2h.
  double adapt_tolerance = -1.0;
  /// Flip-norm at the floor tau that ends the run; < 0 selects the resolved
  /// adapt_tolerance.
  double stop_tolerance = -1.0;
  double gamma = 0.1;
  double alpha_bar = 2.5e4;
  double beta = 0.5;
  int max_iterations = 200;  // 0 returns chi0 with an empty history
  DecayCheck decay_check = DecayCheck::warn;
  ConvBoundary conv_boundary = ConvBoundary::periodic;

  /// Copy with grid-dependent defaults filled in.
  OptimizerConfig resolved(const DomainSpec& grid) const;
  /// Throws ConfigError unless 0 < eta < 1, 0 < tau_threshold <= tau0,
  /// 0 < beta < 1 and the remaining scalars are in range. Call on a
  /// resolved config.
  void validate() const;
};

/// Fluid node count for a volume fraction: round(beta * nodes).
long target_volume(const DomainSpec& grid, double beta);

enum class TerminationReason { converged, max_iterations, decay_violation };

const char* to_string(TerminationReason reason);

struct OptimizationResult {
  IndicatorField chi_final;
  FlowSolution flow_final;
  EnergyRecord initial;           // J^tau0(chi^0, u^0)
  std::vector<EnergyRecord> history;  // record k: J^tau_k(chi^{k+1}, u^{k+1})
  int iterations = 0;
  bool converged = false;
  TerminationReason termination_reason = TerminationReason::max_iterations;
  /// Largest relative energy increase seen at fixed tau (<= 0 when the
  /// energy never increased).
  double worst_decay_violation = 0.0;
  int decay_warnings = 0;
};

/// Called with iteration 0 for the initial state (chi^0, u^0), then after
/// every iteration with the new indicator and flow.
using IterationObserver =
    std::function<void(int iteration, const EnergyRecord&, const IndicatorField&, const FlowSolution&)>;

/// Returns tau * eta (not below tau_threshold) when e_chi <= adapt_tolerance
/// and tau is above the floor, otherwise tau.
double adapt_tau(double tau, double e_chi, const OptimizerConfig& config);

/// Alternates Brinkman solves and volume-constrained thresholding until
/// e_chi <= stop_tolerance with tau at its floor, or max_iterations.
/// Throws ConfigError up front when h > 1.4 sqrt(tau_threshold).
OptimizationResult run(const BrinkmanProblem& problem, const IndicatorField& chi0, const OptimizerConfig& config,
                       const IterationObserver& observer = {});

}  // namespace tdflow
