#include "tdflow/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "tdflow/error.hpp"
#include "tdflow/thresholding.hpp"

namespace tdflow {
namespace {

constexpr double kDecayTolerance = 1e-8;
constexpr double kMaxSpacingPerSqrtTau = 1.4;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const char* to_string(DecayCheck mode) {
  switch (mode) {
    case DecayCheck::off: return "off";
    case DecayCheck::warn: return "warn";
    case DecayCheck::strict: return "strict";
  }
  return "?";
}

DecayCheck decay_check_from_string(const std::string& name) {
  if (name == "off") return DecayCheck::off;
  if (name == "warn") return DecayCheck::warn;
  if (name == "strict") return DecayCheck::strict;
  throw ConfigError("unknown decay_check '" + name + "' (expected off, warn or strict)");
}

const char* to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::converged: return "converged";
    case TerminationReason::max_iterations: return "max_iterations";
    case TerminationReason::decay_violation: return "decay_violation";
  }
  return "?";
}

OptimizerConfig OptimizerConfig::resolved(const DomainSpec& grid) const {
  OptimizerConfig c = *this;
  if (!c.adaptive) {
    c.tau_threshold = c.tau0;
  } else if (!(c.tau_threshold > 0.0)) {
    c.tau_threshold = c.tau0 / 16.0;
  }
  if (c.adapt_tolerance < 0.0) c.adapt_tolerance = 2.0 * grid.h();
  if (c.stop_tolerance < 0.0) c.stop_tolerance = c.adapt_tolerance;
  return c;
}

void OptimizerConfig::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(tau0 > 0.0 && std::isfinite(tau0), "tau0 must be positive");
  require(eta > 0.0 && eta < 1.0, "eta must lie in (0, 1)");
  require(tau_threshold > 0.0 && tau_threshold <= tau0, "tau_threshold must lie in (0, tau0]");
  require(adapt_tolerance >= 0.0, "adapt_tolerance must be nonnegative");
  require(stop_tolerance >= 0.0, "stop_tolerance must be nonnegative");
  require(gamma >= 0.0 && std::isfinite(gamma), "gamma must be nonnegative");
  require(alpha_bar > 0.0 && std::isfinite(alpha_bar), "alpha_bar must be positive");
  require(beta > 0.0 && beta < 1.0, "beta must lie in (0, 1)");
  require(max_iterations >= 0, "max_iterations must be nonnegative");
}

long target_volume(const DomainSpec& grid, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw ArgumentError("target_volume: beta must lie in (0, 1)");
  const long m = std::lround(beta * grid.node_count());
  return std::clamp(m, 1L, long(grid.node_count()) - 1);
}

double adapt_tau(double tau, double e_chi, const OptimizerConfig& config) {
  if (e_chi <= config.adapt_tolerance && tau > config.tau_threshold) {
    return std::max(config.eta * tau, config.tau_threshold);
  }
  return tau;
}

OptimizationResult run(const BrinkmanProblem& problem, const IndicatorField& chi0, const OptimizerConfig& config,
                       const IterationObserver& observer) {
  const DomainSpec& grid = problem.grid();
  const OptimizerConfig cfg = config.resolved(grid);
  cfg.validate();
  if (!(chi0.grid() == grid)) throw ArgumentError("optimizer: initial indicator grid differs from the problem grid");
  if (cfg.alpha_bar != problem.alpha_bar) {
    throw ArgumentError("optimizer: config alpha_bar " + fmt(cfg.alpha_bar) + " differs from the problem's " +
                        fmt(problem.alpha_bar));
  }
  // Coarser lattices alias the heat kernel into visibly negative weights.
  if (grid.h() > kMaxSpacingPerSqrtTau * std::sqrt(cfg.tau_threshold)) {
    throw ConfigError("optimizer: tau floor " + fmt(cfg.tau_threshold) + " is under-resolved by h = " +
                      fmt(grid.h()) + " (need h <= 1.4 sqrt(tau)); refine the grid or raise tau_threshold");
  }
  const long volume = target_volume(grid, cfg.beta);
  if (chi0.volume() != volume) {
    throw ArgumentError("optimizer: initial indicator has " + std::to_string(chi0.volume()) +
                        " fluid nodes, expected " + std::to_string(volume));
  }

  const BrinkmanAssembler assembler(problem);
  SaddleSolver solver;
  const double h2 = grid.h() * grid.h();

  auto solve_flow = [&](const IndicatorField& chi, double tau, int iteration) {
    try {
      return solver.solve(assembler.assemble(build_alpha_field(chi, tau, cfg.alpha_bar, cfg.conv_boundary)));
    } catch (const SolverError& e) {
      throw SolverError("iteration " + std::to_string(iteration) + ": " + e.what(), e.rcond());
    }
  };
  auto energy = [&](const IndicatorField& chi, const FlowSolution& flow, double tau) {
    return evaluate_energy(chi, flow, problem, tau, cfg.gamma, cfg.conv_boundary);
  };

  double tau = cfg.tau0;
  IndicatorField chi = chi0;
  FlowSolution flow = solve_flow(chi, tau, 0);
  double flow_tau = tau;
  EnergyRecord reference = energy(chi, flow, tau);

  OptimizationResult result{chi0, flow, reference, {}, 0, false, TerminationReason::max_iterations, 0.0, 0};
  result.history.reserve(std::size_t(cfg.max_iterations));
  if (observer) observer(0, reference, chi, flow);

  for (int k = 0; k < cfg.max_iterations; ++k) {
    const int iteration = k + 1;
    if (flow_tau != tau) {
      // tau changed: compare against J^{tau_new}(chi^k, u^k)
      flow = solve_flow(chi, tau, iteration);
      flow_tau = tau;
      reference = energy(chi, flow, tau);
    }

    const PhiPair phi = compute_phi(chi, speed_squared_density(flow, problem), tau, cfg.gamma, cfg.alpha_bar,
                                    cfg.conv_boundary);
    ThresholdOutcome step = threshold_update(phi, volume, chi);
    if (step.chi_new.volume() != volume) {
      throw InvariantError("iteration " + std::to_string(iteration) + ": volume " +
                           std::to_string(step.chi_new.volume()) + " != " + std::to_string(volume));
    }
    const double e_chi = std::sqrt(h2 * double(step.flips));

    FlowSolution next_flow = step.flips == 0 ? flow : solve_flow(step.chi_new, tau, iteration);
    EnergyRecord record = step.flips == 0 ? reference : energy(step.chi_new, next_flow, tau);
    record.iteration = iteration;
    record.flips = step.flips;

    const double scale = std::max(std::abs(reference.total), std::numeric_limits<double>::min());
    const double rise = (record.total - reference.total) / scale;
    result.worst_decay_violation = k == 0 ? rise : std::max(result.worst_decay_violation, rise);
    const bool violated = rise > kDecayTolerance;

    chi = std::move(step.chi_new);
    flow = std::move(next_flow);
    reference = record;
    result.history.push_back(record);
    result.iterations = iteration;
    if (observer) observer(iteration, record, chi, flow);

    if (violated && cfg.decay_check != DecayCheck::off) {
      const std::string msg = "iteration " + std::to_string(iteration) + ": energy rose from " +
                              fmt(record.total - rise * scale) + " to " + fmt(record.total) + " at tau " +
                              fmt(tau) + " (relative " + fmt(rise) + ")";
      if (cfg.decay_check == DecayCheck::strict) {
        result.termination_reason = TerminationReason::decay_violation;
        throw InvariantError(msg);
      }
      ++result.decay_warnings;
      std::fprintf(stderr, "warning: %s\n", msg.c_str());
    }

    if (e_chi <= cfg.stop_tolerance && tau <= cfg.tau_threshold) {
      result.converged = true;
      result.termination_reason = TerminationReason::converged;
      break;
    }
    tau = adapt_tau(tau, e_chi, cfg);
  }

  result.chi_final = chi;
  result.flow_final = flow;
  return result;
}

}  // namespace tdflow
