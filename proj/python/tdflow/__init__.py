"""Threshold-dynamics topology optimization for Stokes flow."""

from ._tdflow import (
    ArgumentError,
    ConfigError,
    InvariantError,
    IoError,
    SolverError,
    adapt_tau,
    benchmark_names,
    direct_convolve_oracle,
    gaussian_convolve,
    initial_chi,
    perimeter_estimate,
    run_config,
    select_by_weight,
    select_smallest,
    solve_flow,
)

__all__ = [
    "ArgumentError",
    "ConfigError",
    "InvariantError",
    "IoError",
    "SolverError",
    "adapt_tau",
    "benchmark_names",
    "direct_convolve_oracle",
    "gaussian_convolve",
    "initial_chi",
    "perimeter_estimate",
    "run_config",
    "select_by_weight",
    "select_smallest",
    "solve_flow",
]
