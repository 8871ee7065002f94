"""Cooperative cognitive-radio MAC toolkit.

Analytic queue rates, stability-region optimization (LP and symmetric
closed form), a slot-level Monte Carlo simulator with priority
baselines, and region sweeps with CSV/figure reporting.
"""

from .channel import (LINK_NAMES, LinkModel, SuccessProbs, SystemConfig,
                      TimingConfig, link_table, spectral_efficiency,
                      success_prob)
from .optimizer import (LPModel, PrimaryInfeasible, RelayUnsatisfiable,
                        Solution, SymmetricCase, alpha_bounds, build_lp,
                        classify_symmetric, max_feasible_primary_rate,
                        optimize, solve_lp, symmetric_solve)
from .rates import (Policy, RateReport, UnstableQueue, empty_prob,
                    full_report, primary_service_rate, relay_arrival_rate,
                    relay_service_rate, secondary_service_rate)
from .region import RegionPoint, SweepSpec, sweep
from .scenario import (Scenario, ScenarioError, SimSettings, bundled_scenario,
                       load_scenario, parse_scenario, write_scenario)
from .simulator import (SYSTEMS, SimConfig, SimOutcome, SimState,
                        empirical_boundary, run, stability_probe, step)

__version__ = "0.1.0"

__all__ = [
    "LINK_NAMES", "LinkModel", "SuccessProbs", "SystemConfig", "TimingConfig",
    "link_table", "spectral_efficiency", "success_prob",
    "Policy", "RateReport", "UnstableQueue", "empty_prob", "full_report",
    "primary_service_rate", "relay_arrival_rate", "relay_service_rate",
    "secondary_service_rate",
    "LPModel", "PrimaryInfeasible", "RelayUnsatisfiable", "Solution",
    "SymmetricCase", "alpha_bounds", "build_lp", "classify_symmetric",
    "max_feasible_primary_rate", "optimize", "solve_lp", "symmetric_solve",
    "SYSTEMS", "SimConfig", "SimOutcome", "SimState", "empirical_boundary",
    "run", "stability_probe", "step",
    "RegionPoint", "SweepSpec", "sweep",
    "Scenario", "ScenarioError", "SimSettings", "bundled_scenario",
    "load_scenario", "parse_scenario", "write_scenario",
    "__version__",
]
