"""Stability-region boundary sweeps over licensed-user arrival rates.

Produces, for each grid point and system, the largest cognitive-user
arrival rate that keeps every queue stable: analytically through the
policy optimizer, or empirically through simulated bisection.  The
priority baselines S1/S2 have no closed-form rates, so their curves are
always simulated.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .channel import SystemConfig
from .optimizer import PrimaryInfeasible, RelayUnsatisfiable, optimize
from .rates import Policy, UnstableQueue
from .simulator import SYSTEMS, empirical_boundary

MODES = ("analytic", "empirical", "both")


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep: grids, systems, evaluation mode, and budgets."""

    lambda_p1: tuple[float, float, float]        # start, stop, step
    lambda_p2: float | tuple[float, ...] = 0.0
    systems: tuple[str, ...] = ("S",)
    mode: str = "analytic"
    equal_alpha: bool = True
    alpha_step: float = 0.01
    slots: int = 1_000_000
    warmup: int = 10_000
    seed: int = 0
    boundary_tol: float = 0.01

    def __post_init__(self) -> None:
        start, stop, step = self.lambda_p1
        if step <= 0.0 or stop < start or not 0.0 <= start <= 1.0 or stop > 1.0:
            raise ValueError("lambda_p1 grid must be within [0, 1] with step > 0")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        for s in self.systems:
            if s not in SYSTEMS:
                raise ValueError(f"unknown system {s!r}")

    def lambda_p1_values(self) -> list[float]:
        start, stop, step = self.lambda_p1
        values = []
        k = 0
        while True:
            v = round(start + k * step, 12)
            if v > stop + 1e-12:
                break
            values.append(v)
            k += 1
        return values

    def lambda_p2_values(self) -> list[float]:
        if isinstance(self.lambda_p2, (int, float)):
            return [float(self.lambda_p2)]
        return [float(v) for v in self.lambda_p2]


@dataclass(frozen=True)
class RegionPoint:
    """One boundary sample; infeasible points keep the curve visibly ending."""

    lambda_p1: float
    lambda_p2: float
    system: str
    mode: str
    feasible: bool
    lambda_s_max: float
    alpha1: float
    alpha2: float
    policy: Policy | None


def _point_seed(seed: int, i1: int, i2: int, system: str) -> int:
    ss = np.random.SeedSequence(
        entropy=(int(seed) & (2 ** 64 - 1), i1, i2, _sys_index(system)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _sys_index(system: str) -> int:
    return SYSTEMS.index(system)


def sweep(config: SystemConfig, spec: SweepSpec) -> list[RegionPoint]:
    """Evaluate the boundary over the whole grid, never aborting on a point.

    Analytic points exist only for system S.  Empirical points derive
    their seeds from (master seed, grid indices, system), so a sweep is
    reproducible point by point.
    """
    points: list[RegionPoint] = []
    for i2, lam2 in enumerate(spec.lambda_p2_values()):
        for i1, lam1 in enumerate(spec.lambda_p1_values()):
            cfg = replace(config, lambda_p1=lam1, lambda_p2=lam2)
            analytic = (_analytic_point(cfg, spec, lam1, lam2)
                        if "S" in spec.systems else None)
            for system in spec.systems:
                if spec.mode in ("analytic", "both") and system == "S":
                    points.append(analytic)
                if spec.mode in ("empirical", "both"):
                    seed = _point_seed(spec.seed, i1, i2, system)
                    points.append(_empirical_point(
                        cfg, spec, lam1, lam2, system, seed,
                        analytic.policy if system == "S" and analytic else None,
                        (analytic.alpha1, analytic.alpha2)
                        if system == "S" and analytic else (1.0, 1.0)))
    return points


def _infeasible(lam1: float, lam2: float, system: str, mode: str) -> RegionPoint:
    return RegionPoint(lambda_p1=lam1, lambda_p2=lam2, system=system,
                       mode=mode, feasible=False, lambda_s_max=0.0,
                       alpha1=float("nan"), alpha2=float("nan"), policy=None)


def _analytic_point(cfg: SystemConfig, spec: SweepSpec,
                    lam1: float, lam2: float) -> RegionPoint:
    try:
        a1, a2, sol = optimize(cfg, equal_alpha=spec.equal_alpha,
                               alpha_step=spec.alpha_step)
    except (PrimaryInfeasible, UnstableQueue):
        return _infeasible(lam1, lam2, "S", "analytic")
    if not sol.feasible:
        return _infeasible(lam1, lam2, "S", "analytic")
    return RegionPoint(lambda_p1=lam1, lambda_p2=lam2, system="S",
                       mode="analytic", feasible=True,
                       lambda_s_max=sol.mu_s_max, alpha1=a1, alpha2=a2,
                       policy=sol.policy)


def _empirical_point(cfg: SystemConfig, spec: SweepSpec, lam1: float,
                     lam2: float, system: str, seed: int,
                     policy: Policy | None,
                     alphas: tuple[float, float]) -> RegionPoint:
    if system == "S" and policy is None:
        return _infeasible(lam1, lam2, system, "empirical")
    try:
        bound = empirical_boundary(cfg, system, lam1, lam2, policy=policy,
                                   slots=spec.slots, seed=seed,
                                   tol=spec.boundary_tol, warmup=spec.warmup)
    except (PrimaryInfeasible, RelayUnsatisfiable, UnstableQueue):
        return _infeasible(lam1, lam2, system, "empirical")
    return RegionPoint(lambda_p1=lam1, lambda_p2=lam2, system=system,
                       mode="empirical", feasible=True, lambda_s_max=bound,
                       alpha1=alphas[0], alpha2=alphas[1], policy=policy)
