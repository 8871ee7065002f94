"""Stability-region maximization of the cognitive user's throughput.

For fixed admittance factors the problem of maximizing the cognitive
user's service rate subject to keeping every other queue stable is a
linear program in the six access probabilities (eta1..eta4, a_s1, a_s2,
with a_srm eliminated as 1 - a_sm).  The admittance factors themselves
are found by grid search, and symmetric scenarios admit a closed-form
vertex solution used to cross-check the LP.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import simplex
from .channel import SuccessProbs, SystemConfig, link_table
from .rates import (Policy, UnstableQueue, empty_prob, primary_service_rate,
                    relay_arrival_rate, secondary_service_rate)

VAR_NAMES = ("eta1", "eta2", "eta3", "eta4", "a_s1", "a_s2")

ACTIVE_TOL = 1e-9


class PrimaryInfeasible(RuntimeError):
    """No admittance factor can keep a licensed queue stable."""


class RelayUnsatisfiable(RuntimeError):
    """A relaying queue's normalized load is >= 1, so no schedule serves it."""


@dataclass(frozen=True)
class LPModel:
    """The six-variable access-policy linear program at fixed admittance."""

    c: np.ndarray
    a_ub: np.ndarray
    b_ub: np.ndarray
    a_eq: np.ndarray
    b_eq: np.ndarray
    row_names: tuple[str, ...]
    probs: SuccessProbs
    pi_p1: float
    pi_p2: float
    lambda_p1: float
    lambda_p2: float
    lambda_sr1: float
    lambda_sr2: float
    d1: float
    d2: float
    alpha1: float
    alpha2: float


@dataclass(frozen=True)
class Solution:
    """Outcome of one policy optimization."""

    status: str                     # "optimal" | "infeasible"
    policy: Policy | None
    mu_s_max: float
    active_constraints: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def feasible(self) -> bool:
        return self.status == "optimal"


INFEASIBLE_SOLUTION = Solution(status="infeasible", policy=None, mu_s_max=0.0)


@dataclass(frozen=True)
class SymmetricCase:
    """Feasible-region shape of the symmetric two-variable reduction."""

    d: float                        # normalized relaying load
    pi_p: float
    delta: float                    # half-band / merged-band success ratio
    case_id: str                    # one of "a", "b", "c", "d"
    candidate_vertices: tuple[tuple[float, float], ...]


def alpha_bounds(lambda_pm: float, pbar_pd: float, pbar_ps: float) -> tuple[float, float]:
    """Admissible admittance-factor interval [lo, 1] for one licensed user.

    The lower end is the smallest admittance keeping that user's queue
    stable; raises PrimaryInfeasible when even full admittance cannot.
    """
    if lambda_pm <= pbar_pd:
        return 0.0, 1.0
    helper = (1.0 - pbar_pd) * pbar_ps
    if helper <= 0.0:
        raise PrimaryInfeasible(
            f"arrival rate {lambda_pm:.6f} exceeds direct service {pbar_pd:.6f} "
            "and the relaying path is dead")
    lo = (lambda_pm - pbar_pd) / helper
    if lo > 1.0 + 1e-12:
        raise PrimaryInfeasible(
            f"arrival rate {lambda_pm:.6f} needs admittance {lo:.6f} > 1")
    return min(lo, 1.0), 1.0


def _relay_load(lambda_sr: float, pi: float, pbar_spd: float, which: str) -> float:
    """Normalized relaying load; must be < 1 for the queue to be servable."""
    if lambda_sr == 0.0:
        return 0.0
    denom = pi * pbar_spd
    if denom <= 0.0:
        raise RelayUnsatisfiable(
            f"{which} receives traffic but has no service opportunities")
    d = lambda_sr / denom
    if d >= 1.0:
        raise RelayUnsatisfiable(
            f"{which} normalized load {d:.6f} >= 1 at these admittance factors")
    return d


def build_lp(config: SystemConfig, alpha1: float, alpha2: float) -> LPModel:
    """Assemble the access-policy LP at fixed admittance factors.

    The objective is the cognitive user's service rate itself (not the
    version scaled by 1/(pi_p1*pi_p2), which breaks down at marginal
    stability); both give the same argmax whenever the scaling is valid.
    """
    probs = link_table(config)
    return _build_lp_from_probs(probs, config.lambda_p1, config.lambda_p2,
                                alpha1, alpha2)


def _build_lp_from_probs(probs: SuccessProbs, lambda_p1: float, lambda_p2: float,
                         alpha1: float, alpha2: float) -> LPModel:
    mu_p1 = primary_service_rate(probs.p1_pd1, probs.p1_s, alpha1)
    mu_p2 = primary_service_rate(probs.p2_pd2, probs.p2_s, alpha2)
    pi1 = 1.0 if lambda_p1 == 0.0 else empty_prob(lambda_p1, mu_p1, "Q_p1")
    pi2 = 1.0 if lambda_p2 == 0.0 else empty_prob(lambda_p2, mu_p2, "Q_p2")
    lam_sr1 = relay_arrival_rate(1, probs, pi1, alpha1)
    lam_sr2 = relay_arrival_rate(2, probs, pi2, alpha2)
    d1 = _relay_load(lam_sr1, pi1, probs.s_pd1, "relaying queue 1")
    d2 = _relay_load(lam_sr2, pi2, probs.s_pd2, "relaying queue 2")

    pib1, pib2 = 1.0 - pi1, 1.0 - pi2
    c = np.array([
        pi1 * pi2 * probs.s_sd_w,
        pi1 * pi2 * probs.s_sd_w2,
        pi1 * pi2 * probs.s_sd_w1,
        0.0,
        pi1 * pib2 * probs.s_sd_w1,
        pib1 * pi2 * probs.s_sd_w2,
    ])
    rows = [
        np.array([pi2, 0.0, pi2, 0.0, pib2, 0.0]),
        np.array([pi1, pi1, 0.0, 0.0, 0.0, pib1]),
    ]
    rhs = [1.0 - d1, 1.0 - d2]
    names = ["relay1", "relay2"]
    for j, var in enumerate(VAR_NAMES):
        row = np.zeros(6)
        row[j] = 1.0
        rows.append(row)
        rhs.append(1.0)
        names.append(f"{var}<=1")
    return LPModel(
        c=c,
        a_ub=np.array(rows),
        b_ub=np.array(rhs),
        a_eq=np.array([[1.0, 1.0, 1.0, 1.0, 0.0, 0.0]]),
        b_eq=np.array([1.0]),
        row_names=tuple(names),
        probs=probs,
        pi_p1=pi1,
        pi_p2=pi2,
        lambda_p1=lambda_p1,
        lambda_p2=lambda_p2,
        lambda_sr1=lam_sr1,
        lambda_sr2=lam_sr2,
        d1=d1,
        d2=d2,
        alpha1=alpha1,
        alpha2=alpha2,
    )


def _lex_refine(model: LPModel, x: np.ndarray, objective: float) -> np.ndarray:
    """Among optimal vertices prefer larger eta1, then larger a_s1 + a_s2.

    Pins the achieved objective as an equality and re-optimizes; the
    vertices of the optimal face are vertices of the original polytope,
    so the refined point stays a valid extreme solution.
    """
    a_eq = np.vstack([model.a_eq, model.c])
    b_eq = np.append(model.b_eq, objective)
    want_eta1 = np.array([1.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    r2 = simplex.solve_max(want_eta1, model.a_ub, model.b_ub, a_eq, b_eq)
    if r2.status != simplex.OPTIMAL:
        return x
    a_eq = np.vstack([a_eq, want_eta1])
    b_eq = np.append(b_eq, r2.objective)
    want_as = np.array([0.0, 0.0, 0.0, 0.0, 1.0, 1.0])
    r3 = simplex.solve_max(want_as, model.a_ub, model.b_ub, a_eq, b_eq)
    if r3.status != simplex.OPTIMAL:
        return r2.x
    return r3.x


def solve_lp(model: LPModel) -> Solution:
    """Solve the access-policy LP to an extreme-point optimum."""
    r = simplex.solve_max(model.c, model.a_ub, model.b_ub, model.a_eq, model.b_eq)
    if r.status == simplex.INFEASIBLE:
        return INFEASIBLE_SOLUTION
    if r.status != simplex.OPTIMAL:
        raise RuntimeError(f"access-policy LP reported {r.status}")
    x = np.clip(_lex_refine(model, r.x, r.objective), 0.0, 1.0)
    policy = Policy.of(model.alpha1, model.alpha2, a_s1=float(x[4]),
                       a_s2=float(x[5]), eta1=float(x[0]), eta2=float(x[1]),
                       eta3=float(x[2]), eta4=float(x[3]))
    mu_s = secondary_service_rate(model.probs, model.pi_p1, model.pi_p2, policy)
    active = ["eta_sum"]
    residuals = model.b_ub - model.a_ub @ x
    for name, res in zip(model.row_names, residuals):
        if abs(res) <= ACTIVE_TOL:
            active.append(name)
    for j, var in enumerate(VAR_NAMES):
        if x[j] <= ACTIVE_TOL:
            active.append(f"{var}>=0")
    return Solution(status="optimal", policy=policy, mu_s_max=mu_s,
                    active_constraints=tuple(active))


def _alpha_grid(lo: float, step: float, alpha_max: float,
                extra: tuple[float, ...] = ()) -> list[float]:
    values = {round(lo, 12), round(alpha_max, 12)}
    for v in extra:
        if lo <= v <= alpha_max:
            values.add(round(v, 12))
    k = math.ceil(lo / step - 1e-9)
    while k * step < alpha_max - 1e-12:
        v = round(k * step, 12)
        if v > lo + 1e-12:
            values.add(v)
        k += 1
    return sorted(values)


def optimize(config: SystemConfig, equal_alpha: bool = True,
             alpha_step: float = 0.01,
             alpha_max: float = 1.0) -> tuple[float, float, Solution]:
    """Grid-search the admittance factors, solving the LP at each point.

    Equal admittance for both licensed users is the default; the
    independent mode searches the 2-D grid (including every diagonal
    point the equal mode sees, so it can never do worse).  Ties in the
    objective go to the smallest admittance factors.
    """
    if alpha_step <= 0.0:
        raise ValueError("alpha_step must be positive")
    if not 0.0 <= alpha_max <= 1.0:
        raise ValueError("alpha_max must lie in [0, 1]")
    probs = link_table(config)
    lo1, _ = alpha_bounds(config.lambda_p1, probs.p1_pd1, probs.p1_s)
    lo2, _ = alpha_bounds(config.lambda_p2, probs.p2_pd2, probs.p2_s)
    if max(lo1, lo2) > alpha_max + 1e-12:
        raise PrimaryInfeasible(
            f"needed admittance {max(lo1, lo2):.6f} exceeds allowed {alpha_max}")

    if equal_alpha:
        lo = max(lo1, lo2)
        pairs = [(a, a) for a in _alpha_grid(lo, alpha_step, alpha_max)]
    else:
        g1 = _alpha_grid(lo1, alpha_step, alpha_max, extra=(lo2,))
        g2 = _alpha_grid(lo2, alpha_step, alpha_max, extra=(lo1,))
        pairs = [(a1, a2) for a1 in g1 for a2 in g2]

    best: Solution | None = None
    best_pair = (float("nan"), float("nan"))
    for a1, a2 in pairs:
        try:
            model = _build_lp_from_probs(probs, config.lambda_p1,
                                         config.lambda_p2, a1, a2)
        except (UnstableQueue, RelayUnsatisfiable):
            continue
        sol = solve_lp(model)
        if not sol.feasible:
            continue
        if best is None or sol.mu_s_max > best.mu_s_max + 1e-12:
            best = sol
            best_pair = (a1, a2)
    if best is None:
        return float("nan"), float("nan"), INFEASIBLE_SOLUTION
    return best_pair[0], best_pair[1], best


def _require_symmetric(config: SystemConfig, probs: SuccessProbs) -> None:
    t = config.timing
    checks = [
        ("packet sizes", t.b_p1, t.b_p2),
        ("bandwidths", t.W_p1, t.W_p2),
        ("arrival rates", config.lambda_p1, config.lambda_p2),
        ("direct links", probs.p1_pd1, probs.p2_pd2),
        ("links to the cognitive user", probs.p1_s, probs.p2_s),
        ("relaying links", probs.s_pd1, probs.s_pd2),
        ("per-band own links", probs.s_sd_w1, probs.s_sd_w2),
    ]
    for what, a, b in checks:
        if abs(a - b) > 1e-12:
            raise ValueError(f"scenario is not symmetric: {what} differ ({a} vs {b})")


def classify_symmetric(config: SystemConfig, alpha_sr: float) -> SymmetricCase:
    """Identify the feasible-region shape of the symmetric reduction.

    The reduction works in y = (1-pi)*a_s + eta*pi and z = pi*eta1 with
    constraints z + y <= 1 - d and z + 2y <= 1 + (1-pi); which corners
    can be optimal depends on how 1 - d compares with (2-pi)/2 and pi.
    """
    probs = link_table(config)
    _require_symmetric(config, probs)
    mu_p = primary_service_rate(probs.p1_pd1, probs.p1_s, alpha_sr)
    lam_p = config.lambda_p1
    pi = 1.0 if lam_p == 0.0 else empty_prob(lam_p, mu_p, "Q_p1")
    lam_sr = relay_arrival_rate(1, probs, pi, alpha_sr)
    d = _relay_load(lam_sr, pi, probs.s_pd1, "relaying queue")
    delta = probs.s_sd_w1 / probs.s_sd_w if probs.s_sd_w > 0.0 else math.inf
    pib = 1.0 - pi
    slack = 1.0 - d
    if slack >= (1.0 + pib) / 2.0:
        case_id = "a" if slack <= pi else "b"
    else:
        case_id = "c" if slack <= pi else "d"
    vertices = tuple((y, z) for _, y, z in _case_vertices(case_id, pi, d))
    return SymmetricCase(d=d, pi_p=pi, delta=delta, case_id=case_id,
                         candidate_vertices=vertices)


def _case_vertices(case_id: str, pi: float, d: float) -> list[tuple[str, float, float]]:
    """Candidate corners (kind, y, z) of the reduced region for one case."""
    pib = 1.0 - pi
    slack = 1.0 - d
    z_top = ("z_top", 0.0, slack)              # relay line meets the z axis
    z_cap = ("z_cap", 0.0, pi)                 # z axis meets the z box
    cap_line = ("cap_line", slack - pi, pi)    # relay line meets the z box
    y_box = ("y_box", (1.0 + pib) / 2.0, 0.0)  # y axis meets the y box
    intersect = ("intersect", pib + d, pi - 2.0 * d)
    y_line = ("y_line", slack, 0.0)            # relay line meets the y axis
    return {
        "a": [z_top, y_box, intersect],
        "b": [z_cap, cap_line, y_box, intersect],
        "c": [z_top, y_line],
        "d": [z_cap, cap_line, y_line],
    }[case_id]


def _clamp01(x: float) -> float:
    if x < -1e-9 or x > 1.0 + 1e-9:
        raise ValueError(f"probability {x!r} outside [0, 1]")
    return min(max(x, 0.0), 1.0)


def _vertex_policy(kind: str, y: float, z: float, pi: float, d: float,
                   alpha_sr: float) -> tuple[Policy, tuple[str, ...]]:
    """Map a corner of the reduced region back to access probabilities.

    Follows the published per-corner assignments; on the relay-line
    corner (y, z) = (1 - d, 0) a whole interval of eta values realizes
    the corner, so the midpoint is used and the range is noted.
    """
    pib = 1.0 - pi
    notes: tuple[str, ...] = ()
    if kind == "z_top":
        eta1 = _clamp01(z / pi)
        a_s, eta, eta4 = 0.0, 0.0, _clamp01(1.0 - eta1)
    elif kind == "z_cap":
        eta1, eta, eta4, a_s = 1.0, 0.0, 0.0, 0.0
    elif kind == "cap_line":
        eta1, eta, eta4 = 1.0, 0.0, 0.0
        a_s = _clamp01(y / pib)
    elif kind == "y_box":
        eta1, eta, eta4, a_s = 0.0, 0.5, 0.0, 1.0
    elif kind == "intersect":
        eta1 = _clamp01(z / pi)
        eta = _clamp01(d / pi)
        a_s, eta4 = 1.0, 0.0
    elif kind == "y_line":
        eta1 = 0.0
        if pib <= 1e-15:
            eta = _clamp01(y)
            a_s = 1.0
        else:
            lo = max(0.0, (pi - d) / pi)
            hi = min(0.5, (1.0 - d) / pi)
            eta = 0.5 * (lo + hi)
            a_s = _clamp01((y - pi * eta) / pib)
            if hi - lo > 1e-12:
                notes = (f"eta range [{lo:.6f}, {hi:.6f}], midpoint used",)
        eta4 = _clamp01(1.0 - 2.0 * eta)
    else:
        raise ValueError(f"unknown vertex kind {kind!r}")
    return Policy.of(alpha_sr, alpha_sr, a_s, a_s, eta1, eta, eta, eta4), notes


def symmetric_solve(config: SystemConfig, alpha_sr: float) -> Solution:
    """Closed-form optimum for a symmetric scenario at fixed admittance.

    Evaluates the objective at the candidate corners of the reduced
    feasible region and maps the best one back to a full policy.  Ties
    prefer the corner with larger eta1, then larger a_s, matching the
    LP solver's refinement order.
    """
    probs = link_table(config)
    _require_symmetric(config, probs)
    mu_p = primary_service_rate(probs.p1_pd1, probs.p1_s, alpha_sr)
    lam_p = config.lambda_p1
    pi = 1.0 if lam_p == 0.0 else empty_prob(lam_p, mu_p, "Q_p1")
    if pi == 0.0:
        lam_sr = relay_arrival_rate(1, probs, pi, alpha_sr)
        if lam_sr > 0.0:
            raise RelayUnsatisfiable(
                "relaying queues receive traffic but the licensed queues never idle")
        policy = Policy.of(alpha_sr, alpha_sr, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0)
        return Solution(status="optimal", policy=policy, mu_s_max=0.0,
                        notes=("licensed queues marginally stable",))

    case = classify_symmetric(config, alpha_sr)
    pw, pw2 = probs.s_sd_w, probs.s_sd_w2
    best: tuple[float, float, float, Policy, tuple[str, ...]] | None = None
    for kind, y, z in _case_vertices(case.case_id, pi, case.d):
        policy, notes = _vertex_policy(kind, y, z, pi, case.d, alpha_sr)
        value = pi * (z * pw + 2.0 * y * pw2)
        if best is None:
            best = (value, policy.eta1, policy.a_s1, policy, notes)
            continue
        key = (value, policy.eta1, policy.a_s1)
        if (value > best[0] + 1e-15
                or (abs(value - best[0]) <= 1e-15 and key[1:] > best[1:3])):
            best = (value, policy.eta1, policy.a_s1, policy, notes)
    assert best is not None
    policy = best[3]
    mu_s = secondary_service_rate(probs, pi, pi, policy)
    notes = (f"case {case.case_id}",) + best[4]
    return Solution(status="optimal", policy=policy, mu_s_max=mu_s, notes=notes)


def max_feasible_primary_rate(config: SystemConfig,
                              lambda_p2: float | None = None,
                              alpha_max: float = 1.0,
                              tol: float = 1e-3,
                              alpha_step: float = 0.01) -> float:
    """Largest arrival rate of licensed user 1 every queue can survive.

    Bisects on the arrival rate with the grid optimizer as the
    feasibility test, holding user 2's rate fixed.  If the result lands
    within tolerance of the primary-queue limit itself (the exact
    boundary when relaying is disabled), it snaps to that value after
    verifying feasibility there.
    """
    base = config if lambda_p2 is None else replace(config, lambda_p2=lambda_p2)

    def feasible(lam: float) -> bool:
        try:
            _, _, sol = optimize(replace(base, lambda_p1=lam),
                                 equal_alpha=True, alpha_step=alpha_step,
                                 alpha_max=alpha_max)
        except PrimaryInfeasible:
            return False
        return sol.feasible

    if not feasible(0.0):
        return 0.0
    if feasible(1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    probs = link_table(base)
    cand = primary_service_rate(probs.p1_pd1, probs.p1_s, alpha_max)
    if lo <= cand <= hi and cand - lo <= tol and feasible(cand):
        return cand
    return lo
