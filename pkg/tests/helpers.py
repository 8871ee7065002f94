"""Shared builders and independent oracles for the test suite."""

from __future__ import annotations

import itertools
import math

import numpy as np

from cogmac import LinkModel, Policy, SystemConfig, TimingConfig
from cogmac.optimizer import LPModel

STD_TIMING = TimingConfig(T=1e-3, tau=1e-4, W_p1=2e6, W_p2=2e6,
                          b_p1=1000.0, b_p2=1000.0, b_s=1000.0)


def direct_config(p1_pd1: float, p2_pd2: float, p1_s: float, p2_s: float,
                  s_pd1: float, s_pd2: float, ssd_w1: float, ssd_w2: float,
                  ssd_w: float, lam1: float = 0.0, lam2: float = 0.0,
                  lam_s: float = 0.0,
                  timing: TimingConfig = STD_TIMING) -> SystemConfig:
    """Scenario with every success probability pinned directly."""
    return SystemConfig(
        timing=timing,
        lambda_p1=lam1,
        lambda_p2=lam2,
        lambda_s=lam_s,
        links={
            "p1_pd1": LinkModel(success={"W_p1": p1_pd1}),
            "p2_pd2": LinkModel(success={"W_p2": p2_pd2}),
            "p1_s": LinkModel(success={"W_p1": p1_s}),
            "p2_s": LinkModel(success={"W_p2": p2_s}),
            "s_pd1": LinkModel(success={"W_p1": s_pd1}),
            "s_pd2": LinkModel(success={"W_p2": s_pd2}),
            "s_sd": LinkModel(success={"W_p1": ssd_w1, "W_p2": ssd_w2,
                                       "W": ssd_w}),
        },
    )


def mc_success_prob(rate: float, sigma2: float, gamma: float, samples: int,
                    seed: int) -> tuple[float, float]:
    """Monte Carlo fading oracle: estimate and standard error.

    Draws the channel power as Exponential with mean sigma2 and counts
    how often log2(1 + gamma * power) clears the rate.
    """
    rng = np.random.default_rng(seed)
    power = rng.exponential(scale=sigma2, size=samples)
    hits = np.log2(1.0 + gamma * power) > rate
    p_hat = float(hits.mean())
    se = math.sqrt(max(p_hat * (1.0 - p_hat), 1.0 / samples) / samples)
    return p_hat, se


def brute_force_lp_max(model: LPModel, step: float = 0.05) -> float:
    """Exhaustive coarse-grid maximum of the access-policy program.

    Enumerates eta tuples on the unit simplex and both a_s values on a
    regular grid, keeping only points satisfying the relaying rows.
    Independent of the simplex path: plain feasibility filtering plus a
    max over evaluated objectives.
    """
    n = round(1.0 / step)
    etas = []
    for k1, k2, k3 in itertools.product(range(n + 1), repeat=3):
        if k1 + k2 + k3 <= n:
            etas.append((k1 * step, k2 * step, k3 * step,
                         (n - k1 - k2 - k3) * step))
    eta_arr = np.array(etas)                      # (ne, 4)
    a_grid = np.linspace(0.0, 1.0, n + 1)         # (na,)

    c = model.c
    obj = (eta_arr @ c[:4])[:, None, None] \
        + (c[4] * a_grid)[None, :, None] \
        + (c[5] * a_grid)[None, None, :]
    row1 = model.a_ub[0]
    row2 = model.a_ub[1]
    lhs1 = (eta_arr @ row1[:4])[:, None, None] + (row1[4] * a_grid)[None, :, None]
    lhs2 = (eta_arr @ row2[:4])[:, None, None] + (row2[5] * a_grid)[None, None, :]
    feasible = (lhs1 <= model.b_ub[0] + 1e-12) & (lhs2 <= model.b_ub[1] + 1e-12)
    if not feasible.any():
        return -np.inf
    return float(obj[feasible].max())


def random_direct_instance(rng: np.random.Generator,
                           symmetric: bool = False) -> tuple[SystemConfig, float, float]:
    """Random stable scenario plus admittance factors with servable relays.

    Loads are drawn at a fraction of the primary service rates and the
    relaying links are stretched until the normalized relay loads stay
    below one, so the instance is feasible by construction.
    """
    while True:
        pd1 = rng.uniform(0.1, 0.9)
        ps1 = rng.uniform(0.3, 0.95)
        spd1 = rng.uniform(0.3, 1.0)
        ssd_w1 = rng.uniform(0.2, 0.95)
        ssd_w = min(1.0, ssd_w1 * rng.uniform(1.0, 1.4))
        if symmetric:
            pd2, ps2, spd2, ssd_w2 = pd1, ps1, spd1, ssd_w1
        else:
            pd2 = rng.uniform(0.1, 0.9)
            ps2 = rng.uniform(0.3, 0.95)
            spd2 = rng.uniform(0.3, 1.0)
            ssd_w2 = rng.uniform(0.2, 0.95)
        a1 = rng.uniform(0.1, 1.0)
        a2 = a1 if symmetric else rng.uniform(0.1, 1.0)
        mu1 = pd1 + (1.0 - pd1) * ps1 * a1
        mu2 = pd2 + (1.0 - pd2) * ps2 * a2
        lam1 = rng.uniform(0.05, 0.9) * mu1
        lam2 = lam1 if symmetric else rng.uniform(0.05, 0.9) * mu2
        if lam2 >= mu2:
            continue
        pi1 = 1.0 - lam1 / mu1
        pi2 = 1.0 - lam2 / mu2
        d1 = (1.0 - pd1) * ps1 * a1 * (1.0 - pi1) / (pi1 * spd1)
        d2 = (1.0 - pd2) * ps2 * a2 * (1.0 - pi2) / (pi2 * spd2)
        if d1 >= 0.98 or d2 >= 0.98:
            continue
        cfg = direct_config(pd1, pd2, ps1, ps2, spd1, spd2,
                            ssd_w1, ssd_w2, ssd_w, lam1=lam1, lam2=lam2)
        return cfg, a1, a2


def symmetric_instance_for_case(rng: np.random.Generator,
                                case_id: str) -> tuple[SystemConfig, float]:
    """Random symmetric scenario engineered to land in one region shape.

    Picks the queue-empty probability pi and the normalized relay load d
    inside the target shape's parameter region, then back-solves the
    arrival rate and the relaying-link quality that realize them.
    """
    regions = {
        "a": lambda: (rng.uniform(0.7, 0.98),),
        "b": lambda: (rng.uniform(0.2, 0.9),),
        "c": lambda: (rng.uniform(0.55, 0.98),),
        "d": lambda: (rng.uniform(0.1, 0.6),),
    }
    while True:
        (pi,) = regions[case_id]()
        if case_id == "a":
            lo, hi = 1.0 - pi, pi / 2.0
        elif case_id == "b":
            lo, hi = 0.0, min(pi / 2.0, 1.0 - pi)
        elif case_id == "c":
            lo, hi = max(pi / 2.0, 1.0 - pi), 0.98
        else:
            lo, hi = pi / 2.0, 1.0 - pi
        if hi <= lo + 1e-6:
            continue
        d = rng.uniform(lo + 1e-6, hi - 1e-6)
        pd = rng.uniform(0.1, 0.8)
        ps = rng.uniform(0.3, 0.95)
        alpha = rng.uniform(0.2, 1.0)
        mu = pd + (1.0 - pd) * ps * alpha
        lam = (1.0 - pi) * mu
        lam_sr = (1.0 - pd) * ps * alpha * (1.0 - pi)
        if d <= 0.0:
            continue
        spd = lam_sr / (pi * d) if lam_sr > 0.0 else rng.uniform(0.3, 1.0)
        if not 0.01 <= spd <= 1.0:
            continue
        ssd_w = rng.uniform(0.3, 1.0)
        ssd_half = ssd_w * rng.uniform(0.1, 1.3)
        if ssd_half > 1.0:
            continue
        cfg = direct_config(pd, pd, ps, ps, spd, spd, ssd_half, ssd_half,
                            ssd_w, lam1=lam, lam2=lam)
        return cfg, alpha
