"""Acceptance gate: one check per advertised guarantee, with budgets.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS line per
criterion.
"""

import math
import time
from dataclasses import replace

import numpy as np
import pytest

from cogmac import (Policy, SimConfig, build_lp, classify_symmetric,
                    full_report, max_feasible_primary_rate, optimize, run,
                    solve_lp, success_prob, symmetric_solve)
from cogmac.cli import main
from cogmac.region import SweepSpec, sweep
from helpers import (brute_force_lp_max, mc_success_prob,
                     random_direct_instance, symmetric_instance_for_case)


def announce(num: int, text: str) -> None:
    print(f"\nACCEPTANCE {num} PASS: {text}")


def se3(p: float, n: int) -> float:
    return 3.0 * math.sqrt(max(p * (1.0 - p), 1.0 / n) / n)


def test_c1_outage_formula_matches_fading_oracle():
    start = time.monotonic()
    rng = np.random.default_rng(20260810)
    worst = 0.0
    for k in range(20):
        rate = rng.uniform(0.05, 2.5)
        sigma2 = rng.uniform(0.1, 2.0)
        gamma = rng.uniform(0.2, 6.0)
        p = success_prob(rate, sigma2, gamma)
        p_hat, se = mc_success_prob(rate, sigma2, gamma, 1_000_000, seed=k)
        assert abs(p - p_hat) <= 3.0 * se, (rate, sigma2, gamma)
        worst = max(worst, abs(p - p_hat) / se)
    elapsed = time.monotonic() - start
    assert elapsed < 10.0
    announce(1, f"closed-form success probability within 3 SE of a 1e6-sample "
                f"fading Monte Carlo for 20 random links "
                f"(worst {worst:.2f} SE, {elapsed:.1f}s)")


def test_c2_rate_formulas_validated_by_simulation(comparison_symmetric):
    start = time.monotonic()
    cfg = comparison_symmetric.config
    policy = Policy.of(1.0, 1.0, 0.5, 0.5, 0.25, 0.25, 0.25, 0.25)
    report = full_report(cfg, policy)
    assert report.mu_p1 == pytest.approx(0.68, abs=1e-9)
    assert report.mu_p2 == pytest.approx(0.68, abs=1e-9)
    assert report.pi_p1 == pytest.approx(0.7058823529411764, abs=1e-9)
    assert report.pi_p2 == pytest.approx(0.7058823529411764, abs=1e-9)
    assert report.lambda_sr1 == pytest.approx(0.14117647058823532, abs=1e-9)
    assert report.lambda_sr2 == pytest.approx(0.14117647058823532, abs=1e-9)

    out = run(SimConfig(config=cfg, policy=policy, system="S",
                        slots=1_000_000, seed=20260810, warmup=10_000))
    m = out.counted
    checks = [
        ("service p1", out.service_rate["p1"], 0.68, out.busy["p1"]),
        ("service p2", out.service_rate["p2"], 0.68, out.busy["p2"]),
        ("empty fraction p1", out.pi_p1, report.pi_p1, m),
        ("empty fraction p2", out.pi_p2, report.pi_p2, m),
        ("relay-1 arrivals", out.arrivals["sr1"] / m, report.lambda_sr1, m),
        ("relay-2 arrivals", out.arrivals["sr2"] / m, report.lambda_sr2, m),
    ]
    for what, measured, target, n in checks:
        assert abs(measured - target) <= se3(target, n), what
    elapsed = time.monotonic() - start
    assert elapsed < 30.0
    announce(2, f"analytic chain exact to 1e-9 and every rate reproduced by a "
                f"1e6-slot simulation within 3 SE ({elapsed:.1f}s)")


def test_c3_maximum_feasible_primary_rate(comparison):
    start = time.monotonic()
    no_coop = max_feasible_primary_rate(comparison.config, alpha_max=0.0)
    assert no_coop == 0.2
    with_coop = max_feasible_primary_rate(comparison.config)
    assert with_coop == pytest.approx(0.38, abs=0.01)
    elapsed = time.monotonic() - start
    assert elapsed < 60.0
    announce(3, f"max feasible licensed load: {no_coop} without relaying "
                f"(exact), {with_coop:.4f} with relaying (0.38 +/- 0.01) "
                f"({elapsed:.1f}s)")


def test_c4_lp_never_beaten_by_brute_force():
    rng = np.random.default_rng(4)
    worst_gap = 0.0
    for _ in range(20):
        cfg, a1, a2 = random_direct_instance(rng)
        model = build_lp(cfg, a1, a2)
        sol = solve_lp(model)
        assert sol.feasible
        bf = brute_force_lp_max(model, step=0.05)
        slack = 0.05 * float(np.abs(model.c).sum()) + 1e-9
        assert bf <= sol.mu_s_max + 1e-9
        assert sol.mu_s_max <= bf + slack
        x = sol.policy
        vec = np.array([x.eta1, x.eta2, x.eta3, x.eta4, x.a_s1, x.a_s2])
        assert float((model.a_ub @ vec - model.b_ub).max()) <= 1e-9
        assert abs(float(vec[:4].sum()) - 1.0) <= 1e-9
        worst_gap = max(worst_gap, sol.mu_s_max - bf)
    announce(4, f"simplex optimum bounds the 0.05-grid exhaustive search on 20 "
                f"random instances (largest grid gap {worst_gap:.4f}) with "
                f"residuals <= 1e-9")


def test_c5_symmetric_closed_form_agrees_with_lp():
    rng = np.random.default_rng(5)
    seen = {"a": 0, "b": 0, "c": 0, "d": 0}
    worst = 0.0
    for i in range(50):
        case_id = "abcd"[i % 4]
        cfg, alpha = symmetric_instance_for_case(rng, case_id)
        case = classify_symmetric(cfg, alpha)
        seen[case.case_id] += 1
        closed = symmetric_solve(cfg, alpha)
        lp = solve_lp(build_lp(cfg, alpha, alpha))
        diff = abs(closed.mu_s_max - lp.mu_s_max)
        assert diff <= 1e-6, (case_id, diff)
        worst = max(worst, diff)
    assert all(count >= 5 for count in seen.values()), seen
    announce(5, f"closed-form vertex solution matches the LP to 1e-6 on 50 "
                f"symmetric instances spanning all four region shapes "
                f"{dict(seen)} (worst {worst:.2e})")


def test_c6_baseline_dominance_and_monotone_curves(comparison, parametric):
    start = time.monotonic()
    spec = SweepSpec(lambda_p1=(0.1, 0.35, 0.05), lambda_p2=0.2,
                     systems=("S", "S1", "S2"), mode="both",
                     slots=1_000_000, warmup=10_000, seed=2026,
                     boundary_tol=0.01)
    points = sweep(comparison.config, spec)
    curves: dict[tuple, list] = {}
    for p in points:
        curves.setdefault((p.system, p.mode), []).append(p)
    s_analytic = [p.lambda_s_max for p in curves[("S", "analytic")]]
    s_empirical = [p.lambda_s_max for p in curves[("S", "empirical")]]
    s1 = [p.lambda_s_max for p in curves[("S1", "empirical")]]
    s2 = [p.lambda_s_max for p in curves[("S2", "empirical")]]
    assert all(p.feasible for pts in curves.values() for p in pts)

    for i in range(len(s_analytic)):
        assert s_analytic[i] >= s1[i], f"baseline S1 above S at point {i}"
        assert s_analytic[i] >= s2[i], f"baseline S2 above S at point {i}"
        assert abs(s_analytic[i] - s_empirical[i]) <= 0.02, i
    assert all(b <= a + 1e-9 for a, b in zip(s_analytic, s_analytic[1:]))
    bisect_slack = spec.boundary_tol + 1e-9
    for curve in (s_empirical, s1, s2):
        assert all(b <= a + bisect_slack for a, b in zip(curve, curve[1:]))

    spec_lo = SweepSpec(lambda_p1=(0.0, 0.25, 0.05), lambda_p2=0.1)
    spec_hi = SweepSpec(lambda_p1=(0.0, 0.25, 0.05), lambda_p2=0.3)
    lo = [p.lambda_s_max for p in sweep(parametric.config, spec_lo)]
    hi = [p.lambda_s_max for p in sweep(parametric.config, spec_hi)]
    assert all(h <= l + 1e-9 for l, h in zip(lo, hi))
    elapsed = time.monotonic() - start
    assert elapsed < 600.0
    announce(6, f"optimized system dominates both priority baselines at every "
                f"grid point, every curve is non-increasing, simulation "
                f"tracks analysis within 0.02, and the heavier neighbor-load "
                f"curve lies below the lighter one ({elapsed:.0f}s)")


def test_c7_cooperation_never_harms_licensed_users():
    from cogmac import primary_service_rate

    rng = np.random.default_rng(7)
    alphas = np.round(np.linspace(0.0, 1.0, 101), 10)
    for _ in range(20):
        cfg, a1, a2 = random_direct_instance(rng)
        for pd, ps in ((cfg.links["p1_pd1"].success["W_p1"],
                        cfg.links["p1_s"].success["W_p1"]),
                       (cfg.links["p2_pd2"].success["W_p2"],
                        cfg.links["p2_s"].success["W_p2"])):
            values = [primary_service_rate(pd, ps, a) for a in alphas]
            assert all(v >= values[0] - 1e-15 for v in values)
            assert all(b >= a - 1e-15 for a, b in zip(values, values[1:]))
        # the composed report agrees with the bare formula at stable loads
        for a in (max(a1, a2), 1.0):
            report = full_report(cfg, Policy.of(a, a, 0.5, 0.5,
                                                0.25, 0.25, 0.25, 0.25))
            pd = cfg.links["p1_pd1"].success["W_p1"]
            ps = cfg.links["p1_s"].success["W_p1"]
            assert report.mu_p1 == pytest.approx(
                primary_service_rate(pd, ps, a), abs=1e-12)
    announce(7, "licensed service rate is non-decreasing in the admittance "
                "factor on a 0.01 grid for 20 random scenarios and never "
                "below the non-cooperative rate")


def test_c8_deterministic_csv_output(tmp_path):
    pairs = []
    for name in ("a", "b"):
        sim_csv = tmp_path / f"sim_{name}.csv"
        assert main(["simulate", "comparison", "--slots", "300000", "--seed", "99",
                     "--out", str(sim_csv)]) == 0
        sweep_csv = tmp_path / f"sweep_{name}.csv"
        assert main(["sweep", "comparison", "--lambda-p1", "0.2", "0.3", "0.1",
                     "--lambda-p2", "0.2", "--systems", "S", "S2",
                     "--mode", "both", "--slots", "120000",
                     "--boundary-tol", "0.05", "--seed", "17",
                     "--out", str(sweep_csv), "--no-plot"]) == 0
        pairs.append((sim_csv.read_bytes(), sweep_csv.read_bytes()))
    assert pairs[0] == pairs[1]
    announce(8, "identical seeds and flags give byte-identical simulate and "
                "sweep CSV files across consecutive runs")


def test_c9_equal_admittance_gap_is_reported(admittance):
    gaps = []
    for lam1 in (0.1, 0.25, 0.35):
        cfg = replace(admittance.config, lambda_p1=lam1)
        _, _, equal = optimize(cfg, equal_alpha=True, alpha_step=0.02)
        _, _, indep = optimize(cfg, equal_alpha=False, alpha_step=0.02)
        gap = indep.mu_s_max - equal.mu_s_max
        assert gap >= -1e-12
        gaps.append((lam1, gap))
    report = ", ".join(f"load {l:g}: {g:.6f}" for l, g in gaps)
    announce(9, f"independent admittance never loses to equal admittance; "
                f"observed gaps ({report})")
