"""Command-line interface: rates | optimize | sweep | simulate.

Scenario arguments accept a path or the name of a bundled scenario
(admittance, comparison, comparison_symmetric, parametric).  Exit codes: 0 success, 2 bad
scenario/configuration, 3 infeasible or unstable setup.  All CSV output
uses '.' decimals and LF line endings regardless of locale.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .optimizer import (PrimaryInfeasible, RelayUnsatisfiable, Solution,
                        optimize)
from .rates import RateReport, UnstableQueue, full_report
from .region import SweepSpec, sweep
from .scenario import (Scenario, ScenarioError, SimSettings, bundled_scenario,
                       load_scenario)
from .simulator import SYSTEMS, SimConfig, SimOutcome, run

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3


def _fmt(x: float) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{x:.6f}"


def _resolve_scenario(name: str) -> Scenario:
    path = Path(name)
    if path.exists():
        return load_scenario(path)
    try:
        return bundled_scenario(name)
    except ScenarioError:
        raise ScenarioError(
            f"no scenario file {name!r} and no bundled scenario of that name")


def _write_text(path: str | Path, text: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _cmd_rates(args: argparse.Namespace) -> int:
    scenario = _resolve_scenario(args.scenario)
    if scenario.policy is None:
        raise ScenarioError("the rates command needs a [policy] section")
    report = full_report(scenario.config, scenario.policy)
    for field in RateReport.FLOAT_FIELDS:
        print(f"{field} = {_fmt(getattr(report, field))}")
    for field in RateReport.FLAG_FIELDS:
        print(f"{field} = {str(getattr(report, field)).lower()}")
    if args.csv:
        header = ",".join(RateReport.FLOAT_FIELDS + RateReport.FLAG_FIELDS)
        row = ",".join([_fmt(getattr(report, f)) for f in RateReport.FLOAT_FIELDS]
                       + [str(getattr(report, f)).lower() for f in RateReport.FLAG_FIELDS])
        _write_text(args.csv, header + "\n" + row + "\n")
    return EXIT_OK


_OPT_HEADER = ("lambda_p1,lambda_p2,alpha1,alpha2,eta1,eta2,eta3,eta4,"
               "a_s1,a_s2,mu_s_max,status")


def _optimize_row(lam1: float, lam2: float, a1: float, a2: float,
                  sol: Solution) -> str:
    if not sol.feasible or sol.policy is None:
        return f"{_fmt(lam1)},{_fmt(lam2)},,,,,,,,,{_fmt(0.0)},infeasible"
    p = sol.policy
    cells = [lam1, lam2, a1, a2, p.eta1, p.eta2, p.eta3, p.eta4, p.a_s1, p.a_s2,
             sol.mu_s_max]
    return ",".join(_fmt(c) for c in cells) + ",optimal"


def _cmd_optimize(args: argparse.Namespace) -> int:
    scenario = _resolve_scenario(args.scenario)
    cfg = scenario.config
    try:
        a1, a2, sol = optimize(cfg, equal_alpha=not args.independent_alpha,
                               alpha_step=args.alpha_step,
                               alpha_max=args.alpha_max)
    except (PrimaryInfeasible, UnstableQueue):
        a1 = a2 = float("nan")
        sol = Solution(status="infeasible", policy=None, mu_s_max=0.0)
    text = _OPT_HEADER + "\n" + _optimize_row(cfg.lambda_p1, cfg.lambda_p2, a1, a2, sol) + "\n"
    sys.stdout.write(text)
    if args.out:
        _write_text(args.out, text)
    return EXIT_OK if sol.feasible else EXIT_INFEASIBLE


_SWEEP_HEADER = "lambda_p1,lambda_p2,system,mode,feasible,lambda_s_max,alpha1,alpha2"


def _cmd_sweep(args: argparse.Namespace) -> int:
    scenario = _resolve_scenario(args.scenario)
    start, stop, step = args.lambda_p1
    lam2 = tuple(args.lambda_p2) if args.lambda_p2 else scenario.config.lambda_p2
    sim = scenario.sim or SimSettings()
    spec = SweepSpec(
        lambda_p1=(start, stop, step),
        lambda_p2=lam2 if isinstance(lam2, float) else tuple(lam2),
        systems=tuple(args.systems),
        mode=args.mode,
        equal_alpha=not args.independent_alpha,
        alpha_step=args.alpha_step,
        slots=args.slots if args.slots is not None else sim.slots,
        warmup=args.warmup if args.warmup is not None else sim.warmup,
        seed=args.seed if args.seed is not None else sim.seed,
        boundary_tol=args.boundary_tol,
    )
    points = sweep(scenario.config, spec)
    lines = [_SWEEP_HEADER]
    for pt in points:
        a1 = "" if math.isnan(pt.alpha1) else _fmt(pt.alpha1)
        a2 = "" if math.isnan(pt.alpha2) else _fmt(pt.alpha2)
        lines.append(f"{_fmt(pt.lambda_p1)},{_fmt(pt.lambda_p2)},{pt.system},"
                     f"{pt.mode},{str(pt.feasible).lower()},"
                     f"{_fmt(pt.lambda_s_max)},{a1},{a2}")
    out = Path(args.out)
    _write_text(out, "\n".join(lines) + "\n")
    print(f"wrote {len(points)} region points to {out}")
    if args.plot:
        from .plots import plot_region

        figure = plot_region(points, out.with_suffix(".png"))
        print(f"wrote figure to {figure}")
    return EXIT_OK


_SIM_HEADER = (
    "system,slots,warmup,counted,seed,lambda_s,status,"
    + ",".join(f"arr_{q}" for q in ("p1", "p2", "s", "sr1", "sr2")) + ","
    + ",".join(f"dep_{q}" for q in ("p1", "p2", "s", "sr1", "sr2")) + ","
    + ",".join(f"thr_{q}" for q in ("p1", "p2", "s", "sr1", "sr2")) + ","
    + ",".join(f"srv_{q}" for q in ("p1", "p2", "s", "sr1", "sr2")) + ","
    + "opp_s,opp_sr1,opp_sr2,pi_p1,pi_p2,"
    + ",".join(f"verdict_{q}" for q in ("p1", "p2", "s", "sr1", "sr2"))
)


def _simulate_row(outcome: SimOutcome, lambda_s: float) -> str:
    queues = ("p1", "p2", "s", "sr1", "sr2")
    cells: list[str] = [outcome.system, str(outcome.slots), str(outcome.warmup),
                        str(outcome.counted), str(outcome.seed), _fmt(lambda_s),
                        outcome.status]
    cells += [str(outcome.arrivals[q]) for q in queues]
    cells += [str(outcome.departures[q]) for q in queues]
    cells += [_fmt(outcome.throughput[q]) for q in queues]
    cells += [_fmt(outcome.service_rate[q]) for q in queues]
    cells += [_fmt(outcome.opportunity_rate[q]) for q in ("s", "sr1", "sr2")]
    cells += [_fmt(outcome.pi_p1), _fmt(outcome.pi_p2)]
    cells += [outcome.verdicts[q] for q in queues]
    return ",".join(cells)


def _cmd_simulate(args: argparse.Namespace) -> int:
    scenario = _resolve_scenario(args.scenario)
    if scenario.policy is None:
        raise ScenarioError("the simulate command needs a [policy] section")
    sim = scenario.sim or SimSettings()
    slots = args.slots if args.slots is not None else sim.slots
    warmup = args.warmup if args.warmup is not None else sim.warmup
    warmup = min(warmup, slots)
    cfg = scenario.config
    if args.lambda_s is not None:
        from dataclasses import replace

        cfg = replace(cfg, lambda_s=args.lambda_s)
    outcome = run(SimConfig(
        config=cfg, policy=scenario.policy, system=args.system, slots=slots,
        seed=args.seed if args.seed is not None else sim.seed, warmup=warmup))
    text = _SIM_HEADER + "\n" + _simulate_row(outcome, cfg.lambda_s) + "\n"
    sys.stdout.write(text)
    if args.out:
        _write_text(args.out, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cogmac",
        description="Cooperative cognitive-radio MAC: rates, optimization, "
                    "region sweeps, and simulation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rates", help="print the analytic rates for the scenario's policy")
    p.add_argument("scenario")
    p.add_argument("--csv", help="also write the report as a CSV file")
    p.set_defaults(func=_cmd_rates)

    p = sub.add_parser("optimize", help="maximize the cognitive throughput at the scenario's load")
    p.add_argument("scenario")
    p.add_argument("--independent-alpha", action="store_true",
                   help="search both admittance factors independently")
    p.add_argument("--alpha-step", type=float, default=0.01)
    p.add_argument("--alpha-max", type=float, default=1.0)
    p.add_argument("--out", help="also write the CSV row to this file")
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("sweep", help="trace stability-region boundary curves")
    p.add_argument("scenario")
    p.add_argument("--lambda-p1", nargs=3, type=float, required=True,
                   metavar=("START", "STOP", "STEP"))
    p.add_argument("--lambda-p2", nargs="+", type=float,
                   help="fixed value(s); default: the scenario's lambda_p2")
    p.add_argument("--systems", nargs="+", choices=SYSTEMS, default=["S"])
    p.add_argument("--mode", choices=("analytic", "empirical", "both"),
                   default="analytic")
    p.add_argument("--independent-alpha", action="store_true")
    p.add_argument("--alpha-step", type=float, default=0.01)
    p.add_argument("--slots", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--warmup", type=int)
    p.add_argument("--boundary-tol", type=float, default=0.01)
    p.add_argument("--out", default="sweep.csv")
    p.add_argument("--plot", default=True,
                   action=argparse.BooleanOptionalAction,
                   help="render the curves as a PNG next to the CSV")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("simulate", help="run the slot-level simulator once")
    p.add_argument("scenario")
    p.add_argument("--system", choices=SYSTEMS, default="S")
    p.add_argument("--slots", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--warmup", type=int)
    p.add_argument("--lambda-s", type=float,
                   help="override the scenario's cognitive arrival rate")
    p.add_argument("--out", help="also write the CSV to this file")
    p.set_defaults(func=_cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UnstableQueue as exc:
        print(f"unstable: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (PrimaryInfeasible, RelayUnsatisfiable) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


def entry() -> None:
    raise SystemExit(main())
