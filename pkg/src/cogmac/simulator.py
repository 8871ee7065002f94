"""Slot-level Monte Carlo simulation of the five-queue cooperative MAC.

Each slot: Bernoulli arrivals land, nonempty licensed queues transmit on
their own bands, the cognitive user senses exactly that activity and
schedules its three queues on the idle bands, and link outages decide
which head packets depart.  A licensed packet whose direct link failed
but was decoded and admitted by the cognitive user moves to the matching
relaying queue (counted as a licensed departure), joining it at the end
of the slot.

Besides the optimized random-access system ("S") two priority baselines
are simulated: "S1" always admits relayed traffic and serves relaying
queues ahead of the cognitive user's own queue wherever possible, and
"S2" additionally serves the own queue only when both bands are idle
and both relaying queues are empty.

Randomness is drawn from one named stream per link and per decision so
instrumentation changes never perturb existing draws; every stream is
indexed by slot number.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .channel import SystemConfig, link_table
from .rates import Policy

SYSTEMS = ("S", "S1", "S2")
_SYSTEM_IDS = {"S": 0, "S1": 1, "S2": 2}

QUEUES = ("p1", "p2", "s", "sr1", "sr2")

#: Stream ids; append only, never reorder, or seeds change meaning.
_STREAMS = (
    "arrival_p1", "arrival_p2", "arrival_s",
    "link_p1_pd1", "link_p2_pd2", "link_p1_s", "link_p2_s",
    "link_s_pd1", "link_s_pd2", "link_s_sd",
    "choice_eta", "choice_a1", "choice_a2", "admit_1", "admit_2",
)

#: Default drift threshold (packets/slot) separating growth from noise.
DRIFT_EPS = 1e-4

_MAX_SAMPLES = 2048

# counter indices inside the int64 scratch array of the compiled core
_N_COUNTS = 29
(_ARR_P1, _ARR_P2, _ARR_S, _ARR_SR1, _ARR_SR2,
 _DEP_P1, _DEP_P2, _DEP_S, _DEP_SR1, _DEP_SR2,
 _BUSY_P1, _BUSY_P2, _BUSY_S, _BUSY_SR1, _BUSY_SR2,
 _IDLE_P1, _IDLE_P2, _COUNTED,
 _FIN_P1, _FIN_P2, _FIN_S, _FIN_SR1, _FIN_SR2,
 _OPP_S, _OPP_SR1, _OPP_SR2,
 _SCHED_S, _SCHED_SR1, _SCHED_SR2) = range(_N_COUNTS)


@dataclass(frozen=True)
class SimConfig:
    """One simulation run: scenario, policy, horizon, and seed."""

    config: SystemConfig
    policy: Policy
    system: str = "S"
    slots: int = 1_000_000
    seed: int = 0
    warmup: int = 10_000

    def __post_init__(self) -> None:
        if self.system not in SYSTEMS:
            raise ValueError(f"unknown system {self.system!r}")
        if self.slots < 0 or self.warmup < 0 or self.slots < self.warmup:
            raise ValueError("need slots >= warmup >= 0")


@dataclass(frozen=True)
class SimState:
    """Queue lengths, counters, and stream position for stepwise runs.

    The random streams are indexed by slot number, so the state needs no
    generator object: the master seed plus the slot counter addresses
    every draw.  Folding `step` over an empty state reproduces `run`
    slot for slot.
    """

    seed: int
    slot: int = 0
    lengths: tuple[int, int, int, int, int] = (0, 0, 0, 0, 0)
    arrivals: tuple[int, int, int, int, int] = (0, 0, 0, 0, 0)
    departures: tuple[int, int, int, int, int] = (0, 0, 0, 0, 0)
    busy: tuple[int, int, int, int, int] = (0, 0, 0, 0, 0)

    def __post_init__(self) -> None:
        if any(q < 0 for q in self.lengths):
            raise ValueError("queue lengths must be non-negative")
        if any(d > a for a, d in zip(self.arrivals, self.departures)):
            raise ValueError("departures cannot exceed arrivals")


@dataclass(frozen=True)
class SimOutcome:
    """Counters and estimates from one run (warmup slots excluded).

    service_rate is departures per slot in which the queue held a packet
    at its decision instant; throughput is departures per counted slot;
    opportunity_rate for the cognitive-side queues is the fraction of
    slots in which the queue was scheduled and its link succeeded,
    regardless of queue contents (for the licensed queues it equals
    service_rate).  Rates are NaN when their denominator is zero.
    """

    system: str
    slots: int
    warmup: int
    counted: int
    seed: int
    status: str                      # "ok" | "no_data"
    arrivals: dict[str, int]
    departures: dict[str, int]
    busy: dict[str, int]
    throughput: dict[str, float]
    service_rate: dict[str, float]
    opportunity_rate: dict[str, float]
    pi_p1: float
    pi_p2: float
    verdicts: dict[str, str]
    final_lengths: dict[str, int]


@njit(cache=True)
def _core(slots, warmup,
          lam_p1, lam_p2, lam_s, alpha1, alpha2,
          p_d1, p_d2, p_ps1, p_ps2, p_r1, p_r2, p_w1, p_w2, p_w,
          eta_c1, eta_c2, eta_c3, a_s1, a_s2, system_id,
          u_arr1, u_arr2, u_arrs,
          u_d1, u_d2, u_ps1, u_ps2, u_r1, u_r2, u_sd,
          u_eta, u_a1, u_a2, u_adm1, u_adm2,
          counts, qsamp, sample_every,
          q1, q2, qs, r1, r2):
    si = 0
    nsamp = qsamp.shape[1]
    for t in range(slots):
        rec = t >= warmup
        # exogenous arrivals, available in the same slot
        if u_arr1[t] < lam_p1:
            q1 += 1
            if rec:
                counts[_ARR_P1] += 1
        if u_arr2[t] < lam_p2:
            q2 += 1
            if rec:
                counts[_ARR_P2] += 1
        if u_arrs[t] < lam_s:
            qs += 1
            if rec:
                counts[_ARR_S] += 1
        if rec:
            counts[_COUNTED] += 1

        busy1 = q1 > 0
        busy2 = q2 > 0

        # licensed transmissions; failed-but-decoded packets may be admitted
        adm1 = False
        adm2 = False
        if busy1:
            if rec:
                counts[_BUSY_P1] += 1
            if u_d1[t] < p_d1:
                q1 -= 1
                if rec:
                    counts[_DEP_P1] += 1
            elif u_ps1[t] < p_ps1 and u_adm1[t] < alpha1:
                q1 -= 1
                adm1 = True
                if rec:
                    counts[_DEP_P1] += 1
                    counts[_ARR_SR1] += 1
        elif rec:
            counts[_IDLE_P1] += 1
        if busy2:
            if rec:
                counts[_BUSY_P2] += 1
            if u_d2[t] < p_d2:
                q2 -= 1
                if rec:
                    counts[_DEP_P2] += 1
            elif u_ps2[t] < p_ps2 and u_adm2[t] < alpha2:
                q2 -= 1
                adm2 = True
                if rec:
                    counts[_DEP_P2] += 1
                    counts[_ARR_SR2] += 1
        elif rec:
            counts[_IDLE_P2] += 1

        if rec:
            if qs > 0:
                counts[_BUSY_S] += 1
            if r1 > 0:
                counts[_BUSY_SR1] += 1
            if r2 > 0:
                counts[_BUSY_SR2] += 1

        # cognitive scheduling on the sensed activity
        s_band = -1          # 0 merged, 1 band 1, 2 band 2
        serve_r1 = False
        serve_r2 = False
        if system_id == 0:
            if not busy1 and not busy2:
                u = u_eta[t]
                if u < eta_c1:
                    s_band = 0
                elif u < eta_c2:
                    serve_r1 = True
                    s_band = 2
                elif u < eta_c3:
                    serve_r2 = True
                    s_band = 1
                else:
                    serve_r1 = True
                    serve_r2 = True
            elif not busy1:
                if u_a1[t] < a_s1:
                    s_band = 1
                else:
                    serve_r1 = True
            elif not busy2:
                if u_a2[t] < a_s2:
                    s_band = 2
                else:
                    serve_r2 = True
        elif system_id == 1:
            if not busy1 and not busy2:
                if r1 > 0 and r2 > 0:
                    serve_r1 = True
                    serve_r2 = True
                elif r1 > 0:
                    serve_r1 = True
                    s_band = 2
                elif r2 > 0:
                    serve_r2 = True
                    s_band = 1
                else:
                    s_band = 0
            elif not busy1:
                if r1 > 0:
                    serve_r1 = True
                else:
                    s_band = 1
            elif not busy2:
                if r2 > 0:
                    serve_r2 = True
                else:
                    s_band = 2
        else:
            if not busy1 and not busy2:
                if r1 > 0 and r2 > 0:
                    serve_r1 = True
                    serve_r2 = True
                elif r1 > 0:
                    serve_r1 = True
                elif r2 > 0:
                    serve_r2 = True
                else:
                    s_band = 0
            elif not busy1:
                if r1 > 0:
                    serve_r1 = True
            elif not busy2:
                if r2 > 0:
                    serve_r2 = True

        # resolve cognitive transmissions (one packet per queue at most)
        if s_band >= 0:
            if s_band == 0:
                p = p_w
            elif s_band == 1:
                p = p_w1
            else:
                p = p_w2
            ok = u_sd[t] < p
            if rec:
                counts[_SCHED_S] += 1
                if ok:
                    counts[_OPP_S] += 1
            if ok and qs > 0:
                qs -= 1
                if rec:
                    counts[_DEP_S] += 1
        if serve_r1:
            ok = u_r1[t] < p_r1
            if rec:
                counts[_SCHED_SR1] += 1
                if ok:
                    counts[_OPP_SR1] += 1
            if ok and r1 > 0:
                r1 -= 1
                if rec:
                    counts[_DEP_SR1] += 1
        if serve_r2:
            ok = u_r2[t] < p_r2
            if rec:
                counts[_SCHED_SR2] += 1
                if ok:
                    counts[_OPP_SR2] += 1
            if ok and r2 > 0:
                r2 -= 1
                if rec:
                    counts[_DEP_SR2] += 1

        # packets admitted during the slot join the relaying queues now
        if adm1:
            r1 += 1
        if adm2:
            r2 += 1

        if t % sample_every == 0 and si < nsamp:
            qsamp[0, si] = q1
            qsamp[1, si] = q2
            qsamp[2, si] = qs
            qsamp[3, si] = r1
            qsamp[4, si] = r2
            si += 1

    counts[_FIN_P1] = q1
    counts[_FIN_P2] = q2
    counts[_FIN_S] = qs
    counts[_FIN_SR1] = r1
    counts[_FIN_SR2] = r2
    return si


def _stream(seed: int, name: str, n: int) -> np.ndarray:
    sid = _STREAMS.index(name)
    ss = np.random.SeedSequence(entropy=(int(seed) & (2 ** 64 - 1), sid))
    return np.random.Generator(np.random.PCG64(ss)).random(n)


def _stream_at(seed: int, name: str, slot: int) -> np.ndarray:
    """The single draw a stream yields at one slot (one double per step)."""
    sid = _STREAMS.index(name)
    bg = np.random.PCG64(np.random.SeedSequence(
        entropy=(int(seed) & (2 ** 64 - 1), sid)))
    bg.advance(slot)
    return np.random.Generator(bg).random(1)


def step(state: SimState, config: SystemConfig, policy: Policy,
         system: str = "S") -> SimState:
    """Advance the network by exactly one slot.

    Uses the same counter-indexed streams as `run`, so folding this from
    an all-empty state reproduces a warmup-free run slot for slot (at
    O(1) random-stream cost per call, but without the compiled loop's
    speed).  Counters never exclude a warmup here.
    """
    if system not in SYSTEMS:
        raise ValueError(f"unknown system {system!r}")
    probs = link_table(config)
    system_id = _SYSTEM_IDS[system]
    alpha1 = policy.alpha_sr1 if system_id == 0 else 1.0
    alpha2 = policy.alpha_sr2 if system_id == 0 else 1.0
    counts = np.zeros(_N_COUNTS, dtype=np.int64)
    qsamp = np.zeros((5, 1))
    draws = [_stream_at(state.seed, name, state.slot) for name in _STREAMS]
    _core(1, 0,
          config.lambda_p1, config.lambda_p2, config.lambda_s, alpha1, alpha2,
          probs.p1_pd1, probs.p2_pd2, probs.p1_s, probs.p2_s,
          probs.s_pd1, probs.s_pd2,
          probs.s_sd_w1, probs.s_sd_w2, probs.s_sd_w,
          policy.eta1, policy.eta1 + policy.eta2,
          policy.eta1 + policy.eta2 + policy.eta3,
          policy.a_s1, policy.a_s2, system_id,
          *draws, counts, qsamp, 1, *state.lengths)
    return SimState(
        seed=state.seed,
        slot=state.slot + 1,
        lengths=tuple(int(c) for c in counts[_FIN_P1:_FIN_SR2 + 1]),
        arrivals=tuple(a + int(c) for a, c in
                       zip(state.arrivals, counts[_ARR_P1:_ARR_SR2 + 1])),
        departures=tuple(d + int(c) for d, c in
                         zip(state.departures, counts[_DEP_P1:_DEP_SR2 + 1])),
        busy=tuple(b + int(c) for b, c in
                   zip(state.busy, counts[_BUSY_P1:_BUSY_SR2 + 1])),
    )


def _verdict(samples: np.ndarray, eps: float) -> str:
    """Classify one queue's trajectory by its late linear drift.

    Growth faster than eps packets/slot is unstable.  Otherwise the
    queue is stable if it still empties (or clearly drains); a flat,
    never-empty trajectory sits on the stability boundary and is called
    marginal.
    """
    n = samples.shape[0]
    half = samples[n // 2:]
    if half.shape[0] < 2:
        return "marginal"
    x = np.arange(half.shape[0], dtype=float)
    slope = float(np.polyfit(x, half[:, 1], 1)[0])
    spacing = float(half[1, 0] - half[0, 0]) or 1.0
    slope /= spacing
    if slope > eps:
        return "unstable"
    if (half[:, 1] == 0.0).any() or slope < -eps:
        return "stable"
    return "marginal"


def _rate(num: int, den: int) -> float:
    return num / den if den > 0 else float("nan")


def run(sim: SimConfig, drift_eps: float = DRIFT_EPS) -> SimOutcome:
    """Simulate one system for a fixed number of slots.

    Deterministic: identical SimConfig values give identical outcomes.
    The priority baselines force full admittance and ignore the access
    probabilities of the supplied policy.
    """
    cfg = sim.config
    probs = link_table(cfg)
    pol = sim.policy
    system_id = _SYSTEM_IDS[sim.system]
    if system_id == 0:
        alpha1, alpha2 = pol.alpha_sr1, pol.alpha_sr2
    else:
        alpha1 = alpha2 = 1.0
    eta_c1 = pol.eta1
    eta_c2 = pol.eta1 + pol.eta2
    eta_c3 = pol.eta1 + pol.eta2 + pol.eta3

    slots = sim.slots
    counts = np.zeros(_N_COUNTS, dtype=np.int64)
    sample_every = max(1, slots // _MAX_SAMPLES)
    nsamp = slots // sample_every + 1 if slots else 1
    qsamp = np.zeros((5, min(nsamp, _MAX_SAMPLES + 1)))

    streams = [_stream(sim.seed, name, slots) for name in _STREAMS]
    si = _core(slots, sim.warmup,
               cfg.lambda_p1, cfg.lambda_p2, cfg.lambda_s, alpha1, alpha2,
               probs.p1_pd1, probs.p2_pd2, probs.p1_s, probs.p2_s,
               probs.s_pd1, probs.s_pd2,
               probs.s_sd_w1, probs.s_sd_w2, probs.s_sd_w,
               eta_c1, eta_c2, eta_c3, pol.a_s1, pol.a_s2, system_id,
               *streams, counts, qsamp, sample_every, 0, 0, 0, 0, 0)

    counted = int(counts[_COUNTED])
    arrivals = dict(zip(QUEUES, (int(c) for c in counts[_ARR_P1:_ARR_SR2 + 1])))
    departures = dict(zip(QUEUES, (int(c) for c in counts[_DEP_P1:_DEP_SR2 + 1])))
    busy = dict(zip(QUEUES, (int(c) for c in counts[_BUSY_P1:_BUSY_SR2 + 1])))
    final = dict(zip(QUEUES, (int(c) for c in counts[_FIN_P1:_FIN_SR2 + 1])))

    slot_idx = np.arange(si) * sample_every
    verdicts = {}
    for k, name in enumerate(QUEUES):
        traj = np.column_stack([slot_idx, qsamp[k, :si]])
        verdicts[name] = _verdict(traj, drift_eps) if si >= 4 else "marginal"

    opportunity = {
        "p1": _rate(departures["p1"], busy["p1"]),
        "p2": _rate(departures["p2"], busy["p2"]),
        "s": _rate(int(counts[_OPP_S]), counted),
        "sr1": _rate(int(counts[_OPP_SR1]), counted),
        "sr2": _rate(int(counts[_OPP_SR2]), counted),
    }
    return SimOutcome(
        system=sim.system,
        slots=slots,
        warmup=sim.warmup,
        counted=counted,
        seed=sim.seed,
        status="ok" if counted > 0 else "no_data",
        arrivals=arrivals,
        departures=departures,
        busy=busy,
        throughput={q: _rate(departures[q], counted) for q in QUEUES},
        service_rate={q: _rate(departures[q], busy[q]) for q in QUEUES},
        opportunity_rate=opportunity,
        pi_p1=_rate(int(counts[_IDLE_P1]), counted),
        pi_p2=_rate(int(counts[_IDLE_P2]), counted),
        verdicts=verdicts,
        final_lengths=final,
    )


def stability_probe(config: SystemConfig, policy: Policy, lambda_s: float,
                    slots: int = 1_000_000, seed: int = 0,
                    system: str = "S", warmup: int = 10_000,
                    drift_eps: float = DRIFT_EPS) -> dict[str, str]:
    """Per-queue stability verdicts at a candidate own-traffic load."""
    cfg = SystemConfig(timing=config.timing, lambda_p1=config.lambda_p1,
                       lambda_p2=config.lambda_p2, links=config.links,
                       lambda_s=lambda_s)
    outcome = run(SimConfig(config=cfg, policy=policy, system=system,
                            slots=slots, seed=seed, warmup=warmup), drift_eps)
    return outcome.verdicts


def empirical_boundary(config: SystemConfig, system: str,
                       lambda_p1: float, lambda_p2: float,
                       policy: Policy | None = None,
                       slots: int = 1_000_000, seed: int = 0,
                       tol: float = 0.01, warmup: int = 10_000) -> float:
    """Largest own-traffic load the cognitive queue survives, by bisection.

    For the optimized system a policy must be supplied (or is computed
    on the fly); the priority baselines are policy-free.  All probes
    share one seed, so the bisection sees a common random path.  Raises
    if the licensed queues (or, for the priority baselines, the relaying
    queues) are already unstable with no cognitive traffic at all.  For
    system S the relaying queues are not gated on: its scheduling never
    looks at their contents, and an optimal policy deliberately loads
    them to the marginal point, where their drift is zero and a finite
    run cannot tell boundary wander from divergence.
    """
    from .optimizer import optimize, PrimaryInfeasible, RelayUnsatisfiable

    cfg = SystemConfig(timing=config.timing, lambda_p1=lambda_p1,
                       lambda_p2=lambda_p2, links=config.links, lambda_s=0.0)
    if system == "S" and policy is None:
        _, _, sol = optimize(cfg)
        if not sol.feasible:
            raise RelayUnsatisfiable("no feasible access policy at this load")
        policy = sol.policy
    if policy is None:
        policy = Policy.default()

    def verdicts(lam_s: float) -> dict[str, str]:
        return stability_probe(cfg, policy, lam_s, slots=slots, seed=seed,
                               system=system, warmup=warmup)

    gated = ("p1", "p2") if system == "S" else ("p1", "p2", "sr1", "sr2")
    base = verdicts(0.0)
    bad = [q for q in gated if base[q] == "unstable"]
    if bad:
        raise PrimaryInfeasible(
            f"queues {', '.join(bad)} are unstable before any cognitive traffic")

    def stable(lam_s: float) -> bool:
        return verdicts(lam_s)["s"] != "unstable"

    lo, hi = 0.0, 1.0
    if stable(hi):
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if stable(mid):
            lo = mid
        else:
            hi = mid
    return lo
