"""Analytic mean service/arrival rates and queue-emptiness probabilities.

The network runs five queues: one per licensed (primary) user, the
cognitive user's own queue, and two relaying queues that buffer licensed
packets the cognitive user accepted after a failed direct transmission.
All first-moment rates below are per-slot probabilities, evaluated for a
fixed access policy under the stationary independence of the two
licensed queues (they occupy orthogonal bands).
"""

from __future__ import annotations

from dataclasses import dataclass

from .channel import SystemConfig, SuccessProbs, link_table

#: Absolute slack tolerated before a computed probability is a formula bug.
PROB_TOL = 1e-12


class UnstableQueue(RuntimeError):
    """A queue's arrival rate exceeds its service rate."""

    def __init__(self, queue: str, arrival: float, service: float):
        self.queue = queue
        self.arrival = arrival
        self.service = service
        super().__init__(
            f"{queue} unstable: arrival {arrival:.6f} > service {service:.6f}"
        )


def _checked_prob(value: float, what: str) -> float:
    if value < -PROB_TOL or value > 1.0 + PROB_TOL:
        raise ValueError(f"{what} = {value!r} outside [0, 1] beyond tolerance")
    return min(max(value, 0.0), 1.0)


@dataclass(frozen=True)
class Policy:
    """The cognitive user's decision variables.

    alpha_sr1/alpha_sr2 admit undelivered licensed packets into the
    relaying queues.  When exactly one band is idle the cognitive user
    sends its own packet with probability a_sm, else a relayed one
    (a_sm + a_srm = 1).  When both bands are idle it picks one of four
    exhaustive schedules: own packet on the merged band (eta1), own
    packet plus relayed packet split across the bands (eta2, eta3), or
    both relaying queues at once (eta4); the etas sum to one.
    """

    alpha_sr1: float
    alpha_sr2: float
    a_s1: float
    a_sr1: float
    a_s2: float
    a_sr2: float
    eta1: float
    eta2: float
    eta3: float
    eta4: float

    def __post_init__(self) -> None:
        for name in ("alpha_sr1", "alpha_sr2", "a_s1", "a_sr1", "a_s2",
                     "a_sr2", "eta1", "eta2", "eta3", "eta4"):
            v = getattr(self, name)
            if not -1e-9 <= v <= 1.0 + 1e-9:
                raise ValueError(f"policy field {name}={v} outside [0, 1]")
        if abs(self.a_s1 + self.a_sr1 - 1.0) > 1e-9:
            raise ValueError("a_s1 + a_sr1 must equal 1")
        if abs(self.a_s2 + self.a_sr2 - 1.0) > 1e-9:
            raise ValueError("a_s2 + a_sr2 must equal 1")
        eta_sum = self.eta1 + self.eta2 + self.eta3 + self.eta4
        if abs(eta_sum - 1.0) > 1e-9:
            raise ValueError(f"etas must sum to 1, got {eta_sum!r}")

    @classmethod
    def of(cls, alpha_sr1: float, alpha_sr2: float, a_s1: float, a_s2: float,
           eta1: float, eta2: float, eta3: float, eta4: float) -> "Policy":
        """Build a policy, filling in the complementary access probabilities."""
        return cls(alpha_sr1, alpha_sr2, a_s1, 1.0 - a_s1, a_s2, 1.0 - a_s2,
                   eta1, eta2, eta3, eta4)

    @classmethod
    def default(cls) -> "Policy":
        """Full admittance, even split over every scheduling choice."""
        return cls.of(1.0, 1.0, 0.5, 0.5, 0.25, 0.25, 0.25, 0.25)


@dataclass(frozen=True)
class RateReport:
    """Self-consistent snapshot of all analytic rates for one policy."""

    mu_p1: float
    mu_p2: float
    pi_p1: float
    pi_p2: float
    lambda_sr1: float
    lambda_sr2: float
    mu_sr1: float
    mu_sr2: float
    mu_s: float
    relay1_stable: bool
    relay2_stable: bool
    primary1_marginal: bool
    primary2_marginal: bool

    FLOAT_FIELDS = ("mu_p1", "mu_p2", "pi_p1", "pi_p2", "lambda_sr1",
                    "lambda_sr2", "mu_sr1", "mu_sr2", "mu_s")
    FLAG_FIELDS = ("relay1_stable", "relay2_stable",
                   "primary1_marginal", "primary2_marginal")


def primary_service_rate(pbar_pd: float, pbar_ps: float, alpha: float) -> float:
    """Mean service rate of a licensed queue with relaying assistance.

    A head packet leaves when its direct link succeeds, or when the
    direct link fails, the link to the cognitive user succeeds, and the
    cognitive user admits the packet (probability alpha).  The extra
    term is non-negative, so assistance never slows a licensed user.
    """
    for name, v in (("pbar_pd", pbar_pd), ("pbar_ps", pbar_ps), ("alpha", alpha)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name}={v} outside [0, 1]")
    return pbar_pd + (1.0 - pbar_pd) * pbar_ps * alpha


def empty_prob(lam: float, mu: float, queue: str = "queue") -> float:
    """Stationary probability the queue is empty, 1 - lam/mu.

    Raises UnstableQueue when the arrival rate exceeds the service rate;
    equality is the marginally stable boundary and returns 0.
    """
    if mu <= 0.0:
        raise ValueError("service rate must be positive")
    if lam > mu + PROB_TOL:
        raise UnstableQueue(queue, lam, mu)
    # the overload check already bounds lam/mu; clamp boundary rounding
    return min(max(1.0 - lam / mu, 0.0), 1.0)


def secondary_service_rate(probs: SuccessProbs, pi_p1: float, pi_p2: float,
                           policy: Policy) -> float:
    """Mean service rate of the cognitive user's own queue.

    With both bands idle the own packet goes out on the merged band
    under eta1, on band 2 under eta2 (band 1 carries a relayed packet),
    and on band 1 under eta3.  With one idle band m it goes out there
    with probability a_sm.
    """
    both = pi_p1 * pi_p2 * (policy.eta1 * probs.s_sd_w
                            + policy.eta2 * probs.s_sd_w2
                            + policy.eta3 * probs.s_sd_w1)
    only1 = pi_p1 * (1.0 - pi_p2) * policy.a_s1 * probs.s_sd_w1
    only2 = (1.0 - pi_p1) * pi_p2 * policy.a_s2 * probs.s_sd_w2
    return _checked_prob(both + only1 + only2, "secondary service rate")


def relay_service_rate(m: int, probs: SuccessProbs, pi_p1: float,
                       pi_p2: float, policy: Policy) -> float:
    """Mean service rate of relaying queue m (1 or 2).

    Relayed packets for licensed user m are retransmitted on band m,
    which requires that band idle: with the other band busy the queue
    is picked with probability a_srm, with both idle it is scheduled
    under eta_{m+1} or eta4.
    """
    if m == 1:
        chosen = (1.0 - pi_p2) * policy.a_sr1 + pi_p2 * (policy.eta2 + policy.eta4)
        return _checked_prob(pi_p1 * chosen * probs.s_pd1, "relay-1 service rate")
    if m == 2:
        chosen = (1.0 - pi_p1) * policy.a_sr2 + pi_p1 * (policy.eta3 + policy.eta4)
        return _checked_prob(pi_p2 * chosen * probs.s_pd2, "relay-2 service rate")
    raise ValueError("relay index must be 1 or 2")


def relay_arrival_rate(m: int, probs: SuccessProbs, pi_pm: float,
                       alpha_m: float) -> float:
    """Mean arrival rate into relaying queue m.

    A relayed packet arrives when licensed user m is busy (probability
    1 - pi_pm), its direct link fails, the link to the cognitive user
    succeeds, and the admission coin (alpha_m) comes up heads.
    """
    if m == 1:
        pbar_pd, pbar_ps = probs.p1_pd1, probs.p1_s
    elif m == 2:
        pbar_pd, pbar_ps = probs.p2_pd2, probs.p2_s
    else:
        raise ValueError("relay index must be 1 or 2")
    lam = (1.0 - pbar_pd) * pbar_ps * alpha_m * (1.0 - pi_pm)
    return _checked_prob(lam, f"relay-{m} arrival rate")


def report_from_probs(probs: SuccessProbs, lambda_p1: float, lambda_p2: float,
                      policy: Policy) -> RateReport:
    """Chain the rate formulas in dependency order for given link table."""
    mu_p1 = primary_service_rate(probs.p1_pd1, probs.p1_s, policy.alpha_sr1)
    mu_p2 = primary_service_rate(probs.p2_pd2, probs.p2_s, policy.alpha_sr2)

    def _pi(lam: float, mu: float, queue: str) -> float:
        if lam == 0.0:
            return 1.0
        return empty_prob(lam, mu, queue)

    pi_p1 = _pi(lambda_p1, mu_p1, "Q_p1")
    pi_p2 = _pi(lambda_p2, mu_p2, "Q_p2")
    lambda_sr1 = relay_arrival_rate(1, probs, pi_p1, policy.alpha_sr1)
    lambda_sr2 = relay_arrival_rate(2, probs, pi_p2, policy.alpha_sr2)
    mu_sr1 = relay_service_rate(1, probs, pi_p1, pi_p2, policy)
    mu_sr2 = relay_service_rate(2, probs, pi_p1, pi_p2, policy)
    mu_s = secondary_service_rate(probs, pi_p1, pi_p2, policy)
    return RateReport(
        mu_p1=mu_p1,
        mu_p2=mu_p2,
        pi_p1=pi_p1,
        pi_p2=pi_p2,
        lambda_sr1=lambda_sr1,
        lambda_sr2=lambda_sr2,
        mu_sr1=mu_sr1,
        mu_sr2=mu_sr2,
        mu_s=mu_s,
        relay1_stable=lambda_sr1 <= mu_sr1 + PROB_TOL,
        relay2_stable=lambda_sr2 <= mu_sr2 + PROB_TOL,
        primary1_marginal=lambda_p1 > 0.0 and abs(lambda_p1 - mu_p1) <= PROB_TOL,
        primary2_marginal=lambda_p2 > 0.0 and abs(lambda_p2 - mu_p2) <= PROB_TOL,
    )


def full_report(config: SystemConfig, policy: Policy) -> RateReport:
    """Evaluate every rate for one scenario and policy.

    Raises UnstableQueue if either licensed queue cannot hold its load
    under the given admittance factors; relaying-queue overload is
    reported through the relay*_stable flags instead, because it is the
    optimizer's job to reschedule around it.
    """
    probs = link_table(config)
    return report_from_probs(probs, config.lambda_p1, config.lambda_p2, policy)
