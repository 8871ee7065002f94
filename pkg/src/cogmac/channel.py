"""Link-level model: spectral efficiencies and outage success probabilities.

Two licensed users occupy orthogonal bands; a cognitive user senses both
bands and can transmit on either one or on their aggregate.  Every
transmission is characterized by the probability that its link is not in
outage at the spectral efficiency implied by the packet size, the
transmission time, and the occupied bandwidth.  A link is either
parametric (Rayleigh block fading with channel-gain variance sigma^2 and
mean unit-gain SNR gamma) or pinned to fixed per-bandwidth success
probabilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

BAND_1 = "W_p1"
BAND_2 = "W_p2"
BAND_MERGED = "W"

#: The seven directed links of the network, keyed transmitter_receiver.
LINK_NAMES = ("p1_pd1", "p2_pd2", "p1_s", "p2_s", "s_pd1", "s_pd2", "s_sd")

#: Band each single-band link occupies (s_sd may use any of the three).
_LINK_BAND = {
    "p1_pd1": BAND_1,
    "p2_pd2": BAND_2,
    "p1_s": BAND_1,
    "p2_s": BAND_2,
    "s_pd1": BAND_1,
    "s_pd2": BAND_2,
}


@dataclass(frozen=True)
class LinkModel:
    """One directed radio link.

    Either ``sigma2``/``gamma`` are given (Rayleigh fading, success
    probability computed from the spectral efficiency) or ``success``
    maps bandwidth tags to fixed probabilities asserted by the user.
    """

    sigma2: float | None = None
    gamma: float | None = None
    success: Mapping[str, float] | None = None

    def __post_init__(self) -> None:
        if self.success is not None:
            if self.sigma2 is not None or self.gamma is not None:
                raise ValueError("link is either parametric or direct, not both")
            for band, p in self.success.items():
                if band not in (BAND_1, BAND_2, BAND_MERGED):
                    raise ValueError(f"unknown bandwidth tag {band!r}")
                if not 0.0 <= p <= 1.0:
                    raise ValueError(f"success probability {p} outside [0, 1]")
        else:
            if self.sigma2 is None or self.gamma is None:
                raise ValueError("parametric link needs both sigma2 and gamma")
            if self.sigma2 <= 0.0 or self.gamma <= 0.0:
                raise ValueError("sigma2 and gamma must be positive")

    @property
    def is_direct(self) -> bool:
        return self.success is not None


@dataclass(frozen=True)
class TimingConfig:
    """Slot/sensing durations, bandwidths, and packet sizes."""

    T: float
    tau: float
    W_p1: float
    W_p2: float
    b_p1: float
    b_p2: float
    b_s: float

    def __post_init__(self) -> None:
        if not 0.0 < self.tau < self.T:
            raise ValueError("sensing time must satisfy 0 < tau < T")
        if self.W_p1 <= 0.0 or self.W_p2 <= 0.0:
            raise ValueError("bandwidths must be positive")
        if self.b_p1 <= 0.0 or self.b_p2 <= 0.0 or self.b_s <= 0.0:
            raise ValueError("packet sizes must be positive")

    @property
    def W(self) -> float:
        """Aggregate bandwidth available when both bands are idle."""
        return self.W_p1 + self.W_p2


@dataclass(frozen=True)
class SystemConfig:
    """One complete scenario: timing, arrival rates, and all seven links."""

    timing: TimingConfig
    lambda_p1: float
    lambda_p2: float
    links: Mapping[str, LinkModel]
    lambda_s: float = 0.0

    def __post_init__(self) -> None:
        for name, lam in (
            ("lambda_p1", self.lambda_p1),
            ("lambda_p2", self.lambda_p2),
            ("lambda_s", self.lambda_s),
        ):
            if not 0.0 <= lam <= 1.0:
                raise ValueError(f"{name}={lam} outside [0, 1] packets/slot")
        missing = [n for n in LINK_NAMES if n not in self.links]
        if missing:
            raise ValueError(f"missing links: {', '.join(missing)}")
        unknown = [n for n in self.links if n not in LINK_NAMES]
        if unknown:
            raise ValueError(f"unknown links: {', '.join(unknown)}")


@dataclass(frozen=True)
class SuccessProbs:
    """The nine per-transmission success probabilities the rate formulas use."""

    p1_pd1: float
    p2_pd2: float
    p1_s: float
    p2_s: float
    s_pd1: float
    s_pd2: float
    s_sd_w1: float
    s_sd_w2: float
    s_sd_w: float


def spectral_efficiency(bits: float, duration: float, bandwidth: float) -> float:
    """Spectral efficiency in bits/sec/Hz of a fixed-size packet.

    Parameters
    ----------
    bits : packet size in bits
    duration : transmission time in seconds (full slot for the licensed
        users, slot minus sensing time for the cognitive user)
    bandwidth : occupied bandwidth in Hz
    """
    if bits <= 0.0 or duration <= 0.0 or bandwidth <= 0.0:
        raise ValueError("bits, duration and bandwidth must all be positive")
    return bits / (duration * bandwidth)


def success_prob(rate: float, sigma2: float, gamma: float) -> float:
    """Probability a Rayleigh-fading link supports `rate` bits/sec/Hz.

    The link succeeds when log2(1 + gamma*|h|^2) exceeds the rate, with
    |h|^2 exponentially distributed with mean sigma2, which gives
    exp(-(2**rate - 1) / (sigma2 * gamma)).
    """
    if rate < 0.0:
        raise ValueError("rate must be non-negative")
    if sigma2 <= 0.0 or gamma <= 0.0:
        raise ValueError("sigma2 and gamma must be positive")
    return math.exp(-(2.0 ** rate - 1.0) / (sigma2 * gamma))


def _link_success(link: LinkModel, band: str, bits: float, duration: float,
                  bandwidth: float) -> float:
    if link.is_direct:
        assert link.success is not None
        if band not in link.success:
            raise ValueError(f"direct link lacks a probability for band {band!r}")
        return link.success[band]
    rate = spectral_efficiency(bits, duration, bandwidth)
    return success_prob(rate, link.sigma2, link.gamma)


def link_table(config: SystemConfig) -> SuccessProbs:
    """Evaluate every success probability used by the rate formulas.

    Licensed transmissions occupy the full slot; cognitive transmissions
    occupy the slot minus the sensing time.  Relayed packets keep their
    original size, so the cognitive-to-licensed-destination links carry
    b_p1/b_p2 bits while the cognitive user's own link carries b_s bits
    over whichever of the three bandwidths is in use.
    """
    t = config.timing
    t_sec = t.T - t.tau
    links = config.links
    return SuccessProbs(
        p1_pd1=_link_success(links["p1_pd1"], BAND_1, t.b_p1, t.T, t.W_p1),
        p2_pd2=_link_success(links["p2_pd2"], BAND_2, t.b_p2, t.T, t.W_p2),
        p1_s=_link_success(links["p1_s"], BAND_1, t.b_p1, t.T, t.W_p1),
        p2_s=_link_success(links["p2_s"], BAND_2, t.b_p2, t.T, t.W_p2),
        s_pd1=_link_success(links["s_pd1"], BAND_1, t.b_p1, t_sec, t.W_p1),
        s_pd2=_link_success(links["s_pd2"], BAND_2, t.b_p2, t_sec, t.W_p2),
        s_sd_w1=_link_success(links["s_sd"], BAND_1, t.b_s, t_sec, t.W_p1),
        s_sd_w2=_link_success(links["s_sd"], BAND_2, t.b_s, t_sec, t.W_p2),
        s_sd_w=_link_success(links["s_sd"], BAND_MERGED, t.b_s, t_sec, t.W),
    )
