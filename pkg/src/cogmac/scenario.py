"""Scenario files: INI documents describing one complete system setup.

Sections:
  [timing]    T, tau, W_p1, W_p2, b_p1, b_p2, b_s
  [arrivals]  lambda_p1, lambda_p2, lambda_s (optional)
  [links]     one entry per link; value is whitespace-separated key=value
              tokens, either "sigma2=.. gamma=.." or fixed probabilities:
              "success=.." for single-band links, and for the cognitive
              user's own link the three bandwidths must be tagged
              explicitly: "success_W1=.. success_W2=.. success_W=..".
  [policy]    optional fixed access policy (alpha_sr1, alpha_sr2, a_s1,
              a_s2, eta1..eta4; a_sr1/a_sr2 may be given redundantly)
  [sim]       optional simulation defaults (slots, seed, warmup)

Unknown sections or keys are rejected so typos cannot silently change a
scenario.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from pathlib import Path

from .channel import (BAND_1, BAND_2, BAND_MERGED, LINK_NAMES, LinkModel,
                      SystemConfig, TimingConfig)
from .rates import Policy


class ScenarioError(ValueError):
    """The scenario document cannot be turned into a valid configuration."""


_TIMING_KEYS = ("T", "tau", "W_p1", "W_p2", "b_p1", "b_p2", "b_s")
_ARRIVAL_KEYS = ("lambda_p1", "lambda_p2", "lambda_s")
_POLICY_KEYS = ("alpha_sr1", "alpha_sr2", "a_s1", "a_sr1", "a_s2", "a_sr2",
                "eta1", "eta2", "eta3", "eta4")
_SIM_KEYS = ("slots", "seed", "warmup")

#: Band each single-band link's plain "success=" value refers to.
_SINGLE_BAND = {"p1_pd1": BAND_1, "p2_pd2": BAND_2, "p1_s": BAND_1,
                "p2_s": BAND_2, "s_pd1": BAND_1, "s_pd2": BAND_2}

_SSD_TAGS = {"success_W1": BAND_1, "success_W2": BAND_2, "success_W": BAND_MERGED}


@dataclass(frozen=True)
class SimSettings:
    slots: int = 1_000_000
    seed: int = 0
    warmup: int = 10_000


@dataclass(frozen=True)
class Scenario:
    """Parsed scenario: the system plus optional policy and sim defaults."""

    config: SystemConfig
    policy: Policy | None = None
    sim: SimSettings | None = None


def _floats(section: configparser.SectionProxy, allowed: tuple[str, ...],
            name: str) -> dict[str, float]:
    out = {}
    for key, raw in section.items():
        if key not in allowed:
            raise ScenarioError(f"unknown key {key!r} in section [{name}]")
        try:
            out[key] = float(raw)
        except ValueError as exc:
            raise ScenarioError(f"[{name}] {key} = {raw!r} is not a number") from exc
    return out


def _parse_link(name: str, raw: str) -> LinkModel:
    tokens = raw.split()
    kv: dict[str, float] = {}
    for token in tokens:
        if "=" not in token:
            raise ScenarioError(f"link {name}: token {token!r} is not key=value")
        key, _, value = token.partition("=")
        try:
            kv[key] = float(value)
        except ValueError as exc:
            raise ScenarioError(f"link {name}: {key} = {value!r} is not a number") from exc
    keys = set(kv)
    if keys == {"sigma2", "gamma"}:
        return LinkModel(sigma2=kv["sigma2"], gamma=kv["gamma"])
    if name == "s_sd":
        if keys == set(_SSD_TAGS):
            return LinkModel(success={band: kv[tag] for tag, band in _SSD_TAGS.items()})
        raise ScenarioError(
            "link s_sd needs sigma2+gamma or all of success_W1, success_W2, success_W")
    if keys == {"success"}:
        return LinkModel(success={_SINGLE_BAND[name]: kv["success"]})
    raise ScenarioError(
        f"link {name} needs either sigma2+gamma or success=<p>, got {sorted(keys)}")


def _parse_policy(section: configparser.SectionProxy) -> Policy:
    values = _floats(section, _POLICY_KEYS, "policy")
    required = [k for k in _POLICY_KEYS if k not in ("a_sr1", "a_sr2")]
    missing = [k for k in required if k not in values]
    if missing:
        raise ScenarioError(f"[policy] missing keys: {', '.join(missing)}")
    a_sr1 = values.get("a_sr1", 1.0 - values["a_s1"])
    a_sr2 = values.get("a_sr2", 1.0 - values["a_s2"])
    try:
        return Policy(alpha_sr1=values["alpha_sr1"], alpha_sr2=values["alpha_sr2"],
                      a_s1=values["a_s1"], a_sr1=a_sr1,
                      a_s2=values["a_s2"], a_sr2=a_sr2,
                      eta1=values["eta1"], eta2=values["eta2"],
                      eta3=values["eta3"], eta4=values["eta4"])
    except ValueError as exc:
        raise ScenarioError(f"[policy] invalid: {exc}") from exc


def parse_scenario(text: str) -> Scenario:
    """Parse a scenario document; raises ScenarioError on any defect."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keys are case-sensitive (W_p1 vs w_p1)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ScenarioError(f"syntax error: {exc}") from exc

    known = {"timing", "arrivals", "links", "policy", "sim"}
    unknown = set(parser.sections()) - known
    if unknown:
        raise ScenarioError(f"unknown sections: {', '.join(sorted(unknown))}")
    for required in ("timing", "arrivals", "links"):
        if required not in parser:
            raise ScenarioError(f"missing section [{required}]")

    timing_vals = _floats(parser["timing"], _TIMING_KEYS, "timing")
    missing = [k for k in _TIMING_KEYS if k not in timing_vals]
    if missing:
        raise ScenarioError(f"[timing] missing keys: {', '.join(missing)}")
    arrival_vals = _floats(parser["arrivals"], _ARRIVAL_KEYS, "arrivals")
    for k in ("lambda_p1", "lambda_p2"):
        if k not in arrival_vals:
            raise ScenarioError(f"[arrivals] missing key {k}")

    links = {}
    for name, raw in parser["links"].items():
        if name not in LINK_NAMES:
            raise ScenarioError(f"unknown link {name!r} in [links]")
        links[name] = _parse_link(name, raw)
    missing = [n for n in LINK_NAMES if n not in links]
    if missing:
        raise ScenarioError(f"[links] missing links: {', '.join(missing)}")

    try:
        config = SystemConfig(
            timing=TimingConfig(**timing_vals),
            lambda_p1=arrival_vals["lambda_p1"],
            lambda_p2=arrival_vals["lambda_p2"],
            lambda_s=arrival_vals.get("lambda_s", 0.0),
            links=links,
        )
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc

    policy = _parse_policy(parser["policy"]) if "policy" in parser else None

    sim = None
    if "sim" in parser:
        raw_sim = {}
        for key, raw in parser["sim"].items():
            if key not in _SIM_KEYS:
                raise ScenarioError(f"unknown key {key!r} in section [sim]")
            try:
                raw_sim[key] = int(raw)
            except ValueError as exc:
                raise ScenarioError(f"[sim] {key} = {raw!r} is not an integer") from exc
        sim = SimSettings(**raw_sim)

    return Scenario(config=config, policy=policy, sim=sim)


def load_scenario(path: str | Path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc
    return parse_scenario(text)


def bundled_scenario(name: str) -> Scenario:
    """Load one of the scenarios shipped with the package by bare name."""
    from importlib import resources

    candidate = resources.files("cogmac.scenarios").joinpath(f"{name}.ini")
    if not candidate.is_file():
        raise ScenarioError(f"no bundled scenario named {name!r}")
    return parse_scenario(candidate.read_text())


def _format_link(name: str, link: LinkModel) -> str:
    if not link.is_direct:
        return f"sigma2={link.sigma2!r} gamma={link.gamma!r}"
    assert link.success is not None
    if name == "s_sd":
        parts = [f"{tag}={link.success[band]!r}"
                 for tag, band in _SSD_TAGS.items() if band in link.success]
        return " ".join(parts)
    band = _SINGLE_BAND[name]
    return f"success={link.success[band]!r}"


def write_scenario(scenario: Scenario) -> str:
    """Render a scenario back to text; parsing the result is lossless."""
    cfg = scenario.config
    t = cfg.timing
    lines = ["[timing]"]
    for key in _TIMING_KEYS:
        lines.append(f"{key} = {getattr(t, key)!r}")
    lines += ["", "[arrivals]",
              f"lambda_p1 = {cfg.lambda_p1!r}",
              f"lambda_p2 = {cfg.lambda_p2!r}",
              f"lambda_s = {cfg.lambda_s!r}",
              "", "[links]"]
    for name in LINK_NAMES:
        lines.append(f"{name} = {_format_link(name, cfg.links[name])}")
    if scenario.policy is not None:
        p = scenario.policy
        lines += ["", "[policy]"]
        for key in _POLICY_KEYS:
            lines.append(f"{key} = {getattr(p, key)!r}")
    if scenario.sim is not None:
        lines += ["", "[sim]",
                  f"slots = {scenario.sim.slots}",
                  f"seed = {scenario.sim.seed}",
                  f"warmup = {scenario.sim.warmup}"]
    return "\n".join(lines) + "\n"
