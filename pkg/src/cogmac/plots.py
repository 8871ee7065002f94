"""Render stability-region sweeps to figure files next to their CSVs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .region import RegionPoint

_STYLES = {
    ("S", "analytic"): dict(color="tab:blue", linestyle="-", marker="o"),
    ("S", "empirical"): dict(color="tab:blue", linestyle="--", marker="x"),
    ("S1", "empirical"): dict(color="tab:orange", linestyle="--", marker="s"),
    ("S2", "empirical"): dict(color="tab:green", linestyle="--", marker="^"),
}


def plot_region(points: list[RegionPoint], path: str | Path,
                title: str | None = None) -> Path:
    """Draw one boundary curve per (system, mode, lambda_p2) and save it."""
    groups: dict[tuple, list[RegionPoint]] = {}
    for pt in points:
        groups.setdefault((pt.system, pt.mode, pt.lambda_p2), []).append(pt)
    many_lam2 = len({k[2] for k in groups}) > 1

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for (system, mode, lam2), pts in sorted(groups.items()):
        pts = sorted(pts, key=lambda p: p.lambda_p1)
        xs = [p.lambda_p1 for p in pts]
        ys = [p.lambda_s_max if p.feasible else 0.0 for p in pts]
        label = f"{system} ({mode})"
        if many_lam2:
            label += f", lam_p2={lam2:g}"
        style = dict(_STYLES.get((system, mode), {"linestyle": ":"}))
        if many_lam2:
            style.pop("color", None)
        ax.plot(xs, ys, label=label, markersize=4, **style)
    ax.set_xlabel("licensed user 1 arrival rate (packets/slot)")
    ax.set_ylabel("max stable cognitive arrival rate (packets/slot)")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.4)
    ax.legend(fontsize=8)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out
