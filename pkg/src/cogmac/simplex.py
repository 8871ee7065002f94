"""Dense two-phase primal simplex for small linear programs.

Maximizes c.x subject to A_ub x <= b_ub, A_eq x = b_eq, x >= 0.  Entering
and leaving variables follow Bland's smallest-index rule, so degenerate
bases cannot cycle.  Built for the six-variable access-policy programs in
this package; everything is dense and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_PIVOT_TOL = 1e-10


@dataclass(frozen=True)
class SimplexResult:
    status: str
    x: np.ndarray | None
    objective: float


def _pivot(tableau: np.ndarray, basis: list[int], row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    for i in range(tableau.shape[0]):
        if i != row and tableau[i, col] != 0.0:
            tableau[i] -= tableau[i, col] * tableau[row]
    basis[row] = col


def _iterate(tableau: np.ndarray, basis: list[int], ncols: int,
             tol: float) -> str:
    """Run simplex pivots until optimal or unbounded (Bland's rule)."""
    m = tableau.shape[0] - 1
    while True:
        entering = -1
        for j in range(ncols):
            if tableau[-1, j] < -tol:
                entering = j
                break
        if entering < 0:
            return OPTIMAL
        leaving = -1
        best_ratio = np.inf
        for i in range(m):
            a = tableau[i, entering]
            if a > _PIVOT_TOL:
                ratio = tableau[i, -1] / a
                if (ratio < best_ratio - _PIVOT_TOL
                        or (abs(ratio - best_ratio) <= _PIVOT_TOL
                            and (leaving < 0 or basis[i] < basis[leaving]))):
                    best_ratio = ratio
                    leaving = i
        if leaving < 0:
            return UNBOUNDED
        _pivot(tableau, basis, leaving, entering)


def solve_max(c: np.ndarray,
              a_ub: np.ndarray | None = None,
              b_ub: np.ndarray | None = None,
              a_eq: np.ndarray | None = None,
              b_eq: np.ndarray | None = None,
              tol: float = 1e-9) -> SimplexResult:
    """Maximize c.x over the polyhedron {A_ub x <= b_ub, A_eq x = b_eq, x >= 0}.

    Returns a vertex solution when one exists; status is "infeasible" or
    "unbounded" otherwise (with x unset).
    """
    c = np.asarray(c, dtype=float)
    n = c.size
    a_ub = np.zeros((0, n)) if a_ub is None else np.atleast_2d(np.asarray(a_ub, dtype=float))
    b_ub = np.zeros(0) if b_ub is None else np.atleast_1d(np.asarray(b_ub, dtype=float))
    a_eq = np.zeros((0, n)) if a_eq is None else np.atleast_2d(np.asarray(a_eq, dtype=float))
    b_eq = np.zeros(0) if b_eq is None else np.atleast_1d(np.asarray(b_eq, dtype=float))
    m_ub, m_eq = a_ub.shape[0], a_eq.shape[0]
    m = m_ub + m_eq

    # Rows in standard form A x (+ slack) = b with b >= 0.
    rows = np.vstack([a_ub, a_eq])
    rhs = np.concatenate([b_ub, b_eq])
    slack_sign = np.concatenate([np.ones(m_ub), np.zeros(m_eq)])
    flip = rhs < 0.0
    rows[flip] *= -1.0
    rhs = np.abs(rhs)
    slack_sign[flip[:m_ub].nonzero()[0]] = -1.0

    # A slack can seed the basis only for an un-flipped inequality row;
    # every other row gets an artificial variable.
    needs_artificial = [i for i in range(m) if i >= m_ub or slack_sign[i] < 0.0]
    n_art = len(needs_artificial)
    ncols = n + m_ub + n_art

    tableau = np.zeros((m + 1, ncols + 1))
    tableau[:m, :n] = rows
    tableau[:m, -1] = rhs
    basis: list[int] = [0] * m
    for i in range(m_ub):
        tableau[i, n + i] = slack_sign[i]
        if slack_sign[i] > 0.0:
            basis[i] = n + i
    for k, i in enumerate(needs_artificial):
        tableau[i, n + m_ub + k] = 1.0
        basis[i] = n + m_ub + k

    # Phase 1: minimize the sum of artificials.
    if n_art:
        tableau[-1, n + m_ub:ncols] = 1.0
        for i in needs_artificial:
            tableau[-1] -= tableau[i]
        status = _iterate(tableau, basis, ncols, tol)
        if status != OPTIMAL or -tableau[-1, -1] > tol:
            return SimplexResult(INFEASIBLE, None, np.nan)
        # Drive leftover artificials out of the basis or drop their rows.
        keep = np.ones(m + 1, dtype=bool)
        for i in range(m):
            if basis[i] >= n + m_ub:
                pivot_col = -1
                for j in range(n + m_ub):
                    if abs(tableau[i, j]) > _PIVOT_TOL:
                        pivot_col = j
                        break
                if pivot_col >= 0:
                    _pivot(tableau, basis, i, pivot_col)
                else:
                    keep[i] = False
        if not keep.all():
            tableau = tableau[keep]
            basis = [b for i, b in enumerate(basis) if keep[i]]
            m = len(basis)
        tableau = np.delete(tableau, np.s_[n + m_ub:ncols], axis=1)
        ncols = n + m_ub

    # Phase 2: minimize -c.x.
    tableau[-1, :] = 0.0
    tableau[-1, :n] = -c
    for i in range(m):
        if basis[i] < n and tableau[-1, basis[i]] != 0.0:
            tableau[-1] -= tableau[-1, basis[i]] * tableau[i]
    status = _iterate(tableau, basis, ncols, tol)
    if status == UNBOUNDED:
        return SimplexResult(UNBOUNDED, None, np.inf)

    x = np.zeros(n)
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tableau[i, -1]
    return SimplexResult(OPTIMAL, x, float(c @ x))
