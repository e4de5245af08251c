"""Dense two-phase primal simplex for small LPs with free variables.

Problems are stated as: minimize c.x subject to A x >= b, x free.  Free
variables are split into positive parts, >= rows get surplus columns, and
phase one drives an artificial basis to feasibility.  Entering columns are
picked by the most negative reduced cost; after a run of degenerate pivots
the rule switches to Bland's, which guarantees termination.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg.blas import dger

PIVOT_TOL = 1e-10
FEAS_TOL = 1e-9
BLAND_AFTER_DEGENERATE = 40


class SimplexStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration_limit"


@dataclass
class LinearProgram:
    """min objective.x  s.t.  lhs @ x >= rhs, x free."""

    objective: np.ndarray  # (n,)
    lhs: np.ndarray  # (m, n)
    rhs: np.ndarray  # (m,)

    @property
    def num_vars(self) -> int:
        return self.objective.shape[0]

    @property
    def num_constraints(self) -> int:
        return self.rhs.shape[0]


@dataclass
class LpSolution:
    status: SimplexStatus
    values: np.ndarray | None
    objective: float | None
    pivots: int


def format_lp(lp: LinearProgram) -> str:
    """Plain-text tableau listing, one constraint per line (debug aid)."""
    lines = ["min " + " ".join(f"{v:g}" for v in lp.objective)]
    for row, b in zip(lp.lhs, lp.rhs):
        lines.append(" ".join(f"{v:g}" for v in row) + f" >= {b:g}")
    return "\n".join(lines) + "\n"


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    # rank-1 update in place; T is Fortran-ordered so BLAS can work directly
    dger(-1.0, factors, np.ascontiguousarray(T[row]), a=T, overwrite_a=1)


def _run_phase(
    T: np.ndarray,
    basis: list[int],
    allowed: np.ndarray,
    max_iter: int,
    pivot_tol: float,
) -> tuple[SimplexStatus, int]:
    m = T.shape[0] - 1
    pivots = 0
    degenerate_run = 0
    while pivots < max_iter:
        z = T[-1, :-1]
        candidates = np.flatnonzero(allowed & (z < -pivot_tol))
        if candidates.size == 0:
            return SimplexStatus.OPTIMAL, pivots
        if degenerate_run > BLAND_AFTER_DEGENERATE:
            col = int(candidates[0])
        else:
            col = int(candidates[np.argmin(z[candidates])])
        coefs = T[:m, col]
        rows = np.flatnonzero(coefs > pivot_tol)
        if rows.size == 0:
            return SimplexStatus.UNBOUNDED, pivots
        ratios = T[rows, -1] / coefs[rows]
        best = ratios.min()
        # tie-break the leaving row on the smallest basis index (Bland)
        tied = rows[ratios <= best + pivot_tol]
        row = int(min(tied, key=lambda i: basis[i]))
        degenerate_run = degenerate_run + 1 if best <= pivot_tol else 0
        _pivot(T, row, col)
        basis[row] = col
        pivots += 1
    return SimplexStatus.ITERATION_LIMIT, pivots


def simplex_solve(
    lp: LinearProgram,
    tol: float = FEAS_TOL,
    pivot_tol: float = PIVOT_TOL,
    max_iter: int | None = None,
) -> LpSolution:
    m, n = lp.lhs.shape
    if max_iter is None:
        max_iter = 100 * (m + n)

    n2 = 2 * n  # x = x_pos - x_neg
    art_rows = [i for i in range(m) if lp.rhs[i] >= 0]
    n_art = len(art_rows)
    total = n2 + m + n_art

    T = np.zeros((m + 1, total + 1), order="F")
    basis = [0] * m
    art_cols: list[int] = []
    next_art = n2 + m
    for i in range(m):
        row = lp.lhs[i]
        b = lp.rhs[i]
        if b < 0:
            # negate so the rhs is nonnegative; the surplus becomes a slack
            T[i, :n] = -row
            T[i, n:n2] = row
            T[i, n2 + i] = 1.0
            T[i, -1] = -b
            basis[i] = n2 + i
        else:
            T[i, :n] = row
            T[i, n:n2] = -row
            T[i, n2 + i] = -1.0
            T[i, -1] = b
            T[i, next_art] = 1.0
            basis[i] = next_art
            art_cols.append(next_art)
            next_art += 1

    allowed = np.ones(total, dtype=bool)
    is_art = np.zeros(total, dtype=bool)
    is_art[art_cols] = True

    # phase one: minimize the artificial mass
    for i in range(m):
        if is_art[basis[i]]:
            T[-1] -= T[i]
    T[-1, art_cols] = 0.0

    status, pivots = _run_phase(T, basis, allowed, max_iter, pivot_tol)
    if status is not SimplexStatus.OPTIMAL:
        return LpSolution(status, None, None, pivots)
    if -T[-1, -1] > tol:
        return LpSolution(SimplexStatus.INFEASIBLE, None, None, pivots)

    # drive any remaining artificials out of the basis
    for i in range(m):
        if is_art[basis[i]]:
            nz = np.flatnonzero(np.abs(T[i, :n2 + m]) > pivot_tol)
            if nz.size:
                _pivot(T, i, int(nz[0]))
                basis[i] = int(nz[0])
                pivots += 1
            # else: redundant row, the artificial stays basic at level zero
    allowed &= ~is_art

    # phase two: the real objective in terms of the current basis
    c_full = np.zeros(total)
    c_full[:n] = lp.objective
    c_full[n:n2] = -lp.objective
    T[-1, :-1] = c_full
    T[-1, -1] = 0.0
    for i in range(m):
        if c_full[basis[i]] != 0.0:
            T[-1] -= c_full[basis[i]] * T[i]

    status, p2 = _run_phase(T, basis, allowed, max_iter - pivots, pivot_tol)
    pivots += p2
    if status is not SimplexStatus.OPTIMAL:
        return LpSolution(status, None, None, pivots)

    full = np.zeros(total)
    for i in range(m):
        full[basis[i]] = T[i, -1]
    x = full[:n] - full[n:n2]
    return LpSolution(SimplexStatus.OPTIMAL, x, float(lp.objective @ x), pivots)
