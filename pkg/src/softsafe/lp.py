"""Small dense linear programs.

    maximize c @ x   subject to   A @ x <= b,   x free

solved with a two-phase tableau simplex using Bland's rule, so degenerate
problems (common for polyhedra through the origin) cannot cycle. Sized for
the redundancy and inclusion checks of low-dimensional polyhedra: a few
dozen constraints in a handful of variables.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

PIVOT_TOL = 1e-11


@dataclass
class LPResult:
    status: str
    x: Optional[np.ndarray] = None
    value: Optional[float] = None

    @property
    def optimal(self):
        return self.status == OPTIMAL


def _pivot(T, row, col):
    T[row] /= T[row, col]
    column = T[:, col].copy()
    column[row] = 0.0
    nz = np.flatnonzero(column)
    if nz.size:
        T[nz] -= np.outer(column[nz], T[row])


def _price_out(T, basis, cost):
    """Objective row of reduced costs for ``cost`` given the current basis."""
    obj = np.zeros(T.shape[1])
    obj[: len(cost)] = cost
    for i, j in enumerate(basis):
        if obj[j] != 0.0:
            obj -= obj[j] * T[i]
    return obj


def _minimize(T, obj, basis, n_allowed):
    """Run simplex iterations in place. Returns False if unbounded.

    ``T`` holds the constraint rows [M | r]; ``obj`` the reduced-cost row with
    the negated objective value in its last entry. Only the first
    ``n_allowed`` columns may enter the basis.
    """
    m = T.shape[0]
    while True:
        entering = -1
        for j in range(n_allowed):
            if obj[j] < -PIVOT_TOL:
                entering = j
                break
        if entering < 0:
            return True
        col = T[:, entering]
        best_row, best_ratio = -1, np.inf
        for i in range(m):
            if col[i] > PIVOT_TOL:
                ratio = T[i, -1] / col[i]
                if ratio < best_ratio - 1e-14 or (
                    abs(ratio - best_ratio) <= 1e-14 and basis[i] < basis[best_row]
                ):
                    best_row, best_ratio = i, ratio
        if best_row < 0:
            return False
        _pivot(T, best_row, entering)
        obj -= obj[entering] * T[best_row]
        basis[best_row] = entering


def linprog_max(c, A, b, feas_tol=1e-9):
    """Maximize ``c @ x`` over ``{x | A x <= b}`` with ``x`` unrestricted."""
    c = np.asarray(c, dtype=float).ravel()
    A = np.asarray(A, dtype=float).reshape(-1, c.size)
    b = np.asarray(b, dtype=float).ravel()
    m, n = A.shape
    if m == 0:
        if np.any(c != 0.0):
            return LPResult(UNBOUNDED)
        return LPResult(OPTIMAL, np.zeros(n), 0.0)

    # x = xp - xn, slack s >= 0:  [A, -A, I] [xp; xn; s] = b
    M = np.hstack([A, -A, np.eye(m)])
    r = b.copy()
    flip = r < 0.0
    M[flip] *= -1.0
    r[flip] *= -1.0
    n_struct = M.shape[1]
    art_rows = np.flatnonzero(flip)
    art = np.zeros((m, art_rows.size))
    art[art_rows, np.arange(art_rows.size)] = 1.0

    T = np.hstack([M, art, r[:, None]])
    basis = [2 * n + i for i in range(m)]
    for k, i in enumerate(art_rows):
        basis[i] = n_struct + k

    scale = max(1.0, float(np.max(np.abs(r))))
    if art_rows.size:
        cost1 = np.zeros(n_struct + art_rows.size)
        cost1[n_struct:] = 1.0
        obj = _price_out(T, basis, cost1)
        _minimize(T, obj, basis, n_struct + art_rows.size)
        if -obj[-1] > feas_tol * scale:
            return LPResult(INFEASIBLE)
        # drive zero-level artificials out of the basis, dropping dependent rows
        keep = np.ones(m, dtype=bool)
        for i in range(m):
            if basis[i] >= n_struct:
                candidates = np.flatnonzero(np.abs(T[i, :n_struct]) > PIVOT_TOL)
                if candidates.size:
                    _pivot(T, i, candidates[0])
                    basis[i] = int(candidates[0])
                else:
                    keep[i] = False
        T = T[keep]
        basis = [j for j, k in zip(basis, keep) if k]

    T = np.hstack([T[:, :n_struct], T[:, -1:]])
    cost2 = np.concatenate([-c, c, np.zeros(m)])
    obj = _price_out(T, basis, cost2)
    if not _minimize(T, obj, basis, n_struct):
        return LPResult(UNBOUNDED)

    z = np.zeros(n_struct)
    for i, j in enumerate(basis):
        z[j] = T[i, -1]
    x = z[:n] - z[n:2 * n]
    return LPResult(OPTIMAL, x, float(c @ x))


def is_feasible(A, b, feas_tol=1e-9):
    A = np.asarray(A, dtype=float)
    return linprog_max(np.zeros(A.shape[1]), A, b, feas_tol).status != INFEASIBLE
