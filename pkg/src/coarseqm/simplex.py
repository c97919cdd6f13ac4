"""Dense two-phase simplex with Bland's rule.

Deterministic and dependency-free; problem sizes here stay around or
below a thousand variables, where a full-tableau method is simple and
fast enough.  Bland's entering/leaving rule precludes cycling, so the
solver terminates on every input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .exceptions import ConvergenceFailure, DimensionMismatch, LPInfeasible, LPUnbounded

__all__ = ["LPResult", "solve_lp"]


@dataclass(frozen=True)
class LPResult:
    x: np.ndarray
    value: float
    iterations: int


def _pivot_loop(T, basis, cost, eps, cap):
    """Bland-rule simplex iterations on tableau T = [A | b], in place.

    Entering: smallest index with reduced cost < -eps.  Leaving: minimum
    ratio, ties broken by smallest basic-variable index.
    """
    m = T.shape[0]
    n = T.shape[1] - 1
    iters = 0
    while True:
        reduced = cost - cost[basis] @ T[:, :n]
        candidates = np.flatnonzero(reduced < -eps)
        if candidates.size == 0:
            return iters
        j = int(candidates[0])
        col = T[:, j]
        rows = np.flatnonzero(col > eps)
        if rows.size == 0:
            raise LPUnbounded("objective unbounded below along a feasible ray")
        ratios = T[rows, n] / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + eps * (1.0 + abs(best))]
        r = int(tied[np.argmin([basis[i] for i in tied])])
        piv = T[r, j]
        T[r] /= piv
        for i in range(m):
            if i != r and T[i, j] != 0.0:
                T[i] -= T[i, j] * T[r]
        basis[r] = j
        iters += 1
        if iters > cap:
            raise ConvergenceFailure(f"simplex exceeded {cap} pivots")


def solve_lp(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None,
             nonneg: bool = True, maximize: bool = False,
             tol: Tolerances = DEFAULT_TOL) -> LPResult:
    """Solve  min (or max) c @ x  subject to A_ub x <= b_ub, A_eq x = b_eq.

    Variables are nonnegative by default; ``nonneg=False`` makes them free
    (internally split into positive and negative parts).  Raises
    LPInfeasible / LPUnbounded accordingly.
    """
    c = np.asarray(c, dtype=float).ravel()
    nvar = c.size
    rows_ub = np.zeros((0, nvar)) if A_ub is None else np.asarray(A_ub, dtype=float)
    rhs_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float).ravel()
    rows_eq = np.zeros((0, nvar)) if A_eq is None else np.asarray(A_eq, dtype=float)
    rhs_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float).ravel()
    if rows_ub.shape != (rhs_ub.size, nvar) or rows_eq.shape != (rhs_eq.size, nvar):
        raise DimensionMismatch("constraint shapes do not match variable count")

    obj = -c if maximize else c
    if nonneg:
        split = lambda M: M
        width = nvar
    else:
        split = lambda M: np.hstack([M, -M])
        width = 2 * nvar
    obj_s = split(obj[None, :]).ravel()

    n_ub = rhs_ub.size
    n_eq = rhs_eq.size
    m = n_ub + n_eq
    eps = tol.lp_pivot

    # columns: [structural | slacks]
    A = np.zeros((m, width + n_ub))
    b = np.zeros(m)
    if n_ub:
        A[:n_ub, :width] = split(rows_ub)
        A[:n_ub, width:width + n_ub] = np.eye(n_ub)
        b[:n_ub] = rhs_ub
    if n_eq:
        A[n_ub:, :width] = split(rows_eq)
        b[n_ub:] = rhs_eq
    neg = b < 0
    A[neg] *= -1.0
    b[neg] = -b[neg]
    cost = np.concatenate([obj_s, np.zeros(n_ub)])
    ncols = A.shape[1]

    slack_rows_ok = n_eq == 0 and not np.any(neg[:n_ub])
    if slack_rows_ok:
        # b >= 0 with only inequalities: the slack basis is feasible as is
        T = np.hstack([A, b[:, None]])
        basis = list(range(width, width + n_ub))
        iters = _pivot_loop(T, basis, cost, eps, tol.lp_iteration_cap)
    else:
        # Phase 1: minimize the sum of artificial variables
        art = np.eye(m)
        T = np.hstack([A, art, b[:, None]])
        basis = list(range(ncols, ncols + m))
        cost1 = np.concatenate([np.zeros(ncols), np.ones(m)])
        iters = _pivot_loop(T, basis, cost1, eps, tol.lp_iteration_cap)
        scale = 1.0 + abs(b).max() if m else 1.0
        value1 = cost1[basis] @ T[:, -1]
        if value1 > 1e-8 * scale:
            raise LPInfeasible(f"phase-1 optimum {value1:.3e} > 0: no feasible point")
        # drive artificials out of the basis; drop rows that prove redundant
        keep = np.ones(m, dtype=bool)
        for r in range(m):
            if basis[r] >= ncols:
                pivots = np.flatnonzero(np.abs(T[r, :ncols]) > eps)
                if pivots.size:
                    j = int(pivots[0])
                    T[r] /= T[r, j]
                    for i in range(m):
                        if i != r and T[i, j] != 0.0:
                            T[i] -= T[i, j] * T[r]
                    basis[r] = j
                else:
                    keep[r] = False
        T = np.hstack([T[keep, :ncols], T[keep, -1:]])
        basis = [basis[r] for r in range(m) if keep[r]]
        iters += _pivot_loop(T, basis, cost, eps, tol.lp_iteration_cap)

    full = np.zeros(ncols)
    full[basis] = T[:, -1]
    if nonneg:
        x = full[:nvar]
    else:
        x = full[:nvar] - full[nvar:2 * nvar]
    value = float(c @ x)
    return LPResult(x, value, iters)
