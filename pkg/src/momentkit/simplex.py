"""Dense two-phase simplex.

Small self-contained LP solver used by every feasibility and bound
computation in the package.  All variables are free (sign-unrestricted);
they are split internally into differences of nonnegative parts, slack
variables absorb the inequality rows, and phase 1 drives a full artificial
basis to zero.

Most of our LPs sit on heavily degenerate vertices (whole blocks of zero
right-hand sides), so anti-cycling is not optional: the leaving row is
chosen by the lexicographic ratio rule, which terminates under any pricing;
entering uses Dantzig's most-negative reduced cost.  Plain smallest-index
(Bland) pricing was tried first and stalled for tens of thousands of
degenerate pivots on the grid-positivity LPs.

Deliberately dense and deliberately small: problems are capped at 500
constraint rows and 500 structural columns.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from .errors import LpFailure

FEAS_TOL = 1e-9
PIVOT_TOL = 1e-9
SIZE_CAP = 500
MAX_ITERATIONS = 50_000

_stats = threading.local()


@contextmanager
def collect_lp_stats():
    """Collect (solve count, total pivots) for every LP run in the block."""
    prev = getattr(_stats, "bucket", None)
    _stats.bucket = {"solves": 0, "iterations": 0}
    try:
        yield _stats.bucket
    finally:
        _stats.bucket = prev


def _record(iterations: int) -> None:
    bucket = getattr(_stats, "bucket", None)
    if bucket is not None:
        bucket["solves"] += 1
        bucket["iterations"] += iterations


@dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None
    objective: float | None
    iterations: int

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= np.outer(factors, T[row])


def _leaving_row(T: np.ndarray, column: np.ndarray, rows: np.ndarray,
                 scan_order: np.ndarray) -> int:
    """Min-ratio row, ties broken by the lexicographic rule.

    Rows are compared as ``T[i, scan_order] / column[i]``; with the
    right-hand side scanned first and one identity column per row early in
    the order, every row is lexicographically positive and the comparison
    has a unique winner, which makes cycling impossible.  Columns on which
    all still-active rows agree are skipped in blocks.
    """
    ratios = T[rows, -1] / column[rows]
    best = ratios.min()
    active = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
    if active.size == 1:
        return int(active[0])
    inv = 1.0 / column[active]
    chunk = 64
    for pos in range(0, scan_order.size, chunk):
        cols = scan_order[pos:pos + chunk]
        M = T[np.ix_(active, cols)] * inv[:, None]
        while True:
            lows = M.min(axis=0)
            spread = M.max(axis=0) - lows
            informative = np.nonzero(spread > 1e-15 * np.maximum(1.0, np.abs(lows)))[0]
            if informative.size == 0:
                break  # all active rows tie throughout this chunk
            j = int(informative[0])
            keep = M[:, j] <= lows[j] + 1e-15 * max(1.0, abs(lows[j]))
            active = active[keep]
            if active.size == 1:
                return int(active[0])
            M = M[keep][:, j + 1:]
            inv = inv[keep]
            if M.shape[1] == 0:
                break
    return int(active[0])


def _iterate(T: np.ndarray, basis: np.ndarray, enter_cols: int,
             scan_order: np.ndarray, budget: int) -> tuple[str, int]:
    """Pivot until optimal/unbounded; returns (status, pivots used)."""
    used = 0
    while used < budget:
        reduced = T[-1, :enter_cols]
        candidates = np.nonzero(reduced < -PIVOT_TOL)[0]
        if candidates.size == 0:
            return "optimal", used
        col = int(candidates[np.argmin(reduced[candidates])])

        column = T[:-1, col]
        rows = np.nonzero(column > PIVOT_TOL)[0]
        if rows.size == 0:
            return "unbounded", used
        row = _leaving_row(T, column, rows, scan_order)

        _pivot(T, row, col)
        basis[row] = col
        used += 1
    raise LpFailure(f"simplex did not converge within {budget} pivots")


def solve_lp(c, a_ub=None, b_ub=None, a_eq=None, b_eq=None) -> LpSolution:
    """Minimize ``c @ x`` subject to ``a_ub @ x <= b_ub`` and ``a_eq @ x == b_eq``.

    Every component of ``x`` is free.  Returns an :class:`LpSolution`; a
    solver breakdown (iteration budget, size cap) raises :class:`LpFailure`
    while infeasible/unbounded are reported as statuses.
    """
    c = np.atleast_1d(np.asarray(c, dtype=float))
    n = c.shape[0]

    def _block(a, b, name):
        if a is None:
            return np.zeros((0, n)), np.zeros(0)
        a = np.atleast_2d(np.asarray(a, dtype=float))
        b = np.atleast_1d(np.asarray(b, dtype=float))
        if a.shape != (b.shape[0], n):
            raise LpFailure(f"{name} shape mismatch: {a.shape} vs rhs {b.shape} and {n} vars")
        return a, b

    a_ub, b_ub = _block(a_ub, b_ub, "a_ub")
    a_eq, b_eq = _block(a_eq, b_eq, "a_eq")
    m_ub, m_eq = a_ub.shape[0], a_eq.shape[0]
    m = m_ub + m_eq

    n_struct = 2 * n + m_ub
    if m > SIZE_CAP or n_struct > SIZE_CAP:
        raise LpFailure(
            f"problem exceeds desk-scale cap: {m} rows, {n_struct} structural columns (max {SIZE_CAP})"
        )
    if not (np.all(np.isfinite(a_ub)) and np.all(np.isfinite(b_ub))
            and np.all(np.isfinite(a_eq)) and np.all(np.isfinite(b_eq))
            and np.all(np.isfinite(c))):
        raise LpFailure("LP data contains non-finite entries")

    # Split free variables, append slacks: columns are [x+, x-, slack].
    A = np.zeros((m, n_struct))
    A[:m_ub, :n] = a_ub
    A[:m_ub, n:2 * n] = -a_ub
    A[m_ub:, :n] = a_eq
    A[m_ub:, n:2 * n] = -a_eq
    A[:m_ub, 2 * n:] = np.eye(m_ub)
    b = np.concatenate([b_ub, b_eq])

    # Mild row equilibration keeps the fixed tolerances meaningful.
    row_scale = np.maximum(np.abs(A).max(axis=1, initial=0.0), np.abs(b))
    row_scale[row_scale < 1.0] = 1.0
    A /= row_scale[:, None]
    b = b / row_scale

    # Nonnegative right-hand side; slack columns flip sign with their row.
    flip = b < 0
    A[flip] *= -1.0
    b = np.abs(b)

    # Rows whose slack survived with +1 start basic; the rest get artificials.
    needs_art = np.ones(m, dtype=bool)
    basis = np.full(m, -1, dtype=int)
    identity_col = np.full(m, -1, dtype=int)
    for i in range(m_ub):
        if not flip[i]:
            basis[i] = identity_col[i] = 2 * n + i
            needs_art[i] = False
    art_rows = np.nonzero(needs_art)[0]
    n_art = int(art_rows.size)
    n_total = n_struct + n_art

    T = np.zeros((m + 1, n_total + 1))
    T[:m, :n_struct] = A
    T[:m, -1] = b
    for k, i in enumerate(art_rows):
        T[i, n_struct + k] = 1.0
        basis[i] = identity_col[i] = n_struct + k

    # Lexicographic scan order: per-row identity columns first (the
    # right-hand side is always compared before this order kicks in), then
    # the remaining columns by index.
    rest = [j for j in range(n_total) if j not in set(identity_col.tolist())]
    scan_order = np.array(identity_col.tolist() + rest, dtype=int)

    iterations = 0

    # Phase 1: minimize the artificial mass.
    if n_art:
        T[-1, n_struct:n_total] = 1.0
        for i in art_rows:
            T[-1] -= T[i]
        status, used = _iterate(T, basis, n_struct, scan_order, MAX_ITERATIONS)
        iterations += used
        if status != "optimal":
            raise LpFailure("phase 1 reported an unbounded artificial objective")
        if -T[-1, -1] > FEAS_TOL * max(1.0, float(np.abs(b).max(initial=0.0))):
            _record(iterations)
            return LpSolution("infeasible", None, None, iterations)
        # Pivot lingering artificials out of the basis where possible.
        keep = np.ones(m, dtype=bool)
        for i in range(m):
            if basis[i] >= n_struct:
                row = T[i, :n_struct]
                nz = np.nonzero(np.abs(row) > PIVOT_TOL)[0]
                if nz.size:
                    _pivot(T, i, int(nz[0]))
                    basis[i] = int(nz[0])
                else:
                    keep[i] = False  # redundant constraint
        if not keep.all():
            T = np.vstack([T[:m][keep], T[-1:]])
            basis = basis[keep]
            m = int(keep.sum())

    # Phase 2: price the true objective on the phase-1 basis.  Artificial
    # columns stay in the tableau (they keep rows lexicographically
    # positive) but are barred from entering.
    T[-1, :] = 0.0
    T[-1, :n] = c
    T[-1, n:2 * n] = -c
    obj_scale = max(1.0, float(np.abs(c).max(initial=0.0)))
    T[-1, :n_struct] /= obj_scale
    for i in range(m):
        if abs(T[-1, basis[i]]) > 0.0:
            T[-1] -= T[-1, basis[i]] * T[i]
    status, used = _iterate(T, basis, n_struct, scan_order, MAX_ITERATIONS - iterations)
    iterations += used
    _record(iterations)
    if status == "unbounded":
        return LpSolution("unbounded", None, None, iterations)

    full = np.zeros(n_total)
    full[basis] = T[:m, -1]
    x = full[:n] - full[n:2 * n]
    return LpSolution("optimal", x, float(c @ x), iterations)


def lp_feasible(a_ub=None, b_ub=None, a_eq=None, b_eq=None, n_vars=None) -> bool:
    """Feasibility probe: is the polyhedron nonempty?"""
    if n_vars is None:
        if a_ub is not None:
            n_vars = np.atleast_2d(np.asarray(a_ub, dtype=float)).shape[1]
        elif a_eq is not None:
            n_vars = np.atleast_2d(np.asarray(a_eq, dtype=float)).shape[1]
        else:
            return True
    sol = solve_lp(np.zeros(n_vars), a_ub, b_ub, a_eq, b_eq)
    return sol.optimal
