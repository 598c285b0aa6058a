"""One-dimensional truncated moment problems.

A truncated sequence m_0..m_{2d} determines a linear functional on
polynomials of degree at most 2d through the monomials.  Positivity of that
functional on squares (and on support-weighted squares) is a symmetric
eigenvalue question about Hankel matrices; representing atomic measures are
recovered by turning the moment matrix into the three-term recurrence of
its orthogonal polynomials (Cholesky factor ratios) and diagonalizing the
resulting symmetric tridiagonal matrix, whose eigenvalues are the atoms and
whose first eigenvector components give the weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .eig import jacobi_eigh, lambda_min
from .errors import (
    BracketExhausted,
    DegreeTooHigh,
    LpFailure,
    NotPSD,
    RankDetectionAmbiguous,
)
from .simplex import solve_lp

PSD_TOL = 1e-8
RANK_PIVOT_KEEP = 1e-10
RANK_PIVOT_DROP = 1e-12
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Support:
    """Support class of the sought measure: line, halfline or interval."""

    kind: str
    a: float | None = None
    b: float | None = None

    def __post_init__(self):
        if self.kind not in ("line", "halfline", "interval"):
            raise ValueError(f"unknown support kind {self.kind!r}")
        if self.kind == "interval":
            if self.a is None or self.b is None or not (self.a < self.b):
                raise ValueError("interval support needs finite a < b")
        elif self.a is not None or self.b is not None:
            raise ValueError(f"{self.kind} support takes no endpoints")

    @classmethod
    def line(cls):
        return cls("line")

    @classmethod
    def halfline(cls):
        return cls("halfline")

    @classmethod
    def interval(cls, a: float, b: float):
        return cls("interval", float(a), float(b))

    def contains(self, x: float, tol: float = 0.0) -> bool:
        if self.kind == "line":
            return True
        if self.kind == "halfline":
            return x >= -tol
        return self.a - tol <= x <= self.b + tol


@dataclass(frozen=True)
class MomentSequence:
    """Moments m_0..m_{2d} plus the declared support class."""

    moments: tuple[float, ...]
    support: Support = field(default_factory=Support.line)

    def __post_init__(self):
        ms = tuple(float(x) for x in self.moments)
        object.__setattr__(self, "moments", ms)
        if len(ms) == 0 or len(ms) % 2 == 0:
            raise ValueError("need an odd count of moments m_0..m_{2d}")
        if not all(math.isfinite(x) for x in ms):
            raise ValueError("moments must be finite")

    @property
    def max_degree(self) -> int:
        return len(self.moments) - 1

    @property
    def d(self) -> int:
        return self.max_degree // 2

    @property
    def scale(self) -> float:
        return max(1.0, max(abs(x) for x in self.moments))

    def array(self) -> np.ndarray:
        return np.asarray(self.moments, dtype=float)


@dataclass(frozen=True)
class Poly:
    """Dense univariate polynomial, coefficients in ascending degree."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        cs = [float(c) for c in self.coeffs]
        while len(cs) > 1 and cs[-1] == 0.0:
            cs.pop()
        if not cs:
            cs = [0.0]
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(x, np.asarray(self.coeffs))

    @classmethod
    def x(cls):
        return cls((0.0, 1.0))


@dataclass(frozen=True, eq=False)
class HankelMatrix:
    """Moment matrix H[i][j] = L(w(x) x^{i+j}) for an optional weight w."""

    matrix: np.ndarray
    weight: Poly | None
    label: str

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class MatrixWitness:
    label: str
    size: int
    lambda_min: float
    witness: Poly | None  # nonnegative-on-support polynomial with negative value, when failing


@dataclass(frozen=True)
class Certificate:
    verdict: str  # "representable" | "not-representable" | "inconclusive"
    witnesses: tuple[MatrixWitness, ...]
    tol: float
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite atomic measure: strictly increasing atoms with positive weights."""

    atoms: tuple[float, ...]
    weights: tuple[float, ...]
    support: Support = field(default_factory=Support.line)

    def __post_init__(self):
        atoms = tuple(float(a) for a in self.atoms)
        weights = tuple(float(w) for w in self.weights)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)
        if len(atoms) != len(weights):
            raise ValueError("atom and weight counts differ")
        if any(not (w > 0.0) for w in weights):
            raise ValueError("weights must be strictly positive")
        if any(b <= a for a, b in zip(atoms, atoms[1:])):
            raise ValueError("atoms must be strictly increasing")

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    def moment(self, k: int) -> float:
        return float(sum(w * a**k for a, w in zip(self.atoms, self.weights)))

    def moments_to(self, degree: int) -> tuple[float, ...]:
        xs = np.asarray(self.atoms)
        ws = np.asarray(self.weights)
        return tuple(float(ws @ xs**k) for k in range(degree + 1))

    def within_support(self, tol: float = 1e-8) -> bool:
        return all(self.support.contains(a, tol) for a in self.atoms)


@dataclass(frozen=True)
class TruncationReport:
    residuals: tuple[float, ...]
    max_relative_residual: float
    through_degree: int
    tol: float
    degree_2d_residual: float

    @property
    def passed(self) -> bool:
        return self.max_relative_residual <= self.tol


@dataclass(frozen=True)
class ExtensionCandidate:
    m_next: float
    m_next_next: float
    lambda_min: float


def riesz(m: MomentSequence, p: Poly) -> float:
    """Value of the moment functional on ``p``: sum of c_k m_k."""
    if p.degree > m.max_degree:
        raise DegreeTooHigh(f"poly degree {p.degree} exceeds truncation {m.max_degree}")
    return float(sum(c * mk for c, mk in zip(p.coeffs, m.moments)))


def _hankel_array(moments: np.ndarray, size: int, weight: Poly | None = None) -> np.ndarray:
    idx = np.add.outer(np.arange(size), np.arange(size))
    if weight is None:
        return moments[idx]
    out = np.zeros((size, size))
    for k, c in enumerate(weight.coeffs):
        if c != 0.0:
            out += c * moments[idx + k]
    return out


def hankel(m: MomentSequence, size: int, weight: Poly | None = None) -> HankelMatrix:
    """Moment matrix of the given size, optionally localized by a weight."""
    if size < 1:
        raise ValueError("matrix size must be at least 1")
    top = 2 * (size - 1) + (weight.degree if weight is not None else 0)
    if top > m.max_degree:
        raise DegreeTooHigh(
            f"size-{size} matrix needs moment m_{top}, only m_0..m_{m.max_degree} available"
        )
    label = "hankel" if weight is None else f"localized[{','.join(f'{c:g}' for c in weight.coeffs)}]"
    return HankelMatrix(_hankel_array(m.array(), size, weight), weight, label)


def psd(H, tol: float = PSD_TOL):
    """Smallest eigenvalue test: ``(lambda_min >= -tol, lambda_min)``."""
    matrix = H.matrix if isinstance(H, HankelMatrix) else np.asarray(H, dtype=float)
    lam = lambda_min(matrix)
    return lam >= -tol, lam


def _support_matrices(m: MomentSequence) -> list[HankelMatrix]:
    mats = [hankel(m, m.d + 1)]
    if m.d >= 1:
        if m.support.kind == "halfline":
            mats.append(hankel(m, m.d, Poly.x()))
        elif m.support.kind == "interval":
            a, b = m.support.a, m.support.b
            # (b - x)(x - a) = -ab + (a + b) x - x^2
            mats.append(hankel(m, m.d, Poly((-a * b, a + b, -1.0))))
    return mats


def _eigvec_witness(H: HankelMatrix) -> Poly:
    """Square of the minimizing eigenvector polynomial, times the weight.

    Nonnegative on the support class by construction, with moment value
    equal to the matrix's smallest eigenvalue.
    """
    w, V = jacobi_eigh(H.matrix)
    q = V[:, 0]
    square = np.polynomial.polynomial.polymul(q, q)
    if H.weight is not None:
        square = np.polynomial.polynomial.polymul(square, np.asarray(H.weight.coeffs))
    return Poly(tuple(square))


def positivity_certificate(m: MomentSequence, tol: float = PSD_TOL) -> Certificate:
    """Support-class positivity test on the moment matrices.

    line: plain Hankel; halfline: plus the x-shifted matrix; interval:
    plus the (b-x)(x-a)-localized matrix.  Verdict is representable when
    every matrix clears +tol, not-representable when some matrix dips below
    -tol (with an explicit witness polynomial), inconclusive in between.
    """
    witnesses = []
    verdicts = []
    for H in _support_matrices(m):
        lam = lambda_min(H.matrix)
        failing = lam < -tol
        witnesses.append(
            MatrixWitness(H.label, H.size, lam, _eigvec_witness(H) if failing else None)
        )
        verdicts.append(-1 if failing else (1 if lam > tol else 0))
    if any(v < 0 for v in verdicts):
        verdict = "not-representable"
        notes = ()
    elif all(v > 0 for v in verdicts):
        verdict = "representable"
        notes = ()
    else:
        verdict = "inconclusive"
        notes = (f"some eigenvalue sits in the boundary band |lambda| <= {tol:g}",)
    return Certificate(verdict, tuple(witnesses), tol, notes)


def haviland_grid_check(m: MomentSequence, grid, tol: float = PSD_TOL):
    """Minimize the moment functional over grid-nonnegative normalized polys.

    LP over polynomials of degree <= 2d with p(x_j) >= 0 on the grid and
    coefficient 1-norm at most 1.  A minimum above -tol certifies positivity
    on the (grid-nonnegative) relaxation of the support cone; a failure
    returns the minimizing polynomial as an explicit witness.

    The grid constraints are handled by constraint generation: solve on a
    coarse subset, add the points the minimizer violates, repeat.  The
    returned polynomial is nonnegative (to 1e-12) on the whole grid, and by
    the usual cutting-plane argument its value is the full-grid minimum.
    """
    grid = np.asarray(list(grid), dtype=float)
    if grid.size == 0:
        raise ValueError("grid must be nonempty")
    if not all(m.support.contains(x, 1e-12) for x in grid):
        raise ValueError("grid points must lie inside the declared support")
    n_coef = m.max_degree + 1
    vander = np.vander(grid, n_coef, increasing=True)
    eye = np.eye(n_coef)
    c = np.concatenate([m.array(), np.zeros(n_coef)])

    # variables: [c (n_coef), u (n_coef)] with u >= |c|, sum u <= 1
    def _solve(point_idx):
        rows = vander[point_idx]
        a_ub = np.block([
            [-rows, np.zeros((rows.shape[0], n_coef))],
            [eye, -eye],
            [-eye, -eye],
            [np.zeros((1, n_coef)), np.ones((1, n_coef))],
        ])
        b_ub = np.concatenate([np.zeros(rows.shape[0] + 2 * n_coef), [1.0]])
        sol = solve_lp(c, a_ub=a_ub, b_ub=b_ub)
        if not sol.optimal:
            raise LpFailure(f"grid-positivity LP ended with status {sol.status}")
        return sol

    active = list(range(0, grid.size, max(1, grid.size // 16)))
    seen = set(active)
    for _ in range(60):
        sol = _solve(np.asarray(active, dtype=int))
        coeffs = sol.x[:n_coef]
        values = vander @ coeffs
        violated = np.nonzero(values < -1e-12)[0]
        new = [int(j) for j in violated[np.argsort(values[violated])][:16] if int(j) not in seen]
        if not new:
            worst = Poly(tuple(coeffs))
            return float(sol.objective) >= -tol, worst
        active.extend(new)
        seen.update(new)
    raise LpFailure("constraint generation for the grid check did not settle")


def _scaled_cholesky_rank(H: np.ndarray):
    """Leading-chain numerical rank with diagonally scaled pivots.

    Returns ``(rank, R)`` where ``R`` holds the rows of the upper Cholesky
    factor of the *unscaled* matrix computed so far.  Pivots are measured
    after symmetric scaling to unit diagonal, so the keep/drop thresholds
    1e-10 / 1e-12 are scale-free; a pivot inside the band raises
    :class:`RankDetectionAmbiguous`.
    """
    n = H.shape[0]
    diag = np.diag(H).copy()
    scale = np.sqrt(np.where(diag > 0.0, diag, 1.0))
    Hs = H / np.outer(scale, scale)
    Rs = np.zeros((n, n))
    rank = n
    for k in range(n):
        pivot = Hs[k, k] - Rs[:k, k] @ Rs[:k, k]
        if pivot > RANK_PIVOT_KEEP:
            Rs[k, k] = math.sqrt(pivot)
            Rs[k, k + 1:] = (Hs[k, k + 1:] - Rs[:k, k] @ Rs[:k, k + 1:]) / Rs[k, k]
        elif pivot < RANK_PIVOT_DROP:
            rank = k
            break
        else:
            raise RankDetectionAmbiguous(float(pivot), k)
    return rank, Rs * scale[None, :]


def recover_atoms(m: MomentSequence) -> AtomicMeasure:
    """Atomic measure matching the sequence through degree ``2r - 1``.

    The atom count ``r`` is the leading-chain numerical rank of the moment
    matrix (capped at d: recovering d+1 atoms would need moments beyond the
    truncation).  Atoms and weights come from the symmetric tridiagonal
    recurrence matrix built out of Cholesky factor ratios.
    """
    arr = m.array()
    if np.abs(arr).max() == 0.0:
        return AtomicMeasure((), (), m.support)
    for H in _support_matrices(m):
        scale = max(1.0, float(np.sqrt(np.sum(H.matrix * H.matrix))))
        lam = lambda_min(H.matrix)
        if lam < -PSD_TOL * scale:
            raise NotPSD(f"{H.label} matrix has scaled smallest eigenvalue {lam / scale:.3e}")

    H_full = _hankel_array(arr, m.d + 1)
    rank, _ = _scaled_cholesky_rank(H_full)
    r = min(rank, m.d)
    if r == 0:
        return AtomicMeasure((), (), m.support)

    # Recurrence coefficients from the Cholesky factor of the (r+1)-sized
    # leading moment matrix; only rows 0..r-1 are needed (and available).
    _, R = _scaled_cholesky_rank(_hankel_array(arr, r + 1))
    alpha = np.empty(r)
    beta = np.empty(max(r - 1, 0))
    for j in range(r):
        alpha[j] = R[j, j + 1] / R[j, j]
        if j >= 1:
            alpha[j] -= R[j - 1, j] / R[j - 1, j - 1]
            beta[j - 1] = R[j, j] / R[j - 1, j - 1]

    J = np.diag(alpha)
    for j in range(r - 1):
        J[j, j + 1] = J[j + 1, j] = beta[j]
    nodes, vectors = jacobi_eigh(J)
    weights = m.moments[0] * vectors[0, :] ** 2
    return AtomicMeasure(tuple(float(x) for x in nodes),
                         tuple(float(w) for w in weights), m.support)


def verify_truncated(m: MomentSequence, mu: AtomicMeasure,
                     through_degree: int | None = None,
                     tol: float = 1e-7) -> TruncationReport:
    """Relative moment residuals of the measure against the sequence.

    Defaults to degrees 0..2d-1 (the guaranteed range); the degree-2d
    residual is reported separately because it may legitimately be nonzero.
    Residuals are measured relative to the magnitude of the sequence,
    ``max(1, max_k |m_k|)``.
    """
    if through_degree is None:
        through_degree = 2 * m.d - 1
    if through_degree > m.max_degree:
        raise DegreeTooHigh(
            f"cannot verify through degree {through_degree}: moments stop at {m.max_degree}"
        )
    scale = m.scale
    mu_moms = mu.moments_to(m.max_degree) if m.max_degree >= 0 else ()
    residuals = tuple(
        abs(m.moments[k] - mu_moms[k]) / scale for k in range(max(through_degree + 1, 0))
    )
    top_residual = abs(m.moments[-1] - mu_moms[-1]) / scale
    return TruncationReport(
        residuals=residuals,
        max_relative_residual=max(residuals, default=0.0),
        through_degree=through_degree,
        tol=tol,
        degree_2d_residual=top_residual,
    )


def _golden_max(f, lo: float, hi: float, rel_tol: float = 1e-9, max_iter: int = 200):
    """Golden-section maximization of a unimodal function on [lo, hi]."""
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if hi - lo <= rel_tol * max(1.0, abs(lo), abs(hi)):
            break
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def _ladder_bracket(f, center: float, step: float, rel_tol: float = 1e-9,
                    max_expand: int = 48):
    """Geometric probe ladder around ``center`` for a concave objective.

    Returns ``(best_x, spacing)`` such that the maximizer lies within
    ``best_x +- spacing``; expansion in a direction stops once its marginal
    gain falls under the tolerance.  Exhausting the expansion budget while
    gains persist raises :class:`BracketExhausted`.
    """
    best_x, best_v = center, f(center)
    for sign in (1.0, -1.0):
        step_k = step
        x_prev, v_prev = center, best_v
        for k in range(max_expand):
            x = center + sign * step_k
            v = f(x)
            if v > best_v:
                best_x, best_v = x, v
            gain = v - v_prev
            if v < v_prev or gain <= rel_tol * max(1.0, abs(best_v)):
                break
            x_prev, v_prev = x, v
            step_k *= 2.0
        else:
            raise BracketExhausted(
                f"objective kept improving after {max_expand} doublings toward {sign:+g}"
            )
    spacing = max(step, 2.0 * abs(best_x - center))
    return best_x, spacing


def extend_search(m: MomentSequence, tol: float = PSD_TOL) -> ExtensionCandidate | None:
    """Search for two more moments keeping the bigger moment matrix PSD.

    Maximizes the smallest eigenvalue of the (d+2)-sized moment matrix over
    the two unknowns (the matrix is affine in them, so the objective is
    concave) by nested golden-section search with ladder-expanded brackets.
    Returns the best pair when the optimum clears ``-tol`` relative to the
    sequence scale, and None otherwise.  The principal-submatrix bound is
    checked first: a non-PSD base matrix cannot be repaired by any extension.
    """
    arr = m.array()
    d = m.d
    scale = m.scale
    base = _hankel_array(arr, d + 1)
    base_scale = max(1.0, float(np.sqrt(np.sum(base * base))))
    if lambda_min(base) < -tol * base_scale:
        return None

    ext = np.concatenate([arr, [0.0, 0.0]])

    def lam(s: float, t: float) -> float:
        ext[-2] = s
        ext[-1] = t
        return lambda_min(_hankel_array(ext, d + 2))

    def inner(s: float):
        t0, spacing = _ladder_bracket(lambda t: lam(s, t), 0.0, 2.0 * scale)
        return _golden_max(lambda t: lam(s, t), t0 - spacing, t0 + spacing)

    s0, s_spacing = _ladder_bracket(lambda s: inner(s)[1], 0.0, 2.0 * scale)
    s_best, _ = _golden_max(lambda s: inner(s)[1], s0 - s_spacing, s0 + s_spacing)
    t_best, value = inner(s_best)

    # The eigensolver resolves lambda_min only relative to the matrix scale,
    # so the acceptance threshold is taken relative to that same scale.
    decision_scale = max(1.0, scale, abs(s_best), abs(t_best))
    if value < -tol * decision_scale:
        return None
    return ExtensionCandidate(float(s_best), float(t_best), float(value))
