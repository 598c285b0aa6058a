"""Finite models of function spaces over a finite ground set.

A function on ``n`` named points is just a length-``n`` vector; subspaces
are spanned by finitely many of them.  The three structural questions asked
downstream (is a function in the nonnegative cone, is it absolutely
dominated by the span, is it dominated up to ``eps`` plus a correction term)
all reduce to linear-program feasibility over span coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotInDomain
from .simplex import lp_feasible

INDEPENDENCE_TOL = 1e-10
DEFAULT_EPS_SCHEDULE = (1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)


@dataclass(frozen=True)
class GroundSet:
    """Ordered finite set of named points."""

    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        if len(self.labels) == 0:
            raise ValueError("ground set must contain at least one point")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("ground set labels must be unique")

    @property
    def size(self) -> int:
        return len(self.labels)

    @classmethod
    def of_size(cls, n: int) -> "GroundSet":
        return cls(tuple(f"x{i}" for i in range(n)))


@dataclass(frozen=True, eq=False)
class FunctionVec:
    """Real-valued function on a ground set, stored in ground-set order."""

    ground: GroundSet
    values: np.ndarray

    def __post_init__(self):
        vals = np.atleast_1d(np.asarray(self.values, dtype=float))
        if vals.shape != (self.ground.size,):
            raise ValueError(f"expected {self.ground.size} values, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("function values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def abs(self) -> "FunctionVec":
        return FunctionVec(self.ground, np.abs(self.values))

    def __neg__(self) -> "FunctionVec":
        return FunctionVec(self.ground, -self.values)

    def __add__(self, other: "FunctionVec") -> "FunctionVec":
        _same_ground(self, other)
        return FunctionVec(self.ground, self.values + other.values)

    def __sub__(self, other: "FunctionVec") -> "FunctionVec":
        _same_ground(self, other)
        return FunctionVec(self.ground, self.values - other.values)

    def __mul__(self, scalar: float) -> "FunctionVec":
        return FunctionVec(self.ground, self.values * float(scalar))

    __rmul__ = __mul__


def _same_ground(*objs) -> GroundSet:
    grounds = {o.ground.labels for o in objs}
    if len(grounds) != 1:
        raise ValueError("operands live on different ground sets")
    return objs[0].ground


@dataclass(frozen=True)
class ConeSpec:
    """The only cone in scope: functions that are pointwise nonnegative."""

    kind: str = "pointwise-nonneg"

    def __post_init__(self):
        if self.kind != "pointwise-nonneg":
            raise ValueError(f"unsupported cone kind: {self.kind!r}")


POINTWISE_NONNEG = ConeSpec()


class Subspace:
    """Span of finitely many function vectors (possibly empty).

    The basis must be linearly independent; dependence is detected by a
    singular-value rank check at tolerance 1e-10.
    """

    def __init__(self, ground: GroundSet, basis=()):
        self.ground = ground
        basis = tuple(basis)
        for v in basis:
            if v.ground.labels != ground.labels:
                raise ValueError("basis vector lives on a different ground set")
        self.basis = basis
        self._matrix = (
            np.column_stack([v.values for v in basis])
            if basis else np.zeros((ground.size, 0))
        )
        if basis:
            svals = np.linalg.svd(self._matrix, compute_uv=False)
            if len(basis) > ground.size or svals[-1] <= INDEPENDENCE_TOL * max(1.0, svals[0]):
                raise ValueError("basis vectors are linearly dependent")

    @property
    def matrix(self) -> np.ndarray:
        """Ground-size x dim matrix whose columns are the basis vectors."""
        return self._matrix

    @property
    def dim(self) -> int:
        return len(self.basis)

    def member(self, coefficients) -> FunctionVec:
        coefficients = np.asarray(coefficients, dtype=float)
        return FunctionVec(self.ground, self._matrix @ coefficients)

    def coefficients_of(self, f: FunctionVec, tol: float = INDEPENDENCE_TOL) -> np.ndarray:
        """Basis coefficients of ``f``; raises NotInDomain outside the span."""
        if f.ground.labels != self.ground.labels:
            raise ValueError("vector lives on a different ground set")
        if self.dim == 0:
            if np.abs(f.values).max(initial=0.0) > tol:
                raise NotInDomain("vector is not in the zero subspace")
            return np.zeros(0)
        coeffs, *_ = np.linalg.lstsq(self._matrix, f.values, rcond=None)
        residual = np.abs(self._matrix @ coeffs - f.values).max()
        if residual > tol * max(1.0, np.abs(f.values).max()):
            raise NotInDomain(f"vector is outside the span (residual {residual:.3e})")
        return coeffs

    def contains(self, f: FunctionVec, tol: float = INDEPENDENCE_TOL) -> bool:
        try:
            self.coefficients_of(f, tol)
            return True
        except NotInDomain:
            return False

    def extended_by(self, v: FunctionVec) -> "Subspace":
        return Subspace(self.ground, self.basis + (v,))


def cone_contains(f: FunctionVec, tol: float = 0.0, cone: ConeSpec = POINTWISE_NONNEG) -> bool:
    """Is ``f`` pointwise nonnegative, allowing dips down to ``-tol``?"""
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    return bool(np.all(f.values >= -tol))


def hull_contains(A: Subspace, f: FunctionVec) -> bool:
    """Is some member of ``span(A)`` pointwise above ``|f|``?

    This is the convex sufficient test for lattice-hull membership; it is
    exact whenever the span is closed under squaring and contains constants
    (then ``(g*g + 1) / 2`` dominates ``|g|`` inside the span).
    """
    if f.ground.labels != A.ground.labels:
        raise ValueError("vector and subspace live on different ground sets")
    target = np.abs(f.values)
    if A.dim == 0:
        return bool(target.max(initial=0.0) <= 0.0)
    return lp_feasible(a_ub=-A.matrix, b_ub=-target)


def dominates(g: FunctionVec, f: FunctionVec, B: Subspace, eps: float) -> bool:
    """Does some ``h`` in ``span(B)`` satisfy ``|g| <= eps*|f| + h`` pointwise?"""
    if eps <= 0:
        raise ValueError("eps must be positive")
    _same_ground(g, f)
    if g.ground.labels != B.ground.labels:
        raise ValueError("vectors and subspace live on different ground sets")
    deficit = np.abs(g.values) - eps * np.abs(f.values)
    if B.dim == 0:
        return bool(deficit.max(initial=0.0) <= 0.0)
    return lp_feasible(a_ub=-B.matrix, b_ub=-deficit)


@dataclass(frozen=True)
class CandidateTrial:
    candidate_index: int
    results: tuple[tuple[float, bool], ...]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.results)


@dataclass(frozen=True)
class AdaptednessEntry:
    target_index: int
    witness_index: int | None
    trials: tuple[CandidateTrial, ...]

    @property
    def passed(self) -> bool:
        return self.witness_index is not None


@dataclass(frozen=True)
class AdaptednessReport:
    entries: tuple[AdaptednessEntry, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def witness_for(self, target_index: int) -> int | None:
        for e in self.entries:
            if e.target_index == target_index:
                return e.witness_index
        return None


def check_adapted(
    A: Subspace,
    B: Subspace,
    eps_schedule=DEFAULT_EPS_SCHEDULE,
    candidates=None,
) -> AdaptednessReport:
    """For each basis vector ``g`` of ``A``, find the first candidate ``f``
    with ``|g| <= eps*|f| + h`` solvable for every ``eps`` in the schedule.

    The per-candidate, per-eps feasibility rows are kept in the report so a
    feasibility threshold inside the schedule stays visible.
    """
    eps_schedule = tuple(float(e) for e in eps_schedule)
    if not eps_schedule or any(e <= 0 for e in eps_schedule):
        raise ValueError("eps schedule must be nonempty and positive")
    if any(later >= earlier for earlier, later in zip(eps_schedule, eps_schedule[1:])):
        raise ValueError("eps schedule must be strictly decreasing")
    if candidates is None:
        candidates = default_candidates(A)
    candidates = list(candidates)
    if A.dim and not candidates:
        raise ValueError("candidate list must be nonempty")

    entries = []
    for gi, g in enumerate(A.basis):
        trials = []
        witness = None
        for ci, f in enumerate(candidates):
            results = tuple((eps, dominates(g, f, B, eps)) for eps in eps_schedule)
            trials.append(CandidateTrial(ci, results))
            if all(ok for _, ok in results):
                witness = ci
                break
        entries.append(AdaptednessEntry(gi, witness, tuple(trials)))
    return AdaptednessReport(tuple(entries))


def default_candidates(A: Subspace) -> list[FunctionVec]:
    """Domination candidates: basis vectors, their squares when the square
    stays in the span, and the constant function when the span contains it."""
    out = list(A.basis)
    for v in A.basis:
        squared = FunctionVec(A.ground, v.values * v.values)
        if A.contains(squared):
            out.append(squared)
    one = FunctionVec(A.ground, np.ones(A.ground.size))
    if A.contains(one):
        out.append(one)
    return out
