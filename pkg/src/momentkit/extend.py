"""Stepwise positive extension of a linear functional across the
pointwise-nonnegative cone.

Given a functional that is nonnegative on the intersection of its span with
the cone, each new target vector that is sandwiched between two span
elements modulo the cone admits an interval of admissible values
``[-p(v), p(-v)]``, where ``p`` is the sublinear bound

    p(v) = -sup { L(w) : w in span, v - w >= 0 pointwise }.

Choosing any value in the interval keeps the extended functional dominated
by ``p``, hence nonnegative on the cone slice of the grown span.  The
choice rule (midpoint, lo, hi) is exposed because the interval is genuinely
non-degenerate in most cases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyInterval,
    HullMembershipFailed,
    LpFailure,
    LpUnbounded,
    TargetNotInWC,
)
from .funcspace import FunctionVec, Subspace, hull_contains
from .simplex import lp_feasible, solve_lp

INTERVAL_TOL = 1e-9
RULES = ("midpoint", "lo", "hi")


@dataclass(frozen=True, eq=False)
class Functional:
    """Linear functional given by its values on a subspace basis."""

    domain: Subspace
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        if coeffs.shape != (self.domain.dim,):
            raise ValueError(
                f"got {coeffs.shape[0]} coefficients for a dimension-{self.domain.dim} domain"
            )
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("functional coefficients must be finite")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    def __call__(self, v: FunctionVec) -> float:
        """Value on ``v``; raises NotInDomain when ``v`` is outside the span.

        Well-defined because the domain basis is independent by construction.
        """
        return float(self.domain.coefficients_of(v) @ self.coeffs)

    @property
    def ground(self):
        return self.domain.ground


@dataclass(frozen=True, eq=False)
class ExtensionStep:
    target: FunctionVec
    interval_lo: float
    interval_hi: float
    chosen: float

    def __post_init__(self):
        if not (self.interval_lo - 1e-12 <= self.chosen <= self.interval_hi + 1e-12):
            raise ValueError("chosen extension value escapes its admissible interval")


@dataclass(frozen=True)
class ExtensionTrace:
    steps: tuple[ExtensionStep, ...] = ()


def in_cone_plus_subspace(v: FunctionVec, W: Subspace) -> bool:
    """Is ``v = c + w`` for a pointwise-nonnegative ``c`` and ``w`` in the span?

    Equivalently: does some span member lie pointwise below ``v``?
    """
    if v.ground.labels != W.ground.labels:
        raise ValueError("vector and subspace live on different ground sets")
    if W.dim == 0:
        return bool(np.all(v.values >= 0.0))
    return lp_feasible(a_ub=W.matrix, b_ub=v.values)


def wc_contains(v: FunctionVec, W: Subspace) -> bool:
    """Sandwich membership: both ``v`` and ``-v`` decompose as cone + span."""
    return in_cone_plus_subspace(v, W) and in_cone_plus_subspace(-v, W)


def sublinear_p(v: FunctionVec, L: Functional) -> float:
    """The Hahn-Banach bound ``-sup { L(w) : w in span, w <= v pointwise }``.

    Finite exactly when ``v`` passes :func:`wc_contains` for a cone-positive
    ``L``; an unbounded or empty inner problem raises :class:`LpUnbounded`,
    which signals a violated precondition.
    """
    W = L.domain
    if v.ground.labels != W.ground.labels:
        raise ValueError("vector and functional live on different ground sets")
    if W.dim == 0:
        if np.all(v.values >= 0.0):
            return 0.0
        raise LpUnbounded("no element of the zero subspace lies below the target")
    sol = solve_lp(-L.coeffs, a_ub=W.matrix, b_ub=v.values)
    if sol.status == "unbounded":
        raise LpUnbounded("supremum over dominated span elements is unbounded")
    if sol.status == "infeasible":
        raise LpUnbounded("no span element lies below the target (not in cone + span)")
    return float(sol.objective)


def hb_extend_step(L: Functional, v: FunctionVec, rule: str = "midpoint"):
    """One Hahn-Banach step: extend ``L`` to ``span(domain + {v})``.

    Returns ``(extended functional, step record)``.  The admissible value
    interval is ``[-p(v), p(-v)]``; a reversed interval beyond 1e-9 raises
    :class:`EmptyInterval`, while a merely degenerate one collapses to its
    common endpoint.
    """
    if rule not in RULES:
        raise ValueError(f"unknown extension rule {rule!r}")
    if L.domain.contains(v):
        raise ValueError("target already lies in the span; nothing to extend")
    if not wc_contains(v, L.domain):
        raise TargetNotInWC(None, "target is not sandwiched by the current domain")

    lo = -sublinear_p(v, L)
    hi = sublinear_p(-v, L)
    if hi < lo - INTERVAL_TOL:
        raise EmptyInterval(f"admissible interval is empty: [{lo:.17g}, {hi:.17g}]")
    if hi < lo:  # degenerate within tolerance: the value is forced
        lo = hi = 0.5 * (lo + hi)

    if rule == "midpoint":
        chosen = 0.5 * (lo + hi)
    elif rule == "lo":
        chosen = lo
    else:
        chosen = hi

    extended = Functional(L.domain.extended_by(v), np.append(L.coeffs, chosen))
    return extended, ExtensionStep(v, lo, hi, chosen)


def hb_extend(L: Functional, targets, rule: str = "midpoint"):
    """Iterate :func:`hb_extend_step` over ``targets``.

    Targets already inside the (growing) span are skipped, so feeding the
    current domain back in is the identity.  A target failing the sandwich
    test raises :class:`TargetNotInWC` carrying its index.
    """
    current = L
    steps = []
    for idx, v in enumerate(targets):
        if current.domain.contains(v):
            continue
        try:
            current, step = hb_extend_step(current, v, rule)
        except TargetNotInWC as exc:
            raise TargetNotInWC(idx) from exc
        steps.append(step)
    return current, ExtensionTrace(tuple(steps))


def extend_to_hull(L: Functional, A: Subspace, hull_basis, rule: str = "midpoint"):
    """Positive extension toward absolutely dominated targets.

    Every target must be dominated in absolute value by some member of
    ``span(A)`` (checked first; failure raises
    :class:`HullMembershipFailed`), after which the extension itself is a
    plain :func:`hb_extend` run.
    """
    hull_basis = list(hull_basis)
    for idx, h in enumerate(hull_basis):
        if not hull_contains(A, h):
            raise HullMembershipFailed(f"hull target {idx} is not dominated by the span")
    return hb_extend(L, hull_basis, rule)


def verify_positive(L: Functional, tol: float = 1e-8):
    """Minimum of ``L`` over the normalized cone slice of its domain.

    Solves ``min L(v)`` over ``v`` in the span with ``v >= 0`` pointwise and
    ``sum(v) = 1``; returns ``(min >= -tol, min)``.  An empty slice counts
    as positive with worst value 0.
    """
    W = L.domain
    if W.dim == 0:
        return True, 0.0
    a_eq = W.matrix.sum(axis=0)[None, :]
    sol = solve_lp(L.coeffs, a_ub=-W.matrix, b_ub=np.zeros(W.ground.size),
                   a_eq=a_eq, b_eq=[1.0])
    if sol.status == "infeasible":
        return True, 0.0
    if sol.status == "unbounded":
        raise LpFailure("positivity slice is compact; an unbounded LP indicates a solver bug")
    worst = float(sol.objective)
    return worst >= -tol, worst
