"""Measures on finite partitions and the representation pipeline.

A finite sigma-algebra is encoded by the partition that generates it; simple
functions are block-constant vectors; the measure induced by a positive
functional assigns each block the value of the functional on its indicator.
With those pieces the representation pipeline is: extend the functional to
every indicator, check that the designated subspace is dense in the induced
L1-style seminorm, read off the measure, and report the gap between
functional values and integrals together with the domination diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DensityFailed,
    IntegralOfNonMeasurable,
    LpFailure,
    NegativeMass,
    RangeViolation,
)
from .extend import ExtensionTrace, Functional, extend_to_hull, hb_extend, verify_positive
from .funcspace import (
    DEFAULT_EPS_SCHEDULE,
    AdaptednessReport,
    FunctionVec,
    GroundSet,
    Subspace,
    check_adapted,
    default_candidates,
)
from .simplex import solve_lp

MEASURABLE_TOL = 1e-10
MASS_ERROR_TOL = 1e-8
DENSITY_TOL = 1e-8


@dataclass(frozen=True)
class SigmaAlgebra:
    """Finite sigma-algebra, stored as the partition generating it."""

    ground: GroundSet
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(int(i) for i in block) for block in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen = [i for block in blocks for i in block]
        n = self.ground.size
        if any(len(block) == 0 for block in blocks):
            raise ValueError("partition blocks must be nonempty")
        if sorted(seen) != list(range(n)):
            raise ValueError("blocks must partition the ground set (cover, disjoint)")

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def indicator(self, block_index: int) -> FunctionVec:
        vals = np.zeros(self.ground.size)
        vals[list(self.blocks[block_index])] = 1.0
        return FunctionVec(self.ground, vals)

    def indicators(self) -> list[FunctionVec]:
        return [self.indicator(i) for i in range(self.n_blocks)]

    def block_values(self, f: FunctionVec, tol: float = MEASURABLE_TOL) -> np.ndarray:
        """Per-block constants of ``f``; raises if ``f`` varies inside a block."""
        if f.ground.labels != self.ground.labels:
            raise ValueError("function lives on a different ground set")
        out = np.empty(self.n_blocks)
        for i, block in enumerate(self.blocks):
            vals = f.values[list(block)]
            if vals.max() - vals.min() > tol * max(1.0, np.abs(vals).max()):
                raise IntegralOfNonMeasurable(
                    f"function is not constant on block {i} (spread {vals.max() - vals.min():.3e})"
                )
            out[i] = vals[0]
        return out

    def is_measurable(self, f: FunctionVec, tol: float = MEASURABLE_TOL) -> bool:
        try:
            self.block_values(f, tol)
            return True
        except IntegralOfNonMeasurable:
            return False


@dataclass(frozen=True, eq=False)
class SimpleFunction:
    """Block-constant function given by one value per partition block."""

    algebra: SigmaAlgebra
    block_values: np.ndarray

    def __post_init__(self):
        vals = np.atleast_1d(np.asarray(self.block_values, dtype=float))
        if vals.shape != (self.algebra.n_blocks,):
            raise ValueError(f"expected {self.algebra.n_blocks} block values, got {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "block_values", vals)

    def as_vec(self) -> FunctionVec:
        out = np.empty(self.algebra.ground.size)
        for value, block in zip(self.block_values, self.algebra.blocks):
            out[list(block)] = value
        return FunctionVec(self.algebra.ground, out)


@dataclass(frozen=True, eq=False)
class Measure:
    """Nonnegative mass per partition block."""

    algebra: SigmaAlgebra
    block_mass: np.ndarray

    def __post_init__(self):
        mass = np.atleast_1d(np.asarray(self.block_mass, dtype=float))
        if mass.shape != (self.algebra.n_blocks,):
            raise ValueError(f"expected {self.algebra.n_blocks} masses, got {mass.shape}")
        if mass.min(initial=0.0) < -1e-12:
            raise ValueError("block masses must be nonnegative (clamp upstream)")
        mass = np.where(mass < 0.0, 0.0, mass)
        mass.setflags(write=False)
        object.__setattr__(self, "block_mass", mass)

    @property
    def total(self) -> float:
        return float(self.block_mass.sum())

    def mass_of(self, block_indices) -> float:
        return float(sum(self.block_mass[i] for i in block_indices))


@dataclass(frozen=True)
class BinningSpec:
    """Uniform binning of the value range [a, b) into n bins."""

    a: float
    b: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)) or self.a >= self.b:
            raise ValueError("binning requires finite a < b")
        if self.n < 1:
            raise ValueError("bin count must be at least 1")

    @property
    def width(self) -> float:
        return (self.b - self.a) / self.n


def seminorm_rho(L: Functional, f: FunctionVec) -> float:
    """The seminorm ``L(|f|)``; nonnegative whenever ``L`` is positive.

    Requires ``|f|`` to lie in the functional's span (finite stand-in for
    lattice completeness of the domain).
    """
    return L(f.abs())


@dataclass(frozen=True)
class BinnedApproximation:
    algebra: SigmaAlgebra
    simple: SimpleFunction
    width: float

    def as_vec(self) -> FunctionVec:
        return self.simple.as_vec()


def approx_below(f: FunctionVec, spec: BinningSpec) -> BinnedApproximation:
    """Lower simple-function approximation on uniform value bins.

    The k-th bin collects points with value in ``[a+(k-1)w, a+kw)`` and is
    assigned the bin's left edge (including the offset ``a``), so that
    ``0 <= f - phi < w`` holds pointwise.
    """
    vals = f.values
    if vals.min() < spec.a or vals.max() >= spec.b:
        raise RangeViolation(
            f"need a <= min f and max f < b, got a={spec.a}, b={spec.b}, "
            f"range [{vals.min()}, {vals.max()}]"
        )
    w = spec.width
    k = np.floor((vals - spec.a) / w).astype(int)
    k = np.clip(k, 0, spec.n - 1)
    # One-step corrections against floating-point edge rounding.
    phi = spec.a + k * w
    k = np.where(phi > vals, k - 1, k)
    phi = spec.a + k * w
    k = np.where(vals - phi >= w, k + 1, k)
    k = np.clip(k, 0, spec.n - 1)
    phi = spec.a + k * w
    if (phi > vals).any() or (vals - phi >= w).any():
        raise RangeViolation("binning could not establish 0 <= f - phi < width")

    order = sorted(set(k.tolist()))
    blocks = tuple(tuple(np.nonzero(k == kk)[0].tolist()) for kk in order)
    algebra = SigmaAlgebra(f.ground, blocks)
    simple = SimpleFunction(algebra, np.array([spec.a + kk * w for kk in order]))
    return BinnedApproximation(algebra, simple, w)


def build_measure(Lbar: Functional, alg: SigmaAlgebra) -> Measure:
    """Measure with ``mass(block) = Lbar(indicator)``.

    Additivity on block unions is linear algebra.  A block value below
    -1e-8 raises :class:`NegativeMass` (the functional is not positive);
    smaller negative dust is clamped to zero.
    """
    masses = np.empty(alg.n_blocks)
    for i in range(alg.n_blocks):
        masses[i] = Lbar(alg.indicator(i))
    if masses.min(initial=0.0) < -MASS_ERROR_TOL:
        worst = int(np.argmin(masses))
        raise NegativeMass(f"indicator of block {worst} evaluates to {masses[worst]:.3e}")
    return Measure(alg, np.where(masses < 0.0, 0.0, masses))


def integrate(f: FunctionVec, mu: Measure, alg: SigmaAlgebra) -> float:
    """Integral of a block-constant function: sum of value times mass.

    On a finite partition this equals the supremum over dominated simple
    functions (attained at ``f`` itself).
    """
    values = alg.block_values(f)
    return float(values @ mu.block_mass)


@dataclass(frozen=True)
class DensityReport:
    distances: tuple[float, ...]
    tol: float

    @property
    def dense(self) -> bool:
        return all(d <= self.tol for d in self.distances)

    @property
    def max_distance(self) -> float:
        return max(self.distances, default=0.0)


def density_check(B: Subspace, alg: SigmaAlgebra, Lbar: Functional,
                  tol: float = DENSITY_TOL) -> DensityReport:
    """Seminorm distance from each block indicator to ``span(B)``.

    Each distance is ``inf over b of Lbar(|chi - b|)``, computed as the LP
    ``min Lbar(t)`` over ``t`` in Lbar's span with ``t >= chi - b`` and
    ``t >= b - chi`` pointwise.  Dense means every distance is below tol.
    """
    M = Lbar.domain.matrix
    N = B.matrix
    n = alg.ground.size
    kd, kb = M.shape[1], N.shape[1]
    distances = []
    for i in range(alg.n_blocks):
        chi = alg.indicator(i).values
        # variables: [tau (kd), beta (kb)]
        a_ub = np.block([
            [-M, -N],   # t + b >= chi
            [-M, N],    # t - b >= -chi
        ])
        b_ub = np.concatenate([-chi, chi])
        c = np.concatenate([Lbar.coeffs, np.zeros(kb)])
        sol = solve_lp(c, a_ub=a_ub, b_ub=b_ub)
        if not sol.optimal:
            raise LpFailure(f"density LP for block {i} ended with status {sol.status}")
        distances.append(max(0.0, float(sol.objective)))
    return DensityReport(tuple(distances), tol)


def gap_T(Ltilde: Functional, mu: Measure, alg: SigmaAlgebra, f: FunctionVec) -> float:
    """Gap between the functional value and the integral, ``L(f) - int f``.

    Zero on everything the measure represents; nonnegative on pointwise
    nonnegative block-constant functions when the measure was built from the
    extension of a positive functional.
    """
    return Ltilde(f) - integrate(f, mu, alg)


@dataclass(frozen=True)
class RepresentOptions:
    rule: str = "midpoint"
    eps_schedule: tuple[float, ...] = DEFAULT_EPS_SCHEDULE
    tol: float = DENSITY_TOL
    residual_tol: float = 1e-7
    subspace_variant: bool = False
    witnesses: dict | None = None  # basis index -> FunctionVec, for the subspace variant
    candidates: tuple[FunctionVec, ...] | None = None
    strict: bool = False


@dataclass(frozen=True)
class TDecayEntry:
    target_index: int
    eps: float
    t_target: float
    t_witness: float

    @property
    def ok(self) -> bool:
        return self.t_target <= self.eps * self.t_witness + 1e-8


@dataclass(frozen=True)
class RepresentationReport:
    residuals: tuple[float, ...]
    max_residual: float
    density: DensityReport
    adaptedness: AdaptednessReport | None
    t_decay: tuple[TDecayEntry, ...]
    positive_ok: bool
    worst_positive_value: float
    trace: ExtensionTrace
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def density_ok(self) -> bool:
        return self.density.dense

    @property
    def certified(self) -> bool:
        return self.density_ok and self.positive_ok and self.max_residual <= self.residual_tol_used

    # kept on the report so `certified` is self-contained
    residual_tol_used: float = 1e-7


def represent_via_adapted(A: Subspace, B: Subspace, L: Functional,
                          alg: SigmaAlgebra, opts: RepresentOptions = RepresentOptions()):
    """Full representation pipeline; returns ``(measure, report)``.

    Steps: extend ``L`` to the designated subspace basis and all block
    indicators (through the absolute-domination hull unless the subspace
    variant is requested), check density of ``B``, build the measure, and
    report residuals, gap decay along the domination witnesses, and the
    positivity audit.  A density failure is reported, never hidden: the
    measure is still emitted, flagged uncertified (or raised under
    ``opts.strict``).
    """
    notes = []
    for i, g in enumerate(A.basis):
        if not alg.is_measurable(g):
            raise IntegralOfNonMeasurable(f"domain basis vector {i} is not block-constant")

    targets = list(B.basis) + alg.indicators()
    if opts.subspace_variant:
        Lt, trace = hb_extend(L, targets, opts.rule)
        notes.append("subspace variant: hull membership not required")
    else:
        pending = [t for t in targets if not L.domain.contains(t)]
        Lt, trace = extend_to_hull(L, A, pending, opts.rule)

    density = density_check(B, alg, Lt, opts.tol)
    mu = build_measure(Lt, alg)

    residuals = tuple(gap_T(Lt, mu, alg, g) for g in A.basis)
    max_residual = max((abs(r) for r in residuals), default=0.0)

    adaptedness = None
    witness_map: dict[int, FunctionVec] = {}
    if opts.subspace_variant:
        if opts.witnesses:
            witness_map = dict(opts.witnesses)
        elif A.dim:
            notes.append("no domination witnesses supplied; gap decay not checked")
    else:
        candidates = list(opts.candidates) if opts.candidates is not None else default_candidates(A)
        adaptedness = check_adapted(A, B, opts.eps_schedule, candidates)
        for entry in adaptedness.entries:
            if entry.witness_index is not None:
                witness_map[entry.target_index] = candidates[entry.witness_index]

    t_decay = []
    for gi, witness in sorted(witness_map.items()):
        t_g = gap_T(Lt, mu, alg, A.basis[gi]) if alg.is_measurable(A.basis[gi]) else float("nan")
        t_f = gap_T(Lt, mu, alg, witness) if alg.is_measurable(witness) else float("nan")
        for eps in opts.eps_schedule:
            t_decay.append(TDecayEntry(gi, eps, t_g, t_f))

    positive_ok, worst = verify_positive(Lt, opts.tol)

    report = RepresentationReport(
        residuals=residuals,
        max_residual=max_residual,
        density=density,
        adaptedness=adaptedness,
        t_decay=tuple(t_decay),
        positive_ok=positive_ok,
        worst_positive_value=worst,
        trace=trace,
        notes=tuple(notes + (["density hypothesis violated"] if not density.dense else [])),
        residual_tol_used=opts.residual_tol,
    )
    if opts.strict and not density.dense:
        raise DensityFailed(
            f"subspace is not dense: max indicator distance {density.max_distance:.6g}"
        )
    return mu, report
