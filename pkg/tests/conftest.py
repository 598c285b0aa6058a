"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

import momentkit as mk


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def ground(n: int) -> mk.GroundSet:
    return mk.GroundSet.of_size(n)


def vec(g: mk.GroundSet, values) -> mk.FunctionVec:
    return mk.FunctionVec(g, np.asarray(values, dtype=float))


def ones(g: mk.GroundSet) -> mk.FunctionVec:
    return mk.FunctionVec(g, np.ones(g.size))


def random_subspace_with_one(rng, g: mk.GroundSet, dim: int) -> mk.Subspace:
    """Random subspace of the given dimension containing the constants."""
    dim = min(dim, g.size)
    vecs = [ones(g)]
    while len(vecs) < dim:
        cand = vec(g, rng.normal(size=g.size))
        try:
            mk.Subspace(g, vecs + [cand])
        except ValueError:
            continue
        vecs.append(cand)
    return mk.Subspace(g, vecs)


def density_functional(rng, W: mk.Subspace, low=0.0, high=2.0) -> mk.Functional:
    """Positive functional: integration against a random nonnegative density."""
    omega = rng.uniform(low, high, W.ground.size)
    return mk.Functional(W, [float(omega @ v.values) for v in W.basis])


def random_partition(rng, g: mk.GroundSet, n_blocks: int) -> mk.SigmaAlgebra:
    n = g.size
    n_blocks = min(n_blocks, n)
    assign = np.concatenate([np.arange(n_blocks), rng.integers(0, n_blocks, n - n_blocks)])
    rng.shuffle(assign)
    blocks = tuple(tuple(np.nonzero(assign == b)[0].tolist()) for b in range(n_blocks))
    return mk.SigmaAlgebra(g, blocks)


def atomic_moments(atoms, weights, degree: int) -> tuple[float, ...]:
    """Moment list of a finite atomic measure, computed directly."""
    xs = np.asarray(atoms, dtype=float)
    ws = np.asarray(weights, dtype=float)
    return tuple(float(ws @ xs**k) for k in range(degree + 1))


def scipy_lp(c, a_ub=None, b_ub=None, a_eq=None, b_eq=None):
    """Reference LP solve with free variables (independent of our simplex)."""
    from scipy.optimize import linprog

    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq,
                  bounds=(None, None), method="highs")
    if res.status == 0:
        return "optimal", res.fun
    if res.status == 2:
        return "infeasible", None
    if res.status == 3:
        return "unbounded", None
    raise RuntimeError(f"scipy linprog status {res.status}")
