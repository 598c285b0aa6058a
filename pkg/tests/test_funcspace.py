import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import momentkit as mk

from conftest import ground, ones, random_subspace_with_one, vec


# --- types ---------------------------------------------------------------------

def test_ground_set_validation():
    with pytest.raises(ValueError):
        mk.GroundSet(())
    with pytest.raises(ValueError):
        mk.GroundSet(("a", "a"))


def test_function_vec_validation():
    g = ground(3)
    with pytest.raises(ValueError):
        vec(g, [1.0, 2.0])
    with pytest.raises(ValueError):
        vec(g, [1.0, np.inf, 0.0])


def test_subspace_rejects_dependent_basis():
    g = ground(3)
    a = vec(g, [1, 0, 1])
    b = vec(g, [2, 0, 2])
    with pytest.raises(ValueError):
        mk.Subspace(g, [a, b])


def test_subspace_membership():
    g = ground(3)
    W = mk.Subspace(g, [ones(g), vec(g, [0, 1, 2])])
    assert W.contains(vec(g, [2, 3, 4]))
    assert not W.contains(vec(g, [0, 1, 0]))
    with pytest.raises(mk.NotInDomain):
        W.coefficients_of(vec(g, [0, 1, 0]))


def test_cone_spec_kind():
    with pytest.raises(ValueError):
        mk.ConeSpec("sums-of-squares")


# --- cone_contains --------------------------------------------------------------

def test_cone_zero_function():
    assert mk.cone_contains(vec(ground(3), [0, 0, 0]), tol=0.0)


def test_cone_sign_mix():
    assert not mk.cone_contains(vec(ground(2), [1, -1]), tol=0.0)


def test_cone_within_tolerance():
    assert mk.cone_contains(vec(ground(2), [-1e-12, 2]), tol=1e-9)


def test_cone_rejects_negative_tol():
    with pytest.raises(ValueError):
        mk.cone_contains(vec(ground(1), [1.0]), tol=-1.0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.floats(1e-6, 1e6))
def test_cone_scale_invariance(seed, lam):
    rng = np.random.default_rng(seed)
    g = ground(int(rng.integers(1, 9)))
    f = vec(g, rng.normal(size=g.size))
    assert mk.cone_contains(f, 0.0) == mk.cone_contains(lam * f, 0.0)


# --- hull_contains ---------------------------------------------------------------

def test_hull_constant_dominates():
    g = ground(3)
    A = mk.Subspace(g, [ones(g)])
    assert mk.hull_contains(A, vec(g, [0.5, -0.5, 0.2]))


def test_hull_infeasible():
    g = ground(2)
    A = mk.Subspace(g, [vec(g, [0, 1])])
    assert not mk.hull_contains(A, vec(g, [1, 0]))


def test_hull_nonneg_basis_vector():
    g = ground(3)
    f = vec(g, [1, 0, 2])
    A = mk.Subspace(g, [f])
    assert mk.hull_contains(A, f)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_hull_equals_hull_of_abs(seed):
    rng = np.random.default_rng(seed)
    g = ground(int(rng.integers(2, 9)))
    A = random_subspace_with_one(rng, g, int(rng.integers(1, 4)))
    f = vec(g, rng.normal(size=g.size))
    assert mk.hull_contains(A, f) == mk.hull_contains(A, f.abs())


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_hull_agrees_with_bruteforce_witness(seed):
    # exhaustive coefficient search over [-M, M]^k at step M/50, k <= 2
    rng = np.random.default_rng(seed)
    g = ground(int(rng.integers(2, 9)))
    k = int(rng.integers(1, 3))
    basis = []
    while len(basis) < k:
        cand = vec(g, rng.normal(size=g.size))
        try:
            mk.Subspace(g, basis + [cand])
        except ValueError:
            continue
        basis.append(cand)
    A = mk.Subspace(g, basis)
    f = vec(g, rng.normal(size=g.size))

    M = 4.0
    axis = np.arange(-M, M + 1e-9, M / 50)
    if k == 1:
        combos = axis[:, None]
    else:
        xx, yy = np.meshgrid(axis, axis, indexing="ij")
        combos = np.column_stack([xx.ravel(), yy.ravel()])
    values = combos @ A.matrix.T  # candidates x points
    witness_found = bool(np.any(np.all(values >= np.abs(f.values)[None, :], axis=1)))
    if witness_found:
        assert mk.hull_contains(A, f)


# --- dominates -------------------------------------------------------------------

def test_dominates_plain():
    g = ground(2)
    B0 = mk.Subspace(g, [])
    assert mk.dominates(vec(g, [1, 1]), vec(g, [10, 10]), B0, 0.1)


def test_dominates_zero_f_infeasible():
    g = ground(2)
    B0 = mk.Subspace(g, [])
    assert not mk.dominates(vec(g, [1, 1]), vec(g, [0, 0]), B0, 0.5)


def test_dominates_with_constants_always():
    g = ground(3)
    B = mk.Subspace(g, [ones(g)])
    rng = np.random.default_rng(0)
    for _ in range(5):
        gv = vec(g, rng.normal(size=3))
        fv = vec(g, rng.normal(size=3))
        assert mk.dominates(gv, fv, B, 1e-6)


def test_dominates_requires_positive_eps():
    g = ground(1)
    with pytest.raises(ValueError):
        mk.dominates(vec(g, [1.0]), vec(g, [1.0]), mk.Subspace(g, []), 0.0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_dominates_monotone_in_eps(seed):
    rng = np.random.default_rng(seed)
    g = ground(int(rng.integers(2, 8)))
    B = random_subspace_with_one(rng, g, int(rng.integers(0, 3)) or 1)
    gv = vec(g, rng.normal(size=g.size))
    fv = vec(g, rng.normal(size=g.size))
    eps1, eps2 = sorted(rng.uniform(0.01, 2.0, 2))
    if mk.dominates(gv, fv, B, eps1):
        assert mk.dominates(gv, fv, B, eps2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_dominates_monotone_in_subspace(seed):
    rng = np.random.default_rng(seed)
    g = ground(int(rng.integers(3, 8)))
    small = random_subspace_with_one(rng, g, 1)
    extra = vec(g, rng.normal(size=g.size))
    if small.contains(extra):
        return
    big = small.extended_by(extra)
    gv = vec(g, rng.normal(size=g.size))
    fv = vec(g, rng.normal(size=g.size))
    eps = float(rng.uniform(0.05, 1.0))
    if mk.dominates(gv, fv, small, eps):
        assert mk.dominates(gv, fv, big, eps)


# --- check_adapted ----------------------------------------------------------------

def test_adapted_constants_pass_all_eps():
    g = ground(2)
    A = mk.Subspace(g, [ones(g)])
    report = mk.check_adapted(A, A, eps_schedule=(1.0, 1e-3, 1e-6), candidates=[ones(g)])
    assert report.passed
    assert report.entries[0].witness_index == 0
    assert all(ok for _, ok in report.entries[0].trials[0].results)


def test_adapted_threshold_at_eps_one():
    g = ground(2)
    f = vec(g, [1, 1])
    A = mk.Subspace(g, [f])
    B0 = mk.Subspace(g, [])
    report = mk.check_adapted(A, B0, eps_schedule=(1.0, 0.1), candidates=[f])
    assert not report.passed
    results = dict(report.entries[0].trials[0].results)
    assert results[1.0] is True and results[0.1] is False  # threshold exposed
    # at eps >= 1 alone the candidate passes
    assert mk.check_adapted(A, B0, eps_schedule=(1.0,), candidates=[f]).passed


def test_adapted_empty_domain_vacuous():
    g = ground(2)
    empty = mk.Subspace(g, [])
    report = mk.check_adapted(empty, empty, candidates=[ones(g)])
    assert report.passed and report.entries == ()


def test_adapted_schedule_validation():
    g = ground(2)
    A = mk.Subspace(g, [ones(g)])
    with pytest.raises(ValueError):
        mk.check_adapted(A, A, eps_schedule=(0.1, 1.0), candidates=[ones(g)])
    with pytest.raises(ValueError):
        mk.check_adapted(A, A, eps_schedule=(), candidates=[ones(g)])
    with pytest.raises(ValueError):
        mk.check_adapted(A, A, eps_schedule=(1.0,), candidates=[])


def test_default_candidates_include_square_and_one():
    g = ground(3)
    ramp = vec(g, [0, 1, 2])
    sq = vec(g, [0, 1, 4])
    A = mk.Subspace(g, [ones(g), ramp, sq])  # closed under squaring the ramp
    cands = mk.default_candidates(A)
    values = [c.values.tolist() for c in cands]
    assert [0, 1, 4] in values  # square of the ramp is in the span
    assert [1, 1, 1] in values
