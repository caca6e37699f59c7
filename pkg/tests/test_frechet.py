import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rectify.curves import circle, constant, length, segment
from rectify.arclen import reparametrize
from rectify.errors import DimensionMismatch
from rectify.frechet import (
    coupling_cost,
    discrete_frechet,
    frechet_distance_curves,
    premetric_check,
)
from rectify.convergence import RefinementSchedule


def _monotone_couplings(n, m):
    """Every monotone lattice path from (0, 0) to (n - 1, m - 1)."""
    def walk(i, j):
        if (i, j) == (n - 1, m - 1):
            yield [(i, j)]
            return
        for di, dj in ((1, 1), (1, 0), (0, 1)):
            a, b = i + di, j + dj
            if a < n and b < m:
                for rest in walk(a, b):
                    yield [(i, j)] + rest
    yield from walk(0, 0)


def brute_force(P, Q):
    P, Q = np.atleast_2d(P), np.atleast_2d(Q)
    return min(coupling_cost(P, Q, c) for c in _monotone_couplings(len(P), len(Q)))


def test_identical_polylines():
    P = np.random.default_rng(0).standard_normal((12, 3))
    assert discrete_frechet(P, P).distance == 0.0


def test_parallel_segments_11_vertices():
    x = np.linspace(0, 1, 11)
    P = np.column_stack([x, np.zeros(11)])
    Q = np.column_stack([x, np.full(11, 0.1)])
    d = discrete_frechet(P, Q).distance
    assert d == pytest.approx(0.1, abs=1e-15)
    # exhaustive oracle on a smaller grid of the same shape
    assert brute_force(P[::2], Q[::2]) == pytest.approx(d, abs=1e-15)


def test_parallel_segments_oracle_11x11():
    x = np.linspace(0, 1, 11)
    P = np.column_stack([x, np.zeros(11)])
    Q = np.column_stack([x, np.full(11, 0.1)])
    # every pair is at least 0.1 apart and the identity coupling attains 0.1,
    # so 0.1 is the minimum over all monotone couplings
    pairs = np.linalg.norm(P[:, None, :] - Q[None, :, :], axis=2)
    assert pairs.min() == pytest.approx(0.1)
    assert coupling_cost(P, Q, [(i, i) for i in range(11)]) == pytest.approx(0.1)
    assert discrete_frechet(P, Q).distance == pytest.approx(0.1, abs=1e-15)


def test_point_vs_segment():
    Q = np.column_stack([np.linspace(0, 1, 5), np.zeros(5)])
    r = discrete_frechet([[0.0, 0.0]], Q)
    assert r.distance == 1.0
    assert r.coupling == [(0, j) for j in range(5)]


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(1, 6), m=st.integers(1, 6))
def test_dp_matches_brute_force(seed, n, m):
    rng = np.random.default_rng(seed)
    P, Q = rng.standard_normal((n, 2)), rng.standard_normal((m, 2))
    r = discrete_frechet(P, Q)
    assert r.distance == pytest.approx(brute_force(P, Q), abs=1e-14)
    assert coupling_cost(P, Q, r.coupling) == pytest.approx(r.distance, abs=1e-14)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(1, 30), m=st.integers(1, 30))
def test_invariants(seed, n, m):
    rng = np.random.default_rng(seed)
    P, Q = rng.standard_normal((n, 3)), rng.standard_normal((m, 3))
    d = discrete_frechet(P, Q).distance
    assert d == discrete_frechet(Q, P).distance
    assert d >= np.linalg.norm(P[0] - Q[0]) - 1e-12
    assert d >= np.linalg.norm(P[-1] - Q[-1]) - 1e-12
    if n == m:
        assert d <= np.max(np.linalg.norm(P - Q, axis=1)) + 1e-12


def test_coupling_is_monotone_and_deterministic():
    rng = np.random.default_rng(7)
    P, Q = rng.standard_normal((20, 2)), rng.standard_normal((15, 2))
    c = discrete_frechet(P, Q).coupling
    assert c[0] == (0, 0) and c[-1] == (19, 14)
    steps = np.diff(np.array(c), axis=0)
    assert np.all((steps >= 0) & (steps <= 1)) and np.all(steps.sum(axis=1) >= 1)
    assert discrete_frechet(P, Q).coupling == c


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        discrete_frechet(np.zeros((3, 2)), np.zeros((3, 3)))
    with pytest.raises(DimensionMismatch):
        frechet_distance_curves(circle(), constant([0.0, 0.0, 0.0]))


def test_empty_polyline_rejected():
    with pytest.raises(ValueError):
        discrete_frechet(np.zeros((0, 2)), np.zeros((3, 2)))


def test_refinement_stability():
    rng = np.random.default_rng(11)
    P, Q = rng.standard_normal((8, 2)), rng.standard_normal((9, 2))

    def mid(X):
        out = np.empty((2 * len(X) - 1, X.shape[1]))
        out[::2], out[1::2] = X, (X[1:] + X[:-1]) / 2
        return out

    d0 = discrete_frechet(P, Q).distance
    d1 = discrete_frechet(mid(P), mid(Q)).distance
    assert d1 <= d0 + 1e-12


# ------------------------------------------------------------------ curves


def test_double_speed_circle():
    r = frechet_distance_curves(circle(), circle(speed=2.0), RefinementSchedule(4, 12))
    assert r.values[-1] <= 1e-3
    assert r.values[-1] <= r.values[0]


def test_offset_circle():
    r = frechet_distance_curves(circle(), circle(radius=1.1), RefinementSchedule(4, 10))
    assert r.limit_estimate == pytest.approx(0.1, abs=1e-12)


def test_constant_vs_circle():
    r = frechet_distance_curves(constant([0.0, 0.0]), circle(), RefinementSchedule(4, 10))
    assert r.limit_estimate == pytest.approx(1.0, abs=1e-12)


# --------------------------------------------------------------- premetric


def test_premetric_random_triples():
    rng = np.random.default_rng(0)
    rep = premetric_check([rng.standard_normal((10, 2)) for _ in range(3)])
    assert rep.ok and rep.worst_violation <= 1e-12


def test_premetric_rigid_motions():
    x = np.linspace(0, 1, 10)
    S = np.column_stack([x, 2 * x])
    R = S @ np.array([[0.0, -1.0], [1.0, 0.0]])
    rep = premetric_check([S, S + [1.0, -0.5], R])
    assert rep.ok


def test_premetric_identical():
    S = np.random.default_rng(1).standard_normal((10, 2))
    rep = premetric_check([S, S, S])
    assert rep.ok and np.all(rep.distances == 0)


def test_premetric_needs_three():
    with pytest.raises(ValueError):
        premetric_check([np.zeros((2, 2))] * 2)


def test_length_invariance_under_reparametrization():
    C = circle(speed=2.0)
    D = reparametrize(C).as_curve()
    LC, LD = length(C, tol=1e-9).limit_estimate, length(D, tol=1e-9).limit_estimate
    assert abs(LC - LD) / LC <= 1e-6
