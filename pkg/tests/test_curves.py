import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rectify.convergence import RefinementSchedule
from rectify.curves import (
    Partition,
    arc_length_function,
    cantor_graph,
    cantor_graph_length,
    cantor_nodes,
    check_derivative,
    circle,
    constant,
    coordinate_variation,
    evaluate,
    from_catalog,
    helix,
    length,
    polyline,
    random_trig_curve,
    sampled,
    segment,
    sin2k,
    speed_integral,
    variation_sum,
)
from rectify.errors import DomainError

MILLION = 10 ** 6


# ------------------------------------------------------------ evaluation


def test_evaluate_segment_endpoint():
    np.testing.assert_allclose(evaluate(segment(), 1.0), [3.0, 4.0])


def test_evaluate_sampled_midpoint():
    np.testing.assert_allclose(evaluate(sampled([0, 1], [[0, 0], [2, 0]]), 0.5), [1.0, 0.0])


def test_evaluate_circle_origin():
    np.testing.assert_allclose(evaluate(circle(), 0.0), [1.0, 0.0])


@pytest.mark.parametrize("x", [-1e-3, 1.001, float("nan")])
def test_out_of_domain_is_an_error(x):
    with pytest.raises(DomainError):
        evaluate(segment(), x)


def test_sampled_validation():
    with pytest.raises(ValueError):
        sampled([0, 0, 1], [[0], [1], [2]])
    with pytest.raises(ValueError):
        sampled([0, 1], [[0], [1], [2]])


@pytest.mark.parametrize("curve", [circle(), helix(), sin2k(3), segment(), circle(speed=2.0)])
def test_derivatives_match_finite_differences(curve):
    assert check_derivative(curve) <= 1e-5


def test_derivative_self_check_catches_wrong_evaluator():
    c = circle()
    bad = type(c)(c.lo, c.hi, 2, c.func, lambda t: 2 * c.deriv(t), name="bad")
    with pytest.raises(ValueError):
        check_derivative(bad)


# ------------------------------------------------------------ partitions


def test_partition_invariants():
    with pytest.raises(ValueError):
        Partition([0.0])
    with pytest.raises(ValueError):
        Partition([0.0, 0.5, 0.5, 1.0])
    P = Partition.uniform(0, 1, 4)
    assert P.norm == 0.25 and P.cells == 4
    Q = P.refine(3)
    assert Q.is_refinement_of(P) and Q.cells == 12
    assert P.union([0.1, 2.0]).cells == 5


def test_partition_for_curve_merges_breakpoints():
    c = polyline([[0, 0], [1, 0], [1, 1]])
    P = Partition.for_curve(c, 3)
    assert 0.5 in P.points


# --------------------------------------------------------- variation sums


def test_segment_any_partition(rng):
    P = Partition(np.sort(np.r_[0.0, rng.uniform(0, 1, 17), 1.0]))
    assert variation_sum(segment(), P) == pytest.approx(5.0, abs=1e-14)


def test_constant_curve_zero():
    assert variation_sum(constant(), Partition.uniform(0, 1, 9)) == 0.0


def _brute_force_variation(curve, m=None):
    x = np.linspace(curve.lo, curve.hi, MILLION + 1)
    d = np.diff(curve(x), axis=0)
    return float(np.abs(d[:, m - 1]).sum()) if m else float(np.linalg.norm(d, axis=1).sum())


def test_sin2k_against_million_point_oracle():
    C = sin2k(4)
    oracle = _brute_force_variation(C)
    assert oracle == pytest.approx(4.0, abs=1e-9)
    # 4096 grid points, so the peaks at odd multiples of pi/8 are missed slightly
    v = variation_sum(C, Partition.uniform(C.lo, C.hi, 4095))
    assert v == pytest.approx(oracle, abs=1e-5)
    assert variation_sum(C, Partition.uniform(C.lo, C.hi, 4096)) == pytest.approx(oracle, abs=1e-9)


def test_coordinate_variation_segment():
    P = Partition.uniform(0, 1, 7)
    assert coordinate_variation(segment(), 1, P) == pytest.approx(3.0)
    assert coordinate_variation(segment(), 2, P) == pytest.approx(4.0)
    with pytest.raises(IndexError):
        coordinate_variation(segment(), 3, P)


def test_coordinate_variation_circle_oracle():
    C = circle()
    oracle = _brute_force_variation(C, m=1)
    assert oracle == pytest.approx(4.0, abs=1e-9)
    assert coordinate_variation(C, 1, Partition.uniform(C.lo, C.hi, 2 ** 14)) == pytest.approx(oracle, abs=1e-7)


def test_coordinate_variation_constant():
    assert coordinate_variation(constant(), 2, Partition.uniform(0, 1, 5)) == 0.0


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), extra=st.integers(1, 30))
def test_refinement_monotone_property(seed, extra):
    rng = np.random.default_rng(seed)
    C = random_trig_curve(rng, dim=3)
    P = Partition(np.sort(np.r_[C.lo, rng.uniform(C.lo, C.hi, 5), C.hi]))
    Q = P.union(rng.uniform(C.lo, C.hi, extra))
    assert variation_sum(C, Q) >= variation_sum(C, P) - 1e-12


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(1, 200))
def test_sandwich_property(seed, n):
    rng = np.random.default_rng(seed)
    C = random_trig_curve(rng, dim=int(rng.integers(1, 4)))
    P = Partition.uniform(C.lo, C.hi, n)
    v = variation_sum(C, P)
    coords = [coordinate_variation(C, m, P) for m in range(1, C.dim + 1)]
    assert max(coords) <= v + 1e-12
    assert v <= sum(coords) + 1e-12


# ----------------------------------------------------------------- length


def test_circle_length():
    r = length(circle(), tol=1e-9, early_stop=False)
    assert r.limit_estimate == pytest.approx(2 * math.pi, abs=1e-6)
    assert np.all(np.diff(r.values) >= 0)


def test_segment_length_every_level():
    r = length(segment())
    assert np.all(r.values == 5.0)


def test_cantor_length_closed_form():
    C = cantor_graph(12)
    r = length(C)
    assert r.limit_estimate == pytest.approx(cantor_graph_length(12), abs=1e-12)
    # the polygon is exact on its own breakpoints
    bx, _ = cantor_nodes(12)
    assert variation_sum(C, Partition(bx)) == pytest.approx(cantor_graph_length(12), abs=1e-12)


def test_cantor_length_tends_to_two():
    assert abs(length(cantor_graph(18)).limit_estimate - 2.0) <= 1e-3


@pytest.mark.parametrize("curve", [circle(), helix(), sin2k(2), circle(speed=3.0, radius=0.5)])
def test_ac_identity(curve):
    L = length(curve, tol=1e-10).limit_estimate
    q = speed_integral(curve)
    assert abs(L - q) / q <= 1e-6


def test_cantor_strict_inequality():
    C = cantor_graph(12)
    gap = length(C).limit_estimate - speed_integral(C)
    assert gap >= 0.9


def test_polygonal_interpolants_lower_semicontinuous():
    C = circle()
    L = length(C, tol=1e-10).limit_estimate
    for k in range(2, 12):
        x = np.linspace(C.lo, C.hi, 2 ** k + 1)
        Ck = sampled(x, C(x))
        assert variation_sum(Ck, Partition(x)) <= L + 1e-9


def test_non_convergence_flag():
    r = length(circle(), RefinementSchedule(2, 4), tol=1e-12)
    assert not r.converged


# ------------------------------------------------------- arc length function


def test_arc_length_segment():
    s = arc_length_function(segment(), Partition.uniform(0, 1, 4))
    assert s(0.5) == pytest.approx(2.5)


def test_arc_length_circle_half():
    C = circle()
    s = arc_length_function(C, Partition.uniform(C.lo, C.hi, 2))
    assert s(math.pi) == pytest.approx(math.pi, abs=1e-6)
    assert s.s[0] == 0 and np.all(np.diff(s.s) >= 0)


def test_arc_length_constant():
    s = arc_length_function(constant(), Partition.uniform(0, 1, 8))
    assert np.all(s.s == 0)


def test_catalog_lookup():
    assert from_catalog("helix").dim == 3
    with pytest.raises(KeyError):
        from_catalog("spiral")
