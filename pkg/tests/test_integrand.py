import math

import numpy as np
import pytest

from rectify.convergence import RefinementSchedule
from rectify.curves import (
    Partition,
    cantor_graph,
    circle,
    constant,
    from_catalog,
    helix,
    length,
    random_trig_curve,
    sampled,
    segment,
    sin2k,
    variation_sum,
)
from rectify.errors import HomogeneityError, HypothesisViolated, MissingDerivative
from rectify.integrand import (
    AREA2D,
    NORM,
    ZERO,
    ParametricIntegrand,
    check_homogeneity,
    continuity_of_integral,
    discrete_tangent,
    integrand_by_name,
    invariance_under_reparam,
    l2_tangent_convergence,
    line_integral,
    line_integral_ac,
    polygon_family,
    riemann_cesari_sum,
    tags,
    tangent_deviation_bound_check,
)

TWO_PI = 2 * math.pi


def circle_l2_deviation(n):
    """Closed form of the tangent deviation for the unit circle on n cells."""
    h = TWO_PI / n
    return n * (h - 4 * math.sin(h / 2) ** 2 / h)


# ------------------------------------------------------------ homogeneity


def test_norm_homogeneous():
    assert check_homogeneity(NORM).max_defect <= 1e-15


def test_area_homogeneous():
    assert check_homogeneity(AREA2D).max_defect <= 1e-15


def test_norm_squared_rejected():
    rep = check_homogeneity(integrand_by_name("normsq"))
    assert not rep.passed and rep.max_defect > 1


def test_gate_refuses():
    with pytest.raises(HomogeneityError):
        line_integral(circle(), integrand_by_name("normsq"))


def test_unknown_integrand():
    with pytest.raises(KeyError):
        integrand_by_name("curl")


# ------------------------------------------------------------------- tags


@pytest.mark.parametrize("rule", ["left", "mid", "right"])
def test_tags_in_cells(rule):
    P = Partition.uniform(0, 1, 8)
    xi = tags(P, rule)
    assert np.all((xi >= P.points[:-1]) & (xi <= P.points[1:]))


def test_random_tags_need_seed():
    P = Partition.uniform(0, 1, 8)
    with pytest.raises(ValueError):
        tags(P, "random")
    np.testing.assert_array_equal(tags(P, "random", 3), tags(P, "random", 3))
    with pytest.raises(ValueError):
        tags(P, "median")


# -------------------------------------------------------------------- sums


def test_norm_sum_is_variation_sum(rng):
    C = random_trig_curve(rng, dim=3)
    P = Partition.uniform(C.lo, C.hi, 37)
    assert riemann_cesari_sum(C, NORM, P, "random", seed=1) == variation_sum(C, P)


def test_zero_integrand():
    assert riemann_cesari_sum(circle(), ZERO, Partition.uniform(0, TWO_PI, 10)) == 0.0


def test_circle_area_sum_n1024():
    P = Partition.uniform(0, TWO_PI, 1024)
    assert abs(riemann_cesari_sum(circle(), AREA2D, P, "mid") - TWO_PI) <= 1e-4


@pytest.mark.parametrize("name", ["segment", "circle", "helix", "sin2k", "cantor"])
def test_norm_line_integral_is_length(name):
    C = from_catalog(name)
    I = line_integral(C, NORM, cross_rule=None, early_stop=False).values
    L = length(C, early_stop=False).values
    np.testing.assert_array_equal(I, L)


def test_area_line_integral_circle():
    r = line_integral(circle(), AREA2D, tol=1e-8)
    assert r.limit_estimate == pytest.approx(TWO_PI, abs=1e-6)
    # tag independence
    assert abs(r.limit_estimate - r.extras["cross_limit"]) <= 2e-6


def test_area_constant_curve():
    assert line_integral(constant([0.3, 0.2]), AREA2D).limit_estimate == 0.0


# ---------------------------------------------------------- AC reduction


def test_ac_circle():
    assert line_integral_ac(circle(), NORM) == pytest.approx(TWO_PI, abs=1e-12)
    assert line_integral_ac(circle(), AREA2D) == pytest.approx(TWO_PI, abs=1e-12)


def test_ac_segment_area_zero():
    assert line_integral_ac(segment([0, 0], [1, 0]), AREA2D) == 0.0


def test_ac_needs_derivative():
    with pytest.raises(MissingDerivative):
        line_integral_ac(cantor_graph(4), NORM)


@pytest.mark.parametrize("curve", [circle(), helix(), sin2k(3), circle(speed=2.0, radius=0.7)])
def test_line_integral_matches_ac(curve):
    F = AREA2D if curve.dim == 2 else NORM
    I = line_integral(curve, F, tol=1e-9, cross_rule=None).limit_estimate
    J = line_integral_ac(curve, F)
    assert abs(I - J) <= 1e-5 * max(1.0, abs(J))


# ----------------------------------------------------------- tangents


def test_segment_tangent():
    rng = np.random.default_rng(0)
    P = Partition(np.sort(np.r_[0, rng.uniform(0, 1, 9), 1]))
    dt = discrete_tangent(segment(), P)
    np.testing.assert_allclose(dt.values, np.tile([0.6, 0.8], (P.cells, 1)), atol=1e-14)


def test_plateau_tangent_zero_mass():
    C = sampled([0, 1, 2], [[0, 0], [1, 0], [1, 0]])
    dt = discrete_tangent(C, Partition([0, 1, 2]))
    np.testing.assert_allclose(dt.values, [[1, 0], [0, 0]])
    assert dt.mu_masses[1] == 0


def test_circle_tangent_norms():
    n = 256
    h = TWO_PI / n
    dt = discrete_tangent(circle(), Partition.uniform(0, TWO_PI, n))
    np.testing.assert_allclose(np.linalg.norm(dt.values, axis=1), math.sin(h / 2) / (h / 2), atol=1e-12)


def test_tangent_norms_at_most_one(rng):
    C = random_trig_curve(rng)
    dt = discrete_tangent(C, Partition.uniform(C.lo, C.hi, 50))
    assert np.all(np.linalg.norm(dt.values, axis=1) <= 1 + 1e-12)


def test_deviation_bound_segment():
    lhs, rhs = tangent_deviation_bound_check(segment(), Partition.uniform(0, 1, 5))
    assert lhs == pytest.approx(0, abs=1e-14) and rhs == pytest.approx(0, abs=1e-13)


@pytest.mark.parametrize("n", [64, 4096])
def test_deviation_bound_circle(n):
    lhs, rhs = tangent_deviation_bound_check(circle(), Partition.uniform(0, TWO_PI, n))
    h = TWO_PI / n
    assert lhs == pytest.approx(circle_l2_deviation(n), rel=1e-6)
    assert rhs == pytest.approx(2 * (TWO_PI - 2 * n * math.sin(h / 2)), rel=1e-6)
    assert lhs <= rhs + 1e-9 and 1 <= rhs / lhs <= 2.01


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("n", [7, 64, 500])
def test_deviation_bound_random_curves(seed, n):
    C = random_trig_curve(np.random.default_rng(seed), dim=3)
    lhs, rhs = tangent_deviation_bound_check(C, Partition.uniform(C.lo, C.hi, n))
    assert lhs <= rhs + 1e-9


def test_deviation_needs_derivative():
    with pytest.raises(MissingDerivative):
        tangent_deviation_bound_check(cantor_graph(4), Partition([0, 1]))


def test_l2_segment_zero():
    r = l2_tangent_convergence(segment())
    assert max(r.values) <= 1e-14


def test_l2_circle():
    r = l2_tangent_convergence(circle(), RefinementSchedule(4, 13))
    for n, v in zip(RefinementSchedule(4, 13).sizes(), r.values):
        assert v == pytest.approx(circle_l2_deviation(n), rel=1e-6)
    # (2 pi)^3 / (12 n^2) is 1.23e-6 at n = 2^12, below 1e-6 one level later
    assert r.values[-2] == pytest.approx(1.2320786e-6, rel=1e-6)
    assert r.values[-1] <= 1e-6
    assert np.all(np.diff(r.values) < 0)


def test_l2_helix():
    r = l2_tangent_convergence(helix(), RefinementSchedule(4, 12), tol=1e-5)
    assert r.converged and np.all(np.diff(r.values) < 0)


# ---------------------------------------------------------- theorems


def test_invariance_circle_area():
    I_C, I_D = invariance_under_reparam(circle(), AREA2D)
    assert I_C == pytest.approx(TWO_PI, abs=1e-4) and I_D == pytest.approx(TWO_PI, abs=1e-4)


def test_invariance_double_speed_norm():
    I_C, I_D = invariance_under_reparam(circle(speed=2.0), NORM)
    assert I_C == pytest.approx(TWO_PI, abs=1e-4) and I_D == pytest.approx(TWO_PI, abs=1e-4)


def test_invariance_segment_exact():
    I_C, I_D = invariance_under_reparam(segment(), AREA2D)
    assert I_C == I_D


def test_continuity_polygons_norm():
    rep = continuity_of_integral(polygon_family(circle(), range(3, 12)), circle(), NORM)
    for k, I in zip(range(3, 12), rep.integrals):
        n = 2 ** k
        assert I == pytest.approx(2 * n * math.sin(math.pi / n), abs=1e-12)
    assert rep.monotone and rep.errors[-1] <= 1e-4


def test_continuity_polygons_area():
    rep = continuity_of_integral(polygon_family(circle(), range(3, 12)), circle(), AREA2D)
    for k, I in zip(range(3, 12), rep.integrals):
        n = 2 ** k
        assert I == pytest.approx(n * math.sin(2 * math.pi / n), abs=1e-9)
    assert rep.monotone


def test_continuity_constant_family():
    fam = [constant([0.1 * k, 0.0]) for k in range(1, 4)]
    rep = continuity_of_integral(fam, constant([0.0, 0.0]), AREA2D)
    assert rep.integrals == [0.0, 0.0, 0.0] and rep.limit_integral == 0.0


def test_continuity_hypothesis_guard():
    # a twice traversed circle has twice the length
    with pytest.raises(HypothesisViolated):
        continuity_of_integral(polygon_family(circle(domain=(0, 2 * TWO_PI)), [6, 8]), circle(), NORM)
