import math
from fractions import Fraction

import numpy as np
import pytest

from rectify.bc import (
    DiscreteMeasure,
    Interval,
    JumpCurve,
    QNum,
    System,
    bc_integral,
    check_nonoverlap,
    check_space,
    cube_integral,
    example_catalog,
    level_set_members,
    parse_example_uri,
    parse_function,
    penalty_mesh,
    prime_system,
    qa_certify,
    qa_deficits,
    step_curve,
    unit_speed_integral,
    variation,
    weierstrass_integral,
)
from rectify.curves import circle, constant, from_catalog, helix, sin2k
from rectify.errors import HomogeneityError, UnknownExample
from rectify.integrand import AREA2D, NORM, integrand_by_name, line_integral

TWO_PI = 2 * math.pi


# ------------------------------------------------------- catalog contract


@pytest.mark.parametrize("ident", range(1, 12))
def test_every_example_builds(ident):
    cfg = example_catalog(ident)
    assert cfg.id == ident and cfg.provenance and len(cfg.targets) >= 3


@pytest.mark.parametrize("bad", [0, 12, "seven", None])
def test_unknown_example(bad):
    with pytest.raises(UnknownExample):
        example_catalog(bad)


@pytest.mark.parametrize("ident", range(1, 11))
def test_spaces_well_formed(ident):
    check_space(example_catalog(ident).space, [2.0 ** -k for k in range(2, 7)], seed=ident)


def test_uri():
    assert parse_example_uri("bc://example/9?f=x^2&m=1") == (9, {"f": "x^2", "m": "1"})
    with pytest.raises(UnknownExample):
        parse_example_uri("http://example/9")
    with pytest.raises(UnknownExample):
        parse_example_uri("bc://example/nine")


# ---------------------------------------------------- coverage examples


@pytest.mark.parametrize("ident", [1, 3])
def test_length_examples_exact(ident):
    r = example_catalog(ident).integral()
    assert r.converged and r.limit_estimate == pytest.approx(1.0, abs=1e-9)


def test_off_zero_example():
    r = example_catalog(2).integral()
    assert r.converged and r.limit_estimate == pytest.approx(1.0, abs=1e-4)


def test_off_zero_systems_avoid_zero():
    cfg = example_catalog(2)
    for k in range(4):
        D = cfg.space.system(2.0 ** -(k + 3), seed=k, full=True)
        assert D.lo_float.min() > 0


def test_at_zero_systems_start_at_zero():
    cfg = example_catalog(3)
    for k in range(4):
        assert cfg.space.system(2.0 ** -(k + 3), seed=k).lo_float.min() == 0


def test_subset_stability():
    cfg = example_catalog(1)
    r = cfg.integral(S=Interval(0.0, 0.5))
    assert r.limit_estimate == pytest.approx(0.5, abs=1e-3)
    D0 = cfg.space.system(0.05, seed=1, full=True)
    D = cfg.space.system(0.0005, seed=2, full=True)
    rep = qa_deficits(cfg.space, cfg.phi, D0, D, S=Interval(0.0, 0.5))
    assert rep.qa1_deficit + rep.qa2_deficit < 0.05


# ------------------------------------------------------ exact endpoints


def test_penalty_mesh_anomaly():
    a = example_catalog(4).related["anomaly"]
    assert penalty_mesh(a["coarse"]) == 3.0
    assert penalty_mesh(a["halves"]) == 3.5


@pytest.mark.parametrize("eps", [0.1, 0.01])
def test_prime_system(eps):
    D = prime_system(eps)
    assert check_nonoverlap(D) and D.exact
    assert penalty_mesh(D) < eps
    # cuts j/M + 1/M^2 leave 1/M^2 uncovered at each end
    M = len(D)
    assert sum(Fraction(b.rational - a.rational) for a, b in zip(D.lo, D.hi)) == 1 - Fraction(2, M * M)


def test_penalty_example_integral():
    r = example_catalog(4).integral()
    assert r.limit_estimate == pytest.approx(1.0, abs=1e-8)


def test_penalty_example_prime_construction():
    r = example_catalog(4, construction="prime").integral()
    M = len(prime_system(r.meshes[-1]))
    assert r.limit_estimate == pytest.approx(1 - 2 / M ** 2, abs=1e-12)


def test_irrational_endpoints():
    cfg = example_catalog(5)
    D = cfg.space.system(0.01, seed=0, full=True)
    assert all(not q.is_rational for q in np.r_[D.lo, D.hi])
    assert cfg.integral().limit_estimate == pytest.approx(1.0, abs=1e-8)
    assert qa_certify(cfg.space, cfg.phi, [0.1]).certified


def test_rational_endpoints_signed():
    cfg = example_catalog(6)
    D = cfg.space.system(0.01, seed=0, full=True)
    assert all(q.is_rational for q in np.r_[D.lo, D.hi])
    r = cfg.integral()
    assert r.converged and r.limit_estimate == pytest.approx(-1.0, abs=1e-9)


# ----------------------------------------------------------- Jordan length


def test_jordan_length_circle():
    r = example_catalog(7).integral()
    assert r.limit_estimate == pytest.approx(TWO_PI, abs=1e-6)


def test_jordan_length_sin2k():
    cfg = example_catalog(7, curve=sin2k(4))
    assert cfg.integral().limit_estimate == pytest.approx(4.0, abs=1e-6)
    v = variation(cfg.space, cfg.related["vector"], targets=cfg.targets)
    assert v == pytest.approx(4.0, abs=1e-5)


def test_jordan_components():
    cfg = example_catalog(7)
    assert cfg.integral(phi=cfg.related["component_1"]).limit_estimate == pytest.approx(0.0, abs=1e-12)
    pos = cfg.integral(phi=cfg.related["positive_1"]).limit_estimate
    neg = cfg.integral(phi=cfg.related["negative_1"]).limit_estimate
    assert pos == pytest.approx(2.0, abs=1e-6) and neg == pytest.approx(2.0, abs=1e-6)


def test_jordan_deficits_match_chord_oracle():
    cfg = example_catalog(7)
    vec, c = cfg.related["vector"], circle()
    D0 = cfg.space.system(0.1, seed=1, full=True)
    cuts0 = np.r_[D0.lo, D0.hi[-1]]
    D = System.from_cuts(np.union1d(cuts0, np.linspace(0, 1, 1001)))
    assert qa_deficits(cfg.space, vec, D0, D).qa1_deficit <= 1e-12
    rep = qa_deficits(cfg.space, cfg.phi, D0, D)
    chords = np.linalg.norm(np.diff(c(TWO_PI * cuts0), axis=0), axis=1).sum()
    fine = np.linalg.norm(np.diff(c(TWO_PI * np.r_[D.lo_float, 1.0]), axis=0), axis=1).sum()
    assert rep.qa1_deficit == pytest.approx(fine - chords, abs=1e-12)
    assert rep.qa2_deficit == 0


def test_norm_inheritance():
    cfg = example_catalog(7)
    vec = cfg.related["vector"]
    if qa_certify(cfg.space, vec, [0.1], strict=False).certified:
        assert qa_certify(cfg.space, vec.norm(), [0.1], strict=False).certified


def test_helix_jordan_length():
    h = helix()
    cfg = example_catalog(7, curve=h)
    assert cfg.integral().limit_estimate == pytest.approx(cfg.expected, abs=1e-6)


# --------------------------------------------------------- jump curves


def test_step_curve():
    cfg = example_catalog(8)
    assert cfg.integral().limit_estimate == 1.0
    assert cfg.related["sigma"] == 1.0


def test_saltus_two_sided():
    jc = JumpCurve((0.0, 0.5, 1.0), (lambda t: np.zeros((t.size, 1)), lambda t: np.full((t.size, 1), 2.0)), 1,
                   {0.5: np.array([0.5])}, "mid valued step")
    assert jc.saltus()[0.5] == pytest.approx(2.0)
    cfg = example_catalog(8, curve=jc)
    assert cfg.integral().limit_estimate == pytest.approx(2.0, abs=1e-9)


def test_step_variation():
    cfg = example_catalog(8)
    assert variation(cfg.space, cfg.related["vector"], targets=cfg.targets) == pytest.approx(1.0)


# ------------------------------------------------------------ Cauchy


def test_parse_function():
    f = parse_function("x^2 + 1")
    np.testing.assert_allclose(f(np.array([[0.0], [2.0]])), [1.0, 5.0])
    g = parse_function("x1*x2", 2)
    np.testing.assert_allclose(g(np.array([[2.0, 3.0]])), [6.0])
    with pytest.raises(ValueError):
        parse_function("x +* 2")


def test_cube_integral():
    assert cube_integral("x^2") == pytest.approx(1 / 3)
    assert cube_integral("x*y", 2) == pytest.approx(0.25)


def test_cauchy_x_squared():
    r = example_catalog(9, f="x^2").integral()
    assert r.limit_estimate == pytest.approx(1 / 3, abs=1e-8)


@pytest.mark.parametrize("tag", ["lo", "hi"])
def test_cauchy_tags_bracket(tag):
    cfg = example_catalog(9, f="x^2")
    v = cfg.integral(phi=cfg.related[tag]).limit_estimate
    assert v == pytest.approx(1 / 3, abs=1e-4)


def test_cauchy_square():
    r = example_catalog(9, f="x*y", m=2).integral()
    assert r.limit_estimate == pytest.approx(0.25, abs=1e-4)


def test_cauchy_quasi_subadditive_then_additive():
    cfg = example_catalog(9, f="x^2")
    D0 = cfg.space.system(0.1, seed=1, full=True)
    D = cfg.space.system(0.001, seed=2, full=True)
    assert qa_deficits(cfg.space, cfg.phi, D0, D).qsa_deficit < 0.05
    assert qa_certify(cfg.space, cfg.phi, [0.05]).certified


# ---------------------------------------------------- Lebesgue-Stieltjes


def test_discrete_measure():
    mu = DiscreteMeasure.from_function(np.arange(1, 10) / 10, np.full(9, 1 / 9), "x")
    assert mu.integral == pytest.approx(0.5)
    assert mu.level_measure(0.25, 0.55) == pytest.approx(3 / 9)
    assert mu.atom_mass(0.3) == pytest.approx(1 / 9) and mu.atom_mass(0.35) == 0
    np.testing.assert_array_equal(level_set_members(mu, 0.25, 0.55), [2, 3, 4])


def test_lebesgue_stieltjes_mean():
    r = example_catalog(10).integral()
    assert r.limit_estimate == pytest.approx(0.5, abs=1e-2)
    # lower sums approach from below at a rate proportional to the mesh
    assert all(v <= 0.5 + 1e-12 for v in r.values)


def test_lebesgue_stieltjes_other_function():
    cfg = example_catalog(10, f="x^2")
    assert cfg.expected == pytest.approx(np.mean((np.arange(1, 10) / 10) ** 2))
    assert cfg.integral().limit_estimate == pytest.approx(cfg.expected, abs=1e-2)


# ----------------------------------------------------------- Weierstrass


def test_weierstrass_circle_triple_agreement():
    r = weierstrass_integral(circle(), AREA2D)
    assert r.limit_estimate == pytest.approx(TWO_PI, abs=1e-6)
    assert r.extras["gap_line"] <= 1e-5 and r.extras["gap_lebesgue"] <= 1e-5


def test_weierstrass_norm_is_length():
    r = weierstrass_integral(sin2k(3), NORM)
    assert r.limit_estimate == pytest.approx(3.0, abs=1e-6)


def test_weierstrass_constant_curve():
    r = weierstrass_integral(constant([0.2, 0.4]), AREA2D, cross_check=False)
    assert r.limit_estimate == 0.0


@pytest.mark.parametrize("rule", ["left", "right", "random"])
def test_weierstrass_tau_independence(rule):
    mid = weierstrass_integral(circle(), AREA2D, cross_check=False).limit_estimate
    other = weierstrass_integral(circle(), AREA2D, tau_rule=rule, cross_check=False).limit_estimate
    assert abs(mid - other) <= 2e-6


def test_weierstrass_rejects_inhomogeneous():
    with pytest.raises(HomogeneityError):
        example_catalog(11, integrand="normsq")


def test_unit_speed_form_helix():
    h = helix()
    assert unit_speed_integral(h, NORM) == pytest.approx(line_integral(h, NORM).limit_estimate, abs=1e-6)


# ------------------------------------------------------------- sandwich


@pytest.mark.parametrize("ident", [1, 2, 3, 6, 7, 8, 9])
def test_sandwich(ident):
    cfg = example_catalog(ident)
    B = cfg.integral(phi=cfg.phi.norm()).limit_estimate
    t = cfg.targets[-1]
    V = variation(cfg.space, cfg.phi, budget=12, targets=[2 * t, t, t / 2, t / 4])
    assert B <= V + 1e-9
