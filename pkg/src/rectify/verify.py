"""Seeded property suites.

Each property returns ``(ok, detail)``; :func:`run_suite` times them and
collects :class:`PropertyResult` rows.  Seeds select the random curves,
partitions and systems, so a failing row replays exactly.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import bc
from .arclen import check_unit_speed, lipschitz_defect, reparametrize
from .convergence import RefinementSchedule
from .curves import (
    Partition,
    cantor_graph,
    cantor_graph_length,
    circle,
    coordinate_variation,
    helix,
    length,
    random_trig_curve,
    segment,
    speed_integral,
    variation_sum,
)
from .errors import HomogeneityError
from .frechet import coupling_cost, discrete_frechet, premetric_check, sample_polyline
from .integrand import (
    AREA2D,
    NORM,
    NORM_SQUARED,
    check_homogeneity,
    continuity_of_integral,
    invariance_under_reparam,
    line_integral,
    polygon_family,
    tangent_deviation_bound_check,
)

SUITES = ("core", "arclen", "frechet", "integrand", "bc")


@dataclass(frozen=True)
class PropertyResult:
    suite: str
    name: str
    ok: bool
    detail: str
    seconds: float

    def to_dict(self) -> dict:
        return asdict(self)


_REGISTRY: dict[str, list[tuple[str, Callable[[int], tuple[bool, str]]]]] = {s: [] for s in SUITES}


def _prop(suite: str):
    def register(fn):
        _REGISTRY[suite].append((fn.__name__, fn))
        return fn

    return register


# ------------------------------------------------------------------- core


@_prop("core")
def refinement_monotone(seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(5):
        C = random_trig_curve(rng, dim=int(rng.integers(2, 4)))
        P = Partition.uniform(C.lo, C.hi, int(rng.integers(3, 40)))
        for _ in range(4):
            Q = P.union(rng.uniform(C.lo, C.hi, int(rng.integers(1, 20))))
            worst = max(worst, variation_sum(C, P) - variation_sum(C, Q))
            P = Q
    return worst <= 1e-12, f"max decrease {worst:.3g}"


@_prop("core")
def length_identity_ac(seed):
    gaps = []
    for C in (circle(), helix(), segment()):
        L = length(C, tol=1e-9).limit_estimate
        ref = speed_integral(C)
        gaps.append(abs(L - ref) / ref)
    return max(gaps) <= 1e-6, f"relative gaps {', '.join(f'{g:.2g}' for g in gaps)}"


@_prop("core")
def cantor_strict_inequality(seed):
    C = cantor_graph(12)
    L = length(C, tol=1e-9).limit_estimate
    q = speed_integral(C)
    ok = abs(L - cantor_graph_length(12)) <= 1e-9 and q < 1.01 and L - q >= 0.9
    return ok, f"length {L:.6f}, a.e. integral {q:.6f}"


@_prop("core")
def coordinate_sandwich(seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(5):
        C = random_trig_curve(rng)
        P = Partition.uniform(C.lo, C.hi, 256)
        total = variation_sum(C, P)
        coords = [coordinate_variation(C, m, P) for m in range(1, C.dim + 1)]
        worst = max(worst, max(coords) - total, total - sum(coords))
    return worst <= 1e-12, f"max violation {worst:.3g}"


@_prop("core")
def lower_semicontinuity(seed):
    fam = polygon_family(circle(), range(2, 15))
    L = [variation_sum(c, Partition.for_curve(c, 1)) for c in fam]
    mono = all(b >= a - 1e-12 for a, b in zip(L, L[1:]))
    ok = mono and max(L) <= 2 * math.pi + 1e-9 and L[-1] >= 2 * math.pi - 1e-3
    return ok, f"l(C_14) = {L[-1]:.9f}"


# ----------------------------------------------------------------- arclen


@_prop("arclen")
def unit_speed_double_circle(seed):
    usc = reparametrize(circle(speed=2.0), RefinementSchedule(4, 12))
    sp = check_unit_speed(usc, h=1e-4)
    return sp.within(1e-3), f"speeds in [{sp.min_speed:.9f}, {sp.max_speed:.9f}]"


@_prop("arclen")
def unit_speed_lipschitz(seed):
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(3):
        usc = reparametrize(random_trig_curve(rng), RefinementSchedule(4, 11))
        worst = max(worst, lipschitz_defect(usc))
    return worst <= 1e-9, f"max ||g(v) - g(u)|| - (v - u) = {worst:.3g}"


@_prop("arclen")
def length_preserved(seed):
    rng = np.random.default_rng(seed)
    C = random_trig_curve(rng)
    usc = reparametrize(C, RefinementSchedule(4, 12))
    L = length(usc.as_curve(), RefinementSchedule(4, 12), tol=1e-9).limit_estimate
    gap = abs(L - usc.total_length) / usc.total_length
    return gap <= 1e-4, f"relative gap {gap:.3g}"


@_prop("arclen")
def unit_speed_close_in_frechet(seed):
    C = circle(speed=2.0)
    usc = reparametrize(C, RefinementSchedule(4, 12))
    n = 2 ** 12
    d = discrete_frechet(sample_polyline(C, n), usc.samples, coupling=False).distance
    return d <= 1e-3, f"distance {d:.3g}"


# ---------------------------------------------------------------- frechet


@_prop("frechet")
def premetric(seed):
    rng = np.random.default_rng(seed)
    sample = [rng.standard_normal((int(rng.integers(2, 12)), 2)) for _ in range(6)]
    rep = premetric_check(sample)
    return rep.ok, f"{rep.triples} triples, worst {rep.worst_violation:.3g}"


@_prop("frechet")
def coupling_realizes_distance(seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(10):
        P = rng.standard_normal((int(rng.integers(1, 30)), 3))
        Q = rng.standard_normal((int(rng.integers(1, 30)), 3))
        r = discrete_frechet(P, Q)
        worst = max(worst, abs(coupling_cost(P, Q, r.coupling) - r.distance))
    return worst <= 1e-12, f"max gap {worst:.3g}"


@_prop("frechet")
def self_distance_zero(seed):
    rng = np.random.default_rng(seed)
    C = random_trig_curve(rng)
    P = sample_polyline(C, 512)
    d = discrete_frechet(P, P, coupling=False).distance
    return d == 0.0, f"distance {d}"


@_prop("frechet")
def offset_circle(seed):
    d = discrete_frechet(sample_polyline(circle(), 1024), sample_polyline(circle(radius=1.1), 1024),
                         coupling=False).distance
    return abs(d - 0.1) <= 1e-3, f"distance {d:.9f}"


# -------------------------------------------------------------- integrand


@_prop("integrand")
def homogeneity_gate(seed):
    ok = all(check_homogeneity(F).passed for F in (NORM, AREA2D))
    try:
        line_integral(circle(), NORM_SQUARED)
        rejected = False
    except HomogeneityError:
        rejected = True
    return ok and rejected, "norm, area2d pass; normsq rejected" if ok and rejected else "gate misbehaves"


@_prop("integrand")
def tangent_l2_bound(seed):
    rng = np.random.default_rng(seed)
    worst, count = -np.inf, 0
    for _ in range(10):
        C = random_trig_curve(rng)
        for n in (16, 64, 256):
            P = Partition.uniform(C.lo, C.hi, n).union(rng.uniform(C.lo, C.hi, 3))
            lhs, rhs = tangent_deviation_bound_check(C, P)
            worst = max(worst, lhs - rhs)
            count += 1
    return worst <= 1e-9, f"{count} checks, max lhs - rhs {worst:.3g}"


@_prop("integrand")
def area_of_circle(seed):
    rep = line_integral(circle(), AREA2D, tol=1e-9)
    gap = abs(rep.limit_estimate - 2 * math.pi)
    return gap <= 1e-6, f"|I - 2 pi| = {gap:.3g}"


@_prop("integrand")
def tag_independence(seed):
    rep = line_integral(circle(), AREA2D, tol=1e-9, xi_rule="random", cross_rule="left", seed=seed)
    return rep.extras["xi_gap"] <= 1e-6, f"xi gap {rep.extras['xi_gap']:.3g}"


@_prop("integrand")
def reparam_invariance(seed):
    I_C, I_D = invariance_under_reparam(circle(), AREA2D, RefinementSchedule(4, 12))
    return abs(I_C - I_D) <= 1e-4, f"|I_C - I_D| = {abs(I_C - I_D):.3g}"


@_prop("integrand")
def continuity(seed):
    rep = continuity_of_integral(polygon_family(circle(), range(2, 15)), circle(), AREA2D, RefinementSchedule(1, 4))
    ok = rep.monotone and rep.errors[-1] <= 1e-3
    return ok, f"|I(C_14) - I(C)| = {rep.errors[-1]:.3g}"


# --------------------------------------------------------------------- bc


@_prop("bc")
def mesh_anomaly(seed):
    a = bc.example_catalog(4).related["anomaly"]
    vals = (bc.penalty_mesh(a["coarse"]), bc.penalty_mesh(a["halves"]))
    return vals == (3.0, 3.5), f"delta = {vals[0]}, {vals[1]}"


@_prop("bc")
def catalog_integrals(seed):
    out, ok = [], True
    for ident, tol in ((1, 1e-9), (6, 1e-9), (5, 1e-8), (3, 1e-9), (7, 1e-6), (8, 1e-9)):
        ex = bc.example_catalog(ident)
        v = ex.integral(seed=seed).limit_estimate
        ok &= abs(v - ex.expected) <= tol
        out.append(f"#{ident}={v:.10g}")
    ex9 = bc.example_catalog(9, f="x^2")
    v = ex9.integral(seed=seed).limit_estimate
    ok &= abs(v - 1 / 3) <= 1e-4
    out.append(f"#9={v:.10g}")
    return ok, ", ".join(out)


@_prop("bc")
def spaces_well_formed(seed):
    targets = [2.0 ** -k for k in range(2, 7)]
    for ident in (1, 2, 3, 4, 5, 6, 7, 8, 9, 10):
        bc.check_space(bc.example_catalog(ident).space, targets, seed)
    return True, "nonoverlap and mesh targets met for examples 1-10"


@_prop("bc")
def quasi_additive_positive(seed):
    ex = bc.example_catalog(1)
    cert = bc.qa_certify(ex.space, ex.phi, [0.1], seed=seed, strict=False)
    return cert.certified, f"eta = {cert.rows[0]['eta']}"


@_prop("bc")
def quasi_additive_negative(seed):
    ex = bc.example_catalog(1)
    coarse = lambda e: [0.5, 0.25]
    sq = bc.qa_certify(ex.space, ex.related["squared"], [0.01], seed=seed, etas=coarse, full_d0=True, strict=False)
    lin = bc.qa_certify(ex.space, ex.phi, [0.01], seed=seed, etas=coarse, full_d0=True, strict=False)
    return lin.certified and not sq.certified, f"|I| certified={lin.certified}, |I|^2 certified={sq.certified}"


@_prop("bc")
def norm_inheritance(seed):
    ex = bc.example_catalog(7)
    vec = ex.related["vector"]
    a = bc.qa_certify(ex.space, vec, [0.1], seed=seed, strict=False)
    b = bc.qa_certify(ex.space, vec.norm(), [0.1], seed=seed, strict=False)
    return (not a.certified) or b.certified, f"phi certified={a.certified}, ||phi|| certified={b.certified}"


@_prop("bc")
def subset_stability(seed):
    ex = bc.example_catalog(1)
    v = ex.integral(seed=seed, S=bc.Interval(0.0, 0.5)).limit_estimate
    return abs(v - 0.5) <= 1e-3, f"B on [0, 1/2] = {v:.9f}"


@_prop("bc")
def sandwich(seed):
    worst = -np.inf
    for ident in (1, 2, 3, 6, 7, 8, 9):
        ex = bc.example_catalog(ident)
        deepest = int(round(-math.log2(ex.targets[-1])))
        B = ex.integral(seed=seed, phi=ex.phi.norm()).limit_estimate
        V = bc.variation(ex.space, ex.phi, seed=seed, budget=12, depths=range(deepest - 2, deepest + 2))
        worst = max(worst, B - V)
    return worst <= 1e-9, f"max B(||phi||) - V = {worst:.3g}"


@_prop("bc")
def weierstrass_agreement(seed):
    rep = bc.weierstrass_integral(circle(), AREA2D, seed=seed)
    left = bc.weierstrass_integral(circle(), AREA2D, tau_rule="left", seed=seed, cross_check=False)
    right = bc.weierstrass_integral(circle(), AREA2D, tau_rule="right", seed=seed, cross_check=False)
    ok = (rep.extras["gap_line"] <= 1e-3 and rep.extras["gap_lebesgue"] <= 1e-3
          and abs(left.limit_estimate - right.limit_estimate) <= 2 * rep.tol)
    return ok, f"W = {rep.limit_estimate:.9f}, gaps {rep.extras['gap_line']:.2g}, {rep.extras['gap_lebesgue']:.2g}"


@_prop("bc")
def cauchy_quasi_subadditive(seed):
    ex = bc.example_catalog(9, f="x^2")
    cert = bc.qa_certify(ex.space, ex.phi, [0.05], seed=seed, strict=False)
    return cert.certified, f"eta = {cert.rows[0]['eta']}"


# ------------------------------------------------------------------ runner


def run_suite(suite: str, seed: int = 0) -> list[PropertyResult]:
    """Run ``suite`` (one of :data:`SUITES` or ``"all"``) under ``seed``."""
    names = SUITES if suite == "all" else (suite,)
    if any(n not in _REGISTRY for n in names):
        raise KeyError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
    out = []
    for s in names:
        for name, fn in _REGISTRY[s]:
            t0 = time.perf_counter()
            try:
                ok, detail = fn(seed)
            except Exception as exc:  # a crash is a failed property, not a crashed run
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            out.append(PropertyResult(s, name, bool(ok), detail, time.perf_counter() - t0))
    return out
