"""Parametric integrands and line integrals along curves.

A parametric integrand ``F(x, t)`` is positively homogeneous of degree one
in ``t``.  Its line integral is the mesh limit of the sums
``sum F(f(xi_i), f(x_i) - f(x_{i-1}))``; for curves with an exact
derivative it also equals ``int F(f(x), f'(x)) dx``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ._quad import composite_nodes
from .arclen import reparametrize
from .convergence import DEFAULT_SCHEDULE, ConvergenceReport, RefinementSchedule
from .curves import (
    Curve,
    Partition,
    cumulative_length,
    increments,
    length,
    nominal_mesh,
    variation_sum,
)
from .errors import HomogeneityError, HypothesisViolated, MissingDerivative

HOMOGENEITY_TOL = 1e-9
SPEED_FLOOR = 1e-12


@dataclass(frozen=True)
class ParametricIntegrand:
    """``evaluator(x, t)`` maps two ``(n, M)`` arrays to an ``(n,)`` array."""

    evaluator: Callable[[np.ndarray, np.ndarray], np.ndarray]
    name: str = "custom"

    def __call__(self, x, t):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        t = np.atleast_2d(np.asarray(t, dtype=float))
        return np.asarray(self.evaluator(x, t), dtype=float)


def _norm(x, t):
    return np.linalg.norm(t, axis=1)


def _area2d(x, t):
    return x[:, 0] * t[:, 1] - x[:, 1] * t[:, 0]


def _zero(x, t):
    return np.zeros(t.shape[0])


def _norm_squared(x, t):
    return np.sum(t * t, axis=1)


def coordinate(m: int) -> ParametricIntegrand:
    """``F(x, t) = t_m`` (1-based)."""
    if m < 1:
        raise IndexError("coordinate index is 1-based")
    return ParametricIntegrand(lambda x, t: t[:, m - 1], name=f"coordinate:{m}")


NORM = ParametricIntegrand(_norm, "norm")
AREA2D = ParametricIntegrand(_area2d, "area2d")
ZERO = ParametricIntegrand(_zero, "zero")
NORM_SQUARED = ParametricIntegrand(_norm_squared, "normsq")


def integrand_by_name(name: str) -> ParametricIntegrand:
    """Catalog lookup: ``norm``, ``area2d``, ``zero``, ``normsq``, ``coordinate:m``."""
    if name.startswith("coordinate:"):
        return coordinate(int(name.split(":", 1)[1]))
    table = {f.name: f for f in (NORM, AREA2D, ZERO, NORM_SQUARED)}
    try:
        return table[name]
    except KeyError:
        raise KeyError(f"unknown integrand {name!r}") from None


# ------------------------------------------------------------- homogeneity


@dataclass(frozen=True)
class ProbePlan:
    dim: int = 2
    count: int = 256
    seed: int = 0
    spread: float = 3.0
    scales: Sequence[float] = (0.0, 1e-3, 0.5, 1.0, 2.0, 1e3)


@dataclass(frozen=True)
class HomogeneityReport:
    max_defect: float
    worst_probe: tuple
    passed: bool


def check_homogeneity(F: ParametricIntegrand, probes: ProbePlan | None = None) -> HomogeneityReport:
    """Max relative defect ``|F(x, K t) - K F(x, t)| / ((1 + |F(x, t)|) max(K, 1))``.

    ``K = 0`` probes measure ``|F(x, 0)|`` directly.
    """
    plan = probes or ProbePlan()
    rng = np.random.default_rng(plan.seed)
    x = rng.uniform(-plan.spread, plan.spread, (plan.count, plan.dim))
    t = rng.standard_normal((plan.count, plan.dim))
    base = F(x, t)
    worst, where = 0.0, ()
    for K in plan.scales:
        scaled = F(x, K * t)
        defect = np.abs(scaled - K * base) / ((1.0 + np.abs(base)) * max(K, 1.0))
        k = int(np.argmax(defect))
        if defect[k] > worst:
            worst, where = float(defect[k]), (float(K), k)
    return HomogeneityReport(worst, where, worst <= HOMOGENEITY_TOL)


def _gate(F: ParametricIntegrand, dim: int):
    report = check_homogeneity(F, ProbePlan(dim=dim))
    if not report.passed:
        raise HomogeneityError(
            f"integrand {F.name!r} is not positively 1-homogeneous (defect {report.max_defect:.3g})",
            report=report,
        )


# ------------------------------------------------------------------- sums


def tags(P: Partition, rule: str = "mid", seed: int | None = None) -> np.ndarray:
    """Tag points ``xi_i`` in each cell for ``left|mid|right|random``."""
    lo, hi = P.points[:-1], P.points[1:]
    if rule == "left":
        return lo.copy()
    if rule == "right":
        return hi.copy()
    if rule == "mid":
        return 0.5 * (lo + hi)
    if rule == "random":
        if seed is None:
            raise ValueError("the random rule needs an explicit seed")
        u = np.random.default_rng(seed).uniform(size=lo.size)
        return lo + u * (hi - lo)
    raise ValueError(f"unknown tag rule {rule!r}")


def riemann_cesari_sum(
    curve: Curve, F: ParametricIntegrand, P: Partition, xi_rule: str = "mid", seed: int | None = None
) -> float:
    """``sum_i F(f(xi_i), f(x_i) - f(x_{i-1}))``."""
    xi = tags(P, xi_rule, seed)
    return float(np.sum(F(curve(xi), increments(curve, P))))


def line_integral(
    curve: Curve,
    F: ParametricIntegrand,
    schedule: RefinementSchedule = DEFAULT_SCHEDULE,
    tol: float = 1e-6,
    xi_rule: str = "mid",
    cross_rule: str | None = "left",
    seed: int = 0,
    early_stop: bool = True,
) -> ConvergenceReport:
    """Mesh-refined limit of Riemann-Cesari sums.

    ``cross_rule`` runs the same schedule with a second tag rule;
    ``extras['cross_limit']`` and ``extras['xi_gap']`` record the comparison.
    Integrands failing the homogeneity probe raise :class:`HomogeneityError`.
    """
    _gate(F, curve.dim)
    meshes, values, cross = [], [], []
    for level, n in enumerate(schedule.sizes()):
        P = Partition.for_curve(curve, n)
        meshes.append(nominal_mesh(curve, n))
        values.append(riemann_cesari_sum(curve, F, P, xi_rule, seed + level))
        if cross_rule is not None:
            cross.append(riemann_cesari_sum(curve, F, P, cross_rule, seed + level))
        if (
            early_stop
            and len(values) >= 3
            and abs(values[-1] - values[-2]) <= tol
            and (not cross or abs(cross[-1] - cross[-2]) <= tol)
        ):
            break
    extras = {"xi_rule": xi_rule}
    if cross:
        extras.update(cross_rule=cross_rule, cross_values=cross, cross_limit=cross[-1],
                      xi_gap=abs(values[-1] - cross[-1]))
    return ConvergenceReport.from_samples(meshes, values, tol, extras=extras)


def line_integral_ac(curve: Curve, F: ParametricIntegrand, order: int = 8, panels: int = 2048) -> float:
    """``int_a^b F(f(x), f'(x)) dx`` by composite Gauss-Legendre quadrature."""
    if not curve.has_derivative or not curve.absolutely_continuous:
        raise MissingDerivative(
            f"curve {curve.name!r} needs a derivative evaluator and absolute continuity"
        )
    P = Partition.for_curve(curve, panels)
    nodes, weights = composite_nodes(P.points, order)
    x = nodes.ravel()
    vals = F(curve(x), curve.derivative(x)).reshape(nodes.shape)
    return float(np.sum(vals * weights))


# --------------------------------------------------------------- tangents


@dataclass(frozen=True)
class TangentField:
    """Unit tangent ``theta = f' / ||f'||`` where the speed exceeds 1e-12."""

    source: Curve

    def __post_init__(self):
        if not self.source.has_derivative or not self.source.absolutely_continuous:
            raise MissingDerivative("a tangent field needs an absolutely continuous curve with f'")

    def __call__(self, x):
        d = np.atleast_2d(self.source.derivative(np.atleast_1d(x)))
        speed = np.linalg.norm(d, axis=1)
        out = np.zeros_like(d)
        ok = speed > SPEED_FLOOR
        out[ok] = d[ok] / speed[ok, None]
        return out

    def defined(self, x) -> np.ndarray:
        d = np.atleast_2d(self.source.derivative(np.atleast_1d(x)))
        return np.linalg.norm(d, axis=1) > SPEED_FLOOR


def arc_masses(curve: Curve, P: Partition, order: int = 8, sub: int | None = None) -> np.ndarray:
    """``s(x_i) - s(x_{i-1})`` for every cell of ``P``.

    Absolutely continuous curves with a derivative integrate the speed by
    Gauss-Legendre on ``sub`` panels per cell; others use inscribed chords
    on a refined grid that includes the curve's breakpoints.
    """
    if curve.has_derivative and curve.absolutely_continuous:
        sub = sub or max(1, math.ceil(4096 / P.cells))
        nodes, weights = composite_nodes(P.refine(sub).points, order)
        speed = np.linalg.norm(curve.derivative(nodes.ravel()), axis=1).reshape(nodes.shape)
        return np.sum((speed * weights).reshape(P.cells, sub * order), axis=1)
    factor = sub or max(2, math.ceil(2 ** 16 / P.cells))
    fine = P.refine(factor).union(curve.breaks_within())
    s = cumulative_length(curve, fine)
    idx = np.searchsorted(fine.points, P.points)
    return np.diff(s[idx])


@dataclass(frozen=True)
class DiscreteTangent:
    partition: Partition
    values: np.ndarray
    mu_masses: np.ndarray


def discrete_tangent(curve: Curve, P: Partition) -> DiscreteTangent:
    """Per-cell chord over arc mass; zero on cells of zero mass."""
    mu = arc_masses(curve, P)
    chords = increments(curve, P)
    eta = np.zeros_like(chords)
    pos = mu > 0
    eta[pos] = chords[pos] / mu[pos, None]
    return DiscreteTangent(P, eta, mu)


def tangent_deviation_bound_check(curve: Curve, P: Partition, order: int = 8) -> tuple[float, float]:
    """``(lhs, rhs)`` with ``lhs = int ||theta - eta||^2 dmu`` and
    ``rhs = 2 (length - variation_sum(P))``.

    Both sides use the same Gauss-Legendre arc masses, so the length in
    ``rhs`` is the sum of the cell masses.
    """
    theta = TangentField(curve)
    sub = max(1, math.ceil(4096 / P.cells))
    nodes, weights = composite_nodes(P.refine(sub).points, order)
    x = nodes.ravel()
    d = curve.derivative(x)
    speed = np.linalg.norm(d, axis=1)
    w = (speed * weights.ravel()).reshape(P.cells, -1)
    mu = w.sum(axis=1)
    chords = increments(curve, P)
    eta = np.zeros_like(chords)
    pos = mu > 0
    eta[pos] = chords[pos] / mu[pos, None]
    th = theta(x).reshape(P.cells, -1, curve.dim)
    dev = np.sum((th - eta[:, None, :]) ** 2, axis=2)
    lhs = float(np.sum(dev * w))
    rhs = 2.0 * (float(mu.sum()) - float(np.sum(np.linalg.norm(chords, axis=1))))
    return lhs, rhs


def l2_tangent_convergence(
    curve: Curve, schedule: RefinementSchedule = RefinementSchedule(4, 12), tol: float = 1e-6
) -> ConvergenceReport:
    """``int ||theta - eta(.; P)||^2 dmu`` along the schedule.

    ``converged`` here means the last deviation is within ``tol`` (the
    limit is zero), not that successive values agree.
    """
    meshes, values = [], []
    for n in schedule.sizes():
        P = Partition.for_curve(curve, n)
        meshes.append(nominal_mesh(curve, n))
        values.append(tangent_deviation_bound_check(curve, P)[0])
    report = ConvergenceReport.from_samples(meshes, values, tol)
    report.limit_estimate = 0.0
    report.error_estimate = values[-1]
    report.converged = values[-1] <= tol
    return report


# -------------------------------------------------------------- theorems


def invariance_under_reparam(
    curve: Curve,
    F: ParametricIntegrand,
    schedule: RefinementSchedule = DEFAULT_SCHEDULE,
    tol: float = 1e-6,
) -> tuple[float, float]:
    """``(I_C, I_D)`` with ``D`` the unit-speed representation of ``curve``."""
    D = reparametrize(curve, schedule).as_curve()
    I_C = line_integral(curve, F, schedule, tol, cross_rule=None).limit_estimate
    I_D = line_integral(D, F, schedule, tol, cross_rule=None).limit_estimate
    return I_C, I_D


def polygon_family(curve: Curve, ks: Sequence[int]) -> list[Curve]:
    """Inscribed polygons through ``2**k + 1`` uniform parameters."""
    from .curves import sampled

    out = []
    for k in ks:
        x = np.linspace(curve.lo, curve.hi, 2 ** k + 1)
        out.append(sampled(x, curve(x), name=f"{curve.name}_polygon_{k}"))
    return out


@dataclass
class ContinuityReport:
    integrals: list[float]
    lengths: list[float]
    limit_integral: float
    limit_length: float
    errors: list[float] = field(default_factory=list)

    @property
    def monotone(self) -> bool:
        e = self.errors
        return all(b <= a + 1e-15 for a, b in zip(e, e[1:]))


def continuity_of_integral(
    family: Sequence[Curve],
    limit: Curve,
    F: ParametricIntegrand,
    schedule: RefinementSchedule = DEFAULT_SCHEDULE,
    tol: float = 1e-6,
    length_tol: float = 1e-3,
) -> ContinuityReport:
    """Integrals along ``family`` against the integral along ``limit``.

    The limit values come from quadrature when ``limit`` has an exact
    derivative, otherwise from the refinement schedule.

    Raises :class:`HypothesisViolated` when the family's lengths do not
    approach the limit length within ``length_tol``.
    """
    if limit.has_derivative and limit.absolutely_continuous:
        L0 = line_integral_ac(limit, NORM)
        I0 = line_integral_ac(limit, F)
    else:
        L0 = length(limit, schedule, tol).limit_estimate
        I0 = line_integral(limit, F, schedule, tol, cross_rule=None).limit_estimate
    integrals, lengths = [], []
    for Ck in family:
        lengths.append(variation_sum(Ck, Partition.for_curve(Ck, 1)))
        integrals.append(line_integral(Ck, F, schedule, tol, cross_rule=None).limit_estimate)
    if abs(lengths[-1] - L0) > length_tol:
        raise HypothesisViolated(
            f"family lengths end at {lengths[-1]:.6g}, limit length is {L0:.6g}"
        )
    return ContinuityReport(integrals, lengths, I0, L0, [abs(I - I0) for I in integrals])
