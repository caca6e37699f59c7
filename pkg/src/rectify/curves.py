"""Curves, partitions, variation sums and length.

A :class:`Curve` is a vectorized map ``[lo, hi] -> R^M``.  Length is the
limit of inscribed polygon lengths along nested dyadic partitions; for
piecewise-linear curves the curve's own breakpoints are merged into every
partition, so those lengths are exact at every level.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from ._quad import composite_nodes
from .convergence import DEFAULT_SCHEDULE, ConvergenceReport, RefinementSchedule
from .errors import DimensionMismatch, DomainError, MissingDerivative, NonConvergence

_DOMAIN_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class Curve:
    """A curve ``f: [lo, hi] -> R^dim``.

    ``func`` and ``deriv`` take a 1-d array of parameters and return an
    ``(n, dim)`` array.  Sampled curves carry ``nodes``/``values`` and are
    evaluated by linear interpolation.  ``breakpoints`` lists parameters at
    which the curve may have corners; refinement always includes them.
    """

    lo: float
    hi: float
    dim: int
    func: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = "custom"
    params: dict[str, Any] = field(default_factory=dict)
    nodes: np.ndarray | None = None
    values: np.ndarray | None = None
    breakpoints: np.ndarray | None = None
    absolutely_continuous: bool = True

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or not self.lo < self.hi:
            raise DomainError(f"need finite lo < hi, got [{self.lo}, {self.hi}]")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")

    @property
    def kind(self) -> str:
        return "sampled" if self.nodes is not None else "analytic"

    @property
    def has_derivative(self) -> bool:
        return self.deriv is not None

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        slack = _DOMAIN_SLACK * max(1.0, self.hi - self.lo)
        if np.any(x < self.lo - slack) or np.any(x > self.hi + slack) or np.any(np.isnan(x)):
            bad = x[(x < self.lo - slack) | (x > self.hi + slack) | np.isnan(x)]
            raise DomainError(f"parameter {bad.ravel()[0]!r} outside [{self.lo}, {self.hi}]")
        return np.clip(x, self.lo, self.hi)

    def __call__(self, x):
        x = self._check(x)
        if x.ndim == 0:
            return self.func(x[None])[0]
        return self.func(x)

    def derivative(self, x):
        if self.deriv is None:
            raise MissingDerivative(f"curve {self.name!r} has no derivative evaluator")
        x = self._check(x)
        if x.ndim == 0:
            return self.deriv(x[None])[0]
        return self.deriv(x)

    def breaks_within(self, lo: float | None = None, hi: float | None = None) -> np.ndarray:
        lo = self.lo if lo is None else lo
        hi = self.hi if hi is None else hi
        if self.breakpoints is None:
            return np.empty(0)
        b = self.breakpoints
        return b[(b > lo) & (b < hi)]


def evaluate(curve: Curve, x: float) -> np.ndarray:
    """Point ``f(x)``; raises :class:`DomainError` outside ``[lo, hi]``."""
    return curve(float(x))


# ---------------------------------------------------------------- partitions


@dataclass(frozen=True, eq=False)
class Partition:
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("a partition needs at least two points")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("partition points must be strictly increasing")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def uniform(cls, lo: float, hi: float, n: int) -> "Partition":
        return cls(np.linspace(lo, hi, n + 1))

    @classmethod
    def for_curve(cls, curve: Curve, n: int) -> "Partition":
        """Uniform ``n``-cell partition of the domain joined with the curve's breakpoints."""
        return cls.uniform(curve.lo, curve.hi, n).union(curve.breaks_within())

    @property
    def lo(self) -> float:
        return float(self.points[0])

    @property
    def hi(self) -> float:
        return float(self.points[-1])

    @property
    def norm(self) -> float:
        return float(np.max(np.diff(self.points)))

    @property
    def cells(self) -> int:
        return self.points.size - 1

    def __len__(self):
        return self.points.size

    def union(self, extra) -> "Partition":
        extra = np.asarray(extra, dtype=float).ravel()
        if extra.size == 0:
            return self
        extra = extra[(extra > self.lo) & (extra < self.hi)]
        return Partition(np.union1d(self.points, extra))

    def refine(self, factor: int) -> "Partition":
        """Split every cell into ``factor`` equal pieces."""
        if factor < 1:
            raise ValueError("factor must be >= 1")
        if factor == 1:
            return self
        t = np.arange(factor) / factor
        lo, width = self.points[:-1, None], np.diff(self.points)[:, None]
        pts = (lo + width * t[None, :]).ravel()
        return Partition(np.append(pts, self.points[-1]))

    def is_refinement_of(self, other: "Partition") -> bool:
        return bool(np.all(np.isin(other.points, self.points)))

    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.points[:-1] + self.points[1:])


def nominal_mesh(curve: Curve, n: int) -> float:
    """Mesh of the uniform ``n``-cell level; merged breakpoints only shrink it."""
    return (curve.hi - curve.lo) / n


def _require_partition_of(curve: Curve, P: Partition):
    slack = _DOMAIN_SLACK * max(1.0, curve.hi - curve.lo)
    if abs(P.lo - curve.lo) > slack or abs(P.hi - curve.hi) > slack:
        raise DomainError(
            f"partition [{P.lo}, {P.hi}] does not span the curve domain [{curve.lo}, {curve.hi}]"
        )


def increments(curve: Curve, P: Partition) -> np.ndarray:
    """Chord vectors ``f(x_i) - f(x_{i-1})``, shape ``(cells, dim)``."""
    return np.diff(curve(P.points), axis=0)


def variation_sum(curve: Curve, P: Partition) -> float:
    """Length of the inscribed polygon ``sum ||f(x_i) - f(x_{i-1})||``."""
    _require_partition_of(curve, P)
    return float(np.sum(np.linalg.norm(increments(curve, P), axis=1)))


def coordinate_variation(curve: Curve, m: int, P: Partition) -> float:
    """``sum |f_m(x_i) - f_m(x_{i-1})|`` for the 1-based coordinate ``m``."""
    if not 1 <= m <= curve.dim:
        raise IndexError(f"coordinate {m} outside 1..{curve.dim}")
    _require_partition_of(curve, P)
    return float(np.sum(np.abs(increments(curve, P)[:, m - 1])))


def length(
    curve: Curve,
    schedule: RefinementSchedule = DEFAULT_SCHEDULE,
    tol: float = 1e-6,
    extrapolate: bool = False,
    early_stop: bool = True,
    strict: bool = False,
) -> ConvergenceReport:
    """Estimate the length as a mesh limit of variation sums.

    Levels are nested, so sample values never decrease.  With ``early_stop``
    the schedule ends at the first level whose difference from the previous
    level is within ``tol`` (after at least three levels).
    """
    meshes, values, cells, norms = [], [], [], []
    for n in schedule.sizes():
        P = Partition.for_curve(curve, n)
        meshes.append(nominal_mesh(curve, n))
        norms.append(P.norm)
        values.append(variation_sum(curve, P))
        cells.append(P.cells)
        if early_stop and len(values) >= 3 and abs(values[-1] - values[-2]) <= tol:
            break
    report = ConvergenceReport.from_samples(
        meshes, values, tol, extrapolate=extrapolate, extras={"cells": cells, "norms": norms}
    )
    if strict:
        report.raise_if_not_converged(f"length of {curve.name}")
    return report


def speed_integral(curve: Curve, panels: int = 1024, order: int = 8) -> float:
    """``int_a^b ||f'(x)|| dx`` by composite Gauss-Legendre, split at breakpoints."""
    P = Partition.for_curve(curve, panels)
    nodes, weights = composite_nodes(P.points, order)
    speed = np.linalg.norm(curve.derivative(nodes.ravel()), axis=1).reshape(nodes.shape)
    return float(np.sum(speed * weights))


def check_derivative(curve: Curve, probes: int = 257, rel_tol: float = 1e-5) -> float:
    """Largest relative gap between ``deriv`` and central differences.

    Probes within one step of a breakpoint are skipped.  Raises
    :class:`ValueError` when the gap exceeds ``rel_tol``.
    """
    h = 1e-5 * (curve.hi - curve.lo)
    x = np.linspace(curve.lo + 2 * h, curve.hi - 2 * h, probes)
    if curve.breakpoints is not None and curve.breakpoints.size:
        dist = np.min(np.abs(x[:, None] - curve.breakpoints[None, :]), axis=1)
        x = x[dist > 2 * h]
    fd = (curve(x + h) - curve(x - h)) / (2 * h)
    exact = curve.derivative(x)
    scale = 1.0 + np.linalg.norm(exact, axis=1)
    gap = float(np.max(np.linalg.norm(fd - exact, axis=1) / scale)) if x.size else 0.0
    if gap > rel_tol:
        raise ValueError(f"derivative of {curve.name!r} disagrees with finite differences ({gap:.3g})")
    return gap


@dataclass(frozen=True)
class ArcLengthFunction:
    """Tabulated ``s(x)``: length of the curve restricted to ``[lo, x]``."""

    x: np.ndarray
    s: np.ndarray
    error_estimate: float

    def __call__(self, x):
        return np.interp(x, self.x, self.s)

    @property
    def total(self) -> float:
        return float(self.s[-1])


def cumulative_length(curve: Curve, P: Partition) -> np.ndarray:
    """Inscribed-polygon arc length at every point of ``P`` (starts at 0)."""
    chords = np.linalg.norm(increments(curve, P), axis=1)
    return np.concatenate([[0.0], np.cumsum(chords)])


def arc_length_function(
    curve: Curve,
    grid: Partition,
    resolution: int = 2 ** 16,
    tol: float = 1e-6,
    strict: bool = False,
) -> ArcLengthFunction:
    """Tabulate ``s`` on ``grid``.

    Each grid cell is subdivided so the working partition has about
    ``resolution`` cells (plus breakpoints).  The error estimate compares
    against the same computation at half the subdivision.
    """
    _require_partition_of(curve, grid)
    factor = max(2, math.ceil(resolution / grid.cells))
    fine = grid.refine(factor).union(curve.breaks_within())
    coarse = grid.refine(factor // 2).union(curve.breaks_within())
    s_fine = cumulative_length(curve, fine)
    s_coarse = cumulative_length(curve, coarse)
    idx = np.searchsorted(fine.points, grid.points)
    s = s_fine[idx]
    s[0] = 0.0
    err = abs(s_fine[-1] - s_coarse[-1])
    if strict and err > tol:
        raise NonConvergence(f"arc length of {curve.name}: error {err:.3g} > tol {tol:.3g}")
    return ArcLengthFunction(grid.points.copy(), s, err)


# ----------------------------------------------------------------- catalog


def _vec(v, dim=None) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(v, dtype=float))
    if dim is not None and arr.size != dim:
        raise DimensionMismatch(f"expected {dim} coordinates, got {arr.size}")
    return arr


def segment(start=(0.0, 0.0), end=(3.0, 4.0), domain=(0.0, 1.0)) -> Curve:
    p, q = _vec(start), _vec(end)
    if p.size != q.size:
        raise DimensionMismatch("segment endpoints differ in dimension")
    a, b = map(float, domain)
    step = (q - p) / (b - a)

    def f(x):
        return p[None, :] + (x[:, None] - a) * step[None, :]

    def df(x):
        return np.broadcast_to(step, (x.size, p.size)).copy()

    return Curve(a, b, p.size, f, df, name="segment",
                 params={"start": p.tolist(), "end": q.tolist(), "domain": [a, b]})


def constant(point=(0.0, 0.0), domain=(0.0, 1.0)) -> Curve:
    p = _vec(point)
    a, b = map(float, domain)

    def f(x):
        return np.broadcast_to(p, (x.size, p.size)).copy()

    def df(x):
        return np.zeros((x.size, p.size))

    return Curve(a, b, p.size, f, df, name="constant",
                 params={"point": p.tolist(), "domain": [a, b]})


def circle(radius=1.0, speed=1.0, center=(0.0, 0.0), domain=None) -> Curve:
    """``center + radius * (cos(speed t), sin(speed t))``; one turn by default."""
    r, w = float(radius), float(speed)
    c = _vec(center, 2)
    a, b = (0.0, 2 * math.pi / w) if domain is None else tuple(map(float, domain))

    def f(t):
        return c[None, :] + r * np.column_stack([np.cos(w * t), np.sin(w * t)])

    def df(t):
        return r * w * np.column_stack([-np.sin(w * t), np.cos(w * t)])

    return Curve(a, b, 2, f, df, name="circle",
                 params={"radius": r, "speed": w, "center": c.tolist(), "domain": [a, b]})


def helix(radius=1.0, pitch=1.0, domain=(0.0, 2 * math.pi)) -> Curve:
    """``(r cos t, r sin t, pitch t)`` in R^3."""
    r, h = float(radius), float(pitch)
    a, b = map(float, domain)

    def f(t):
        return np.column_stack([r * np.cos(t), r * np.sin(t), h * t])

    def df(t):
        return np.column_stack([-r * np.sin(t), r * np.cos(t), np.full_like(t, h)])

    return Curve(a, b, 3, f, df, name="helix",
                 params={"radius": r, "pitch": h, "domain": [a, b]})


def sin2k(k: int = 1) -> Curve:
    """``(sin^2(k x), 0)`` on ``[0, pi/2]``: same graph for every k, length k."""
    k = int(k)

    def f(x):
        return np.column_stack([np.sin(k * x) ** 2, np.zeros_like(x)])

    def df(x):
        return np.column_stack([k * np.sin(2 * k * x), np.zeros_like(x)])

    return Curve(0.0, math.pi / 2, 2, f, df, name="sin2k", params={"k": k})


def trig_poly(cos_coef, sin_coef, offset=None, domain=(0.0, 2 * math.pi)) -> Curve:
    """``f_m(x) = offset_m + sum_k a_mk cos(k x) + b_mk sin(k x)``, k = 1..K."""
    A = np.atleast_2d(np.asarray(cos_coef, dtype=float))
    B = np.atleast_2d(np.asarray(sin_coef, dtype=float))
    if A.shape != B.shape:
        raise DimensionMismatch("cosine and sine coefficient arrays differ in shape")
    dim, K = A.shape
    off = np.zeros(dim) if offset is None else _vec(offset, dim)
    k = np.arange(1, K + 1, dtype=float)
    a, b = map(float, domain)

    def f(x):
        kx = np.outer(x, k)
        return off[None, :] + np.cos(kx) @ A.T + np.sin(kx) @ B.T

    def df(x):
        kx = np.outer(x, k)
        return (-np.sin(kx) * k) @ A.T + (np.cos(kx) * k) @ B.T

    return Curve(a, b, dim, f, df, name="trig",
                 params={"cos": A.tolist(), "sin": B.tolist(), "offset": off.tolist(),
                         "domain": [a, b]})


def random_trig_curve(rng: np.random.Generator, dim: int = 2, degree: int = 4) -> Curve:
    """Random smooth closed-form curve with coefficients decaying like 1/k."""
    scale = 1.0 / np.arange(1, degree + 1)
    A = rng.standard_normal((dim, degree)) * scale
    B = rng.standard_normal((dim, degree)) * scale
    return trig_poly(A, B, rng.standard_normal(dim))


def sampled(nodes, values, name: str = "sampled") -> Curve:
    """Piecewise-linear curve through ``values`` at strictly increasing ``nodes``."""
    t = np.asarray(nodes, dtype=float).ravel()
    v = np.asarray(values, dtype=float)
    if v.ndim == 1:
        v = v[:, None]
    if t.size < 2 or v.shape[0] != t.size:
        raise DimensionMismatch(f"{t.size} nodes but {v.shape[0]} value rows")
    if np.any(np.diff(t) <= 0):
        raise ValueError("nodes must be strictly increasing")
    t.setflags(write=False)
    v = v.copy()
    v.setflags(write=False)
    slopes = np.diff(v, axis=0) / np.diff(t)[:, None]

    def f(x):
        return np.column_stack([np.interp(x, t, v[:, m]) for m in range(v.shape[1])])

    def df(x):
        # right derivative; the last node uses the last cell
        idx = np.clip(np.searchsorted(t, x, side="right") - 1, 0, t.size - 2)
        return slopes[idx]

    return Curve(float(t[0]), float(t[-1]), v.shape[1], f, df, name=name,
                 nodes=t, values=v, breakpoints=t[1:-1].copy())


def polyline(points, domain=(0.0, 1.0)) -> Curve:
    """Polygonal line through ``points`` at uniformly spaced parameters."""
    pts = np.asarray(points, dtype=float)
    a, b = map(float, domain)
    return sampled(np.linspace(a, b, pts.shape[0]), pts, name="polyline")


def cantor_nodes(level: int) -> tuple[np.ndarray, np.ndarray]:
    """Breakpoints and values of the level-``level`` Cantor staircase.

    The approximation rises linearly by ``2**-level`` across each of the
    ``2**level`` surviving triadic intervals of width ``3**-level`` and is
    flat elsewhere.
    """
    L = int(level)
    if L < 0:
        raise ValueError("level must be >= 0")
    j = np.arange(2 ** L)
    starts = np.zeros(2 ** L)
    for i in range(L):
        bit = (j >> (L - 1 - i)) & 1
        starts += 2.0 * bit * 3.0 ** -(i + 1)
    w = 3.0 ** -L
    x = np.empty(2 ** (L + 1))
    x[0::2], x[1::2] = starts, starts + w
    y = np.empty_like(x)
    y[0::2], y[1::2] = j / 2 ** L, (j + 1) / 2 ** L
    x[0], x[-1] = 0.0, 1.0
    return x, y


def cantor_graph(level: int = 12) -> Curve:
    """Graph ``x -> (x, c_L(x))`` of the level-L Cantor staircase on [0, 1].

    The derivative evaluator is the a.e. derivative ``(1, 0)`` of the limiting
    singular function, so the curve is flagged as not absolutely continuous.
    """
    bx, by = cantor_nodes(level)
    bx.setflags(write=False)
    by.setflags(write=False)

    def f(x):
        return np.column_stack([x, np.interp(x, bx, by)])

    def df(x):
        return np.column_stack([np.ones_like(x), np.zeros_like(x)])

    return Curve(0.0, 1.0, 2, f, df, name="cantor", params={"level": int(level)},
                 breakpoints=bx[1:-1].copy(), absolutely_continuous=False)


def cantor_graph_length(level: int) -> float:
    """Closed-form length of :func:`cantor_graph` at ``level``."""
    rise = (2.0 / 3.0) ** level
    return (1.0 - rise) + math.hypot(rise, 1.0)


CATALOG: dict[str, Callable[..., Curve]] = {
    "segment": segment,
    "constant": constant,
    "circle": circle,
    "helix": helix,
    "sin2k": sin2k,
    "trig": lambda cos, sin, offset=None, domain=(0.0, 2 * math.pi): trig_poly(cos, sin, offset, domain),
    "cantor": cantor_graph,
    "polyline": polyline,
}


def from_catalog(name: str, **params) -> Curve:
    try:
        factory = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown curve {name!r}; known: {sorted(CATALOG)}") from None
    return factory(**params)
