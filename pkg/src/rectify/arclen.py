"""Arc-length (unit-speed) reparametrization.

``g(s) = f(x(s))`` where ``x(s)`` is the generalized inverse of the
tabulated arc-length function.  On a plateau of ``s`` the left end is
taken; ``f`` is constant there, so the choice does not change ``g``.

Between grid nodes ``g`` follows the inscribed polygon, so it matches
``f`` at every node and is exactly 1-Lipschitz with respect to the
tabulated ``s``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .convergence import DEFAULT_SCHEDULE, RefinementSchedule
from .curves import Curve, Partition, cumulative_length, sampled
from .errors import ZeroLength


@dataclass(frozen=True, eq=False)
class UnitSpeedCurve:
    total_length: float
    s_grid: np.ndarray
    samples: np.ndarray
    source: Curve
    x_fine: np.ndarray
    s_fine: np.ndarray
    knots: np.ndarray
    error_estimate: float
    v_fine: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.source.dim

    @property
    def spacing(self) -> float:
        return float(self.s_grid[1] - self.s_grid[0])

    def parameter_at(self, s) -> np.ndarray:
        """Generalized inverse ``x(s)`` of the arc-length function."""
        s = np.clip(np.asarray(s, dtype=float), 0.0, self.total_length)
        j = np.searchsorted(self.s_fine, s, side="left")
        j = np.clip(j, 1, self.s_fine.size - 1)
        s0, s1 = self.s_fine[j - 1], self.s_fine[j]
        x0, x1 = self.x_fine[j - 1], self.x_fine[j]
        ds = s1 - s0
        frac = np.where(ds > 0, (s - s0) / np.where(ds > 0, ds, 1.0), 1.0)
        x = x0 + np.clip(frac, 0.0, 1.0) * (x1 - x0)
        return np.where(s <= 0.0, self.x_fine[0], x)

    def __call__(self, s):
        s_arr = np.asarray(s, dtype=float)
        s1 = np.clip(np.atleast_1d(s_arr), 0.0, self.total_length)
        j = np.clip(np.searchsorted(self.s_fine, s1, side="left"), 1, self.s_fine.size - 1)
        s0, s_hi = self.s_fine[j - 1], self.s_fine[j]
        ds = s_hi - s0
        w = np.where(ds > 0, (s1 - s0) / np.where(ds > 0, ds, 1.0), 1.0)[:, None]
        out = self.v_fine[j - 1] + np.clip(w, 0.0, 1.0) * (self.v_fine[j] - self.v_fine[j - 1])
        out = np.where((s1 <= 0.0)[:, None], self.v_fine[0], out)
        return out[0] if s_arr.ndim == 0 else out

    def as_curve(self) -> Curve:
        """The tabulated ``g`` as a sampled curve on ``[0, total_length]``."""
        return sampled(self.s_grid, self.samples, name="unit_speed")


def reparametrize(
    curve: Curve,
    schedule: RefinementSchedule = DEFAULT_SCHEDULE,
    tol: float = 1e-6,
) -> UnitSpeedCurve:
    """Unit-speed representation of ``curve`` on ``[0, length]``.

    The working grid is the finest level of ``schedule`` joined with the
    curve's breakpoints; the output grid is uniform in arc length with the
    same number of points.
    """
    n = 2 ** schedule.effective_max
    fine = Partition.for_curve(curve, n)
    s_fine = cumulative_length(curve, fine)
    total = float(s_fine[-1])
    if total <= tol:
        raise ZeroLength(f"curve {curve.name!r} has length {total:.3g} <= {tol:.3g}")
    half = cumulative_length(curve, Partition.for_curve(curve, n // 2))[-1]
    knots = s_fine[np.searchsorted(fine.points, curve.breaks_within())]
    s_grid = np.linspace(0.0, total, fine.points.size)
    usc = UnitSpeedCurve(
        total_length=total,
        s_grid=s_grid,
        samples=np.empty((0, curve.dim)),
        source=curve,
        x_fine=fine.points,
        s_fine=s_fine,
        knots=np.unique(knots),
        error_estimate=abs(total - half),
        v_fine=curve(fine.points),
    )
    object.__setattr__(usc, "samples", usc(s_grid))
    return usc


@dataclass(frozen=True)
class SpeedReport:
    min_speed: float
    max_speed: float
    h: float
    probes: int
    skipped: int

    def within(self, tol: float) -> bool:
        return 1 - tol <= self.min_speed and self.max_speed <= 1 + tol


def check_unit_speed(usc: UnitSpeedCurve, h: float | None = None) -> SpeedReport:
    """Extremal difference quotients ``||g(s+h) - g(s)|| / h`` over the grid.

    Windows that straddle a corner of the source (a knot) are skipped: the
    speed is one almost everywhere, not at corners.
    """
    spacing = usc.spacing
    h = spacing if h is None else float(h)
    if not 0 < h < 4 * spacing:
        raise ValueError(f"h={h:.3g} must lie in (0, 4 * grid spacing = {4 * spacing:.3g})")
    s = usc.s_grid[usc.s_grid + h <= usc.total_length]
    keep = np.ones(s.size, dtype=bool)
    if usc.knots.size:
        lo = np.searchsorted(usc.knots, s, side="right")
        hi = np.searchsorted(usc.knots, s + h, side="left")
        keep = hi <= lo
    s = s[keep]
    q = np.linalg.norm(usc(s + h) - usc(s), axis=1) / h
    return SpeedReport(float(q.min()), float(q.max()), h, int(s.size), int((~keep).sum()))


def lipschitz_defect(usc: UnitSpeedCurve) -> float:
    """``max (||g(v) - g(u)|| - (v - u))`` over grid pairs at dyadic strides."""
    g, s = usc.samples, usc.s_grid
    worst = -np.inf
    stride = 1
    while stride < s.size:
        d = np.linalg.norm(g[stride:] - g[:-stride], axis=1) - (s[stride:] - s[:-stride])
        worst = max(worst, float(d.max()))
        stride *= 2
    return worst
