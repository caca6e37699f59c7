"""Discrete Frechet distance between polylines.

The coupling distance is the min over monotone vertex couplings of the
max pairwise distance (Eiter and Mannila's recurrence).  The table is
filled one anti-diagonal at a time so each step is a vectorized numpy
operation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .convergence import ConvergenceReport, RefinementSchedule
from .curves import Curve
from .errors import DimensionMismatch

FRECHET_SCHEDULE = RefinementSchedule(4, 12)


def as_polyline(P) -> np.ndarray:
    arr = np.asarray(P, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError("a polyline needs at least one vertex")
    return arr


@dataclass(frozen=True)
class FrechetResult:
    distance: float
    coupling: list[tuple[int, int]]

    def to_dict(self) -> dict:
        return {"distance": self.distance, "coupling": [list(c) for c in self.coupling]}


def _diagonals(P: np.ndarray, Q: np.ndarray, keep: bool):
    """Yield ``(k, i_lo, values)`` for each anti-diagonal ``i + j = k``."""
    p, q = len(P), len(Q)
    prev2 = prev1 = None
    lo2 = lo1 = 0
    for k in range(p + q - 1):
        i_lo, i_hi = max(0, k - q + 1), min(k, p - 1)
        i = np.arange(i_lo, i_hi + 1)
        d = np.linalg.norm(P[i] - Q[k - i], axis=1)
        if k == 0:
            cur = d
        else:
            inf = np.inf
            # predecessor (i-1, j): diagonal k-1, index i-1
            up = np.full(i.size, inf)
            ok = i - 1 >= lo1
            ok &= i - 1 <= lo1 + prev1.size - 1
            up[ok] = prev1[i[ok] - 1 - lo1]
            # predecessor (i, j-1): diagonal k-1, index i
            left = np.full(i.size, inf)
            ok = (i >= lo1) & (i <= lo1 + prev1.size - 1)
            left[ok] = prev1[i[ok] - lo1]
            diag = np.full(i.size, inf)
            if prev2 is not None:
                ok = (i - 1 >= lo2) & (i - 1 <= lo2 + prev2.size - 1)
                diag[ok] = prev2[i[ok] - 1 - lo2]
            cur = np.maximum(d, np.minimum(np.minimum(up, left), diag))
        yield k, i_lo, cur
        prev2, lo2 = prev1, lo1
        prev1, lo1 = cur, i_lo


def discrete_frechet(P, Q, coupling: bool = True) -> FrechetResult:
    """Discrete Frechet distance and an optimal monotone coupling.

    Backtracking prefers the diagonal step, then advancing P, then Q.
    With ``coupling=False`` only two diagonals are kept in memory and the
    coupling is returned empty.
    """
    P, Q = as_polyline(P), as_polyline(Q)
    if P.shape[1] != Q.shape[1]:
        raise DimensionMismatch(f"dimensions differ: {P.shape[1]} vs {Q.shape[1]}")
    p, q = len(P), len(Q)
    table = np.empty((p, q)) if coupling else None
    last = None
    for k, i_lo, cur in _diagonals(P, Q, coupling):
        if coupling:
            i = np.arange(i_lo, i_lo + cur.size)
            table[i, k - i] = cur
        last = cur
    dist = float(last[-1])
    if not coupling:
        return FrechetResult(dist, [])
    return FrechetResult(dist, _backtrack(table))


def _backtrack(table: np.ndarray) -> list[tuple[int, int]]:
    i, j = table.shape[0] - 1, table.shape[1] - 1
    path = [(i, j)]
    while i > 0 or j > 0:
        options = []
        if i > 0 and j > 0:
            options.append((table[i - 1, j - 1], 0, i - 1, j - 1))
        if i > 0:
            options.append((table[i - 1, j], 1, i - 1, j))
        if j > 0:
            options.append((table[i, j - 1], 2, i, j - 1))
        _, _, i, j = min(options)
        path.append((i, j))
    path.reverse()
    return path


def coupling_cost(P, Q, coupling) -> float:
    P, Q = as_polyline(P), as_polyline(Q)
    idx = np.asarray(coupling)
    return float(np.max(np.linalg.norm(P[idx[:, 0]] - Q[idx[:, 1]], axis=1)))


def sample_polyline(curve: Curve, n: int) -> np.ndarray:
    """Vertices ``f(x_i)`` at ``n + 1`` uniform parameters."""
    return curve(np.linspace(curve.lo, curve.hi, n + 1))


def frechet_distance_curves(
    C: Curve,
    D: Curve,
    schedule: RefinementSchedule = FRECHET_SCHEDULE,
    tol: float = 1e-3,
) -> ConvergenceReport:
    """Discrete distance between matched uniform samplings across refinement."""
    if C.dim != D.dim:
        raise DimensionMismatch(f"dimensions differ: {C.dim} vs {D.dim}")
    meshes, values = [], []
    for n in schedule.sizes():
        meshes.append(max(C.hi - C.lo, D.hi - D.lo) / n)
        values.append(discrete_frechet(sample_polyline(C, n), sample_polyline(D, n), coupling=False).distance)
    return ConvergenceReport.from_samples(meshes, values, tol)


@dataclass(frozen=True)
class PremetricReport:
    worst_violation: float
    negative: int
    asymmetric: int
    triangle: int
    triples: int
    distances: np.ndarray

    @property
    def ok(self) -> bool:
        return self.negative == self.asymmetric == self.triangle == 0


def premetric_check(sample, atol: float = 1e-12) -> PremetricReport:
    """Check nonnegativity, symmetry and the triangle inequality on all triples."""
    polys = [as_polyline(p) for p in sample]
    if len(polys) < 3:
        raise ValueError("need at least three polylines")
    n = len(polys)
    d = np.zeros((n, n))
    for a, b in itertools.product(range(n), repeat=2):
        if a != b:
            d[a, b] = discrete_frechet(polys[a], polys[b], coupling=False).distance
    worst = 0.0
    negative = int(np.sum(d < 0))
    worst = max(worst, float(-d.min()))
    asym = np.abs(d - d.T)
    asymmetric = int(np.sum(asym > atol))
    worst = max(worst, float(asym.max()))
    triangle = 0
    triples = 0
    for a, b, c in itertools.permutations(range(n), 3):
        triples += 1
        gap = d[a, b] - (d[a, c] + d[c, b])
        worst = max(worst, gap)
        triangle += gap > atol
    return PremetricReport(worst, negative, asymmetric, int(triangle), triples, d)
