"""Interval spaces, system sums and quasi additivity.

An :class:`IntervalSpace` bundles a carrier, a seeded generator of
nonoverlapping systems and a mesh function.  Systems are stored as endpoint
arrays: float arrays for intervals of the line, object arrays of
:class:`~rectify.bc.exact.QNum` when rationality of endpoints matters, and
``(n, m)`` float arrays for boxes.

Quasi additivity quantifies over all systems; here it is probed on seeded
samples from the generator.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from ..convergence import ConvergenceReport, RefinementSchedule
from ..errors import CertificationFailed, ZetaConditionViolated
from ..integrand import ParametricIntegrand
from .exact import QNum

CONTAIN_TOL = 1e-12
BC_SCHEDULE = RefinementSchedule(3, 12)


# ---------------------------------------------------------------- intervals


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]``; endpoints are floats or :class:`QNum`."""

    lo: Any
    hi: Any

    @property
    def length(self) -> float:
        return float(self.hi - self.lo)

    def contains(self, other: "Interval") -> bool:
        return _le(self.lo, other.lo) and _le(other.hi, self.hi)


@dataclass(frozen=True)
class Box:
    lo: tuple
    hi: tuple

    @property
    def volume(self) -> float:
        return float(np.prod(np.subtract(self.hi, self.lo)))

    def contains(self, other: "Box") -> bool:
        return bool(
            np.all(np.asarray(self.lo) <= np.asarray(other.lo) + CONTAIN_TOL)
            and np.all(np.asarray(other.hi) <= np.asarray(self.hi) + CONTAIN_TOL)
        )


def _le(a, b) -> bool:
    if isinstance(a, QNum) and isinstance(b, QNum):
        return a <= b
    return float(a) <= float(b) + CONTAIN_TOL


@dataclass(frozen=True, eq=False)
class System:
    """A finite system of nonoverlapping intervals, as endpoint arrays."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo, hi = np.asarray(self.lo), np.asarray(self.hi)
        if lo.shape != hi.shape or lo.shape[0] == 0:
            raise ValueError("a system needs matching, nonempty endpoint arrays")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def from_intervals(cls, intervals: Sequence[Interval | Box]) -> "System":
        if isinstance(intervals[0], Box):
            return cls(np.array([b.lo for b in intervals], dtype=float),
                       np.array([b.hi for b in intervals], dtype=float))
        exact = any(isinstance(i.lo, QNum) or isinstance(i.hi, QNum) for i in intervals)
        dtype = object if exact else float
        return cls(np.array([i.lo for i in intervals], dtype=dtype),
                   np.array([i.hi for i in intervals], dtype=dtype))

    @classmethod
    def from_cuts(cls, cuts) -> "System":
        """Consecutive intervals ``[c_{i-1}, c_i]`` of a cut sequence."""
        cuts = np.asarray(cuts, dtype=object if _is_exact_seq(cuts) else float)
        return cls(cuts[:-1], cuts[1:])

    def __len__(self):
        return self.lo.shape[0]

    @property
    def exact(self) -> bool:
        return self.lo.dtype == object

    @property
    def boxes(self) -> bool:
        return self.lo.ndim == 2

    @property
    def lo_float(self) -> np.ndarray:
        return self.lo.astype(float) if self.exact else self.lo

    @property
    def hi_float(self) -> np.ndarray:
        return self.hi.astype(float) if self.exact else self.hi

    def lengths(self) -> np.ndarray:
        """``|I|`` per interval (volume for boxes); exact differences for QNum."""
        if self.boxes:
            return np.prod(self.hi - self.lo, axis=1)
        if self.exact:
            return np.array([float(b - a) for a, b in zip(self.lo, self.hi)])
        return self.hi - self.lo

    def diameters(self) -> np.ndarray:
        if self.boxes:
            return np.linalg.norm(self.hi - self.lo, axis=1)
        return self.lengths()

    def intervals(self) -> list[Interval | Box]:
        if self.boxes:
            return [Box(tuple(a), tuple(b)) for a, b in zip(self.lo, self.hi)]
        return [Interval(a, b) for a, b in zip(self.lo.tolist(), self.hi.tolist())]

    def take(self, mask) -> "System | None":
        mask = np.asarray(mask, dtype=bool)
        if not mask.any():
            return None
        return System(self.lo[mask], self.hi[mask])


def _is_exact_seq(seq) -> bool:
    return any(isinstance(c, QNum) for c in seq)


def check_nonoverlap(D: System) -> bool:
    """Interiors pairwise disjoint (exact for QNum, 1e-12 slack for floats)."""
    if D.boxes:
        lo, hi = D.lo, D.hi
        overlap = np.all(
            (np.minimum(hi[:, None, :], hi[None, :, :]) - np.maximum(lo[:, None, :], lo[None, :, :]))
            > CONTAIN_TOL,
            axis=2,
        )
        np.fill_diagonal(overlap, False)
        return not overlap.any()
    order = np.argsort(D.lo_float, kind="stable")
    los, his = D.lo[order], D.hi[order]
    return all(_le(h, l) for h, l in zip(his[:-1], los[1:]))


# ---------------------------------------------------------------- spaces


@dataclass(frozen=True, eq=False)
class IntervalSpace:
    """Carrier, interval kind, seeded system generator and mesh.

    ``generate(target, rng, full)`` returns a system with mesh below
    ``target``; ``full=True`` asks for a system covering as much of the
    carrier as the mesh allows (used for BC-integral estimates).
    """

    name: str
    carrier: str
    interval_kind: str
    generate: Callable[[float, np.random.Generator, bool], System]
    mesh: Callable[[System], float]
    params: dict = field(default_factory=dict)

    def system(self, target: float, seed=0, full: bool = False, attempts: int = 8) -> System:
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        for _ in range(attempts):
            D = self.generate(target, rng, full)
            if self.mesh(D) < target:
                return D
        raise RuntimeError(f"{self.name}: generator missed mesh target {target:.3g}")


def check_space(space: IntervalSpace, targets: Sequence[float], seed: int = 0) -> list[float]:
    """Generate a system per target; assert nonoverlap and mesh below target."""
    meshes = []
    for k, t in enumerate(targets):
        for full in (False, True):
            D = space.system(t, seed=[seed, k, int(full)], full=full)
            if not check_nonoverlap(D):
                raise AssertionError(f"{space.name}: overlapping intervals at target {t}")
            m = space.mesh(D)
            if not 0 < m < t:
                raise AssertionError(f"{space.name}: mesh {m} not in (0, {t})")
            meshes.append(m)
    return meshes


# --------------------------------------------------------- interval functions


@dataclass(frozen=True, eq=False)
class IntervalFunction:
    """``phi: intervals -> R^dim`` evaluated a whole system at a time.

    ``evaluator(D)`` returns an ``(len(D), dim)`` array (or ``(len(D),)``
    when ``dim == 1``).
    """

    evaluator: Callable[[System], np.ndarray]
    name: str = "phi"
    dim: int = 1

    def values(self, D: System) -> np.ndarray:
        v = np.asarray(self.evaluator(D), dtype=float)
        return v.reshape(len(D), self.dim)

    def __call__(self, interval: Interval | Box):
        v = self.values(System.from_intervals([interval]))[0]
        return float(v[0]) if self.dim == 1 else v

    def norm(self) -> "IntervalFunction":
        return IntervalFunction(lambda D: np.linalg.norm(self.values(D), axis=1), f"|{self.name}|", 1)

    def component(self, m: int) -> "IntervalFunction":
        """1-based coordinate ``phi_m``."""
        return IntervalFunction(lambda D: self.values(D)[:, m - 1], f"{self.name}_{m}", 1)

    def positive_part(self) -> "IntervalFunction":
        if self.dim != 1:
            raise ValueError("positive part is defined for scalar functions")
        return IntervalFunction(lambda D: np.maximum(self.values(D)[:, 0], 0.0), f"{self.name}+", 1)

    def negative_part(self) -> "IntervalFunction":
        if self.dim != 1:
            raise ValueError("negative part is defined for scalar functions")
        return IntervalFunction(lambda D: np.maximum(-self.values(D)[:, 0], 0.0), f"{self.name}-", 1)


def length_function(power: float = 1.0) -> IntervalFunction:
    """``phi(I) = |I| ** power``."""
    return IntervalFunction(lambda D: D.lengths() ** power, "|I|" if power == 1 else f"|I|^{power:g}")


# ---------------------------------------------------------------- subsets


class _Empty:
    def __repr__(self):
        return "EMPTY"


EMPTY = _Empty()


def subset_mask(S, D: System) -> np.ndarray:
    """``s(I, S)`` for every ``I`` in ``D``.

    ``S`` is ``None`` (the whole carrier), :data:`EMPTY`, an
    :class:`Interval`/:class:`Box` (closed containment), or a callable
    taking a system and returning a boolean mask.
    """
    if S is None:
        return np.ones(len(D), dtype=bool)
    if S is EMPTY:
        return np.zeros(len(D), dtype=bool)
    if isinstance(S, Box):
        lo, hi = np.asarray(S.lo), np.asarray(S.hi)
        return np.all(D.lo >= lo - CONTAIN_TOL, axis=1) & np.all(D.hi <= hi + CONTAIN_TOL, axis=1)
    if isinstance(S, Interval):
        if D.exact or isinstance(S.lo, QNum):
            return np.array([S.contains(Interval(a, b)) for a, b in zip(D.lo, D.hi)], dtype=bool)
        return (D.lo >= float(S.lo) - CONTAIN_TOL) & (D.hi <= float(S.hi) + CONTAIN_TOL)
    return np.asarray(S(D), dtype=bool)


def system_sum(phi: IntervalFunction, S, D: System):
    """``sum_{I in D, I subset S} phi(I)``; zero for the empty set."""
    mask = subset_mask(S, D)
    total = phi.values(D)[mask].sum(axis=0) if mask.any() else np.zeros(phi.dim)
    return float(total[0]) if phi.dim == 1 else total


def bc_integral(
    space: IntervalSpace,
    phi: IntervalFunction,
    S=None,
    schedule: RefinementSchedule = BC_SCHEDULE,
    tol: float = 1e-6,
    seed: int = 0,
    full: bool = True,
    targets: Sequence[float] | None = None,
) -> ConvergenceReport:
    """System sums along decreasing mesh targets ``2**-depth``.

    One seeded system is drawn per target; the report's mesh column is the
    target and ``extras['delta']`` holds the achieved meshes.
    """
    targets = list(targets) if targets is not None else [2.0 ** -d for d in schedule.depths()]
    values, deltas, sizes = [], [], []
    for k, t in enumerate(targets):
        D = space.system(t, seed=[seed, k], full=full)
        deltas.append(space.mesh(D))
        sizes.append(len(D))
        values.append(system_sum(phi, S, D))
    return ConvergenceReport.from_samples(targets, values, tol, extras={"delta": deltas, "sizes": sizes})


# ------------------------------------------------------- quasi additivity


def containers(D0: System, D: System) -> np.ndarray:
    """Index of the ``I0`` in ``D0`` containing each ``I`` in ``D``, or -1."""
    out = np.full(len(D), -1, dtype=int)
    if D0.boxes:
        return _box_containers(D0, D)
    order = np.argsort(D0.lo_float, kind="stable")
    lo0f, hi0f = D0.lo_float[order], D0.hi_float[order]
    lof, hif = D.lo_float, D.hi_float
    slack = 1e-9 if (D0.exact or D.exact) else CONTAIN_TOL
    cand = np.searchsorted(lo0f, lof + slack, side="right") - 1
    if not (D0.exact or D.exact):
        ok = (cand >= 0)
        c = np.clip(cand, 0, None)
        ok &= (lo0f[c] <= lof + CONTAIN_TOL) & (hif <= hi0f[c] + CONTAIN_TOL)
        out[ok] = order[c[ok]]
        return out
    lo0, hi0 = D0.lo[order], D0.hi[order]
    for n, c in enumerate(cand):
        for j in (c, c - 1, c + 1):
            if 0 <= j < len(order) and _le(lo0[j], D.lo[n]) and _le(D.hi[n], hi0[j]):
                out[n] = order[j]
                break
    return out


def _box_containers(D0: System, D: System, chunk: int = 4096) -> np.ndarray:
    """Box version of :func:`containers`; per-axis search when ``D0`` is a product grid."""
    m = D0.lo.shape[1]
    edges = [np.unique(np.concatenate([D0.lo[:, r], D0.hi[:, r]])) for r in range(m)]
    if len(D0) == int(np.prod([e.size - 1 for e in edges])):
        lookup = -np.ones([e.size - 1 for e in edges], dtype=int)
        cell = tuple(np.searchsorted(edges[r], D0.lo[:, r]) for r in range(m))
        lookup[cell] = np.arange(len(D0))
        idx, ok = [], np.ones(len(D), dtype=bool)
        for r in range(m):
            j = np.clip(np.searchsorted(edges[r], D.lo[:, r] + CONTAIN_TOL, side="right") - 1, 0, edges[r].size - 2)
            ok &= (edges[r][j] <= D.lo[:, r] + CONTAIN_TOL) & (D.hi[:, r] <= edges[r][j + 1] + CONTAIN_TOL)
            idx.append(j)
        out = np.where(ok, lookup[tuple(idx)], -1)
        return out
    out = np.full(len(D), -1, dtype=int)
    for start in range(0, len(D), chunk):
        lo, hi = D.lo[start:start + chunk], D.hi[start:start + chunk]
        inside = np.all(lo[:, None, :] >= D0.lo[None, :, :] - CONTAIN_TOL, axis=2) & np.all(
            hi[:, None, :] <= D0.hi[None, :, :] + CONTAIN_TOL, axis=2
        )
        hit = inside.any(axis=1)
        out[start:start + chunk][hit] = np.argmax(inside[hit], axis=1)
    return out


@dataclass(frozen=True)
class QaReport:
    mesh_D0: float
    mesh_D: float
    qa1_deficit: float
    qa2_deficit: float
    qsa_deficit: float


def qa_deficits(space: IntervalSpace | None, phi: IntervalFunction, D0: System, D: System, S=None) -> QaReport:
    """Exact deficit sums for one pair ``(D0, D)``.

    ``qa1 = sum_{I0 in S} ||sum_{I in I0} phi(I) - phi(I0)||``,
    ``qa2 = sum ||phi(I)||`` over ``I in S`` lying in no ``I0 in S``, and
    ``qsa = sum_{I0 in S} [sum_{I in I0} psi(I) - psi(I0)]^-`` with
    ``psi = phi`` for scalar ``phi`` and ``psi = ||phi||`` otherwise.
    """
    in0 = subset_mask(S, D0)
    inS = subset_mask(S, D)
    v0, v = phi.values(D0), phi.values(D)
    where = containers(D0, D)
    where = np.where((where >= 0) & in0[np.clip(where, 0, None)], where, -1)
    inner = np.zeros_like(v0)
    hit = where >= 0
    np.add.at(inner, where[hit], v[hit])
    qa1 = float(np.sum(np.linalg.norm(inner - v0, axis=1)[in0]))
    stray = inS & ~hit
    qa2 = float(np.sum(np.linalg.norm(v[stray], axis=1)))
    if phi.dim == 1:
        p0, p = v0[:, 0], v[:, 0]
    else:
        p0, p = np.linalg.norm(v0, axis=1), np.linalg.norm(v, axis=1)
    inner_s = np.zeros(len(D0))
    np.add.at(inner_s, where[hit], p[hit])
    qsa = float(np.sum(np.maximum(-(inner_s - p0), 0.0)[in0]))
    m0 = space.mesh(D0) if space is not None else float("nan")
    m = space.mesh(D) if space is not None else float("nan")
    return QaReport(m0, m, qa1, qa2, qsa)


@dataclass
class QaCertification:
    """Per-epsilon outcome of :func:`qa_certify`.

    Each row holds ``eps``, the accepted ``eta`` (or ``None``), the
    ``lambdas`` found for every sampled ``D0``, and the worst deficits seen
    at the accepted parameters.
    """

    rows: list[dict] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return bool(self.rows) and all(r["eta"] is not None for r in self.rows)


def qa_certify(
    space: IntervalSpace,
    phi: IntervalFunction,
    epsilons: Sequence[float],
    seed: int = 0,
    etas: Callable[[float], Sequence[float]] | None = None,
    lambdas: Callable[[float], Sequence[float]] | None = None,
    d0_samples: int = 2,
    d_samples: int = 2,
    S=None,
    strict: bool = True,
    min_mesh: float = 2.0 ** -14,
    full_d0: bool = False,
) -> QaCertification:
    """Search for ``(eta, lambda)`` witnessing quasi additivity at each epsilon.

    For a candidate ``eta`` every sampled ``D0`` with mesh below ``eta``
    must admit a candidate ``lambda`` such that sampled ``D`` at mesh below
    ``lambda`` and ``lambda / 4`` all satisfy ``qa1 < eps`` and
    ``qa2 < eps``.  Candidates default to ``eps / 2**j``, ``j >= 1`` (eta) and
    ``eta / 2**j`` (lambda), never below ``min_mesh``.  ``full_d0`` draws
    the coarse systems as covers of the carrier.
    """
    etas = etas or (lambda e: [e / 2 ** j for j in range(1, 7)])
    lambdas = lambdas or (lambda h: [h / 2 ** j for j in range(1, 16) if h / 2 ** j >= min_mesh])
    cert = QaCertification()
    rng = np.random.default_rng(seed)
    for eps in epsilons:
        row = {"eps": eps, "eta": None, "lambdas": [], "qa1": np.nan, "qa2": np.nan}
        last_violation = None
        for eta in etas(eps):
            found, worst1, worst2 = [], 0.0, 0.0
            for _ in range(d0_samples):
                D0 = space.system(eta, seed=rng, full=full_d0)
                lam_ok = None
                for lam in lambdas(eta):
                    reports = [
                        qa_deficits(space, phi, D0, space.system(t, seed=rng, full=False), S)
                        for t in (lam, lam / 4)
                        for _ in range(d_samples)
                    ]
                    bad = [r for r in reports if not (r.qa1_deficit < eps and r.qa2_deficit < eps)]
                    if not bad:
                        lam_ok = lam
                        worst1 = max(worst1, max(r.qa1_deficit for r in reports))
                        worst2 = max(worst2, max(r.qa2_deficit for r in reports))
                        break
                    last_violation = bad[0]
                if lam_ok is None:
                    break
                found.append(lam_ok)
            if len(found) == d0_samples:
                row.update(eta=eta, lambdas=found, qa1=worst1, qa2=worst2)
                break
        if row["eta"] is None:
            cert.failures.append({"eps": eps, "violation": last_violation})
        cert.rows.append(row)
    if strict and not cert.certified:
        first = cert.failures[0]
        raise CertificationFailed(
            f"{phi.name} on {space.name}: no (eta, lambda) found for eps={first['eps']}",
            report=cert,
            violation=first["violation"],
        )
    return cert


def variation(
    space: IntervalSpace,
    phi: IntervalFunction,
    S=None,
    budget: int = 24,
    seed: int = 0,
    depths: Sequence[int] = tuple(range(1, 13)),
    targets: Sequence[float] | None = None,
) -> float:
    """Largest sampled ``sum ||phi(I)||``; a lower bound for the variation.

    Systems cycle through ``targets`` (default ``2**-d`` for ``d`` in
    ``depths``), alternating partial and full systems.
    """
    targets = list(targets) if targets is not None else [2.0 ** -d for d in depths]
    norm = phi.norm()
    best = 0.0
    for k in range(budget):
        t = targets[k % len(targets)]
        D = space.system(t, seed=[seed, k], full=bool(k % 2))
        best = max(best, system_sum(norm, S, D))
    return best


# -------------------------------------------------------------- integrands


def zeta_condition(
    space: IntervalSpace,
    zeta: Callable[[System], np.ndarray],
    targets: Sequence[float],
    seed: int = 0,
    refine: int = 16,
) -> list[float]:
    """``max_{I0} max_{I in I0} ||zeta(I) - zeta(I0)||`` for ``D0`` at each target
    against ``D`` at ``target / refine``."""
    out = []
    for k, t in enumerate(targets):
        D0 = space.system(t, seed=[seed, k, 0])
        D = space.system(t / refine, seed=[seed, k, 1])
        where = containers(D0, D)
        hit = where >= 0
        z0 = np.atleast_2d(np.asarray(zeta(D0), dtype=float).reshape(len(D0), -1))
        z = np.atleast_2d(np.asarray(zeta(D), dtype=float).reshape(len(D), -1))
        gap = np.linalg.norm(z[hit] - z0[where[hit]], axis=1)
        out.append(float(gap.max()) if gap.size else 0.0)
    return out


def compose_integrand(
    space: IntervalSpace,
    phi: IntervalFunction,
    zeta: Callable[[System], np.ndarray],
    F: ParametricIntegrand,
    targets: Sequence[float] = tuple(2.0 ** -d for d in range(3, 9)),
    seed: int = 0,
    check: bool = True,
) -> IntervalFunction:
    """Scalar ``Phi(I) = F(zeta(I), phi(I))``.

    With ``check`` the zeta condition is probed along ``targets``: the last
    oscillation must be at most half the first (or vanish), otherwise
    :class:`ZetaConditionViolated` is raised.
    """
    if check:
        osc = zeta_condition(space, zeta, targets, seed)
        if not (osc[-1] <= 1e-12 or osc[-1] <= 0.5 * osc[0]):
            raise ZetaConditionViolated(f"zeta oscillation does not shrink: {osc}")

    def evaluate(D: System) -> np.ndarray:
        z = np.asarray(zeta(D), dtype=float).reshape(len(D), -1)
        return F(z, phi.values(D))

    return IntervalFunction(evaluate, f"{F.name}(zeta, {phi.name})", 1)
