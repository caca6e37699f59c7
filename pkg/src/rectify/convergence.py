"""Mesh-indexed convergence tables.

Every ``lim_{mesh -> 0}`` in the library is realized as a
:class:`ConvergenceReport` built from a :class:`RefinementSchedule`.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Any, Iterator, Sequence

import numpy as np

from .errors import NonConvergence

ENV_SCHEDULE_MAX = "RECTIFY_SCHEDULE_MAX"


def _env_cap() -> int | None:
    raw = os.environ.get(ENV_SCHEDULE_MAX)
    if not raw:
        return None
    return int(raw)


@dataclass(frozen=True)
class RefinementSchedule:
    """Dyadic uniform refinement levels ``n = 2**min_depth ... 2**max_depth``.

    ``RECTIFY_SCHEDULE_MAX`` (an integer depth) caps ``max_depth``.
    """

    min_depth: int = 4
    max_depth: int = 16

    def __post_init__(self):
        if self.min_depth < 0 or self.max_depth < self.min_depth:
            raise ValueError(f"bad schedule depths {self.min_depth}..{self.max_depth}")

    @property
    def effective_max(self) -> int:
        cap = _env_cap()
        if cap is None:
            return self.max_depth
        return max(self.min_depth, min(self.max_depth, cap))

    def depths(self) -> range:
        return range(self.min_depth, self.effective_max + 1)

    def sizes(self) -> Iterator[int]:
        for d in self.depths():
            yield 2 ** d


DEFAULT_SCHEDULE = RefinementSchedule()


@dataclass
class ConvergenceReport:
    """A sequence of (mesh, value) samples with a limit and error estimate.

    ``error_estimate`` is ``|v_last - v_prev|`` (max-norm for vector values);
    with ``extrapolated=True`` the limit is the Richardson estimate
    ``v_last + (v_last - v_prev) / 3`` that assumes an O(mesh**2) error on
    successive halvings.
    """

    samples: list[tuple[float, Any]]
    limit_estimate: Any
    error_estimate: float
    converged: bool
    tol: float
    extrapolated: bool = False
    extras: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_samples(
        cls,
        meshes: Sequence[float],
        values: Sequence[Any],
        tol: float,
        extrapolate: bool = False,
        extras: dict[str, Any] | None = None,
    ) -> "ConvergenceReport":
        if len(meshes) != len(values) or len(meshes) == 0:
            raise ValueError("need at least one (mesh, value) sample")
        meshes = [float(m) for m in meshes]
        if any(b >= a for a, b in zip(meshes, meshes[1:])):
            raise ValueError("sample meshes must be strictly decreasing")
        vals = [_as_value(v) for v in values]
        last = vals[-1]
        if len(vals) == 1:
            err = float("inf")
            limit = last
        else:
            diff = np.asarray(last, dtype=float) - np.asarray(vals[-2], dtype=float)
            err = float(np.max(np.abs(diff)))
            limit = last
            if extrapolate:
                limit = _as_value(np.asarray(last, dtype=float) + diff / 3.0)
        return cls(
            samples=list(zip(meshes, vals)),
            limit_estimate=limit,
            error_estimate=err,
            converged=err <= tol,
            tol=tol,
            extrapolated=extrapolate,
            extras=dict(extras or {}),
        )

    @property
    def meshes(self) -> np.ndarray:
        return np.array([m for m, _ in self.samples])

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.samples], dtype=float)

    def raise_if_not_converged(self, what: str = "limit") -> "ConvergenceReport":
        if not self.converged:
            raise NonConvergence(
                f"{what}: error estimate {self.error_estimate:.3g} > tol {self.tol:.3g}",
                report=self,
            )
        return self

    def csv_rows(self) -> list[list[Any]]:
        """Rows ``mesh, value[, value_2, ...], error, converged`` (header first).

        ``error`` on row k is ``|v_k - v_{k-1}|``; blank on the first row.
        """
        first = np.atleast_1d(np.asarray(self.samples[0][1], dtype=float))
        width = first.size
        names = ["value"] + [f"value_{i}" for i in range(2, width + 1)]
        rows: list[list[Any]] = [["mesh", *names, "error", "converged"]]
        prev = None
        for mesh, value in self.samples:
            v = np.atleast_1d(np.asarray(value, dtype=float))
            err = "" if prev is None else float(np.max(np.abs(v - prev)))
            ok = "" if prev is None else int(err <= self.tol)
            rows.append([mesh, *v.tolist(), err, ok])
            prev = v
        return rows


def _as_value(v):
    arr = np.asarray(v, dtype=float)
    if arr.ndim == 0:
        return float(arr)
    return arr.copy()
