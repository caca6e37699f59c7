"""Configured interval spaces and interval functions.

Examples 1 to 6 live on ``[0, 1]`` with systems of nonoverlapping intervals
and differ in the mesh.  Examples 7, 8 and 11 use subdivisions of ``[0, 1]``
and a curve; example 9 uses grid subdivisions of the unit cube; example 10
uses level-set decompositions of a finite weighted point set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

import numpy as np
import sympy

from ..arclen import reparametrize
from ..convergence import ConvergenceReport, RefinementSchedule
from ..curves import Curve, circle, from_catalog
from ..errors import UnknownExample
from ..integrand import ParametricIntegrand, _gate, integrand_by_name, line_integral
from .._quad import composite_nodes
from .core import (
    BC_SCHEDULE,
    Box,
    Interval,
    IntervalFunction,
    IntervalSpace,
    System,
    bc_integral,
    length_function,
)
from .exact import QNum, rational_penalty

_DYADIC = 2 ** 30


# ------------------------------------------------------------ generators


def _cuts(target: float, rng: np.random.Generator, scale: float = 2.0) -> np.ndarray:
    """Jittered cuts ``0 = c_0 < ... < c_n = 1`` with every cell below ``1.6 * target / scale``."""
    n = int(math.ceil(scale / target)) * (1 + int(rng.integers(0, 2)))
    c = (np.arange(n + 1) + rng.uniform(-0.3, 0.3, n + 1)) / n
    c[0], c[-1] = 0.0, 1.0
    # dyadic rationals keep float and exact carriers on the same points
    return np.round(c * _DYADIC) / _DYADIC


def _trimmed(cuts: np.ndarray, target: float, rng: np.random.Generator, keep_zero: bool):
    """Intervals between ``cuts`` with a few shrunk, total gap below ``0.15 * target``."""
    lo, hi = cuts[:-1].copy(), cuts[1:].copy()
    n = lo.size
    k = n // 4 + 1
    pick = rng.choice(n, size=k, replace=False)
    per = rng.uniform(0.0, 0.15) * target / k
    per = min(per, 0.25 * float(np.min(hi - lo)))
    hi[pick] -= per / 2
    left = pick if not keep_zero else pick[pick != 0]
    lo[left] += per / 2
    return np.round(lo * _DYADIC) / _DYADIC, np.round(hi * _DYADIC) / _DYADIC


def _float_generator(start: str = "any"):
    """Generator for ``[0, 1]`` systems; ``start`` is ``'any'``, ``'zero'`` or ``'off_zero'``."""

    def generate(target, rng, full):
        c = _cuts(target, rng)
        if start == "off_zero":
            c[0] = np.round(rng.uniform(0.01, 0.05) * target * _DYADIC) / _DYADIC or 1.0 / _DYADIC
        if full:
            return System(c[:-1], c[1:])
        lo, hi = _trimmed(c, target, rng, keep_zero=start == "zero")
        return System(lo, hi)

    return generate


def _to_exact(x: np.ndarray, irrational: bool) -> np.ndarray:
    out = np.empty(x.size, dtype=object)
    for i, v in enumerate(x.tolist()):
        r = Fraction(v)
        out[i] = QNum(r, (-1 if r == 1 else 1) if irrational else 0)
    return out


def _exact_generator(irrational: bool):
    def generate(target, rng, full):
        D = _float_generator()(target, rng, full)
        return System(_to_exact(D.lo, irrational), _to_exact(D.hi, irrational))

    return generate


def _subdivision_generator(jumps: Sequence[float] = ()):
    """Subdivisions ``0 = a_0 < ... < a_N = 1`` containing every point of ``jumps``."""
    jumps = np.asarray(sorted(jumps), dtype=float)

    def generate(target, rng, full):
        c = _cuts(target, rng)
        if jumps.size:
            c = np.union1d(c, jumps)
            c = c[np.concatenate([[True], np.diff(c) > 1e-9])]
            c[-1] = 1.0
        return System(c[:-1], c[1:])

    return generate


# ----------------------------------------------------------------- meshes


def _coverage_mesh(D: System) -> float:
    """``(1 - sum |I|) + max |I|``."""
    L = D.lengths()
    return float((1.0 - L.sum()) + L.max())


def _starts_at_zero(D: System) -> bool:
    return bool(np.any(D.lo_float == 0.0))


def _mesh_off_zero(D: System) -> float:
    return _coverage_mesh(D) + (1.0 if _starts_at_zero(D) else 0.0)


def _mesh_at_zero(D: System) -> float:
    return _coverage_mesh(D) + (0.0 if _starts_at_zero(D) else 1.0)


def _exact_lengths(D: System):
    return [b - a for a, b in zip(D.lo, D.hi)]


def penalty_mesh(D: System) -> float:
    """``(1 - sum |I|) + max |I| + sum sigma(a_j) + sum sigma(b_j)``, exact in the rational part."""
    lo, hi = _as_exact(D)
    lengths = [b - a for a, b in zip(lo, hi)]
    total = QNum(Fraction(1)) - sum(lengths, QNum(Fraction(0)))
    biggest = max(lengths)
    sigma = sum((rational_penalty(m) for m in list(lo) + list(hi)), Fraction(0))
    value = total + biggest + sigma
    return float(value.rational) + value.surd * float(QNum(0, 1))


def _as_exact(D: System):
    if D.exact:
        return D.lo, D.hi
    return _to_exact(D.lo, False), _to_exact(D.hi, False)


def _all(D: System, pred) -> bool:
    return all(pred(a) and pred(b) for a, b in zip(D.lo, D.hi))


def _mesh_irrational(D: System) -> float:
    if D.exact and _all(D, lambda m: not m.is_rational):
        return _coverage_mesh(D)
    return 1.0


def _mesh_rational(D: System) -> float:
    if not D.exact or _all(D, lambda m: m.is_rational):
        return _coverage_mesh(D)
    return 1.0


def _signed_length(D: System) -> np.ndarray:
    """``b - a`` when both endpoints are irrational, ``a - b`` otherwise."""
    L = D.lengths()
    if not D.exact:
        return -L
    sign = np.array([1.0 if not (a.is_rational or b.is_rational) else -1.0 for a, b in zip(D.lo, D.hi)])
    return sign * L


def prime_system(eps: float) -> System:
    """Rational system with ``delta < eps`` under :func:`penalty_mesh`.

    Endpoints are ``j/M + 1/M**2`` for a prime ``M >= 3`` with ``M > 4/eps``,
    so each carries penalty ``1/M**2``; ``a_1 = 1/M**2`` and ``b_N = 1 - 1/M**2``.
    """
    M = int(sympy.nextprime(max(2, math.floor(4.0 / eps))))
    M2 = Fraction(1, M * M)
    cuts = [M2] + [Fraction(j, M) + M2 for j in range(1, M)] + [1 - M2]
    cuts = [QNum(c) for c in cuts]
    return System(np.array(cuts[:-1], dtype=object), np.array(cuts[1:], dtype=object))


def _subdivision_mesh(D: System) -> float:
    return float(np.max(D.diameters()))


# ------------------------------------------------------------------ curves


def _affine(curve: Curve, t):
    return curve.lo + np.asarray(t, dtype=float) * (curve.hi - curve.lo)


def increment_function(curve: Curve) -> IntervalFunction:
    """``phi(I) = x(b) - x(a)`` with ``[0, 1]`` mapped onto the curve's domain."""

    def evaluate(D: System) -> np.ndarray:
        return curve(_affine(curve, D.hi_float)) - curve(_affine(curve, D.lo_float))

    return IntervalFunction(evaluate, f"dx[{curve.name}]", curve.dim)


@dataclass(frozen=True, eq=False)
class JumpCurve:
    """Piecewise-continuous curve on ``[0, 1]`` with finitely many jumps.

    ``pieces[k]`` is valid on ``[cuts[k], cuts[k+1])`` (the last piece on a
    closed interval); ``point_values`` optionally overrides values at cuts.
    Each piece maps a 1-d array to an ``(n, dim)`` array.
    """

    cuts: tuple
    pieces: tuple
    dim: int
    point_values: dict = field(default_factory=dict)
    name: str = "jump_curve"

    def __call__(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        k = np.clip(np.searchsorted(self.cuts, t, side="right") - 1, 0, len(self.pieces) - 1)
        out = np.empty((t.size, self.dim))
        for j, piece in enumerate(self.pieces):
            sel = k == j
            if sel.any():
                out[sel] = piece(t[sel])
        for t0, v in self.point_values.items():
            out[t == t0] = np.asarray(v, dtype=float)
        return out

    def jump_points(self) -> np.ndarray:
        pts = set(self.cuts[1:-1]) | set(self.point_values)
        return np.array(sorted(pts), dtype=float)

    def saltus(self) -> dict[float, float]:
        """``s(t) = s+(t) + s-(t)`` from one-sided limits at every jump point."""
        out = {}
        for t0 in self.jump_points():
            here = self(t0)[0]
            k = int(np.clip(np.searchsorted(self.cuts, t0, side="right") - 1, 0, len(self.pieces) - 1))
            right = self.pieces[k](np.array([t0]))[0] if t0 < 1 else here
            at_cut = t0 in self.cuts[1:-1]
            left_piece = self.pieces[k - 1] if at_cut else self.pieces[k]
            left = left_piece(np.array([t0]))[0] if t0 > 0 else here
            out[float(t0)] = float(np.linalg.norm(right - here) + np.linalg.norm(left - here))
        return out


def step_curve(at: float = 0.5, height: float = 1.0) -> JumpCurve:
    """``x(t) = 0`` for ``t < at`` and ``height`` for ``t >= at``."""
    return JumpCurve(
        cuts=(0.0, at, 1.0),
        pieces=(lambda t: np.zeros((t.size, 1)), lambda t: np.full((t.size, 1), height)),
        dim=1,
        name="step",
    )


def jump_mesh(jc: JumpCurve) -> Callable[[System], float]:
    """``max |I| + sigma - sum_i s(a_i)`` over the subdivision points."""
    s = jc.saltus()
    sigma = sum(s.values())

    def mesh(D: System) -> float:
        pts = np.union1d(D.lo_float, D.hi_float)
        caught = sum(v for t, v in s.items() if np.any(np.abs(pts - t) <= 1e-12))
        return float(np.max(D.lengths()) + sigma - caught)

    return mesh


def jump_increment(jc: JumpCurve) -> IntervalFunction:
    return IntervalFunction(lambda D: jc(D.hi_float) - jc(D.lo_float), f"dx[{jc.name}]", jc.dim)


# ----------------------------------------------------------------- Cauchy


def parse_function(expr: str | Callable, m: int = 1) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized ``f(points)`` for an ``(n, m)`` array; ``expr`` uses ``x`` or ``x1..xm``."""
    if callable(expr):
        return expr
    symbols = sympy.symbols(" ".join(f"x{r}" for r in range(1, m + 1)))
    symbols = (symbols,) if m == 1 else tuple(symbols)
    local = {f"x{r + 1}": s for r, s in enumerate(symbols)}
    local["x"] = symbols[0]
    if m >= 2:
        local["y"] = symbols[1]
    if m >= 3:
        local["z"] = symbols[2]
    parsed = sympy.sympify(str(expr).replace("^", "**"), locals=local)
    fn = sympy.lambdify(symbols, parsed, "numpy")

    def f(pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(pts)
        out = fn(*[pts[:, r] for r in range(m)])
        return np.broadcast_to(np.asarray(out, dtype=float), (pts.shape[0],)).copy()

    f.expr = parsed
    f.symbols = symbols
    return f


def cube_integral(expr: str, m: int = 1):
    """Exact ``int_{[0,1]^m} f`` via sympy, or ``None`` when it has no closed form."""
    f = parse_function(expr, m)
    val = f.expr
    for s in f.symbols:
        val = sympy.integrate(val, (s, 0, 1))
    try:
        return float(val)
    except TypeError:
        return None


def _box_generator(m: int):
    def generate(target, rng, full):
        edges = [_cuts(target * (0.99 / math.sqrt(m)), rng) for _ in range(m)]
        grids = np.meshgrid(*[np.arange(e.size - 1) for e in edges], indexing="ij")
        idx = [g.ravel() for g in grids]
        lo = np.stack([edges[r][idx[r]] for r in range(m)], axis=1)
        hi = np.stack([edges[r][idx[r] + 1] for r in range(m)], axis=1)
        return System(lo, hi)

    return generate


def cauchy_function(f: Callable, m: int, tag: str = "mid", seed: int = 0) -> IntervalFunction:
    """``phi(I) = f(tag(I)) |I|`` with ``tag`` one of ``mid``, ``lo``, ``hi``, ``random``."""

    def evaluate(D: System) -> np.ndarray:
        if tag == "mid":
            pts = 0.5 * (D.lo + D.hi)
        elif tag == "lo":
            pts = D.lo
        elif tag == "hi":
            pts = D.hi
        elif tag == "random":
            u = np.random.default_rng(seed).uniform(size=D.lo.shape)
            pts = D.lo + u * (D.hi - D.lo)
        else:
            raise ValueError(f"unknown tag rule {tag!r}")
        return f(pts) * D.lengths()

    return IntervalFunction(evaluate, f"f*|I|[{tag}]", 1)


# ---------------------------------------------------- Lebesgue-Stieltjes


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite weighted point set with a nonnegative function on it."""

    points: np.ndarray
    weights: np.ndarray
    f_values: np.ndarray

    @classmethod
    def from_function(cls, points, weights, f) -> "DiscreteMeasure":
        points = np.asarray(points, dtype=float)
        fv = parse_function(f)(points[:, None]) if not callable(f) else np.asarray(f(points), dtype=float)
        if np.any(fv < 0):
            raise ValueError("f must be nonnegative")
        return cls(points, np.asarray(weights, dtype=float), fv)

    @property
    def integral(self) -> float:
        return float(np.sum(self.weights * self.f_values))

    def level_measure(self, p, q) -> np.ndarray:
        """``mu({p < f <= q})`` for arrays of bounds."""
        order = np.argsort(self.f_values)
        fv, w = self.f_values[order], np.concatenate([[0.0], np.cumsum(self.weights[order])])
        return w[np.searchsorted(fv, q, side="right")] - w[np.searchsorted(fv, p, side="right")]

    def atom_mass(self, p) -> np.ndarray:
        p = np.atleast_1d(np.asarray(p, dtype=float))
        return self.level_measure(np.nextafter(p, -np.inf), p)


def _level_generator(mu: DiscreteMeasure):
    levels = np.unique(mu.f_values)

    def generate(target, rng, full):
        top = 3.0 / target * (1.0 + rng.uniform(0.0, 0.2))
        step = 0.3 * target
        n = int(math.ceil(top / step))
        p = (np.arange(1, n + 1) + rng.uniform(-0.3, 0.3, n)) * step
        # nudge cuts off the atoms so that p mu(B(p)) vanishes
        hit = np.isin(p, levels)
        p[hit] += 0.01 * step
        p = np.concatenate([[0.0], p])
        return System(p, np.concatenate([p[1:], [np.inf]]))

    return generate


def level_mesh(mu: DiscreteMeasure) -> Callable[[System], float]:
    def mesh(D: System) -> float:
        if len(D) == 1:
            return 1.0
        p = D.hi[:-1]
        gaps = D.hi[:-1] - D.lo[:-1]
        return float(gaps.max() + 1.0 / p[-1] + np.sum(p * mu.atom_mass(p)))

    return mesh


def level_function(mu: DiscreteMeasure) -> IntervalFunction:
    """``psi(I(p, q)) = p mu(I(p, q))``."""
    return IntervalFunction(lambda D: D.lo * mu.level_measure(D.lo, D.hi), "p*mu(I(p,q))", 1)


def level_set_members(mu: DiscreteMeasure, p: float, q: float) -> np.ndarray:
    """Indices of points with ``p < f <= q``."""
    return np.flatnonzero((mu.f_values > p) & (mu.f_values <= q))


# ----------------------------------------------------------- Weierstrass


def _tau(D: System, rule: str, seed: int) -> np.ndarray:
    lo, hi = D.lo_float, D.hi_float
    if rule == "left":
        return lo
    if rule == "right":
        return hi
    if rule == "mid":
        return 0.5 * (lo + hi)
    if rule == "random":
        return lo + np.random.default_rng(seed).uniform(size=lo.size) * (hi - lo)
    raise ValueError(f"unknown tau rule {rule!r}")


def weierstrass_function(curve: Curve, F: ParametricIntegrand, tau_rule: str = "mid", seed: int = 0) -> IntervalFunction:
    """``Phi(I) = F(x(tau), x(b) - x(a))`` on subdivisions of ``[0, 1]``."""
    phi = increment_function(curve)

    def evaluate(D: System) -> np.ndarray:
        x = curve(_affine(curve, _tau(D, tau_rule, seed)))
        return F(x, phi.values(D))

    return IntervalFunction(evaluate, f"W[{F.name}, {curve.name}]", 1)


def jordan_space(name: str = "jordan", jumps: Sequence[float] = ()) -> IntervalSpace:
    return IntervalSpace(name, "[0,1]", "subdivision", _subdivision_generator(jumps), _subdivision_mesh)


def unit_speed_integral(curve: Curve, F: ParametricIntegrand, order: int = 8, panels: int = 1024) -> float:
    """``int_0^L F(X(s), X'(s)) ds`` with ``X'`` the unit tangent at ``x(s)``.

    Curves without a derivative evaluator, or not absolutely continuous,
    use chord directions of the unit-speed samples.
    """
    usc = reparametrize(curve)
    L = usc.total_length
    if curve.has_derivative and curve.absolutely_continuous:
        nodes, weights = composite_nodes(np.linspace(0.0, L, panels + 1), order)
        s = nodes.ravel()
        x = usc.parameter_at(s)
        d = curve.derivative(x)
        speed = np.linalg.norm(d, axis=1, keepdims=True)
        theta = d / np.where(speed > 0, speed, 1.0)
        return float(np.sum(F(curve(x), theta).reshape(nodes.shape) * weights))
    g = usc.samples
    chords = np.diff(g, axis=0)
    h = usc.spacing
    mid = usc(0.5 * (usc.s_grid[1:] + usc.s_grid[:-1]))
    return float(np.sum(F(mid, chords / h)) * h)


def weierstrass_integral(
    curve: Curve,
    F: ParametricIntegrand,
    schedule: RefinementSchedule = RefinementSchedule(4, 14),
    tol: float = 1e-6,
    tau_rule: str = "mid",
    seed: int = 0,
    cross_check: bool = True,
) -> ConvergenceReport:
    """BC-integral of ``F(x(tau), phi(I))`` over the subdivision space.

    With ``cross_check`` the extras hold the line integral
    (``line_integral``), the unit-speed Lebesgue form (``lebesgue``) and
    the absolute gaps to each.
    """
    _gate(F, curve.dim)
    space = jordan_space()
    Phi = weierstrass_function(curve, F, tau_rule, seed)
    rep = bc_integral(space, Phi, None, schedule=schedule, tol=tol, seed=seed)
    if cross_check:
        li = line_integral(curve, F, tol=tol).limit_estimate
        if curve.dim and _length_positive(curve):
            leb = unit_speed_integral(curve, F)
        else:
            leb = 0.0
        rep.extras.update(
            line_integral=li,
            lebesgue=leb,
            gap_line=abs(rep.limit_estimate - li),
            gap_lebesgue=abs(rep.limit_estimate - leb),
            tau_rule=tau_rule,
        )
    return rep


def _length_positive(curve: Curve) -> bool:
    probe = curve(np.linspace(curve.lo, curve.hi, 65))
    return bool(np.any(np.linalg.norm(probe - probe[0], axis=1) > 1e-12))


# ---------------------------------------------------------------- catalog


@dataclass(frozen=True, eq=False)
class ExampleConfig:
    """A runnable catalog entry.

    ``targets`` is the decreasing mesh schedule for BC-integral estimates,
    ``expected`` the ground-truth integral and ``provenance`` its source.
    ``related`` holds companion interval functions and fixtures.
    """

    id: int
    title: str
    space: IntervalSpace
    phi: IntervalFunction
    S: Any
    expected: Any
    provenance: str
    targets: tuple
    tol: float
    related: dict = field(default_factory=dict)

    def integral(self, seed: int = 0, S=..., phi: IntervalFunction | None = None) -> ConvergenceReport:
        return bc_integral(
            self.space,
            phi or self.phi,
            self.S if S is ... else S,
            tol=self.tol,
            seed=seed,
            targets=self.targets,
        )


def _dyadic_targets(lo: int, hi: int) -> tuple:
    return tuple(2.0 ** -k for k in range(lo, hi + 1))


def _interval_space(name, generator, mesh, **params):
    return IntervalSpace(name, "[0,1]", "closed subintervals", generator, mesh, params)


def _ex1(**_):
    space = _interval_space("coverage", _float_generator(), _coverage_mesh)
    return ExampleConfig(1, "coverage mesh", space, length_function(), None, 1.0,
                         "stated: quasi additive with B = 1", _dyadic_targets(3, 12), 1e-9,
                         {"squared": length_function(2.0), "sqrt": length_function(0.5)})


def _ex2(**_):
    space = _interval_space("coverage_off_zero", _float_generator("off_zero"), _mesh_off_zero)
    return ExampleConfig(2, "coverage mesh, penalty for an interval at 0", space, length_function(), None, 1.0,
                         "stated: quasi additive with V = 1", _dyadic_targets(3, 12), 1e-4)


def _ex3(**_):
    space = _interval_space("coverage_at_zero", _float_generator("zero"), _mesh_at_zero)
    return ExampleConfig(3, "coverage mesh, interval at 0 required", space, length_function(), None, 1.0,
                         "stated: quasi additive with V = 1", _dyadic_targets(3, 12), 1e-9)


def _ex4(construction: str = "irrational", **_):
    if construction == "irrational":
        gen = _exact_generator(irrational=True)
    elif construction == "prime":
        gen = lambda target, rng, full: prime_system(target)
    else:
        raise ValueError("construction must be 'irrational' or 'prime'")
    space = _interval_space("rational_penalty", gen, penalty_mesh, construction=construction)
    anomaly = {
        "coarse": System.from_cuts([QNum(0), QNum(1)]),
        "halves": System.from_cuts([QNum(0), QNum(Fraction(1, 2)), QNum(1)]),
        "expected": (3.0, 3.5),
    }
    return ExampleConfig(4, "rational-penalty mesh", space, length_function(), None, 1.0,
                         "stated: quasi additive and B = 1", _dyadic_targets(3, 9), 1e-8,
                         {"anomaly": anomaly})


def _ex5(**_):
    space = _interval_space("irrational_endpoints", _exact_generator(irrational=True), _mesh_irrational)
    phi = IntervalFunction(_signed_length, "signed |I|")
    return ExampleConfig(5, "irrational endpoints", space, phi, None, 1.0,
                         "stated: quasi additive, and B = 1", _dyadic_targets(3, 9), 1e-8)


def _ex6(**_):
    space = _interval_space("rational_endpoints", _exact_generator(irrational=False), _mesh_rational)
    phi = IntervalFunction(_signed_length, "signed |I|")
    return ExampleConfig(6, "rational endpoints", space, phi, None, -1.0,
                         "stated: quasi additive, and B = -1", _dyadic_targets(3, 9), 1e-9)


def _curve_param(curve) -> Curve:
    if curve is None:
        return circle()
    if isinstance(curve, Curve):
        return curve
    if isinstance(curve, str):
        return from_catalog(curve)
    return from_catalog(**curve)


def _ex7(curve=None, **_):
    from ..curves import length, speed_integral

    c = _curve_param(curve)
    phi = increment_function(c)
    if c.has_derivative and c.absolutely_continuous:
        expected, prov = speed_integral(c), "derived: length oracle"
    else:
        expected, prov = length(c).limit_estimate, "derived: length oracle"
    related = {"vector": phi}
    for r in range(1, c.dim + 1):
        related[f"component_{r}"] = phi.component(r)
        related[f"positive_{r}"] = phi.component(r).positive_part()
        related[f"negative_{r}"] = phi.component(r).negative_part()
    return ExampleConfig(7, f"Jordan length of {c.name}", jordan_space(), phi.norm(), None, expected,
                         prov, _dyadic_targets(3, 14), 1e-6, related)


def _ex8(curve: JumpCurve | None = None, **_):
    jc = curve or step_curve()
    space = IntervalSpace("jordan_jumps", "[0,1]", "subdivision", _subdivision_generator(jc.jump_points()),
                          jump_mesh(jc))
    phi = jump_increment(jc)
    sigma = sum(jc.saltus().values())
    return ExampleConfig(8, f"Jordan length of {jc.name}", space, phi.norm(), None, 1.0 if curve is None else None,
                         "derived: total jump of the step curve", _dyadic_targets(3, 14), 1e-9,
                         {"vector": phi, "curve": jc, "sigma": sigma})


def _ex9(f: str | Callable = "x^2", m: int = 1, tag: str = "mid", **_):
    fn = parse_function(f, m)
    space = IntervalSpace(f"cube{m}", f"[0,1]^{m}", "boxes", _box_generator(m), _subdivision_mesh, {"m": m})
    exact = cube_integral(f, m) if isinstance(f, str) else None
    deepest = {1: 14, 2: 7, 3: 4}.get(m, 3)
    return ExampleConfig(9, f"Cauchy integral of {f}", space, cauchy_function(fn, m, tag), None, exact,
                         "derived: Riemann integral oracle", _dyadic_targets(2, deepest), 1e-6,
                         {"f": fn, "lo": cauchy_function(fn, m, "lo"), "hi": cauchy_function(fn, m, "hi")})


def _ex10(points=None, weights=None, f: str | Callable = "x", **_):
    points = np.arange(1, 10) / 10 if points is None else np.asarray(points, dtype=float)
    weights = np.full(points.size, 1.0 / points.size) if weights is None else np.asarray(weights, dtype=float)
    mu = DiscreteMeasure.from_function(points, weights, f)
    space = IntervalSpace("level_sets", "finite point set", "level sets I(p, q)", _level_generator(mu),
                          level_mesh(mu), {"measure": mu})
    return ExampleConfig(10, "Lebesgue-Stieltjes integral", space, level_function(mu), None, mu.integral,
                         "derived: finite-sum Lebesgue-Stieltjes oracle", _dyadic_targets(2, 8), 1e-2,
                         {"measure": mu})


def _ex11(curve=None, integrand: str | ParametricIntegrand = "area2d", tau_rule: str = "mid", **_):
    c = _curve_param(curve)
    F = integrand if isinstance(integrand, ParametricIntegrand) else integrand_by_name(integrand)
    _gate(F, c.dim)
    from ..integrand import line_integral_ac

    expected = line_integral_ac(c, F) if c.has_derivative and c.absolutely_continuous else None
    related = {"curve": c, "integrand": F}
    for rule in ("left", "right", "random"):
        related[f"tau_{rule}"] = weierstrass_function(c, F, rule)
    return ExampleConfig(11, f"Weierstrass integral of {F.name} on {c.name}", jordan_space(),
                         weierstrass_function(c, F, tau_rule), None, expected,
                         "derived: agreement with line integral and unit-speed form",
                         _dyadic_targets(3, 14), 1e-6, related)


_BUILDERS = {1: _ex1, 2: _ex2, 3: _ex3, 4: _ex4, 5: _ex5, 6: _ex6, 7: _ex7, 8: _ex8, 9: _ex9, 10: _ex10, 11: _ex11}


def example_catalog(id: int, **params) -> ExampleConfig:
    """Configured example ``id`` (1 to 11); ``params`` tune curves, functions and measures."""
    try:
        builder = _BUILDERS[int(id)]
    except (KeyError, ValueError, TypeError):
        raise UnknownExample(f"no catalog example {id!r}; valid ids are 1..11") from None
    return builder(**params)


def parse_example_uri(uri: str) -> tuple[int, dict[str, str]]:
    """``bc://example/<id>?key=value&...`` to ``(id, params)``."""
    from urllib.parse import parse_qsl, urlparse

    u = urlparse(uri)
    if u.scheme != "bc" or u.netloc != "example":
        raise UnknownExample(f"not an example address: {uri!r}")
    try:
        ident = int(u.path.strip("/"))
    except ValueError:
        raise UnknownExample(f"bad example id in {uri!r}") from None
    return ident, dict(parse_qsl(u.query))
