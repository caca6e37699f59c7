"""Exact endpoints of the form ``q + k * omega``.

``q`` is rational and ``omega = sqrt(2) * 1e-9`` is a fixed irrational, so a
value is rational exactly when ``k == 0``.  Ordering is decided exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

OMEGA = math.sqrt(2.0) * 1e-9
_OMEGA_SQ = Fraction(2, 10 ** 18)


def _sign(r: Fraction, k: int) -> int:
    """Sign of ``r + k * omega``."""
    if k == 0:
        return (r > 0) - (r < 0)
    if r >= 0 and k > 0:
        return 1
    if r <= 0 and k < 0:
        return -1
    # opposite signs; squares never tie because omega is irrational
    if r * r > k * k * _OMEGA_SQ:
        return 1 if r > 0 else -1
    return 1 if k > 0 else -1


@total_ordering
@dataclass(frozen=True)
class QNum:
    rational: Fraction
    surd: int = 0

    def __post_init__(self):
        if not isinstance(self.rational, Fraction):
            object.__setattr__(self, "rational", Fraction(self.rational))

    @property
    def is_rational(self) -> bool:
        return self.surd == 0

    def __float__(self) -> float:
        return float(self.rational) + self.surd * OMEGA

    def _coerce(self, other) -> "QNum":
        if isinstance(other, QNum):
            return other
        if isinstance(other, (int, Fraction)):
            return QNum(Fraction(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QNum(self.rational + o.rational, self.surd + o.surd)

    __radd__ = __add__

    def __neg__(self):
        return QNum(-self.rational, -self.surd)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QNum(self.rational - o.rational, self.surd - o.surd)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __lt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = self - o
        return _sign(d.rational, d.surd) < 0

    def __repr__(self):
        if self.surd == 0:
            return f"QNum({self.rational})"
        return f"QNum({self.rational} {'+' if self.surd > 0 else '-'} {abs(self.surd)}w)"


def rational_penalty(m: QNum) -> Fraction:
    """``1/p`` for ``m = q/p`` in lowest terms, ``0`` for irrational ``m``."""
    if not m.is_rational:
        return Fraction(0)
    return Fraction(1, m.rational.denominator)
