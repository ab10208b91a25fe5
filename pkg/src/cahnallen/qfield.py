"""Exact scalar arithmetic over Q(sqrt(2)).

All coefficients of the traveling-wave derivation live in the quadratic
field Q(sqrt(2)): rationals extended by sqrt(2).  Keeping them exact lets
every closure branch be checked by structural zero instead of a floating
tolerance.

``Rational`` is the stdlib ``fractions.Fraction``: it already guarantees
gcd-reduced numerator/denominator with a positive denominator on top of
arbitrary-precision integers, which is exactly the contract needed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Fraction

RationalLike = Union[int, Fraction]

SQRT2 = math.sqrt(2.0)


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    if x < 0:
        return None
    num, den = x.numerator, x.denominator
    rn = math.isqrt(num)
    rd = math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class Radical2:
    """The number ``r + s*sqrt(2)`` with exact rational parts r, s."""

    r: Fraction = Fraction(0)
    s: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if not isinstance(self.r, Fraction):
            object.__setattr__(self, "r", Fraction(self.r))
        if not isinstance(self.s, Fraction):
            object.__setattr__(self, "s", Fraction(self.s))

    @classmethod
    def of(cls, value: "Radical2 | RationalLike") -> "Radical2":
        if isinstance(value, Radical2):
            return value
        return cls(Fraction(value), Fraction(0))

    @classmethod
    def sqrt2(cls, multiple: RationalLike = 1) -> "Radical2":
        return cls(Fraction(0), Fraction(multiple))

    def __bool__(self) -> bool:
        return bool(self.r) or bool(self.s)

    def __neg__(self) -> "Radical2":
        return Radical2(-self.r, -self.s)

    def __add__(self, other: "Radical2 | RationalLike") -> "Radical2":
        other = Radical2.of(other)
        return Radical2(self.r + other.r, self.s + other.s)

    __radd__ = __add__

    def __sub__(self, other: "Radical2 | RationalLike") -> "Radical2":
        return self + (-Radical2.of(other))

    def __rsub__(self, other: "Radical2 | RationalLike") -> "Radical2":
        return (-self) + Radical2.of(other)

    def __mul__(self, other: "Radical2 | RationalLike") -> "Radical2":
        other = Radical2.of(other)
        return Radical2(
            self.r * other.r + 2 * self.s * other.s,
            self.r * other.s + self.s * other.r,
        )

    __rmul__ = __mul__

    def conj(self) -> "Radical2":
        """Field conjugate r - s*sqrt(2)."""
        return Radical2(self.r, -self.s)

    def norm(self) -> Fraction:
        """Rational norm r**2 - 2*s**2 (the product with the conjugate)."""
        return self.r * self.r - 2 * self.s * self.s

    def inverse(self) -> "Radical2":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse in Q(sqrt(2))")
        return Radical2(self.r / n, -self.s / n)

    def __truediv__(self, other: "Radical2 | RationalLike") -> "Radical2":
        return self * Radical2.of(other).inverse()

    def __rtruediv__(self, other: "Radical2 | RationalLike") -> "Radical2":
        return Radical2.of(other) * self.inverse()

    def __pow__(self, n: int) -> "Radical2":
        if n < 0:
            return self.inverse() ** (-n)
        out = Radical2.of(1)
        base = self
        while n > 0:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Radical2.of(other)
        if isinstance(other, Radical2):
            return self.r == other.r and self.s == other.s
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.r, self.s))

    def __float__(self) -> float:
        return float(self.r) + float(self.s) * SQRT2

    def is_rational(self) -> bool:
        return self.s == 0

    def sqrt(self) -> "Radical2 | None":
        """Exact square root within Q(sqrt(2)), or None if there is none.

        Solves (x + y*sqrt(2))**2 = r + s*sqrt(2), i.e. x**2 + 2*y**2 = r
        and 2*x*y = s.  Returns the non-negative root.
        """
        if not self:
            return Radical2()
        candidates: list[Radical2] = []
        if self.s == 0:
            x = rational_sqrt(self.r)
            if x is not None:
                candidates.append(Radical2(x, Fraction(0)))
            y = rational_sqrt(self.r / 2)
            if y is not None:
                candidates.append(Radical2(Fraction(0), y))
        else:
            disc = rational_sqrt(self.r * self.r - 2 * self.s * self.s)
            if disc is not None:
                for sign in (1, -1):
                    y2 = (self.r + sign * disc) / 4
                    y = rational_sqrt(y2)
                    if y is None or y == 0:
                        continue
                    x = self.s / (2 * y)
                    candidates.append(Radical2(x, y))
        for cand in candidates:
            if cand * cand == self:
                return cand if float(cand) >= 0 else -cand
        return None

    def __str__(self) -> str:
        if not self:
            return "0"
        parts: list[str] = []
        if self.r:
            parts.append(str(self.r))
        if self.s:
            mag = abs(self.s)
            if mag.numerator == 1:
                core = "sqrt2"
            else:
                core = f"{mag.numerator}*sqrt2"
            if mag.denominator != 1:
                core += f"/{mag.denominator}"
            if parts:
                parts.append("- " + core if self.s < 0 else "+ " + core)
            else:
                parts.append("-" + core if self.s < 0 else core)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Radical2({self.r!r}, {self.s!r})"


ZERO = Radical2()
ONE = Radical2.of(1)
SQRT2_EXACT = Radical2.sqrt2()
