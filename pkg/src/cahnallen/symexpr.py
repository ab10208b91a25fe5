"""Canonical polynomial expressions for the ansatz calculus.

An expression is a normalized sum of monomials.  A monomial multiplies an
exact Q(sqrt(2)) coefficient with

* powers of scalar atoms (k, w, A0, A1, c1, c2, and further ansatz
  coefficients A2.. when a higher-degree ansatz is built),
* powers of profile-derivative atoms u, u', u'', ...,
* powers of the unknown-function derivative atoms S', S'', S''', ...,
* a grade g >= 0, the power of S**-1 carried by the term.

Only the differentiation rules are attached to S and u; no functional form
is assumed for either until the closure is integrated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .qfield import Radical2

CORE_ATOMS = ("k", "w", "A0", "A1", "c1", "c2")

ScalarLike = Union[Radical2, Fraction, int]
Bindable = Union["SymExpr", Radical2, Fraction, int]


def _atom_sort_key(name: str) -> tuple[int, int, str]:
    if name in CORE_ATOMS:
        return (0, CORE_ATOMS.index(name), name)
    if name.startswith("A") and name[1:].isdigit():
        return (1, int(name[1:]), name)
    raise ValueError(f"unknown scalar atom {name!r}")


def _canon_powers(powers: Mapping, key=None) -> tuple:
    items = [(a, int(e)) for a, e in powers.items() if e]
    for a, e in items:
        if e < 0:
            raise ValueError(f"negative exponent for {a!r}")
    items.sort(key=(lambda it: key(it[0])) if key else (lambda it: it[0]))
    return tuple(items)


@dataclass(frozen=True)
class Monomial:
    coeff: Radical2
    sym_powers: tuple = ()
    u_powers: tuple = ()
    deriv_powers: tuple = ()
    s_grade: int = 0

    @classmethod
    def make(
        cls,
        coeff: ScalarLike,
        sym: Mapping[str, int] | None = None,
        u: Mapping[int, int] | None = None,
        deriv: Mapping[int, int] | None = None,
        s_grade: int = 0,
    ) -> "Monomial":
        if s_grade < 0:
            raise ValueError("s_grade must be non-negative")
        return cls(
            Radical2.of(coeff),
            _canon_powers(sym or {}, key=_atom_sort_key),
            _canon_powers(u or {}),
            _canon_powers(deriv or {}),
            s_grade,
        )

    def signature(self) -> tuple:
        return (self.s_grade, self.deriv_powers, self.u_powers, self.sym_powers)

    def scaled(self, factor: ScalarLike) -> "Monomial":
        return Monomial(
            self.coeff * Radical2.of(factor),
            self.sym_powers,
            self.u_powers,
            self.deriv_powers,
            self.s_grade,
        )

    def s_degree(self) -> int:
        """Total power of S-derivative atoms in the monomial."""
        return sum(e for _, e in self.deriv_powers)


def _merge_powers(a: tuple, b: tuple, key=None) -> tuple:
    merged: dict = {}
    for atom, e in a:
        merged[atom] = merged.get(atom, 0) + e
    for atom, e in b:
        merged[atom] = merged.get(atom, 0) + e
    return _canon_powers(merged, key=key)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return Monomial(
        a.coeff * b.coeff,
        _merge_powers(a.sym_powers, b.sym_powers, key=_atom_sort_key),
        _merge_powers(a.u_powers, b.u_powers),
        _merge_powers(a.deriv_powers, b.deriv_powers),
        a.s_grade + b.s_grade,
    )


@dataclass(frozen=True)
class SymExpr:
    """Normalized sum of monomials; the empty sum is zero."""

    terms: tuple = ()

    @classmethod
    def zero(cls) -> "SymExpr":
        return cls()

    @classmethod
    def const(cls, value: ScalarLike) -> "SymExpr":
        return cls.from_terms([Monomial.make(value)])

    @classmethod
    def atom(cls, name: str) -> "SymExpr":
        return cls.from_terms([Monomial.make(1, sym={name: 1})])

    @classmethod
    def u_deriv(cls, order: int) -> "SymExpr":
        if order < 0:
            raise ValueError("derivative order must be >= 0")
        return cls.from_terms([Monomial.make(1, u={order: 1})])

    @classmethod
    def s_deriv(cls, order: int) -> "SymExpr":
        if order < 1:
            raise ValueError("S-derivative order must be >= 1")
        return cls.from_terms([Monomial.make(1, deriv={order: 1})])

    @classmethod
    def s_inverse(cls, grade: int = 1) -> "SymExpr":
        return cls.from_terms([Monomial.make(1, s_grade=grade)])

    @classmethod
    def from_terms(cls, terms: Iterable[Monomial]) -> "SymExpr":
        acc: dict[tuple, Radical2] = {}
        keep: dict[tuple, Monomial] = {}
        for t in terms:
            sig = t.signature()
            if sig in acc:
                acc[sig] = acc[sig] + t.coeff
            else:
                acc[sig] = t.coeff
                keep[sig] = t
        out = [
            Monomial(acc[sig], m.sym_powers, m.u_powers, m.deriv_powers, m.s_grade)
            for sig, m in keep.items()
            if acc[sig]
        ]
        out.sort(key=lambda m: m.signature())
        return cls(tuple(out))

    def normalized(self) -> "SymExpr":
        return SymExpr.from_terms(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: Bindable) -> "SymExpr":
        other = as_expr(other)
        return SymExpr.from_terms(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self) -> "SymExpr":
        return SymExpr(tuple(t.scaled(-1) for t in self.terms))

    def __sub__(self, other: Bindable) -> "SymExpr":
        return self + (-as_expr(other))

    def __rsub__(self, other: Bindable) -> "SymExpr":
        return (-self) + as_expr(other)

    def __mul__(self, other: Bindable) -> "SymExpr":
        other = as_expr(other)
        return SymExpr.from_terms(
            _mono_mul(a, b) for a in self.terms for b in other.terms
        )

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "SymExpr":
        if n < 0:
            raise ValueError("int_pow exponent must be >= 0")
        out = SymExpr.const(1)
        base = self
        while n > 0:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scaled(self, factor: ScalarLike) -> "SymExpr":
        f = Radical2.of(factor)
        if not f:
            return SymExpr.zero()
        return SymExpr(tuple(t.scaled(f) for t in self.terms))

    def constant_value(self) -> Radical2:
        """The value of a constant expression (no atoms of any kind)."""
        if self.is_zero():
            return Radical2()
        if len(self.terms) == 1 and self.terms[0].signature() == (0, (), (), ()):
            return self.terms[0].coeff
        raise ValueError("expression is not a constant")

    def __str__(self) -> str:
        return to_text(self)


def as_expr(value: Bindable) -> SymExpr:
    if isinstance(value, SymExpr):
        return value
    return SymExpr.const(Radical2.of(value))


def combine(op: str, operands: list[SymExpr], exponent: int | None = None) -> SymExpr:
    """Single entry point over the closed algebra: add, mul, int_pow."""
    if op == "add":
        out = SymExpr.zero()
        for e in operands:
            out = out + e
        return out
    if op == "mul":
        out = SymExpr.const(1)
        for e in operands:
            out = out * e
        return out
    if op == "int_pow":
        (base,) = operands
        if exponent is None or exponent < 0:
            raise ValueError("int_pow requires exponent >= 0")
        return base**exponent
    raise ValueError(f"unknown op {op!r}")


def diff_xi(e: SymExpr) -> SymExpr:
    """Differentiate with respect to the wave coordinate.

    Scalar atoms are constants; d/dxi S^(j) = S^(j+1); d/dxi u^(j) = u^(j+1);
    d/dxi S**-g = -g * S**-(g+1) * S'.
    """
    out: list[Monomial] = []
    for t in e.terms:
        for j, exp in t.deriv_powers:
            d = dict(t.deriv_powers)
            d[j] = exp - 1
            d[j + 1] = d.get(j + 1, 0) + 1
            out.append(
                Monomial(
                    t.coeff * exp,
                    t.sym_powers,
                    t.u_powers,
                    _canon_powers(d),
                    t.s_grade,
                )
            )
        for j, exp in t.u_powers:
            d = dict(t.u_powers)
            d[j] = exp - 1
            d[j + 1] = d.get(j + 1, 0) + 1
            out.append(
                Monomial(
                    t.coeff * exp,
                    t.sym_powers,
                    _canon_powers(d),
                    t.deriv_powers,
                    t.s_grade,
                )
            )
        if t.s_grade:
            d = dict(t.deriv_powers)
            d[1] = d.get(1, 0) + 1
            out.append(
                Monomial(
                    t.coeff * (-t.s_grade),
                    t.sym_powers,
                    t.u_powers,
                    _canon_powers(d),
                    t.s_grade + 1,
                )
            )
    return SymExpr.from_terms(out)


def substitute(e: SymExpr, bindings: Mapping[str, Bindable]) -> SymExpr:
    """Replace scalar atoms by expressions or exact scalars.

    Only scalar atoms may be bound; the function symbols S and u carry
    differentiation structure and are rejected.
    """
    for name in bindings:
        if not isinstance(name, str):
            raise TypeError("bindings must be keyed by scalar atom names")
        _atom_sort_key(name)  # raises for unknown atoms, incl. S'/u forms
    if not bindings:
        return e
    values = {name: as_expr(v) for name, v in bindings.items()}
    out = SymExpr.zero()
    for t in e.terms:
        kept: dict[str, int] = {}
        factor = SymExpr.const(1)
        for atom, exp in t.sym_powers:
            if atom in values:
                factor = factor * values[atom] ** exp
            else:
                kept[atom] = exp
        base = SymExpr.from_terms(
            [Monomial(t.coeff, _canon_powers(kept, key=_atom_sort_key),
                      t.u_powers, t.deriv_powers, t.s_grade)]
        )
        out = out + base * factor
    return out


def substitute_u(e: SymExpr, replacements: Mapping[int, SymExpr]) -> SymExpr:
    """Replace profile-derivative atoms u^(j) by expressions."""
    out = SymExpr.zero()
    for t in e.terms:
        base = SymExpr.from_terms(
            [Monomial(t.coeff, t.sym_powers, (), t.deriv_powers, t.s_grade)]
        )
        factor = SymExpr.const(1)
        for order, exp in t.u_powers:
            if order not in replacements:
                raise KeyError(f"no replacement for u^({order})")
            factor = factor * replacements[order] ** exp
        out = out + base * factor
    return out


def substitute_s(e: SymExpr, replacements: Mapping[int, SymExpr]) -> SymExpr:
    """Replace S-derivative atoms S^(j) by expressions (orders not listed stay)."""
    out = SymExpr.zero()
    for t in e.terms:
        kept: dict[int, int] = {}
        factor = SymExpr.const(1)
        for order, exp in t.deriv_powers:
            if order in replacements:
                factor = factor * replacements[order] ** exp
            else:
                kept[order] = exp
        base = SymExpr.from_terms(
            [Monomial(t.coeff, t.sym_powers, t.u_powers, _canon_powers(kept),
                      t.s_grade)]
        )
        out = out + base * factor
    return out


def collect_grades(e: SymExpr) -> dict[int, SymExpr]:
    """Split by the power of S**-1; each returned part carries grade zero."""
    buckets: dict[int, list[Monomial]] = {}
    for t in e.terms:
        flat = Monomial(t.coeff, t.sym_powers, t.u_powers, t.deriv_powers, 0)
        buckets.setdefault(t.s_grade, []).append(flat)
    return {g: SymExpr.from_terms(ms) for g, ms in sorted(buckets.items())}


def recombine_grades(parts: Mapping[int, SymExpr]) -> SymExpr:
    out = SymExpr.zero()
    for g, part in parts.items():
        out = out + part * SymExpr.s_inverse(g) if g else out + part
    return out


# --- pretty printing -------------------------------------------------------

_PRIMES = {1: "S'", 2: "S''", 3: "S'''"}
_U_NAMES = {0: "u", 1: "u'", 2: "u''", 3: "u'''"}


def _pow_str(base: str, exp: int) -> str:
    return base if exp == 1 else f"{base}^{exp}"


def _mono_text(m: Monomial) -> tuple[bool, str]:
    """Return (negative, unsigned text) for one monomial."""
    factors: list[str] = []
    for atom, exp in m.sym_powers:
        factors.append(_pow_str(atom, exp))
    for order, exp in m.u_powers:
        name = _U_NAMES.get(order, f"u^({order})")
        factors.append(_pow_str(name, exp))
    for order, exp in m.deriv_powers:
        name = _PRIMES.get(order, f"S^({order})")
        factors.append(_pow_str(name, exp))
    if m.s_grade:
        factors.append(f"S^-{m.s_grade}")

    c = m.coeff
    negative = float(c) < 0
    if negative:
        c = -c
    if not factors:
        return negative, str(c)
    if c == Radical2.of(1):
        return negative, "*".join(factors)
    cs = str(c)
    if c.r and c.s:
        cs = f"({cs})"
    return negative, "*".join([cs] + factors)


def to_text(e: SymExpr) -> str:
    """Deterministic text rendering in the derivation-trace notation."""
    if e.is_zero():
        return "0"
    pieces: list[str] = []
    for i, m in enumerate(e.terms):
        neg, body = _mono_text(m)
        if i == 0:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append(("- " if neg else "+ ") + body)
    return " ".join(pieces)
