"""Sparse Laurent polynomials over Z in v = q^(1/2).

Exponents are always in v-units; q-polynomials simply have even exponents.

>>> XI * XI
LaurentPoly({-2: 1, 0: -2, 2: 1})
>>> expand_in(XI * XI, "XI").coeffs
(0, 0, 1)
>>> str(LaurentPoly({3: 1, 0: -2, -1: 1}))
'q^{3/2} - 2 + q^{-1/2}'
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NotAQPolynomial, NotExpressible

__all__ = [
    "LaurentPoly",
    "BasisExpansion",
    "NEG_INFINITY",
    "ZERO",
    "ONE",
    "V",
    "VINV",
    "XI",
    "ETA",
    "expand_in",
    "degree",
    "poly_arith",
]

NEG_INFINITY = -math.inf


class LaurentPoly:
    """Immutable map exponent -> nonzero integer coefficient."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs=None):
        if coeffs is None:
            self._c = {}
        elif isinstance(coeffs, LaurentPoly):
            self._c = coeffs._c
        else:
            items = coeffs.items() if isinstance(coeffs, dict) else coeffs
            c = {}
            for e, a in items:
                if a:
                    c[int(e)] = c.get(int(e), 0) + int(a)
            self._c = {e: a for e, a in c.items() if a}
        self._hash = None

    @classmethod
    def _wrap(cls, c: dict) -> LaurentPoly:
        # trusted constructor: c has no zero entries and is not shared
        p = cls.__new__(cls)
        p._c = c
        p._hash = None
        return p

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> LaurentPoly:
        return cls._wrap({exp: coeff} if coeff else {})

    @classmethod
    def constant(cls, k: int) -> LaurentPoly:
        return cls.monomial(0, k)

    # -- inspection --------------------------------------------------------------

    def items(self):
        return sorted(self._c.items())

    def coeff(self, exp: int) -> int:
        return self._c.get(exp, 0)

    def __getitem__(self, exp: int) -> int:
        return self._c.get(exp, 0)

    def __bool__(self):
        return bool(self._c)

    def __len__(self):
        return len(self._c)

    @property
    def degree(self):
        return max(self._c) if self._c else NEG_INFINITY

    @property
    def low_degree(self):
        return min(self._c) if self._c else math.inf

    def is_constant(self) -> bool:
        return not self._c or set(self._c) == {0}

    # -- arithmetic ----------------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other._c:
            return self
        c = dict(self._c)
        for e, a in other._c.items():
            b = c.get(e, 0) + a
            if b:
                c[e] = b
            else:
                c.pop(e, None)
        return LaurentPoly._wrap(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._wrap({e: -a for e, a in self._c.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return ZERO
            return LaurentPoly._wrap({e: a * other for e, a in self._c.items()})
        other = _coerce(other)
        if other is NotImplemented:
            return other
        c: dict[int, int] = {}
        for e1, a1 in self._c.items():
            for e2, a2 in other._c.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + a1 * a2
        return LaurentPoly._wrap({e: a for e, a in c.items() if a})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are only defined for monomials; use shift()")
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by v^k."""
        if not k:
            return self
        return LaurentPoly._wrap({e + k: a for e, a in self._c.items()})

    def bar(self) -> LaurentPoly:
        """The involution v -> v^{-1}."""
        return LaurentPoly._wrap({-e: a for e, a in self._c.items()})

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    # -- printing / serialization ---------------------------------------------------

    def __repr__(self):
        return f"LaurentPoly({dict(sorted(self._c.items()))})"

    def __str__(self):
        return self.to_text()

    def to_text(self, var: str = "q") -> str:
        if not self._c:
            return "0"
        parts = []
        for e, a in sorted(self._c.items(), reverse=True):
            mono = _monomial_text(e, var)
            mag = abs(a)
            if mono == "1":
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}{mono}"
            if not parts:
                parts.append(body if a > 0 else f"-{body}")
            else:
                parts.append(("+ " if a > 0 else "- ") + body)
        return " ".join(parts)

    def to_json(self) -> list[list[int]]:
        return [[e, a] for e, a in sorted(self._c.items())]

    @classmethod
    def from_json(cls, data) -> LaurentPoly:
        return cls({int(e): int(a) for e, a in data})

    def to_q_json(self) -> list[list[int]]:
        """[[q-exponent, coeff], ...]; requires even v-exponents."""
        if any(e % 2 for e in self._c):
            raise NotAQPolynomial(f"{self!r} has odd v-exponents")
        return [[e // 2, a] for e, a in sorted(self._c.items())]

    @classmethod
    def from_q_json(cls, data) -> LaurentPoly:
        return cls({2 * int(e): int(a) for e, a in data})


def _monomial_text(e: int, var: str) -> str:
    if e == 0:
        return "1"
    if e % 2 == 0:
        k = e // 2
        return var if k == 1 else f"{var}^{{{k}}}"
    return f"{var}^{{{e}/2}}"


def _coerce(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.constant(x)
    return NotImplemented


ZERO = LaurentPoly()
ONE = LaurentPoly.constant(1)
V = LaurentPoly.monomial(1)
VINV = LaurentPoly.monomial(-1)
XI = LaurentPoly({1: 1, -1: -1})
ETA = LaurentPoly({1: 1, -1: 1})

_BASES = {"XI": XI, "ETA": ETA}


def poly_arith(p: LaurentPoly, r: LaurentPoly, op: str) -> LaurentPoly:
    if op == "add":
        return p + r
    if op == "sub":
        return p - r
    if op == "mul":
        return p * r
    raise ValueError(f"unknown op {op!r}")


@dataclass(frozen=True)
class BasisExpansion:
    """sum(coeffs[k] * basis**k) with basis XI = v - 1/v or ETA = v + 1/v."""

    basis: str
    coeffs: tuple[int, ...]

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INFINITY

    def top(self, power: int) -> int:
        return self.coeffs[power] if 0 <= power < len(self.coeffs) else 0

    def to_laurent(self) -> LaurentPoly:
        b = _BASES[self.basis]
        out = ZERO
        power = ONE
        for c in self.coeffs:
            if c:
                out = out + power * c
            power = power * b
        return out

    def __str__(self):
        sym = {"XI": "xi", "ETA": "eta"}[self.basis]
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                mono = "1" if k == 0 else (sym if k == 1 else f"{sym}^{k}")
                terms.append(str(c) if k == 0 else (mono if c == 1 else f"{c}*{mono}"))
        return " + ".join(terms) if terms else "0"


def expand_in(p: LaurentPoly, basis: str) -> BasisExpansion:
    """Rewrite p as an integer polynomial in XI or ETA by peeling leading terms."""
    if basis not in _BASES:
        raise ValueError(f"basis must be XI or ETA, got {basis!r}")
    b = _BASES[basis]
    if not p:
        return BasisExpansion(basis, ())
    top = p.degree
    if top < 0:
        raise NotExpressible(f"{p!r} has negative top degree")
    powers = [ONE]
    for _ in range(top):
        powers.append(powers[-1] * b)
    coeffs = [0] * (top + 1)
    rest = p
    while rest:
        d = rest.degree
        if d < 0:
            raise NotExpressible(f"{p!r} is not a polynomial in {basis}: remainder {rest!r}")
        c = rest.coeff(d)
        coeffs[d] = c
        rest = rest - powers[d] * c
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return BasisExpansion(basis, tuple(coeffs))


def degree(p: LaurentPoly, unit: str = "V"):
    """Top exponent in v-units ("V") or q-units ("Q"); NEG_INFINITY for zero."""
    if unit == "V":
        return p.degree
    if unit == "Q":
        if any(e % 2 for e, _ in p.items()):
            raise NotAQPolynomial(f"{p!r} has odd v-exponents")
        return p.degree // 2 if p else NEG_INFINITY
    raise ValueError(f"unit must be V or Q, got {unit!r}")
