"""Exact arithmetic in Z[2cos(pi/N)].

Elements are integer coefficient vectors in the power basis
1, theta, ..., theta^(d-1) where theta = 2cos(pi/N) and d is the degree of its
minimal polynomial.  Everything is integer arithmetic; equality is vector
equality.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd

import sympy

__all__ = ["CycRing", "CycInt", "ring_for_orders"]


@lru_cache(maxsize=None)
def _minimal_polynomial(n: int) -> tuple[int, ...]:
    """Monic minimal polynomial of 2cos(pi/n), low degree first."""
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.minimal_polynomial(2 * sympy.cos(sympy.pi / n), x), x)
    coeffs = [int(c) for c in reversed(poly.all_coeffs())]
    if coeffs[-1] != 1:
        raise ArithmeticError(f"minimal polynomial of 2cos(pi/{n}) is not monic")
    return tuple(coeffs)


class CycRing:
    """The ring Z[theta], theta = 2cos(pi/N), reduced modulo the minimal polynomial."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("N must be a positive integer")
        self.n = n
        self.minpoly = _minimal_polynomial(n)
        self.degree = len(self.minpoly) - 1
        d = self.degree
        # theta^k reduced, for k < 2d - 1; products never need more
        powers = []
        vec = [0] * d
        vec[0] = 1
        for _ in range(2 * d - 1):
            powers.append(tuple(vec))
            vec = self._times_theta(vec)
        self._powers = powers

    def _times_theta(self, vec):
        d = self.degree
        out = [0] + list(vec)
        top = out.pop()
        if top:
            for i in range(d):
                out[i] -= top * self.minpoly[i]
        return out

    def __eq__(self, other):
        return isinstance(other, CycRing) and other.n == self.n

    def __hash__(self):
        return hash(("CycRing", self.n))

    def __repr__(self):
        return f"CycRing({self.n})"

    def mul_vec(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        d = self.degree
        raw = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        raw[i + j] += ai * bj
        out = list(raw[:d])
        for k in range(d, 2 * d - 1):
            ck = raw[k]
            if ck:
                for i, pi in enumerate(self._powers[k]):
                    out[i] += ck * pi
        return tuple(out)

    def element(self, coeffs) -> CycInt:
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) > self.degree:
            # reduce by treating the vector as a polynomial in theta
            acc = [0] * self.degree
            vec = [0] * self.degree
            vec[0] = 1
            for c in coeffs:
                for i in range(self.degree):
                    acc[i] += c * vec[i]
                vec = self._times_theta(vec)
            coeffs = tuple(acc)
        coeffs = coeffs + (0,) * (self.degree - len(coeffs))
        return CycInt(self, coeffs)

    def from_int(self, k: int) -> CycInt:
        return self.element((k,))

    @property
    def theta(self) -> CycInt:
        return self.element((0, 1))

    def two_cos(self, m) -> CycInt:
        """2cos(pi/m) for finite m dividing N; m = inf maps to 2."""
        if m == float("inf"):
            return self.from_int(2)
        m = int(m)
        if self.n % m:
            raise ValueError(f"{m} does not divide N={self.n}")
        # 2cos(k x) = V_k(2cos x): V_0 = 2, V_1 = y, V_{k+1} = y V_k - V_{k-1}
        k = self.n // m
        prev, cur = self.from_int(2), self.theta
        if k == 0:
            return prev
        for _ in range(k - 1):
            prev, cur = cur, self.theta * cur - prev
        return cur

    def as_float(self, a: CycInt) -> float:
        import math

        theta = 2 * math.cos(math.pi / self.n)
        return sum(c * theta**i for i, c in enumerate(a.coeffs))


class CycInt:
    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: CycRing, coeffs: tuple[int, ...]):
        self.ring = ring
        self.coeffs = coeffs

    def _coerce(self, other) -> CycInt:
        if isinstance(other, CycInt):
            if other.ring != self.ring:
                raise ValueError("mixing elements of different rings")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(self.ring, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.ring, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(self.ring, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(self.ring, self.ring.mul_vec(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        if not isinstance(other, CycInt):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"CycInt({self.ring.n}, {self.coeffs})"

    def __float__(self):
        return self.ring.as_float(self)


def ring_for_orders(orders) -> CycRing:
    """Smallest ring holding 2cos(pi/m) for every finite m in `orders`."""
    n = 1
    for m in orders:
        if m != float("inf"):
            m = int(m)
            n = n * m // gcd(n, m)
    return CycRing(n)
