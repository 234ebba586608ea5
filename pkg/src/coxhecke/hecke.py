"""The Hecke algebra in the normalized basis T~_w = v^{-l(w)} T_w.

Products are formed letter by letter with the quadratic relation

    T~_w T~_s = T~_{ws}               if ws > w
              = T~_{ws} + xi T~_w     if ws < w,         xi = v - v^{-1},

so every structure constant f_{x,y,z} is a polynomial in xi with non-negative
integer coefficients.  `HeckeVec` carries Laurent coefficients; the survey
engine (`iter_products`) keeps coefficients directly as xi-coefficient tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coxeter import ABSENT, GroupBall
from .errors import BallExceeded, NotExpressible
from .laurent import ONE, XI, ZERO, BasisExpansion, LaurentPoly, expand_in

__all__ = [
    "HeckeVec",
    "t_basis",
    "t_mult_gen",
    "t_mult",
    "t_mult_left",
    "f_coeff",
    "FSurvey",
    "max_f_degree",
    "iter_products",
    "xi_add",
    "xi_to_laurent",
]


class HeckeVec:
    """Finitely supported map element id -> LaurentPoly, in the T~ ("T") or C ("C") basis."""

    __slots__ = ("ball", "basis", "terms")

    def __init__(self, ball: GroupBall, terms=None, basis: str = "T"):
        self.ball = ball
        self.basis = basis
        self.terms: dict[int, LaurentPoly] = {w: p for w, p in (terms or {}).items() if p}

    def __getitem__(self, w: int) -> LaurentPoly:
        return self.terms.get(w, ZERO)

    def __iter__(self):
        return iter(sorted(self.terms))

    def __len__(self):
        return len(self.terms)

    def items(self):
        return sorted(self.terms.items())

    def support(self) -> set[int]:
        return set(self.terms)

    def _check(self, other):
        if not isinstance(other, HeckeVec) or other.basis != self.basis or other.ball is not self.ball:
            raise ValueError("Hecke vectors must share ball and basis")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for w, p in other.terms.items():
            q = out.get(w, ZERO) + p
            if q:
                out[w] = q
            else:
                out.pop(w, None)
        return HeckeVec(self.ball, out, self.basis)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> HeckeVec:
        if isinstance(c, int):
            c = LaurentPoly.constant(c)
        return HeckeVec(self.ball, {w: p * c for w, p in self.terms.items()}, self.basis)

    def __eq__(self, other):
        if not isinstance(other, HeckeVec):
            return NotImplemented
        return self.basis == other.basis and self.terms == other.terms

    def bar_coefficients(self) -> HeckeVec:
        return HeckeVec(self.ball, {w: p.bar() for w, p in self.terms.items()}, self.basis)

    def to_text(self) -> str:
        name = "T~" if self.basis == "T" else "C"
        if not self.terms:
            return "0"
        return " + ".join(f"({p})*{name}[{self.ball.format_word(w)}]" for w, p in self.items())

    def __repr__(self):
        return f"HeckeVec<{self.basis}>({self.to_text()})"


def t_basis(ball: GroupBall, w: int) -> HeckeVec:
    return HeckeVec(ball, {w: ONE}, "T")


def _neighbor(ball: GroupBall, w: int, s: int, side: str) -> int:
    x = ball.right[w][s] if side == "right" else ball.left[w][s]
    if x == ABSENT:
        raise BallExceeded(
            f"support element {ball.format_word(w)} times {ball.coxeter.gens[s]} ({side}) leaves the ball"
        )
    return x


def t_mult_gen(h: HeckeVec, s: int, side: str = "right") -> HeckeVec:
    """h * T~_s (side="right") or T~_s * h (side="left")."""
    if h.basis != "T":
        raise ValueError("t_mult_gen acts on T~-basis vectors")
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    ball = h.ball
    lengths = ball.lengths
    out: dict[int, LaurentPoly] = {}
    for w, p in h.terms.items():
        x = _neighbor(ball, w, s, side)
        out[x] = out.get(x, ZERO) + p
        if lengths[x] < lengths[w]:
            out[w] = out.get(w, ZERO) + XI * p
    return HeckeVec(ball, out, "T")


def _check_budget(ball: GroupBall, x: int, y: int):
    if ball.lengths[x] + ball.lengths[y] > ball.product_budget:
        raise BallExceeded(
            f"l({ball.format_word(x)}) + l({ball.format_word(y)}) exceeds the product budget {ball.product_budget}"
        )


def t_mult(ball: GroupBall, x: int, y: int) -> HeckeVec:
    """T~_x T~_y, by right multiplication along the ShortLex word of y."""
    _check_budget(ball, x, y)
    h = t_basis(ball, x)
    for s in ball.words[y]:
        h = t_mult_gen(h, s, "right")
    return h


def t_mult_left(ball: GroupBall, x: int, y: int) -> HeckeVec:
    """T~_x T~_y, by left multiplication along the reversed word of x."""
    _check_budget(ball, x, y)
    h = t_basis(ball, y)
    for s in reversed(ball.words[x]):
        h = t_mult_gen(h, s, "left")
    return h


def f_coeff(ball: GroupBall, x: int, y: int, z: int) -> BasisExpansion:
    """f_{x,y,z} as a polynomial in xi."""
    p = t_mult(ball, x, y)[z]
    try:
        exp = expand_in(p, "XI")
    except NotExpressible as exc:  # pragma: no cover - would be an engine bug
        raise AssertionError(f"f coefficient is not a polynomial in xi: {exc}") from exc
    assert all(c >= 0 for c in exp.coeffs), f"negative xi-coefficient in f: {exp}"
    return exp


# -- xi-coefficient engine -------------------------------------------------------


def xi_add(a: tuple, b: tuple) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    return tuple(x + y for x, y in zip(a, b)) + a[len(b):]


def xi_to_laurent(c: tuple) -> LaurentPoly:
    return BasisExpansion("XI", tuple(c)).to_laurent()


def _rmul_xi(ball: GroupBall, vec: dict, s: int) -> dict:
    right, lengths = ball.right, ball.lengths
    out: dict = {}
    for w, c in vec.items():
        x = right[w][s]
        if x == ABSENT:
            raise BallExceeded(f"{ball.format_word(w)}.{ball.coxeter.gens[s]} leaves the ball")
        got = out.get(x)
        out[x] = c if got is None else xi_add(got, c)
        if lengths[x] < lengths[w]:
            sh = (0,) + c
            got = out.get(w)
            out[w] = sh if got is None else xi_add(got, sh)
    return out


def iter_products(ball: GroupBall, budget: int | None = None, xs=None):
    """Yield (x, y, {z: xi-coeffs}) for every pair with l(x) + l(y) <= budget.

    Order is x ascending, then y ascending.  For fixed x each product is one
    generator step from the product with y's parent, so the cost is one
    multiplication per pair.
    """
    budget = ball.product_budget if budget is None else min(budget, ball.product_budget)
    lengths = ball.lengths
    words = ball.words
    right = ball.right
    for x in (xs if xs is not None else ball.ids_up_to(budget)):
        room = budget - lengths[x]
        if room < 0:
            continue
        prods = {0: {x: (1,)}}
        yield x, 0, prods[0]
        for y in ball.ids_up_to(room):
            if y == 0:
                continue
            s = words[y][-1]
            p = right[y][s]
            vec = _rmul_xi(ball, prods[p], s)
            prods[y] = vec
            yield x, y, vec


@dataclass
class FSurvey:
    budget: int
    max_degree: int
    witnesses: list[tuple[int, int, int]]
    pairs_checked: int
    pairs_skipped: int
    max_degree_by_z: dict[int, int] = field(default_factory=dict)

    def to_dict(self, ball: GroupBall) -> dict:
        fw = ball.format_word
        return {
            "budget": self.budget,
            "max_degree": self.max_degree,
            "witnesses": [[fw(x), fw(y), fw(z)] for x, y, z in self.witnesses],
            "pairs_checked": self.pairs_checked,
            "pairs_skipped": self.pairs_skipped,
        }


def _count_pairs(ball: GroupBall, budget: int) -> int:
    sizes = [len(ball.ids_of_length(n)) for n in range(ball.radius + 1)]
    return sum(sizes[a] * sizes[b] for a in range(len(sizes)) for b in range(len(sizes)) if a + b <= budget)


def max_f_degree(ball: GroupBall, pair_budget: int | None = None, n_witnesses: int = 10, xs=None) -> FSurvey:
    """Largest xi-degree of f_{x,y,z} over pairs with l(x)+l(y) <= min(product_budget, pair_budget)."""
    budget = ball.product_budget if pair_budget is None else min(pair_budget, ball.product_budget)
    best = -1
    witnesses: list[tuple[int, int, int]] = []
    by_z: dict[int, int] = {}
    checked = 0
    for x, y, vec in iter_products(ball, budget, xs):
        checked += 1
        for z, c in sorted(vec.items()):
            d = len(c) - 1
            if by_z.get(z, -1) < d:
                by_z[z] = d
            if d > best:
                best = d
                witnesses = [(x, y, z)]
            elif d == best and len(witnesses) < n_witnesses:
                witnesses.append((x, y, z))
    skipped = 0 if xs is not None else _count_pairs(ball, ball.product_budget) - checked
    return FSurvey(budget, best, witnesses, checked, skipped, by_z)
