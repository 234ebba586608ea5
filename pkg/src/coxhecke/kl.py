"""Kazhdan-Lusztig basis, structure constants h_{w,u,v} and the truncated a-function.

C_w is built inductively in the T~-basis:

    C_e = T~_e,   C_w = C_s C_{sw} - sum_{z < sw, sz < z} mu(z, sw) C_z   (s in L(w))

with C_s = T~_s + v^{-1} T~_e.  The T~_y coefficient of C_w is
v^{l(y)-l(w)} P_{y,w}(q), so mu(y, w) is its v^{-1} coefficient.

Two routes compute C-basis products.  `KLTable.c_product` multiplies in the
T~-basis and peels C_v terms off from the top; `CProducts` stays in the C-basis
and uses only the W-graph rule

    C_s C_v = eta C_v                                         if s in L(v)
            = C_{sv} + sum_{z < v, s in L(z)} mu(z, v) C_z    otherwise,

keeping coefficients as integer polynomials in eta = v + v^{-1}.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field

from .coxeter import ABSENT, GroupBall, group_profile
from .errors import BallExceeded, CacheMismatch, NotInOmega
from .hecke import HeckeVec, t_basis, t_mult_gen
from .laurent import ONE, VINV, XI, ZERO, BasisExpansion, LaurentPoly, expand_in

__all__ = [
    "KLTable",
    "CProducts",
    "StructureConstant",
    "AValue",
    "ASurvey",
    "GammaTable",
    "a_assign",
    "a_survey",
    "j_table",
    "eta_add",
    "eta_to_laurent",
    "CACHE_SCHEMA",
]

log = logging.getLogger(__name__)

CACHE_SCHEMA = "coxhecke-kl/1"


class KLTable:
    """Memoized C_w, P_{y,w} and mu(y,w) for every element of a ball."""

    def __init__(self, ball: GroupBall):
        self.ball = ball
        self._c: dict[int, dict[int, LaurentPoly]] = {0: {0: ONE}}
        self._down: dict[int, tuple[tuple[int, int], ...]] = {}

    # -- construction ----------------------------------------------------------------

    def _coeffs(self, w: int) -> dict[int, LaurentPoly]:
        got = self._c.get(w)
        if got is not None:
            return got
        ball = self.ball
        chain = []
        x = w
        while x not in self._c:
            chain.append(x)
            x = ball.left[x][ball.first_left_descent(x)]
        for x in reversed(chain):
            self._c[x] = self._build(x)
        return self._c[w]

    def _build(self, w: int) -> dict[int, LaurentPoly]:
        ball = self.ball
        left, lengths = ball.left, ball.lengths
        s = ball.first_left_descent(w)
        sw = left[w][s]
        base = self._c[sw]
        out: dict[int, LaurentPoly] = {}

        def add(y, p):
            q = out.get(y)
            q = p if q is None else q + p
            if q:
                out[y] = q
            else:
                out.pop(y, None)

        for y, p in base.items():
            sy = left[y][s]
            add(sy, p)
            if lengths[sy] < lengths[y]:
                add(y, XI * p)
            add(y, p.shift(-1))
        for z, m in self.mu_down(sw):
            if ball.ldesc[z] >> s & 1:
                for y, p in self._coeffs(z).items():
                    add(y, p * -m)
        return out

    def compute_all(self, upto: int | None = None):
        for w in self.ball.ids_up_to(self.ball.radius if upto is None else upto):
            self._coeffs(w)
        return self

    # -- queries -----------------------------------------------------------------------

    def c_vector(self, w: int) -> HeckeVec:
        """C_w in the T~-basis."""
        return HeckeVec(self.ball, self._coeffs(w), "T")

    def kl_poly(self, y: int, w: int) -> LaurentPoly:
        """P_{y,w} as a LaurentPoly with even v-exponents (a polynomial in q)."""
        c = self._coeffs(w).get(y)
        if c is None:
            return ZERO
        return c.shift(self.ball.lengths[w] - self.ball.lengths[y])

    def mu(self, y: int, w: int) -> int:
        if y == w:
            return 0
        c = self._coeffs(w).get(y)
        return 0 if c is None else c.coeff(-1)

    def mu_sym(self, y: int, w: int) -> int:
        """mu(y, w) or mu(w, y), whichever is defined by the length order."""
        if self.ball.lengths[y] < self.ball.lengths[w]:
            return self.mu(y, w)
        return self.mu(w, y)

    def mu_down(self, w: int) -> tuple[tuple[int, int], ...]:
        """(z, mu(z, w)) for z < w with mu != 0, sorted by z."""
        got = self._down.get(w)
        if got is None:
            got = tuple(sorted((z, p.coeff(-1)) for z, p in self._coeffs(w).items() if z != w and p.coeff(-1)))
            self._down[w] = got
        return got

    def interval(self, w: int) -> frozenset:
        return frozenset(self._coeffs(w))

    # -- C-basis products, T~ route ------------------------------------------------------

    def to_c_basis(self, h: HeckeVec) -> HeckeVec:
        """Rewrite a T~-basis vector in the C-basis by triangular elimination."""
        lengths = self.ball.lengths
        rest = dict(h.terms)
        out: dict[int, LaurentPoly] = {}
        while rest:
            v = max(rest, key=lambda x: (lengths[x], x))
            a = rest[v]
            out[v] = a
            for y, p in self._coeffs(v).items():
                q = rest.get(y, ZERO) - p * a
                if q:
                    rest[y] = q
                else:
                    rest.pop(y, None)
        return HeckeVec(self.ball, out, "C")

    def c_product_t(self, w: int, u: int) -> HeckeVec:
        """C_w C_u in the T~-basis."""
        ball = self.ball
        if ball.lengths[w] + ball.lengths[u] > ball.product_budget:
            raise BallExceeded(f"l({ball.format_word(w)}) + l({ball.format_word(u)}) exceeds the product budget {ball.product_budget}")
        cu = self.c_vector(u)
        total: dict[int, LaurentPoly] = {}
        for y, c in self._coeffs(w).items():
            h = cu
            for s in reversed(ball.words[y]):
                h = t_mult_gen(h, s, "left")
            for z, p in h.terms.items():
                q = total.get(z, ZERO) + p * c
                if q:
                    total[z] = q
                else:
                    total.pop(z, None)
        return HeckeVec(ball, total, "T")

    def c_product(self, w: int, u: int) -> HeckeVec:
        """C_w C_u = sum_v h_{w,u,v} C_v, returned in the C-basis."""
        return self.to_c_basis(self.c_product_t(w, u))

    def h_coeff(self, w: int, u: int, v: int, a_used: int | None = None, exact: bool = False) -> StructureConstant:
        h = self.c_product(w, u)[v]
        exp = expand_in(h, "ETA")
        if a_used is None:
            a_used = max(exp.degree, 0) if h else 0
        return StructureConstant(
            (w, u, v), h, exp, a_used, exp.top(a_used), exp.top(a_used - 1), "EXACT" if exact else "LOWER_BOUND"
        )

    # -- bar involution check ----------------------------------------------------------------

    def bar_invariant(self, w: int) -> bool:
        """True when C_w is fixed by v -> v^{-1}, T~_y -> (T~_{y^{-1}})^{-1}."""
        ball = self.ball
        total: dict[int, LaurentPoly] = {}
        for y, c in self._coeffs(w).items():
            # (T~_{y^-1})^{-1} = T~_{s1}^{-1} ... T~_{sk}^{-1},  T~_s^{-1} = T~_s - xi
            h = t_basis(ball, 0)
            for s in ball.words[y]:
                g = t_mult_gen(h, s, "right")
                h = g - h.scale(XI)
            cb = c.bar()
            for z, p in h.terms.items():
                q = total.get(z, ZERO) + p * cb
                if q:
                    total[z] = q
                else:
                    total.pop(z, None)
        return total == self._coeffs(w)

    # -- persistence ---------------------------------------------------------------------------

    def save(self, path):
        """Write the versioned JSONL cache: header line, then one record per P_{y,w}."""
        ball = self.ball
        tmp = f"{path}.tmp"
        with open(tmp, "w") as fh:
            header = {"schema": CACHE_SCHEMA, "matrix": ball.coxeter.content_hash, "radius": ball.radius}
            fh.write(json.dumps(header, sort_keys=True) + "\n")
            for w in sorted(self._c):
                fw = ball.format_word(w)
                for y in sorted(self._c[w]):
                    rec = {"y": ball.format_word(y), "w": fw, "P": self.kl_poly(y, w).to_q_json()}
                    fh.write(json.dumps(rec, separators=(",", ":")) + "\n")
        os.replace(tmp, path)

    def load(self, path) -> int:
        """Merge a cache file; returns the number of C_w restored."""
        ball = self.ball
        with open(path) as fh:
            header = json.loads(fh.readline())
            if header.get("schema") != CACHE_SCHEMA:
                raise CacheMismatch(f"unknown cache schema {header.get('schema')!r}")
            if header.get("matrix") != ball.coxeter.content_hash:
                raise CacheMismatch("cache was written for a different Coxeter matrix")
            found: dict[int, dict[int, LaurentPoly]] = {}
            for line in fh:
                rec = json.loads(line)
                try:
                    w = ball.parse_word(rec["w"])
                    y = ball.parse_word(rec["y"])
                except BallExceeded:
                    continue
                if ball.format_word(w) != rec["w"] or ball.format_word(y) != rec["y"]:
                    raise CacheMismatch(f"cache word {rec['w']!r} is not in ShortLex form")
                p = LaurentPoly.from_q_json(rec["P"])
                found.setdefault(w, {})[y] = p.shift(ball.lengths[y] - ball.lengths[w])
        for w, coeffs in found.items():
            if w not in self._c:
                self._c[w] = coeffs
        return len(found)


def eta_add(a: tuple, b: tuple) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = [x + y for x, y in zip(a, b)] + list(a[len(b):])
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def eta_scale(a: tuple, k: int) -> tuple:
    return tuple(k * x for x in a) if k else ()


def eta_to_laurent(c: tuple) -> LaurentPoly:
    return BasisExpansion("ETA", tuple(c)).to_laurent()


class CProducts:
    """C_x C_u for fixed u and all short x, computed inside the C-basis."""

    def __init__(self, kl: KLTable):
        self.kl = kl
        self.ball = kl.ball

    def _cs_times(self, s: int, vec: dict) -> dict:
        ball, kl = self.ball, self.kl
        left, ldesc = ball.left, ball.ldesc
        out: dict = {}

        def add(v, c):
            got = out.get(v)
            c = c if got is None else eta_add(got, c)
            if c:
                out[v] = c
            else:
                out.pop(v, None)

        for v, c in vec.items():
            if ldesc[v] >> s & 1:
                add(v, (0,) + c)
                continue
            sv = left[v][s]
            if sv == ABSENT:
                raise BallExceeded(f"{ball.coxeter.gens[s]}.{ball.format_word(v)} leaves the ball")
            add(sv, c)
            for z, m in kl.mu_down(v):
                if ldesc[z] >> s & 1:
                    add(z, eta_scale(c, m))
        return out

    def products_with(self, u: int, budget: int | None = None):
        """Yield (x, {v: eta-coeffs of h_{x,u,v}}) for l(x) + l(u) <= budget, x ascending."""
        ball, kl = self.ball, self.kl
        budget = ball.product_budget if budget is None else min(budget, ball.product_budget)
        room = budget - ball.lengths[u]
        if room < 0:
            return
        prods: dict[int, dict] = {0: {u: (1,)}}
        yield 0, prods[0]
        for x in ball.ids_up_to(room):
            if x == 0:
                continue
            s = ball.first_left_descent(x)
            sx = ball.left[x][s]
            vec = self._cs_times(s, prods[sx])
            for z, m in kl.mu_down(sx):
                if ball.ldesc[z] >> s & 1:
                    for v, c in prods[z].items():
                        got = vec.get(v, ())
                        c2 = eta_add(got, eta_scale(c, -m))
                        if c2:
                            vec[v] = c2
                        else:
                            vec.pop(v, None)
            prods[x] = vec
            yield x, vec

    def product(self, x: int, u: int) -> dict:
        for y, vec in self.products_with(u, self.ball.lengths[x] + self.ball.lengths[u]):
            if y == x:
                return vec
        raise KeyError(x)


@dataclass(frozen=True)
class StructureConstant:
    triple: tuple[int, int, int]
    h: LaurentPoly
    h_eta: BasisExpansion
    a_used: int
    gamma: int
    delta: int
    exactness: str


@dataclass
class AValue:
    element: int
    a_hat: int
    exact: bool
    scanned: int
    witnesses: list[tuple[int, int]]
    reason: str = ""

    def to_dict(self, ball: GroupBall) -> dict:
        fw = ball.format_word
        return {
            "element": fw(self.element),
            "length": ball.lengths[self.element],
            "a_hat": self.a_hat,
            "a_scan": self.scanned,
            "exactness": "EXACT" if self.exact else "LOWER_BOUND",
            "reason": self.reason,
            "witnesses": [[fw(x), fw(u)] for x, u in self.witnesses],
        }


@dataclass
class ASurvey:
    """Budget scan of eta-degrees of h_{x,u,v} for all pairs l(x)+l(u) <= budget."""

    budget: int
    a_scan: list[int]
    witness: list[tuple[int, int] | None]
    pairs_checked: int
    eta_failures: list = field(default_factory=list)


def a_survey(kl: KLTable, pair_budget: int | None = None) -> ASurvey:
    ball = kl.ball
    budget = ball.product_budget if pair_budget is None else min(pair_budget, ball.product_budget)
    n = len(ball)
    best = [-1] * n
    wit: list = [None] * n
    engine = CProducts(kl)
    checked = 0
    for u in ball.ids_up_to(budget):
        for x, vec in engine.products_with(u, budget):
            checked += 1
            for v, c in vec.items():
                d = len(c) - 1
                if d > best[v] or (d == best[v] and (x, u) < wit[v]):
                    best[v] = d
                    wit[v] = (x, u)
    return ASurvey(budget, best, wit, checked)


def a_assign(kl: KLTable, v: int, pair_budget: int | None = None, omega=None, survey: ASurvey | None = None) -> AValue:
    """Truncated a-value of v with an exactness flag.

    Exact when v = e, when v is certified in the lowest cell (then a = a0), or
    when the scan already reaches the ceiling a0.
    """
    ball = kl.ball
    a0 = group_profile(ball.coxeter).a0
    if survey is None or (pair_budget is not None and survey.budget != min(pair_budget, ball.product_budget)):
        survey = a_survey(kl, pair_budget)
    scanned = max(survey.a_scan[v], 0)
    wit = [survey.witness[v]] if survey.witness[v] is not None else []
    if v == 0:
        return AValue(v, 0, True, scanned, wit, "identity")
    if omega is None:
        from .cells import lowest_cell

        omega = lowest_cell(ball)
    if omega.contains(v):
        z, u, y = omega.witness(v)
        zu, uy = ball.multiply(z, u), ball.multiply(u, y)
        return AValue(v, max(a0, scanned), True, scanned, [(zu, uy)], "lowest cell")
    if scanned >= a0:
        return AValue(v, scanned, True, scanned, wit, "ceiling")
    return AValue(v, scanned, False, scanned, wit, "")


@dataclass
class GammaTable:
    elements: list[int]
    gamma: dict[tuple[int, int, int], int]
    complete: dict[tuple[int, int], bool]
    unit: int | None = None
    unit_ok: bool | None = None

    def value(self, w: int, u: int, v: int) -> int:
        return self.gamma.get((w, u, v), 0)


def j_table(kl: KLTable, elements, pair_budget: int | None = None, omega=None, unit: int | None = None) -> GammaTable:
    """gamma_{w,u,v} = eta^{a0} coefficient of h_{w,u,v} for w, u, v in `elements`."""
    ball = kl.ball
    a0 = group_profile(ball.coxeter).a0
    if omega is None:
        from .cells import lowest_cell

        omega = lowest_cell(ball)
    elements = sorted(elements)
    for w in elements:
        if not omega.contains(w):
            raise NotInOmega(f"{ball.format_word(w)} is not certified in the lowest cell")
    budget = ball.product_budget if pair_budget is None else min(pair_budget, ball.product_budget)
    members = set(elements)
    engine = CProducts(kl)
    gamma: dict = {}
    complete: dict = {}
    for u in elements:
        wanted = {w for w in elements if ball.lengths[w] + ball.lengths[u] <= budget}
        if not wanted:
            for w in elements:
                complete[w, u] = False
            continue
        for x, vec in engine.products_with(u, budget):
            if x not in wanted:
                continue
            for v, c in vec.items():
                if v in members and len(c) > a0 and c[a0]:
                    gamma[x, u, v] = c[a0]
        for w in elements:
            complete[w, u] = w in wanted
    table = GammaTable(elements, gamma, complete, unit)
    if unit is not None:
        ok = True
        for u in elements:
            for v in elements:
                want = 1 if u == v else 0
                if complete.get((unit, u)) and table.value(unit, u, v) != want:
                    ok = False
                if complete.get((u, unit)) and table.value(u, unit, v) != want:
                    ok = False
        table.unit_ok = ok
    return table
