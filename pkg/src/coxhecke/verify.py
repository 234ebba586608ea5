"""Executable checks of the structural statements, run over a truncated group.

Each suite enumerates every in-ball instance of a statement, counts checked
and skipped cases and records violations with enough data to replay them.
Suites of kind PROBE test conjectural statements; they pass when the
observations are consistent so far and never claim more.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations

from .cells import (
    cell_partition,
    d_prime,
    gamma_set,
    lowest_cell,
    mu_graph,
    w_i_closure,
)
from .coxeter import ABSENT, INF, CoxeterMatrix, GroupBall, build_ball, group_profile
from .errors import BallExceeded, MissingPrerequisite, UnknownSuite
from .hecke import f_coeff, iter_products, max_f_degree, t_mult
from .kl import CProducts, KLTable, a_survey, j_table
from .laurent import expand_in

__all__ = ["Workspace", "SuiteReport", "run_suite", "SUITES", "replay", "suite_ids"]


class Workspace:
    """Lazily built artifacts for one (matrix, radius, budget, margin) instance."""

    def __init__(
        self,
        matrix: CoxeterMatrix,
        radius: int,
        pair_budget: int | None = None,
        margin: int | None = None,
        cache_path=None,
        max_elements: int | None = None,
    ):
        self.matrix = matrix
        self.radius = radius
        self.profile = group_profile(matrix)
        self._pair_budget = pair_budget
        self.margin = self.profile.a0 + 1 if margin is None else margin
        self.cache_path = cache_path
        self.max_elements = max_elements
        self.cache_loaded = 0

    @cached_property
    def pair_budget(self) -> int:
        cap = self.ball.product_budget
        return cap if self._pair_budget is None else min(self._pair_budget, cap)

    def params(self) -> dict:
        return {
            "matrix": self.matrix.to_document(),
            "radius": self.radius,
            "pair_budget": self.pair_budget,
            "margin": self.margin,
        }

    @cached_property
    def ball(self) -> GroupBall:
        if self.max_elements:
            return build_ball(self.matrix, self.radius, self.max_elements)
        return build_ball(self.matrix, self.radius)

    @cached_property
    def kl(self) -> KLTable:
        kl = KLTable(self.ball)
        if self.cache_path and os.path.exists(self.cache_path):
            self.cache_loaded = kl.load(self.cache_path)
        return kl.compute_all()

    def save_cache(self):
        if self.cache_path and "kl" in self.__dict__:
            self.kl.save(self.cache_path)

    @cached_property
    def graph(self):
        return mu_graph(self.ball, self.kl)

    @cached_property
    def left_cells(self):
        return cell_partition(self.ball, self.graph, "LEFT", self.margin)

    @cached_property
    def right_cells(self):
        return cell_partition(self.ball, self.graph, "RIGHT", self.margin)

    @cached_property
    def two_sided(self):
        return cell_partition(self.ball, self.graph, "TWO_SIDED", self.margin)

    @cached_property
    def omega(self):
        return lowest_cell(self.ball)

    @cached_property
    def dprime(self):
        return d_prime(self.ball, self.omega)

    @cached_property
    def a_scan(self):
        return a_survey(self.kl, self.pair_budget)

    @cached_property
    def f_survey(self):
        return max_f_degree(self.ball, self.pair_budget)

    @cached_property
    def f_table(self) -> dict:
        return {(x, y): vec for x, y, vec in iter_products(self.ball, self.pair_budget)}

    def certified(self, x: int) -> bool:
        return self.ball.lengths[x] <= self.radius - self.margin


@dataclass
class SuiteReport:
    suite: str
    kind: str
    params: dict
    checked: int = 0
    violations: int = 0
    skipped: int = 0
    witnesses: list = field(default_factory=list)
    observations: dict = field(default_factory=dict)
    ms: float | None = None
    max_witnesses: int = 20

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def ok(self, n: int = 1):
        self.checked += n

    def skip(self, n: int = 1):
        self.skipped += n

    def fail(self, case: str, args: list, detail: dict | None = None):
        self.checked += 1
        self.violations += 1
        if len(self.witnesses) < self.max_witnesses:
            self.witnesses.append({"case": case, "args": list(args), "detail": detail or {}})

    def check(self, cond: bool, case: str, args, detail=None):
        if cond:
            self.checked += 1
        else:
            self.fail(case, args, detail() if callable(detail) else detail)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "kind": self.kind,
            "params": self.params,
            "checked": self.checked,
            "violations": self.violations,
            "skipped": self.skipped,
            "passed": self.passed,
            "observations": self.observations,
            "witnesses": self.witnesses,
            "ms": self.ms,
        }

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {self.suite} [{self.kind}] checked={self.checked} "
            f"violations={self.violations} skipped={self.skipped}"
        )


@dataclass(frozen=True)
class _Suite:
    func: object
    kind: str
    needs_complete: bool


SUITES: dict[str, _Suite] = {}


def _suite(name: str, kind: str = "THEOREM", needs_complete: bool = True):
    def deco(fn):
        SUITES[name] = _Suite(fn, kind, needs_complete)
        return fn

    return deco


def suite_ids() -> list[str]:
    return list(SUITES)


def run_suite(suite_id: str, ws: Workspace, deterministic: bool = False, **options) -> SuiteReport:
    try:
        entry = SUITES[suite_id]
    except KeyError:
        raise UnknownSuite(f"unknown suite {suite_id!r}; known: {', '.join(SUITES)}") from None
    if entry.needs_complete and ws.matrix.rank > 1 and not ws.matrix.complete_graph:
        raise MissingPrerequisite(f"{suite_id} requires a complete Coxeter graph")
    params = dict(ws.params(), **{k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(options.items())})
    rep = SuiteReport(suite_id, entry.kind, params)
    start = time.perf_counter()
    entry.func(ws, rep, **options)
    rep.ms = None if deterministic else round((time.perf_counter() - start) * 1000, 1)
    return rep


def _words(ball: GroupBall, *xs):
    return [ball.format_word(x) for x in xs]


def _mask(*gens) -> int:
    m = 0
    for g in gens:
        m |= 1 << g
    return m


# -- replayable single-case checks -------------------------------------------------------
#
# Each returns a detail dict when the statement fails for the given arguments and
# None when it holds.  Suites produce their witnesses from these, and `replay`
# re-runs them from the recorded words.


def _xi(ball, x, y, z):
    return list(f_coeff(ball, x, y, z).coeffs)


def _case_f_symmetry(ws, x, y, z):
    ball = ws.ball
    inv = ball.inverse
    base = _xi(ball, x, y, z)
    out = {"f": base}
    lens = ball.lengths
    budget = ws.pair_budget
    bad = False
    if lens[y] + lens[z] <= budget:
        out["rot1"] = _xi(ball, y, inv(z), inv(x))
        bad |= out["rot1"] != base
    if lens[z] + lens[x] <= budget:
        out["rot2"] = _xi(ball, inv(z), x, inv(y))
        bad |= out["rot2"] != base
    return out if bad else None


def _case_f_anti(ws, x, y, z):
    ball = ws.ball
    inv = ball.inverse
    a, b = _xi(ball, x, y, z), _xi(ball, inv(y), inv(x), inv(z))
    return None if a == b else {"f": a, "anti": b}


def _case_f_shape(ws, x, y, z):
    ball = ws.ball
    c = _xi(ball, x, y, z)
    bound = min(ball.lengths[x], ball.lengths[y], ball.lengths[z])
    if any(k < 0 for k in c) or len(c) - 1 > bound:
        return {"f": c, "bound": bound}
    return None


def _case_f_identity_coeff(ws, x, y):
    ball = ws.ball
    c = _xi(ball, x, y, 0)
    want = [1] if ball.multiply(x, y) == 0 else []
    return None if c == want else {"f_e": c, "expected": want}


def _case_f_laurent_route(ws, x, y, z):
    ball = ws.ball
    p = t_mult(ball, x, y)[z]
    exp = expand_in(p, "XI")
    table = ws.f_table.get((x, y), {}).get(z, ())
    if list(exp.coeffs) != list(table) or exp.to_laurent() != p:
        return {"laurent": p.to_json(), "xi_engine": list(table)}
    return None


def _case_no_mixed_descents(ws, w, r, s, t):
    ball = ws.ball
    wt = ball.right[w][t]
    if ball.rdesc[w] >> r & 1 and ball.rdesc[w] >> t & 1 and ball.rdesc[wt] >> s & 1:
        return {"w1": ball.format_word(ball.right[w][r]), "w2": ball.format_word(ball.right[wt][s])}
    return None


def _case_length_additive(ws, x, w, y):
    ball = ws.ball
    xwy = ball.multiply(ball.multiply(x, w), y)
    want = ball.lengths[x] + ball.lengths[w] + ball.lengths[y]
    return None if ball.lengths[xwy] == want else {"product": ball.format_word(xwy), "length": ball.lengths[xwy], "expected": want}


def _case_deg_le(ws, x, z, bound):
    ball = ws.ball
    vec = t_mult(ball, x, z)
    bad = {}
    for w, p in vec.items():
        d = expand_in(p, "XI").degree
        if d > bound:
            bad[ball.format_word(w)] = d
    return {"degrees_over_bound": bad} if bad else None


def _case_mu_equals_one(ws, u, target):
    m = ws.kl.mu(u, target)
    return None if m == 1 else {"mu": m}


_CASES = {
    "f_symmetry": _case_f_symmetry,
    "f_anti": _case_f_anti,
    "f_shape": _case_f_shape,
    "f_identity_coeff": _case_f_identity_coeff,
    "f_laurent_route": _case_f_laurent_route,
    "no_mixed_descents": _case_no_mixed_descents,
    "length_additive": _case_length_additive,
    "deg_le": _case_deg_le,
    "mu_equals_one": _case_mu_equals_one,
}


def replay(ws: Workspace, witness: dict):
    """Re-run a recorded witness; returns the detail dict (None if it now holds)."""
    fn = _CASES.get(witness["case"])
    if fn is None:
        raise UnknownSuite(f"case {witness['case']!r} is not replayable")
    ball = ws.ball
    args = []
    for a in witness["args"]:
        if isinstance(a, str):
            args.append(ball.parse_word(a))
        elif isinstance(a, dict) and "gen" in a:
            args.append(ball.coxeter.index(a["gen"]))
        else:
            args.append(a)
    return fn(ws, *args)


def _record(rep: SuiteReport, ws: Workspace, case: str, elems, extra=()):
    """Fail `rep` with a replayable witness built by the named case check."""
    ball = ws.ball
    detail = _CASES[case](ws, *elems, *[e for e in extra])
    args = [ball.format_word(e) for e in elems] + [a for a in extra]
    rep.fail(case, args, detail)


# -- F_IDENTITIES -------------------------------------------------------------------------


@_suite("F_IDENTITIES", needs_complete=False)
def _f_identities(ws: Workspace, rep: SuiteReport, laurent_route: bool = True):
    """Cyclic and anti-involution symmetries, positivity and degree bound of f."""
    ball = ws.ball
    table = ws.f_table
    lens = ball.lengths
    inv = ball.inverse_table
    budget = ws.pair_budget
    for (x, y), vec in table.items():
        want_e = (1,) if y == inv[x] else None
        if vec.get(0) == want_e:
            rep.ok()
        else:
            _record(rep, ws, "f_identity_coeff", (x, y))
        if laurent_route:
            lp = t_mult(ball, x, y)
            if set(lp.terms) != set(vec):
                _record(rep, ws, "f_laurent_route", (x, y, next(iter(set(lp.terms) ^ set(vec)))))
            else:
                for z, p in lp.terms.items():
                    exp = expand_in(p, "XI")
                    if exp.coeffs == vec[z] and exp.to_laurent() == p:
                        rep.ok()
                    else:
                        _record(rep, ws, "f_laurent_route", (x, y, z))
        for z, c in vec.items():
            if all(k >= 0 for k in c) and len(c) - 1 <= min(lens[x], lens[y], lens[z]):
                rep.ok()
            else:
                _record(rep, ws, "f_shape", (x, y, z))
            sym_ok = True
            if lens[y] + lens[z] <= budget:
                sym_ok &= table[y, inv[z]].get(inv[x]) == c
            else:
                rep.skip()
            if lens[z] + lens[x] <= budget:
                sym_ok &= table[inv[z], x].get(inv[y]) == c
            else:
                rep.skip()
            if sym_ok:
                rep.ok()
            else:
                _record(rep, ws, "f_symmetry", (x, y, z))
            if table[inv[y], inv[x]].get(inv[z]) == c:
                rep.ok()
            else:
                _record(rep, ws, "f_anti", (x, y, z))
    rep.observations["pairs"] = len(table)


# -- descents and finite parabolics --------------------------------------------------------


@_suite("DESCENT_PARABOLIC", needs_complete=False)
def _descent_parabolic(ws: Workspace, rep: SuiteReport):
    """Common descents exist exactly for finite parabolics; longest elements split off additively."""
    ball = ws.ball
    m = ws.matrix
    rank = m.rank
    n = len(ball)
    for size in range(1, rank + 1):
        for sub in combinations(range(rank), size):
            mask = _mask(*sub)
            if size == 1:
                finite, longest_len = True, 1
            elif size == 2:
                order = m.m[sub[0]][sub[1]]
                finite, longest_len = order != INF, order
            elif m.complete_graph:
                finite, longest_len = False, None
            else:
                rep.skip(2)
                continue
            for side, desc in (("left", ball.ldesc), ("right", ball.rdesc)):
                exists = any(desc[w] & mask == mask for w in range(n))
                if finite and longest_len > ball.radius:
                    if exists:
                        rep.fail("common_descent", [side, [m.gens[i] for i in sub]], {"exists": True})
                    else:
                        rep.skip()
                    continue
                rep.check(
                    exists == finite,
                    "common_descent",
                    [side, [m.gens[i] for i in sub]],
                    {"finite": finite, "exists": exists},
                )
    longest = {}
    for s in range(rank):
        longest[(s,)] = ball.right[0][s]
    for s, t in combinations(range(rank), 2):
        if m.m[s][t] != INF and m.m[s][t] <= ball.radius:
            longest[(s, t)] = ball.dihedral_data(s, t).longest
    for w in range(n):
        for sub, u in longest.items():
            mask = _mask(*sub)
            lu = ball.lengths[u]
            if ball.ldesc[w] & mask == mask:
                uw = ball.multiply(u, w)
                rep.check(
                    ball.lengths[uw] + lu == ball.lengths[w],
                    "longest_left_factor",
                    _words(ball, w, u),
                )
            if ball.rdesc[w] & mask == mask:
                wu = ball.multiply(w, u)
                rep.check(
                    ball.lengths[wu] + lu == ball.lengths[w],
                    "longest_right_factor",
                    _words(ball, w, u),
                )


# -- word lemmas ------------------------------------------------------------------------------


def _noncommuting_triples(m: CoxeterMatrix):
    for r, s, t in permutations(range(m.rank), 3):
        if m.m[r][s] > 2 and m.m[r][t] > 2 and m.m[s][t] > 2:
            yield r, s, t


@_suite("WORD_LEMMA_2_2", needs_complete=False)
def _suite_mixed_descents(ws: Workspace, rep: SuiteReport):
    """No w has a right descent r and also ends in s.t, for pairwise non-commuting r, s, t."""
    ball = ws.ball
    triples = list(_noncommuting_triples(ws.matrix))
    rdesc, right = ball.rdesc, ball.right
    gens = ws.matrix.gens
    for w in range(len(ball)):
        rw = rdesc[w]
        for r, s, t in triples:
            if rw >> r & 1 and rw >> t & 1 and rdesc[right[w][t]] >> s & 1:
                _record(rep, ws, "no_mixed_descents", (w,), ({"gen": gens[r]}, {"gen": gens[s]}, {"gen": gens[t]}))
            else:
                rep.ok()
    rep.observations["triples"] = len(triples)


def ascent_paths(ball: GroupBall, x: int, max_len: int):
    """(letters, endpoint) for every length-increasing path of at most max_len letters from x."""
    out = [((), x)]
    frontier = [((), x)]
    for _ in range(max_len):
        nxt = []
        for letters, y in frontier:
            ly = ball.lengths[y]
            for s in range(ball.rank):
                z = ball.right[y][s]
                if z != ABSENT and ball.lengths[z] > ly:
                    nxt.append((letters + (s,), z))
        out.extend(nxt)
        frontier = nxt
    return out


def rank2_confinement_instances(ball: GroupBall, max_word: int):
    """Yield (x, word, hypotheses_hold, letters) for words t1..tm with the stated descent pattern.

    Hypotheses checked here are the purely combinatorial ones: t1 in R(x), the
    middle letters climb, tm in R(x t2..t_{m-1}), t1..tm reduced, and every
    reduced expression s1..sm with s1 in R(x) climbs through s2..s_{m-1}.
    """
    max_word = min(max_word, ball.radius)
    for x in range(len(ball)):
        rx = ball.rdesc[x]
        if not rx:
            continue
        room = min(max_word - 2, ball.radius - ball.lengths[x])
        if room < 0:
            continue
        for mid, y in ascent_paths(ball, x, room):
            ry = ball.rdesc[y]
            for t1 in range(ball.rank):
                if not rx >> t1 & 1:
                    continue
                for tm in range(ball.rank):
                    if not ry >> tm & 1:
                        continue
                    word = (t1,) + mid + (tm,)
                    if not ball.is_reduced(word):
                        continue
                    elem = ball.from_letters(word)
                    exprs, truncated = ball.reduced_expressions(elem)
                    hyp = not truncated
                    for e in exprs:
                        if not rx >> e[0] & 1:
                            continue
                        z = x
                        for s in e[1:-1]:
                            nz = ball.right[z][s]
                            if nz == ABSENT or ball.lengths[nz] < ball.lengths[z]:
                                hyp = False
                                break
                            z = nz
                        if not hyp:
                            break
                    yield x, word, hyp, frozenset(word)


def _in_finite_rank2(m: CoxeterMatrix, letters) -> bool:
    letters = sorted(letters)
    if len(letters) == 1:
        return True
    return len(letters) == 2 and m.m[letters[0]][letters[1]] != INF


A3_CONTROL_WORD = ("s2", "s1", "s3", "s2")


@_suite("WORD_LEMMA_2_3")
def _suite_rank2_confinement(ws: Workspace, rep: SuiteReport, max_word: int | None = None):
    """Descent patterns of the stated shape only occur inside finite rank-2 parabolics."""
    ball = ws.ball
    m = ws.matrix
    max_word = ws.profile.a0 + 2 if max_word is None else max_word
    hyp_count = 0
    for x, word, hyp, letters in rank2_confinement_instances(ball, max_word):
        if not hyp:
            continue
        hyp_count += 1
        rep.check(
            _in_finite_rank2(m, letters),
            "rank2_confinement",
            [ball.format_word(x), ball.format_letters(word)],
        )
    rep.observations["hypothesis_instances"] = hyp_count
    rep.observations["max_word"] = max_word
    # negative control: type A3 breaks the conclusion, and the completeness filter rejects it
    a3 = CoxeterMatrix.type_a(3)
    control = build_ball(a3, 6)
    control_word = tuple(a3.index(g) for g in A3_CONTROL_WORD)
    bad = [
        (x, w)
        for x, w, hyp, letters in rank2_confinement_instances(control, 4)
        if hyp and not _in_finite_rank2(a3, letters)
    ]
    rep.observations["a3_control_counterexamples"] = len(bad)
    rep.observations["a3_control_example"] = (
        [control.format_word(bad[0][0]), control.format_letters(bad[0][1])] if bad else None
    )
    rep.check(
        any(control.from_letters(w) == control.from_letters(control_word) for _, w in bad),
        "a3_control_counterexample_found",
        ["A3"],
    )
    rep.check(not a3.complete_graph, "a3_control_excluded_by_hypothesis", ["A3"])


def parabolic_extension_instances(ball: GroupBall, max_word: int):
    """Yield (x, word, m_index, P, Q) satisfying the four descent hypotheses; m_index is 1-based m."""
    rank = ball.rank
    lens = ball.lengths
    max_word = min(max_word, ball.radius)
    pairs = list(combinations(range(rank), 2))
    for x in range(len(ball)):
        rx = ball.rdesc[x]
        if not rx:
            continue
        for pa, pb in pairs:
            for t1 in (pa, pb):
                if not rx >> t1 & 1:
                    continue
                other = pb if t1 == pa else pa
                for m_idx in range(2, max_word):
                    prefix = tuple((t1, other)[k % 2] for k in range(m_idx))
                    mid = x
                    ok = True
                    for s in prefix[1:-1]:
                        nxt = ball.right[mid][s]
                        if nxt == ABSENT:
                            ok = False
                            break
                        mid = nxt
                    if not ok:
                        break
                    tm = prefix[-1]
                    if not ball.rdesc[mid] >> tm & 1:
                        continue
                    for c in range(rank):
                        if c == tm:
                            continue
                        for n_idx in range(m_idx + 1, max_word + 1):
                            suffix = tuple((c, tm)[k % 2] for k in range(n_idx - m_idx))
                            word = prefix + suffix
                            if not ball.is_reduced(word):
                                break
                            z = mid
                            for s in suffix[:-1]:
                                nz = ball.right[z][s]
                                if nz == ABSENT:
                                    z = None
                                    break
                                z = nz
                            if z is None:
                                break
                            if lens[z] != lens[x] + n_idx - 3:
                                continue
                            if not ball.rdesc[z] >> suffix[-1] & 1:
                                continue
                            yield x, word, m_idx, (pa, pb), tuple(sorted((tm, c)))


@_suite("WORD_LEMMA_2_4")
def _suite_parabolic_extension(ws: Workspace, rep: SuiteReport, max_word: int | None = None):
    ball = ws.ball
    m = ws.matrix
    max_word = ws.profile.a0 + 3 if max_word is None else max_word
    count = 0
    for x, word, m_idx, P, Q in parabolic_extension_instances(ball, max_word):
        count += 1
        good = P == Q and m.m[P[0]][P[1]] != INF and len(word) == m_idx + 1
        rep.check(good, "parabolic_extension", [ball.format_word(x), ball.format_letters(word), m_idx])
    rep.observations["hypothesis_instances"] = count
    rep.observations["max_word"] = max_word


def _suffix_products(ball: GroupBall, start: int, room: int) -> list[int]:
    """start * y for every y of length <= room, indexed by y (ABSENT when it leaves the ball)."""
    ids = ball.ids_up_to(room)
    prod = [ABSENT] * len(ids)
    prod[0] = start
    words = ball.words
    for y in ids:
        if y == 0:
            continue
        a = words[y][-1]
        p = prod[ball.right[y][a]]
        prod[y] = ABSENT if p == ABSENT else ball.right[p][a]
    return prod


@_suite("LENGTH_LEMMA_2_5")
def _suite_additive_triples(ws: Workspace, rep: SuiteReport):
    """l(xwy) = l(x)+l(w)+l(y) for w in <r,s>, l(w) >= 3, r, s not in R(x) or L(y)."""
    ball = ws.ball
    lens = ball.lengths
    L = ball.radius
    for r, s in combinations(range(ball.rank), 2):
        mask = _mask(r, s)
        ws_elems = [w for w in ball.parabolic_elements(r, s) if lens[w] >= 3]
        xs = [x for x in range(len(ball)) if not ball.rdesc[x] & mask]
        ys_ok = [not ball.ldesc[y] & mask for y in range(len(ball))]
        for w in ws_elems:
            for x in xs:
                room = L - lens[x] - lens[w]
                if room < 0:
                    break
                xw = ball.multiply_word(x, ball.words[w]) if lens[x] + lens[w] <= L else ABSENT
                prods = _suffix_products(ball, xw, room)
                for y in ball.ids_up_to(room):
                    if not ys_ok[y]:
                        continue
                    p = prods[y]
                    if p != ABSENT and lens[p] == lens[x] + lens[w] + lens[y]:
                        rep.ok()
                    else:
                        _record(rep, ws, "length_additive", (x, w, y))


@_suite("COR_2_6")
def _suite_additive_pairs(ws: Workspace, rep: SuiteReport):
    """x = y r s with R(x) = {s}, R(yr) = {r}, and r, s not in L(z) gives l(xz) = l(x) + l(z)."""
    ball = ws.ball
    lens = ball.lengths
    L = ball.radius
    count = 0
    for x in range(len(ball)):
        rx = ball.rdesc[x]
        if not rx or rx & (rx - 1):
            continue
        s = rx.bit_length() - 1
        xs = ball.right[x][s]
        rxs = ball.rdesc[xs]
        if not rxs or rxs & (rxs - 1):
            continue
        r = rxs.bit_length() - 1
        mask = _mask(r, s)
        room = L - lens[x]
        prods = _suffix_products(ball, x, room)
        count += 1
        for z in ball.ids_up_to(room):
            if ball.ldesc[z] & mask:
                continue
            p = prods[z]
            if p != ABSENT and lens[p] == lens[x] + lens[z]:
                rep.ok()
            else:
                _record(rep, ws, "length_additive", (x, 0, z))
    rep.observations["hypothesis_instances"] = count


# -- degree lemmas and the boundedness theorem --------------------------------------------------


@_suite("DEG_LEMMA_2_7", needs_complete=False)
def _suite_degree_within_parabolic(ws: Workspace, rep: SuiteReport):
    """For w, u in a finite rank-2 parabolic P: f_{w,u,v} vanishes off P and has degree <= l(v)."""
    ball = ws.ball
    lens = ball.lengths
    table = ws.f_table
    for s, t in combinations(range(ball.rank), 2):
        order = ws.matrix.m[s][t]
        if order == INF:
            continue
        if order > ball.radius:
            rep.skip()
            continue
        P = ball.parabolic_elements(s, t)
        Pset = set(P)
        for w in P:
            for u in P:
                if lens[w] + lens[u] > ws.pair_budget:
                    rep.skip()
                    continue
                for v, c in table[w, u].items():
                    good = v in Pset and len(c) - 1 <= lens[v]
                    rep.check(
                        good,
                        "deg_le",
                        _words(ball, w, u) + [lens[v] if v in Pset else -1],
                        lambda: {"v": ball.format_word(v), "xi": list(c)},
                    )


def degree_drop_instances(ball: GroupBall):
    """(x, r, s, t) with x = y r s, R(yr) = {r, t}, R(x) = {s}, R(y) = {t}."""
    for x in range(len(ball)):
        rx = ball.rdesc[x]
        if not rx or rx & (rx - 1):
            continue
        s = rx.bit_length() - 1
        yr = ball.right[x][s]
        ryr = ball.rdesc[yr]
        if bin(ryr).count("1") != 2:
            continue
        for r in range(ball.rank):
            if not ryr >> r & 1:
                continue
            t = (ryr & ~(1 << r)).bit_length() - 1
            y = ball.right[yr][r]
            if ball.rdesc[y] == 1 << t:
                yield x, r, s, t


@_suite("DEG_LEMMA_2_8")
def _suite_degree_drop(ws: Workspace, rep: SuiteReport):
    ball = ws.ball
    lens = ball.lengths
    table = ws.f_table
    count = 0
    for x, r, s, t in degree_drop_instances(ball):
        count += 1
        mask = _mask(r, s)
        for z in ball.ids_up_to(ws.pair_budget - lens[x]):
            if ball.ldesc[z] & mask:
                continue
            if all(len(c) <= 2 for c in table[x, z].values()):
                rep.ok()
            else:
                _record(rep, ws, "deg_le", (x, z), (1,))
    rep.observations["hypothesis_instances"] = count


@_suite("BOUND_THM_2_1")
def _suite_degree_bound(ws: Workspace, rep: SuiteReport):
    """Every xi-degree of f is at most a0."""
    ball = ws.ball
    a0 = ws.profile.a0
    survey = ws.f_survey
    for (x, y), vec in ws.f_table.items():
        worst = max(len(c) - 1 for c in vec.values())
        if worst <= a0:
            rep.ok()
        else:
            _record(rep, ws, "deg_le", (x, y), (a0,))
    rep.skip(survey.pairs_skipped)
    rep.observations.update(
        {
            "a0": a0,
            "max_degree": survey.max_degree,
            "equals_a0": survey.max_degree == a0,
            "witnesses": [_words(ball, *t) for t in survey.witnesses],
        }
    )


# -- lowest two-sided cell -------------------------------------------------------------------------


def _omega_block(ws: Workspace):
    two = ws.two_sided
    blocks = {two.block_of[x] for x in ws.omega.members if ws.certified(x)}
    return blocks


@_suite("LOWEST_THM_1_5")
def _suite_lowest_cell(ws: Workspace, rep: SuiteReport):
    """Omega is a single lowest two-sided block, closed downward, and contains every a = a0 element."""
    ball = ws.ball
    omega = ws.omega
    two = ws.two_sided
    left = ws.left_cells
    a0 = ws.profile.a0
    blocks = _omega_block(ws)
    rep.check(len(blocks) == 1, "omega_single_block", [], {"blocks": sorted(blocks)})
    if len(blocks) != 1:
        return
    (b_omega,) = blocks
    for x in range(len(ball)):
        if ws.certified(x):
            rep.check(
                (two.block_of[x] == b_omega) == omega.member[x],
                "omega_block_matches_closure",
                _words(ball, x),
            )
        else:
            rep.skip()
    # downward closed along every true preorder edge
    for y, w, _, _ in ws.graph.left + ws.graph.right:
        if omega.member[w]:
            rep.check(omega.member[y], "omega_downward_closed", _words(ball, w, y))
    # union of left blocks on the certified region
    for blk in left.blocks:
        flags = {omega.member[x] for x in blk if ws.certified(x)}
        if flags:
            rep.check(len(flags) == 1, "omega_union_of_left_blocks", _words(ball, blk[0]))
    # lowest: every certified block reaches the Omega block, which reaches no other certified block
    # a block that cannot reach Omega inside the ball may only lack room for the path
    unreached = []
    for b in two.certified_blocks:
        if b_omega in two.reachable_from(b):
            rep.ok()
        else:
            rep.skip()
            unreached.append(ball.format_word(two.blocks[b][0]))
    rep.observations["blocks_not_reaching_omega"] = unreached
    below = two.reachable_from(b_omega) - {b_omega}
    rep.check(
        not any(two.certified[b] for b in below),
        "omega_minimal",
        [],
        {"certified_below": sorted(b for b in below if two.certified[b])},
    )
    # a-scan reaching a0 forces membership (exact: a_scan is a lower bound and a <= a0)
    for x in range(len(ball)):
        if ws.a_scan.a_scan[x] == a0:
            rep.check(omega.member[x], "a0_elements_in_omega", _words(ball, x))
    rep.observations["omega_size"] = len(omega)
    rep.observations["omega_block"] = b_omega


def gamma_cell(ball: GroupBall, w0: int) -> list[int]:
    """{x : l(x w0) = l(x) - l(w0)} for the longest element w0 of a rank-2 parabolic."""
    pair = ball.descents(w0, "left")
    mask = _mask(*pair)
    return [x for x in range(len(ball)) if ball.rdesc[x] & mask == mask]


@_suite("COR_1_6")
def _suite_gamma_left_cell(ws: Workspace, rep: SuiteReport):
    """{x : l(x w0) = l(x) - l(w0)} is one left block on the certified region, for each maximal w0."""
    ball = ws.ball
    left = ws.left_cells
    for w0, _ in ws.omega.seeds:
        gam = {x for x in gamma_cell(ball, w0) if ws.certified(x)}
        if not gam:
            rep.skip()
            continue
        blocks = {left.block_of[x] for x in gam}
        ok = len(blocks) == 1
        if ok:
            (b,) = blocks
            members = {x for x in left.blocks[b] if ws.certified(x)}
            ok = members == gam and left.certified[b]
        rep.check(ok, "gamma_is_left_block", _words(ball, w0), {"blocks": sorted(blocks)})


@_suite("PROP_3_1_SUITE")
def _suite_distinguished(ws: Workspace, rep: SuiteReport):
    ball = ws.ball
    kl = ws.kl
    lens = ball.lengths
    omega = ws.omega
    a0 = ws.profile.a0
    left = ws.left_cells
    scan = ws.a_scan.a_scan
    budget = ws.pair_budget
    # (a) the closure equals {a = a0} wherever a witness pair fits in the budget
    for x in range(len(ball)):
        if not ws.certified(x) or lens[x] + a0 > budget:
            rep.skip()
            continue
        rep.check(omega.member[x] == (scan[x] == a0), "a_equals_a0_iff_omega", _words(ball, x), {"a_scan": scan[x]})
    for x in range(len(ball)):
        wit = omega.witness(x)
        if omega.member[x]:
            ok = wit is not None and lens[x] == lens[wit[0]] + lens[wit[1]] + lens[wit[2]]
            ok = ok and ball.multiply(ball.multiply(wit[0], wit[1]), wit[2]) == x
            rep.check(ok, "omega_witness", _words(ball, x))
        else:
            rep.check(wit is None, "omega_witness_absent", _words(ball, x))
    # (b) Gamma_x, x in D', are disjoint, cover Omega and sit inside single left blocks
    members = ws.dprime.members
    owner: dict[int, int] = {}
    for mem in members:
        g = gamma_set(ball, mem.x)
        blocks = {left.block_of[z] for z in g if ws.certified(z)}
        rep.check(len(blocks) <= 1, "gamma_x_single_left_block", _words(ball, mem.x), {"blocks": sorted(blocks)})
        for z in g:
            if z in owner:
                rep.fail("gamma_x_disjoint", _words(ball, mem.x, owner[z], z))
            else:
                owner[z] = mem.x
                rep.ok()
    for x in omega.members:
        rep.check(x in owner, "gamma_x_cover_omega", _words(ball, x))
    rep.observations["d_prime"] = [ball.format_word(m.x) for m in members]
    for mem in members:
        if mem.d is None:
            rep.skip()
        else:
            rep.check(ball.multiply(mem.d, mem.d) == 0, "d_is_involution", _words(ball, mem.d))
    # (c) degree law for P_{e, z u y}
    for mem in members:
        u, y = mem.w, mem.y
        yinv = ball.inverse(y)
        for x in gamma_set(ball, mem.x):
            z = ball.multiply(x, ball.inverse(mem.x))
            p = kl.kl_poly(0, x)
            dq = p.degree // 2
            slack = lens[x] - 2 * dq - a0
            good = slack >= 0 and ((slack == 0) == (z == yinv))
            if good and z == yinv:
                good = p.coeff(2 * lens[y]) == 1
            rep.check(good, "degree_law", _words(ball, z, u, y), {"deg_P": dq, "slack": slack})
    # (d) C_{zu} C_{uy} = h_{u,u,u} C_{zuy}
    engine = CProducts(kl)
    for mem in members:
        u, y = mem.w, mem.y
        if 2 * lens[u] > budget:
            rep.skip()
            continue
        huuu = engine.product(u, u).get(u, ())
        uy = mem.x
        targets = {}
        for x in gamma_set(ball, uy):
            z = ball.multiply(x, ball.inverse(uy))
            if lens[z] + lens[u] + lens[uy] <= budget:
                targets[ball.multiply(z, u)] = x
            else:
                rep.skip()
        if not targets:
            continue
        for zu, vec in engine.products_with(uy, budget):
            if zu in targets:
                rep.check(vec == {targets[zu]: huuu}, "c_product_factorization", _words(ball, zu, uy))
    # (d) mu(z'uy, zuy) = mu(z'u, zu)
    for mem in members:
        u, uy = mem.w, mem.x
        g = gamma_set(ball, uy)
        uyinv = ball.inverse(uy)
        zs = [(x, ball.multiply(ball.multiply(x, uyinv), u)) for x in g]
        for a, za in zs:
            for b, zb in zs:
                if a == b:
                    continue
                lhs, rhs = kl.mu(a, b), kl.mu(za, zb)
                rep.check(lhs == rhs, "mu_transport", _words(ball, a, b, za, zb), {"lhs": lhs, "rhs": rhs})


@_suite("PROP_3_2_PROBE", kind="PROBE")
def _suite_distinguished_growth(ws: Workspace, rep: SuiteReport, radii=None):
    """D' count across growing radii: stable for affine A2, strictly growing otherwise."""
    m = ws.matrix
    if m.rank < 3 or not ws.profile.lambda_pairs:
        raise MissingPrerequisite("needs rank >= 3 and some finite order")
    if radii is None:
        radii = (ws.radius - 4, ws.radius - 2, ws.radius)
    radii = sorted(r for r in radii if r >= ws.profile.a0)
    affine_a2 = m.rank == 3 and all(m.m[i][j] == 3 for i, j in combinations(range(3), 2))
    counts = []
    for r in radii:
        ball = build_ball(m, r)
        counts.append(len(d_prime(ball).members))
    rep.observations.update({"radii": radii, "d_prime_counts": counts, "affine_A2": affine_a2})
    for a, b in zip(counts, counts[1:]):
        if affine_a2:
            rep.check(a == b, "d_prime_stable", [a, b])
        else:
            rep.check(b > a, "d_prime_growing", [a, b])


# -- cell counts -------------------------------------------------------------------------------------


def _reduced_count_at_least_two(ball: GroupBall, x: int) -> bool:
    exprs, truncated = ball.reduced_expressions(x, limit=2)
    return truncated or len(exprs) > 1


@_suite("CELL_COUNT_4_1")
def _suite_cells_one_order(ws: Workspace, rep: SuiteReport):
    """Orders in {m, inf}: blocks are {e}, unique-reduced-word elements, and the rest."""
    m = ws.matrix
    orders = {m.m[i][j] for i, j in combinations(range(m.rank), 2)}
    finite = orders - {INF}
    if len(finite) > 1:
        raise MissingPrerequisite("orders must all be one finite m or infinity")
    expected = 3 if finite else 2
    ball = ws.ball
    two = ws.two_sided
    certified = two.certified_blocks
    rep.observations.update(
        {
            "expected": expected,
            "certified_blocks": len(certified),
            "blocks": [[ball.format_word(two.blocks[b][0]), len(two.blocks[b])] for b in certified],
        }
    )
    rep.check(len(certified) == expected, "two_sided_count", [expected, len(certified)])
    classes = {}
    for x in range(len(ball)):
        if not ws.certified(x):
            rep.skip()
            continue
        key = 0 if x == 0 else (1 if not _reduced_count_at_least_two(ball, x) else 2)
        classes.setdefault(key, set()).add(two.block_of[x])
    for key, blocks in sorted(classes.items()):
        rep.check(len(blocks) == 1, "class_is_one_block", [key], {"blocks": sorted(blocks)})
    blocks = [next(iter(b)) for b in classes.values() if len(b) == 1]
    rep.check(len(set(blocks)) == len(blocks), "classes_distinct", [])


@_suite("CELL_COUNT_4_5")
def _suite_cells_by_order(ws: Workspace, rep: SuiteReport):
    """Crystallographic complete graphs: |O| + 2 blocks, realized by {e}, unique words and the W_i chain."""
    m = ws.matrix
    if not m.crystallographic:
        raise MissingPrerequisite("needs a crystallographic matrix")
    prof = ws.profile
    expected = len(prof.o_classes) + 2
    ball = ws.ball
    two = ws.two_sided
    certified = two.certified_blocks
    rep.observations.update(
        {
            "expected": expected,
            "certified_blocks": len(certified),
            "blocks": [[ball.format_word(two.blocks[b][0]), len(two.blocks[b])] for b in certified],
        }
    )
    rep.check(len(certified) == expected, "two_sided_count", [expected, len(certified)])
    seen = set()
    layers = []
    for i in sorted(prof.o_classes, reverse=True):
        wi = w_i_closure(ball, i)
        layer = [x for x in wi.members if x not in seen]
        seen.update(wi.members)
        layers.append((i, layer))
    top = [x for x in range(1, len(ball)) if x not in seen]
    layers.append(("unique", top))
    layers.append(("e", [0]))
    used = []
    for name, layer in layers:
        cert = [x for x in layer if ws.certified(x)]
        blocks = {two.block_of[x] for x in cert}
        rep.check(len(blocks) == 1, "layer_is_one_block", [str(name)], {"blocks": sorted(blocks)})
        if len(blocks) == 1:
            (b,) = blocks
            members = {x for x in two.blocks[b] if ws.certified(x)}
            rep.check(members == set(cert), "layer_fills_block", [str(name)])
            used.append(b)
    rep.check(len(set(used)) == len(used), "layers_distinct", [])
    if prof.o_classes:
        rep.check(
            set(w_i_closure(ball, max(prof.o_classes)).members) == set(ws.omega.members),
            "top_layer_is_omega",
            [],
        )


def mu_one_instances(ball: GroupBall):
    """(w, u, x, y) with w, u longest in distinct finite rank-2 parabolics P, Q, l(w) <= l(u),
    x, y in Q, wx additive with u a right factor of wx, l(y) = l(wx) - l(u) - 1, ywx additive."""
    m = ball.coxeter
    lens = ball.lengths
    pairs = [
        (s, t)
        for s, t in combinations(range(m.rank), 2)
        if m.m[s][t] != INF and m.m[s][t] <= ball.radius
    ]
    for P, Q in permutations(pairs, 2):
        w = ball.dihedral_data(*P).longest
        u = ball.dihedral_data(*Q).longest
        if lens[w] > lens[u]:
            continue
        qmask = _mask(*Q)
        Qel = ball.parabolic_elements(*Q)
        for x in Qel:
            if lens[w] + lens[x] > ball.radius:
                continue
            wx = ball.multiply(w, x)
            if lens[wx] != lens[w] + lens[x] or ball.rdesc[wx] & qmask != qmask:
                continue
            ly = lens[wx] - lens[u] - 1
            if ly < 0:
                continue
            for y in Qel:
                if lens[y] != ly:
                    continue
                if ly + lens[wx] > ball.radius:
                    yield w, u, x, y, None
                    continue
                ywx = ball.multiply(y, wx)
                if lens[ywx] == ly + lens[wx]:
                    yield w, u, x, y, ywx


@_suite("MU_LEMMA_4_3")
def _suite_mu_one(ws: Workspace, rep: SuiteReport):
    ball = ws.ball
    count = 0
    for w, u, x, y, ywx in mu_one_instances(ball):
        if ywx is None:
            rep.skip()
            continue
        count += 1
        if ws.kl.mu(u, ywx) == 1:
            rep.ok()
        else:
            _record(rep, ws, "mu_equals_one", (u, ywx))
    rep.observations["hypothesis_instances"] = count


@_suite("COR_4_4")
def _suite_longest_reachability(ws: Workspace, rep: SuiteReport):
    """u <=_LR w for longest elements with l(u) >= l(w); both ways when lengths agree."""
    ball = ws.ball
    two = ws.two_sided
    lens = ball.lengths
    chains: dict[tuple[int, int], bool] = {}
    for w, u, x, y, ywx in mu_one_instances(ball):
        if ywx is not None:
            chains[w, u] = True
    m = ws.matrix
    longest = [
        ball.dihedral_data(s, t).longest
        for s, t in combinations(range(m.rank), 2)
        if m.m[s][t] != INF and m.m[s][t] <= ball.radius
    ]
    equal_pairs = 0
    for w, u in permutations(longest, 2):
        if lens[u] < lens[w]:
            continue
        reach = two.block_of[u] in two.reachable_from(two.block_of[w])
        if reach:
            rep.ok()
        elif chains.get((w, u)):
            rep.fail("lr_reachability", _words(ball, u, w))
        else:
            rep.skip()
        if lens[u] == lens[w] and reach:
            equal_pairs += 1
    rep.observations["equal_length_pairs_reached"] = equal_pairs


@_suite("SECTION_5_PROBES", kind="PROBE")
def _suite_weyl_probes(ws: Workspace, rep: SuiteReport):
    """a(w) <= l(w) on the truncation; isomorphic rank-2 parabolics share a two-sided block."""
    ball = ws.ball
    lens = ball.lengths
    scan = ws.a_scan.a_scan
    for x in range(len(ball)):
        rep.check(scan[x] <= lens[x], "a_le_length", _words(ball, x), {"a_scan": scan[x]})
    m = ws.matrix
    two = ws.two_sided
    by_order: dict = {}
    for s, t in combinations(range(m.rank), 2):
        if m.m[s][t] != INF:
            by_order.setdefault(m.m[s][t], []).append((s, t))
    for order, pairs in sorted(by_order.items()):
        if len(pairs) < 2 or order > ball.radius:
            continue
        elems = [ball.dihedral_data(*p).longest for p in pairs]
        if not all(ws.certified(e) for e in elems):
            rep.skip()
            continue
        blocks = {two.block_of[e] for e in elems}
        rep.check(len(blocks) == 1, "isomorphic_parabolics_same_block", _words(ball, *elems))
    # f-degree versus h-degree per element (recorded, not asserted)
    fz = ws.f_survey.max_degree_by_z
    disagree = [ball.format_word(v) for v in range(len(ball)) if fz.get(v, -1) != scan[v]]
    rep.observations["f_vs_h_degree_disagreements"] = len(disagree)
    rep.observations["f_vs_h_examples"] = disagree[:10]


@_suite("GAMMA_FACTS")
def _gamma_facts(ws: Workspace, rep: SuiteReport):
    """Leading coefficients at level a0 for targets in Omega: positivity, symmetry, cell relations."""
    ball = ws.ball
    omega = ws.omega
    a0 = ws.profile.a0
    inv = ball.inverse
    lens = ball.lengths
    budget = ws.pair_budget
    engine = CProducts(ws.kl)
    gamma: dict = {}
    for u in ball.ids_up_to(budget):
        for x, vec in engine.products_with(u, budget):
            for v, c in vec.items():
                if len(c) - 1 > a0:
                    rep.fail("h_degree_le_a0", _words(ball, x, u, v), {"eta": list(c)})
                if omega.member[v] and len(c) > a0 and c[a0]:
                    gamma[x, u, v] = c[a0]
    left, right = ws.left_cells, ws.right_cells
    for (w, u, v), g in sorted(gamma.items()):
        rep.check(g > 0 and omega.member[w] and omega.member[u], "gamma_positive_in_omega", _words(ball, w, u, v))
        for (a, b, c) in ((u, inv(v), inv(w)), (inv(v), w, inv(u)), (inv(u), inv(w), inv(v))):
            if lens[a] + lens[b] <= budget:
                rep.check(gamma.get((a, b, c), 0) == g, "gamma_symmetry", _words(ball, w, u, v))
            else:
                rep.skip()
        if all(ws.certified(e) for e in (w, u, v)):
            rep.check(
                right.same_block(w, v) and left.same_block(u, v) and left.same_block(w, inv(u)),
                "gamma_cells",
                _words(ball, w, u, v),
            )
        else:
            rep.skip()
    rep.observations["nonzero_gamma"] = len(gamma)
    # unit of the ring on Gamma intersected with its inverse
    for w0, _ in omega.seeds:
        gam = set(gamma_cell(ball, w0))
        elems = [x for x in gam if ball.inverse(x) in gam and omega.member[x]]
        table = j_table(ws.kl, elems, budget, omega, unit=w0)
        rep.check(bool(table.unit_ok), "j_ring_unit", _words(ball, w0))
