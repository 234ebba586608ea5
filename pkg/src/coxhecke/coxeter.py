"""Coxeter groups truncated to a ball of radius L.

A `GroupBall` enumerates every element of length <= L breadth first, with
ShortLex-minimal words, lengths, left/right neighbor tables and descent sets.
Element identity is decided exactly: each element w is keyed by w^{-1}(rho) in
the contragredient of the geometric representation, with coordinates in
Z[2cos(pi/N)].  Since rho lies in the interior of the fundamental chamber its
stabilizer is trivial, so keys are faithful.

>>> ball = build_ball(CoxeterMatrix.dihedral(3), 3)
>>> [ball.format_word(w) for w in range(len(ball))]
['e', 's', 't', 's.t', 't.s', 's.t.s']
>>> ball.parse_word("t.s.t") == ball.parse_word("s.t.s")
True
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from .cycint import CycInt, CycRing, ring_for_orders
from .errors import BallExceeded, MatrixError, ResourceLimit

__all__ = [
    "INF",
    "CoxeterMatrix",
    "Element",
    "GroupBall",
    "DihedralInfo",
    "Profile",
    "build_ball",
    "group_profile",
    "DEFAULT_MAX_ELEMENTS",
]

log = logging.getLogger(__name__)

INF = math.inf
ABSENT = -1
DEFAULT_MAX_ELEMENTS = 400_000


@dataclass(frozen=True)
class CoxeterMatrix:
    """Coxeter matrix with named generators; `INF` marks an infinite order."""

    gens: tuple[str, ...]
    m: tuple[tuple, ...]

    def __post_init__(self):
        gens = tuple(self.gens)
        object.__setattr__(self, "gens", gens)
        n = len(gens)
        if n < 1:
            raise MatrixError("rank must be at least 1")
        if len(set(gens)) != n:
            raise MatrixError(f"generator names must be distinct: {gens}")
        for g in gens:
            if not isinstance(g, str) or not g or "." in g or g == "e" or g.isspace():
                raise MatrixError(f"bad generator name {g!r}")
        rows = tuple(tuple(row) for row in self.m)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise MatrixError(f"m must be a {n}x{n} table")
        for i in range(n):
            for j in range(n):
                v = rows[i][j]
                if i == j:
                    if v != 1:
                        raise MatrixError(f"m[{i}][{j}] ({gens[i]},{gens[j]}) must be 1, got {v}")
                    continue
                if v != INF and (not float(v).is_integer() or v < 2):
                    raise MatrixError(
                        f"m[{i}][{j}] ({gens[i]},{gens[j]}) must be an integer >= 2 or infinity, got {v}"
                    )
                if rows[j][i] != v:
                    raise MatrixError(f"m is not symmetric at ({gens[i]},{gens[j]})")
        rows = tuple(tuple(v if v == INF else int(v) for v in r) for r in rows)
        object.__setattr__(self, "m", rows)

    @property
    def rank(self) -> int:
        return len(self.gens)

    def order(self, i: int, j: int):
        return self.m[i][j]

    @property
    def complete_graph(self) -> bool:
        return all(self.m[i][j] >= 3 for i, j in combinations(range(self.rank), 2))

    @property
    def crystallographic(self) -> bool:
        return all(self.m[i][j] in (2, 3, 4, 6, INF) for i, j in combinations(range(self.rank), 2))

    def index(self, name: str) -> int:
        try:
            return self.gens.index(name)
        except ValueError:
            raise MatrixError(f"unknown generator {name!r}") from None

    # -- documents -----------------------------------------------------------

    @classmethod
    def from_document(cls, doc: dict) -> CoxeterMatrix:
        """Parse {"gens": [...], "m": [[...]]} with 0 encoding infinity."""
        if not isinstance(doc, dict) or "gens" not in doc or "m" not in doc:
            raise MatrixError('matrix document needs fields "gens" and "m"')
        gens = doc["gens"]
        rows = []
        for i, row in enumerate(doc["m"]):
            if not isinstance(row, list):
                raise MatrixError(f"m[{i}] is not a list")
            out = []
            for j, v in enumerate(row):
                if isinstance(v, bool) or not isinstance(v, int):
                    raise MatrixError(f"m[{i}][{j}] must be an integer, got {v!r}")
                if v == 0:
                    out.append(INF)
                elif v < 0:
                    raise MatrixError(f"m[{i}][{j}] must be non-negative, got {v}")
                else:
                    out.append(v)
            rows.append(tuple(out))
        return cls(tuple(gens), tuple(rows))

    def to_document(self) -> dict:
        return {
            "gens": list(self.gens),
            "m": [[0 if v == INF else v for v in row] for row in self.m],
        }

    @classmethod
    def load(cls, path) -> CoxeterMatrix:
        with open(path) as fh:
            return cls.from_document(json.load(fh))

    @cached_property
    def content_hash(self) -> str:
        blob = json.dumps(self.to_document(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    # -- standard families ---------------------------------------------------

    @classmethod
    def dihedral(cls, m, gens=("s", "t")) -> CoxeterMatrix:
        return cls(tuple(gens), ((1, m), (m, 1)))

    @classmethod
    def triangle(cls, m_st, m_sr, m_tr, gens=("s", "t", "r")) -> CoxeterMatrix:
        """Rank 3 with orders m(s,t), m(s,r), m(t,r)."""
        return cls(tuple(gens), ((1, m_st, m_sr), (m_st, 1, m_tr), (m_sr, m_tr, 1)))

    @classmethod
    def universal(cls, rank: int) -> CoxeterMatrix:
        gens = tuple(f"s{i + 1}" for i in range(rank)) if rank > 3 else ("s", "t", "r")[:rank]
        m = tuple(tuple(1 if i == j else INF for j in range(rank)) for i in range(rank))
        return cls(gens, m)

    @classmethod
    def rank_one(cls) -> CoxeterMatrix:
        return cls(("s",), ((1,),))

    @classmethod
    def type_a(cls, n: int) -> CoxeterMatrix:
        gens = tuple(f"s{i + 1}" for i in range(n))
        m = tuple(
            tuple(1 if i == j else (3 if abs(i - j) == 1 else 2) for j in range(n)) for i in range(n)
        )
        return cls(gens, m)

    def __str__(self):
        doc = self.to_document()
        return f"CoxeterMatrix(gens={doc['gens']}, m={doc['m']})"


@dataclass(frozen=True)
class Element:
    """View of one ball element.  `matrix` is the action on simple roots."""

    id: int
    length: int
    word: tuple[int, ...]
    ball: GroupBall = field(repr=False, compare=False)

    @property
    def matrix(self):
        return self.ball.matrix(self.id)

    def __str__(self):
        return self.ball.format_word(self.id)


@dataclass(frozen=True)
class DihedralInfo:
    pair: tuple[int, int]
    order: float
    finite: bool
    longest: int | None
    alternating_words: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Profile:
    complete_graph: bool
    crystallographic: bool
    a0: int
    lambda_pairs: tuple[tuple[int, int], ...]
    o_classes: tuple[int, ...]

    def to_dict(self, gens=None) -> dict:
        def name(i):
            return gens[i] if gens else i

        return {
            "complete_graph": self.complete_graph,
            "crystallographic": self.crystallographic,
            "a0": self.a0,
            "Lambda_pairs": [[name(i), name(j)] for i, j in self.lambda_pairs],
            "O_classes": list(self.o_classes),
        }


def group_profile(matrix: CoxeterMatrix) -> Profile:
    """a0, Lambda pairs and rank-2 isomorphism classes read off the matrix.

    On a complete graph every standard parabolic of rank >= 3 is infinite, so a0
    is the largest finite m(s,t); it is 1 when there is none.
    """
    finite = [(i, j, matrix.m[i][j]) for i, j in combinations(range(matrix.rank), 2) if matrix.m[i][j] != INF]
    a0 = max((m for _, _, m in finite), default=1)
    pairs = tuple((i, j) for i, j, m in finite if m == a0)
    classes = tuple(sorted({m for _, _, m in finite}))
    return Profile(matrix.complete_graph, matrix.crystallographic, a0, pairs, classes)


class GroupBall:
    """All elements of length <= radius, ids ordered by (length, ShortLex word).

    Element ids are plain ints; id 0 is the identity.  `right[w][s]` and
    `left[w][s]` hold ws and sw, or -1 when that product has length radius+1.
    `rdesc[w]`/`ldesc[w]` are descent bitmasks.
    """

    def __init__(self, matrix, radius, ring, words, lengths, right, left, level_start, index):
        self.matrix_data = matrix
        self.radius = radius
        self.ring = ring
        self.words = words
        self.lengths = lengths
        self.right = right
        self.left = left
        self.level_start = level_start
        self._index = index
        n = len(words)
        self.rdesc = [0] * n
        self.ldesc = [0] * n
        for w in range(n):
            lw = lengths[w]
            rm = lm = 0
            for s in range(matrix.rank):
                x = right[w][s]
                if x != ABSENT and lengths[x] < lw:
                    rm |= 1 << s
                x = left[w][s]
                if x != ABSENT and lengths[x] < lw:
                    lm |= 1 << s
            self.rdesc[w] = rm
            self.ldesc[w] = lm
        inv = [0] * n
        for w in range(1, n):
            p, a = self.parent(w), words[w][-1]
            inv[w] = left[inv[p]][a]
        self.inverse_table = inv
        self._intervals: dict[int, frozenset] = {}

    # -- basic access ----------------------------------------------------------

    @property
    def coxeter(self) -> CoxeterMatrix:
        return self.matrix_data

    @property
    def rank(self) -> int:
        return self.matrix_data.rank

    def __len__(self) -> int:
        return len(self.words)

    def __getitem__(self, w: int) -> Element:
        return Element(w, self.lengths[w], self.words[w], self)

    def __iter__(self):
        return (self[w] for w in range(len(self)))

    def length(self, w: int) -> int:
        return self.lengths[w]

    def word(self, w: int) -> tuple[int, ...]:
        return self.words[w]

    def ids_of_length(self, n: int) -> range:
        if n < 0 or n > self.radius:
            return range(0)
        return range(self.level_start[n], self.level_start[n + 1])

    def ids_up_to(self, n: int) -> range:
        n = min(n, self.radius)
        if n < 0:
            return range(0)
        return range(0, self.level_start[n + 1])

    @cached_property
    def closed(self) -> bool:
        """True when the ball is the whole (finite) group."""
        return all(x != ABSENT for row in self.right for x in row)

    @property
    def product_budget(self) -> int:
        """Largest l(x) + l(y) whose T~-product is guaranteed to stay inside the ball."""
        return 2 * self.radius if self.closed else self.radius

    def parent(self, w: int) -> int:
        """The element obtained by deleting the last letter of w's ShortLex word."""
        return self.right[w][self.words[w][-1]]

    def inverse(self, w: int) -> int:
        return self.inverse_table[w]

    def format_word(self, w: int) -> str:
        word = self.words[w]
        if not word:
            return "e"
        return ".".join(self.matrix_data.gens[i] for i in word)

    def format_letters(self, word) -> str:
        return ".".join(self.matrix_data.gens[i] for i in word) if word else "e"

    def parse_letters(self, text) -> tuple[int, ...]:
        if isinstance(text, str):
            text = text.strip()
            if text in ("", "e"):
                return ()
            return tuple(self.matrix_data.index(tok) for tok in text.split("."))
        return tuple(int(i) for i in text)

    def parse_word(self, text) -> int:
        """Element id of a word given as "s.t.s" or a sequence of generator indices."""
        return self.from_letters(self.parse_letters(text))

    def from_letters(self, letters) -> int:
        return self.multiply_word(0, letters)

    # -- products ----------------------------------------------------------------

    def rmul(self, w: int, s: int) -> int:
        x = self.right[w][s]
        if x == ABSENT:
            raise BallExceeded(f"{self.format_word(w)}.{self.matrix_data.gens[s]} has length {self.radius + 1}")
        return x

    def lmul(self, s: int, w: int) -> int:
        x = self.left[w][s]
        if x == ABSENT:
            raise BallExceeded(f"{self.matrix_data.gens[s]}.{self.format_word(w)} has length {self.radius + 1}")
        return x

    def multiply_word(self, x: int, letters) -> int:
        w = x
        for k, s in enumerate(letters):
            nxt = self.right[w][s]
            if nxt == ABSENT:
                return self._multiply_by_key(x, letters)
            w = nxt
        return w

    def _multiply_by_key(self, x: int, letters) -> int:
        # path left the ball; decide the product exactly from its key
        key = self._key_of(x)
        for s in letters:
            key = self._act(s, key)
        w = self._index.get(key)
        if w is None:
            raise BallExceeded(
                f"{self.format_word(x)} * {self.format_letters(letters)} has length > {self.radius}"
            )
        return w

    def multiply(self, x: int, y: int) -> int:
        """The product xy; raises BallExceeded when l(xy) > radius."""
        return self.multiply_word(x, self.words[y])

    # -- descents ----------------------------------------------------------------

    def descents(self, w: int, side: str = "left") -> frozenset:
        mask = self.ldesc[w] if side == "left" else self.rdesc[w]
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        return frozenset(s for s in range(self.rank) if mask >> s & 1)

    def is_left_descent(self, s: int, w: int) -> bool:
        return bool(self.ldesc[w] >> s & 1)

    def is_right_descent(self, w: int, s: int) -> bool:
        return bool(self.rdesc[w] >> s & 1)

    def first_left_descent(self, w: int) -> int:
        mask = self.ldesc[w]
        return (mask & -mask).bit_length() - 1

    # -- Bruhat order --------------------------------------------------------------

    def bruhat_interval(self, w: int) -> frozenset:
        """{y : y <= w}, built from [e, sw] and s[e, sw] for the first s in L(w)."""
        got = self._intervals.get(w)
        if got is not None:
            return got
        # iterative over the descending chain to bound recursion depth
        chain = []
        x = w
        while x not in self._intervals and x != 0:
            chain.append(x)
            x = self.left[x][self.first_left_descent(x)]
        if 0 not in self._intervals:
            self._intervals[0] = frozenset((0,))
        for x in reversed(chain):
            s = self.first_left_descent(x)
            below = self._intervals[self.left[x][s]]
            lt = self.left
            self._intervals[x] = below | {lt[y][s] for y in below}
        return self._intervals[w]

    def bruhat_leq(self, y: int, w: int) -> bool:
        if self.lengths[y] > self.lengths[w]:
            return False
        if self.lengths[y] == self.lengths[w]:
            return y == w
        return y in self.bruhat_interval(w)

    # -- words -------------------------------------------------------------------

    def reduced_expressions(self, w: int, limit: int = 10_000) -> tuple[list[tuple[int, ...]], bool]:
        """All reduced words of w in lexicographic order, and a truncation flag."""
        if limit < 1:
            raise ValueError("limit must be >= 1")
        out: list[tuple[int, ...]] = []
        truncated = False

        def walk(x, prefix):
            nonlocal truncated
            if truncated:
                return
            if x == 0:
                if len(out) >= limit:
                    truncated = True
                    return
                out.append(tuple(prefix))
                return
            mask = self.ldesc[x]
            for s in range(self.rank):
                if mask >> s & 1:
                    prefix.append(s)
                    walk(self.left[x][s], prefix)
                    prefix.pop()

        walk(w, [])
        return out, truncated

    def length_of_letters(self, letters) -> int:
        return self.lengths[self.from_letters(letters)]

    def is_reduced(self, letters) -> bool:
        """True when the word is reduced; requires len(letters) <= radius."""
        w = 0
        for s in letters:
            nxt = self.right[w][s]
            if nxt == ABSENT or self.lengths[nxt] < self.lengths[w]:
                return False
            w = nxt
        return True

    # -- rank-2 parabolics ---------------------------------------------------------

    def dihedral_data(self, s: int, t: int) -> DihedralInfo:
        if s == t:
            raise ValueError("dihedral_data needs two distinct generators")
        m = self.matrix_data.m[s][t]
        finite = m != INF
        longest = None
        words: list[tuple[int, ...]] = []
        if finite:
            if m > self.radius:
                raise BallExceeded(
                    f"longest element of <{self.matrix_data.gens[s]},{self.matrix_data.gens[t]}> "
                    f"has length {m} > {self.radius}"
                )
            words = [tuple((s, t)[k % 2] for k in range(m)), tuple((t, s)[k % 2] for k in range(m))]
            longest = self.from_letters(words[0])
        return DihedralInfo((s, t), m, finite, longest, tuple(sorted(words)))

    def parabolic_elements(self, s: int, t: int) -> list[int]:
        """Elements of the parabolic <s,t> inside the ball, in id order."""
        found = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in (s, t):
                    y = self.right[x][g]
                    if y != ABSENT and y not in found:
                        found.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(found)

    # -- exact representation -----------------------------------------------------

    @cached_property
    def _generator_data(self):
        ring = self.ring
        n = self.rank
        d = ring.degree
        consts = {}
        for s in range(n):
            for k in range(n):
                if k != s:
                    c = ring.two_cos(self.matrix_data.m[s][k])
                    consts[s, k] = c
        # multiplication-by-constant as integer matrices acting on coefficient vectors
        mats = {}
        basis = [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
        for key, c in consts.items():
            cols = [ring.mul_vec(c.coeffs, b) for b in basis]
            mats[key] = tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))
        return consts, mats

    def _act(self, s: int, key: tuple) -> tuple:
        return _act(self.rank, self.ring.degree, self._generator_data[1], s, key)

    def _key_of(self, w: int) -> tuple:
        key = _rho_key(self.rank, self.ring.degree)
        for s in self.words[w]:
            key = self._act(s, key)
        return key

    def matrix(self, w: int) -> tuple[tuple[CycInt, ...], ...]:
        """Matrix of w on the basis of simple roots (columns are images of roots)."""
        ring = self.ring
        n = self.rank
        consts, _ = self._generator_data
        zero, one = ring.from_int(0), ring.from_int(1)
        mat = [[one if i == j else zero for j in range(n)] for i in range(n)]
        for s in self.words[w]:
            # M <- M sigma_s; sigma_s(alpha_j) = alpha_j + c_sj alpha_s, sigma_s(alpha_s) = -alpha_s
            col_s = [mat[i][s] for i in range(n)]
            for j in range(n):
                if j == s:
                    continue
                c = consts[s, j]
                for i in range(n):
                    mat[i][j] = mat[i][j] + c * col_s[i]
            for i in range(n):
                mat[i][s] = -col_s[i]
        return tuple(tuple(row) for row in mat)

    @cached_property
    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(self.matrix_data.content_hash.encode())
        h.update(str(self.radius).encode())
        for w in range(len(self)):
            h.update(self.format_word(w).encode())
            h.update(b"\n")
        return h.hexdigest()[:16]


def _rho_key(rank: int, d: int) -> tuple:
    one = (1,) + (0,) * (d - 1)
    return one * rank


def _act(rank, d, mats, s, key):
    # contragredient action: f_s -> -f_s, f_k -> f_k + c_sk f_s
    fs = key[s * d:(s + 1) * d]
    if not any(fs):
        return key
    out = list(key)
    for k in range(rank):
        base = k * d
        if k == s:
            for i in range(d):
                out[base + i] = -fs[i]
            continue
        mat = mats[s, k]
        for i in range(d):
            row = mat[i]
            acc = 0
            for j in range(d):
                if row[j] and fs[j]:
                    acc += row[j] * fs[j]
            out[base + i] += acc
    return tuple(out)


def build_ball(matrix: CoxeterMatrix, radius: int, max_elements: int = DEFAULT_MAX_ELEMENTS) -> GroupBall:
    """Breadth-first enumeration of {w : l(w) <= radius}."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if not matrix.complete_graph and matrix.rank > 1:
        log.info("Coxeter graph of %s is not complete; theorem suites require completeness", matrix)
    ring = ring_for_orders(v for row in matrix.m for v in row if v != 1)
    rank = matrix.rank
    d = ring.degree
    probe = GroupBall.__new__(GroupBall)
    probe.matrix_data = matrix
    probe.ring = ring
    mats = GroupBall._generator_data.func(probe)[1]

    start = _rho_key(rank, d)
    index = {start: 0}
    keys = [start]
    words: list[tuple[int, ...]] = [()]
    lengths = [0]
    right = [[ABSENT] * rank]
    level_start = [0, 1]
    for n in range(radius + 1):
        lo, hi = level_start[n], level_start[n + 1]
        for w in range(lo, hi):
            key, row = keys[w], right[w]
            for s in range(rank):
                if row[s] != ABSENT:
                    continue
                nk = _act(rank, d, mats, s, key)
                x = index.get(nk)
                if x is None:
                    if n == radius:
                        continue
                    x = len(words)
                    if x >= max_elements:
                        raise ResourceLimit(
                            f"ball of radius {radius} exceeds {max_elements} elements at length {n + 1}"
                        )
                    index[nk] = x
                    keys.append(nk)
                    words.append(words[w] + (s,))
                    lengths.append(n + 1)
                    right.append([ABSENT] * rank)
                    right[x][s] = w
                row[s] = x
        level_start.append(len(words))
    level_start = level_start[: radius + 2]

    left = [[ABSENT] * rank for _ in range(len(words))]
    left[0] = list(right[0])
    for w in range(1, len(words)):
        a = words[w][-1]
        p = right[w][a]
        lw = left[w]
        lp = left[p]
        for s in range(rank):
            sp = lp[s]
            lw[s] = ABSENT if sp == ABSENT else right[sp][a]
    return GroupBall(matrix, radius, ring, words, lengths, right, left, level_start, index)
