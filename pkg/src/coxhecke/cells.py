"""Cells of a truncated Coxeter group and its lowest two-sided cell.

Preorder edges come from the mu-graph: for y, w joined by mu != 0 (in either
length order), C_y occurs in C_s C_w whenever s in L(y) \\ L(w), which gives
y <=_L w.  Right edges use right descents.  Cells are strongly connected
components of these edges restricted to the ball; since every edge is a true
edge of W, each block is contained in a true cell.

The lowest two-sided cell Omega is the set of elements z u y with
l(zuy) = l(z) + l(u) + l(y) and u the longest element of a rank-2 parabolic
of maximal order.  Membership is decided by closure from those longest
elements, adding a letter on either side whenever the length goes up.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .coxeter import ABSENT, GroupBall, group_profile
from .errors import EmptyLambda, NoSuchParabolic
from .kl import KLTable

__all__ = [
    "MuGraph",
    "CellPartition",
    "OmegaSet",
    "DPrimeSet",
    "mu_graph",
    "cell_partition",
    "lambda_elements",
    "lowest_cell",
    "w_i_closure",
    "decompose",
    "d_prime",
    "left_prefix_closure",
    "gamma_set",
    "cell_report",
    "mu_graph_dot",
    "block_dag_dot",
]

SIDES = ("LEFT", "RIGHT", "TWO_SIDED")


@dataclass
class MuGraph:
    """Preorder-generating edges.  (y, w, s, mu) in `left` means y <=_L w, witnessed by s."""

    ball: GroupBall
    left: list[tuple[int, int, int, int]]
    right: list[tuple[int, int, int, int]]
    mu_pairs: list[tuple[int, int, int]]


def mu_graph(ball: GroupBall, kl: KLTable) -> MuGraph:
    left_edges, right_edges, pairs = [], [], []
    ldesc, rdesc = ball.ldesc, ball.rdesc
    for w in range(len(ball)):
        for y, m in kl.mu_down(w):
            pairs.append((y, w, m))
            for a, b in ((y, w), (w, y)):
                extra = ldesc[a] & ~ldesc[b]
                if extra:
                    left_edges.append((a, b, (extra & -extra).bit_length() - 1, m))
                extra = rdesc[a] & ~rdesc[b]
                if extra:
                    right_edges.append((a, b, (extra & -extra).bit_length() - 1, m))
    left_edges.sort()
    right_edges.sort()
    pairs.sort()
    return MuGraph(ball, left_edges, right_edges, pairs)


@dataclass
class CellPartition:
    """SCC blocks of one preorder.

    `dag` holds (A, B) when some member of B is directly below a member of A.
    A block is CERTIFIED when it meets the region of lengths <= radius - margin.
    """

    side: str
    margin: int
    blocks: list[list[int]]
    block_of: list[int]
    certified: list[bool]
    dag: set[tuple[int, int]]

    @property
    def certified_blocks(self) -> list[int]:
        return [b for b, ok in enumerate(self.certified) if ok]

    def same_block(self, x: int, y: int) -> bool:
        return self.block_of[x] == self.block_of[y]

    def reachable_from(self, block: int) -> set[int]:
        """Blocks B with B <= block (including block itself)."""
        succ: dict[int, list[int]] = {}
        for a, b in self.dag:
            succ.setdefault(a, []).append(b)
        seen = {block}
        stack = [block]
        while stack:
            a = stack.pop()
            for b in succ.get(a, ()):
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        return seen


def cell_partition(ball: GroupBall, graph: MuGraph, side: str = "TWO_SIDED", margin: int | None = None) -> CellPartition:
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    if margin is None:
        margin = group_profile(ball.coxeter).a0 + 1
    if margin < 0:
        raise ValueError("margin must be >= 0")
    edges = []
    if side in ("LEFT", "TWO_SIDED"):
        edges += graph.left
    if side in ("RIGHT", "TWO_SIDED"):
        edges += graph.right
    n = len(ball)
    # arc w -> y for y <= w
    src = np.array([w for _, w, _, _ in edges], dtype=np.int64)
    dst = np.array([y for y, _, _, _ in edges], dtype=np.int64)
    adj = csr_matrix((np.ones(len(edges), dtype=np.int8), (src, dst)), shape=(n, n))
    _, labels = connected_components(adj, directed=True, connection="strong")
    # renumber blocks by smallest member so numbering is independent of scipy internals
    first: dict[int, int] = {}
    for x in range(n):
        first.setdefault(int(labels[x]), len(first))
    block_of = [first[int(labels[x])] for x in range(n)]
    blocks: list[list[int]] = [[] for _ in first]
    for x in range(n):
        blocks[block_of[x]].append(x)
    limit = ball.radius - margin
    certified = [any(ball.lengths[x] <= limit for x in blk) for blk in blocks]
    dag = {(block_of[w], block_of[y]) for y, w, _, _ in edges if block_of[w] != block_of[y]}
    return CellPartition(side, margin, blocks, block_of, certified, dag)


# -- the lowest two-sided cell ---------------------------------------------------------


def lambda_elements(ball: GroupBall) -> list[tuple[int, tuple[int, int] | tuple[int]]]:
    """(element, generating pair) for each longest element of maximal order.

    When every off-diagonal order is infinite (a0 = 1) these are the generators.
    """
    prof = group_profile(ball.coxeter)
    if not prof.lambda_pairs:
        return [(ball.right[0][s], (s,)) for s in range(ball.rank)]
    out = []
    for s, t in prof.lambda_pairs:
        if prof.a0 <= ball.radius:
            out.append((ball.dihedral_data(s, t).longest, (s, t)))
    return out


def _seeds_for_order(ball: GroupBall, i: int):
    out = []
    rank = ball.rank
    for s in range(rank):
        for t in range(s + 1, rank):
            if ball.coxeter.m[s][t] == i and i <= ball.radius:
                out.append((ball.dihedral_data(s, t).longest, (s, t)))
    return out


@dataclass
class OmegaSet:
    """Additive closure of a set of seed longest elements."""

    ball: GroupBall
    seeds: list[tuple[int, tuple]]
    member: list[bool]
    _witness: dict[int, tuple[int, int, int]] = field(default_factory=dict, repr=False)

    def contains(self, x: int) -> bool:
        return self.member[x]

    __contains__ = contains

    @property
    def members(self) -> list[int]:
        return [x for x, ok in enumerate(self.member) if ok]

    def __len__(self):
        return sum(self.member)

    def witness(self, x: int):
        """(z, u, y) with x = z u y additive and u a seed, or None."""
        if not self.member[x]:
            return None
        got = self._witness.get(x)
        if got is None:
            got = _decompose(self.ball, x, self.seeds)
            self._witness[x] = got
        return got


def _closure(ball: GroupBall, seeds) -> list[bool]:
    member = [False] * len(ball)
    lengths = ball.lengths
    for u, _ in seeds:
        member[u] = True
    # ids are sorted by length, so one ascending pass sees every predecessor first
    for x in range(len(ball)):
        if not member[x]:
            continue
        lx = lengths[x]
        for s in range(ball.rank):
            for y in (ball.left[x][s], ball.right[x][s]):
                if y != ABSENT and lengths[y] > lx:
                    member[y] = True
    return member


def lowest_cell(ball: GroupBall) -> OmegaSet:
    seeds = lambda_elements(ball)
    if not seeds:
        prof = group_profile(ball.coxeter)
        raise EmptyLambda(f"no longest element of length a0={prof.a0} fits in radius {ball.radius}")
    return OmegaSet(ball, seeds, _closure(ball, seeds))


def w_i_closure(ball: GroupBall, i: int) -> OmegaSet:
    """Elements z u y (additive) with u the longest element of a rank-2 parabolic of order i."""
    if not any(ball.coxeter.m[s][t] == i for s in range(ball.rank) for t in range(s + 1, ball.rank)):
        raise NoSuchParabolic(f"no pair of generators has order {i}")
    seeds = _seeds_for_order(ball, i)
    return OmegaSet(ball, seeds, _closure(ball, seeds))


def left_prefix_closure(ball: GroupBall, x: int) -> dict[int, int]:
    """{z^{-1} x : x = z (z^{-1} x) with lengths adding} mapped to z."""
    found = {x: 0}
    frontier = [x]
    while frontier:
        nxt = []
        for a in sorted(frontier):
            z = found[a]
            mask = ball.ldesc[a]
            for s in range(ball.rank):
                if mask >> s & 1:
                    b = ball.left[a][s]
                    zs = ball.right[z][s]
                    if b not in found or zs < found[b]:
                        if b not in found:
                            nxt.append(b)
                        found[b] = zs
        frontier = nxt
    return found


def _decompose(ball: GroupBall, x: int, seeds):
    # u is a left prefix of x' iff its generating pair lies in L(x')
    best = None
    for rest, z in left_prefix_closure(ball, x).items():
        for u, pair in seeds:
            mask = 0
            for s in pair:
                mask |= 1 << s
            if ball.ldesc[rest] & mask == mask and ball.lengths[rest] >= ball.lengths[u]:
                y = ball.multiply(u, rest)
                if ball.lengths[y] != ball.lengths[rest] - ball.lengths[u]:
                    continue
                key = (ball.lengths[z], z, u, y)
                if best is None or key < best:
                    best = key
    if best is None:
        return None
    return best[1], best[2], best[3]


def decompose(ball: GroupBall, x: int, omega: OmegaSet | None = None):
    """Deterministic witness (z, u, y): minimal l(z), then ShortLex z, u, y; None if x is not in Omega."""
    seeds = omega.seeds if omega is not None else lambda_elements(ball)
    return _decompose(ball, x, seeds)


# -- D', distinguished involutions, Gamma_x ---------------------------------------------------


def gamma_set(ball: GroupBall, x: int) -> list[int]:
    """{z x : l(zx) = l(z) + l(x)} inside the ball."""
    found = {x}
    frontier = [x]
    lengths = ball.lengths
    while frontier:
        nxt = []
        for a in frontier:
            for s in range(ball.rank):
                b = ball.left[a][s]
                if b != ABSENT and lengths[b] > lengths[a] and b not in found:
                    found.add(b)
                    nxt.append(b)
        frontier = nxt
    return sorted(found)


@dataclass
class DPrimeMember:
    x: int
    w: int
    y: int
    d: int | None
    d_word: tuple[int, ...]


@dataclass
class DPrimeSet:
    members: list[DPrimeMember]
    undecided: list[int]

    @property
    def elements(self) -> list[int]:
        return [m.x for m in self.members]


def d_prime(ball: GroupBall, omega: OmegaSet | None = None) -> DPrimeSet:
    """x = w y (additive, w in Lambda) such that s x is outside Omega for every s in L(w)."""
    if omega is None:
        omega = lowest_cell(ball)
    members, undecided = [], []
    for x in range(len(ball)):
        if not omega.member[x]:
            continue
        chosen = None
        pending = False
        for u, pair in omega.seeds:
            mask = 0
            for s in pair:
                mask |= 1 << s
            if ball.ldesc[x] & mask != mask:
                continue
            y = ball.multiply(u, x)
            if ball.lengths[y] != ball.lengths[x] - ball.lengths[u]:
                continue
            ok = True
            for s in ball.descents(u, "left"):
                sx = ball.left[x][s]
                if sx == ABSENT:
                    pending = True
                    ok = False
                    break
                if omega.member[sx]:
                    ok = False
                    break
            if ok:
                chosen = (u, y)
                break
        if chosen is not None:
            u, y = chosen
            yinv = ball.inverse(y)
            d_word = ball.words[yinv] + ball.words[u] + ball.words[y]
            try:
                d = ball.multiply(ball.multiply(yinv, u), y)
            except Exception:
                d = None
            members.append(DPrimeMember(x, u, y, d, d_word))
        elif pending:
            undecided.append(x)
    return DPrimeSet(members, undecided)


# -- exports ----------------------------------------------------------------------------------


def cell_report(ball: GroupBall, left: CellPartition, two: CellPartition, omega: OmegaSet) -> list[dict]:
    limit = ball.radius - two.margin
    out = []
    fw = ball.format_word
    for x in range(len(ball)):
        wit = omega.witness(x)
        out.append(
            {
                "element": fw(x),
                "length": ball.lengths[x],
                "left_block": left.block_of[x],
                "two_sided_block": two.block_of[x],
                "certified": ball.lengths[x] <= limit,
                "in_omega": omega.member[x],
                "witness": None if wit is None else [fw(a) for a in wit],
            }
        )
    return out


def cell_report_jsonl(records) -> str:
    return "".join(json.dumps(r, separators=(",", ":")) + "\n" for r in records)


def mu_graph_dot(graph: MuGraph, side: str = "LEFT") -> str:
    ball = graph.ball
    edges = graph.left if side == "LEFT" else graph.right
    gens = ball.coxeter.gens
    lines = ["digraph mugraph {"]
    for x in range(len(ball)):
        lines.append(f'  n{x} [label="{ball.format_word(x)}"];')
    for y, w, s, m in edges:
        lines.append(f'  n{w} -> n{y} [label="{gens[s]}:{m}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def block_dag_dot(ball: GroupBall, part: CellPartition) -> str:
    lines = [f"digraph blocks_{part.side.lower()} {{"]
    for b, blk in enumerate(part.blocks):
        rep = ball.format_word(blk[0])
        status = "CERTIFIED" if part.certified[b] else "PARTIAL"
        lines.append(f'  b{b} [label="{b}: {rep} (+{len(blk) - 1}) {status}"];')
    for a, b in sorted(part.dag):
        lines.append(f"  b{a} -> b{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
