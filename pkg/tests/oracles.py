"""Independent reference implementations used only by the tests.

Nothing here imports the package's arithmetic: group elements are identified by
floating-point reflection matrices, Bruhat order comes from the subword
property, Kazhdan-Lusztig polynomials from the classical q-recursion and Hecke
products from the unnormalized T basis.
"""

from __future__ import annotations

import math

import numpy as np


def _bilinear(m_rows):
    n = len(m_rows)
    B = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            m = m_rows[i][j]
            B[i, j] = -1.0 if m == math.inf else -math.cos(math.pi / m)
    return B


class BruteGroup:
    """Words up to length `radius`, identified by rounded reflection matrices."""

    def __init__(self, m_rows, radius):
        self.rank = n = len(m_rows)
        self.radius = radius
        B = _bilinear(m_rows)
        self.mats = []
        for i in range(n):
            S = np.eye(n)
            S[i, :] -= 2 * B[i, :]
            self.mats.append(S)
        ident = np.eye(n)
        self.words = [()]
        self.length = [0]
        self._mat = [ident]
        self._index = {self._key(ident): 0}
        level = [0]
        for _ in range(radius):
            nxt = []
            for w in level:
                for s in range(n):
                    M = self._mat[w] @ self.mats[s]
                    k = self._key(M)
                    if k not in self._index:
                        self._index[k] = len(self.words)
                        self.words.append(self.words[w] + (s,))
                        self.length.append(len(self.words[w]) + 1)
                        self._mat.append(M)
                        nxt.append(self._index[k])
            level = nxt

    @staticmethod
    def _key(M):
        return tuple(np.round(M, 6).ravel().tolist())

    def __len__(self):
        return len(self.words)

    def lookup(self, M):
        return self._index.get(self._key(M))

    def from_word(self, word):
        M = np.eye(self.rank)
        for s in word:
            M = M @ self.mats[s]
        return self.lookup(M)

    def mul(self, x, y):
        return self.lookup(self._mat[x] @ self._mat[y])

    def lmul_gen(self, s, x):
        return self.lookup(self.mats[s] @ self._mat[x])

    def rmul_gen(self, x, s):
        return self.lookup(self._mat[x] @ self.mats[s])

    def left_descents(self, x):
        out = set()
        for s in range(self.rank):
            y = self.lmul_gen(s, x)
            if y is not None and self.length[y] < self.length[x]:
                out.add(s)
        return out

    def below(self, w):
        """{y <= w} via subwords of one reduced word."""
        reach = {0}
        for s in self.words[w]:
            reach |= {self.rmul_gen(y, s) for y in reach}
        return reach

    def reduced_words(self, w):
        """All reduced words of w, by brute force over letter sequences."""
        out = []

        def walk(prefix, cur):
            if len(prefix) == self.length[w]:
                if cur == w:
                    out.append(tuple(prefix))
                return
            for s in range(self.rank):
                nxt = self.rmul_gen(cur, s)
                if nxt is not None and self.length[nxt] == len(prefix) + 1:
                    walk(prefix + [s], nxt)

        walk([], 0)
        return sorted(out)


# -- q-polynomials as coefficient lists ----------------------------------------------------


def qadd(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


def qshift(a, k):
    return [0] * k + list(a) if a else []


def qscale(a, c):
    return [c * x for x in a] if c else []


def qmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def kl_polys(G: BruteGroup):
    """P[(x, w)] as q-coefficient lists, by the original left-descent recursion."""
    P = {}
    mu = {}
    below = {w: G.below(w) for w in range(len(G))}
    for w in sorted(range(len(G)), key=lambda u: G.length[u]):
        if w == 0:
            P[0, 0] = [1]
            continue
        s = min(G.left_descents(w))
        v = G.lmul_gen(s, w)
        for x in below[w]:
            sx = G.lmul_gen(s, x)
            if sx is not None and G.length[sx] < G.length[x]:
                term = qadd(P.get((sx, v), []), qshift(P.get((x, v), []), 1))
            else:
                term = qadd(qshift(P.get((sx, v), []) if sx is not None else [], 1), P.get((x, v), []))
            for z in below[v]:
                m = mu.get((z, v), 0)
                if not m or z == v or s not in G.left_descents(z):
                    continue
                if x not in below[z]:
                    continue
                k = (G.length[w] - G.length[z]) // 2
                term = qadd(term, qscale(qshift(P[x, z], k), -m))
            P[x, w] = term
            d = G.length[w] - G.length[x]
            if d % 2 == 1 and (d - 1) // 2 < len(term):
                mu[x, w] = term[(d - 1) // 2]
    return P, mu


def t_product(G: BruteGroup, x, y):
    """T_x T_y in the unnormalized basis: {z: q-coefficient list}."""
    vec = {x: [1]}
    for s in G.words[y]:
        out = {}
        for w, c in vec.items():
            ws = G.rmul_gen(w, s)
            if G.length[ws] > G.length[w]:
                out[ws] = qadd(out.get(ws, []), c)
            else:
                out[ws] = qadd(out.get(ws, []), qshift(c, 1))
                out[w] = qadd(out.get(w, []), qadd(qshift(c, 1), qscale(c, -1)))
        vec = {k: v for k, v in out.items() if v}
    return vec


def normalized_product(G: BruteGroup, x, y):
    """T~_x T~_y as {z: {v-exponent: coeff}}, from the unnormalized product."""
    out = {}
    shift = G.length[x] + G.length[y]
    for z, c in t_product(G, x, y).items():
        off = G.length[z] - shift
        out[z] = {2 * i + off: a for i, a in enumerate(c) if a}
    return out


def dihedral_elements(m):
    """I2(m) as (length, first letter) classes: alternating words in s=0, t=1."""
    out = [()]
    for k in range(1, m):
        out.append(tuple((0, 1)[i % 2] for i in range(k)))
        out.append(tuple((1, 0)[i % 2] for i in range(k)))
    out.append(tuple((0, 1)[i % 2] for i in range(m)))
    return out
