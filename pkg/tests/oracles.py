"""Independent brute-force oracles used by the tests.

Counting and algebra here avoid the package's code paths; only the data
constructors are shared.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, permutations, product

from homauto.automata import MWA
from homauto.graphcore import Graph
from homauto.ratlinalg import QMatrix


def brute_hom(F: Graph, G: Graph, pins=None) -> int:
    """Count maps V(F) -> V(G) preserving edges and colours by full enumeration."""
    pins = pins or {}
    total = 0
    for img in product(range(G.n), repeat=F.n):
        if any(img[v] != x for v, x in pins.items()):
            continue
        if F.colours is not None and any(F.colours[v] != G.colours[img[v]] for v in range(F.n)):
            continue
        if all((img[u], img[v]) in G.edges for u, v in F.edges):
            total += 1
    return total


def enum_hom(F: Graph, G: Graph) -> int:
    """Count homomorphisms by extending partial maps one vertex at a time.

    Every homomorphism is visited individually; a partial map is dropped as
    soon as an edge between already-mapped vertices is violated.
    """
    order, seen = [], set()
    for s in range(F.n):
        if s in seen:
            continue
        seen.add(s)
        queue = [s]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for u, w in F.edges:
                for a, b in ((u, w), (w, u)):
                    if a == v and b not in seen:
                        seen.add(b)
                        queue.append(b)
    pos = {v: i for i, v in enumerate(order)}
    # edges to check when the later endpoint is placed
    checks = [[] for _ in order]
    for u, w in F.edges:
        checks[max(pos[u], pos[w])].append((u, w))
    img = {}

    def go(i):
        if i == len(order):
            return 1
        v, total = order[i], 0
        for x in range(G.n):
            if F.colours is not None and F.colours[v] != G.colours[x]:
                continue
            img[v] = x
            if all((img[u], img[w]) in G.edges for u, w in checks[i]):
                total += go(i + 1)
        del img[v]
        return total

    return go(0)


def brute_iso(G: Graph, H: Graph) -> bool:
    if (G.n, G.directed, len(G.edges)) != (H.n, H.directed, len(H.edges)):
        return False
    return any({(p[u], p[v]) for u, v in G.edges} == H.edges for p in permutations(range(G.n)))


# -- polynomials as coefficient lists, lowest degree first ----------------

def _padd(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return [Fraction(x) for x in p]


def charpoly_cofactor(rows) -> list[Fraction]:
    """det(xI - A) by Laplace expansion along the first row."""
    n = len(rows)
    M = [[[(-Fraction(rows[i][j]))] + ([1] if i == j else []) for j in range(n)] for i in range(n)]

    def det(idx_rows, idx_cols):
        if not idx_rows:
            return [1]
        r = idx_rows[0]
        acc = []
        for t, c in enumerate(idx_cols):
            minor = det(idx_rows[1:], idx_cols[:t] + idx_cols[t + 1:])
            term = _pmul(M[r][c], minor)
            if t % 2:
                term = [-x for x in term]
            acc = _padd(acc, term)
        return acc

    return _trim(det(list(range(n)), list(range(n))))


def mat_mul(A, B):
    return [[sum(A[i][t] * B[t][j] for t in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def trace_power(rows, k: int):
    n = len(rows)
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for _ in range(k):
        P = mat_mul(P, rows)
    return sum(P[i][i] for i in range(n))


def eval_word_dense(initial, mats, final, word) -> Fraction:
    """alpha M(w1) ... M(wt) eta with plain nested lists."""
    v = [list(map(Fraction, initial))]
    for a in word:
        v = mat_mul(v, mats[a])
    return sum(v[0][i] * Fraction(final[i]) for i in range(len(final)))


# -- random generators ------------------------------------------------------

def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    return Graph(n, [e for e in combinations(range(n), 2) if rng.random() < p])


def random_int_matrix(rng: random.Random, n: int, lo: int, hi: int) -> list[list[int]]:
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]


def connected_graphs_up_to(n_max: int) -> list[Graph]:
    """All connected graphs on 1..n_max vertices up to isomorphism (brute force)."""
    out = []
    for n in range(1, n_max + 1):
        seen = []
        pairs = list(combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            G = Graph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])
            if G.is_connected() and not any(brute_iso(G, H) for H in seen):
                seen.append(G)
        out += seen
    return out


def random_mwa_data(rng: random.Random, states: int, alphabet, lo: int = -2, hi: int = 2):
    """Raw (initial, mats, final) lists for a random integer MWA."""
    init = [rng.randint(lo, hi) for _ in range(states)]
    mats = {a: random_int_matrix(rng, states, lo, hi) for a in alphabet}
    final = [rng.randint(lo, hi) for _ in range(states)]
    return init, mats, final


def build_mwa(init, mats, final):
    s = len(init)
    return MWA(s, tuple(mats), {a: QMatrix(s, s, [x for r in m for x in r]) for a, m in mats.items()},
               QMatrix(1, s, init), QMatrix(s, 1, final))


def normalised_circuits(max_gates: int, max_height: int):
    """Every normalised circuit with at most ``max_gates`` gates and output height <= ``max_height``.

    Built level by level; gates inside a level are a multiset of child pairs
    (unordered, repetition allowed), so circuits differing only by reordering
    are produced once.  Yields (labels, children, output) triples.
    """
    def level_sizes(h):
        def rec(level, remaining):
            if level == h:
                if remaining >= 1:
                    yield (1,)
                return
            for n in range(1, remaining):
                for tail in rec(level + 1, remaining - n):
                    yield (n,) + tail
        yield from rec(0, max_gates)

    for h in range(0, max_height + 1, 2):
        for sizes in level_sizes(h):
            yield from _circuits_with_sizes(sizes)


def _circuits_with_sizes(sizes):
    cwr = combinations_with_replacement
    h = len(sizes) - 1
    for leaves in cwr("01", sizes[0]):
        levels = [[(lab, ()) for lab in leaves]]

        def extend(levels):
            j = len(levels)
            if j > h:
                yield levels
                return
            prev = len(levels[-1])
            pairs = list(cwr(range(prev), 2))
            op = "*" if j % 2 else "+"
            for gates in cwr(pairs, sizes[j]):
                used = {c for pair in gates for c in pair}
                if len(used) != prev:
                    continue
                yield from extend(levels + [[(op, pair) for pair in gates]])

        for lv in extend(levels):
            labels, children, offset = [], [], 0
            for j, level in enumerate(lv):
                base = offset - (len(lv[j - 1]) if j else 0)
                for lab, pair in level:
                    labels.append(lab)
                    children.append(tuple(base + c for c in pair))
                offset += len(level)
            yield tuple(labels), tuple(children), len(labels) - 1
