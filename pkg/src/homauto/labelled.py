"""Labelled and bilabelled graphs, the generators 1, A^ij, J^i, and hom tensors.

Letters are strings: ``"A12"`` (edge between labels 1 and 2; an arc 1 -> 2 in
the directed alphabet), ``"J1"`` (move label 1 to a fresh vertex).  Labels in
letter names are 1-based.  Words are sequences of letters and decode as
D1 . D2 . ... . Dl . 1, i.e. the last letter acts on 1 first.  Trees are
nested tuples ``(symbol, child, ...)`` with leaf ``("1",)`` and binary
``("glue", t1, t2)``.
"""
from __future__ import annotations

import re
from itertools import permutations, product
from typing import Iterable, Sequence, Union

from .graphcore import Graph, hom_count_pinned
from .ratlinalg import QMatrix

Term = tuple  # (symbol, *children)

ONE = "1"
GLUE = "glue"
_LETTER = re.compile(r"^(A)(\d)(\d)$|^(J)(\d)$")


class LabelledGraph:
    __slots__ = ("graph", "labels")

    def __init__(self, graph: Graph, labels: Sequence[int]):
        labels = tuple(labels)
        if len(labels) < 1:
            raise ValueError("need k >= 1 labels")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be distinct vertices")
        if any(not 0 <= v < graph.n for v in labels):
            raise ValueError("label vertex out of range")
        self.graph = graph
        self.labels = labels

    @property
    def k(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"LabelledGraph({self.graph!r}, labels={self.labels})"


class BilabelledGraph:
    __slots__ = ("graph", "in_labels", "out_labels")

    def __init__(self, graph: Graph, in_labels: Sequence[int], out_labels: Sequence[int]):
        in_labels, out_labels = tuple(in_labels), tuple(out_labels)
        if len(in_labels) != len(out_labels) or not in_labels:
            raise ValueError("in and out label tuples must have the same length k >= 1")
        for t in (in_labels, out_labels):
            if len(set(t)) != len(t):
                raise ValueError("label tuples must be internally distinct")
            if any(not 0 <= v < graph.n for v in t):
                raise ValueError("label vertex out of range")
        self.graph = graph
        self.in_labels = in_labels
        self.out_labels = out_labels

    @property
    def k(self) -> int:
        return len(self.in_labels)

    def __repr__(self) -> str:
        return f"BilabelledGraph({self.graph!r}, in={self.in_labels}, out={self.out_labels})"


class HomTensor:
    """Dense integer tensor indexed by V(G)^k (row-major), or a base^k x base^k matrix."""

    __slots__ = ("k", "base", "entries", "bilabelled")

    def __init__(self, k: int, base: int, entries: Sequence[int], bilabelled: bool = False):
        size = base ** (2 * k if bilabelled else k)
        entries = tuple(entries)
        if len(entries) != size:
            raise ValueError(f"expected {size} entries, got {len(entries)}")
        self.k, self.base, self.entries, self.bilabelled = k, base, entries, bilabelled

    def as_matrix(self) -> QMatrix:
        if self.bilabelled:
            m = self.base ** self.k
            return QMatrix(m, m, self.entries)
        return QMatrix(1, len(self.entries), self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomTensor):
            return NotImplemented
        return (self.k, self.base, self.entries, self.bilabelled) == \
            (other.k, other.base, other.entries, other.bilabelled)

    def __repr__(self) -> str:
        return f"HomTensor(k={self.k}, base={self.base}, bilabelled={self.bilabelled})"


# ---------------------------------------------------------------------------
# generators

def alphabet(k: int, directed: bool = False) -> list[str]:
    """B(k) as letter strings: A letters (ordered pairs when directed) then J letters."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > 9:
        raise ValueError("letter names support k <= 9")
    if directed:
        pairs = [(i, j) for i in range(1, k + 1) for j in range(1, k + 1) if i != j]
    else:
        pairs = [(i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)]
    return [f"A{i}{j}" for i, j in pairs] + [f"J{i}" for i in range(1, k + 1)]


def parse_letter(name: str, k: int, directed: bool = False) -> tuple[str, int, int]:
    """("A", i, j) or ("J", i, 0) with 0-based indices."""
    m = _LETTER.match(name)
    if not m:
        raise ValueError(f"unknown letter {name!r}")
    if m.group(1):
        i, j = int(m.group(2)) - 1, int(m.group(3)) - 1
        if not (0 <= i < k and 0 <= j < k) or i == j or (not directed and i > j):
            raise ValueError(f"letter {name!r} not in B({k})")
        return ("A", i, j)
    i = int(m.group(5)) - 1
    if not 0 <= i < k:
        raise ValueError(f"letter {name!r} not in B({k})")
    return ("J", i, 0)


def one(k: int, directed: bool = False) -> LabelledGraph:
    if k < 1:
        raise ValueError("k must be >= 1")
    return LabelledGraph(Graph(k, (), directed), range(k))


def letter_graph(name: str, k: int, directed: bool = False) -> BilabelledGraph:
    kind, i, j = parse_letter(name, k, directed)
    if kind == "A":
        return BilabelledGraph(Graph(k, [(i, j)], directed), range(k), range(k))
    out = list(range(k))
    out[i] = k
    return BilabelledGraph(Graph(k + 1, (), directed), range(k), out)


def generators(k: int, directed: bool = False) -> dict:
    """{"one": 1, "A": {(i, j): A^ij}, "J": {i: J^i}} with 1-based keys."""
    if k < 1:
        raise ValueError("k must be >= 1")
    gens = {"one": one(k, directed), "A": {}, "J": {}}
    for name in alphabet(k, directed):
        kind, i, j = parse_letter(name, k, directed)
        if kind == "A":
            gens["A"][(i + 1, j + 1)] = letter_graph(name, k, directed)
        else:
            gens["J"][i + 1] = letter_graph(name, k, directed)
    return gens


# ---------------------------------------------------------------------------
# operations

def _merge(base: Graph, other: Graph, ident: dict[int, int]) -> tuple[Graph, dict[int, int]]:
    """Disjoint union of base and other with other's vertex v identified to ident[v]."""
    if base.directed != other.directed:
        raise ValueError("directedness mismatch")
    m = dict(ident)
    nxt = base.n
    for v in range(other.n):
        if v not in m:
            m[v] = nxt
            nxt += 1
    es = list(base.edges) + [(m[u], m[v]) for u, v in other.edges]
    return Graph(nxt, es, base.directed), m


def glue(F: LabelledGraph, F2: LabelledGraph) -> LabelledGraph:
    """Disjoint union with the i-th labels merged."""
    if F.k != F2.k:
        raise ValueError("k mismatch")
    g, _ = _merge(F.graph, F2.graph, {F2.labels[i]: F.labels[i] for i in range(F.k)})
    return LabelledGraph(g, F.labels)


def series(K: BilabelledGraph, X: Union[BilabelledGraph, LabelledGraph]):
    """K . X: identify K's out-labels with X's (in-)labels."""
    if K.k != X.k:
        raise ValueError("k mismatch")
    x_in = X.in_labels if isinstance(X, BilabelledGraph) else X.labels
    g, m = _merge(K.graph, X.graph, {x_in[i]: K.out_labels[i] for i in range(K.k)})
    if isinstance(X, BilabelledGraph):
        return BilabelledGraph(g, K.in_labels, [m[v] for v in X.out_labels])
    return LabelledGraph(g, K.in_labels)


def soe(F: Union[LabelledGraph, BilabelledGraph]) -> Graph:
    return F.graph


def soe_value(T: HomTensor) -> int:
    return sum(T.entries)


def _pinned_tensor(graph: Graph, labels: Sequence[int], G: Graph) -> list[int]:
    out = []
    for xs in product(range(G.n), repeat=len(labels)):
        pins = {}
        ok = True
        for v, x in zip(labels, xs):
            if pins.get(v, x) != x:
                ok = False
                break
            pins[v] = x
        out.append(hom_count_pinned(graph, G, pins) if ok else 0)
    return out


def hom_tensor(F: Union[LabelledGraph, BilabelledGraph], G: Graph) -> HomTensor:
    """Pinned hom counts for every image of the labels, by brute force."""
    if G.n < 1:
        raise ValueError("target graph must be non-empty")
    if isinstance(F, BilabelledGraph):
        labels = F.in_labels + F.out_labels
        return HomTensor(F.k, G.n, _pinned_tensor(F.graph, labels, G), bilabelled=True)
    return HomTensor(F.k, G.n, _pinned_tensor(F.graph, F.labels, G))


def generator_matrix(name: str, G: Graph, k: int) -> QMatrix:
    """L_G for a generator letter, built from the closed-form description.

    A^ij: [x = y][x_i x_j in E(G)];  J^i: [x_j = y_j for all j != i].
    """
    kind, i, j = parse_letter(name, k, G.directed)
    n = G.n
    size = n ** k
    items = {}
    strides = [n ** (k - 1 - t) for t in range(k)]
    for idx, xs in enumerate(product(range(n), repeat=k)):
        if kind == "A":
            if (xs[i], xs[j]) in G.edges:
                items[(idx, idx)] = 1
        else:
            base = idx - xs[i] * strides[i]
            for y in range(n):
                items[(idx, base + y * strides[i])] = 1
    return QMatrix.from_sparse(size, size, items)


# ---------------------------------------------------------------------------
# words and trees

def parse_word(word: Union[str, Iterable[str]]) -> tuple[str, ...]:
    """Accept "A12 J1 A12", "A12,J1" or an iterable of letters; "" is the empty word."""
    if isinstance(word, str):
        return tuple(t for t in re.split(r"[\s,]+", word.strip()) if t)
    return tuple(word)


def format_word(word: Sequence[str]) -> str:
    return " ".join(word)


def pw_decode(word, k: int, directed: bool = False) -> LabelledGraph:
    """D1 . D2 . ... . Dl . 1 for the word D1 ... Dl."""
    X = one(k, directed)
    for name in reversed(parse_word(word)):
        X = series(letter_graph(name, k, directed), X)
    return X


def parse_term(text: str) -> Term:
    """Parse "A12(glue(J1(1),A12(1)))" into nested tuples."""
    toks = re.findall(r"[^\s(),]+|[(),]", text)
    pos = 0

    def expr() -> Term:
        nonlocal pos
        if pos >= len(toks) or toks[pos] in "(),":
            raise ValueError(f"malformed term {text!r}")
        sym = toks[pos]
        pos += 1
        if pos < len(toks) and toks[pos] == "(":
            pos += 1
            kids = [expr()]
            while pos < len(toks) and toks[pos] == ",":
                pos += 1
                kids.append(expr())
            if pos >= len(toks) or toks[pos] != ")":
                raise ValueError(f"malformed term {text!r}")
            pos += 1
            return (sym, *kids)
        return (sym,)

    t = expr()
    if pos != len(toks):
        raise ValueError(f"trailing input in term {text!r}")
    return t


def format_term(t: Term) -> str:
    if len(t) == 1:
        return t[0]
    return f"{t[0]}({','.join(format_term(c) for c in t[1:])})"


def term_size(t: Term) -> int:
    return 1 + sum(term_size(c) for c in t[1:])


def tw_decode(tree: Union[Term, str], k: int, directed: bool = False) -> LabelledGraph:
    """Leaf 1 -> 1, unary letter L(t) -> L . t, glue(t1, t2) -> t1 glued with t2."""
    if isinstance(tree, str):
        tree = parse_term(tree)
    sym, kids = tree[0], tree[1:]
    if sym == ONE:
        if kids:
            raise ValueError("leaf 1 takes no arguments")
        return one(k, directed)
    if sym == GLUE:
        if len(kids) != 2:
            raise ValueError("glue takes two arguments")
        return glue(tw_decode(kids[0], k, directed), tw_decode(kids[1], k, directed))
    if len(kids) != 1:
        raise ValueError(f"letter {sym!r} takes one argument")
    return series(letter_graph(sym, k, directed), tw_decode(kids[0], k, directed))


def apply_letter(X: LabelledGraph, name: str, directed: bool = False) -> LabelledGraph:
    """X acted on by a letter: A adds an edge between labels, J moves a label to a fresh vertex."""
    return series(letter_graph(name, X.k, directed), X)


def automorphism_orbits(G: Graph, k: int) -> list[int]:
    """Orbit index of every tuple in V(G)^k (row-major) under Aut(G); brute force, n <= 8."""
    if G.n > 8:
        raise ValueError("orbit computation limited to 8 vertices")
    auts = []
    for p in permutations(range(G.n)):
        if G.colours is not None and any(G.colours[v] != G.colours[p[v]] for v in range(G.n)):
            continue
        if all((p[u], p[v]) in G.edges for u, v in G.edges):
            auts.append(p)
    tuples = list(product(range(G.n), repeat=k))
    index = {t: i for i, t in enumerate(tuples)}
    orbit = [-1] * len(tuples)
    count = 0
    for t in tuples:
        if orbit[index[t]] >= 0:
            continue
        for p in auts:
            orbit[index[tuple(p[x] for x in t)]] = count
        count += 1
    return orbit
