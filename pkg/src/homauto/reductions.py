"""Gadget constructions linking circuits, matrices, coloured digraphs and graph classes."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .graphcore import (
    Graph, ModeError, WeightedDigraph, cfi, complement, hom_exists, make_complete,
    make_cycle, make_kneser, path_decomposition,
)
from .ratlinalg import QMatrix, QPoly, companion

# ---------------------------------------------------------------------------
# arithmetic circuits

LEAVES = ("0", "1")
OPERATIONS = ("+", "*", "-")
_ALIASES = {"×": "*", "x": "*"}


def _canon_label(label: str) -> str:
    label = str(label)
    return _ALIASES.get(label, label)


@dataclass(frozen=True)
class Circuit:
    """Variable-free arithmetic circuit as a DAG of gates.

    ``children[g]`` is an ordered pair for internal gates (both entries may be
    equal) and empty for leaves.  Multiplication is labelled ``*``.
    """

    labels: tuple[str, ...]
    children: tuple[tuple[int, ...], ...]
    output: int
    order: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(_canon_label(x) for x in self.labels)
        children = tuple(tuple(int(c) for c in cs) for cs in self.children)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "children", children)
        m = len(labels)
        if len(children) != m:
            raise ValueError("one child list per gate required")
        if not 0 <= self.output < m:
            raise ValueError("output gate out of range")
        used = [0] * m
        for g, (lab, cs) in enumerate(zip(labels, children)):
            if lab in LEAVES:
                if cs:
                    raise ValueError(f"leaf {g} has children")
            elif lab in OPERATIONS:
                if len(cs) != 2:
                    raise ValueError(f"gate {g} needs exactly two children")
            else:
                raise ValueError(f"unknown gate label {lab!r}")
            for c in cs:
                if not 0 <= c < m:
                    raise ValueError(f"child {c} of gate {g} out of range")
                used[c] += 1
        sinks = [g for g in range(m) if not used[g]]
        if sinks != [self.output]:
            raise ValueError("circuit must have exactly one output gate, the declared one")
        # Kahn's algorithm, children before parents
        pending = [len(set(cs)) for cs in children]
        parents: list[set[int]] = [set() for _ in range(m)]
        for g, cs in enumerate(children):
            for c in cs:
                parents[c].add(g)
        ready = [g for g in range(m) if pending[g] == 0]
        order = []
        while ready:
            g = ready.pop()
            order.append(g)
            for p in sorted(parents[g]):
                pending[p] -= 1
                if pending[p] == 0:
                    ready.append(p)
        if len(order) != m:
            raise ValueError("circuit contains a cycle")
        object.__setattr__(self, "order", tuple(order))

    @property
    def size(self) -> int:
        return len(self.labels)

    def internal(self) -> list[int]:
        return [g for g, lab in enumerate(self.labels) if lab not in LEAVES]

    def to_json(self) -> dict:
        return {"gates": [{"label": lab, "children": list(cs)} for lab, cs in zip(self.labels, self.children)],
                "output": self.output}

    @classmethod
    def from_json(cls, d: Mapping) -> "Circuit":
        try:
            gates = d["gates"]
            labels = [g["label"] for g in gates]
            children = [g.get("children", []) for g in gates]
            return cls(tuple(labels), tuple(tuple(c) for c in children), int(d["output"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed circuit JSON: {exc}") from exc


def eval_gates(C: Circuit) -> list[int]:
    val = [0] * C.size
    for g in C.order:
        lab = C.labels[g]
        if lab in LEAVES:
            val[g] = int(lab)
            continue
        a, b = (val[c] for c in C.children[g])
        val[g] = a + b if lab == "+" else a * b if lab == "*" else a - b
    return val


def eval_circuit(C: Circuit) -> int:
    return eval_gates(C)[C.output]


def gate_heights(C: Circuit) -> list[int]:
    """Length of the longest path from each gate down to a leaf."""
    h = [0] * C.size
    for g in C.order:
        if C.children[g]:
            h[g] = 1 + max(h[c] for c in C.children[g])
    return h


def is_normalised(C: Circuit) -> bool:
    h = gate_heights(C)
    for g, lab in enumerate(C.labels):
        if lab == "-":
            return False
        if lab in LEAVES:
            continue
        if any(h[c] != h[g] - 1 for c in C.children[g]):
            return False
        if (lab == "+") != (h[g] % 2 == 0):
            return False
    return h[C.output] % 2 == 0


def circuit_height(C: Circuit) -> int:
    return gate_heights(C)[C.output]


class _CircuitBuilder:
    def __init__(self):
        self.labels: list[str] = []
        self.children: list[tuple[int, ...]] = []

    def add(self, label: str, children: tuple[int, ...] = ()) -> int:
        self.labels.append(label)
        self.children.append(children)
        return len(self.labels) - 1

    def build(self, output: int) -> Circuit:
        return Circuit(tuple(self.labels), tuple(self.children), output)


def normalise_circuit(C: Circuit, min_height: int = 0) -> Circuit:
    """Value-preserving normalisation by height padding.

    A gate needed at a height above its natural one is lifted through
    ``x * 1`` at odd and ``x + 0`` at even heights, where the padding
    constants are themselves normalised subcircuits.  The output ends at an
    even height of at least ``min_height``.
    """
    if "-" in C.labels:
        raise ValueError("subtraction gates must be eliminated before normalisation")
    level = [0] * C.size
    for g in C.order:
        if C.children[g]:
            m = 1 + max(level[c] for c in C.children[g])
            if (m % 2 == 0) != (C.labels[g] == "+"):
                m += 1
            level[g] = m
    top = max(level[C.output], min_height)
    top += top % 2
    B = _CircuitBuilder()
    memo: dict = {}

    def const(val: int, H: int) -> int:
        key = ("c", val, H)
        if key not in memo:
            if H == 0:
                memo[key] = B.add(str(val))
            elif H % 2:
                memo[key] = B.add("*", (const(val, H - 1), const(1, H - 1)))
            else:
                memo[key] = B.add("+", (const(val, H - 1), const(0, H - 1)))
        return memo[key]

    def node(g: int, H: int) -> int:
        key = (g, H)
        if key in memo:
            return memo[key]
        lab = C.labels[g]
        if H == level[g]:
            if lab in LEAVES:
                out = B.add(lab)
            else:
                a, b = C.children[g]
                out = B.add(lab, (node(a, H - 1), node(b, H - 1)))
        elif H % 2:
            out = B.add("*", (node(g, H - 1), const(1, H - 1)))
        else:
            out = B.add("+", (node(g, H - 1), const(0, H - 1)))
        memo[key] = out
        return out

    return B.build(node(C.output, top))


def circuit_for_value(value: int, min_height: int = 0) -> Circuit:
    """A normalised circuit computing ``value`` with output height at least ``min_height``.

    Built by doubling along the binary expansion, then normalised; the actual
    height is the smallest even height the construction fits into.
    """
    if value < 0:
        raise ValueError("only non-negative values are representable without subtraction")
    B = _CircuitBuilder()
    if value == 0:
        out = B.add("0")
    else:
        one = B.add("1")
        out = one
        for bit in bin(value)[3:]:
            out = B.add("+", (out, out))
            if bit == "1":
                out = B.add("+", (out, one))
    return normalise_circuit(B.build(out), min_height)


# ---------------------------------------------------------------------------
# circuit graphs and the F_h family

CIRCUIT_COLOURS = ("0", "1", "+", "*", "S", "T")


def circuit_to_graph(C: Circuit) -> tuple[Graph, Graph]:
    """(G(C), Ĝ(C)).

    Gate g is vertex g.  Each internal gate g gets two S-vertices s1, s2
    (appended in gate order) with arcs g -> s1 -> first child and
    g -> s2 -> second child; for ``*`` gates s1 and s2 are joined both ways.
    Ĝ(C) adds a T-vertex with an arc to the output gate.  The construction
    is defined for any subtraction-free circuit; the hom-count identities
    need a normalised one.
    """
    if "-" in C.labels:
        raise ValueError("subtraction gates have no graph encoding")
    colours = list(C.labels)
    arcs = []
    for g in C.internal():
        s = []
        for c in C.children[g]:
            v = len(colours)
            colours.append("S")
            arcs += [(g, v), (v, c)]
            s.append(v)
        if C.labels[g] == "*":
            arcs += [(s[0], s[1]), (s[1], s[0])]
    G = Graph(len(colours), arcs, directed=True, colours=colours)
    t = len(colours)
    Ghat = Graph(t + 1, arcs + [(t, C.output)], directed=True, colours=colours + ["T"])
    return G, Ghat


def alpha(h: int) -> int:
    """alpha(h) = 2^(2^ceil(h/2) - 1)."""
    if h < 0:
        raise ValueError("height must be non-negative")
    return 2 ** (2 ** ((h + 1) // 2) - 1)


def build_f_h(h: int, hat: bool = True, strict_depth: bool = True, seed: Optional[int] = None) -> Graph:
    """F_h (or F̂_h) with root vertex 0.

    With ``strict_depth=False`` every child subtree gets a height drawn from
    the heights below its parent with the right parity, so leaves may sit at
    different depths.
    """
    if h < 0:
        raise ValueError("height must be non-negative")
    rng = random.Random(seed)
    colours: list[str] = []
    arcs: list[tuple[int, int]] = []

    def new(c: str) -> int:
        colours.append(c)
        return len(colours) - 1

    def child_height(height: int) -> int:
        if strict_depth:
            return height - 1
        return rng.choice(range((height - 1) % 2, height, 2))

    def build(height: int) -> int:
        if height == 0:
            return new("1")
        if height % 2:
            r = new("*")
            s1, s2 = new("S"), new("S")
            arcs.extend([(r, s1), (r, s2), (s1, s2), (s2, s1)])
            arcs.append((s1, build(child_height(height))))
            arcs.append((s2, build(child_height(height))))
            return r
        r = new("+")
        s = new("S")
        arcs.extend([(r, s), (s, build(child_height(height)))])
        return r

    build(h)
    if hat:
        t = new("T")
        arcs.append((t, 0))
    return Graph(len(colours), arcs, directed=True, colours=colours)


# ---------------------------------------------------------------------------
# decolouring

# pairwise homomorphically incomparable connected cores found by search
_CORES = (
    [(0, 2), (0, 3), (0, 4), (0, 5), (0, 7), (1, 3), (1, 5), (1, 6), (1, 7), (2, 3), (2, 6), (2, 7), (3, 6),
     (4, 5), (4, 6), (5, 7)],
    [(0, 2), (0, 4), (0, 5), (0, 6), (1, 2), (1, 3), (1, 5), (1, 6), (1, 7), (2, 4), (2, 7), (3, 4), (3, 6),
     (3, 7), (4, 7), (5, 6)],
    [(0, 2), (0, 3), (0, 4), (0, 6), (1, 2), (1, 4), (1, 5), (1, 6), (2, 3), (2, 5), (3, 4), (3, 5), (4, 6),
     (5, 6)],
    [(0, 1), (0, 5), (0, 6), (0, 7), (1, 3), (1, 6), (2, 3), (2, 6), (2, 7), (3, 4), (3, 6), (3, 7), (4, 5),
     (4, 7), (5, 6), (5, 7)],
    [(0, 1), (0, 3), (0, 6), (0, 7), (1, 2), (1, 6), (1, 7), (2, 3), (2, 4), (2, 6), (3, 4), (3, 5), (3, 7),
     (4, 5), (4, 6), (5, 7)],
    [(0, 1), (0, 5), (0, 6), (0, 7), (1, 2), (1, 4), (1, 6), (2, 3), (2, 6), (2, 7), (3, 4), (3, 5), (3, 7),
     (4, 5), (4, 6), (5, 7)],
    [(0, 2), (0, 3), (0, 4), (0, 7), (1, 2), (1, 5), (1, 6), (1, 7), (2, 6), (2, 7), (3, 4), (3, 5), (3, 7),
     (4, 5), (4, 6), (5, 6)],
    [(0, 2), (0, 3), (0, 5), (1, 3), (1, 4), (1, 6), (2, 3), (2, 7), (3, 4), (3, 5), (3, 6), (3, 7), (4, 7),
     (5, 6)],
    [(0, 3), (0, 5), (0, 6), (0, 7), (1, 3), (1, 4), (1, 7), (2, 4), (2, 5), (2, 6), (2, 7), (3, 4), (3, 6),
     (4, 5), (5, 7), (6, 7)],
)

DEFAULT_PALETTE = CIRCUIT_COLOURS


def core_graph(i: int) -> Graph:
    es = _CORES[i]
    return Graph(1 + max(max(e) for e in es), es)


@lru_cache(maxsize=None)
def _check_incomparable(graphs: tuple[Graph, ...]) -> Optional[tuple[int, int]]:
    for i, A in enumerate(graphs):
        for j, B in enumerate(graphs):
            if i != j and hom_exists(A, B):
                return i, j
    return None


@dataclass(frozen=True)
class GadgetFamily:
    """Blob graphs for the decolouring gadgets; every tip is vertex 0."""

    P: Graph
    Q: Graph
    V: Graph
    K: Mapping[str, Graph]

    def __post_init__(self):
        object.__setattr__(self, "K", dict(self.K))
        graphs = self.graphs()
        for name, X in zip(self.names(), graphs):
            if X.directed or X.coloured or X.n == 0 or not X.is_connected():
                raise ValueError(f"gadget graph {name} must be non-empty, connected, undirected and uncoloured")
        bad = _check_incomparable(tuple(graphs))
        if bad is not None:
            i, j = bad
            names = self.names()
            raise ValueError(f"gadget graphs {names[i]} and {names[j]} are homomorphically comparable")

    def names(self) -> list[str]:
        return ["P", "Q", "V"] + [f"K[{c}]" for c in self.K]

    def graphs(self) -> list[Graph]:
        return [self.P, self.Q, self.V] + list(self.K.values())

    @property
    def palette(self) -> tuple[str, ...]:
        return tuple(self.K)

    @property
    def ell(self) -> int:
        return max(X.n for X in self.graphs())


def default_family(palette: Sequence[str] = DEFAULT_PALETTE) -> GadgetFamily:
    """Family built from the precomputed 7- and 8-vertex cores; supports up to 6 colours."""
    palette = [str(c) for c in palette]
    if len(palette) > len(_CORES) - 3:
        raise ValueError(f"default family supports at most {len(_CORES) - 3} colours")
    if len(set(palette)) != len(palette):
        raise ValueError("palette has repeated colours")
    return GadgetFamily(core_graph(0), core_graph(1), core_graph(2),
                        {c: core_graph(3 + i) for i, c in enumerate(palette)})


def kneser_family(params: Sequence[tuple[int, int]], palette: Sequence[str]) -> GadgetFamily:
    """Family of Kneser graphs K(r, s): the first three are P, Q, V, the rest one per colour."""
    if len(params) != 3 + len(palette):
        raise ValueError("need three Kneser parameter pairs plus one per colour")
    gs = [make_kneser(r, s) for r, s in params]
    return GadgetFamily(gs[0], gs[1], gs[2], {str(c): g for c, g in zip(palette, gs[3:])})


@dataclass(frozen=True)
class GadgetRecord:
    kind: str                       # "direction" or "indicator"
    anchors: tuple[int, ...]
    vertices: tuple[int, ...]       # internal vertices, in creation order
    tips: Mapping[str, int]
    bags: tuple[frozenset, ...]     # path decomposition of the gadget, anchors excluded


@dataclass(frozen=True)
class Decoloured:
    graph: Graph
    source: Graph
    family: GadgetFamily
    gadgets: tuple[GadgetRecord, ...]

    def path_decomposition(self) -> list[frozenset]:
        return decoloured_path_decomposition(self)


class _GraphBuilder:
    def __init__(self, n: int):
        self.n = n
        self.edges: list[tuple[int, int]] = []

    def fresh(self) -> int:
        self.n += 1
        return self.n - 1

    def path(self, a: int, b: int, m: int) -> list[int]:
        """Path with m edges from existing vertex a to existing vertex b."""
        vs = [a] + [self.fresh() for _ in range(m - 1)] + [b]
        self.edges.extend(zip(vs, vs[1:]))
        return vs

    def blob(self, X: Graph) -> list[int]:
        vs = [self.fresh() for _ in range(X.n)]
        self.edges.extend((vs[u], vs[v]) for u, v in X.edge_list())
        return vs


def _path_bags(vs: Sequence[int], keep: Iterable[int] = ()) -> list[frozenset]:
    keep = frozenset(keep)
    return [frozenset((a, b)) | keep for a, b in zip(vs, vs[1:])]


def _blob_bags(X: Graph, vs: Sequence[int], tip_last: bool) -> list[frozenset]:
    bags = [frozenset(vs[x] for x in b) for b in path_decomposition(X)]
    tip = vs[0]
    if not tip_last:
        bags.reverse()
    first = next(i for i, b in enumerate(bags) if tip in b)
    bags = [b | {tip} if i >= first else b for i, b in enumerate(bags)]
    return bags if tip_last else bags[::-1]


def decolour(G: Graph, family: Optional[GadgetFamily] = None) -> Decoloured:
    """Replace arcs by direction gadgets and colours by indicator gadgets.

    Original vertices keep their numbers.  Direction gadgets follow in arc
    order, then indicator gadgets in vertex order.  P_m has m edges.  An
    uncoloured input receives no indicator gadgets.
    """
    if not G.directed:
        raise ModeError("decolouring expects a directed graph")
    if family is None:
        family = default_family()
    if G.coloured:
        extra = sorted(set(G.colours) - set(family.palette))
        if extra:
            raise ValueError(f"colours {extra} are outside the gadget palette")
    ell = family.ell
    B = _GraphBuilder(G.n)
    records = []
    for u, v in G.edge_list():
        start = B.n
        seg1 = B.path(u, B.fresh(), 10 * ell)
        p1 = seg1[-1]
        seg2 = B.path(p1, B.fresh(), 2 * ell)
        p2 = seg2[-1]
        seg3 = B.path(p2, v, 10 * ell)
        P = B.blob(family.P)
        Q = B.blob(family.Q)
        br1 = B.path(p1, P[0], 2 * ell)
        br2 = B.path(p2, Q[0], 2 * ell)
        anchors = tuple(sorted({u, v}))
        bags = (_blob_bags(family.P, P, True) + _path_bags(br1[::-1]) + _path_bags(seg1, [p1])
                + _path_bags(seg2) + _path_bags(seg3, [p2]) + _path_bags(br2)
                + _blob_bags(family.Q, Q, False))
        bags = [b - set(anchors) for b in bags]
        records.append(GadgetRecord("direction", anchors, tuple(range(start, B.n)),
                                    {"P": P[0], "Q": Q[0], "p1": p1, "p2": p2}, tuple(bags)))
    if G.coloured:
        for u in range(G.n):
            start = B.n
            K = B.blob(family.K[G.colours[u]])
            Vb = B.blob(family.V)
            b1 = B.path(K[0], u, 2 * ell)
            b2 = B.path(u, Vb[0], 2 * ell)
            bags = (_blob_bags(family.K[G.colours[u]], K, True) + _path_bags(b1) + _path_bags(b2)
                    + _blob_bags(family.V, Vb, False))
            bags = [b - {u} for b in bags]
            records.append(GadgetRecord("indicator", (u,), tuple(range(start, B.n)),
                                        {"K": K[0], "V": Vb[0]}, tuple(bags)))
    return Decoloured(Graph(B.n, B.edges), G, family, tuple(records))


def direction_gadget_size(family: GadgetFamily) -> int:
    """Internal vertices of one direction gadget."""
    ell = family.ell
    return (22 * ell - 1) + 2 * (2 * ell - 1) + family.P.n + family.Q.n


def indicator_gadget_size(family: GadgetFamily, colour: str) -> int:
    return 2 * (2 * family.ell - 1) + family.K[colour].n + family.V.n


def _underlying(G: Graph) -> Graph:
    return Graph(G.n, [(u, v) for u, v in G.edges if u != v])


def decoloured_path_decomposition(D: Decoloured) -> list[frozenset]:
    """Path decomposition of the decoloured graph built from an optimal one of the source.

    After each source bag come the bags of the gadgets first anchored there,
    each enlarged by that source bag.
    """
    base = path_decomposition(_underlying(D.source))
    todo: dict[int, list[GadgetRecord]] = {}
    for rec in D.gadgets:
        i = next(i for i, b in enumerate(base) if set(rec.anchors) <= b)
        todo.setdefault(i, []).append(rec)
    out = []
    for i, b in enumerate(base):
        out.append(b)
        for rec in todo.get(i, ()):
            out.extend(g | b for g in rec.bags)
    return out


# ---------------------------------------------------------------------------
# characteristic polynomial reductions

def _split(A: QMatrix) -> tuple[QMatrix, QMatrix]:
    n = A.rows
    plus = {(i, j): x for i, j, x in A.nonzeros() if x > 0}
    minus = {(i, j): -x for i, j, x in A.nonzeros() if x < 0}
    return QMatrix.from_sparse(n, n, plus), QMatrix.from_sparse(n, n, minus)


def _blocks3(tl: QMatrix, tr: QMatrix, br: QMatrix) -> QMatrix:
    n = tl.rows
    items = {}
    for M, pos in ((tl, [(0, 0), (1, 1)]), (tr, [(0, 1), (1, 0)]), (br, [(2, 2)])):
        for bi, bj in pos:
            for i, j, x in M.nonzeros():
                items[(bi * n + i, bj * n + j)] = x
    return QMatrix.from_sparse(3 * n, 3 * n, items)


def posdet_lift(A: QMatrix, B: QMatrix) -> tuple[QMatrix, QMatrix]:
    """Non-negative D, E of size 3n with char(D) = char(E) iff char(A) = char(B).

    D = [[A+, A-, 0], [A-, A+, 0], [0, 0, |B|]] and symmetrically for E.
    """
    if not (A.is_square() and B.is_square() and A.shape == B.shape):
        raise ValueError("posdet_lift needs square matrices of equal size")
    if A.rows == 0:
        raise ValueError("posdet_lift needs n >= 1")
    if not (A.is_integral() and B.is_integral()):
        raise ValueError("posdet_lift needs integer matrices")
    Ap, Am = _split(A)
    Bp, Bm = _split(B)
    return _blocks3(Ap, Am, Bp + Bm), _blocks3(Bp, Bm, Ap + Am)


def vcp_to_pair(A: QMatrix, coeffs: Sequence) -> tuple[QMatrix, QMatrix]:
    """Lift of (A, companion(lambda^n + sum c_i lambda^i)); coeffs lists c_0 .. c_{n-1}."""
    if not A.is_square():
        raise ValueError("matrix must be square")
    if len(coeffs) != A.rows:
        raise ValueError(f"expected {A.rows} coefficients, got {len(coeffs)}")
    return posdet_lift(A, companion(QPoly.monic(coeffs)))


def weighted_to_simple(A: Union[WeightedDigraph, QMatrix, Sequence[Sequence[int]]]) -> tuple[Graph, int]:
    """Simple digraph whose closed walks of length k*period count tr(A^k).

    With nbits = max(1, bit length of the largest weight), bit i of a weight
    on u -> v contributes a u -> v gadget of nbits two-arc stages whose first
    i stages are diamonds, so it carries 2^i walks of length period = 2*nbits.
    Returns the graph and the period.
    """
    W = A if isinstance(A, WeightedDigraph) else WeightedDigraph(A)
    n = W.n
    top = max((int(x) for _, _, x in W.adjacency.nonzeros()), default=0)
    nbits = max(1, top.bit_length())
    B = _GraphBuilder(n)
    for u in range(n):
        for v in range(n):
            w = W.weight(u, v)
            for i in range(nbits):
                if not (w >> i) & 1:
                    continue
                x = u
                for stage in range(nbits):
                    y = v if stage == nbits - 1 else B.fresh()
                    mids = [B.fresh() for _ in range(2 if stage < i else 1)]
                    for m in mids:
                        B.edges += [(x, m), (m, y)]
                    x = y
    return Graph(B.n, B.edges, directed=True), 2 * nbits


# ---------------------------------------------------------------------------
# cycles versus cycles-and-paths

Lift = Optional[Callable[[Graph], object]]


def _undirected(*gs: Graph) -> None:
    for G in gs:
        if isinstance(G, Graph) and (G.directed or G.coloured):
            raise ModeError("expected undirected uncoloured graphs")


def _lifted(lift: Lift, *gs):
    if lift is None:
        return gs
    return tuple(lift(G) if isinstance(G, Graph) else G for G in gs)


def and_combine(G, H, G2, H2, lift: Lift = None):
    """(G*G + H*H + G2*G2 + H2*H2, 2(G*H) + 2(G2*H2)).

    For any class closed under disjoint unions the pair is indistinguishable
    iff both input pairs are.  With ``lift`` the algebra runs on lifted
    values (for instance walk profiles) instead of graphs.
    """
    _undirected(G, H, G2, H2)
    G, H, G2, H2 = _lifted(lift, G, H, G2, H2)
    left = G * G + H * H + G2 * G2 + H2 * H2
    right = 2 * (G * H) + 2 * (G2 * H2)
    return left, right


def cyclespaths_to_cycles(G: Graph, H: Graph, lift: Lift = None):
    """Cycle-indistinguishable output iff the inputs are cycles-and-paths indistinguishable."""
    _undirected(G, H)
    return and_combine(G, H, complement(G), complement(H), lift)


def _mixture(G, H, base0, base1):
    return G * base0 + H * base1, H * base0 + G * base1


def cycles_to_cyclespaths(G: Graph, H: Graph, lift: Lift = None):
    """Cycles-and-paths indistinguishable output iff the inputs are cycle-indistinguishable.

    Inputs with different vertex or edge counts are cycle-distinguishable and
    map to the fixed distinguished pair (K1, K2).
    """
    _undirected(G, H)
    if G.n != H.n or G.num_edges != H.num_edges:
        K1, K2 = make_complete(1), make_complete(2)
        return _lifted(lift, K1, K2)
    G, H, c30, c31, c40, c41 = _lifted(
        lift, G, H, cfi(make_cycle(3), 0), cfi(make_cycle(3), 1), cfi(make_cycle(4), 0), cfi(make_cycle(4), 1))
    L3, R3 = _mixture(G, H, c30, c31)
    L4, R4 = _mixture(G, H, c40, c41)
    return and_combine(L3, R3, L4, R4)
