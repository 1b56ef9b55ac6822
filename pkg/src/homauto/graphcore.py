"""Finite simple graphs, brute-force homomorphism counting, small isomorphism."""
from __future__ import annotations

from collections import deque
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

from .ratlinalg import QMatrix

DEFAULT_ISO_BOUND = 16


class ModeError(ValueError):
    """Directedness or colour mode of two graphs does not match."""


class Graph:
    """Graph on vertices 0..n-1.

    Undirected edge sets are stored closed under swap.  Loops are only allowed
    for directed graphs.  ``colours`` is either None or a tuple of one colour
    symbol per vertex.
    """

    __slots__ = ("n", "directed", "edges", "colours", "_out", "_in", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), directed: bool = False,
                 colours: Sequence[str] | Mapping[int, str] | None = None):
        if n < 0:
            raise ValueError("negative vertex count")
        es = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v and not directed:
                raise ValueError("loops are only allowed in directed graphs")
            es.add((u, v))
            if not directed:
                es.add((v, u))
        if colours is not None:
            if isinstance(colours, Mapping):
                if set(colours) != set(range(n)):
                    raise ValueError("colour map must cover every vertex")
                colours = [colours[v] for v in range(n)]
            colours = tuple(str(c) for c in colours)
            if len(colours) != n:
                raise ValueError("one colour per vertex required")
        self.n = n
        self.directed = bool(directed)
        self.edges = frozenset(es)
        self.colours = colours
        out = [set() for _ in range(n)]
        inn = [set() for _ in range(n)]
        for u, v in es:
            out[u].add(v)
            inn[v].add(u)
        self._out = tuple(frozenset(s) for s in out)
        self._in = tuple(frozenset(s) for s in inn)
        self._hash = None

    # -- basic queries ----------------------------------------------------

    @property
    def coloured(self) -> bool:
        return self.colours is not None

    def out_nbrs(self, v: int) -> frozenset[int]:
        return self._out[v]

    def in_nbrs(self, v: int) -> frozenset[int]:
        return self._in[v]

    def nbrs(self, v: int) -> frozenset[int]:
        """Neighbours ignoring direction (excluding v itself)."""
        return (self._out[v] | self._in[v]) - {v}

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    def degree(self, v: int) -> int:
        return len(self._out[v])

    def edge_list(self) -> list[tuple[int, int]]:
        """Sorted edges; undirected edges once with u < v."""
        if self.directed:
            return sorted(self.edges)
        return sorted((u, v) for u, v in self.edges if u < v)

    @property
    def num_edges(self) -> int:
        return len(self.edges) if self.directed else len(self.edges) // 2

    def colour(self, v: int) -> str | None:
        return None if self.colours is None else self.colours[v]

    def adjacency(self) -> QMatrix:
        return QMatrix.from_sparse(self.n, self.n, {e: 1 for e in self.edges})

    def adjacency_int(self) -> list[list[int]]:
        a = [[0] * self.n for _ in range(self.n)]
        for u, v in self.edges:
            a[u][v] = 1
        return a

    def components(self) -> list[list[int]]:
        """Weakly connected components, each sorted, ordered by least vertex."""
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, todo = [s], [s]
            while todo:
                u = todo.pop()
                for w in self._out[u] | self._in[u]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        todo.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n > 0 and len(self.components()) == 1

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Vertex v becomes perm[v]."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError("not a permutation")
        cols = None
        if self.colours is not None:
            cols = [None] * self.n
            for v, c in enumerate(self.colours):
                cols[perm[v]] = c
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges], self.directed, cols)

    def induced(self, vertices: Sequence[int]) -> "Graph":
        idx = {v: i for i, v in enumerate(vertices)}
        es = [(idx[u], idx[v]) for u, v in self.edges if u in idx and v in idx]
        cols = None if self.colours is None else [self.colours[v] for v in vertices]
        return Graph(len(vertices), es, self.directed, cols)

    def uncoloured(self) -> "Graph":
        return Graph(self.n, self.edges, self.directed)

    # -- algebra ----------------------------------------------------------

    def __add__(self, other: "Graph") -> "Graph":
        return disjoint_union(self, other)

    def __mul__(self, other: "Graph") -> "Graph":
        return categorical_product(self, other)

    def __rmul__(self, k: int) -> "Graph":
        if not isinstance(k, int):
            return NotImplemented
        return multiple(self, k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n, self.directed, self.edges, self.colours) == \
            (other.n, other.directed, other.edges, other.colours)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.directed, self.edges, self.colours))
        return self._hash

    def __repr__(self) -> str:
        kind = "Digraph" if self.directed else "Graph"
        extra = f", colours={list(self.colours)}" if self.colours else ""
        return f"{kind}(n={self.n}, edges={self.edge_list()}{extra})"

    # -- JSON -------------------------------------------------------------

    def to_json(self) -> dict:
        d = {"n": self.n, "directed": self.directed, "edges": [list(e) for e in self.edge_list()]}
        if self.colours is not None:
            d["colours"] = {str(v): c for v, c in enumerate(self.colours)}
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "Graph":
        try:
            n = int(d["n"])
            directed = bool(d.get("directed", False))
            edges = [(int(u), int(v)) for u, v in d.get("edges", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed graph JSON: {exc}") from exc
        cols = d.get("colours")
        if cols is not None:
            cols = {int(k): str(c) for k, c in cols.items()}
        return cls(n, edges, directed, cols)


class WeightedDigraph:
    """Directed graph with non-negative integer arc weights, as a square matrix."""

    __slots__ = ("adjacency",)

    def __init__(self, adjacency: QMatrix | Sequence[Sequence[int]]):
        if not isinstance(adjacency, QMatrix):
            adjacency = QMatrix.from_rows(adjacency)
        if not adjacency.is_square():
            raise ValueError("weighted adjacency must be square")
        for _, _, x in adjacency.nonzeros():
            if x.denominator != 1 or x < 0:
                raise ValueError(f"weights must be non-negative integers, got {x}")
        self.adjacency = adjacency

    @property
    def n(self) -> int:
        return self.adjacency.rows

    def weight(self, u: int, v: int) -> int:
        return int(self.adjacency[u, v])


# ---------------------------------------------------------------------------
# homomorphism counting

def _check_modes(F: Graph, G: Graph) -> None:
    if F.directed != G.directed:
        raise ModeError("directedness mismatch")
    if F.coloured and not G.coloured:
        raise ModeError("coloured pattern needs a coloured target")


def _search_order(F: Graph, comp: list[int], pinned: set[int]) -> list[int]:
    """BFS order over one component, starting from pinned vertices if any."""
    start = [v for v in comp if v in pinned]
    if not start:
        start = [max(comp, key=lambda v: (len(F.nbrs(v)), -v))]
    seen = set(start)
    order = list(start)
    todo = deque(start)
    while todo:
        u = todo.popleft()
        for w in sorted(F.nbrs(u)):
            if w not in seen:
                seen.add(w)
                order.append(w)
                todo.append(w)
    return order


def _count_component(F: Graph, G: Graph, order: list[int], pins: Mapping[int, int], first: bool = False) -> int:
    """Backtracking count; with ``first`` the search stops at the first homomorphism."""
    pos = {v: i for i, v in enumerate(order)}
    # per vertex: (pin or None, colour, needs loop, [(earlier vertex, arc is earlier->v)])
    plan = []
    for v in order:
        cons = []
        for u in F.in_nbrs(v):
            if u != v and pos.get(u, len(order)) < pos[v]:
                cons.append((u, True))
        for u in F.out_nbrs(v):
            if u != v and pos.get(u, len(order)) < pos[v]:
                cons.append((u, False))
        plan.append((pins.get(v), F.colour(v), (v, v) in F.edges, cons))
    all_vertices = range(G.n)
    gcol = G.colours
    gout, gin = G._out, G._in
    phi: dict[int, int] = {}
    last = len(order) - 1

    def candidates(i: int):
        pin, col, loop, cons = plan[i]
        if pin is not None:
            cand = (pin,)
        elif cons:
            u, fwd = cons[0]
            cand = gout[phi[u]] if fwd else gin[phi[u]]
        else:
            cand = all_vertices
        out = []
        for x in cand:
            if col is not None and gcol[x] != col:
                continue
            if loop and x not in gout[x]:
                continue
            ok = True
            for u, fwd in cons:
                if fwd:
                    if x not in gout[phi[u]]:
                        ok = False
                        break
                elif x not in gin[phi[u]]:
                    ok = False
                    break
            if ok:
                out.append(x)
        return out

    def rec(i: int) -> int:
        cand = candidates(i)
        if i == last:
            return len(cand)
        v = order[i]
        total = 0
        for x in cand:
            phi[v] = x
            total += rec(i + 1)
            if first and total:
                break
        phi.pop(v, None)
        return total

    return rec(0)


def hom_count_pinned(F: Graph, G: Graph, pins: Mapping[int, int]) -> int:
    """Number of homomorphisms F -> G extending the partial map ``pins``."""
    _check_modes(F, G)
    for v, x in pins.items():
        if not (0 <= v < F.n and 0 <= x < G.n):
            raise ValueError(f"invalid pin {v}->{x}")
    if F.n == 0:
        return 1
    total = 1
    pinned = set(pins)
    for comp in F.components():
        order = _search_order(F, comp, pinned)
        total *= _count_component(F, G, order, pins)
        if total == 0:
            return 0
    return total


def hom_exists(F: Graph, G: Graph) -> bool:
    """Whether some homomorphism F -> G exists (stops at the first one found)."""
    _check_modes(F, G)
    return all(_count_component(F, G, _search_order(F, comp, set()), {}, first=True) for comp in F.components())


def hom_count(F: Graph, G: Graph) -> int:
    """Number of homomorphisms F -> G (edge-, direction- and colour-preserving)."""
    return hom_count_pinned(F, G, {})


# ---------------------------------------------------------------------------
# graph algebra

def _check_same_mode(G: Graph, H: Graph) -> None:
    if G.directed != H.directed:
        raise ModeError("directedness mismatch")
    if G.coloured != H.coloured:
        raise ModeError("colour mode mismatch")


def disjoint_union(G: Graph, H: Graph) -> Graph:
    _check_same_mode(G, H)
    es = list(G.edges) + [(u + G.n, v + G.n) for u, v in H.edges]
    cols = None if G.colours is None else G.colours + H.colours
    return Graph(G.n + H.n, es, G.directed, cols)


def multiple(G: Graph, k: int) -> Graph:
    """k disjoint copies of G."""
    if k < 0:
        raise ValueError("negative multiple")
    out = Graph(0, directed=G.directed, colours=() if G.coloured else None)
    for _ in range(k):
        out = disjoint_union(out, G)
    return out


def categorical_product(G: Graph, H: Graph) -> Graph:
    """Vertices (g, h) numbered g * |V(H)| + h; edges componentwise."""
    if G.directed != H.directed:
        raise ModeError("directedness mismatch")
    if G.coloured or H.coloured:
        raise ModeError("product of coloured graphs is not supported")
    m = H.n
    es = [(g1 * m + h1, g2 * m + h2) for g1, g2 in G.edges for h1, h2 in H.edges]
    return Graph(G.n * H.n, es, G.directed)


def complement(G: Graph) -> Graph:
    if G.directed or G.coloured:
        raise ModeError("complement needs an undirected uncoloured graph")
    return Graph(G.n, [(u, v) for u, v in combinations(range(G.n), 2) if (u, v) not in G.edges])


# ---------------------------------------------------------------------------
# constructors

def empty_graph(n: int, directed: bool = False) -> Graph:
    return Graph(n, (), directed)


def make_complete(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def make_star(leaves: int) -> Graph:
    """K_{1,leaves} with centre 0."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def make_cycle(k: int, directed: bool = False) -> Graph:
    """Directed cycles from k = 1 (a loop); undirected from k = 3."""
    if directed:
        if k < 1:
            raise ValueError("directed cycles need k >= 1")
        return Graph(k, [(i, (i + 1) % k) for i in range(k)], directed=True)
    if k < 3:
        raise ValueError("undirected cycles need k >= 3")
    return Graph(k, [(i, (i + 1) % k) for i in range(k)])


def make_path(k: int, directed: bool = False) -> Graph:
    """Path on k >= 1 vertices 0 - 1 - ... - (k-1)."""
    if k < 1:
        raise ValueError("paths need at least one vertex")
    return Graph(k, [(i, i + 1) for i in range(k - 1)], directed)


def make_kneser(r: int, s: int) -> Graph:
    """K(r, s): r-subsets of range(s) in lexicographic order, adjacent when disjoint."""
    if not (1 <= r and 2 * r <= s):
        raise ValueError("Kneser graph needs 1 <= r <= s/2")
    verts = [frozenset(c) for c in combinations(range(s), r)]
    es = [(i, j) for i, j in combinations(range(len(verts)), 2) if not (verts[i] & verts[j])]
    return Graph(len(verts), es)


# ---------------------------------------------------------------------------
# isomorphism

def _refine(graphs: Sequence[Graph]) -> list[list[int]]:
    """Colour refinement run jointly on several graphs, so colours are comparable."""
    cols = []
    for G in graphs:
        cols.append([(G.colour(v), (v, v) in G.edges) for v in range(G.n)])
    palette: dict = {}
    cur = [[palette.setdefault(c, len(palette)) for c in cs] for cs in cols]
    nclasses = len(palette)
    while True:
        palette = {}
        new = []
        for G, cs in zip(graphs, cur):
            row = []
            for v in range(G.n):
                sig = (cs[v], tuple(sorted(cs[w] for w in G._out[v])),
                       tuple(sorted(cs[w] for w in G._in[v])))
                row.append(palette.setdefault(sig, len(palette)))
            new.append(row)
        if len(palette) == nclasses:
            return new
        cur, nclasses = new, len(palette)


def is_isomorphic(G: Graph, H: Graph, bound: int = DEFAULT_ISO_BOUND) -> bool:
    """Exhaustive isomorphism test pruned by colour refinement."""
    if max(G.n, H.n) > bound:
        raise ValueError(f"isomorphism check limited to {bound} vertices")
    return find_isomorphism(G, H) is not None


def find_isomorphism(G: Graph, H: Graph) -> list[int] | None:
    """A bijection phi with phi[v] in H for v in G, or None."""
    if (G.n, G.directed, len(G.edges), G.coloured) != (H.n, H.directed, len(H.edges), H.coloured):
        return None
    cg, ch = _refine([G, H])
    if sorted(cg) != sorted(ch):
        return None
    by_col: dict[int, list[int]] = {}
    for x, c in enumerate(ch):
        by_col.setdefault(c, []).append(x)
    # place vertices from small colour classes first, keeping neighbours close
    order: list[int] = []
    placed = set()
    for start in sorted(range(G.n), key=lambda v: (len(by_col[cg[v]]), v)):
        if start in placed:
            continue
        todo = deque([start])
        placed.add(start)
        while todo:
            u = todo.popleft()
            order.append(u)
            for w in sorted(G.nbrs(u), key=lambda w: (len(by_col[cg[w]]), w)):
                if w not in placed:
                    placed.add(w)
                    todo.append(w)
    phi: dict[int, int] = {}
    used = set()

    def consistent(v: int, x: int) -> bool:
        if ((v, v) in G.edges) != ((x, x) in H.edges):
            return False
        for u, y in phi.items():
            if ((u, v) in G.edges) != ((y, x) in H.edges):
                return False
            if ((v, u) in G.edges) != ((x, y) in H.edges):
                return False
        return True

    def rec(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for x in by_col[cg[v]]:
            if x in used or not consistent(v, x):
                continue
            phi[v] = x
            used.add(x)
            if rec(i + 1):
                return True
            del phi[v]
            used.discard(x)
        return False

    if not rec(0):
        return None
    return [phi[v] for v in range(G.n)]


# ---------------------------------------------------------------------------
# CFI graphs

def cfi(G: Graph, parity: int) -> Graph:
    """CFI graph of a connected undirected graph.

    Vertices are pairs (v, S) with S a set of edges at v whose size is even,
    except at vertex 0 where it is odd when parity == 1.  (v, S) and (u, T)
    are adjacent when uv is an edge and uv lies in both or neither of S, T.
    """
    if G.directed or G.coloured:
        raise ModeError("CFI construction needs an undirected uncoloured graph")
    if parity not in (0, 1):
        raise ValueError("parity must be 0 or 1")
    if not G.is_connected():
        raise ValueError("CFI construction needs a connected graph")
    elist = G.edge_list()
    eid = {}
    for i, (u, v) in enumerate(elist):
        eid[(u, v)] = eid[(v, u)] = i
    verts: list[tuple[int, frozenset]] = []
    for v in range(G.n):
        inc = sorted(eid[(v, w)] for w in G.out_nbrs(v))
        want = parity if v == 0 else 0
        for size in range(len(inc) + 1):
            if size % 2 != want:
                continue
            for S in combinations(inc, size):
                verts.append((v, frozenset(S)))
    index = {x: i for i, x in enumerate(verts)}
    by_vertex: dict[int, list[tuple[int, frozenset]]] = {}
    for x in verts:
        by_vertex.setdefault(x[0], []).append(x)
    es = []
    for u, v in elist:
        e = eid[(u, v)]
        for a in by_vertex[u]:
            for b in by_vertex[v]:
                if (e in a[1]) == (e in b[1]):
                    es.append((index[a], index[b]))
    return Graph(len(verts), es)


# ---------------------------------------------------------------------------
# path decompositions

def _vertex_separation(G: Graph) -> tuple[int, list[int]]:
    """Optimal vertex separation number and a linear order achieving it (subset DP)."""
    n = G.n
    if n > 18:
        raise ValueError("exact pathwidth limited to 18 vertices")
    nb = [0] * n
    for v in range(n):
        for w in G.nbrs(v):
            nb[v] |= 1 << w
    full = (1 << n) - 1
    best = {0: 0}
    last = {0: -1}
    # f(S) = max(|boundary(S)|, min over v in S of f(S - v)) where the boundary
    # is the set of vertices of S with a neighbour outside S
    for S in range(1, full + 1):
        bnd = 0
        rest = full & ~S
        s = S
        while s:
            low = s & -s
            v = low.bit_length() - 1
            if nb[v] & rest:
                bnd += 1
            s ^= low
        m, arg = None, -1
        s = S
        while s:
            low = s & -s
            val = best[S ^ low]
            if m is None or val < m:
                m, arg = val, low.bit_length() - 1
            s ^= low
        best[S] = max(bnd, m)
        last[S] = arg
    order = []
    S = full
    while S:
        v = last[S]
        order.append(v)
        S ^= 1 << v
    return best[full], order[::-1]


def pathwidth(G: Graph) -> int:
    """Exact pathwidth via vertex separation number (small graphs only)."""
    if G.n == 0:
        return -1
    return _vertex_separation(G)[0]


def path_decomposition(G: Graph) -> list[frozenset[int]]:
    """An optimal path decomposition: bag i is v_i plus the earlier vertices with a neighbour at or after v_i."""
    if G.n == 0:
        return []
    _, order = _vertex_separation(G)
    pos = {v: i for i, v in enumerate(order)}
    reach = [max([pos[v]] + [pos[w] for w in G.nbrs(v)]) for v in range(G.n)]
    return [frozenset([v] + [u for u in order[:i] if reach[u] >= i]) for i, v in enumerate(order)]


def is_path_decomposition(G: Graph, bags: Sequence[Iterable[int]]) -> bool:
    """Check the three path-decomposition axioms for a sequence of bags."""
    bags = [set(b) for b in bags]
    covered = set().union(*bags) if bags else set()
    if covered != set(range(G.n)):
        return False
    for u, v in G.edges:
        if u != v and not any(u in b and v in b for b in bags):
            return False
    for v in range(G.n):
        idx = [i for i, b in enumerate(bags) if v in b]
        if idx and idx[-1] - idx[0] + 1 != len(idx):
            return False
    return True


def decomposition_width(bags: Sequence[Iterable[int]]) -> int:
    return max((len(set(b)) for b in bags), default=0) - 1


# ---------------------------------------------------------------------------
# hom counting for large sparse patterns

def _blocks(adj: Mapping[int, set]) -> tuple[list[set[int]], set[int]]:
    """Biconnected components (as vertex sets) and articulation points, iteratively."""
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    blocks: list[set[int]] = []
    arts: set[int] = set()
    t = 0
    for root in adj:
        if root in disc:
            continue
        if not adj[root]:
            blocks.append({root})
            disc[root] = t
            t += 1
            continue
        disc[root] = low[root] = t
        t += 1
        stack = [(root, None, iter(adj[root]))]
        estack: list[tuple[int, int]] = []
        children = 0
        while stack:
            v, parent, it = stack[-1]
            w = next(it, None)
            if w is None:
                stack.pop()
                if parent is not None:
                    low[parent] = min(low[parent], low[v])
                    if low[v] >= disc[parent]:
                        if parent != root:
                            arts.add(parent)
                        comp = set()
                        while True:
                            e = estack.pop()
                            comp.update(e)
                            if e == (parent, v):
                                break
                        blocks.append(comp)
                continue
            if w == parent:
                continue
            if w not in disc:
                if v == root:
                    children += 1
                disc[w] = low[w] = t
                t += 1
                estack.append((v, w))
                stack.append((w, v, iter(adj[w])))
            elif disc[w] < disc[v]:
                low[v] = min(low[v], disc[w])
                estack.append((v, w))
        if children > 1:
            arts.add(root)
    return blocks, arts


def _block_vector(adj, unary, block: set[int], cut: Optional[int], gadj: list[frozenset[int]], n: int):
    """Weighted counts of maps of ``block`` into G, per image of ``cut`` (or a scalar)."""
    start = cut if cut is not None else next(iter(block))
    order = [start]
    seen = {start}
    i = 0
    while i < len(order):
        for w in sorted(adj[order[i]]):
            if w in block and w not in seen:
                seen.add(w)
                order.append(w)
        i += 1
    back = [[u for u in adj[v] if u in seen and order.index(u) < k] for k, v in enumerate(order)]
    phi: dict[int, int] = {}

    def rec(k: int) -> int:
        if k == len(order):
            return 1
        v = order[k]
        cands = gadj[phi[back[k][0]]] if back[k] else range(n)
        f = unary.get(v)
        total = 0
        for x in cands:
            if any(x not in gadj[phi[u]] for u in back[k][1:]):
                continue
            wgt = f[x] if f is not None else 1
            if wgt:
                phi[v] = x
                total += wgt * rec(k + 1)
        return total

    if cut is None:
        return rec(0)
    out = []
    for x in range(n):
        phi[cut] = x
        out.append(rec(1))
    return out


def hom_count_sparse(F: Graph, G: Graph, block_limit: int = 12) -> int:
    """hom(F, G) for undirected uncoloured graphs whose blocks are small or cycle-like.

    Pendant vertices are folded into their neighbour as weight vectors, leaf
    blocks with at most ``block_limit`` vertices are counted by backtracking with
    their cut vertex pinned, and otherwise a maximum-degree vertex is fixed to
    each image in turn.
    """
    if F.directed or G.directed or F.coloured or G.coloured:
        raise ModeError("hom_count_sparse works on undirected uncoloured graphs")
    gadj = [G.nbrs(x) for x in range(G.n)]
    adj = {v: set(F.nbrs(v)) for v in range(F.n)}
    return _solve_sparse(adj, {}, gadj, G.n, block_limit)


def _solve_sparse(adj: dict, unary: dict, gadj, n: int, limit: int) -> int:
    total = 1
    while adj:
        v = min(adj, key=lambda u: len(adj[u]))
        d = len(adj[v])
        if d <= 1:
            f = unary.pop(v, None)
            if d == 0:
                total *= sum(f) if f is not None else n
                if not total:
                    return 0
            else:
                (a,) = adj[v]
                adj[a].discard(v)
                msg = [sum(f[y] for y in gadj[x]) if f is not None else len(gadj[x]) for x in range(n)]
                fa = unary.get(a)
                unary[a] = msg if fa is None else [p * q for p, q in zip(fa, msg)]
            del adj[v]
            continue
        blocks, arts = _blocks(adj)
        leaf = None
        for B in blocks:
            cuts = B & arts
            if len(cuts) <= 1 and len(B) <= limit:
                leaf = (B, next(iter(cuts)) if cuts else None)
                break
        if leaf is not None:
            B, cut = leaf
            vec = _block_vector(adj, unary, B, cut, gadj, n)
            for u in B:
                if u != cut:
                    for w in adj[u]:
                        if w not in B:
                            adj[w].discard(u)
            if cut is None:
                total *= vec
                if not total:
                    return 0
            else:
                fc = unary.get(cut)
                unary[cut] = vec if fc is None else [p * q for p, q in zip(fc, vec)]
            for u in B:
                if u != cut:
                    del adj[u]
                    unary.pop(u, None)
            if cut is not None:
                adj[cut] -= B
            continue
        # condition on a vertex of maximum degree
        v = max(adj, key=lambda u: (len(adj[u]), -u))
        f = unary.get(v)
        acc = 0
        for x in range(n):
            wgt = f[x] if f is not None else 1
            if not wgt:
                continue
            adj2 = {u: set(ns) for u, ns in adj.items() if u != v}
            un2 = {u: list(g) for u, g in unary.items() if u != v}
            for a in adj[v]:
                adj2[a].discard(v)
                fa = un2.get(a)
                un2[a] = [(fa[y] if fa is not None else 1) * (y in gadj[x]) for y in range(n)]
            acc += wgt * _solve_sparse(adj2, un2, gadj, n, limit)
        return total * acc
    return total
