"""Homomorphism indistinguishability over recognisable classes.

A class is given as a deterministic automaton over the generator alphabet B(k)
(words for bounded pathwidth, terms with a binary glue for bounded treewidth).
For a target graph G the automaton A_G has states V(G)^k, transition L_G for a
letter L and all-ones initial and final vectors, so that its value on a word is
hom(soe(word), G).  Two graphs are indistinguishable over the class iff the
products A_F x A_G and A_F x A_H are equivalent and the class members too small
to be produced by the generators have equal counts.

Cycle-type classes also get spectral deciders based on closed-walk and walk
moment sequences; these work on an algebra of walk profiles so that disjoint
unions and categorical products of small graphs can be decided without
materialising them.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Callable, Mapping, Optional, Sequence, Union

from .automata import MTA, MWA
from .equivalence import InternalError, tree_closure, word_closure
from .graphcore import (Graph, ModeError, empty_graph, hom_count, is_isomorphic, make_cycle,
                        make_path)
from .labelled import (GLUE, ONE, LabelledGraph, alphabet, apply_letter, automorphism_orbits,
                       format_term, format_word, generator_matrix, one, parse_term,
                       parse_word, pw_decode, tw_decode)
from .ratlinalg import QMatrix, minpoly_degree

DEAD = "dead"


# ---------------------------------------------------------------------------
# class automata

@dataclass(frozen=True)
class ClassAutomaton:
    kind: str  # "word" or "tree"
    k: int
    states: tuple[str, ...]
    initial: str
    step: Mapping[str, Mapping[str, str]]
    accepting: frozenset[str]
    small_members: tuple[Graph, ...] = ()
    glue_step: Optional[Mapping[str, Mapping[str, str]]] = None
    directed: bool = False
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "small_members", tuple(self.small_members))
        if self.kind not in ("word", "tree"):
            raise ValueError(f"kind must be 'word' or 'tree', got {self.kind!r}")
        st = set(self.states)
        if len(st) != len(self.states):
            raise ValueError("repeated state")
        if self.initial not in st:
            raise ValueError("initial state not in states")
        if not self.accepting <= st:
            raise ValueError("accepting states must be states")
        letters = alphabet(self.k, self.directed)
        for s in self.states:
            row = self.step.get(s)
            if row is None or set(row) != set(letters):
                raise ValueError(f"step must be total on B({self.k}) at state {s!r}")
            if any(t not in st for t in row.values()):
                raise ValueError("step leads outside the state set")
        if self.kind == "tree":
            if self.glue_step is None:
                raise ValueError("tree automata need glue_step")
            for s in self.states:
                row = self.glue_step.get(s)
                if row is None or set(row) != st or any(t not in st for t in row.values()):
                    raise ValueError("glue_step must be total")
        for F in self.small_members:
            if F.directed != self.directed:
                raise ValueError("small member directedness mismatch")

    @property
    def letters(self) -> list[str]:
        return alphabet(self.k, self.directed)

    def glue_symmetric(self) -> bool:
        g = self.glue_step or {}
        return all(g[s][t] == g[t][s] for s in self.states for t in self.states)

    def run_word(self, word) -> str:
        s = self.initial
        for a in parse_word(word):
            s = self.step[s][a]
        return s

    def run_term(self, t) -> str:
        if isinstance(t, str):
            t = parse_term(t)
        if t[0] == ONE:
            return self.initial
        if t[0] == GLUE:
            return self.glue_step[self.run_term(t[1])][self.run_term(t[2])]
        return self.step[self.run_term(t[1])][t[0]]

    def accepts(self, x) -> bool:
        """Membership of a word or term (a term is a tuple whose first entry is a symbol)."""
        if self.kind == "tree":
            return self.run_term(x) in self.accepting
        return self.run_word(x) in self.accepting

    def to_json(self) -> dict:
        d = {"kind": self.kind, "k": self.k, "states": list(self.states), "initial": self.initial,
             "accepting": sorted(self.accepting),
             "step": {s: dict(sorted(self.step[s].items())) for s in self.states},
             "small_members": [F.to_json() for F in self.small_members]}
        if self.glue_step is not None:
            d["glue_step"] = {s: {t: self.glue_step[s][t] for t in self.states} for s in self.states}
        if self.directed:
            d["directed"] = True
        if self.name:
            d["name"] = self.name
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "ClassAutomaton":
        try:
            return cls(kind=d["kind"], k=int(d["k"]), states=tuple(str(s) for s in d["states"]),
                       initial=str(d["initial"]),
                       step={str(s): {str(a): str(t) for a, t in row.items()} for s, row in d["step"].items()},
                       accepting=frozenset(str(s) for s in d["accepting"]),
                       small_members=tuple(Graph.from_json(g) for g in d.get("small_members", [])),
                       glue_step=None if d.get("glue_step") is None else
                       {str(s): {str(t): str(u) for t, u in row.items()} for s, row in d["glue_step"].items()},
                       directed=bool(d.get("directed", False)), name=str(d.get("name", "")))
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValueError(f"malformed class automaton: {exc}") from exc


def accept_all(k: int, kind: str = "word", small_members: Sequence[Graph] = (), directed: bool = False,
               name: str = "") -> ClassAutomaton:
    letters = alphabet(k, directed)
    return ClassAutomaton(kind, k, ("q0",), "q0", {"q0": {a: "q0" for a in letters}}, frozenset({"q0"}),
                          small_members, {"q0": {"q0": "q0"}} if kind == "tree" else None, directed, name)


def reject_all(k: int, kind: str = "word", directed: bool = False) -> ClassAutomaton:
    letters = alphabet(k, directed)
    return ClassAutomaton(kind, k, ("q0",), "q0", {"q0": {a: "q0" for a in letters}}, frozenset(),
                          (), {"q0": {"q0": "q0"}} if kind == "tree" else None, directed)


def minimise(kind: str, k: int, states: Sequence[str], initial: str, step, accepting, glue_step=None,
             directed: bool = False, small_members=(), name: str = "") -> ClassAutomaton:
    """Moore partition refinement, then states renamed q0, q1, ... in breadth-first order."""
    letters = alphabet(k, directed)
    block = {s: int(s in accepting) for s in states}
    while True:
        keys = {}
        for s in states:
            key = (block[s],) + tuple(block[step[s][a]] for a in letters)
            if glue_step is not None:
                key += tuple(block[glue_step[s][t]] for t in states)
                key += tuple(block[glue_step[t][s]] for t in states)
            keys[s] = key
        ids: dict = {}
        new = {s: ids.setdefault(keys[s], len(ids)) for s in states}
        if len(ids) == len(set(block.values())):
            break
        block = new
    rep = {}
    for s in states:
        rep.setdefault(block[s], s)
    order = [block[initial]]
    seen = {block[initial]}
    grew = True
    while grew:
        grew = False
        for b in list(order):
            s = rep[b]
            nxt = [block[step[s][a]] for a in letters]
            if glue_step is not None:
                nxt += [block[glue_step[s][rep[c]]] for c in list(order)]
            for c in nxt:
                if c not in seen:
                    seen.add(c)
                    order.append(c)
                    grew = True
    name_of = {b: f"q{i}" for i, b in enumerate(order)}
    new_step = {name_of[b]: {a: name_of[block[step[rep[b]][a]]] for a in letters} for b in order}
    new_glue = None
    if glue_step is not None:
        new_glue = {name_of[b]: {name_of[c]: name_of[block[glue_step[rep[b]][rep[c]]]] for c in order}
                    for b in order}
    acc = frozenset(name_of[b] for b in order if rep[b] in accepting)
    return ClassAutomaton(kind, k, tuple(name_of[b] for b in order), name_of[block[initial]], new_step, acc,
                          small_members, new_glue, directed, name)


# ---------------------------------------------------------------------------
# membership predicates and reduced signatures for cycle-type classes

def is_cycle_member(G: Graph) -> bool:
    """A single cycle on at least 3 vertices, or K1 (the length-0 cycle)."""
    if G.directed:
        return False
    if G.n == 1 and G.num_edges == 0:
        return True
    return G.n >= 3 and G.is_connected() and all(G.degree(v) == 2 for v in range(G.n))


def is_cycle_or_path_member(G: Graph) -> bool:
    if G.directed or G.n == 0 or not G.is_connected():
        return False
    if any(G.degree(v) > 2 for v in range(G.n)):
        return False
    return G.num_edges in (G.n - 1, G.n)


def is_directed_cycle_member(G: Graph) -> bool:
    """A directed cycle of length >= 1, or the edgeless one-vertex graph."""
    if not G.directed or G.n == 0:
        return False
    if G.n == 1 and G.num_edges == 0:
        return True
    return G.is_connected() and all(len(G.out_nbrs(v)) == 1 and len(G.in_nbrs(v)) == 1 for v in range(G.n))


def _signature(X: LabelledGraph, directed: bool, tails: bool):
    """Finite summary of a labelled graph w.r.t. cycle/path-type completions.

    Unlabelled vertices never gain edges again, so they must already have their
    final degree.  Runs of unlabelled vertices only matter up to length 2, and
    pendant tails up to length 1.  Returns DEAD or (labelled edges, runs).
    """
    G, labels = X.graph, X.labels
    pos = {v: i for i, v in enumerate(labels)}
    for v in range(G.n):
        if directed:
            i, o = len(G.in_nbrs(v)), len(G.out_nbrs(v))
            if i > 1 or o > 1 or (v not in pos and (i, o) != (1, 1)):
                return DEAD
        else:
            d = G.degree(v)
            if d > 2 or (v not in pos and d not in ((1, 2) if tails else (2,))):
                return DEAD
    for comp in G.components():
        if not any(v in pos for v in comp):
            return DEAD
    lab_edges = []
    runs = []
    seen = set()
    for a in labels:
        nbrs = G.out_nbrs(a) if directed else G.nbrs(a)
        for u in sorted(nbrs):
            if u in pos:
                if directed or pos[a] < pos[u]:
                    lab_edges.append((pos[a], pos[u]))
                continue
            if u in seen:
                continue
            prev, cur, length = a, u, 0
            end = None
            while True:
                seen.add(cur)
                length += 1
                nxt = [w for w in ((G.out_nbrs(cur)) if directed else G.nbrs(cur)) if w != prev or directed]
                if not directed and len(nxt) == 0:
                    break  # pendant tail
                w = nxt[0]
                if w in pos:
                    end = w
                    break
                prev, cur = cur, w
            if end is None:
                runs.append((pos[a], -1, 1))
            elif directed:
                runs.append((pos[a], pos[end], min(length, 2)))
            else:
                i, j = sorted((pos[a], pos[end]))
                runs.append((i, j, min(length, 2)))
    return (tuple(sorted(lab_edges)), tuple(sorted(runs)))


def _rebuild(sig, k: int, directed: bool) -> LabelledGraph:
    lab_edges, runs = sig
    edges = list(lab_edges)
    n = k
    for a, b, length in runs:
        chain = [a] + list(range(n, n + length)) + ([b] if b >= 0 else [])
        n += length
        edges += list(zip(chain, chain[1:]))
    return LabelledGraph(Graph(n, edges, directed), range(k))


def explore_class(k: int, member: Callable[[Graph], bool], directed: bool, tails: bool,
                  small_members: Sequence[Graph] = (), name: str = "") -> ClassAutomaton:
    """Breadth-first exploration of reduced signatures, then minimisation."""
    letters = alphabet(k, directed)
    start = one(k, directed)
    s0 = _signature(start, directed, tails)
    reps = {s0: start}
    order = [s0]
    step: dict = {}
    i = 0
    while i < len(order):
        s = order[i]
        i += 1
        row = {}
        for a in letters:
            if s == DEAD:
                t = DEAD
            else:
                t = _signature(apply_letter(_rebuild(s, k, directed), a, directed), directed, tails)
            if t not in reps:
                reps[t] = None if t == DEAD else _rebuild(t, k, directed)
                order.append(t)
            row[a] = t
        step[s] = row
    ids = {s: f"s{i}" for i, s in enumerate(order)}
    acc = {ids[s] for s in order if s != DEAD and member(reps[s].graph)}
    return minimise("word", k, [ids[s] for s in order], ids[s0],
                    {ids[s]: {a: ids[t] for a, t in step[s].items()} for s in order}, acc,
                    directed=directed, small_members=small_members, name=name)


def all_graphs(n_max: int, directed: bool = False) -> list[Graph]:
    """All graphs with 1..n_max vertices up to isomorphism (brute force, small n)."""
    out = []
    for n in range(1, n_max + 1):
        slots = [(u, v) for u in range(n) for v in range(n) if u != v] if directed else list(combinations(range(n), 2))
        found: list[Graph] = []
        for mask in range(1 << len(slots)):
            G = Graph(n, [e for i, e in enumerate(slots) if mask >> i & 1], directed)
            if not any(is_isomorphic(G, H) for H in found):
                found.append(G)
        out += found
    return out


_NAMES = ("directed-cycles", "cycles", "cycles-and-paths", "pathwidth-le(K)", "treewidth-le(K)")


@lru_cache(maxsize=None)
def builtin_class(name: str) -> ClassAutomaton:
    """Built-in class automata.

    ``pathwidth-le(K)`` and ``treewidth-le(K)`` use k = K + 1 and accept every
    generated graph.  The three cycle-type classes use k = 3, since cycles have
    pathwidth 2.
    """
    if name.startswith(("pathwidth-le(", "treewidth-le(")) and name.endswith(")"):
        try:
            width = int(name[name.index("(") + 1:-1])
        except ValueError:
            raise ValueError(f"unknown class {name!r}") from None
        if not 0 <= width <= 3:
            raise ValueError("width must be between 0 and 3")
        k = width + 1
        kind = "word" if name.startswith("pathwidth") else "tree"
        return accept_all(k, kind, all_graphs(k), name=name)
    if name == "cycles":
        small = (empty_graph(1), make_cycle(3))
        return explore_class(3, is_cycle_member, False, False, small, name)
    if name == "cycles-and-paths":
        small = (make_path(1), make_path(2), make_path(3), make_cycle(3))
        return explore_class(3, is_cycle_or_path_member, False, True, small, name)
    if name == "directed-cycles":
        small = (empty_graph(1, True),) + tuple(make_cycle(m, True) for m in (1, 2, 3))
        return explore_class(3, is_directed_cycle_member, True, False, small, name)
    raise ValueError(f"unknown class {name!r}; expected one of {', '.join(_NAMES)}")


def member_predicate(name: str) -> Callable[[Graph], bool]:
    """Direct membership test for a builtin class (used by tests and witness checks)."""
    from .graphcore import pathwidth
    if name == "cycles":
        return is_cycle_member
    if name == "cycles-and-paths":
        return is_cycle_or_path_member
    if name == "directed-cycles":
        return is_directed_cycle_member
    if name.startswith("pathwidth-le("):
        w = int(name[13:-1])
        return lambda G: not G.directed and pathwidth(G) <= w
    if name.startswith("treewidth-le("):
        w = int(name[13:-1])
        if w != 1:
            raise ValueError("direct treewidth test only for width 1")
        return lambda G: not G.directed and G.num_edges == G.n - len(G.components())
    raise ValueError(f"unknown class {name!r}")


# ---------------------------------------------------------------------------
# graph automata

def build_graph_mwa(G: Graph, k: int) -> MWA:
    """States V(G)^k, M(L) = L_G, alpha = eta = all-ones."""
    if G.n < 1:
        raise ValueError("graph must have at least one vertex")
    s = G.n ** k
    letters = alphabet(k, G.directed)
    return MWA(s, letters, {a: generator_matrix(a, G, k) for a in letters},
               QMatrix(1, s, [1] * s), QMatrix(s, 1, [1] * s))


def build_graph_mta(G: Graph, k: int) -> MTA:
    """Leaf 1 -> all-ones, letters -> L_G, glue -> diagonal selector M((x, y), z) = [x = y = z]."""
    if G.n < 1:
        raise ValueError("graph must have at least one vertex")
    s = G.n ** k
    letters = alphabet(k, G.directed)
    trans = {ONE: QMatrix(1, s, [1] * s), **{a: generator_matrix(a, G, k) for a in letters},
             GLUE: QMatrix.from_sparse(s * s, s, {(x * s + x, x): 1 for x in range(s)})}
    ra = ((ONE, 0),) + tuple((a, 1) for a in letters) + ((GLUE, 2),)
    return MTA(s, ra, trans, QMatrix(s, 1, [1] * s))


def build_class_mwa(spec: ClassAutomaton) -> MWA:
    if spec.kind != "word":
        raise ValueError("word automaton needs a word-kind class")
    idx = {s: i for i, s in enumerate(spec.states)}
    n = len(idx)
    letters = spec.letters
    mats = {a: QMatrix.from_sparse(n, n, {(idx[s], idx[spec.step[s][a]]): 1 for s in spec.states})
            for a in letters}
    return MWA(n, letters, mats, QMatrix.from_sparse(1, n, {(0, idx[spec.initial]): 1}),
               QMatrix.from_sparse(n, 1, {(idx[s], 0): 1 for s in spec.accepting}))


def build_class_mta(spec: ClassAutomaton) -> MTA:
    if spec.kind != "tree":
        raise ValueError("tree automaton needs a tree-kind class")
    idx = {s: i for i, s in enumerate(spec.states)}
    n = len(idx)
    letters = spec.letters
    trans = {ONE: QMatrix.from_sparse(1, n, {(0, idx[spec.initial]): 1}),
             **{a: QMatrix.from_sparse(n, n, {(idx[s], idx[spec.step[s][a]]): 1 for s in spec.states})
                for a in letters},
             GLUE: QMatrix.from_sparse(n * n, n, {(idx[s] * n + idx[t], idx[spec.glue_step[s][t]]): 1
                                                  for s in spec.states for t in spec.states})}
    ra = ((ONE, 0),) + tuple((a, 1) for a in letters) + ((GLUE, 2),)
    return MTA(n, ra, trans, QMatrix.from_sparse(n, 1, {(idx[s], 0): 1 for s in spec.accepting}))


# ---------------------------------------------------------------------------
# deciding

@dataclass(frozen=True)
class HomIndVerdict:
    indistinguishable: bool
    witness: Optional[Graph] = None
    hom_counts: Optional[tuple[int, int]] = None
    witness_source: Optional[str] = None
    method: str = "automaton"

    def to_json(self) -> dict:
        return {"indistinguishable": self.indistinguishable,
                "witness": None if self.witness is None else self.witness.to_json(),
                "hom_counts": None if self.hom_counts is None else list(self.hom_counts),
                "witness_source": self.witness_source,
                "method": self.method}


@dataclass
class _Side:
    """Integer view of A_G, optionally lumped over Aut(G)-orbits of V(G)^k."""
    size: int
    mats: dict  # letter -> {row: [(col, val)]}
    eta: list[int]  # weight per state


def _graph_side(G: Graph, k: int, lump: bool) -> _Side:
    letters = alphabet(k, G.directed)
    N = G.n ** k
    mats_full = {a: generator_matrix(a, G, k) for a in letters}
    if not lump:
        return _Side(N, {a: {i: [(j, int(v)) for j, v in r.items()] for i, r in ((i, m.row_items(i)) for i in range(N)) if r}
                         for a, m in mats_full.items()}, [1] * N)
    orb = automorphism_orbits(G, k)
    m = max(orb) + 1
    rep = [None] * m
    sizes = [0] * m
    for x, o in enumerate(orb):
        sizes[o] += 1
        if rep[o] is None:
            rep[o] = x
    mats = {}
    for a, M in mats_full.items():
        cols = M.transpose()
        rows: dict = {}
        for o2 in range(m):
            for x, v in cols.row_items(rep[o2]).items():
                r = rows.setdefault(orb[x], {})
                r[o2] = r.get(o2, 0) + int(v)
        mats[a] = {o: sorted(r.items()) for o, r in rows.items()}
    return _Side(m, mats, sizes)


class _Product:
    """Integer view of (A_F x A_G) - (A_F x A_H) as a block sum."""

    def __init__(self, spec: ClassAutomaton, sides: Sequence[_Side]):
        self.spec = spec
        self.idx = {s: i for i, s in enumerate(spec.states)}
        S = len(spec.states)
        self.S = S
        self.sides = sides
        self.offs = []
        off = 0
        for sd in sides:
            self.offs.append(off)
            off += S * sd.size
        self.mats = {}
        for a in spec.letters:
            rows = {}
            for b, sd in enumerate(sides):
                o, N = self.offs[b], sd.size
                for s in spec.states:
                    si, ti = self.idx[s], self.idx[spec.step[s][a]]
                    for x, r in sd.mats[a].items():
                        rows[o + si * N + x] = [(o + ti * N + y, v) for y, v in r]
            self.mats[a] = rows
        init = self.idx[spec.initial]
        self.alpha = {}
        self.eta = {}
        for b, sd in enumerate(sides):
            o, N = self.offs[b], sd.size
            sign = 1 if b == 0 else -1
            for x in range(N):
                self.alpha[o + init * N + x] = 1
                for s in spec.accepting:
                    self.eta[o + self.idx[s] * N + x] = sign * sd.eta[x]
        if spec.kind == "tree":
            g = spec.glue_step
            self.glue = {(self.idx[s], self.idx[t]): self.idx[g[s][t]] for s in spec.states for t in spec.states}

    def _locate(self, i: int) -> tuple[int, int, int]:
        b = 0
        while b + 1 < len(self.offs) and i >= self.offs[b + 1]:
            b += 1
        s, x = divmod(i - self.offs[b], self.sides[b].size)
        return b, s, x

    def apply(self, sym: str, vecs) -> dict:
        if sym == ONE:
            return dict(self.alpha)
        if sym == GLUE:
            v1, v2 = vecs
            by_x: dict = {}
            for i, c in v2.items():
                b, t, x = self._locate(i)
                by_x.setdefault((b, x), []).append((t, c))
            out: dict = {}
            for i, a in v1.items():
                b, s, x = self._locate(i)
                for t, c in by_x.get((b, x), ()):
                    j = self.offs[b] + self.glue[(s, t)] * self.sides[b].size + x
                    out[j] = out.get(j, 0) + a * c
            return {j: v for j, v in out.items() if v}
        (v,) = vecs
        rows = self.mats[sym]
        out = {}
        for i, a in v.items():
            for j, b in rows.get(i, ()):
                out[j] = out.get(j, 0) + a * b
        return {j: x for j, x in out.items() if x}


def _check_modes(spec: ClassAutomaton, G: Graph, H: Graph) -> None:
    for X in (G, H):
        if X.directed != spec.directed:
            raise ModeError("graph directedness does not match the class")
        if X.colours is not None:
            raise ModeError("class automata work on uncoloured graphs")
        if X.n < 1:
            raise ModeError("graphs must have at least one vertex")


def decide_homind(spec: ClassAutomaton, G: Graph, H: Graph, lump: bool = True) -> HomIndVerdict:
    """Small members by brute force, then equivalence of the two product automata.

    With ``lump`` the graph automata are quotiented by the automorphism orbits
    of V^k; forward vectors of A_G are Aut(G)-invariant so the result is the same.
    """
    _check_modes(spec, G, H)
    for i, F in enumerate(spec.small_members):
        a, b = hom_count(F, G), hom_count(F, H)
        if a != b:
            return HomIndVerdict(False, F, (a, b), f"small:{i}")
    prod = _Product(spec, [_graph_side(G, spec.k, lump), _graph_side(H, spec.k, lump)])
    if spec.kind == "word":
        _, w = word_closure(prod.alpha, prod.mats, spec.letters, prod.eta, stop_at_witness=True)
        if w is None:
            return HomIndVerdict(True)
        X, src, ok = pw_decode(w, spec.k, spec.directed), format_word(w), spec.accepts(w)
    else:
        symbols = ((ONE, 0),) + tuple((a, 1) for a in spec.letters) + ((GLUE, 2),)
        _, t = tree_closure(symbols, prod.apply, prod.eta, stop_at_witness=True)
        if t is None:
            return HomIndVerdict(True)
        X, src, ok = tw_decode(t, spec.k, spec.directed), format_term(t), spec.accepts(t)
    if not ok:
        raise InternalError(f"witness {src!r} is not accepted by the class automaton")
    F = X.graph
    a, b = hom_count(F, G), hom_count(F, H)
    if a == b:
        raise InternalError(f"witness {src!r} does not separate the graphs")
    return HomIndVerdict(False, F, (a, b), src)


def decide_directed_cycles_fast(G: Graph, H: Graph) -> HomIndVerdict:
    """Vertex counts, then tr(A^k) for k = 1..n on zero-padded adjacency matrices."""
    if not (G.directed and H.directed):
        raise ModeError("directed graphs expected")
    if G.n != H.n:
        return HomIndVerdict(False, empty_graph(1, True), (G.n, H.n), "trace:0", "trace")
    A, B = G.adjacency(), H.adjacency()
    PA, PB = A, B
    for m in range(1, G.n + 1):
        ta, tb = PA.trace(), PB.trace()
        if ta != tb:
            return HomIndVerdict(False, make_cycle(m, True), (int(ta), int(tb)), f"trace:{m}", "trace")
        PA, PB = PA @ A, PB @ B
    return HomIndVerdict(True, method="trace")


# ---------------------------------------------------------------------------
# walk profiles and spectral deciders

class WalkProfile:
    """Closed-walk counts tr(A^m) and walk counts 1^T A^m 1 of a symmetric 0/1 matrix.

    Profiles form an algebra mirroring graphs: ``+`` is disjoint union, ``*``
    is the categorical product, and ``k * P`` is k disjoint copies.  ``support``
    bounds the number of distinct eigenvalues; ``n`` is the vertex count.
    """

    def __init__(self, support: int, n: int, extend: Callable[[int], tuple[list[int], list[int]]]):
        self.support = support
        self.n = n
        self._extend = extend
        self._closed: list[int] = []
        self._walks: list[int] = []

    def terms(self, length: int) -> tuple[list[int], list[int]]:
        if len(self._closed) < length:
            self._closed, self._walks = self._extend(length)
        return self._closed[:length], self._walks[:length]

    def closed(self, m: int) -> int:
        return self.terms(m + 1)[0][m]

    def walks(self, m: int) -> int:
        return self.terms(m + 1)[1][m]

    @classmethod
    def of_graph(cls, G: Graph) -> "WalkProfile":
        if G.directed or G.colours is not None or any(u == v for u, v in G.edges):
            raise ModeError("walk profiles need simple undirected graphs")
        A = G.adjacency_int()
        n = G.n

        def extend(length: int):
            closed, walks = [], []
            P = [[int(i == j) for j in range(n)] for i in range(n)]
            for _ in range(length):
                closed.append(sum(P[i][i] for i in range(n)))
                walks.append(sum(map(sum, P)))
                P = [[sum(P[i][t] * A[t][j] for t in range(n) if P[i][t]) for j in range(n)] for i in range(n)]
            return closed, walks

        d = minpoly_degree(G.adjacency()) if n else 0
        return cls(d, n, extend)

    def __add__(self, other: "WalkProfile") -> "WalkProfile":
        def extend(length: int):
            a, b = self.terms(length), other.terms(length)
            return [x + y for x, y in zip(a[0], b[0])], [x + y for x, y in zip(a[1], b[1])]
        return WalkProfile(min(self.support + other.support, self.n + other.n), self.n + other.n, extend)

    def __mul__(self, other: "WalkProfile") -> "WalkProfile":
        if isinstance(other, int):
            return other * self

        def extend(length: int):
            a, b = self.terms(length), other.terms(length)
            return [x * y for x, y in zip(a[0], b[0])], [x * y for x, y in zip(a[1], b[1])]
        return WalkProfile(min(self.support * other.support, self.n * other.n), self.n * other.n, extend)

    def __rmul__(self, k: int) -> "WalkProfile":
        def extend(length: int):
            a = self.terms(length)
            return [k * x for x in a[0]], [k * x for x in a[1]]
        return WalkProfile(self.support if k else 0, k * self.n, extend)


def walk_profile(G: Union[Graph, WalkProfile]) -> WalkProfile:
    return G if isinstance(G, WalkProfile) else WalkProfile.of_graph(G)


def decide_cycles_spectral(G, H) -> HomIndVerdict:
    """Indistinguishability over cycles (including K1) from closed-walk moments.

    The difference of closed-walk sequences is a sum of at most D = d_G + d_H
    exponentials, so D consecutive zero terms from m = 3 on force all later terms to vanish.
    """
    P, Q = walk_profile(G), walk_profile(H)
    if P.n != Q.n:
        return HomIndVerdict(False, empty_graph(1), (P.n, Q.n), "cycle:0", "spectral")
    D = P.support + Q.support
    (cp, _), (cq, _) = P.terms(D + 3), Q.terms(D + 3)
    for m in range(3, D + 3):
        if cp[m] != cq[m]:
            return HomIndVerdict(False, make_cycle(m), (cp[m], cq[m]), f"cycle:{m}", "spectral")
    return HomIndVerdict(True, method="spectral")


def decide_cyclespaths_spectral(G, H) -> HomIndVerdict:
    """Indistinguishability over cycles and paths from closed-walk and walk moments.

    Witnesses are tried by increasing vertex count, paths before cycles.
    """
    P, Q = walk_profile(G), walk_profile(H)
    D = P.support + Q.support
    (cp, wp), (cq, wq) = P.terms(D + 3), Q.terms(D + 3)
    for s in range(1, D + 3):
        if wp[s - 1] != wq[s - 1]:
            return HomIndVerdict(False, make_path(s), (wp[s - 1], wq[s - 1]), f"path:{s}", "spectral")
        if s >= 3 and cp[s] != cq[s]:
            return HomIndVerdict(False, make_cycle(s), (cp[s], cq[s]), f"cycle:{s}", "spectral")
    return HomIndVerdict(True, method="spectral")
