"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Run directly with ``python tests/test_acceptance.py`` or through pytest; the
pytest run repeats the lines in its terminal summary.
"""
import functools
import os
import random
import sys
import time
from itertools import product

import networkx as nx
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from homauto.automata import all_words, mwa_minus  # noqa: E402
from homauto.equivalence import mwa_equiv, mwa_is_zero_basis, mwa_is_zero_rank  # noqa: E402
from homauto.graphcore import (  # noqa: E402
    Graph, cfi, hom_count, hom_count_sparse, is_isomorphic, is_path_decomposition, make_complete,
    make_cycle, make_path, make_star, pathwidth,
)
from homauto.homind import (  # noqa: E402
    WalkProfile, builtin_class, decide_cycles_spectral, decide_cyclespaths_spectral, decide_homind,
)
from homauto.ratlinalg import QMatrix, QPoly, char_poly, companion, newton_charpoly_equal  # noqa: E402
from homauto.reductions import (  # noqa: E402
    Circuit, alpha, and_combine, build_f_h, circuit_height, circuit_to_graph, cycles_to_cyclespaths,
    cyclespaths_to_cycles, decolour, default_family, direction_gadget_size, indicator_gadget_size,
    posdet_lift, weighted_to_simple,
)
from oracles import (  # noqa: E402
    brute_hom, brute_iso, build_mwa, charpoly_cofactor, connected_graphs_up_to, enum_hom, eval_word_dense,
    normalised_circuits, random_graph, random_int_matrix, random_mwa_data, trace_power,
)

RESULTS: dict[tuple[int, str], str] = {}


def criterion(num: int, title: str):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except pytest.skip.Exception:
                raise
            except BaseException:
                _report(num, title, "FAIL")
                raise
            _report(num, title, "PASS")
        return wrapper
    return deco


def _report(num, title, status):
    RESULTS[num, title] = status
    print(f"criterion {num:>2}: {status}  {title}")


# -- 1 ------------------------------------------------------------------------

@criterion(1, "MWA zero test: forward basis and rank system agree on 200 random automata")
def test_criterion_01_mwa_cross_method():
    rng = random.Random(2024)
    start = time.perf_counter()
    zeros = 0
    for i in range(200):
        alphabet = ("a", "b", "c")[:rng.randint(1, 3)]
        if i % 3 == 0:
            # difference of an automaton and a state-permuted copy: always zero
            s = rng.randint(1, 2)
            init, mats, final = random_mwa_data(rng, s, alphabet)
            perm = list(range(s))
            rng.shuffle(perm)
            pmats = {a: [[m[perm[r]][perm[c]] for c in range(s)] for r in range(s)] for a, m in mats.items()}
            A = mwa_minus(build_mwa(init, mats, final),
                          build_mwa([init[p] for p in perm], pmats, [final[p] for p in perm]))
        else:
            lo = -2 if i % 3 == 1 else 0
            A = build_mwa(*random_mwa_data(rng, rng.randint(1, 4), alphabet, lo, 2 if lo else 1))
        basis = mwa_is_zero_basis(A).equivalent
        assert basis == mwa_is_zero_rank(A), f"disagreement on automaton {i}"
        zeros += basis
    assert zeros >= 60
    assert time.perf_counter() - start < 60


# -- 2 ------------------------------------------------------------------------

def _pairs(rng):
    for i in range(120):
        alphabet = ("a", "b")[:1 + i % 2]
        s = rng.randint(1, 3)
        init, mats, final = random_mwa_data(rng, s, alphabet, -1, 1)
        if i % 2:
            # same series through a redundant extra state
            mats2 = {a: [row + [0] for row in m] + [[rng.randint(-1, 1) for _ in range(s + 1)]]
                     for a, m in mats.items()}
            yield (init, mats, final), (init + [0], mats2, final + [rng.randint(-1, 1)])
        else:
            yield (init, mats, final), random_mwa_data(rng, rng.randint(1, 3), alphabet, -1, 1)


@criterion(2, "equivalence verdicts: witnesses check out, equal verdicts survive exhaustive evaluation")
def test_criterion_02_equivalence_soundness():
    rng = random.Random(7)
    seen = {True: 0, False: 0}
    for da, db in _pairs(rng):
        A, B = build_mwa(*da), build_mwa(*db)
        v = mwa_equiv(A, B)
        seen[v.equivalent] += 1
        if v.equivalent:
            n = A.states + B.states
            for w in all_words(A.alphabet, n - 1):
                assert eval_word_dense(*da, w) == eval_word_dense(*db, w)
        else:
            a, b = eval_word_dense(*da, v.witness), eval_word_dense(*db, v.witness)
            assert a != b and (a, b) == v.values
    assert seen[True] and seen[False]


# -- 3 ------------------------------------------------------------------------

def _is_caterpillar_forest(N: nx.Graph) -> bool:
    if not nx.is_forest(N):
        return False
    spine = N.subgraph([v for v in N if N.degree(v) > 1])
    return all(d <= 2 for _, d in spine.degree())


def _members(pred):
    """Connected class members on 1..7 vertices from the graph atlas."""
    out = []
    for N in nx.graph_atlas_g()[1:]:
        if nx.is_connected(N) and pred(N):
            idx = {v: i for i, v in enumerate(N)}
            out.append(Graph(N.number_of_nodes(), [(idx[u], idx[v]) for u, v in N.edges()]))
    return out


def _homind_pairs(rng, count):
    for i in range(count):
        n = rng.randint(1, 5)
        G = random_graph(rng, n)
        if i % 5 == 0:
            perm = list(range(n))
            rng.shuffle(perm)
            H = G.relabel(perm)
        else:
            H = random_graph(rng, rng.randint(max(1, n - 1), n))
        yield G, H


def _check_against_members(name, members, seed):
    # members are connected and the classes are closed under disjoint union,
    # so agreement on connected members is agreement on the whole class
    spec = builtin_class(name)
    rng = random.Random(seed)
    verdicts = set()
    for G, H in list(_homind_pairs(rng, 50)) + [(make_cycle(6), make_cycle(3) + make_cycle(3))]:
        truth = all(enum_hom(F, G) == enum_hom(F, H) for F in members)
        v = decide_homind(spec, G, H)
        assert v.indistinguishable == truth, (name, G, H)
        if not v.indistinguishable:
            assert v.hom_counts == (enum_hom(v.witness, G), enum_hom(v.witness, H))
            assert v.hom_counts[0] != v.hom_counts[1]
        verdicts.add(v.indistinguishable)
    assert verdicts == {True, False}


@criterion(3, "decide_homind matches exhaustive counts over pathwidth-1 and treewidth-1 members")
def test_criterion_03_homind_vs_oracle():
    caterpillars = _members(_is_caterpillar_forest)
    trees = _members(nx.is_tree)
    assert len(trees) == 1 + 1 + 1 + 2 + 3 + 6 + 11
    assert len(caterpillars) < len(trees)
    _check_against_members("pathwidth-le(1)", caterpillars, 31)
    _check_against_members("treewidth-le(1)", trees, 32)


# -- 4 ------------------------------------------------------------------------

@criterion(4, "cospectral fixture: star vs C4+K1")
def test_criterion_04_cospectral_fixture():
    G, H = make_star(4), make_cycle(4) + make_complete(1)
    assert decide_homind(builtin_class("cycles"), G, H).indistinguishable
    v = decide_homind(builtin_class("cycles-and-paths"), G, H)
    assert not v.indistinguishable
    assert brute_iso(v.witness, make_path(3))
    assert (brute_hom(v.witness, G), brute_hom(v.witness, H)) == (20, 16) == v.hom_counts


# -- 5 ------------------------------------------------------------------------

def _value(labels, children, output):
    memo = {}

    def val(g):
        if g not in memo:
            lab = labels[g]
            if lab in "01":
                memo[g] = int(lab)
            else:
                a, b = (val(c) for c in children[g])
                memo[g] = a + b if lab == "+" else a * b
        return memo[g]
    return val(output)


@criterion(5, "circuit gadget counts: alpha(h) times the value, zero for other heights")
def test_criterion_05_circuit_gadget():
    start = time.perf_counter()
    corpus = list(normalised_circuits(6, 4))
    assert len(corpus) > 40
    patterns = {h: build_f_h(h) for h in range(6)}
    for raw in corpus:
        C = Circuit(*raw)
        h = circuit_height(C)
        _, Ghat = circuit_to_graph(C)
        for h2, F in patterns.items():
            expect = alpha(h) * _value(*raw) if h2 == h else 0
            assert hom_count(F, Ghat) == expect, (raw, h2)
    assert time.perf_counter() - start < 120


# -- 6 ------------------------------------------------------------------------

def _similar(rng, rows):
    n = len(rows)
    perm = list(range(n))
    rng.shuffle(perm)
    M = [[rows[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
    return [list(r) for r in zip(*M)] if rng.random() < 0.5 else M


@criterion(6, "positive-determinant lift and companion matrices")
def test_criterion_06_posdet_vcp():
    rng = random.Random(6)
    outcomes = set()
    for i in range(100):
        n = rng.randint(1, 3)
        A = random_int_matrix(rng, n, -2, 2)
        B = _similar(rng, A) if i % 2 else random_int_matrix(rng, n, -2, 2)
        D, E = posdet_lift(QMatrix.from_rows(A), QMatrix.from_rows(B))
        assert all(x >= 0 for M in (D, E) for _, _, x in M.nonzeros())
        same_in = charpoly_cofactor(A) == charpoly_cofactor(B)
        assert (char_poly(D) == char_poly(E)) == same_in
        outcomes.add(same_in)
    assert outcomes == {True, False}
    for _ in range(50):
        deg = rng.randint(1, 4)
        lower = [rng.randint(-5, 5) for _ in range(deg)]
        rows = companion(QPoly.monic(lower)).to_rows()
        assert charpoly_cofactor(rows) == lower + [1]


# -- 7 ------------------------------------------------------------------------

@criterion(7, "bit gadget: directed cycle counts equal traces of powers")
def test_criterion_07_bit_gadget():
    rng = random.Random(77)
    for _ in range(4):
        A = random_int_matrix(rng, 2, 0, 3)
        G, b = weighted_to_simple(A)
        for ell in range(1, 3 * b + 1):
            if ell % b:
                assert enum_hom(make_cycle(ell, directed=True), G) == 0
        for k in (1, 2, 3):
            got = enum_hom(make_cycle(k * b, directed=True), G)
            assert got == trace_power(A, k), f"A={A} k={k} b={b}: hom={got}, tr={trace_power(A, k)}"


# -- 8 ------------------------------------------------------------------------

@criterion(8, "CFI companions of cycles and the odd-cycle separation")
def test_criterion_08_cfi():
    for n in (3, 4):
        even, odd = cfi(make_cycle(n), 0), cfi(make_cycle(n), 1)
        two = make_cycle(n) + make_cycle(n)
        assert is_isomorphic(even, two) and brute_iso(even, two)
        assert is_isomorphic(odd, make_cycle(2 * n)) and brute_iso(odd, make_cycle(2 * n))
    c0, c1 = cfi(make_cycle(3), 0), cfi(make_cycle(3), 1)
    for m in range(3, 9):
        a, b = enum_hom(make_cycle(m), c0), enum_hom(make_cycle(m), c1)
        assert (a != b) == (m % 2 == 1), (m, a, b)
    for k in range(1, 7):
        assert enum_hom(make_path(k), c0) == enum_hom(make_path(k), c1)


# -- 9 ------------------------------------------------------------------------

LIFT = WalkProfile.of_graph


@criterion(9, "cycle reductions preserve verdicts; quadratic identity of the combiner")
def test_criterion_09_reductions():
    rng = random.Random(909)
    corpus = [(make_star(4), make_cycle(4) + make_complete(1)), (make_cycle(5), make_cycle(3) + make_path(2))]
    corpus += list(_homind_pairs(rng, 24))
    seen = set()
    for G, H in corpus:
        cp = decide_homind(builtin_class("cycles-and-paths"), G, H).indistinguishable
        cy = decide_homind(builtin_class("cycles"), G, H).indistinguishable
        assert decide_cycles_spectral(*cyclespaths_to_cycles(G, H, lift=LIFT)).indistinguishable == cp
        assert decide_cyclespaths_spectral(*cycles_to_cyclespaths(G, H, lift=LIFT)).indistinguishable == cy
        seen.add((cp, cy))
    assert len(seen) == 3
    connected = connected_graphs_up_to(4)
    for _ in range(3):
        G, H, G2, H2 = (random_graph(rng, rng.randint(1, 3)) for _ in range(4))
        L, R = and_combine(G, H, G2, H2)
        for F in connected:
            d1 = enum_hom(F, G) - enum_hom(F, H)
            d2 = enum_hom(F, G2) - enum_hom(F, H2)
            assert enum_hom(F, L) - enum_hom(F, R) == d1 * d1 + d2 * d2


# -- 10 -----------------------------------------------------------------------

@criterion(10, "power-trace comparison agrees with characteristic polynomials")
def test_criterion_10_newton():
    rng = random.Random(10)
    outcomes = set()
    for i in range(200):
        n = rng.randint(1, 5)
        A = random_int_matrix(rng, n, -3, 3)
        B = _similar(rng, A) if i % 2 else random_int_matrix(rng, n, -1, 1) if n > 2 else random_int_matrix(
            rng, n, -3, 3)
        truth = charpoly_cofactor(A) == charpoly_cofactor(B)
        MA, MB = QMatrix.from_rows(A), QMatrix.from_rows(B)
        assert newton_charpoly_equal(MA, MB) == truth == (char_poly(MA) == char_poly(MB))
        outcomes.add(truth)
    assert outcomes == {True, False}


# -- 11 -----------------------------------------------------------------------

def _coloured_digraphs(rng, count, palette):
    for _ in range(count):
        n = rng.randint(1, 3)
        arcs = [(u, v) for u in range(n) for v in range(n) if rng.random() < 0.35]
        yield Graph(n, arcs, directed=True, colours=[rng.choice(palette) for _ in range(n)])


def _all_digraphs(n, colour="c"):
    arcs = [(u, v) for u in range(n) for v in range(n)]
    for mask in range(1 << len(arcs)):
        yield Graph(n, [arcs[i] for i in range(len(arcs)) if mask >> i & 1], directed=True, colours=[colour] * n)


def _hom_ratio_check(patterns, targets):
    fam = default_family(["c"])
    tilde = {}

    def dec(X):
        if X not in tilde:
            tilde[X] = decolour(X, fam).graph
        return tilde[X]
    for F in patterns:
        counts = [(hom_count(F, G), hom_count_sparse(dec(F), dec(G))) for G in targets]
        for (a, at), (b, bt) in product(counts, repeat=2):
            assert (a == b) == (at == bt), (F, a, b, at, bt)


@criterion(11, "decolouring: structure, tip wiring, path-decomposition width, hom-count biconditional")
def test_criterion_11_decolouring():
    fam = default_family()
    rng = random.Random(11)
    for G in _coloured_digraphs(rng, 40, list(fam.palette)):
        D = decolour(G, fam)
        kinds = [r.kind for r in D.gadgets]
        assert kinds.count("direction") == G.num_edges and kinds.count("indicator") == G.n
        assert D.graph.n == G.n + G.num_edges * direction_gadget_size(fam) + sum(
            indicator_gadget_size(fam, c) for c in G.colours)
        for r in D.gadgets:
            blobs = ("P", "Q") if r.kind == "direction" else ("V",)
            for name in blobs:
                tip = r.tips[name]
                assert D.graph.degree(tip) == getattr(fam, name).degree(0) + 1
        bags = D.path_decomposition()
        assert is_path_decomposition(D.graph, bags)
        loopless = Graph(G.n, [(u, v) for u, v in G.edges if u != v])
        assert max(len(b) for b in bags) - 1 <= fam.ell * (pathwidth(loopless) + 1) - 1
    # a quick sample of the hom-count biconditional; the full corpus is the slow suite
    one = Graph(1, [], directed=True, colours=["c"])
    arc = Graph(2, [(0, 1)], directed=True, colours=["c"] * 2)
    _hom_ratio_check([one, arc], list(_all_digraphs(2))[:6])


@pytest.mark.slow
@pytest.mark.skipif(not os.environ.get("HOMAUTO_SLOW"), reason="set HOMAUTO_SLOW=1 for the long hom-ratio suite")
@criterion(11, "decolouring hom-count biconditional, full corpus")
def test_criterion_11_hom_ratio_full():
    dipath = Graph(3, [(0, 1), (1, 2)], directed=True, colours=["c"] * 3)
    tricycle = Graph(3, [(0, 1), (1, 2), (2, 0)], directed=True, colours=["c"] * 3)
    patterns = list(_all_digraphs(1)) + list(_all_digraphs(2))[:8] + [dipath]
    targets = list(_all_digraphs(2)) + [dipath, tricycle]
    _hom_ratio_check(patterns, targets)


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_") and not name.endswith("_full"):
            try:
                fn()
            except Exception:
                failures += 1
    sys.exit(1 if failures else 0)
