"""Zero-ness and equivalence tests for MWAs and MTAs, with witnesses.

The production path is a forward closure: a breadth-first worklist that keeps
an echelon basis of the reachable row vectors.  The closure works on integer
vectors (every matrix is scaled by a positive constant to clear denominators,
which only rescales reachable vectors), so elimination stays in Python ints.

For MWAs the rank characterisation over the squared automaton is provided as an
independent second algorithm and is used as a cross-check on small inputs.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Callable, Optional, Sequence

from .automata import MTA, MWA, mta_eval, mta_minus, mwa_eval, mwa_minus
from .labelled import format_term, format_word
from .ratlinalg import QMatrix, fmt_q, hstack, kron, mat_rank

DEFAULT_RANK_BOUND = 4


class InternalError(RuntimeError):
    """Two independent computations disagreed; this is a bug, not bad input."""


@dataclass(frozen=True)
class EquivVerdict:
    equivalent: bool
    witness: Optional[tuple] = None  # word (tuple of letters) or term (nested tuple)
    values: Optional[tuple[Fraction, Fraction]] = None
    method: str = "basis"
    kind: str = "word"
    trials: Optional[int] = None

    def witness_str(self) -> Optional[str]:
        if self.witness is None:
            return None
        return format_word(self.witness) if self.kind == "word" else format_term(self.witness)

    def to_json(self) -> dict:
        return {"equivalent": self.equivalent,
                "witness": self.witness_str(),
                "values": None if self.values is None else [fmt_q(x) for x in self.values],
                "method": self.method,
                **({"trials": self.trials} if self.trials is not None else {})}


@dataclass(frozen=True)
class BasisVector:
    tag: tuple  # generating word or term
    vector: QMatrix  # 1 x s


# ---------------------------------------------------------------------------
# integer echelon form

def _primitive(v: dict) -> dict:
    """Scale a sparse rational or integer vector to a primitive integer vector."""
    if not v:
        return {}
    den = 1
    for x in v.values():
        if isinstance(x, Fraction) and x.denominator != 1:
            den = den * x.denominator // gcd(den, x.denominator)
    iv = {i: int(x * den) for i, x in v.items() if x}
    g = 0
    for x in iv.values():
        g = gcd(g, x)
    if g > 1:
        iv = {i: x // g for i, x in iv.items()}
    return iv


class Echelon:
    """Reduced echelon basis of integer row vectors (pivot entries positive)."""

    def __init__(self):
        self.rows: dict[int, dict[int, int]] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: dict[int, int]) -> dict[int, int]:
        # rows are zero on each other's pivots, so one pass suffices
        for p in [p for p in v if p in self.rows]:
            row = self.rows[p]
            v = _axpy(v, row, v[p], row[p])
        return _primitive(v)

    def add(self, v: dict[int, int]) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        if r[p] < 0:
            r = {i: -x for i, x in r.items()}
        r = _primitive(r)
        for q, row in list(self.rows.items()):
            c = row.get(p)
            if c:
                self.rows[q] = _primitive(_axpy(row, r, c, r[p]))
        self.rows[p] = r
        return True


def _axpy(v: dict, row: dict, c: int, a: int) -> dict:
    """a*v - c*row, which clears the pivot column of ``row`` (row[p] = a, v[p] = c)."""
    if a != 1:
        out = {i: a * x for i, x in v.items()}
    else:
        out = dict(v)
    for i, x in row.items():
        y = out.get(i, 0) - c * x
        if y:
            out[i] = y
        else:
            out.pop(i, None)
    return out


# ---------------------------------------------------------------------------
# integer views of automata

def _int_rows(M: QMatrix) -> dict[int, list[tuple[int, int]]]:
    """M scaled by a positive constant to integers, as {row: [(col, value)]}."""
    den = 1
    for _, _, x in M.nonzeros():
        den = den * x.denominator // gcd(den, x.denominator)
    out: dict[int, list[tuple[int, int]]] = {}
    for i, j, x in M.nonzeros():
        out.setdefault(i, []).append((j, int(x * den)))
    return out


def _int_vecmul(v: dict[int, int], rows: dict[int, list[tuple[int, int]]]) -> dict[int, int]:
    out: dict[int, int] = {}
    for i, a in v.items():
        r = rows.get(i)
        if r:
            for j, b in r:
                out[j] = out.get(j, 0) + a * b
    return {j: x for j, x in out.items() if x}


def _int_dot(v: dict[int, int], eta: dict[int, int]) -> int:
    if len(v) > len(eta):
        return sum(x * v[i] for i, x in eta.items() if i in v)
    return sum(x * eta[i] for i, x in v.items() if i in eta)


def _col(M: QMatrix) -> dict[int, int]:
    return _primitive({i: x for i, _, x in M.nonzeros()})


def _row(M: QMatrix) -> dict[int, int]:
    return _primitive(dict(M.row_items(0)))


# ---------------------------------------------------------------------------
# word automata: forward closure

def word_closure(initial: dict[int, int], mats: dict[str, dict], alphabet: Sequence[str],
                 eta: Optional[dict[int, int]] = None, stop_at_witness: bool = False):
    """Breadth-first forward closure from ``initial`` under integer row matrices.

    Returns (basis, witness) where basis is a list of (word, vector) and witness
    is the first basis word whose vector has a nonzero product with ``eta``.
    """
    ech = Echelon()
    basis: list[tuple[tuple, dict]] = []
    witness = None

    def offer(word, vec) -> bool:
        nonlocal witness
        if not vec or not ech.add(vec):
            return False
        basis.append((word, vec))
        if witness is None and eta is not None and _int_dot(vec, eta) != 0:
            witness = word
        return True

    offer((), initial)
    head = 0
    while head < len(basis) and not (stop_at_witness and witness is not None):
        word, vec = basis[head]
        head += 1
        for a in alphabet:
            offer(word + (a,), _int_vecmul(vec, mats[a]))
            if stop_at_witness and witness is not None:
                break
    return basis, witness


def _mwa_int(A: MWA):
    return _row(A.initial), {a: _int_rows(A.transitions[a]) for a in A.alphabet}, _col(A.final)


def mwa_forward_basis(A: MWA) -> list[BasisVector]:
    """Basis of span{alpha M(w)} in breadth-first order, each tagged with its word."""
    init, mats, _ = _mwa_int(A)
    basis, _ = word_closure(init, mats, A.alphabet)
    out = []
    for word, _ in basis:
        v = A.run(word)
        out.append(BasisVector(word, QMatrix.from_sparse(1, A.states, {(0, i): x for i, x in v.items()})))
    return out


def mwa_is_zero_basis(A: MWA) -> EquivVerdict:
    """Zero iff every forward-basis vector is orthogonal to eta.

    The witness is reported with the values (value of A, 0).
    """
    init, mats, eta = _mwa_int(A)
    _, w = word_closure(init, mats, A.alphabet, eta, stop_at_witness=True)
    if w is None:
        return EquivVerdict(True, method="basis")
    return EquivVerdict(False, w, (mwa_eval(A, w), Fraction(0)), "basis")


def rank_system(A: MWA) -> tuple[QMatrix, QMatrix]:
    """The (n^3 + 1) x n^3 block system [I; -T2 I; ...; alpha2 ... alpha2] and b = (eta2, 0, ...)."""
    n = A.states
    n2 = n * n
    a2 = kron(A.initial, A.initial)
    e2 = kron(A.final, A.final)
    T2 = QMatrix.zeros(n2, n2)
    for a in A.alphabet:
        T2 = T2 + kron(A.transitions[a], A.transitions[a])
    items = {}
    for blk in range(n):
        for i in range(n2):
            items[(blk * n2 + i, blk * n2 + i)] = 1
        if blk > 0:
            for i, j, x in T2.nonzeros():
                items[(blk * n2 + i, (blk - 1) * n2 + j)] = -x
        for _, j, x in a2.nonzeros():
            items[(n * n2, blk * n2 + j)] = x
    N = QMatrix.from_sparse(n * n2 + 1, n * n2, items)
    b = QMatrix.from_sparse(n * n2 + 1, 1, {(i, 0): x for i, _, x in e2.nonzeros()})
    return N, b


def mwa_is_zero_rank(A: MWA) -> bool:
    """Zero iff rank([A | b]) < n^3 + 1 for the squared-automaton block system."""
    n = A.states
    if n == 0:
        return True
    N, b = rank_system(A)
    return mat_rank(hstack(N, b)) < n ** 3 + 1


def mwa_equiv(A: MWA, B: MWA, rank_bound: int = DEFAULT_RANK_BOUND) -> EquivVerdict:
    """Equivalence via the basis method on A - B, cross-checked by the rank method when small."""
    if tuple(A.alphabet) != tuple(B.alphabet):
        raise ValueError("alphabet mismatch")
    D = mwa_minus(A, B)
    v = mwa_is_zero_basis(D)
    if D.states <= rank_bound and mwa_is_zero_rank(D) != v.equivalent:
        raise InternalError("basis and rank methods disagree")
    if v.equivalent:
        return v
    w = v.witness
    return EquivVerdict(False, w, (mwa_eval(A, w), mwa_eval(B, w)), "basis")


def mwa_equiv_rank(A: MWA, B: MWA) -> EquivVerdict:
    """Equivalence decided by the rank method alone (no witness)."""
    if tuple(A.alphabet) != tuple(B.alphabet):
        raise ValueError("alphabet mismatch")
    return EquivVerdict(mwa_is_zero_rank(mwa_minus(A, B)), method="rank")


# ---------------------------------------------------------------------------
# tree automata: multilinear closure

class _IntSymbol:
    """Integer view of one transition matrix s^n x s."""

    def __init__(self, M: QMatrix, arity: int, s: int):
        self.arity = arity
        self.s = s
        self.rows = _int_rows(M)
        # row index -> digit tuple, for rows that carry entries
        self.digits = {}
        for r in self.rows:
            ds, x = [], r
            for _ in range(arity):
                x, d = divmod(x, s)
                ds.append(d)
            self.digits[r] = tuple(reversed(ds))

    def apply(self, vecs: Sequence[dict[int, int]]) -> dict[int, int]:
        if self.arity == 0:
            return {j: x for j, x in self.rows.get(0, [])}
        size = 1
        for v in vecs:
            size *= len(v)
        out: dict[int, int] = {}
        if size <= len(self.rows):
            for combo in product(*(v.items() for v in vecs)):
                r, c = 0, 1
                for i, x in combo:
                    r = r * self.s + i
                    c *= x
                for j, b in self.rows.get(r, ()):
                    out[j] = out.get(j, 0) + c * b
        else:
            for r, ds in self.digits.items():
                c = 1
                for d, v in zip(ds, vecs):
                    x = v.get(d)
                    if not x:
                        c = 0
                        break
                    c *= x
                if c:
                    for j, b in self.rows[r]:
                        out[j] = out.get(j, 0) + c * b
        return {j: x for j, x in out.items() if x}


def tree_closure(symbols: Sequence[tuple[str, int]], apply: Callable, eta: Optional[dict[int, int]] = None,
                 stop_at_witness: bool = False):
    """Multilinear closure: apply every symbol to all tuples of basis vectors.

    ``apply(sym, vecs)`` returns the integer vector of sym(vecs).  Each new basis
    vector v is combined with tuples over (processed vectors + v) that contain v,
    so every tuple of basis vectors is tried exactly once.  Returns (basis, witness)
    with basis a list of (term, vector).
    """
    ech = Echelon()
    basis: list[tuple[tuple, dict]] = []
    witness = None

    def offer(term, vec) -> None:
        nonlocal witness
        if vec and ech.add(vec):
            basis.append((term, vec))
            if witness is None and eta is not None and _int_dot(vec, eta) != 0:
                witness = term

    def done() -> bool:
        return stop_at_witness and witness is not None

    for sym, n in symbols:
        if n == 0:
            offer((sym,), apply(sym, ()))
    head = 0
    while head < len(basis) and not done():
        head += 1
        cur = basis[:head]
        new = head - 1
        for sym, n in symbols:
            if n == 0:
                continue
            for combo in product(range(head), repeat=n):
                if new not in combo:
                    continue
                offer((sym,) + tuple(cur[i][0] for i in combo), apply(sym, [cur[i][1] for i in combo]))
                if done():
                    break
            if done():
                break
    return basis, witness


def _mta_int(A: MTA):
    syms = {sym: _IntSymbol(A.transitions[sym], n, A.states) for sym, n in A.ranked_alphabet}
    return syms, _col(A.final)


def mta_reach_basis(A: MTA) -> list[BasisVector]:
    """Basis of span{mu(t)}, each vector tagged with a generating term."""
    syms, _ = _mta_int(A)
    basis, _ = tree_closure(A.ranked_alphabet, lambda s, vs: syms[s].apply(vs))
    out = []
    for term, _ in basis:
        v = A.run(term)
        out.append(BasisVector(term, QMatrix.from_sparse(1, A.states, {(0, i): x for i, x in v.items()})))
    return out


def mta_is_zero(A: MTA) -> EquivVerdict:
    syms, eta = _mta_int(A)
    _, t = tree_closure(A.ranked_alphabet, lambda s, vs: syms[s].apply(vs), eta, stop_at_witness=True)
    if t is None:
        return EquivVerdict(True, method="closure", kind="term")
    return EquivVerdict(False, t, (mta_eval(A, t), Fraction(0)), "closure", "term")


def mta_equiv(A: MTA, B: MTA) -> EquivVerdict:
    if A.ranked_alphabet != B.ranked_alphabet:
        raise ValueError("ranked alphabet mismatch")
    v = mta_is_zero(mta_minus(A, B))
    if v.equivalent:
        return v
    t = v.witness
    return EquivVerdict(False, t, (mta_eval(A, t), mta_eval(B, t)), "closure", "term")


def random_term(ranked_alphabet: Sequence[tuple[str, int]], max_size: int, rng: random.Random) -> tuple:
    """A random well-ranked term with at most ``max_size`` symbols."""
    leaves = [s for s, n in ranked_alphabet if n == 0]
    if not leaves:
        raise ValueError("no arity-0 symbol")
    inner = [(s, n) for s, n in ranked_alphabet if n > 0]

    def build(budget: int) -> tuple:
        opts = [(s, n) for s, n in inner if n < budget]
        if not opts or rng.random() < 0.3:
            return (rng.choice(leaves),)
        s, n = rng.choice(opts)
        # split budget - 1 into n positive parts
        cuts = sorted(rng.sample(range(1, budget - 1), n - 1)) if n > 1 else []
        parts = [b - a for a, b in zip([0] + cuts, cuts + [budget - 1])]
        return (s, *(build(p) for p in parts))

    return build(max(1, max_size))


def mta_equiv_randomised(A: MTA, B: MTA, trials: int, seed: int = 0) -> EquivVerdict:
    """One-sided check on random terms of size <= total states; "inequivalent" is always correct."""
    if A.ranked_alphabet != B.ranked_alphabet:
        raise ValueError("ranked alphabet mismatch")
    rng = random.Random(seed)
    bound = max(1, A.states + B.states)
    for _ in range(trials):
        t = random_term(A.ranked_alphabet, bound, rng)
        a, b = mta_eval(A, t), mta_eval(B, t)
        if a != b:
            return EquivVerdict(False, t, (a, b), "randomised", "term", trials)
    return EquivVerdict(True, method="randomised", kind="term", trials=trials)
