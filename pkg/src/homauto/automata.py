"""Multiplicity word and tree automata over Q and their series operations.

An MWA (s, Sigma, M, alpha, eta) maps a word a1..at to alpha M(a1) ... M(at) eta.
An MTA maps a term sigma(t1, ..., tn) to (mu(t1) x ... x mu(tn)) mu(sigma), and
its value is mu(t) eta.  Kronecker products pair states row-major, so state
(p, q) of A x B is p * |B| + q.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .ratlinalg import QMatrix, direct_sum, fmt_q, kron, q

Vec = dict  # sparse vector {index: Fraction}


def _vec(m: QMatrix) -> Vec:
    """Row (1 x s) or column (s x 1) matrix as a sparse vector."""
    if m.rows == 1:
        return dict(m.row_items(0))
    return {i: x for i, _, x in m.nonzeros()}


def _dot(v: Vec, w: Vec) -> Fraction:
    if len(v) > len(w):
        v, w = w, v
    return sum((x * w[i] for i, x in v.items() if i in w), Fraction(0))


# ---------------------------------------------------------------------------
# word automata

@dataclass(frozen=True)
class MWA:
    states: int
    alphabet: tuple[str, ...]
    transitions: Mapping[str, QMatrix]
    initial: QMatrix  # 1 x s
    final: QMatrix  # s x 1

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        s = self.states
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("repeated letter in alphabet")
        if set(self.transitions) != set(self.alphabet):
            raise ValueError("every letter needs exactly one transition matrix")
        for a, m in self.transitions.items():
            if m.shape != (s, s):
                raise ValueError(f"transition {a!r} has shape {m.shape}, expected {(s, s)}")
        if self.initial.shape != (1, s) or self.final.shape != (s, 1):
            raise ValueError("initial must be 1 x s and final s x 1")

    def run(self, word: Sequence[str]) -> Vec:
        """alpha M(a1) ... M(at) as a sparse vector."""
        v = _vec(self.initial)
        for a in word:
            if a not in self.transitions:
                raise KeyError(f"unknown letter {a!r}")
            v = self.transitions[a].vecmul(v)
        return v


def mwa_eval(A: MWA, word: Sequence[str]) -> Fraction:
    return _dot(A.run(word), _vec(A.final))


def _same_alphabet(A, B) -> None:
    if tuple(A.alphabet) != tuple(B.alphabet):
        raise ValueError("alphabet mismatch")


def mwa_sum(A: MWA, B: MWA) -> MWA:
    _same_alphabet(A, B)
    return MWA(A.states + B.states, A.alphabet,
               {a: direct_sum(A.transitions[a], B.transitions[a]) for a in A.alphabet},
               _hcat(A.initial, B.initial), _vcat(A.final, B.final))


def mwa_minus(A: MWA, B: MWA) -> MWA:
    _same_alphabet(A, B)
    return MWA(A.states + B.states, A.alphabet,
               {a: direct_sum(A.transitions[a], B.transitions[a]) for a in A.alphabet},
               _hcat(A.initial, B.initial), _vcat(A.final, -B.final))


def mwa_kron(A: MWA, B: MWA) -> MWA:
    _same_alphabet(A, B)
    return MWA(A.states * B.states, A.alphabet,
               {a: kron(A.transitions[a], B.transitions[a]) for a in A.alphabet},
               kron(A.initial, B.initial), kron(A.final, B.final))


def zero_mwa(alphabet: Sequence[str]) -> MWA:
    return MWA(0, tuple(alphabet), {a: QMatrix.zeros(0, 0) for a in alphabet},
               QMatrix.zeros(1, 0), QMatrix.zeros(0, 1))


def _hcat(a: QMatrix, b: QMatrix) -> QMatrix:
    return QMatrix.from_sparse(1, a.cols + b.cols,
                               {**{(0, j): x for _, j, x in a.nonzeros()},
                                **{(0, a.cols + j): x for _, j, x in b.nonzeros()}})


def _vcat(a: QMatrix, b: QMatrix) -> QMatrix:
    return QMatrix.from_sparse(a.rows + b.rows, 1,
                               {**{(i, 0): x for i, _, x in a.nonzeros()},
                                **{(a.rows + i, 0): x for i, _, x in b.nonzeros()}})


# ---------------------------------------------------------------------------
# tree automata

@dataclass(frozen=True)
class MTA:
    states: int
    ranked_alphabet: tuple[tuple[str, int], ...]
    transitions: Mapping[str, QMatrix]  # symbol -> s^arity x s
    final: QMatrix  # s x 1
    _arity: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        ra = tuple((str(sym), int(n)) for sym, n in self.ranked_alphabet)
        object.__setattr__(self, "ranked_alphabet", ra)
        arity = dict(ra)
        if len(arity) != len(ra):
            raise ValueError("repeated symbol in ranked alphabet")
        object.__setattr__(self, "_arity", arity)
        s = self.states
        if set(self.transitions) != set(arity):
            raise ValueError("every symbol needs exactly one transition matrix")
        for sym, n in ra:
            if n < 0:
                raise ValueError("negative arity")
            if self.transitions[sym].shape != (s ** n, s):
                raise ValueError(f"symbol {sym!r} of arity {n} needs shape {(s ** n, s)}")
        if self.final.shape != (s, 1):
            raise ValueError("final must be s x 1")

    def arity(self, sym: str) -> int:
        return self._arity[sym]

    @property
    def alphabet(self) -> tuple[tuple[str, int], ...]:
        return self.ranked_alphabet

    def apply(self, sym: str, vecs: Sequence[Vec]) -> Vec:
        """(v1 x ... x vn) mu(sym) as a sparse vector."""
        if sym not in self._arity:
            raise KeyError(f"unknown symbol {sym!r}")
        n = self._arity[sym]
        if len(vecs) != n:
            raise ValueError(f"symbol {sym!r} has arity {n}, got {len(vecs)} arguments")
        s = self.states
        M = self.transitions[sym]
        if n == 0:
            return dict(M.row_items(0))
        # expand the tensor product of the argument vectors sparsely
        acc: dict[int, Fraction] = {0: Fraction(1)}
        for v in vecs:
            nxt = {}
            for idx, a in acc.items():
                for i, b in v.items():
                    nxt[idx * s + i] = a * b
            acc = nxt
        return M.vecmul(acc)

    def run(self, t) -> Vec:
        return self.apply(t[0], [self.run(c) for c in t[1:]])


def mta_eval(A: MTA, t) -> Fraction:
    return _dot(A.run(t), _vec(A.final))


def _embed(M: QMatrix, arity: int, s: int, total: int, offset: int) -> dict:
    """Entries of M re-indexed into a state space of size ``total`` at ``offset``."""
    items = {}
    for r, c, x in M.nonzeros():
        digits = []
        for _ in range(arity):
            r, d = divmod(r, s)
            digits.append(d)
        row = 0
        for d in reversed(digits):
            row = row * total + d + offset
        items[(row, c + offset)] = x
    return items


def _same_ranked(A: MTA, B: MTA) -> None:
    if A.ranked_alphabet != B.ranked_alphabet:
        raise ValueError("ranked alphabet mismatch")


def _mta_blocks(A: MTA, B: MTA, negate_b: bool) -> MTA:
    _same_ranked(A, B)
    tot = A.states + B.states
    trans = {}
    for sym, n in A.ranked_alphabet:
        items = _embed(A.transitions[sym], n, A.states, tot, 0)
        items.update(_embed(B.transitions[sym], n, B.states, tot, A.states))
        trans[sym] = QMatrix.from_sparse(tot ** n, tot, items)
    fb = -B.final if negate_b else B.final
    return MTA(tot, A.ranked_alphabet, trans, _vcat(A.final, fb))


def mta_sum(A: MTA, B: MTA) -> MTA:
    return _mta_blocks(A, B, False)


def mta_minus(A: MTA, B: MTA) -> MTA:
    return _mta_blocks(A, B, True)


def mta_kron(A: MTA, B: MTA) -> MTA:
    _same_ranked(A, B)
    sa, sb = A.states, B.states
    tot = sa * sb
    trans = {}
    for sym, n in A.ranked_alphabet:
        items = {}
        nzb = list(B.transitions[sym].nonzeros())
        for ra, ca, xa in A.transitions[sym].nonzeros():
            da = _digits(ra, sa, n)
            for rb, cb, xb in nzb:
                db = _digits(rb, sb, n)
                row = 0
                for p, r in zip(da, db):
                    row = row * tot + p * sb + r
                items[(row, ca * sb + cb)] = xa * xb
        trans[sym] = QMatrix.from_sparse(tot ** n, tot, items)
    return MTA(tot, A.ranked_alphabet, trans, kron(A.final, B.final))


def _digits(r: int, s: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        r, d = divmod(r, s)
        out.append(d)
    return out[::-1]


def zero_mta(ranked_alphabet: Sequence[tuple[str, int]]) -> MTA:
    ra = tuple(ranked_alphabet)
    return MTA(0, ra, {sym: QMatrix.zeros(0 if n else 1, 0) for sym, n in ra}, QMatrix.zeros(0, 1))


def mwa_as_mta(A: MWA, leaf: str = "#") -> MTA:
    """The leaf maps to alpha and each letter becomes a unary symbol."""
    if leaf in A.alphabet:
        raise ValueError("leaf symbol clashes with a letter")
    ra = ((leaf, 0),) + tuple((a, 1) for a in A.alphabet)
    trans = {leaf: A.initial, **{a: A.transitions[a] for a in A.alphabet}}
    return MTA(A.states, ra, trans, A.final)


def word_to_term(word: Sequence[str], leaf: str = "#") -> tuple:
    """a1 ... at becomes at(...(a1(leaf)))."""
    t = (leaf,)
    for a in word:
        t = (a, t)
    return t


def term_to_word(t, leaf: str = "#") -> tuple[str, ...]:
    out = []
    while len(t) == 2:
        out.append(t[0])
        t = t[1]
    if t != (leaf,):
        raise ValueError("term is not a unary chain over the leaf")
    return tuple(reversed(out))


# ---------------------------------------------------------------------------
# JSON

def _mat_json(m: QMatrix) -> list[list[str]]:
    return [[fmt_q(x) for x in row] for row in m.to_rows()]


def _mat_from(rows, r: int, c: int, what: str) -> QMatrix:
    if len(rows) != r or any(len(row) != c for row in rows):
        raise ValueError(f"{what}: expected a {r} x {c} matrix")
    return QMatrix(r, c, [q(x) for row in rows for x in row])


def automaton_to_json(A) -> dict:
    if isinstance(A, MWA):
        return {"states": A.states, "alphabet": list(A.alphabet),
                "transitions": {a: _mat_json(A.transitions[a]) for a in A.alphabet},
                "initial": [fmt_q(x) for x in A.initial.entries],
                "final": [fmt_q(x) for x in A.final.entries]}
    return {"states": A.states, "alphabet": [sym for sym, _ in A.ranked_alphabet],
            "arity": {sym: n for sym, n in A.ranked_alphabet},
            "transitions": {sym: _mat_json(A.transitions[sym]) for sym, _ in A.ranked_alphabet},
            "final": [fmt_q(x) for x in A.final.entries]}


def automaton_from_json(d: Mapping):
    """MTA when an "arity" map is present, MWA otherwise."""
    try:
        s = int(d["states"])
        alpha = [str(a) for a in d["alphabet"]]
        trans = d["transitions"]
        final = QMatrix(s, 1, [q(x) for x in d["final"]])
        if "arity" in d:
            ar = {str(k): int(v) for k, v in d["arity"].items()}
            ra = tuple((a, ar[a]) for a in alpha)
            mats = {a: _mat_from(trans[a], s ** n, s, a) for a, n in ra}
            return MTA(s, ra, mats, final)
        mats = {a: _mat_from(trans[a], s, s, a) for a in alpha}
        return MWA(s, tuple(alpha), mats, QMatrix(1, s, [q(x) for x in d["initial"]]), final)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed automaton JSON: {exc}") from exc


def all_words(alphabet: Sequence[str], max_len: int):
    """Every word of length <= max_len in length-then-alphabet order."""
    for n in range(max_len + 1):
        yield from product(alphabet, repeat=n)
