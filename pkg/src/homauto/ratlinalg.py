"""Exact rational matrices and polynomials.

Scalars are ``fractions.Fraction``.  ``QMatrix`` is dense in its public view
(``entries`` is the row-major tuple) but keeps only nonzero entries
internally, so the large block-structured matrices built by the automaton
constructions stay cheap.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Mapping, Sequence

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def q(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot read {x!r} as a rational")


def fmt_q(x: Fraction) -> str:
    """Canonical string: "p" for integers, "p/q" otherwise."""
    return str(Fraction(x))


class QMatrix:
    """Immutable rows x cols matrix over Q.  Zero-sized dimensions are fine."""

    __slots__ = ("rows", "cols", "_nz", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimension")
        self.rows = rows
        self.cols = cols
        nz: dict[int, dict[int, Fraction]] = {}
        if entries is not None:
            entries = list(entries)
            if len(entries) != rows * cols:
                raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
            for idx, x in enumerate(entries):
                x = q(x)
                if x:
                    i, j = divmod(idx, cols)
                    nz.setdefault(i, {})[j] = x
        self._nz = nz
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def _from_nz(cls, rows: int, cols: int, nz: dict) -> "QMatrix":
        m = cls.__new__(cls)
        m.rows, m.cols, m._nz, m._hash = rows, cols, nz, None
        return m

    @classmethod
    def from_rows(cls, data: Sequence[Sequence], cols: int | None = None) -> "QMatrix":
        data = [list(r) for r in data]
        if cols is None:
            cols = len(data[0]) if data else 0
        if any(len(r) != cols for r in data):
            raise ValueError("ragged rows")
        return cls(len(data), cols, [x for r in data for x in r])

    @classmethod
    def from_sparse(cls, rows: int, cols: int, items: Mapping[tuple[int, int], object]) -> "QMatrix":
        nz: dict[int, dict[int, Fraction]] = {}
        for (i, j), x in items.items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError((i, j))
            x = q(x)
            if x:
                nz.setdefault(i, {})[j] = x
        return cls._from_nz(rows, cols, nz)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls._from_nz(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls._from_nz(n, n, {i: {i: _ONE} for i in range(n)})

    @classmethod
    def row_vector(cls, values: Sequence) -> "QMatrix":
        return cls(1, len(values), values)

    @classmethod
    def col_vector(cls, values: Sequence) -> "QMatrix":
        return cls(len(values), 1, values)

    @classmethod
    def diag(cls, values: Sequence) -> "QMatrix":
        n = len(values)
        return cls.from_sparse(n, n, {(i, i): v for i, v in enumerate(values)})

    # -- access -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> tuple[Fraction, ...]:
        out = [_ZERO] * (self.rows * self.cols)
        for i, row in self._nz.items():
            base = i * self.cols
            for j, x in row.items():
                out[base + j] = x
        return tuple(out)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self._nz.get(i, {}).get(j, _ZERO)

    def row_items(self, i: int) -> Mapping[int, Fraction]:
        """Nonzero entries of row i as {col: value}; do not mutate."""
        return self._nz.get(i, {})

    def nonzeros(self) -> Iterator[tuple[int, int, Fraction]]:
        for i in sorted(self._nz):
            row = self._nz[i]
            for j in sorted(row):
                yield i, j, row[j]

    def nnz(self) -> int:
        return sum(len(r) for r in self._nz.values())

    def to_rows(self) -> list[list[Fraction]]:
        e = self.entries
        return [list(e[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not self._nz

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self._nz.values() for x in r.values())

    # -- dunder -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and self._nz == other._nz

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, tuple(self.nonzeros())))
        return self._hash

    def __repr__(self) -> str:
        return f"QMatrix({self.rows}x{self.cols}, {[[fmt_q(x) for x in r] for r in self.to_rows()]})"

    def _check_same(self, other: "QMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "QMatrix") -> "QMatrix":
        self._check_same(other)
        nz = {i: dict(r) for i, r in self._nz.items()}
        for i, r in other._nz.items():
            row = nz.setdefault(i, {})
            for j, x in r.items():
                y = row.get(j, _ZERO) + x
                if y:
                    row[j] = y
                else:
                    row.pop(j, None)
            if not row:
                del nz[i]
        return QMatrix._from_nz(self.rows, self.cols, nz)

    def __neg__(self) -> "QMatrix":
        return QMatrix._from_nz(self.rows, self.cols,
                                {i: {j: -x for j, x in r.items()} for i, r in self._nz.items()})

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + (-other)

    def scale(self, c) -> "QMatrix":
        c = q(c)
        if not c:
            return QMatrix.zeros(self.rows, self.cols)
        return QMatrix._from_nz(self.rows, self.cols,
                                {i: {j: c * x for j, x in r.items()} for i, r in self._nz.items()})

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        nz: dict[int, dict[int, Fraction]] = {}
        for i, r in self._nz.items():
            acc: dict[int, Fraction] = {}
            for k, a in r.items():
                for j, b in other._nz.get(k, {}).items():
                    acc[j] = acc.get(j, _ZERO) + a * b
            acc = {j: x for j, x in acc.items() if x}
            if acc:
                nz[i] = acc
        return QMatrix._from_nz(self.rows, other.cols, nz)

    def vecmul(self, vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
        """Sparse row vector times this matrix."""
        acc: dict[int, Fraction] = {}
        for i, a in vec.items():
            for j, b in self._nz.get(i, {}).items():
                acc[j] = acc.get(j, 0) + a * b
        return {j: x for j, x in acc.items() if x}

    def transpose(self) -> "QMatrix":
        nz: dict[int, dict[int, Fraction]] = {}
        for i, r in self._nz.items():
            for j, x in r.items():
                nz.setdefault(j, {})[i] = x
        return QMatrix._from_nz(self.cols, self.rows, nz)

    @property
    def T(self) -> "QMatrix":
        return self.transpose()

    def trace(self) -> Fraction:
        if not self.is_square():
            raise ValueError("trace of a non-square matrix")
        return sum((self._nz.get(i, {}).get(i, _ZERO) for i in range(self.rows)), _ZERO)

    def power(self, k: int) -> "QMatrix":
        if not self.is_square():
            raise ValueError("power of a non-square matrix")
        if k < 0:
            raise ValueError("negative power")
        result = QMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "QMatrix":
        nz = {}
        for i in range(r0, r1):
            row = {j - c0: x for j, x in self._nz.get(i, {}).items() if c0 <= j < c1}
            if row:
                nz[i - r0] = row
        return QMatrix._from_nz(r1 - r0, c1 - c0, nz)


def kron(A: QMatrix, B: QMatrix) -> QMatrix:
    """Kronecker product; row (i, k) maps to i * B.rows + k."""
    nz: dict[int, dict[int, Fraction]] = {}
    for i, ra in A._nz.items():
        for k, rb in B._nz.items():
            row = {}
            for j, a in ra.items():
                base = j * B.cols
                for l, b in rb.items():
                    row[base + l] = a * b
            nz[i * B.rows + k] = row
    return QMatrix._from_nz(A.rows * B.rows, A.cols * B.cols, nz)


def direct_sum(A: QMatrix, B: QMatrix) -> QMatrix:
    nz = {i: dict(r) for i, r in A._nz.items()}
    for i, r in B._nz.items():
        nz[A.rows + i] = {A.cols + j: x for j, x in r.items()}
    return QMatrix._from_nz(A.rows + B.rows, A.cols + B.cols, nz)


def hstack(*ms: QMatrix) -> QMatrix:
    rows = ms[0].rows
    if any(m.rows != rows for m in ms):
        raise ValueError("row count mismatch")
    nz: dict[int, dict[int, Fraction]] = {}
    off = 0
    for m in ms:
        for i, r in m._nz.items():
            nz.setdefault(i, {}).update({off + j: x for j, x in r.items()})
        off += m.cols
    return QMatrix._from_nz(rows, off, nz)


def vstack(*ms: QMatrix) -> QMatrix:
    cols = ms[0].cols
    if any(m.cols != cols for m in ms):
        raise ValueError("column count mismatch")
    nz: dict[int, dict[int, Fraction]] = {}
    off = 0
    for m in ms:
        for i, r in m._nz.items():
            nz[off + i] = dict(r)
        off += m.rows
    return QMatrix._from_nz(off, cols, nz)


# ---------------------------------------------------------------------------
# rank

def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def integer_rows(M: QMatrix) -> list[list[int]]:
    """Rows of M, each scaled by the lcm of its denominators."""
    out = []
    for i in range(M.rows):
        r = M.row_items(i)
        d = 1
        for x in r.values():
            d = _lcm(d, x.denominator)
        row = [0] * M.cols
        for j, x in r.items():
            row[j] = x.numerator * (d // x.denominator)
        out.append(row)
    return out


def bareiss_rank(rows: list[list[int]], ncols: int) -> int:
    """Rank of an integer matrix by fraction-free elimination (mutates rows)."""
    a = rows
    m = len(a)
    r = 0
    prev = 1
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        prow = a[r]
        for i in range(r + 1, m):
            row = a[i]
            f = row[c]
            if f:
                for j in range(c + 1, ncols):
                    row[j] = (piv * row[j] - f * prow[j]) // prev
            else:
                for j in range(c + 1, ncols):
                    if row[j]:
                        row[j] = (piv * row[j]) // prev
            row[c] = 0
        prev = piv
        r += 1
    return r


def sparse_rank(rows: Iterable[Mapping[int, int]]) -> int:
    """Rank of sparse integer rows by leading-column elimination with gcd reduction."""
    pivots: dict[int, dict[int, int]] = {}
    for r in rows:
        v = {j: x for j, x in r.items() if x}
        while v:
            p = min(v)
            row = pivots.get(p)
            if row is None:
                g = 0
                for x in v.values():
                    g = gcd(g, x)
                pivots[p] = {j: x // g for j, x in v.items()}
                break
            a, c = row[p], v[p]
            g = gcd(a, c)
            a, c = a // g, c // g
            out = {j: a * x for j, x in v.items()}
            for j, x in row.items():
                y = out.get(j, 0) - c * x
                if y:
                    out[j] = y
                else:
                    out.pop(j, None)
            v = out
    return len(pivots)


def mat_rank(M: QMatrix) -> int:
    """Exact rank over Q."""
    if M.rows == 0 or M.cols == 0:
        return 0
    if M.nnz() * 4 < M.rows * M.cols:
        return sparse_rank({j: x for j, x in enumerate(r) if x} for r in integer_rows(M))
    return bareiss_rank(integer_rows(M), M.cols)


# ---------------------------------------------------------------------------
# polynomials

class QPoly:
    """Polynomial with Fraction coefficients, index i is the coefficient of x^i.

    The zero polynomial has no coefficients.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [q(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def monic(cls, lower: Sequence) -> "QPoly":
        """x^n + lower[n-1] x^(n-1) + ... + lower[0]."""
        return cls(list(lower) + [1])

    @classmethod
    def from_roots(cls, roots: Sequence) -> "QPoly":
        p = cls([1])
        for r in roots:
            p = p * cls([-q(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __call__(self, x) -> Fraction:
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, QPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "QPoly") -> "QPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (_ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (_ZERO,) * (n - len(other.coeffs))
        return QPoly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "QPoly":
        return QPoly(-c for c in self.coeffs)

    def __sub__(self, other: "QPoly") -> "QPoly":
        return self + (-other)

    def __mul__(self, other: "QPoly") -> "QPoly":
        if self.is_zero() or other.is_zero():
            return QPoly()
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return QPoly(out)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                s = mono
            else:
                s = fmt_q(abs(c)) + mono
            terms.append(("-" if c < 0 else "+", s))
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return head + "".join(f" {sgn} {s}" for sgn, s in terms[1:])


def char_poly(A: QMatrix) -> QPoly:
    """det(xI - A) by Faddeev-LeVerrier."""
    if not A.is_square():
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = A.rows
    c = [_ZERO] * (n + 1)
    c[n] = _ONE
    M = QMatrix.zeros(n, n)
    ident = QMatrix.identity(n)
    for k in range(1, n + 1):
        M = A @ M + ident.scale(c[n - k + 1])
        c[n - k] = -(A @ M).trace() / k
    return QPoly(c)


def companion(p: QPoly) -> QMatrix:
    """Frobenius companion matrix: ones on the subdiagonal, -c_i in the last column."""
    if not p.is_monic():
        raise ValueError("companion matrix needs a monic polynomial")
    n = p.degree
    if n < 1:
        raise ValueError("companion matrix needs degree >= 1")
    items = {(i + 1, i): 1 for i in range(n - 1)}
    for i in range(n):
        items[(i, n - 1)] = -p.coeffs[i]
    return QMatrix.from_sparse(n, n, items)


def trace_powers(A: QMatrix, m: int) -> list[Fraction]:
    """[tr(A^1), ..., tr(A^m)]."""
    out = []
    P = QMatrix.identity(A.rows)
    for _ in range(m):
        P = P @ A
        out.append(P.trace())
    return out


def newton_charpoly_equal(A: QMatrix, B: QMatrix) -> bool:
    """tr(A^k) == tr(B^k) for k = 1..n, which is equivalent to equal char polys."""
    if not (A.is_square() and B.is_square()):
        raise ValueError("square matrices required")
    if A.rows != B.rows:
        raise ValueError(f"size mismatch {A.rows} vs {B.rows}")
    return trace_powers(A, A.rows) == trace_powers(B, B.rows)


def minpoly_degree(A: QMatrix) -> int:
    """Degree of the minimal polynomial, i.e. dim span{I, A, A^2, ...}."""
    if not A.is_square():
        raise ValueError("square matrix required")
    n = A.rows
    if n == 0:
        return 0
    vecs = []
    P = QMatrix.identity(n)
    for _ in range(n + 1):
        vecs.append(list(P.entries))
        P = P @ A
    return mat_rank(QMatrix.from_rows(vecs))
