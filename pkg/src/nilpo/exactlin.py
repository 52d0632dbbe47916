"""Exact linear algebra over the rationals.

Matrices are sparse maps ``(row, col) -> Fraction``; subspaces are kept as
reduced row-echelon bases.  Elimination runs on integer rows (each row is
scaled by the lcm of its denominators and reduced fraction-free), which is
much faster than normalising Fractions at every step and never rounds.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "SparseMatrix",
    "SubspaceBasis",
    "Echelon",
    "DimensionMismatch",
    "NotASubspace",
    "rref",
    "rank",
    "kernel_basis",
    "subspace_sum",
    "subspace_intersect",
    "quotient_dim",
    "determinant",
    "solve",
    "parse_rational",
    "format_rational",
]


class DimensionMismatch(ValueError):
    """Two objects live in coordinate spaces of different dimension."""


class NotASubspace(ValueError):
    """``quotient_dim(u, w)`` was called with ``w`` not contained in ``u``."""


def parse_rational(text: str | int | Fraction) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    return Fraction(text)


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# integer row kernels
# ---------------------------------------------------------------------------


def _int_row(row: Mapping[int, Fraction | int]) -> dict[int, int]:
    """Scale a rational row to a primitive integer row with the same span."""
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    out = {}
    for c, v in row.items():
        if v:
            out[c] = int(v * den)
    return _primitive(out)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        for c in row:
            row[c] //= g
    return row


class Echelon:
    """Incremental fraction-free row echelon form over the integers.

    Each stored row has its pivot at its smallest column index, so the set
    of pivot columns after inserting rows is the greedy (leftmost) column
    basis of the row space.  That property is what rank profiles rely on.
    """

    __slots__ = ("pivots",)

    def __init__(self) -> None:
        self.pivots: dict[int, dict[int, int]] = {}

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Mapping[int, int]) -> dict[int, int]:
        """Return ``row`` reduced against every stored pivot (a scalar multiple)."""
        pivots = self.pivots
        row = dict(row)
        heap = [c for c in row if c in pivots]
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            a = row.get(c)
            if a is None:
                continue
            prow = pivots[c]
            b = prow[c]
            g = gcd(a, b)
            fa, fb = a // g, b // g
            if fb != 1:
                for cc in row:
                    row[cc] *= fb
            for cc, pv in prow.items():
                old = row.get(cc)
                if old is None:
                    row[cc] = -fa * pv
                    if cc in pivots:
                        heapq.heappush(heap, cc)
                else:
                    nv = old - fa * pv
                    if nv:
                        row[cc] = nv
                    else:
                        del row[cc]
        return _primitive(row)

    def add(self, row: Mapping[int, int]) -> int | None:
        """Insert an integer row; return its new pivot column, or None if dependent."""
        r = self.reduce(row)
        if not r:
            return None
        c = min(r)
        if r[c] < 0:
            for cc in r:
                r[cc] = -r[cc]
        self.pivots[c] = r
        return c

    def rref_rows(self) -> list[dict[int, Fraction]]:
        """Back-substitute to the reduced row-echelon form, pivots ascending."""
        cols = sorted(self.pivots)
        done: dict[int, dict[int, Fraction]] = {}
        for c in reversed(cols):
            row = {cc: Fraction(v) for cc, v in self.pivots[c].items()}
            for cc in sorted(k for k in row if k != c and k in done):
                v = row.get(cc)
                if not v:
                    continue
                for k2, w in done[cc].items():
                    nv = row.get(k2, 0) - v * w
                    if nv:
                        row[k2] = nv
                    else:
                        row.pop(k2, None)
            lead = row[c]
            if lead != 1:
                row = {k: v / lead for k, v in row.items()}
            done[c] = row
        return [done[c] for c in cols]


# ---------------------------------------------------------------------------
# public types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SparseMatrix:
    rows: int
    cols: int
    entries: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            v = Fraction(v)
            if v:
                clean[(r, c)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence], cols: int | None = None) -> "SparseMatrix":
        nrows = len(data)
        ncols = cols if cols is not None else (len(data[0]) if nrows else 0)
        entries = {}
        for i, row in enumerate(data):
            if len(row) != ncols:
                raise DimensionMismatch("ragged dense matrix")
            for j, v in enumerate(row):
                if v:
                    entries[(i, j)] = Fraction(v)
        return cls(nrows, ncols, entries)

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Mapping[int, Fraction]]) -> "SparseMatrix":
        entries = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    entries[(i, j)] = Fraction(v)
        return cls(nrows, len(columns), entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def row_dicts(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [{} for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def column(self, j: int) -> dict[int, Fraction]:
        return {r: v for (r, c), v in self.entries.items() if c == j}

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def is_zero(self) -> bool:
        return not self.entries

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        by_row: dict[int, list[tuple[int, Fraction]]] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        acc: dict[tuple[int, int], Fraction] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                acc[(i, j)] = acc.get((i, j), 0) + a * b
        return SparseMatrix(self.rows, other.cols, acc)


@dataclass(frozen=True)
class SubspaceBasis:
    """Subspace of Q^n stored as its reduced row-echelon basis."""

    ambient_dim: int
    vectors: tuple[tuple[Fraction, ...], ...] = ()

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(v) if x) for v in self.vectors)

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Sequence | Mapping[int, Fraction]]) -> "SubspaceBasis":
        rows = []
        for v in vectors:
            if isinstance(v, Mapping):
                row = dict(v)
            else:
                if len(v) != ambient_dim:
                    raise DimensionMismatch(f"vector of length {len(v)} in Q^{ambient_dim}")
                row = {i: x for i, x in enumerate(v) if x}
            rows.append(row)
        return _basis_from_rows(ambient_dim, rows)

    @classmethod
    def whole(cls, n: int) -> "SubspaceBasis":
        return cls.span(n, ({i: Fraction(1)} for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> "SubspaceBasis":
        return cls(n, ())

    def sparse_rows(self) -> list[dict[int, Fraction]]:
        return [{i: x for i, x in enumerate(v) if x} for v in self.vectors]

    def reduce(self, vector: Sequence | Mapping[int, Fraction]) -> tuple[Fraction, ...]:
        """Canonical representative of ``vector`` modulo this subspace."""
        if isinstance(vector, Mapping):
            out = [Fraction(0)] * self.ambient_dim
            for i, x in vector.items():
                out[i] = Fraction(x)
        else:
            if len(vector) != self.ambient_dim:
                raise DimensionMismatch("vector length does not match ambient dimension")
            out = [Fraction(x) for x in vector]
        for p, v in zip(self.pivots, self.vectors):
            a = out[p]
            if a:
                for i, x in enumerate(v):
                    if x:
                        out[i] -= a * x
        return tuple(out)

    def contains(self, vector: Sequence | Mapping[int, Fraction]) -> bool:
        return not any(self.reduce(vector))

    def contains_subspace(self, other: "SubspaceBasis") -> bool:
        _check_ambient(self, other)
        return all(self.contains(v) for v in other.vectors)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.vectors == other.vectors

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.vectors))


def _basis_from_rows(ncols: int, rows: Iterable[Mapping[int, Fraction]]) -> SubspaceBasis:
    ech = Echelon()
    int_rows = [_int_row(r) for r in rows]
    int_rows = [r for r in int_rows if r]
    # sparse, small-coefficient rows first keeps fill and coefficient growth down
    int_rows.sort(key=lambda r: (len(r), max(abs(v) for v in r.values()).bit_length()))
    for r in int_rows:
        if any(c < 0 or c >= ncols for c in r):
            raise IndexError("row entry outside ambient dimension")
        ech.add(r)
    vecs = []
    for row in ech.rref_rows():
        v = [Fraction(0)] * ncols
        for c, x in row.items():
            v[c] = x
        vecs.append(tuple(v))
    return SubspaceBasis(ncols, tuple(vecs))


def _check_ambient(u: SubspaceBasis, v: SubspaceBasis) -> None:
    if u.ambient_dim != v.ambient_dim:
        raise DimensionMismatch(f"ambient dimensions differ: {u.ambient_dim} vs {v.ambient_dim}")


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def rref(m: SparseMatrix) -> SubspaceBasis:
    """Reduced row-echelon basis of the row space of ``m``."""
    return _basis_from_rows(m.cols, m.row_dicts())


def rank(m: SparseMatrix) -> int:
    ech = Echelon()
    rows = [_int_row(r) for r in m.row_dicts()]
    rows.sort(key=len)
    for r in rows:
        if r:
            ech.add(r)
    return len(ech)


def kernel_basis(m: SparseMatrix) -> SubspaceBasis:
    """Basis of ``{x : m x = 0}`` in reduced row-echelon form."""
    n = m.cols
    ech = Echelon()
    for r in m.row_dicts():
        r = _int_row(r)
        if r:
            ech.add(r)
    reduced = ech.rref_rows()
    pivot_cols = {min(r) for r in reduced}
    vecs = []
    for f in range(n):
        if f in pivot_cols:
            continue
        v = {f: Fraction(1)}
        for row in reduced:
            x = row.get(f)
            if x:
                v[min(row)] = -x
        vecs.append(v)
    return _basis_from_rows(n, vecs)


def subspace_sum(u: SubspaceBasis, v: SubspaceBasis) -> SubspaceBasis:
    _check_ambient(u, v)
    return _basis_from_rows(u.ambient_dim, u.sparse_rows() + v.sparse_rows())


def subspace_intersect(u: SubspaceBasis, v: SubspaceBasis) -> SubspaceBasis:
    _check_ambient(u, v)
    n = u.ambient_dim
    if not u.dim or not v.dim:
        return SubspaceBasis.zero(n)
    # columns u_1..u_a, -v_1..-v_b; a kernel vector (x, y) gives sum x_i u_i in both
    a = u.dim
    cols = u.sparse_rows() + [{i: -x for i, x in r.items()} for r in v.sparse_rows()]
    ker = kernel_basis(SparseMatrix.from_columns(n, cols))
    urows = u.sparse_rows()
    out = []
    for kv in ker.vectors:
        w: dict[int, Fraction] = {}
        for i in range(a):
            x = kv[i]
            if x:
                for c, y in urows[i].items():
                    w[c] = w.get(c, 0) + x * y
        out.append(w)
    return _basis_from_rows(n, out)


def quotient_dim(u: SubspaceBasis, w: SubspaceBasis) -> int:
    _check_ambient(u, w)
    if not u.contains_subspace(w):
        raise NotASubspace("quotient_dim: w is not contained in u")
    return u.dim - w.dim


def determinant(square: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(square)
    if any(len(r) != n for r in square):
        raise DimensionMismatch("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    den = 1
    for r in square:
        for x in r:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
    a = [[int(Fraction(x) * den) for x in r] for r in square]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return Fraction(sign * a[n - 1][n - 1], den**n)


def solve(m: SparseMatrix, b: Sequence) -> tuple[Fraction, ...] | None:
    """One solution of ``m x = b`` (free variables set to 0), or None."""
    if len(b) != m.rows:
        raise DimensionMismatch("right-hand side length does not match row count")
    n = m.cols
    rows = m.row_dicts()
    for i, x in enumerate(b):
        if x:
            rows[i][n] = Fraction(x)
    ech = Echelon()
    for r in rows:
        r = _int_row(r)
        if r:
            ech.add(r)
    if n in ech.pivots:
        return None
    x = [Fraction(0)] * n
    for row in ech.rref_rows():
        x[min(row)] = row.get(n, Fraction(0))
    return tuple(x)
