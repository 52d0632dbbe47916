"""Alternating forms on a Lie algebra and the Chevalley-Eilenberg differential.

Forms are sparse maps from strictly increasing 1-based index tuples to
rationals, with the determinant normalisation
``(e^{i1} ^ ... ^ e^{ip})(x_1, ..., x_p) = det[e^{ia}(x_b)]``.

Sign convention for ``d``: on 1-forms ``d g(x, y) = -g([x, y])``, so for
``[e1, e2] = e3`` one gets ``d e^3 = -e^1 ^ e^2``.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Sequence

from nilpo.exactlin import SparseMatrix, determinant
from nilpo.liealg import LieAlgebra

Monomial = tuple[int, ...]


def _sort_sign(idx: Sequence[int]) -> tuple[int, Monomial | None]:
    """Sign of the permutation sorting ``idx`` and the sorted tuple (None if repeated)."""
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    lst = list(idx)
    for i in range(len(lst)):
        for j in range(i + 1, len(lst)):
            if lst[i] > lst[j]:
                sign = -sign
    return sign, tuple(sorted(lst))


@dataclass(frozen=True)
class KForm:
    degree: int
    dim: int
    terms: Mapping[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise ValueError("negative degree")
        clean: dict[Monomial, Fraction] = {}
        for mono, c in self.terms.items():
            mono = tuple(mono)
            c = Fraction(c)
            if not c:
                continue
            if len(mono) != self.degree:
                raise ValueError(f"monomial {mono} has wrong degree for a {self.degree}-form")
            if any(b <= a for a, b in zip(mono, mono[1:])):
                raise ValueError(f"monomial {mono} is not strictly increasing")
            if mono and not (1 <= mono[0] and mono[-1] <= self.dim):
                raise ValueError(f"monomial {mono} outside 1..{self.dim}")
            clean[mono] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def from_terms(cls, dim: int, degree: int, terms: Iterable[tuple[Sequence[int], Fraction | int]]) -> "KForm":
        """Accepts unsorted index tuples and folds in the sign of sorting them."""
        acc: dict[Monomial, Fraction] = {}
        for idx, c in terms:
            sign, mono = _sort_sign(idx)
            if mono is None:
                continue
            acc[mono] = acc.get(mono, 0) + sign * Fraction(c)
        return cls(degree, dim, acc)

    @classmethod
    def basis(cls, dim: int, *idx: int) -> "KForm":
        """The monomial ``e^{i1} ^ ... ^ e^{ip}`` (indices in any order)."""
        return cls.from_terms(dim, len(idx), [(idx, 1)])

    @classmethod
    def zero(cls, dim: int, degree: int) -> "KForm":
        return cls(degree, dim, {})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "KForm") -> "KForm":
        self._compatible(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc.get(m, 0) + c
        return KForm(self.degree, self.dim, acc)

    def __neg__(self) -> "KForm":
        return KForm(self.degree, self.dim, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def __mul__(self, scalar) -> "KForm":
        s = Fraction(scalar)
        return KForm(self.degree, self.dim, {m: s * c for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other: "KForm") -> "KForm":
        return wedge(self, other)

    def _compatible(self, other: "KForm") -> None:
        if self.dim != other.dim or self.degree != other.degree:
            raise ValueError("forms of different degree or ambient dimension")

    def vector(self) -> list[Fraction]:
        """Coordinates in the lexicographic monomial basis of its degree."""
        index = monomial_index(self.dim, self.degree)
        out = [Fraction(0)] * len(index)
        for m, c in self.terms.items():
            out[index[m]] = c
        return out

    @classmethod
    def from_vector(cls, dim: int, degree: int, vec: Sequence[Fraction]) -> "KForm":
        monos = monomials(dim, degree)
        return cls(degree, dim, {monos[i]: x for i, x in enumerate(vec) if x})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms.items():
            name = "^".join(f"e{i}" for i in m) or "1"
            parts.append(f"{c}*{name}" if c != 1 else name)
        return " + ".join(parts)


@lru_cache(maxsize=None)
def monomials(dim: int, degree: int) -> tuple[Monomial, ...]:
    """Strictly increasing ``degree``-tuples from 1..dim in lexicographic order."""
    if degree < 0 or degree > dim:
        return ()
    return tuple(combinations(range(1, dim + 1), degree))


@lru_cache(maxsize=None)
def monomial_index(dim: int, degree: int) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomials(dim, degree))}


def wedge(a: KForm, b: KForm) -> KForm:
    if a.dim != b.dim:
        raise ValueError("wedge of forms on different spaces")
    deg = a.degree + b.degree
    if deg > a.dim:
        return KForm(deg, a.dim, {})
    acc: dict[Monomial, Fraction] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            sign, mono = _sort_sign(ma + mb)
            if mono is None:
                continue
            acc[mono] = acc.get(mono, 0) + sign * ca * cb
    return KForm(deg, a.dim, acc)


def evaluate(form: KForm, vectors: Sequence[Mapping[int, Fraction]]) -> Fraction:
    """``form(x_1, ..., x_p)`` with each ``x`` a sparse 1-based vector."""
    if len(vectors) != form.degree:
        raise ValueError("wrong number of arguments")
    total = Fraction(0)
    for mono, c in form.terms.items():
        mat = [[Fraction(x.get(i, 0)) for x in vectors] for i in mono]
        total += c * determinant(mat)
    return total


@lru_cache(maxsize=256)
def _dual_brackets(a: LieAlgebra) -> tuple[tuple[tuple[int, int, Fraction], ...], ...]:
    """``d e^k = sum (i, j, c) c e^i ^ e^j`` for k = 1..m (index 0 unused)."""
    out: list[list[tuple[int, int, Fraction]]] = [[] for _ in range(a.dim + 1)]
    for (i, j), vec in a.brackets.items():
        for k, c in vec.items():
            out[k].append((i, j, -c))
    return tuple(tuple(t) for t in out)


def d_monomial(a: LieAlgebra, mono: Monomial) -> dict[Monomial, Fraction]:
    """The differential of one basis monomial, as a Leibniz sum over positions."""
    de = _dual_brackets(a)
    out: dict[Monomial, Fraction] = {}
    for s, k in enumerate(mono):
        terms = de[k]
        if not terms:
            continue
        rest = mono[:s] + mono[s + 1 :]
        sgn_s = -1 if s % 2 else 1
        for i, j, c in terms:
            if i in rest or j in rest:
                continue
            pi = bisect_left(rest, i)
            pj = bisect_left(rest, j)
            sign = sgn_s if (pi + pj) % 2 == 0 else -sgn_s
            new = rest[:pi] + (i,) + rest[pi:pj] + (j,) + rest[pj:]
            val = out.get(new, 0) + sign * c
            if val:
                out[new] = val
            else:
                out.pop(new, None)
    return out


def d(a: LieAlgebra, f: KForm) -> KForm:
    if f.dim != a.dim:
        raise ValueError("form and algebra dimensions differ")
    acc: dict[Monomial, Fraction] = {}
    for mono, c in f.terms.items():
        for m2, c2 in d_monomial(a, mono).items():
            acc[m2] = acc.get(m2, 0) + c * c2
    return KForm(f.degree + 1, a.dim, acc)


def d_by_evaluation(a: LieAlgebra, f: KForm) -> KForm:
    """``d f`` from the pointwise formula

    ``d f(x_1..x_{p+1}) = sum_{i<j} (-1)^{i+j} f([x_i, x_j], x_1..^i..^j..)``

    evaluated on basis tuples.  Slow; kept as an independent check of ``d``.
    """
    p = f.degree
    acc = {}
    for mono in monomials(a.dim, p + 1):
        xs = [{i: Fraction(1)} for i in mono]
        total = Fraction(0)
        for i, j in combinations(range(p + 1), 2):
            br = a.bracket(xs[i], xs[j])
            if not br:
                continue
            rest = [x for t, x in enumerate(xs) if t not in (i, j)]
            sign = 1 if (i + j) % 2 == 0 else -1
            total += sign * evaluate(f, [br] + rest)
        if total:
            acc[mono] = total
    return KForm(p + 1, a.dim, acc)


def differential_matrix(a: LieAlgebra, p: int) -> SparseMatrix:
    """Matrix of ``d: Lambda^p -> Lambda^{p+1}`` in the lexicographic monomial bases."""
    if not 0 <= p <= a.dim:
        raise ValueError(f"degree {p} outside 0..{a.dim}")
    src = monomials(a.dim, p)
    tgt = monomial_index(a.dim, p + 1)
    entries = {}
    for col, mono in enumerate(src):
        for m2, c in d_monomial(a, mono).items():
            entries[(tgt[m2], col)] = c
    return SparseMatrix(comb(a.dim, p + 1), len(src), entries)


def pullback(f: KForm, mat: Sequence[Sequence[Fraction]]) -> KForm:
    """``(A^* f)(x_1..x_p) = f(A x_1, ..., A x_p)``; ``mat[i][j]`` is the e_i-coefficient of ``A e_j``."""
    n = f.dim
    if len(mat) != n or any(len(r) != n for r in mat):
        raise ValueError("pullback needs a square matrix of the form's dimension")
    acc = {}
    for target in monomials(n, f.degree):
        cols = [j - 1 for j in target]
        total = Fraction(0)
        for mono, c in f.terms.items():
            minor = [[Fraction(mat[i - 1][j]) for j in cols] for i in mono]
            total += c * determinant(minor)
        if total:
            acc[target] = total
    return KForm(f.degree, n, acc)
