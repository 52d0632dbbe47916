"""Finite-dimensional Lie algebras over Q given by sparse structure constants.

Indices are 1-based throughout the public API, matching the usual
``[e_i, e_j] = sum_k c_ij^k e_k`` notation.  Only pairs ``i < j`` are
stored; ``[e_j, e_i]`` is read as the negative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

from nilpo.exactlin import SubspaceBasis

if TYPE_CHECKING:
    from nilpo.exterior import KForm

Vector = dict[int, Fraction]


class NotNilpotent(ValueError):
    pass


class FormNotClosed(ValueError):
    pass


class InvalidAlgebra(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    """A Jacobi defect: ``[[e_i,e_j],e_k] + cyclic`` is ``defect``, not zero."""

    triple: tuple[int, int, int]
    defect: tuple[tuple[int, Fraction], ...]

    def __str__(self) -> str:
        i, j, k = self.triple
        terms = " + ".join(f"{c}*e{idx}" for idx, c in self.defect)
        return f"Jacobi fails on (e{i}, e{j}, e{k}): {terms}"


@dataclass(frozen=True)
class LieAlgebra:
    dim: int
    basis_labels: tuple[str, ...]
    brackets: Mapping[tuple[int, int], Mapping[int, Fraction]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        labels = tuple(self.basis_labels)
        if len(labels) != self.dim:
            raise InvalidAlgebra(f"{len(labels)} basis labels for dimension {self.dim}")
        clean: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), out in self.brackets.items():
            if not (1 <= i < j <= self.dim):
                raise InvalidAlgebra(f"bracket index pair ({i}, {j}) must satisfy 1 <= i < j <= {self.dim}")
            vec = {}
            for k, c in out.items():
                if not 1 <= k <= self.dim:
                    raise InvalidAlgebra(f"bracket [e{i}, e{j}] has output index {k} outside 1..{self.dim}")
                c = Fraction(c)
                if c:
                    vec[k] = c
            if vec:
                clean[(i, j)] = dict(sorted(vec.items()))
        object.__setattr__(self, "basis_labels", labels)
        object.__setattr__(self, "brackets", dict(sorted(clean.items())))

    @classmethod
    def from_brackets(
        cls,
        dim: int,
        brackets: Mapping[tuple[int, int], Mapping[int, Fraction | int] | int],
        labels: Sequence[str] | None = None,
    ) -> "LieAlgebra":
        """Build from ``{(i, j): {k: c}}``; a bare int ``k`` means ``e_k``.

        Pairs with ``i > j`` are accepted and negated.
        """
        out: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), v in brackets.items():
            vec = {v: Fraction(1)} if isinstance(v, int) else {k: Fraction(c) for k, c in v.items()}
            if i > j:
                i, j = j, i
                vec = {k: -c for k, c in vec.items()}
            elif i == j:
                raise InvalidAlgebra(f"[e{i}, e{i}] must be zero")
            acc = out.setdefault((i, j), {})
            for k, c in vec.items():
                acc[k] = acc.get(k, 0) + c
        if labels is None:
            labels = [f"e{i}" for i in range(1, dim + 1)]
        return cls(dim, tuple(labels), out)

    def __hash__(self) -> int:
        return hash((self.dim, self.basis_labels, tuple((k, tuple(v.items())) for k, v in self.brackets.items())))

    def bracket_basis(self, i: int, j: int) -> Vector:
        if i == j:
            return {}
        if i < j:
            return dict(self.brackets.get((i, j), {}))
        return {k: -c for k, c in self.brackets.get((j, i), {}).items()}

    def bracket(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> Vector:
        out: Vector = {}
        for i, a in x.items():
            for j, b in y.items():
                if i == j:
                    continue
                for k, c in self.bracket_basis(i, j).items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: v for k, v in out.items() if v}

    def is_abelian(self) -> bool:
        return not self.brackets

    def structure_constant(self, i: int, j: int, k: int) -> Fraction:
        return self.bracket_basis(i, j).get(k, Fraction(0))


def _to_dense(vec: Mapping[int, Fraction], dim: int) -> list[Fraction]:
    out = [Fraction(0)] * dim
    for k, c in vec.items():
        out[k - 1] = Fraction(c)
    return out


def _from_dense(vec: Sequence[Fraction]) -> Vector:
    return {i + 1: Fraction(x) for i, x in enumerate(vec) if x}


def validate(a: LieAlgebra) -> list[Violation]:
    """All Jacobi violations, checked exactly on every triple i < j < k."""
    found = []
    for i, j, k in combinations(range(1, a.dim + 1), 3):
        ei, ej, ek = {i: Fraction(1)}, {j: Fraction(1)}, {k: Fraction(1)}
        total: Vector = {}
        for x, y, z in ((ei, ej, ek), (ej, ek, ei), (ek, ei, ej)):
            for idx, c in a.bracket(a.bracket(x, y), z).items():
                total[idx] = total.get(idx, 0) + c
        defect = tuple(sorted((idx, c) for idx, c in total.items() if c))
        if defect:
            found.append(Violation((i, j, k), defect))
    return found


def span_of(a: LieAlgebra, vectors: Iterable[Mapping[int, Fraction]]) -> SubspaceBasis:
    return SubspaceBasis.span(a.dim, (_to_dense(v, a.dim) for v in vectors))


def bracket_with(a: LieAlgebra, space: SubspaceBasis) -> SubspaceBasis:
    """``[a, space]`` as a subspace."""
    out = []
    for row in space.vectors:
        x = _from_dense(row)
        for i in range(1, a.dim + 1):
            v = a.bracket({i: Fraction(1)}, x)
            if v:
                out.append(v)
    return span_of(a, out)


@dataclass(frozen=True)
class SeriesReport:
    ideals: tuple[SubspaceBasis, ...]
    nilpotency_index: int
    center: SubspaceBasis

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.ideals)


def center(a: LieAlgebra) -> SubspaceBasis:
    """Kernel of ``x -> ad x`` as a subspace of the algebra."""
    from nilpo.exactlin import SparseMatrix, kernel_basis

    # equations: for every basis e_i and every output k, sum_j x_j c_{ij}^k = 0
    entries = {}
    row = 0
    for i in range(1, a.dim + 1):
        outs: dict[int, dict[int, Fraction]] = {}
        for j in range(1, a.dim + 1):
            for k, c in a.bracket_basis(i, j).items():
                outs.setdefault(k, {})[j - 1] = c
        for k in sorted(outs):
            for col, c in outs[k].items():
                entries[(row, col)] = c
            row += 1
    return kernel_basis(SparseMatrix(row, a.dim, entries))


def lower_central_series(a: LieAlgebra) -> SeriesReport:
    """``n^0 = n, n^i = [n, n^{i-1}]`` down to zero.

    Raises NotNilpotent if the series stalls at a nonzero ideal.
    """
    current = SubspaceBasis.whole(a.dim)
    ideals = [current]
    while current.dim:
        nxt = bracket_with(a, current)
        if nxt.dim == current.dim:
            raise NotNilpotent(
                f"lower central series stabilises at a nonzero ideal of dimension {nxt.dim}"
            )
        ideals.append(nxt)
        current = nxt
    return SeriesReport(tuple(ideals), len(ideals) - 1, center(a))


def nilpotency_index(a: LieAlgebra) -> int:
    return lower_central_series(a).nilpotency_index


def is_ideal(a: LieAlgebra, space: SubspaceBasis) -> bool:
    return space.contains_subspace(bracket_with(a, space)) if space.dim else True


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------


def abelian(n: int, prefix: str = "e") -> LieAlgebra:
    if n < 0:
        raise ValueError("dimension must be non-negative")
    return LieAlgebra(n, tuple(f"{prefix}{i}" for i in range(1, n + 1)), {})


def direct_sum(a: LieAlgebra, b: LieAlgebra) -> LieAlgebra:
    shift = a.dim
    brackets = {key: dict(v) for key, v in a.brackets.items()}
    for (i, j), out in b.brackets.items():
        brackets[(i + shift, j + shift)] = {k + shift: c for k, c in out.items()}
    labels = list(a.basis_labels)
    seen = set(labels)
    for lab in b.basis_labels:
        new = lab
        while new in seen:
            new = new + "'"
        seen.add(new)
        labels.append(new)
    return LieAlgebra(a.dim + b.dim, tuple(labels), brackets)


def trivial_extension(a: LieAlgebra, s: int) -> LieAlgebra:
    """``R^s + a``; the new central directions are labelled u1..us and come first."""
    if s < 0:
        raise ValueError("s must be non-negative")
    if s == 0:
        return a
    return direct_sum(abelian(s, prefix="u"), a)


def central_extension(a: LieAlgebra, w: "KForm", label: str = "z") -> LieAlgebra:
    """``a + Rz`` with ``[[x, y]] = [x, y] + w(x, y) z``; ``w`` must be closed."""
    from nilpo.exterior import d

    if w.degree != 2 or w.dim != a.dim:
        raise ValueError("central extension needs a 2-form on the algebra")
    if d(a, w).terms:
        raise FormNotClosed("the 2-form is not closed; the extension would violate Jacobi")
    z = a.dim + 1
    brackets = {key: dict(v) for key, v in a.brackets.items()}
    for (i, j), c in w.terms.items():
        brackets.setdefault((i, j), {})[z] = c
    while label in a.basis_labels:
        label = label + "'"
    return LieAlgebra(z, a.basis_labels + (label,), brackets)


def change_basis(a: LieAlgebra, columns: Sequence[Mapping[int, Fraction]], labels: Sequence[str] | None = None) -> LieAlgebra:
    """Structure constants of ``a`` in the basis ``f_j = sum_i columns[j][i] e_i``."""
    from nilpo.exactlin import SparseMatrix, solve

    n = a.dim
    mat = SparseMatrix.from_columns(n, [{i - 1: c for i, c in col.items()} for col in columns])
    brackets = {}
    for p, q in combinations(range(n), 2):
        v = a.bracket(columns[p], columns[q])
        if not v:
            continue
        coords = solve(mat, _to_dense(v, n))
        if coords is None:
            raise InvalidAlgebra("change_basis: columns do not span the algebra")
        brackets[(p + 1, q + 1)] = _from_dense(coords)
    if labels is None:
        labels = [f"f{i}" for i in range(1, n + 1)]
    return LieAlgebra(n, tuple(labels), brackets)
