"""Betti numbers, the canonical filtration and the limit terms E_inf^{p,q}.

Two routes compute ``dim E_inf^{p,q}``:

* :func:`e_infty_dim_reference` builds every space of the quotient

      {x in L^n V_{k-p} : dx = 0}
      / ( d{x in L^{n-1} : dx in L^n V_{k-p}} + {x in L^n V_{k-p-1} : dx = 0} )

  (``n = p + q``, ``L^n V`` the n-th exterior power) with generic subspace
  operations.  It is slow and only meant for small algebras.

* :func:`e_infty_dim` works in a basis adapted to the filtration, where every
  ``L^n V_j`` is spanned by monomials.  Writing ``j = k - p`` and
  ``maxlevel(x)`` for the largest filtration level among a monomial's indices,

      dim E = #{deg-n monomials at level j}
              - #{pivots of d_n gained by the level-j sources}
              - #{pivot targets of d_{n-1} at level exactly j}

  where pivots come from a single echelon form of ``d_n`` (``d_{n-1}``)
  whose sources are inserted by increasing level and whose target columns
  are ordered by decreasing level.  The adapted basis is also homogeneous
  for the finest grading the structure constants admit, so ``d`` splits
  into independent weight blocks.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, lcm
from typing import Mapping, Sequence

from nilpo.exactlin import (
    Echelon,
    SparseMatrix,
    SubspaceBasis,
    determinant,
    kernel_basis,
    quotient_dim,
    rank,
    solve,
    subspace_intersect,
    subspace_sum,
)
from nilpo.exterior import KForm, d, differential_matrix, pullback, wedge
from nilpo.liealg import (
    FormNotClosed,
    LieAlgebra,
    NotNilpotent,
    SeriesReport,
    change_basis,
    lower_central_series,
)


class DecompositionMismatch(RuntimeError):
    """The E_inf terms of some degree do not add up to the Betti number."""


class NotAnAutomorphism(ValueError):
    pass


# ---------------------------------------------------------------------------
# filtration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiltrationBasis:
    """``V_0 = 0 <= V_1 <= ... <= V_k = n*`` in dual coordinates."""

    spaces: tuple[SubspaceBasis, ...]

    @property
    def k(self) -> int:
        return len(self.spaces) - 1

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(v.dim for v in self.spaces)


def annihilator(space: SubspaceBasis) -> SubspaceBasis:
    if not space.dim:
        return SubspaceBasis.whole(space.ambient_dim)
    return kernel_basis(SparseMatrix.from_dense([list(v) for v in space.vectors]))


def filtration(a: LieAlgebra) -> FiltrationBasis:
    """``V_i`` as the annihilator of the i-th lower central ideal."""
    series = lower_central_series(a)
    return FiltrationBasis(tuple(annihilator(ideal) for ideal in series.ideals))


def exterior_power(space: SubspaceBasis, n: int) -> SubspaceBasis:
    """``L^n space`` inside ``L^n`` of the ambient dual space, lexicographic coordinates."""
    m = space.ambient_dim
    if n == 0:
        return SubspaceBasis.whole(1) if space.dim else SubspaceBasis.zero(1)
    ones = [KForm(1, m, {(i + 1,): x for i, x in enumerate(v) if x}) for v in space.vectors]
    vecs = []
    for combo in combinations(ones, n):
        f = combo[0]
        for g in combo[1:]:
            f = wedge(f, g)
        vecs.append(f.vector())
    return SubspaceBasis.span(comb(m, n), vecs)


def filtration_recursive(a: LieAlgebra) -> FiltrationBasis:
    """``V_0 = 0``, ``V_i = {alpha : d alpha in L^2 V_{i-1}}`` until ``V_i`` is everything."""
    m = a.dim
    d1 = differential_matrix(a, 1)
    spaces = [SubspaceBasis.zero(m)]
    while spaces[-1].dim < m:
        target = exterior_power(spaces[-1], 2)
        ann = annihilator(target)
        # alpha qualifies iff every functional vanishing on L^2 V_{i-1} kills d(alpha)
        cond = SparseMatrix.from_dense([list(v) for v in ann.vectors], cols=comb(m, 2)) if ann.dim else None
        if cond is None:
            nxt = SubspaceBasis.whole(m)
        else:
            nxt = kernel_basis(cond @ d1)
        if nxt.dim == spaces[-1].dim:
            raise NotNilpotent("recursive filtration stalls before reaching the whole dual")
        spaces.append(nxt)
    return FiltrationBasis(tuple(spaces))


# ---------------------------------------------------------------------------
# grading and adapted basis
# ---------------------------------------------------------------------------


def bracket_grading(a: LieAlgebra) -> list[tuple[Fraction, ...]]:
    """Finest additive grading compatible with the structure constants.

    Weight of ``e_i`` is the class of the i-th unit vector in ``Q^m`` modulo
    the relations ``w_i + w_j = w_k`` for every nonzero ``c_ij^k``.
    """
    m = a.dim
    rels = []
    for (i, j), out in a.brackets.items():
        for k in out:
            row = {i - 1: Fraction(1)}
            row[j - 1] = row.get(j - 1, 0) + 1
            row[k - 1] = row.get(k - 1, 0) - 1
            rels.append({c: v for c, v in row.items() if v})
    quotient = SubspaceBasis.span(m, rels)
    pivots = set(quotient.pivots)
    free = [c for c in range(m) if c not in pivots]
    out = []
    for i in range(m):
        red = quotient.reduce({i: Fraction(1)})
        out.append(tuple(red[c] for c in free))
    return out


@dataclass(frozen=True)
class AdaptedBasis:
    """An algebra isomorphic to the input whose filtration is monomial.

    ``columns[j]`` expresses the j-th new basis vector in the old basis;
    ``levels[j]`` is the smallest ``i`` with the j-th dual vector in ``V_i``.
    """

    algebra: LieAlgebra
    columns: tuple[dict[int, Fraction], ...]
    levels: tuple[int, ...]
    weights: tuple[tuple[Fraction, ...], ...]
    k: int
    trivial: bool


def adapted_basis(a: LieAlgebra, series: SeriesReport | None = None) -> AdaptedBasis:
    series = series or lower_central_series(a)
    k = series.nilpotency_index
    m = a.dim
    weights = bracket_grading(a)
    classes: dict[tuple, list[int]] = defaultdict(list)
    for i, w in enumerate(weights):
        classes[w].append(i)
    columns: list[tuple[int, dict[int, Fraction], tuple]] = []
    for w, idx in classes.items():
        idx_set = set(idx)
        ech = Echelon()
        # deepest ideal first; a vector first appearing in n^i has filtration depth i
        for depth in range(k - 1, -1, -1):
            ideal = series.ideals[depth]
            for v in ideal.vectors:
                proj = {c: x for c, x in enumerate(v) if x and c in idx_set}
                if not proj:
                    continue
                den = 1
                for x in proj.values():
                    den = lcm(den, x.denominator)
                if ech.add({c: int(x * den) for c, x in proj.items()}) is not None:
                    columns.append((depth + 1, proj, w))
    columns.sort(key=lambda t: min(t[1]))
    if len(columns) != m:
        raise NotNilpotent("could not build a basis adapted to the lower central series")
    trivial = all(len(col) == 1 and next(iter(col.values())) == 1 for _, col, _ in columns)
    cols_1based = [{c + 1: x for c, x in col.items()} for _, col, _ in columns]
    if trivial and [min(col) for _, col, _ in columns] == list(range(m)):
        algebra = a
    else:
        trivial = False
        algebra = change_basis(a, cols_1based)
    return AdaptedBasis(
        algebra=algebra,
        columns=tuple(cols_1based),
        levels=tuple(lv for lv, _, _ in columns),
        weights=tuple(w for _, _, w in columns),
        k=k,
        trivial=trivial,
    )


# ---------------------------------------------------------------------------
# blocked rank profiles
# ---------------------------------------------------------------------------


def _scaled_dual_brackets(a: LieAlgebra) -> tuple[int, list[list[tuple[int, int, int, int, int]]]]:
    """``L * d e^k`` as integer terms ``(bit_i, bit_j, low_i, low_j, c)`` (0-based bits)."""
    den = 1
    for out in a.brackets.values():
        for c in out.values():
            den = lcm(den, c.denominator)
    table: list[list[tuple[int, int, int, int, int]]] = [[] for _ in range(a.dim)]
    for (i, j), out in a.brackets.items():
        bi, bj = 1 << (i - 1), 1 << (j - 1)
        for k, c in out.items():
            table[k - 1].append((bi, bj, bi - 1, bj - 1, int(-c * den)))
    return den, table


def _d_mask(mask: int, table, cache_bits) -> dict[int, int]:
    out: dict[int, int] = {}
    rest_all = mask
    while rest_all:
        low = rest_all & -rest_all
        rest_all ^= low
        k = low.bit_length() - 1
        terms = table[k]
        if not terms:
            continue
        rest = mask ^ low
        parity = (rest & (low - 1)).bit_count()
        for bi, bj, li, lj, c in terms:
            if rest & (bi | bj):
                continue
            sgn = parity + (rest & li).bit_count() + (rest & lj).bit_count()
            new = rest | bi | bj
            v = out.get(new, 0) + (c if sgn % 2 == 0 else -c)
            if v:
                out[new] = v
            else:
                del out[new]
    return out


def _weight_keys(weights: Sequence[tuple[Fraction, ...]]) -> list[int]:
    """Pack weight vectors into ints so that sums of n keys identify sums of n weights."""
    if not weights or not weights[0]:
        return [0] * len(weights)
    den = 1
    for w in weights:
        for x in w:
            den = lcm(den, x.denominator)
    ints = [[int(x * den) for x in w] for w in weights]
    off = 1 + max(abs(x) for w in ints for x in w)
    base = 2 * off * (len(weights) + 1) + 1
    keys = []
    for w in ints:
        key = 0
        for x in reversed(w):
            key = key * base + (x + off)
        keys.append(key)
    return keys


@dataclass
class _DegreeProfile:
    count: list[int]  # sources of this degree per level 0..k
    gained: list[int]  # rank increase of d_n contributed by sources of each level
    target_pivots: list[int]  # pivot columns (degree n+1 targets) per level
    rank: int


class CohomologyEngine:
    """Rank profiles of the differentials of one algebra, computed lazily per degree."""

    def __init__(self, a: LieAlgebra):
        self.original = a
        self.series = lower_central_series(a)
        self.adapted = adapted_basis(a, self.series)
        self.k = self.series.nilpotency_index
        self.m = a.dim
        alg = self.adapted.algebra
        _, self._table = _scaled_dual_brackets(alg)
        self._levels = self.adapted.levels
        self._level_masks = [0] * (self.k + 2)
        for i, lv in enumerate(self._levels):
            self._level_masks[lv] |= 1 << i
        self._keys = _weight_keys(self.adapted.weights)
        self._profiles: dict[int, _DegreeProfile] = {}

    def maxlevel(self, mask: int) -> int:
        if not mask:
            return 1  # constants live in L^0 V_j for every j >= 1
        for lv in range(self.k, 0, -1):
            if mask & self._level_masks[lv]:
                return lv
        return 0

    def _blocks(self, n: int) -> dict[int, list[int]]:
        blocks: dict[int, list[int]] = defaultdict(list)
        keys = self._keys
        for combo in combinations(range(self.m), n):
            mask = 0
            key = 0
            for i in combo:
                mask |= 1 << i
                key += keys[i]
            blocks[key].append(mask)
        return blocks

    def profile(self, n: int) -> _DegreeProfile:
        if n in self._profiles:
            return self._profiles[n]
        k, m = self.k, self.m
        count = [0] * (k + 1)
        gained = [0] * (k + 1)
        tpiv = [0] * (k + 2)
        total = 0
        full = (1 << m) - 1
        if 0 <= n <= m:
            for block in self._blocks(n).values():
                ech = Echelon()
                keyed = sorted((self.maxlevel(s), s) for s in block)
                for lv, s in keyed:
                    count[lv] += 1
                    img = _d_mask(s, self._table, None)
                    if not img:
                        continue
                    # within a level the column order is free; complemented masks
                    # keep fill-in far lower than plain masks
                    row = {((k + 1 - self.maxlevel(t)) << m) | (full ^ t): c for t, c in img.items()}
                    if ech.add(row) is not None:
                        gained[lv] += 1
                        total += 1
                for col in ech.pivots:
                    tpiv[k + 1 - (col >> m)] += 1
        prof = _DegreeProfile(count, gained, tpiv, total)
        self._profiles[n] = prof
        return prof

    def e_infty_dim(self, p: int, q: int) -> int:
        n = p + q
        j = self.k - p
        if n < 0 or n > self.m or j < 1 or j > self.k:
            return 0
        cur = self.profile(n)
        out = cur.count[j] - cur.gained[j]
        if n >= 1:
            out -= self.profile(n - 1).target_pivots[j]
        return out

    def betti_from_profiles(self, i: int) -> int:
        if i < 0 or i > self.m:
            return 0
        cur = self.profile(i)
        prev = self.profile(i - 1).rank if i >= 1 else 0
        return sum(cur.count) - cur.rank - prev


@lru_cache(maxsize=64)
def engine(a: LieAlgebra) -> CohomologyEngine:
    return CohomologyEngine(a)


# ---------------------------------------------------------------------------
# Betti numbers (independent route: original basis, lexicographic columns)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=512)
def _rank_d(a: LieAlgebra, n: int) -> int:
    if n < 0 or n >= a.dim:
        return 0
    if a.dim <= 8:
        return rank(differential_matrix(a, n))
    _, table = _scaled_dual_brackets(a)
    keys = _weight_keys(bracket_grading(a))
    blocks: dict[int, list[int]] = defaultdict(list)
    for combo in combinations(range(a.dim), n):
        mask = 0
        key = 0
        for i in combo:
            mask |= 1 << i
            key += keys[i]
        blocks[key].append(mask)
    total = 0
    full = (1 << a.dim) - 1
    for block in blocks.values():
        ech = Echelon()
        for s in sorted(block):
            img = _d_mask(s, table, None)
            if img and ech.add({full ^ t: c for t, c in img.items()}) is not None:
                total += 1
    return total


def betti(a: LieAlgebra, i: int) -> int:
    """``dim H^i = dim ker d_i - rank d_{i-1}``."""
    if i < 0 or i > a.dim:
        return 0
    return comb(a.dim, i) - _rank_d(a, i) - _rank_d(a, i - 1)


def betti_numbers(a: LieAlgebra) -> list[int]:
    return [betti(a, i) for i in range(a.dim + 1)]


# ---------------------------------------------------------------------------
# E_inf
# ---------------------------------------------------------------------------


def e_infty_dim(a: LieAlgebra, p: int, q: int) -> int:
    return engine(a).e_infty_dim(p, q)


@dataclass(frozen=True)
class EInftyTable:
    k: int
    dims: Mapping[tuple[int, int], int]
    betti: tuple[int, ...] = ()

    def __getitem__(self, pq: tuple[int, int]) -> int:
        return self.dims.get(pq, 0)

    def degree_sum(self, i: int) -> int:
        return sum(v for (p, q), v in self.dims.items() if p + q == i)

    def nonzero(self) -> dict[tuple[int, int], int]:
        return {pq: v for pq, v in self.dims.items() if v}


def e_infty_table(a: LieAlgebra, max_degree: int | None = None) -> EInftyTable:
    """All ``E_inf^{p,q}`` with ``0 <= p <= k-1`` and ``p+q`` up to ``max_degree``.

    Raises DecompositionMismatch if some degree fails to add up to its Betti
    number, which would mean a bug in one of the two rank computations.
    """
    eng = engine(a)
    top = a.dim if max_degree is None else min(max_degree, a.dim)
    dims = {}
    bettis = []
    for i in range(top + 1):
        for p in range(eng.k):
            dims[(p, i - p)] = eng.e_infty_dim(p, i - p)
        b = betti(a, i)
        bettis.append(b)
        got = sum(dims[(p, i - p)] for p in range(eng.k))
        if got != b:
            raise DecompositionMismatch(f"degree {i}: E_inf terms sum to {got}, Betti number is {b}")
    return EInftyTable(eng.k, dims, tuple(bettis))


def e_infty_dim_reference(a: LieAlgebra, p: int, q: int) -> int:
    """``dim E_inf^{p,q}`` straight from kernels, preimages, sums and quotients."""
    n = p + q
    m = a.dim
    filt = filtration(a)
    k = filt.k
    j = k - p
    if n < 0 or n > m:
        return 0
    # V_j for j > k is everything; j <= 0 is zero
    def v(idx: int) -> SubspaceBasis:
        if idx <= 0:
            return SubspaceBasis.zero(m)
        return filt.spaces[min(idx, k)]

    if n == 0:
        top = 1 if j >= 1 else 0
        low = 1 if j - 1 >= 1 else 0
        return top - low
    big = exterior_power(v(j), n)
    small = exterior_power(v(j - 1), n)
    dn = differential_matrix(a, n) if n < m else SparseMatrix(0, comb(m, n))
    closed = kernel_basis(dn) if dn.rows else SubspaceBasis.whole(comb(m, n))
    numer = subspace_intersect(closed, big)
    low_closed = subspace_intersect(closed, small)
    # preimage of L^n V_j under d_{n-1}, then its image
    dprev = differential_matrix(a, n - 1)
    ann = annihilator(big)
    if ann.dim:
        cond = SparseMatrix.from_dense([list(r) for r in ann.vectors], cols=comb(m, n)) @ dprev
        pre = kernel_basis(cond)
    else:
        pre = SubspaceBasis.whole(comb(m, n - 1))
    dense = dprev.dense()
    images = []
    for vec in pre.vectors:
        img = [sum((row[c] * vec[c] for c in range(len(vec)) if vec[c]), Fraction(0)) for row in dense]
        images.append(img)
    boundary = SubspaceBasis.span(comb(m, n), images)
    denom = subspace_sum(boundary, low_closed)
    return quotient_dim(numer, denom)


# ---------------------------------------------------------------------------
# graded classes in E_inf^{0,2} and the automorphism action
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CohomologyClass:
    degree: int
    representative: KForm
    kind: str = "graded"

    def is_zero(self) -> bool:
        return self.representative.is_zero()


@lru_cache(maxsize=64)
def _e02_denominator(a: LieAlgebra) -> SubspaceBasis:
    """Closed 2-forms inside ``L^2 V_{k-1}``."""
    filt = filtration(a)
    k = filt.k
    low = exterior_power(filt.spaces[k - 1], 2) if k >= 1 else SubspaceBasis.zero(comb(a.dim, 2))
    closed = closed_forms(a, 2)
    return subspace_intersect(closed, low)


@lru_cache(maxsize=128)
def closed_forms(a: LieAlgebra, n: int) -> SubspaceBasis:
    if n >= a.dim:
        return SubspaceBasis.whole(comb(a.dim, n))
    return kernel_basis(differential_matrix(a, n))


def e02_class(a: LieAlgebra, w: KForm) -> CohomologyClass:
    """``[w]^{0,2}``: ``w`` reduced modulo closed forms in ``L^2 V_{k-1}``.

    The representative is the unique reduced vector against the echelon
    basis of that space, so two classes agree iff their representatives do.
    """
    if w.degree != 2 or w.dim != a.dim:
        raise ValueError("e02_class needs a 2-form on the algebra")
    if not d(a, w).is_zero():
        raise FormNotClosed("form is not closed")
    rep = _e02_denominator(a).reduce(w.vector())
    return CohomologyClass(2, KForm.from_vector(a.dim, 2, rep), "graded")


def h2_class(a: LieAlgebra, w: KForm) -> CohomologyClass:
    """``[w]`` in ``H^2``: reduced modulo exact 2-forms."""
    if not d(a, w).is_zero():
        raise FormNotClosed("form is not closed")
    exact = SubspaceBasis.span(comb(a.dim, 2), differential_matrix(a, 1).transpose().row_dicts())
    rep = exact.reduce(w.vector())
    return CohomologyClass(2, KForm.from_vector(a.dim, 2, rep), "full")


def check_automorphism(a: LieAlgebra, A: Sequence[Sequence]) -> bool:
    """``A`` invertible with ``[A x, A y] = A [x, y]``; ``A[i][j]`` is the e_i-coefficient of ``A e_j``."""
    m = a.dim
    if len(A) != m or any(len(r) != m for r in A):
        return False
    if determinant(A) == 0:
        return False
    cols = [{i + 1: Fraction(A[i][j]) for i in range(m) if A[i][j]} for j in range(m)]

    def apply(v: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for j, x in v.items():
            for i, y in cols[j - 1].items():
                out[i] = out.get(i, 0) + x * y
        return {i: x for i, x in out.items() if x}

    for i, j in combinations(range(1, m + 1), 2):
        lhs = a.bracket(cols[i - 1], cols[j - 1])
        rhs = apply(a.bracket_basis(i, j))
        if lhs != rhs:
            return False
    return True


def inverse_matrix(A: Sequence[Sequence]) -> list[list[Fraction]]:
    m = len(A)
    mat = SparseMatrix.from_dense(A)
    cols = []
    for j in range(m):
        e = [Fraction(int(i == j)) for i in range(m)]
        sol = solve(mat, e)
        if sol is None:
            raise ValueError("matrix is singular")
        cols.append(sol)
    return [[cols[j][i] for j in range(m)] for i in range(m)]


def aut_action_e02(a: LieAlgebra, A: Sequence[Sequence], c: CohomologyClass) -> CohomologyClass:
    """``A . [w]^{0,2} = [(A^{-1})^* w]^{0,2}``."""
    if not check_automorphism(a, A):
        raise NotAnAutomorphism("matrix does not preserve the bracket")
    return e02_class(a, pullback(c.representative, inverse_matrix(A)))


def aut_action_h2(a: LieAlgebra, A: Sequence[Sequence], c: CohomologyClass) -> CohomologyClass:
    if not check_automorphism(a, A):
        raise NotAnAutomorphism("matrix does not preserve the bracket")
    return h2_class(a, pullback(c.representative, inverse_matrix(A)))


def inner_automorphism(a: LieAlgebra, x: Mapping[int, Fraction]) -> list[list[Fraction]]:
    """``exp(ad x)`` as a dense matrix (a finite sum since ``ad x`` is nilpotent)."""
    m = a.dim
    ad = [[Fraction(0)] * m for _ in range(m)]
    for j in range(1, m + 1):
        for i, c in a.bracket(x, {j: Fraction(1)}).items():
            ad[i - 1][j - 1] = c
    result = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    term = [row[:] for row in result]
    for t in range(1, m + 1):
        term = [[sum((term[i][l] * ad[l][j] for l in range(m)), Fraction(0)) / t for j in range(m)] for i in range(m)]
        if not any(any(r) for r in term):
            break
        result = [[result[i][j] + term[i][j] for j in range(m)] for i in range(m)]
    return result
