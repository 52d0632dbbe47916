"""Deciding whether a nilpotent Lie algebra carries a symplectic form.

A positive answer is always an explicit closed 2-form whose Gram
determinant is checked to be nonzero in exact arithmetic.  A negative
answer is certified only by odd dimension or by ``E_inf^{0,2} = 0``.
Anything else is reported as inconclusive together with the
Schwartz-Zippel bound on the chance that the random search missed a
witness.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from nilpo.cohomology import closed_forms, e_infty_dim
from nilpo.exactlin import SparseMatrix, SubspaceBasis, determinant
from nilpo.exterior import KForm, monomials
from nilpo.liealg import LieAlgebra
from nilpo.rootsys import GradedNilradical

DEFAULT_SAMPLES = 64
DEFAULT_BOUND = 10**6

SYMPLECTIC = "symplectic"
NON_SYMPLECTIC = "non_symplectic"
INCONCLUSIVE = "inconclusive"
ODD_DIMENSION = "odd_dimension"
OBSTRUCTION_VANISHES = "obstruction_vanishes"


@dataclass(frozen=True)
class SymplecticVerdict:
    status: str
    witness: KForm | None = None
    reason: str | None = None
    samples: int = 0
    degree_bound: int = 0
    sample_space_size: int = 0
    failure_bound: Fraction | None = None

    @property
    def is_symplectic(self) -> bool:
        return self.status == SYMPLECTIC

    @property
    def label(self) -> str:
        if self.status == SYMPLECTIC:
            return "Symplectic"
        if self.status == NON_SYMPLECTIC:
            return "CertifiedNonSymplectic(" + ("OddDimension" if self.reason == ODD_DIMENSION else "ObstructionVanishes") + ")"
        return "Inconclusive"


def closed_two_forms(a: LieAlgebra) -> SubspaceBasis:
    """Echelon basis of the closed 2-forms, in lexicographic monomial coordinates."""
    return closed_forms(a, 2)


def gram_matrix(w: KForm) -> SparseMatrix:
    """Skew matrix ``M[i][j] = w(e_{i+1}, e_{j+1})``."""
    if w.degree != 2:
        raise ValueError("Gram matrix needs a 2-form")
    entries = {}
    for (i, j), c in w.terms.items():
        entries[(i - 1, j - 1)] = c
        entries[(j - 1, i - 1)] = -c
    return SparseMatrix(w.dim, w.dim, entries)


def gram_determinant(w: KForm) -> Fraction:
    return determinant(gram_matrix(w).dense())


def is_nondegenerate(w: KForm) -> bool:
    return w.dim % 2 == 0 and gram_determinant(w) != 0


def pfaffian(m: Sequence[Sequence]) -> Fraction:
    """Pfaffian of a skew matrix by expansion along the first row."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    if n % 2:
        return Fraction(0)
    total = Fraction(0)
    for j in range(1, n):
        a = Fraction(m[0][j])
        if not a:
            continue
        keep = [t for t in range(1, n) if t != j]
        minor = [[m[r][c] for c in keep] for r in keep]
        sign = 1 if j % 2 == 1 else -1
        total += sign * a * pfaffian(minor)
    return total


def _integer_basis(space: SubspaceBasis) -> list[list[int]]:
    out = []
    for v in space.vectors:
        den = 1
        for x in v:
            den = lcm(den, x.denominator)
        out.append([int(x * den) for x in v])
    return out


def sample_rng(seed: int, index: int) -> random.Random:
    """Independent stream per sample so samples can be evaluated in any order."""
    return random.Random(f"nilpo:{seed}:{index}")


def find_witness(
    a: LieAlgebra,
    seed: int = 42,
    samples: int = DEFAULT_SAMPLES,
    bound: int = DEFAULT_BOUND,
) -> KForm | None:
    """First random integer combination of closed 2-forms with nonzero Gram determinant."""
    m = a.dim
    if m % 2:
        return None
    if m == 0:
        return KForm(2, 0, {})
    basis = _integer_basis(closed_two_forms(a))
    if not basis:
        return None
    bound = max(bound, m * samples)
    monos = monomials(m, 2)
    for idx in range(samples):
        rng = sample_rng(seed, idx)
        coeffs = [rng.randint(-bound, bound) for _ in basis]
        vec = [0] * len(monos)
        for c, b in zip(coeffs, basis):
            if c:
                for t, x in enumerate(b):
                    if x:
                        vec[t] += c * x
        w = KForm(2, m, {monos[t]: x for t, x in enumerate(vec) if x})
        if gram_determinant(w) != 0:
            return w
    return None


def obstruction_vanishes(a: LieAlgebra) -> bool:
    return e_infty_dim(a, 0, 2) == 0


def decide(
    a: LieAlgebra,
    seed: int = 42,
    samples: int = DEFAULT_SAMPLES,
    bound: int = DEFAULT_BOUND,
) -> SymplecticVerdict:
    m = a.dim
    if m % 2:
        return SymplecticVerdict(NON_SYMPLECTIC, reason=ODD_DIMENSION)
    w = find_witness(a, seed=seed, samples=samples, bound=bound)
    if w is not None:
        return SymplecticVerdict(SYMPLECTIC, witness=w)
    if obstruction_vanishes(a):
        return SymplecticVerdict(NON_SYMPLECTIC, reason=OBSTRUCTION_VANISHES)
    space = 2 * max(bound, m * samples) + 1
    return SymplecticVerdict(
        INCONCLUSIVE,
        samples=samples,
        degree_bound=m,
        sample_space_size=space,
        failure_bound=Fraction(m, space) ** samples,
    )


def benson_gordon_check(g: GradedNilradical) -> bool:
    """Closed 2-forms avoid every ``L_i* ^ L_j*`` except ``L_k* ^ L_1*`` and ``i, j <= k-1``."""
    k = g.k
    levels = g.level_of_basis
    monos = monomials(g.algebra.dim, 2)
    for v in closed_two_forms(g.algebra).vectors:
        for t, x in enumerate(v):
            if not x:
                continue
            i, j = monos[t]
            lo, hi = sorted((levels[i - 1], levels[j - 1]))
            if hi == k and lo != 1:
                return False
    return True
