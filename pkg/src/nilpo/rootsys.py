"""Positive root systems of types A-D and the nilradicals they span.

Structure constants are read off explicit integer matrix realizations:
strictly upper-triangular matrices for A_n, and for B/C/D the algebra
``{X : X^T S + S X = 0}`` with ``S`` antidiagonal (symmetric for so,
skew for sp), so that positive root vectors are upper-triangular.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

from nilpo.exactlin import SparseMatrix, solve
from nilpo.liealg import LieAlgebra

FAMILIES = ("A", "B", "C", "D")
MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 4}

Coeffs = tuple[int, ...]


class InternalExpansionFailure(RuntimeError):
    """A commutator of root vectors left the span of the root vectors."""


@dataclass(frozen=True)
class RootSystem:
    family: str
    rank: int
    positive_roots: tuple[Coeffs, ...]
    simple_roots: tuple[tuple[int, ...], ...]
    eps_roots: tuple[tuple[int, ...], ...]

    def level(self, root: Coeffs) -> int:
        return sum(root)

    def is_root(self, coeffs: Coeffs) -> bool:
        return tuple(coeffs) in set(self.positive_roots)


@dataclass(frozen=True)
class GradedNilradical:
    algebra: LieAlgebra
    level_of_basis: tuple[int, ...]
    layers: tuple[int, ...]
    roots: tuple[Coeffs, ...]
    family: str = ""
    rank: int = 0

    @property
    def k(self) -> int:
        return len(self.layers)

    def layer_indices(self, level: int) -> list[int]:
        """1-based basis indices of ``L_level``."""
        return [i + 1 for i, lv in enumerate(self.level_of_basis) if lv == level]


def _check_family(family: str, n: int) -> str:
    family = family.upper()
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    if n < MIN_RANK[family]:
        raise ValueError(f"{family}_n needs n >= {MIN_RANK[family]}, got {n}")
    return family


def _eps_system(family: str, n: int) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]], int]:
    """Positive roots and simple roots in epsilon coordinates, plus the ambient width."""
    if family == "A":
        w = n + 1
        roots = []
        for i, j in combinations(range(w), 2):
            v = [0] * w
            v[i], v[j] = 1, -1
            roots.append(tuple(v))
        simple = []
        for i in range(n):
            v = [0] * w
            v[i], v[i + 1] = 1, -1
            simple.append(tuple(v))
        return roots, simple, w
    w = n
    roots = []
    for i, j in combinations(range(n), 2):
        for s in (-1, 1):
            v = [0] * w
            v[i], v[j] = 1, s
            roots.append(tuple(v))
    if family in ("B", "C"):
        for i in range(n):
            v = [0] * w
            v[i] = 1 if family == "B" else 2
            roots.append(tuple(v))
    simple = []
    for i in range(n - 1):
        v = [0] * w
        v[i], v[i + 1] = 1, -1
        simple.append(tuple(v))
    last = [0] * w
    if family == "B":
        last[n - 1] = 1
    elif family == "C":
        last[n - 1] = 2
    else:
        last[n - 2], last[n - 1] = 1, 1
    simple.append(tuple(last))
    return roots, simple, w


def positive_roots(family: str, n: int) -> RootSystem:
    family = _check_family(family, n)
    eps, simple, w = _eps_system(family, n)
    basis = SparseMatrix.from_columns(w, [{i: Fraction(x) for i, x in enumerate(s) if x} for s in simple])
    coeffs = []
    for r in eps:
        sol = solve(basis, r)
        if sol is None or any(x.denominator != 1 or x < 0 for x in sol):
            raise InternalExpansionFailure(f"root {r} is not a non-negative integer combination of simple roots")
        coeffs.append(tuple(int(x) for x in sol))
    order = sorted(range(len(eps)), key=lambda t: (sum(coeffs[t]), tuple(-c for c in coeffs[t])))
    return RootSystem(
        family,
        n,
        tuple(coeffs[t] for t in order),
        tuple(simple),
        tuple(eps[t] for t in order),
    )


def level_data(rs: RootSystem) -> tuple[Coeffs, int, tuple[int, ...]]:
    """``(maximal root, nilpotency index k, dims of L_1..L_k)``."""
    levels = [sum(r) for r in rs.positive_roots]
    k = max(levels)
    tops = [r for r in rs.positive_roots if sum(r) == k]
    if len(tops) != 1:
        raise InternalExpansionFailure(f"expected a unique maximal root, found {len(tops)}")
    dims = tuple(levels.count(lv) for lv in range(1, k + 1))
    return tops[0], k, dims


def check_root_system(rs: RootSystem) -> list[str]:
    """Structural problems with ``rs`` (empty when it is a sane positive system)."""
    problems = []
    roots = set(rs.positive_roots)
    r = rs.rank
    units = [tuple(1 if t == i else 0 for t in range(r)) for i in range(r)]
    for u in units:
        if u not in roots:
            problems.append(f"simple root {u} missing")
    for root in rs.positive_roots:
        if any(c < 0 for c in root):
            problems.append(f"root {root} has a negative coefficient")
        if sum(root) > 1 and not any(
            tuple(a - b for a, b in zip(root, u)) in roots for u in units
        ):
            problems.append(f"root {root} is not a positive root plus a simple root")
    try:
        level_data(rs)
    except InternalExpansionFailure as exc:
        problems.append(str(exc))
    return problems


# ---------------------------------------------------------------------------
# matrix realizations
# ---------------------------------------------------------------------------


def _form(family: str, n: int) -> tuple[int, list[list[int]] | None]:
    if family == "A":
        return n + 1, None
    size = 2 * n + 1 if family == "B" else 2 * n
    s = [[0] * size for _ in range(size)]
    for a in range(size):
        b = size - 1 - a
        if family == "C":
            s[a][b] = 1 if a < n else -1
        else:
            s[a][b] = 1
    return size, s


def _index_weight(family: str, n: int, size: int, a: int) -> tuple[int, ...]:
    """Torus weight of the a-th coordinate (0-based) in epsilon coordinates."""
    if family == "A":
        v = [0] * size
        v[a] = 1
        return tuple(v)
    v = [0] * n
    if a < n:
        v[a] = 1
    elif a >= size - n:
        v[size - 1 - a] = -1
    return tuple(v)


def _matmul(x: dict, y: dict) -> dict:
    by_row: dict[int, list] = {}
    for (r, c), v in y.items():
        by_row.setdefault(r, []).append((c, v))
    out: dict = {}
    for (i, k), a in x.items():
        for j, b in by_row.get(k, ()):
            out[(i, j)] = out.get((i, j), 0) + a * b
    return {key: v for key, v in out.items() if v}


def root_vectors(family: str, n: int, rs: RootSystem | None = None) -> list[dict[tuple[int, int], int]]:
    """Integer matrices (sparse, 0-based entries) spanning each positive root space."""
    family = _check_family(family, n)
    rs = rs or positive_roots(family, n)
    size, s = _form(family, n)
    weights = [_index_weight(family, n, size, a) for a in range(size)]
    out = []
    for eps in rs.eps_roots:
        found = None
        for a, b in combinations(range(size), 2):
            if tuple(x - y for x, y in zip(weights[a], weights[b])) != eps:
                continue
            if s is None:
                x = {(a, b): 1}
            else:
                # X = E_ab - S^{-1} E_ba S lies in the algebra preserving S
                ap, bp = size - 1 - a, size - 1 - b
                # (S^{-1} E_ba S) has the single entry S[a][a'] / S[b][b'] at (b', a')
                coef = Fraction(s[a][ap], s[b][bp])
                x = {(a, b): Fraction(1)}
                key = (bp, ap)
                x[key] = x.get(key, 0) - coef
                x = {k: v for k, v in x.items() if v}
            if x:
                found = x
                break
        if found is None:
            raise InternalExpansionFailure(f"no matrix realization for root {eps}")
        g = 0
        for v in found.values():
            g = gcd(g, int(Fraction(v).numerator))
        lead = found[min(found)]
        sign = 1 if lead > 0 else -1
        out.append({k: int(Fraction(v) / g) * sign for k, v in found.items()})
    return out


def _bracket_check(xs: list[dict], size: int, family: str, n: int) -> None:
    if family == "A":
        return
    _, s = _form(family, n)
    for x in xs:
        # X^T S + S X = 0
        xt = {(c, r): v for (r, c), v in x.items()}
        sm = {(r, c): v for r, row in enumerate(s) for c, v in enumerate(row) if v}
        total = _matmul(xt, sm)
        for key, v in _matmul(sm, x).items():
            total[key] = total.get(key, 0) + v
        if any(total.values()):
            raise InternalExpansionFailure("root vector does not preserve the bilinear form")


def _label(root: Coeffs) -> str:
    parts = []
    for i, c in enumerate(root, start=1):
        if c == 1:
            parts.append(f"a{i}")
        elif c > 1:
            parts.append(f"{c}a{i}")
    return "+".join(parts)


def nilradical(family: str, n: int) -> GradedNilradical:
    family = _check_family(family, n)
    rs = positive_roots(family, n)
    _, k, dims = level_data(rs)
    xs = root_vectors(family, n, rs)
    size, _ = _form(family, n)
    _bracket_check(xs, size, family, n)
    positions = sorted({key for x in xs for key in x})
    pos_index = {key: t for t, key in enumerate(positions)}
    span = SparseMatrix.from_columns(
        len(positions), [{pos_index[key]: Fraction(v) for key, v in x.items()} for x in xs]
    )
    brackets = {}
    for i, j in combinations(range(len(xs)), 2):
        comm = _matmul(xs[i], xs[j])
        for key, v in _matmul(xs[j], xs[i]).items():
            comm[key] = comm.get(key, 0) - v
        comm = {key: v for key, v in comm.items() if v}
        if not comm:
            continue
        if any(key not in pos_index for key in comm):
            raise InternalExpansionFailure(f"[X_{i + 1}, X_{j + 1}] leaves the nilradical")
        rhs = [Fraction(0)] * len(positions)
        for key, v in comm.items():
            rhs[pos_index[key]] = Fraction(v)
        sol = solve(span, rhs)
        if sol is None:
            raise InternalExpansionFailure(f"[X_{i + 1}, X_{j + 1}] is not in the span of root vectors")
        brackets[(i + 1, j + 1)] = {t + 1: c for t, c in enumerate(sol) if c}
    labels = tuple(_label(r) for r in rs.positive_roots)
    algebra = LieAlgebra(len(xs), labels, brackets)
    return GradedNilradical(
        algebra=algebra,
        level_of_basis=tuple(sum(r) for r in rs.positive_roots),
        layers=dims,
        roots=rs.positive_roots,
        family=family,
        rank=n,
    )


def grading_violations(g: GradedNilradical) -> list[tuple[int, int, int]]:
    """Triples ``(i, j, k)`` where ``[e_i, e_j]`` has an ``e_k`` term off level ``l_i + l_j``."""
    bad = []
    lv = g.level_of_basis
    for (i, j), out in g.algebra.brackets.items():
        for k in out:
            if lv[k - 1] != lv[i - 1] + lv[j - 1]:
                bad.append((i, j, k))
    return bad
