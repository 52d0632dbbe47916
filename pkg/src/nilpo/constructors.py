"""Generators for the standard example algebras."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from nilpo.exterior import KForm
from nilpo.liealg import LieAlgebra, abelian as _abelian


def abelian(n: int) -> LieAlgebra:
    if n < 1:
        raise ValueError("abelian algebra needs n >= 1")
    return _abelian(n)


def heisenberg(n: int) -> LieAlgebra:
    """``[e_{2i-1}, e_{2i}] = e_n`` for ``i = 1..(n-1)/2``."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"Heisenberg algebra needs odd dimension >= 3, got {n}")
    t = (n - 1) // 2
    return LieAlgebra.from_brackets(n, {(2 * i - 1, 2 * i): n for i in range(1, t + 1)})


def hall_elements(m: int, c: int) -> list[tuple]:
    """Hall basis of the free nilpotent algebra of class ``c <= 3``.

    Elements are ``(i,)`` for generators, ``(j, k)`` for ``[e_j, e_k]`` with
    ``k < j``, and ``(r, s, t)`` for ``[[e_r, e_s], e_t]`` with ``s < r``,
    ``t >= s``; each weight is listed lexicographically.
    """
    if c not in (1, 2, 3):
        raise ValueError(f"free nilpotent algebras are supported for class 1..3, got {c}")
    if m < 2:
        raise ValueError("free nilpotent algebra needs at least 2 generators")
    out: list[tuple] = [(i,) for i in range(1, m + 1)]
    if c >= 2:
        out += [(j, k) for j in range(1, m + 1) for k in range(1, j)]
    if c >= 3:
        out += [(r, s, t) for r in range(1, m + 1) for s in range(1, r) for t in range(s, m + 1)]
    return out


def _hall_label(h: tuple) -> str:
    if len(h) == 1:
        return f"e{h[0]}"
    if len(h) == 2:
        return f"[e{h[0]},e{h[1]}]"
    return f"[[e{h[0]},e{h[1]}],e{h[2]}]"


def free_nilpotent(m: int, c: int) -> LieAlgebra:
    """Free ``c``-step nilpotent Lie algebra on ``m`` generators, ``c <= 3``."""
    elems = hall_elements(m, c)
    pos = {h: n for n, h in enumerate(elems, start=1)}
    br: dict[tuple[int, int], dict[int, Fraction]] = {}

    def put(x: int, y: int, vec: dict[int, int]) -> None:
        # records [b_x, b_y] = vec
        if x > y:
            x, y = y, x
            vec = {k: -v for k, v in vec.items()}
        br[(x, y)] = {k: Fraction(v) for k, v in vec.items() if v}

    if c >= 2:
        for j, k in (h for h in elems if len(h) == 2):
            put(pos[(j,)], pos[(k,)], {pos[(j, k)]: 1})
    if c >= 3:
        for i, j in (h for h in elems if len(h) == 2):
            for t in range(1, m + 1):
                if t >= j:
                    vec = {pos[(i, j, t)]: 1}
                else:
                    # [[i,j],t] = [[i,t],j] - [[j,t],i]  (Jacobi, with t < j < i)
                    vec = {pos[(i, t, j)]: 1, pos[(j, t, i)]: -1}
                put(pos[(i, j)], pos[(t,)], vec)
    return LieAlgebra(len(elems), tuple(_hall_label(h) for h in elems), br)


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        seen = set()
        norm = []
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (1 <= u <= self.vertex_count and 1 <= v <= self.vertex_count):
                raise ValueError(f"edge {e} references a vertex outside 1..{self.vertex_count}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(n, tuple(tuple(e) for e in edges))

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        adj: dict[int, set[int]] = {v: set() for v in range(1, self.vertex_count + 1)}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        stack, seen = [1], {1}
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.vertex_count


def graph_algebra(g: Graph) -> LieAlgebra:
    """2-step algebra on vertices + edges with ``[v_i, v_j] = e_ij`` for each edge."""
    if not g.edges:
        raise ValueError("graph algebra needs at least one edge")
    n = g.vertex_count
    labels = [f"v{i}" for i in range(1, n + 1)] + [f"e{u}_{v}" for u, v in g.edges]
    brackets = {(u, v): {n + idx: Fraction(1)} for idx, (u, v) in enumerate(g.edges, start=1)}
    return LieAlgebra(n + len(g.edges), tuple(labels), brackets)


def example_six_dim() -> tuple[LieAlgebra, KForm, KForm]:
    """``[e1,e2]=e4, [e1,e3]=e5, [e1,e4]=e6`` with its two symplectic forms."""
    a = LieAlgebra.from_brackets(6, {(1, 2): 4, (1, 3): 5, (1, 4): 6})
    w1 = KForm.from_terms(6, 2, [((1, 6), 1), ((2, 4), -1), ((3, 5), 1)])
    w2 = KForm.from_terms(6, 2, [((1, 6), 1), ((2, 5), 1), ((3, 4), 1)])
    return a, w1, w2


def all_connected_graphs(max_vertices: int) -> list[Graph]:
    """Connected graphs with at least one edge on 2..max_vertices vertices, one per
    isomorphism class (brute-force canonical form; fine up to 6 vertices)."""
    from itertools import permutations

    out = []
    for n in range(2, max_vertices + 1):
        pairs = list(combinations(range(1, n + 1), 2))
        perms = list(permutations(range(1, n + 1)))
        seen: set[tuple] = set()
        for mask in range(1, 1 << len(pairs)):
            edges = [pairs[b] for b in range(len(pairs)) if mask >> b & 1]
            g = Graph.from_edges(n, edges)
            if not g.is_connected():
                continue
            canon = min(
                tuple(sorted(tuple(sorted((p[u - 1], p[v - 1]))) for u, v in edges)) for p in perms
            )
            if canon in seen:
                continue
            seen.add(canon)
            out.append(g)
    return out
