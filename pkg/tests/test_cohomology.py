from __future__ import annotations

import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import nilpo.cohomology as coh
from nilpo.cohomology import (
    DecompositionMismatch,
    NotAnAutomorphism,
    adapted_basis,
    aut_action_e02,
    aut_action_h2,
    betti,
    betti_numbers,
    check_automorphism,
    closed_forms,
    e02_class,
    e_infty_dim,
    e_infty_dim_reference,
    e_infty_table,
    filtration,
    filtration_recursive,
    h2_class,
    inner_automorphism,
)
from nilpo.constructors import abelian, example_six_dim, free_nilpotent, heisenberg
from nilpo.exactlin import SparseMatrix
from nilpo.exterior import KForm, differential_matrix
from nilpo.liealg import FormNotClosed, change_basis, lower_central_series
from nilpo.rootsys import nilradical
from oracles import heisenberg_betti, kostant_betti, naive_rank, random_nilpotent, small_corpus


def naive_betti(a):
    """Dense ranks of every differential, by the naive eliminator."""
    ranks = [naive_rank(differential_matrix(a, p).dense()) if p < a.dim else 0 for p in range(a.dim + 1)]
    return [comb(a.dim, i) - ranks[i] - (ranks[i - 1] if i else 0) for i in range(a.dim + 1)]


# ---------------------------------------------------------------- Betti numbers


@pytest.mark.parametrize("n", range(1, 7))
def test_betti_abelian(n):
    assert betti_numbers(abelian(n)) == [comb(n, i) for i in range(n + 1)]


def test_betti_heisenberg():
    assert betti_numbers(heisenberg(3)) == [1, 2, 2, 1]
    for n in (5, 7, 9):
        assert betti_numbers(heisenberg(n)) == heisenberg_betti(n)


@pytest.mark.parametrize("name,a", small_corpus())
def test_betti_matches_naive_ranks(name, a):
    assert betti_numbers(a) == naive_betti(a)


@pytest.mark.parametrize("family,n", [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("A", 5), ("B", 2), ("B", 3), ("B", 4), ("C", 3), ("C", 4), ("D", 4)])
def test_betti_of_nilradicals_follow_kostant(family, n):
    assert betti_numbers(nilradical(family, n).algebra) == kostant_betti(family, n)


def test_betti_out_of_range():
    h = heisenberg(3)
    assert betti(h, -1) == 0 and betti(h, 4) == 0


# ---------------------------------------------------------------- filtration


@pytest.mark.parametrize("name,a", small_corpus() + [("n33", free_nilpotent(3, 3))])
def test_filtration_annihilator_matches_recursive(name, a):
    assert filtration(a).spaces == filtration_recursive(a).spaces


def test_filtration_free_three_step():
    f = filtration(free_nilpotent(3, 3))
    assert f.dims == (0, 3, 6, 14)
    # V_1 = span of the generator duals, V_2 adds the duals of [e_j, e_k]
    assert f.spaces[1].pivots == (0, 1, 2)
    assert f.spaces[2].pivots == (0, 1, 2, 3, 4, 5)


def test_filtration_dims_complement_lower_central_series():
    a = example_six_dim()[0]
    series = lower_central_series(a)
    assert filtration(a).dims == tuple(a.dim - s.dim for s in series.ideals)


# ---------------------------------------------------------------- E_inf


@pytest.mark.parametrize("name,a", small_corpus())
def test_fast_e_infty_matches_literal_formula(name, a):
    k = lower_central_series(a).nilpotency_index
    for n in range(a.dim + 1):
        for p in range(-1, k + 1):
            assert e_infty_dim(a, p, n - p) == e_infty_dim_reference(a, p, n - p), (p, n - p)


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10**6))
def test_fast_e_infty_matches_literal_formula_random(seed):
    a = random_nilpotent(seed, steps=3, base=3)
    k = lower_central_series(a).nilpotency_index
    for n in range(a.dim + 1):
        for p in range(k):
            assert e_infty_dim(a, p, n - p) == e_infty_dim_reference(a, p, n - p)


def _random_basis(m, rng):
    while True:
        cols = [{i: Fraction(rng.randint(-2, 2)) for i in range(1, m + 1)} for _ in range(m)]
        cols = [{i: c for i, c in col.items() if c} for col in cols]
        dense = [[col.get(i, 0) for col in cols] for i in range(1, m + 1)]
        if naive_rank(dense) == m:
            return cols


@pytest.mark.parametrize("seed", range(3))
def test_e_infty_table_is_basis_independent(seed):
    a = example_six_dim()[0]
    b = change_basis(a, _random_basis(a.dim, random.Random(seed)))
    assert not adapted_basis(b).trivial or b == a
    assert e_infty_table(b).dims == e_infty_table(a).dims
    for p, q in [(0, 2), (1, 1), (2, 0), (1, 2)]:
        assert e_infty_dim(b, p, q) == e_infty_dim_reference(b, p, q)


def test_e_infty_small_values():
    assert e_infty_dim(heisenberg(3), 0, 2) == 2
    assert e_infty_dim(abelian(4), 0, 2) == 6
    assert e_infty_dim(nilradical("A", 3).algebra, 0, 2) == 0
    assert e_infty_dim(example_six_dim()[0], 0, 2) == 1
    assert e_infty_dim(heisenberg(3), 5, 0) == 0
    assert e_infty_dim(heisenberg(3), 0, -1) == 0


def test_abelian_table_lives_in_column_zero():
    t = e_infty_table(abelian(2))
    assert t.k == 1
    assert t.nonzero() == {(0, 0): 1, (0, 1): 2, (0, 2): 1}


def test_degree_zero_sits_at_p_equal_k_minus_one():
    t = e_infty_table(example_six_dim()[0])
    assert t[(2, -2)] == 1 and t[(0, 0)] == 0 and t[(1, -1)] == 0


@pytest.mark.parametrize("name,a", small_corpus())
def test_antidiagonals_sum_to_betti(name, a):
    t = e_infty_table(a)
    assert [t.degree_sum(i) for i in range(a.dim + 1)] == betti_numbers(a)


def test_table_raises_on_inconsistent_betti(monkeypatch):
    a = heisenberg(3)
    monkeypatch.setattr(coh, "betti", lambda alg, i: 99)
    with pytest.raises(DecompositionMismatch):
        e_infty_table(a)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_projection_is_injective_for_free_two_step(m):
    a = free_nilpotent(m, 2)
    assert betti(a, 2) == e_infty_dim(a, 0, 2)


@pytest.mark.parametrize("name,a", small_corpus())
def test_projection_is_surjective(name, a):
    assert e_infty_dim(a, 0, 2) <= betti(a, 2)


# ---------------------------------------------------------------- graded classes


def test_six_dim_classes_coincide():
    a, w1, w2 = example_six_dim()
    e16 = KForm.basis(6, 1, 6)
    c1, c2, c3 = e02_class(a, w1), e02_class(a, w2), e02_class(a, e16)
    assert c1.representative == c2.representative == c3.representative
    assert not c1.is_zero()


def test_six_dim_h2_classes_differ():
    a, w1, w2 = example_six_dim()
    assert h2_class(a, w1).representative != h2_class(a, w2).representative


def test_heisenberg_class():
    h = heisenberg(3)
    assert not e02_class(h, KForm.basis(3, 1, 3)).is_zero()
    assert e02_class(h, KForm.basis(3, 1, 2)).is_zero()


def test_closed_form_in_low_filtration_has_zero_class():
    a = example_six_dim()[0]
    # e^1 ^ e^2 lies in L^2 V_2 and is closed
    assert e02_class(a, KForm.basis(6, 1, 2)).is_zero()


def test_class_of_non_closed_form_raises():
    a = example_six_dim()[0]
    with pytest.raises(FormNotClosed):
        e02_class(a, KForm.basis(6, 3, 4))


def test_class_is_linear():
    a, w1, _ = example_six_dim()
    e16 = KForm.basis(6, 1, 6)
    twice = e02_class(a, w1 * 2).representative
    assert twice == e02_class(a, e16).representative * 2


# ---------------------------------------------------------------- automorphisms


def _diag(*xs):
    return [[Fraction(xs[i]) if i == j else Fraction(0) for j in range(len(xs))] for i in range(len(xs))]


def test_check_automorphism_heisenberg():
    h = heisenberg(3)
    assert check_automorphism(h, _diag(1, 1, 1))
    assert check_automorphism(h, _diag(2, 3, 6))
    assert check_automorphism(h, _diag(Fraction(-1, 2), 5, Fraction(-5, 2)))
    assert not check_automorphism(h, _diag(1, 1, 2))
    assert not check_automorphism(h, _diag(0, 1, 0))


def six_automorphism(a_, b_, c_, x):
    """Diagonal torus element composed with exp(ad x) on the 6-dim Example."""
    a = example_six_dim()[0]
    diag = _diag(a_, b_, c_, a_ * b_, a_ * c_, a_ * a_ * b_)
    inner = inner_automorphism(a, x)
    prod = SparseMatrix.from_dense(diag) @ SparseMatrix.from_dense(inner)
    return prod.dense()


@settings(max_examples=20, deadline=None)
@given(
    st.integers(1, 4), st.integers(-3, 3).filter(bool), st.integers(-3, 3).filter(bool),
    st.lists(st.integers(-2, 2), min_size=6, max_size=6),
    st.lists(st.integers(-2, 2), min_size=3, max_size=3),
)
def test_projection_is_equivariant(a_, b_, c_, xs, ws):
    a, w1, w2 = example_six_dim()
    x = {i + 1: Fraction(v) for i, v in enumerate(xs) if v}
    A = six_automorphism(a_, b_, c_, x)
    assert check_automorphism(a, A)
    w = w1 * ws[0] + w2 * ws[1] + KForm.basis(6, 1, 2) * ws[2]
    h = h2_class(a, w)
    lhs = e02_class(a, aut_action_h2(a, A, h).representative)
    rhs = aut_action_e02(a, A, e02_class(a, w))
    assert lhs.representative == rhs.representative


def test_inner_automorphisms_act_trivially_on_h2():
    a, w1, _ = example_six_dim()
    A = inner_automorphism(a, {1: Fraction(1), 2: Fraction(-2), 4: Fraction(3)})
    c = h2_class(a, w1)
    assert aut_action_h2(a, A, c).representative == c.representative


def test_identity_and_zero_class():
    a, w1, _ = example_six_dim()
    ident = _diag(1, 1, 1, 1, 1, 1)
    c = e02_class(a, w1)
    assert aut_action_e02(a, ident, c).representative == c.representative
    zero = e02_class(a, KForm.zero(6, 2))
    A = six_automorphism(2, 3, 5, {1: Fraction(1)})
    assert aut_action_e02(a, A, zero).is_zero()


def test_non_automorphism_is_rejected():
    a, w1, _ = example_six_dim()
    with pytest.raises(NotAnAutomorphism):
        aut_action_e02(a, _diag(1, 1, 1, 1, 1, 2), e02_class(a, w1))


def test_closed_forms_contain_example_forms():
    a, w1, w2 = example_six_dim()
    z = closed_forms(a, 2)
    assert z.contains(w1.vector()) and z.contains(w2.vector())
