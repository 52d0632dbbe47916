from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilpo.constructors import example_six_dim, free_nilpotent, heisenberg
from nilpo.exterior import KForm
from nilpo.liealg import (
    FormNotClosed,
    InvalidAlgebra,
    LieAlgebra,
    NotNilpotent,
    center,
    central_extension,
    change_basis,
    direct_sum,
    is_ideal,
    lower_central_series,
    nilpotency_index,
    trivial_extension,
    validate,
)
from oracles import random_nilpotent


def test_from_brackets_normalises_order():
    a = LieAlgebra.from_brackets(3, {(2, 1): 3})
    assert a.bracket_basis(1, 2) == {3: Fraction(-1)}
    assert a.bracket_basis(2, 1) == {3: Fraction(1)}
    assert a.structure_constant(1, 2, 3) == -1


def test_invalid_indices_are_rejected():
    with pytest.raises(InvalidAlgebra):
        LieAlgebra(3, ("a", "b", "c"), {(1, 4): {2: 1}})
    with pytest.raises(InvalidAlgebra):
        LieAlgebra(3, ("a", "b", "c"), {(1, 2): {5: 1}})
    with pytest.raises(InvalidAlgebra):
        LieAlgebra(2, ("a",), {})
    with pytest.raises(InvalidAlgebra):
        LieAlgebra.from_brackets(3, {(1, 1): 2})


def test_jacobi_violation_is_reported():
    # [e1,e2]=e4, [e4,e3]=e1: the cyclic sum on (e1,e2,e3) is e1
    a = LieAlgebra.from_brackets(4, {(1, 2): 4, (4, 3): 1})
    bad = validate(a)
    assert bad and bad[0].triple == (1, 2, 3)
    assert "Jacobi" in str(bad[0])


def test_heisenberg_series_and_center():
    h = heisenberg(5)
    rep = lower_central_series(h)
    assert rep.dims == (5, 1, 0)
    assert rep.nilpotency_index == 2
    assert rep.center.dim == 1


def test_six_dim_series():
    a, _, _ = example_six_dim()
    rep = lower_central_series(a)
    assert rep.dims == (6, 3, 1, 0)
    assert center(a).dim == 2  # e5, e6


def test_not_nilpotent():
    # ad e1 acts on span{e2} as the identity
    a = LieAlgebra.from_brackets(2, {(1, 2): 2})
    with pytest.raises(NotNilpotent):
        nilpotency_index(a)


def test_lower_central_terms_are_ideals():
    for a in (heisenberg(5), free_nilpotent(3, 3), example_six_dim()[0]):
        for ideal in lower_central_series(a).ideals:
            assert is_ideal(a, ideal)


def test_direct_sum_and_trivial_extension():
    h = heisenberg(3)
    s = direct_sum(h, h)
    assert s.dim == 6 and not validate(s)
    assert len(set(s.basis_labels)) == 6
    t = trivial_extension(h, 2)
    assert t.basis_labels[:2] == ("u1", "u2")
    assert center(t).dim == 3
    assert trivial_extension(h, 0) is h


def test_central_extension_requires_closed_form():
    h = heisenberg(3)
    six = example_six_dim()[0]
    with pytest.raises(FormNotClosed):
        # d(e^3 ^ e^4) = e^1 ^ e^2 ^ e^3
        central_extension(six, KForm.from_terms(6, 2, [((3, 4), 1)]))
    ext = central_extension(h, KForm.from_terms(3, 2, [((1, 3), 1)]))
    assert ext.dim == 4 and not validate(ext)
    assert nilpotency_index(ext) == 3


def test_change_basis_preserves_validity_and_series():
    a, _, _ = example_six_dim()
    cols = [{1: Fraction(1), 2: Fraction(1)}, {2: Fraction(1)}, {3: Fraction(2), 1: Fraction(1)},
            {4: Fraction(1)}, {5: Fraction(1), 6: Fraction(3)}, {6: Fraction(1)}]
    b = change_basis(a, cols)
    assert not validate(b)
    assert lower_central_series(b).dims == lower_central_series(a).dims


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_random_central_extensions_are_nilpotent_lie_algebras(seed):
    a = random_nilpotent(seed, steps=3, base=3)
    assert not validate(a)
    dims = lower_central_series(a).dims
    assert all(x > y for x, y in zip(dims, dims[1:]))
