from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from syzforge.exactalg import (
    GF, QQ, ExactMatrix, FieldMismatch, field_from_spec, hstack, kernel, left_kernel, rank, rank_of_vectors,
    row_reduce, solve,
)

small_ints = st.integers(min_value=-5, max_value=5)
matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r))
)


def test_identity_and_zero(anyfield):
    I = ExactMatrix.identity(3, anyfield)
    assert rank(I) == 3 and kernel(I) == []
    Z = ExactMatrix.zeros(2, 5, anyfield)
    assert rank(Z) == 0 and len(kernel(Z)) == 5


def test_proportional_rows(anyfield):
    m = ExactMatrix.from_rows([[1, 2], [2, 4]], anyfield)
    _, r, ker = row_reduce(m)
    assert r == 1
    (v,) = ker
    # scale to (-2, 1)
    F = anyfield
    s = F.div(F(1), v[1])
    assert [F.mul(s, x) for x in v] == [F(-2), F(1)]


def test_mixed_fields_rejected():
    a = ExactMatrix.identity(2, GF(32003))
    b = ExactMatrix.identity(2, QQ)
    with pytest.raises(FieldMismatch):
        hstack([a, b])


def test_field_spec(monkeypatch):
    assert field_from_spec("Q") == QQ
    assert field_from_spec(7) == GF(7)
    monkeypatch.setenv("SYZFORGE_FIELD", "101")
    assert field_from_spec(None) == GF(101)
    with pytest.raises(ValueError):
        GF(2)
    with pytest.raises(ValueError):
        GF(9)


def test_field_arithmetic():
    F = GF(7)
    assert F.inv(3) == 5 and F(Fraction(1, 2)) == 4 and F.neg(1) == 6
    with pytest.raises(ZeroDivisionError):
        F.inv(0)
    assert QQ.div(QQ(1), QQ(3)) == Fraction(1, 3)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_rank_matches_sympy_and_transpose(rows):
    m = ExactMatrix.from_rows(rows, QQ)
    r = rank(m)
    assert r == sympy.Matrix(rows).rank()
    assert r == rank(m.transpose())
    assert len(kernel(m)) == len(rows[0]) - r
    assert len(left_kernel(m)) == len(rows) - r


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_gf_rank_at_most_rational_rank(rows):
    assert rank(ExactMatrix.from_rows(rows, GF(5))) <= rank(ExactMatrix.from_rows(rows, QQ))


@settings(max_examples=60, deadline=None)
@given(matrices, st.data())
def test_solve_round_trip(rows, data):
    m = ExactMatrix.from_rows(rows, QQ)
    x = data.draw(st.lists(small_ints, min_size=len(rows[0]), max_size=len(rows[0])))
    b = m.apply([QQ(v) for v in x])
    y = solve(m, b)
    assert y is not None and m.apply(y) == b
    for v in kernel(m):
        assert all(c == 0 for c in m.apply(v))


def test_solve_inconsistent():
    m = ExactMatrix.from_rows([[1, 1], [2, 2]], QQ)
    assert solve(m, [QQ(1), QQ(3)]) is None


def test_rank_of_vectors():
    assert rank_of_vectors([[1, 0, 1], [2, 0, 2], [0, 1, 0]], GF(32003)) == 2
