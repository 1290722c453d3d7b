from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rigidtrace.linalg import (
    QQ,
    FieldError,
    Matrix,
    ModP,
    PrimeField,
    field_from_spec,
    in_span,
    nullspace,
    solve,
)

F3 = PrimeField(3)


def test_field_specs():
    assert field_from_spec("Q") is QQ
    assert field_from_spec({"field": "Fp", "p": 5}) == PrimeField(5)
    assert field_from_spec("F2").characteristic == 2
    for bad in ("R", {"field": "Fp"}, {"field": "Fp", "p": 4}):
        with pytest.raises(FieldError):
            field_from_spec(bad)


def test_parse_and_format():
    assert QQ.parse("-3/6") == Fraction(-1, 2)
    assert QQ.fmt(Fraction(4, 2)) == "2"
    assert F3.parse("1/2") == ModP(2, 3)
    assert F3.fmt(-1) == "2"
    with pytest.raises(FieldError):
        QQ.parse(1.5)


def test_mixed_characteristics_are_refused():
    with pytest.raises(FieldError):
        ModP(1, 3) + ModP(1, 5)
    with pytest.raises(FieldError):
        QQ(ModP(1, 3))
    with pytest.raises(ZeroDivisionError):
        ModP(0, 3).inverse()


def test_matrix_basics():
    A = Matrix.from_rows(QQ, [[1, 2], [3, 4]])
    assert A.trace() == 5
    assert (A @ A.inverse()) == Matrix.identity(QQ, 2)
    assert A.transpose().to_lists() == [["1", "3"], ["2", "4"]]
    assert A.kron(Matrix.identity(QQ, 1)) == A
    assert Matrix.zeros(QQ, 0, 3).shape == (0, 3)
    assert not Matrix.from_rows(F3, [[1, 2], [2, 1]]).is_invertible()


def test_kron_shape_and_mixed_product():
    A = Matrix.from_rows(QQ, [[1, 2], [0, 1]])
    B = Matrix.from_rows(QQ, [[0, 1, 1]])
    K = A.kron(B)
    assert K.shape == (2, 6)
    C = Matrix.from_rows(QQ, [[1], [2], [3]])
    assert A.kron(B) @ Matrix.identity(QQ, 2).kron(C) == A.kron(B @ C)


def test_solve_returns_the_echelon_representative():
    rows = [[QQ(1), QQ(1), QQ(0)]]
    assert solve(QQ, rows, 3, [QQ(2)]) == [2, 0, 0]
    assert solve(QQ, [[QQ(0)]], 1, [QQ(1)]) is None
    assert len(nullspace(QQ, rows, 3)) == 2
    assert in_span(QQ, [[QQ(1), QQ(1)]], [QQ(3), QQ(3)])
    assert not in_span(QQ, [], [QQ(0), QQ(1)])


small = st.integers(-4, 4)
square2 = st.lists(st.lists(small, min_size=2, max_size=2), min_size=2, max_size=2)


@given(square2, square2)
@settings(max_examples=80, deadline=None)
def test_trace_is_cyclic_and_kron_multiplicative(a, b):
    A, B = Matrix.from_rows(QQ, a), Matrix.from_rows(QQ, b)
    assert (A @ B).trace() == (B @ A).trace()
    assert A.kron(B).trace() == A.trace() * B.trace()


@given(st.lists(st.lists(st.integers(0, 2), min_size=3, max_size=3), min_size=1, max_size=4))
@settings(max_examples=80, deadline=None)
def test_rank_nullity_over_f3(rows):
    M = [[F3(x) for x in r] for r in rows]
    basis = nullspace(F3, M, 3)
    rank = Matrix.from_rows(F3, rows).rank()
    assert rank + len(basis) == 3
    for v in basis:
        assert all(sum((a * b for a, b in zip(r, v)), F3.zero) == 0 for r in M)
