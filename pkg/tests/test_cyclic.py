import pytest
from hypothesis import given, settings, strategies as st

from rigidtrace.cyclic import (
    AlgebraError,
    FDAlgebra,
    IdempotentMatrix,
    NormalizedComplex,
    chern_character,
    check_algebra,
    hochschild_homology,
    is_b_boundary,
    mixed_complex,
    negative_cyclic,
)

Q = FDAlgebra.ground("Q")
QxQ = FDAlgebra.product(2, "Q")
EPS = FDAlgebra.dual_numbers("Q")
EPS3 = FDAlgebra.dual_numbers({"field": "Fp", "p": 3})
ALGEBRAS = {"Q": Q, "QxQ": QxQ, "Q[e]": EPS, "F3[e]": EPS3}


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_algebras_are_valid(name):
    assert check_algebra(ALGEBRAS[name]) == []


def test_algebra_json_roundtrip():
    for A in ALGEBRAS.values():
        B = FDAlgebra.from_json(A.to_json())
        assert B.to_json() == A.to_json() and B.field == A.field


def test_bad_algebra_is_reported():
    # noncommutative-looking table: e0 e1 = e0 but e1 e0 = 0
    A = FDAlgebra(Q.field, ["a", "b"], [[[1, 0], [1, 0]], [[0, 0], [0, 1]]], [1, 1])
    assert check_algebra(A)


def test_dimension_guard():
    with pytest.raises(AlgebraError):
        mixed_complex(FDAlgebra.product(4, "Q"), 7)


def test_ground_field_normalized_operators_vanish():
    C = NormalizedComplex(mixed_complex(Q, 4))
    for n in range(1, 4):
        assert C.b(n).is_zero()
        assert C.B(n).is_zero()


def test_boundary_on_dual_number_tensors():
    M = mixed_complex(EPS, 3)
    b1 = M.b(1)
    for w in [(1, 1), (0, 1), (1, 0)]:
        assert not any(b1.apply([1 if k == M.index(w) else 0 for k in range(M.dim(1))]))


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_mixed_complex_identities(name):
    rep = mixed_complex(ALGEBRAS[name], 4).identity_report()
    assert rep == {"b^2": True, "B^2": True, "bB+Bb": True}


@pytest.mark.parametrize("name,dims", [
    ("Q", [1, 0, 0, 0]),
    ("QxQ", [2, 0, 0, 0]),
    ("Q[e]", [2, 1, 1, 1]),
    ("F3[e]", [2, 1, 1, 1]),
])
def test_hochschild_two_routes(name, dims):
    A = ALGEBRAS[name]
    M = mixed_complex(A, 4)
    full = [hochschild_homology(A, n, 4, M=M).dim for n in range(4)]
    norm = [hochschild_homology(A, n, 4, normalized=True, M=M).dim for n in range(4)]
    assert full == norm == dims


def test_hochschild_needs_room():
    with pytest.raises(AlgebraError):
        hochschild_homology(Q, 3, 3)


def test_homology_representatives_are_cycles():
    M = mixed_complex(EPS, 3)
    H = hochschild_homology(EPS, 1, 3, M=M)
    assert len(H.representatives) == H.dim == 1
    assert not any(M.b(1).apply(H.representatives[0]))


@pytest.mark.parametrize("name,dims", [
    ("Q", [1, 1, 1]),
    ("QxQ", [2, 2, 2]),
    ("Q[e]", [2, 2, 2]),
])
def test_negative_cyclic_degree_zero(name, dims):
    A = ALGEBRAS[name]
    rep = negative_cyclic(A, 0, 5, 2)
    assert rep.dims == dims and rep.stable and rep.dim == dims[-1]


def test_negative_cyclic_needs_room():
    with pytest.raises(AlgebraError):
        negative_cyclic(Q, 0, 4, 2)


def test_chern_of_unit_and_rank_one_projector():
    c = chern_character(IdempotentMatrix.scalar_diagonal(Q, [1]), 2)
    assert c.components[0] == [1]
    assert all(not any(v) for v in c.components[1:])
    assert chern_character(IdempotentMatrix.scalar_diagonal(Q, [1, 0]), 1).components[0] == [1]


def test_chern_of_a_product_idempotent():
    e = IdempotentMatrix(QxQ, [[[1, 0]]])
    M = mixed_complex(QxQ, 6)
    c = chern_character(e, 2, M=M)
    assert c.components[0] == [1, 0]
    assert c.check(M) == []


def test_ground_field_trace_has_trivial_lift():
    M = mixed_complex(Q, 4)
    assert not any(NormalizedComplex(M).B(0).apply([1]))
    # on the full bar complex B(1) = 2 (1 ⊗ 1), a boundary of degenerate chains
    assert M.B(0).apply([1]) == [2]


def test_non_idempotent_is_rejected():
    with pytest.raises(AlgebraError):
        chern_character(IdempotentMatrix.scalar_diagonal(Q, [2]), 1)


def test_chern_needs_room():
    with pytest.raises(AlgebraError):
        chern_character(IdempotentMatrix.scalar_diagonal(Q, [1]), 2, N=4)


def test_idempotent_json_roundtrip():
    e = IdempotentMatrix(EPS, [[[1, 0], [0, 0]], [[0, 1], [0, 0]]])
    assert e.is_idempotent()
    assert IdempotentMatrix.from_json(EPS, e.to_json()) == e


def _unipotent(A, a):
    z, one = A.zero(), A.scalar(1)
    g = IdempotentMatrix(A, [[one, a], [z, one]])
    g_inv = IdempotentMatrix(A, [[one, [-c for c in a]], [z, one]])
    return g, g_inv


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_conjugation_moves_trace_by_a_boundary(name):
    A = ALGEBRAS[name]
    M = mixed_complex(A, 2)
    e = IdempotentMatrix.scalar_diagonal(A, [1, 0])
    for k in range(A.dim):
        g, g_inv = _unipotent(A, A.basis_vector(k))
        assert g.product(g_inv) == IdempotentMatrix.scalar_diagonal(A, [1, 1])
        f = e.conjugate(g, g_inv)
        assert f.is_idempotent()
        diff = [x - y for x, y in zip(f.trace(), e.trace())]
        assert is_b_boundary(M, 0, diff)


diag = st.lists(st.sampled_from([0, 1]), min_size=1, max_size=3)


@given(diag, diag)
@settings(max_examples=40, deadline=None)
def test_trace_is_additive_and_multiplicative(d1, d2):
    for A in (QxQ, EPS):
        e = IdempotentMatrix.scalar_diagonal(A, d1)
        f = IdempotentMatrix.scalar_diagonal(A, d2)
        assert e.direct_sum(f).trace() == A.add(e.trace(), f.trace())
        assert e.kron(f).trace() == A.multiply(e.trace(), f.trace())
        assert e.direct_sum(f).is_idempotent() and e.kron(f).is_idempotent()


@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4))
@settings(max_examples=40, deadline=None)
def test_b_squares_to_zero_on_random_chains(coeffs):
    M = mixed_complex(EPS, 3)
    v = [EPS.field(c) for c in coeffs] * (M.dim(2) // 4)
    assert not any(M.b(1).apply(M.b(2).apply(v)))
    w = M.B(1).apply(M.B(0).apply(coeffs[:2]))
    assert not any(w)


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_normalized_complex_is_mixed(name):
    C = NormalizedComplex(mixed_complex(ALGEBRAS[name], 4))
    for n in range(2, 5):
        assert (C.b(n - 1) @ C.b(n)).is_zero()
    for n in range(0, 3):
        assert (C.B(n + 1) @ C.B(n)).is_zero()
    for n in range(1, 4):
        assert (C.b(n + 1) @ C.B(n) + C.B(n - 1) @ C.b(n)).is_zero()
