import pytest
from hypothesis import given, settings, strategies as st

from rigidtrace import smc
from rigidtrace.bord import (
    BordError,
    BordismCategory,
    FinGroup,
    Representation,
    bord_trace,
    bordism_from_json,
    cap,
    check_functoriality,
    compose,
    cup,
    dual_word,
    enumerate_bordisms,
    evaluate,
    evaluate_scalar,
    identity,
    make_bordism,
    rational_irreps,
    sign_rep,
    smc_trace,
    strand,
    symmetry,
    tensor,
)

GROUPS = {"1": FinGroup.trivial(), "Z/2": FinGroup.cyclic(2), "Z/3": FinGroup.cyclic(3)}


def _zigzag(G, x):
    # (t ⊗ id) ∘ (id ⊗ u) on x
    return compose(G, tensor(cap(G, x), identity(G, x)), tensor(identity(G, x), cup(G, x)))


def test_group_tables_are_checked():
    with pytest.raises(BordError):
        FinGroup([0, 1], [[0, 1], [1, 1]])
    S3 = FinGroup.symmetric3()
    assert len(S3.classes) == 3
    assert FinGroup.from_json(S3.to_json()).table == S3.table


def test_identity_composes_to_identity():
    G = GROUPS["Z/2"]
    i = identity(G, "+")
    assert compose(G, i, i) == i and i.circles == ()


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_zigzag_is_the_identity(name):
    G = GROUPS[name]
    for x in ["+", "-", "+-", "++"]:
        assert _zigzag(G, x) == identity(G, x)


def test_half_loops_close_to_the_product_class():
    G = FinGroup.cyclic(3)
    g, h = 1, 1
    loop = compose(G, strand(G, "+", h), strand(G, "+", g))
    closed = compose(G, cap(G, "+"), compose(G, tensor(loop, identity(G, "-")), symmetry(G, "-", "+")))
    closed = compose(G, closed, cup(G, "+"))
    assert closed.source == closed.target == ""
    assert closed.circles == (G.class_of[G.index(G.mul(h, g))],)


def test_trace_examples():
    G = GROUPS["Z/2"]
    assert bord_trace(G, 0).circles == (G.class_of[0],)
    assert bord_trace(G, 1).circles == (G.class_of[1],)
    S3 = FinGroup.symmetric3()
    for g in range(len(S3)):
        for h in range(len(S3)):
            assert bord_trace(S3, S3.mul(g, h)) == bord_trace(S3, S3.mul(h, g))


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_abstract_trace_is_the_circle(name):
    G = GROUPS[name]
    for g in G.elements:
        for sign in "+-":
            assert smc_trace(G, g, sign) == bord_trace(G, g)


def test_evaluation_examples():
    for G in GROUPS.values():
        triv = Representation.trivial(G)
        for g in G.elements:
            assert evaluate_scalar(triv, bord_trace(G, g)) == 1
    assert evaluate_scalar(sign_rep(), bord_trace(GROUPS["Z/2"], 1)) == -1
    Z3 = GROUPS["Z/3"]
    rho = Representation.from_generators(Z3, "Q", {1: [[0, -1], [1, -1]]})
    assert evaluate_scalar(rho, bord_trace(Z3, 1)) == -1
    assert evaluate_scalar(rho, bord_trace(Z3, 0)) == 2


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_irreps_and_characters(name):
    G = GROUPS[name]
    reps = rational_irreps(G)
    assert len(reps) == len([d for d in range(1, len(G.elements) + 1) if len(G.elements) % d == 0])
    for rho in reps:
        assert rho.check() == []
        for g in G.elements:
            assert evaluate_scalar(rho, bord_trace(G, g)) == rho.character(g)


def test_sign_rep_is_the_second_irrep():
    assert [m.to_lists() for m in rational_irreps(GROUPS["Z/2"])[1].matrices] == \
        [m.to_lists() for m in sign_rep().matrices]


def test_minus_strand_transposes():
    Z3 = GROUPS["Z/3"]
    rho = rational_irreps(Z3)[1]
    assert evaluate(rho, strand(Z3, "+", 1)) == rho(1)
    assert evaluate(rho, strand(Z3, "-", 1)) == rho(1).transpose()


def test_bad_bordisms_are_rejected():
    G = GROUPS["Z/2"]
    with pytest.raises(BordError):
        make_bordism(G, "+", "-", [(("s", 0), ("t", 0), 0)])
    with pytest.raises(BordError):
        compose(G, identity(G, "+"), identity(G, "-"))
    with pytest.raises(BordError):
        evaluate_scalar(Representation.trivial(G), identity(G, "+"))


def test_bordism_json_roundtrip():
    G = GROUPS["Z/3"]
    b = _zigzag(G, "+-")
    assert bordism_from_json(G, b.to_json(G)) == b
    c = tensor(strand(G, "-", 2), bord_trace(G, 1))
    assert bordism_from_json(G, c.to_json(G)) == c


def test_enumeration_counts():
    G = GROUPS["Z/2"]
    # X = "+" to Y = "+": one through strand, two labels
    assert len(enumerate_bordisms(G, "+", "+")) == 2
    assert len(enumerate_bordisms(G, "+", "-")) == 0
    # ∅ -> "-+": one cup, two labels, plus up to one circle from two classes
    assert len(enumerate_bordisms(G, "", "-+", max_circles=1)) == 2 * 3


def test_bordism_category_is_a_strict_smc():
    A = BordismCategory(GROUPS["Z/2"], 2, 1)
    assert smc.validate_smc(A, ["", "+", "-", "+-"]) == []
    for x in ["", "+", "-", "+-", "-+"]:
        res = smc.find_dual(A, x)
        assert res.rigid and res.datum.dual == dual_word(x)


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_evaluation_is_monoidal(name):
    G = GROUPS[name]
    for rho in rational_irreps(G):
        rep = check_functoriality(rho, max_points=3, max_circles=2)
        assert rep.ok, rep.failures[:3]


def test_evaluation_commutes_with_trace():
    # F(trace(f)) = trace(F(f)) for the evaluation functor into matrices over Q
    for G in GROUPS.values():
        for rho in rational_irreps(G):
            M = smc.matrix_category("Q", rho.dim)
            for g in G.elements:
                for sign in "+-":
                    lhs = evaluate(rho, smc_trace(G, g, sign))
                    rhs = smc.trace_of(M, evaluate(rho, strand(G, sign, g)))
                    assert lhs == rhs


@given(st.sampled_from(sorted(GROUPS)), st.data())
@settings(max_examples=40, deadline=None)
def test_composition_is_associative(name, data):
    G = GROUPS[name]
    pick = lambda X, Y: data.draw(st.sampled_from(enumerate_bordisms(G, X, Y, 1)))
    a, b, c = pick("+", "+-+"), pick("+-+", "+"), pick("+", "+")
    assert compose(G, c, compose(G, b, a)) == compose(G, compose(G, c, b), a)
