import pytest
from hypothesis import given, settings, strategies as st

from rigidtrace.fincat import (
    CategoryError,
    FinCat,
    FinFunctor,
    all_functors,
    check_category,
    check_functor,
    check_simplicial_identities,
    comma_under,
    initial_objects,
    is_equivalence,
    nerve_truncated,
    terminal_objects,
)


def test_terminal_category_is_valid():
    assert check_category(FinCat.terminal()) == []


def test_bad_composition_entry_is_named():
    with pytest.raises(CategoryError) as err:
        FinCat.build(["a", "b"], [("f", "a", "b")], {"a": "ida", "b": "idb"},
                     [("f", "ida", "idb")])
    assert any("'f'" in line for line in err.value.report)


def test_delta2_counts_and_validity():
    D2 = FinCat.poset(2)
    assert len(D2.objects) == 3
    assert len(D2.morphisms) == 6
    assert check_category(D2) == []


def test_comma_under_delta1():
    I = FinCat.poset(1)
    C, forget = comma_under(0, I)
    assert len(C.objects) == 2
    assert sum(not C.is_identity(f) for f in C.morphisms) == 1
    assert initial_objects(C) == [I.identity(0)]
    assert check_functor(forget) == []

    C1, _ = comma_under(1, I)
    assert len(C1.objects) == 1 and len(C1.morphisms) == 1


def test_comma_under_delta2_is_delta2():
    D2 = FinCat.poset(2)
    C, _ = comma_under(0, D2)
    assert len(C.objects) == 3 and len(C.morphisms) == 6
    assert len(initial_objects(C)) == 1 and len(terminal_objects(C)) == 1
    assert is_equivalence(_iso_to(C, D2))


def _iso_to(C, D):
    for F in all_functors(C, D):
        if is_equivalence(F):
            return F
    raise AssertionError("no equivalence found")


@pytest.mark.parametrize("C,N,counts", [
    (FinCat.terminal(), 3, [1, 1, 1, 1]),
    (FinCat.poset(1), 2, [2, 3, 4]),
])
def test_nerve_counts(C, N, counts):
    X = nerve_truncated(C, N)
    assert X.counts() == counts
    assert check_simplicial_identities(X) == []


def test_nerve_of_groupoid_with_two_arrows_each_way():
    # a connected groupoid with two arrows a -> b has two automorphisms of a
    G = FinCat.group_action_groupoid(["a", "b"], [0, 1], [[0, 1], [1, 0]], 0)
    assert check_category(G) == []
    assert nerve_truncated(G, 1).counts() == [2, 8]


def test_equivalence_examples():
    D2 = FinCat.poset(2)
    assert is_equivalence(FinFunctor.identity(D2))

    D1, T = FinCat.poset(1), FinCat.terminal()
    collapse = FinFunctor(D1, T, {0: "*", 1: "*"}, {f: T.identity("*") for f in D1.morphisms})
    res = is_equivalence(collapse)
    # faithful (hom-sets have at most one element) but Hom(1, 0) is empty
    assert not res and "not full" in res.counterexample

    G = FinCat.contractible_groupoid(["a", "b"])
    sub = G.full_subcategory(["a"])
    inc = FinFunctor(sub, G, {"a": "a"}, {sub.identity("a"): G.identity("a")})
    assert is_equivalence(inc)


def test_json_roundtrip():
    for C in (FinCat.poset(2), FinCat.contractible_groupoid(["a", "b"]), FinCat.terminal()):
        assert FinCat.from_json(C.to_json()).to_json() == C.to_json()


def test_iso_classes_of_groupoid():
    G = FinCat.contractible_groupoid(["a", "b", "c"])
    assert len(set(G.iso_classes().values())) == 1
    assert len(set(FinCat.poset(2).iso_classes().values())) == 3


@st.composite
def monoid_tables(draw):
    """Cyclic monoids: Z/n as a one-object category."""
    n = draw(st.integers(1, 5))
    return n, [[(a + b) % n for b in range(n)] for a in range(n)]


@given(monoid_tables())
@settings(max_examples=20, deadline=None)
def test_one_object_categories_are_valid(data):
    n, table = data
    C = FinCat.from_monoid(range(n), table, 0)
    assert check_category(C) == []
    assert all(C.is_iso(f) for f in C.morphisms)


@given(st.integers(0, 3), st.data())
@settings(max_examples=25, deadline=None)
def test_composition_is_associative_in_posets(n, data):
    P = FinCat.poset(n)
    chain = sorted(data.draw(st.lists(st.integers(0, n), min_size=4, max_size=4)))
    a, b, c, d = chain
    f, g, h = P.hom(a, b)[0], P.hom(b, c)[0], P.hom(c, d)[0]
    assert P.compose(h, P.compose(g, f)) == P.compose(P.compose(h, g), f)
    assert P.compose(P.identity(b), f) == f == P.compose(f, P.identity(a))
