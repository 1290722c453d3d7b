import pytest

from rigidtrace.fincat import FinCat, check_category
from rigidtrace.simplices import (
    category_of_simplices,
    factorization_failures,
    fiber_report,
)

BASES = {
    "pt": FinCat.terminal(),
    "Delta1": FinCat.poset(1),
    "Delta2": FinCat.poset(2),
    "groupoid": FinCat.contractible_groupoid(["a", "b"]),
}


def test_terminal_base():
    S = category_of_simplices(FinCat.terminal(), 2)
    assert S.counts() == [1, 1, 1]
    # every map projects to the identity; W (first vertex kept) is smaller
    assert len(S.W_pi) == len(S.morphisms) == 31
    assert len(S.W) == 19
    assert check_category(S.to_fincat()) == []
    rep = fiber_report(S, "*")
    assert rep.ok and rep.terminal_witness == (("*",), ())
    assert rep.fiber_objects == 3


def test_delta1_object_count():
    S = category_of_simplices(FinCat.poset(1), 1)
    assert len(S.objects) == 5 and S.counts() == [2, 3]


def test_projection_reads_the_first_vertex():
    I = FinCat.poset(1)
    S = category_of_simplices(I, 1)
    x = ((0, 1), (I.mor("01"),))
    assert S.pi_obj(x) == 0


def test_negative_bound_is_rejected():
    with pytest.raises(ValueError):
        category_of_simplices(FinCat.terminal(), -1)


@pytest.mark.parametrize("name", sorted(BASES))
def test_simplex_category_is_a_category(name):
    S = category_of_simplices(BASES[name], 2)
    assert check_category(S.to_fincat()) == []


@pytest.mark.parametrize("name", sorted(BASES))
def test_vertical_maps_form_a_wide_subcategory(name):
    S = category_of_simplices(BASES[name], 2)
    W = set(S.W)
    assert all(S.identity(x) in W for x in S.objects)
    for g in W:
        for f in S.hom_to(S.src(g)):
            if f in W:
                assert S.compose(g, f) in W
    # vertical maps project to identities
    assert W <= set(S.W_pi)


@pytest.mark.parametrize("name", sorted(BASES))
def test_fibers_have_terminal_vertex_and_lifts(name):
    I = BASES[name]
    S = category_of_simplices(I, 3)
    for i in I.objects:
        rep = fiber_report(S, i)
        assert rep.terminal and rep.terminal_witness == ((i,), ())
        # the terminal object is unique
        assert rep.terminal_objects == [((i,), ())]
        assert rep.cofibered and rep.missing_lifts == []


def test_delta1_vertex_zero():
    S = category_of_simplices(FinCat.poset(1), 3)
    rep = fiber_report(S, 0)
    assert rep.ok and rep.terminal_witness == ((0,), ())


def test_projection_identity_maps_do_not_give_a_terminal_vertex():
    # degenerate simplices over i have two maps to ([0], i) projecting to id_i
    S = category_of_simplices(FinCat.terminal(), 2)
    rep = fiber_report(S, "*")
    assert rep.pi_identity_terminal is False


@pytest.mark.parametrize("name", ["Delta1", "Delta2", "groupoid"])
def test_vertical_then_cartesian_factorization(name):
    S = category_of_simplices(BASES[name], 3)
    assert factorization_failures(S) == []
