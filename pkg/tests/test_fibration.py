import itertools
import random

import pytest

from rigidtrace.fibration import (
    CatDiagram,
    cartesian_sections_roundtrip,
    check_diagram,
    delta1_diagrams,
    fiber_recovers,
    integrate,
    is_cartesian,
    is_cartesian_pullback,
    is_fibered,
    small_categories,
)
from rigidtrace.fincat import CategoryError, FinCat, FinFunctor, check_category, check_functor

I1 = FinCat.poset(1)
U = I1.mor("01")


def _const(C, D, y):
    return FinFunctor(C, D, {x: y for x in C.objects}, {f: D.identity(y) for f in C.morphisms})


def _pick_a():
    T, D = FinCat.terminal(), FinCat.discrete(["a", "b"])
    return CatDiagram.build(I1, {0: T, 1: D}, {U: _const(T, D, "a")})


def _idempotent_fiber():
    # F(1) is the monoid {e, z} with z z = z
    T = FinCat.terminal()
    M = FinCat.from_monoid(["e", "z"], {"e": {"e": "e", "z": "z"}, "z": {"e": "z", "z": "z"}}, "e")
    Fu = FinFunctor(T, M, {"*": "*"}, {T.identity("*"): M.identity("*")})
    return CatDiagram.build(I1, {0: T, 1: M}, {U: Fu})


def test_one_object_base_gives_the_fiber():
    C = FinCat.contractible_groupoid(["a", "b"])
    T = FinCat.terminal()
    P = integrate(CatDiagram.build(T, {"*": C}, {}))
    assert len(P.total.objects) == 2 and len(P.total) == len(C)
    assert all(P.projection(f) == T.identity("*") for f in P.total.morphisms)
    assert fiber_recovers(P, "*")


def test_pick_an_object_example():
    P = integrate(_pick_a())
    A = P.total
    assert check_category(A) == [] and check_functor(P.projection) == []
    assert len(A.objects) == 3
    assert len(A.hom((0, "*"), (1, "a"))) == 1
    assert len(A.hom((0, "*"), (1, "b"))) == 0
    assert is_fibered(P) == []
    for i in I1.objects:
        assert fiber_recovers(P, i)


def test_cartesian_examples():
    P = integrate(_pick_a())
    A = P.total
    assert all(is_cartesian(P, A.identity(x)) for x in A.objects)
    (m,) = A.hom((0, "*"), (1, "a"))
    assert is_cartesian(P, m)

    Q = integrate(_idempotent_fiber())
    B = Q.total
    flags = {B.name(m): is_cartesian(Q, m) for m in B.hom((0, "*"), (1, "*"))}
    assert flags == {("01", "*", "e"): True, ("01", "*", "z"): False}


def test_cartesian_tests_agree():
    for F in (_pick_a(), _idempotent_fiber()):
        P = integrate(F)
        for m in P.total.morphisms:
            assert is_cartesian(P, m) == is_cartesian_pullback(P.total, P.projection, m)


def test_unknown_morphism_raises():
    P = integrate(_pick_a())
    with pytest.raises(KeyError):
        is_cartesian(P, 999)


def test_non_functorial_diagram_is_rejected():
    I2 = FinCat.poset(2)
    T = FinCat.terminal()
    D = FinCat.discrete(["a", "b"])
    fibers = {0: T, 1: D, 2: D}
    swap = FinFunctor(D, D, {"a": "b", "b": "a"}, {D.identity("a"): D.identity("b"),
                                                 D.identity("b"): D.identity("a")})
    funcs = {I2.mor("01"): _const(T, D, "a"), I2.mor("12"): swap, I2.mor("02"): _const(T, D, "a")}
    F = CatDiagram.build(I2, fibers, funcs)
    assert any("∘" in line for line in check_diagram(F))
    with pytest.raises(CategoryError):
        integrate(F)


def test_diagram_json_roundtrip():
    F = _idempotent_fiber()
    G = CatDiagram.from_json(F.to_json())
    assert G.to_json() == F.to_json()
    assert check_diagram(G) == []


def test_roundtrip_trivial_base():
    F = CatDiagram.build(FinCat.terminal(), {"*": FinCat.poset(1)}, {})
    assert cartesian_sections_roundtrip(F).ok


def test_roundtrip_discrete_fibers_over_delta1():
    cats = [FinCat.discrete(["x"]), FinCat.discrete(["x", "y"])]
    n = 0
    for C0, C1 in itertools.product(cats, repeat=2):
        for y in C1.objects:
            for y2 in C1.objects:
                # every object map is a functor between discrete categories
                omap = dict(zip(C0.objects, (y, y2)))
                Fu = FinFunctor(C0, C1, omap, {C0.identity(x): C1.identity(omap[x]) for x in C0.objects})
                if check_functor(Fu):
                    continue
                rep = cartesian_sections_roundtrip(CatDiagram.build(I1, {0: C0, 1: C1}, {U: Fu}))
                assert rep.ok, rep.detail
                n += 1
    assert n >= 4


def test_roundtrip_constant_groupoid_over_delta2():
    I2 = FinCat.poset(2)
    G = FinCat.contractible_groupoid(["a", "b"])
    funcs = {u: FinFunctor.identity(G) for u in I2.morphisms}
    rep = cartesian_sections_roundtrip(CatDiagram(I2, {i: G for i in I2.objects}, funcs))
    assert rep.ok
    assert all(v["evaluation_equivalence"] and v["fiber_recovers"] for v in rep.per_object.values())


def test_non_invertible_fiber_still_roundtrips():
    rep = cartesian_sections_roundtrip(_idempotent_fiber())
    assert rep.ok and rep.fibered == []


def test_small_categories_are_valid_and_distinct():
    cats = small_categories(2, 4)
    assert all(check_category(C) == [] for C in cats)
    assert len(cats) == 65


def test_sampled_sweep_over_delta1():
    diagrams = list(delta1_diagrams(2, 3))
    rng = random.Random(7)
    for F in rng.sample(diagrams, min(150, len(diagrams))):
        P = integrate(F, validate=False)
        assert is_fibered(P) == []
        for i in I1.objects:
            assert fiber_recovers(P, i)
        for m in P.total.morphisms:
            assert is_cartesian(P, m) == is_cartesian_pullback(P.total, P.projection, m)
