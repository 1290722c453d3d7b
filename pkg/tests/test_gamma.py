import itertools

import pytest
from hypothesis import given, settings, strategies as st

from rigidtrace import gamma
from rigidtrace.gamma import (
    FinCMonoid,
    GammaMap,
    GammaSet,
    check_gamma_functoriality,
    check_monoid,
    compose,
    fold_map,
    gamma_maps,
    identity,
    is_special,
    nerve_monoid,
    segal_map,
    shuffle,
    smash,
)
from rigidtrace.smc import matrix_category, nerve_smc

MONOIDS = {
    "trivial": FinCMonoid.trivial(),
    "Z/2": FinCMonoid.cyclic(2),
    "Z/3": FinCMonoid.cyclic(3),
    "N<=2": FinCMonoid.truncated_naturals(2),
}


def test_map_counts():
    assert len(gamma_maps(1, 1)) == 2
    assert len(gamma_maps(2, 1)) == 4
    for n, m in itertools.product(range(4), repeat=2):
        assert len(gamma_maps(n, m)) == (m + 1) ** n


def test_segal_maps():
    assert segal_map(1, 1) == identity(1)
    assert segal_map(3, 2).table == (0, 0, 1, 0)
    inc = GammaMap(1, 2, (0, 1))
    assert compose(segal_map(2, 1), inc) == identity(1)


def test_pointed_maps_fix_the_base_point():
    with pytest.raises(gamma.GammaError):
        GammaMap(1, 1, (1, 1))


def test_nerve_pushforward_examples():
    X = nerve_monoid(FinCMonoid.cyclic(2), 3)
    assert X.push(fold_map(2), (1, 1)) == (0,)
    Y = nerve_monoid(FinCMonoid.cyclic(3), 3)
    for a, b in itertools.product(range(3), repeat=2):
        assert Y.push(segal_map(2, 2), (a, b)) == (b,)
        assert Y.push(segal_map(2, 1), (a, b)) == (a,)
    T = nerve_monoid(FinCMonoid.trivial(), 4)
    assert T.level_sizes() == [1] * 5


def test_empty_fiber_gives_the_unit():
    E = FinCMonoid.truncated_naturals(2)
    X = nerve_monoid(E, 2)
    zero = GammaMap(2, 1, (0, 0, 0))
    assert X.push(zero, (2, 1)) == (E.unit,)


@pytest.mark.parametrize("name", sorted(MONOIDS))
def test_nerves_are_functorial_and_special(name):
    E = MONOIDS[name]
    assert check_monoid(E) == []
    X = nerve_monoid(E, 4)
    assert check_gamma_functoriality(X, 3) == []
    rep = is_special(X, 4)
    assert rep.ok and rep.failed_level is None and len(rep.levels) == 5


def test_functoriality_sampled_at_level_4():
    X = nerve_monoid(FinCMonoid.cyclic(2), 4)
    maps = gamma_maps(4, 4)
    for u, v in zip(maps[::37], maps[5::41]):
        for x in X.sets[4]:
            assert X.push(v, X.push(u, x)) == X.push(compose(v, u), x)


def test_wrong_exponent_fails_at_level_zero():
    E = FinCMonoid.cyclic(2)
    base = nerve_monoid(E, 3)
    # X([n]) = E^(n+1): carry one extra coordinate along untouched
    sets = [[(e,) + x for e in E.elements for x in s] for s in base.sets]
    X = GammaSet(3, sets, lambda u, x: (x[0],) + base.push(u, x[1:]))
    rep = is_special(X, 3)
    assert not rep.ok and rep.failed_level == 0


def test_corrupted_level_is_named():
    X = nerve_monoid(FinCMonoid.cyclic(2), 4)
    sets = [list(s) for s in X.sets]
    sets[2] = sets[2][:-1]
    rep = is_special(GammaSet(4, sets, X.act), 4)
    assert not rep.ok and rep.failed_level == 2
    assert "surjective" in rep.levels[-1][2]


def test_smash_and_shuffle():
    size, order = smash(1, 3)
    assert size == 3 and all(order[(1, j)] == j for j in range(1, 4))
    assert shuffle(1, 3) == identity(3)
    assert smash(2, 2)[0] == 4
    assert shuffle(2, 2).table == (0, 1, 3, 2, 4)
    assert compose(shuffle(2, 3), shuffle(3, 2)) == identity(6)


def test_nerve_of_one_dim_matrices_is_special():
    A = matrix_category("F2", 1)
    assert is_special(nerve_smc(A, 3), 3).ok


def test_monoid_json_roundtrip():
    for E in MONOIDS.values():
        assert FinCMonoid.from_json(E.to_json()) == E


@st.composite
def composable_maps(draw, top=3):
    n, m, k = (draw(st.integers(0, top)) for _ in range(3))
    u = draw(st.sampled_from(gamma_maps(n, m)))
    v = draw(st.sampled_from(gamma_maps(m, k)))
    w = draw(st.sampled_from(gamma_maps(k, draw(st.integers(0, top)))))
    return u, v, w


@given(composable_maps())
@settings(max_examples=100, deadline=None)
def test_composition_is_associative(maps):
    u, v, w = maps
    assert compose(w, compose(v, u)) == compose(compose(w, v), u)
    assert compose(identity(u.target), u) == u == compose(u, identity(u.source))


@given(composable_maps(), st.sampled_from(sorted(MONOIDS)), st.data())
@settings(max_examples=100, deadline=None)
def test_nerve_respects_composition(maps, name, data):
    u, v, _ = maps
    X = nerve_monoid(MONOIDS[name], 3)
    x = data.draw(st.sampled_from(X.sets[u.source]))
    assert X.push(v, X.push(u, x)) == X.push(compose(v, u), x)
