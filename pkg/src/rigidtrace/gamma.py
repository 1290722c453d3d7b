"""Segal's category Γ of pointed finite sets, Γ-sets and Γ-categories.

``[n]`` is ``{0, ..., n}`` pointed at 0.  A map ``[n] -> [m]`` is stored as
the tuple of its values, so ``table[0] == 0`` always.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable


class GammaError(ValueError):
    pass


@dataclass(frozen=True)
class GammaMap:
    source: int
    target: int
    table: tuple

    def __post_init__(self):
        if self.source < 0 or self.target < 0:
            raise GammaError("Γ objects are [n] with n >= 0")
        if len(self.table) != self.source + 1:
            raise GammaError(f"table of length {len(self.table)} for source [{self.source}]")
        if self.table[0] != 0:
            raise GammaError("Γ maps must send 0 to 0")
        if any(not 0 <= v <= self.target for v in self.table):
            raise GammaError(f"value out of range for target [{self.target}]")

    def __call__(self, i: int) -> int:
        return self.table[i]

    def fiber(self, j: int):
        """Preimage of ``j`` in increasing order, basepoint excluded."""
        return [i for i in range(1, self.source + 1) if self.table[i] == j]

    def is_bijective(self):
        return self.source == self.target and sorted(self.table) == list(range(self.source + 1))

    def __repr__(self):
        return f"[{self.source}]->[{self.target}]{list(self.table[1:])}"


def gamma_map(values, target=None) -> GammaMap:
    """Build from the values on ``1..n`` (the basepoint is implicit)."""
    values = tuple(values)
    if target is None:
        target = max(values, default=0)
    return GammaMap(len(values), target, (0,) + values)


def identity(n: int) -> GammaMap:
    return GammaMap(n, n, tuple(range(n + 1)))


def compose(g: GammaMap, f: GammaMap) -> GammaMap:
    """``g ∘ f``."""
    if f.target != g.source:
        raise GammaError(f"cannot compose {g!r} after {f!r}")
    return GammaMap(f.source, g.target, tuple(g.table[v] for v in f.table))


@lru_cache(maxsize=None)
def gamma_maps(n: int, m: int) -> tuple:
    """All ``(m+1)**n`` pointed maps ``[n] -> [m]``."""
    if n < 0 or m < 0:
        raise GammaError("n, m must be >= 0")
    return tuple(GammaMap(n, m, (0,) + vals) for vals in itertools.product(range(m + 1), repeat=n))


def segal_map(n: int, i: int) -> GammaMap:
    """``s_i : [n] -> [1]`` with ``s_i(j) = 1`` iff ``j == i``."""
    if not 1 <= i <= n:
        raise GammaError(f"Segal index {i} out of range for [{n}]")
    return GammaMap(n, 1, tuple(1 if j == i else 0 for j in range(n + 1)))


def fold_map(n: int) -> GammaMap:
    """``[n] -> [1]`` sending every non-base point to 1 (``p`` for n = 2)."""
    return GammaMap(n, 1, (0,) + (1,) * n)


def smash(n: int, m: int):
    """``[n] ∧ [m] = [nm]`` with ``(i, j)`` numbered ``(i-1)*m + j`` (i major)."""
    order = {(i, j): (i - 1) * m + j for i in range(1, n + 1) for j in range(1, m + 1)}
    return n * m, order


def shuffle(n: int, m: int) -> GammaMap:
    """The automorphism of ``[nm]`` taking the i-major index of ``(i, j)``
    to its j-major index ``(j-1)*n + i``."""
    _, order = smash(n, m)
    table = [0] * (n * m + 1)
    for (i, j), k in order.items():
        table[k] = (j - 1) * n + i
    return GammaMap(n * m, n * m, tuple(table))


# commutative monoids -------------------------------------------------------

@dataclass(frozen=True)
class FinCMonoid:
    elements: tuple
    op: dict  # (a, b) -> a*b
    unit: object

    @classmethod
    def from_table(cls, elements, table, unit):
        elements = tuple(elements)
        op = {(a, b): table[i][j] for i, a in enumerate(elements) for j, b in enumerate(elements)}
        return cls(elements, op, unit)

    @classmethod
    def cyclic(cls, n):
        """``(Z/n, +)``."""
        els = tuple(range(n))
        return cls(els, {(a, b): (a + b) % n for a in els for b in els}, 0)

    @classmethod
    def trivial(cls):
        return cls((0,), {(0, 0): 0}, 0)

    @classmethod
    def truncated_naturals(cls, k):
        """``{0, ..., k}`` under addition capped at ``k``."""
        els = tuple(range(k + 1))
        return cls(els, {(a, b): min(a + b, k) for a in els for b in els}, 0)

    def mul(self, a, b):
        return self.op[(a, b)]

    def sum(self, xs):
        acc = self.unit
        for x in xs:
            acc = self.op[(acc, x)]
        return acc

    def to_json(self):
        return {"elements": list(self.elements),
                "op": [[self.op[(a, b)] for b in self.elements] for a in self.elements],
                "unit": self.unit}

    @classmethod
    def from_json(cls, data):
        return cls.from_table(data["elements"], data["op"], data["unit"])


def check_monoid(E: FinCMonoid) -> list[str]:
    report = []
    els = set(E.elements)
    if E.unit not in els:
        report.append(f"unit {E.unit!r} is not an element")
    for a in E.elements:
        for b in E.elements:
            if (a, b) not in E.op or E.op[(a, b)] not in els:
                report.append(f"operation not closed at ({a!r}, {b!r})")
    if report:
        return report
    for a in E.elements:
        if E.op[(E.unit, a)] != a or E.op[(a, E.unit)] != a:
            report.append(f"unit law fails at {a!r}")
        for b in E.elements:
            if E.op[(a, b)] != E.op[(b, a)]:
                report.append(f"not commutative at ({a!r}, {b!r})")
            for c in E.elements:
                if E.op[(E.op[(a, b)], c)] != E.op[(a, E.op[(b, c)])]:
                    report.append(f"not associative at ({a!r}, {b!r}, {c!r})")
    return report


# Γ-sets ---------------------------------------------------------------------

@dataclass
class GammaSet:
    """A functor Γ -> Set known up to level ``bound``.

    ``sets[n]`` lists ``X([n])``; ``act(u, x)`` applies ``X(u)``.
    """

    bound: int
    sets: list
    act: Callable

    def push(self, u: GammaMap, x):
        return self.act(u, x)

    def as_category(self) -> "DiscreteGamma":
        return DiscreteGamma(self)

    def level_sizes(self):
        return [len(s) for s in self.sets]


def nerve_monoid(E: FinCMonoid, bound: int = 4) -> GammaSet:
    """``X([n]) = E^n`` with ``u_!(x)_j`` the sum over the fiber of ``j``."""

    def act(u, x):
        return tuple(E.sum(x[i - 1] for i in u.fiber(j)) for j in range(1, u.target + 1))

    sets = [list(itertools.product(E.elements, repeat=n)) for n in range(bound + 1)]
    return GammaSet(bound, sets, act)


def check_gamma_functoriality(X: GammaSet, bound=None) -> list[str]:
    """``X(v∘u) = X(v)∘X(u)`` and ``X(id) = id`` for all maps among levels <= bound."""
    bound = X.bound if bound is None else bound
    report = []
    for n in range(bound + 1):
        idn = identity(n)
        for x in X.sets[n]:
            if X.push(idn, x) != x:
                report.append(f"X(id_[{n}]) moves {x!r}")
        for m in range(bound + 1):
            for u in gamma_maps(n, m):
                images = {x: X.push(u, x) for x in X.sets[n]}
                for k in range(bound + 1):
                    for v in gamma_maps(m, k):
                        vu = compose(v, u)
                        for x, ux in images.items():
                            if X.push(v, ux) != X.push(vu, x):
                                report.append(f"X({v!r}∘{u!r}) != X({v!r})∘X({u!r}) at {x!r}")
                                return report
    return report


# Γ-categories ------------------------------------------------------------------

class DiscreteCat:
    """Discrete category on a finite set; the morphism of ``x`` is ``('id', x)``."""

    def __init__(self, objects):
        self.objects = list(objects)

    def hom(self, x, y):
        return [("id", x)] if x == y else []

    def identity(self, x):
        return ("id", x)

    def compose(self, g, f):
        if g != f:
            raise GammaError("non-composable morphisms in a discrete category")
        return f

    def src(self, f):
        return f[1]

    def tgt(self, f):
        return f[1]

    def inverse(self, f):
        return f

    def find_iso(self, x, y):
        return ("id", x) if x == y else None


class GammaCategory:
    """A pseudo-functor Γ -> Cat, known up to ``bound``.

    Subclasses provide ``level(n)`` (an object with ``objects``, ``hom``,
    ``compose``, ``identity``, ``src``, ``tgt``, ``inverse``), ``push`` and
    ``push_mor`` for ``u_!``, and ``coherence(v, u, x)``, the comparison
    ``v_! u_! x -> (v∘u)_! x``.  Strict functors keep the default identity
    coherence.
    """

    bound = 4

    def level(self, n):
        raise NotImplementedError

    def push(self, u: GammaMap, x):
        raise NotImplementedError

    def push_mor(self, u: GammaMap, f):
        raise NotImplementedError

    def coherence(self, v: GammaMap, u: GammaMap, x):
        return self.level(v.target).identity(self.push(v, self.push(u, x)))

    def segal(self, n, x):
        return tuple(self.push(segal_map(n, i), x) for i in range(1, n + 1))

    def segal_mor(self, n, f):
        return tuple(self.push_mor(segal_map(n, i), f) for i in range(1, n + 1))

    def segal_preimage(self, n, xs):
        """An object ``z`` with ``segal(n, z) == xs`` on the nose, if one is known."""
        return None

    def lift(self, n, z, z2, fs):
        """The morphism ``h: z -> z2`` of level ``n`` whose Segal image is ``fs``."""
        for h in self.level(n).hom(z, z2):
            if self.segal_mor(n, h) == tuple(fs):
                return h
        raise GammaError(f"no lift at level {n} of {fs!r}")


class DiscreteGamma(GammaCategory):
    """A Γ-set regarded as a levelwise discrete Γ-category."""

    def __init__(self, X: GammaSet):
        self.X = X
        self.bound = X.bound
        self._levels = [DiscreteCat(s) for s in X.sets]

    def level(self, n):
        return self._levels[n]

    def push(self, u, x):
        return self.X.push(u, x)

    def push_mor(self, u, f):
        return ("id", self.X.push(u, f[1]))


# the special condition ------------------------------------------------------

@dataclass
class SpecialReport:
    ok: bool
    levels: list = field(default_factory=list)  # (n, ok, detail)
    failed_level: int | None = None

    def __bool__(self):
        return self.ok


def _special_set(X: GammaSet, bound):
    levels = []
    for n in range(bound + 1):
        if n == 0:
            ok = len(X.sets[0]) == 1
            detail = "X([0]) is a singleton" if ok else f"X([0]) has {len(X.sets[0])} elements"
        else:
            target = set(itertools.product(X.sets[1], repeat=n))
            seen = {}
            detail = None
            for x in X.sets[n]:
                key = tuple(X.push(segal_map(n, i), x) for i in range(1, n + 1))
                if key in seen:
                    detail = f"Segal map not injective: {seen[key]!r} and {x!r} both map to {key!r}"
                    break
                if key not in target:
                    detail = f"Segal image {key!r} of {x!r} outside X([1])^{n}"
                    break
                seen[key] = x
            if detail is None and len(seen) != len(target):
                detail = f"Segal map not surjective: {len(seen)} of {len(target)} tuples hit"
            ok = detail is None
            if ok:
                detail = f"bijection X([{n}]) -> X([1])^{n} ({len(target)} elements)"
        levels.append((n, ok, detail))
        if not ok:
            return SpecialReport(False, levels, n)
    return SpecialReport(True, levels)


def _special_category(G: GammaCategory, bound):
    levels = []
    L1 = G.level(1)
    for n in range(bound + 1):
        L = G.level(n)
        objs = list(L.objects)
        detail = None
        if n == 0:
            if not objs:
                detail = "level 0 is empty"
            for x in objs:
                for y in objs:
                    if len(list(L.hom(x, y))) != 1:
                        detail = "level 0 is not equivalent to the point"
                        break
                if detail:
                    break
        else:
            for z in objs:
                cz = G.segal(n, z)
                for z2 in objs:
                    cz2 = G.segal(n, z2)
                    image = set()
                    count = 0
                    for h in L.hom(z, z2):
                        image.add(G.segal_mor(n, h))
                        count += 1
                    if len(image) != count:
                        detail = f"Segal functor not faithful on Hom({z!r}, {z2!r})"
                        break
                    expected = 1
                    for a, b in zip(cz, cz2):
                        expected *= len(list(L1.hom(a, b)))
                    if count != expected:
                        detail = f"Segal functor not full on Hom({z!r}, {z2!r})"
                        break
                if detail:
                    break
            if detail is None:
                onnose = {G.segal(n, z) for z in objs}
                for xs in itertools.product(L1.objects, repeat=n):
                    if xs in onnose:
                        continue
                    hit = any(all(L1.find_iso(a, b) is not None for a, b in zip(G.segal(n, z), xs)) for z in objs)
                    if not hit:
                        detail = f"{xs!r} is not in the essential image of the Segal functor"
                        break
        ok = detail is None
        levels.append((n, ok, detail or f"level {n} Segal functor is an equivalence"))
        if not ok:
            return SpecialReport(False, levels, n)
    return SpecialReport(True, levels)


def is_special(X, bound: int = 4) -> SpecialReport:
    """Segal condition up to ``bound``: bijections for Γ-sets, equivalences of
    categories for Γ-categories.  The report names the first failing level."""
    if isinstance(X, GammaSet):
        return _special_set(X, min(bound, X.bound))
    return _special_category(X, bound)
