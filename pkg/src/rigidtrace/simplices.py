"""The category of simplices Δ(I) of a finite category, truncated at dimension N.

An object is a simplex ``([n], u)`` of the nerve, stored as the pair
``(vertices, arrows)``.  A morphism ``([n], u) -> ([m], v)`` is a monotone
``f: [m] -> [n]`` with ``u ∘ f = v``, stored as the tuple of values of
``f``.  The projection sends ``([n], u)`` to ``u(0)`` and ``f`` to
``u(0 -> f(0))``.

Two candidate notions of vertical morphism are computed: ``f(0) = 0`` (the
set ``W``) and "projects to an identity" (``W_pi``).  They differ on
degenerate simplices; only ``W`` makes ``([0], i)`` terminal in the fiber.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .fincat import FinCat


def _monotone(m, n):
    """All monotone maps ``[m] -> [n]`` as value tuples."""
    return list(itertools.combinations_with_replacement(range(n + 1), m + 1))


def _chains(I: FinCat, N: int):
    out = [[((x,), ()) for x in I.objects]]
    for _ in range(N):
        nxt = []
        for verts, arrows in out[-1]:
            for f in I.hom_from(verts[-1]):
                nxt.append((verts + (I.tgt(f),), arrows + (f,)))
        out.append(nxt)
    return out


@dataclass
class SimplexCat:
    base: FinCat
    N: int
    objects: list
    morphisms: list  # (source, target, f)
    index: dict = field(repr=False)  # (source, f) -> morphism id

    def src(self, m):
        return self.morphisms[m][0]

    def tgt(self, m):
        return self.morphisms[m][1]

    def label(self, m):
        return self.morphisms[m][2]

    def identity(self, x):
        return self.index[(x, tuple(range(len(x[0]))))]

    def compose(self, g, f):
        """``g ∘ f``; labels compose contravariantly."""
        x, y, lf = self.morphisms[f]
        y2, _, lg = self.morphisms[g]
        if y != y2:
            raise ValueError("non-composable morphisms of Δ(I)")
        return self.index[(x, tuple(lf[t] for t in lg))]

    def arrow(self, x, k, l):
        """``u(k -> l)`` for the simplex ``x``."""
        verts, arrows = x
        I = self.base
        acc = I.identity(verts[k])
        for a in arrows[k:l]:
            acc = I.compose(a, acc)
        return acc

    def pi_obj(self, x):
        return x[0][0]

    def pi(self, m):
        x, _, f = self.morphisms[m]
        return self.arrow(x, 0, f[0])

    def is_vertical(self, m):
        return self.morphisms[m][2][0] == 0

    def is_pi_identity(self, m):
        return self.base.is_identity(self.pi(m))

    @property
    def W(self):
        return [m for m in range(len(self.morphisms)) if self.is_vertical(m)]

    @property
    def W_pi(self):
        return [m for m in range(len(self.morphisms)) if self.is_pi_identity(m)]

    def hom(self, x, y):
        return self._hom.get((x, y), [])

    def hom_to(self, y):
        return self._into.get(y, [])

    def counts(self):
        dims = [0] * (self.N + 1)
        for x in self.objects:
            dims[len(x[0]) - 1] += 1
        return dims

    def to_fincat(self, validate=True) -> FinCat:
        mors = [((self.name(x), f), x, y) for x, y, f in self.morphisms]
        ids = {x: self.identity(x) for x in self.objects}
        comp = {}
        for f, (x, y, _) in enumerate(self.morphisms):
            for g in self._out.get(y, []):
                comp[(g, f)] = self.compose(g, f)
        return FinCat(self.objects, mors, ids, comp, validate=validate)

    def name(self, x):
        verts, arrows = x
        I = self.base
        if not arrows:
            return f"[0]({verts[0]})"
        return f"[{len(arrows)}](" + ",".join(str(I.name(a)) for a in arrows) + ")"


def category_of_simplices(I: FinCat, N: int) -> SimplexCat:
    if N < 0:
        raise ValueError("N must be >= 0")
    layers = _chains(I, N)
    objects = [x for layer in layers for x in layer]
    known = set(objects)
    S = SimplexCat(I, N, objects, [], {})
    S._hom, S._into, S._out = {}, {}, {}
    for x in objects:
        n = len(x[0]) - 1
        for m in range(N + 1):
            for f in _monotone(m, n):
                verts = tuple(x[0][k] for k in f)
                arrows = tuple(S.arrow(x, f[t], f[t + 1]) for t in range(m))
                y = (verts, arrows)
                if y not in known:
                    raise AssertionError(f"u∘f = {y!r} is not a simplex")
                k = len(S.morphisms)
                S.morphisms.append((x, y, f))
                S.index[(x, f)] = k
                S._hom.setdefault((x, y), []).append(k)
                S._into.setdefault(y, []).append(k)
                S._out.setdefault(x, []).append(k)
    return S


@dataclass
class FiberReport:
    i: object
    fiber_objects: int
    terminal: bool
    terminal_witness: object
    terminal_objects: list
    cofibered: bool
    lifts_checked: int
    strongly_cofibered: bool
    strong_counterexample: str | None = None
    missing_lifts: list = field(default_factory=list)
    pi_identity_terminal: bool | None = None

    @property
    def ok(self):
        return self.terminal and self.cofibered


def _fiber_objects(S: SimplexCat, i):
    return [x for x in S.objects if S.pi_obj(x) == i]


def _is_terminal(S, objs, t, vertical):
    for x in objs:
        if sum(1 for m in S.hom(x, t) if vertical(m)) != 1:
            return False
    return True


def is_cartesian_relative(S: SimplexCat, alpha) -> bool:
    """``α: y -> x`` is cartesian relative to the fibers: for every ``z`` over
    ``π(y)``, ``g ↦ α ∘ g`` is a bijection from vertical ``z -> y`` onto the
    maps ``z -> x`` projecting to ``π(α)``."""
    y, x, _ = S.morphisms[alpha]
    w = S.pi(alpha)
    j = S.pi_obj(y)
    for z in S.objects:
        if S.pi_obj(z) != j:
            continue
        image = set()
        n = 0
        for g in S.hom(z, y):
            if S.is_vertical(g):
                image.add(S.compose(alpha, g))
                n += 1
        target = {h for h in S.hom(z, x) if S.pi(h) == w}
        if n != len(image) or image != target:
            return False
    return True


def strong_cartesian_failure(S: SimplexCat, alpha):
    """First ``z`` at which ``Hom(z, y) -> Hom(z, x) ×_{I(πz, πx)} I(πz, πy)`` is
    not a bijection, or ``None``."""
    I = S.base
    y, x, _ = S.morphisms[alpha]
    w = S.pi(alpha)
    for z in S.objects:
        image = {}
        for g in S.hom(z, y):
            key = (S.compose(alpha, g), S.pi(g))
            image[key] = image.get(key, 0) + 1
        target = set()
        for h in S.hom(z, x):
            for v in I.hom(S.pi_obj(z), S.pi_obj(y)):
                if I.compose(w, v) == S.pi(h):
                    target.add((h, v))
        if any(c > 1 for c in image.values()) or set(image) != target:
            return f"z = {S.name(z)}: {sum(image.values())} maps into {S.name(y)} against {len(target)} pairs"
    return None


def fiber_report(S: SimplexCat, i) -> FiberReport:
    """Terminal object of the vertical fiber over ``i`` and cartesian lifts of
    every arrow into ``i`` at every simplex over ``i`` of dimension < N."""
    I = S.base
    objs = _fiber_objects(S, i)
    witness = ((i,), ())
    terms = [t for t in objs if _is_terminal(S, objs, t, S.is_vertical)]
    pi_term = _is_terminal(S, objs, witness, S.is_pi_identity)
    missing = []
    checked = 0
    strong = True
    strong_cx = None
    for x in objs:
        if len(x[0]) - 1 >= S.N:
            continue
        for w in I.hom_to(i):
            checked += 1
            lift = None
            for alpha in S.hom_to(x):
                if S.pi(alpha) == w and is_cartesian_relative(S, alpha):
                    lift = alpha
                    break
            if lift is None:
                missing.append(f"{I.name(w)!r} at {S.name(x)}")
                continue
            if strong:
                # is any lift of w at x strongly cartesian?
                fails = [strong_cartesian_failure(S, a) for a in S.hom_to(x) if S.pi(a) == w]
                if all(fails):
                    strong = False
                    strong_cx = f"arrow {I.name(w)!r} at {S.name(x)}; e.g. {fails[0]}"
    return FiberReport(i, len(objs), witness in terms, witness if witness in terms else None, terms,
                       not missing, checked, strong, strong_cx, missing, pi_term)


def factorization_failures(S: SimplexCat):
    """Every morphism ``g: z -> x`` with ``dim x < N`` factors as a vertical
    morphism followed by a relatively cartesian lift of ``π(g)``."""
    fails = []
    for g, (z, x, _) in enumerate(S.morphisms):
        if len(x[0]) - 1 >= S.N:
            continue
        w = S.pi(g)
        ok = False
        for alpha in S.hom_to(x):
            if S.pi(alpha) != w or not is_cartesian_relative(S, alpha):
                continue
            y = S.src(alpha)
            if any(S.is_vertical(v) and S.compose(alpha, v) == g for v in S.hom(z, y)):
                ok = True
                break
        if not ok:
            fails.append(g)
    return fails
