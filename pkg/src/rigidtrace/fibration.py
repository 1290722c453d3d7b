"""Grothendieck construction of strict diagrams ``F: I -> Cat``.

A morphism ``(i, x) -> (j, y)`` of the total category is a pair ``(u, γ)``
with ``u: i -> j`` in the base and ``γ: F(u)(x) -> y`` in ``F(j)``.  A
morphism is cartesian when precomposing with it induces bijections
``A(y, z) -> A(x, z) ×_{I(i, k)} I(j, k)`` for every ``z``; on the total
category this happens exactly when ``γ`` is invertible.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .fincat import (CategoryError, FinCat, FinFunctor, check_category,
                     check_functor, comma_under, is_equivalence)

SECTION_CAP = 10 ** 5


class CapExceeded(RuntimeError):
    pass


@dataclass
class CatDiagram:
    """Strict functor ``I -> Cat``: ``fibers[i]`` is a FinCat and
    ``functors[u]`` a FinFunctor ``F(src u) -> F(tgt u)`` for every morphism id ``u``."""

    base: FinCat
    fibers: dict
    functors: dict

    @classmethod
    def build(cls, base: FinCat, fibers: dict, functors: dict):
        """``functors`` may omit identities; they become identity functors."""
        funcs = dict(functors)
        for i in base.objects:
            funcs.setdefault(base.identity(i), FinFunctor.identity(fibers[i]))
        return cls(base, dict(fibers), funcs)

    def __call__(self, u):
        return self.functors[u]

    def to_json(self):
        I = self.base
        return {
            "base": I.to_json(),
            "fibers": [[i, self.fibers[i].to_json()] for i in I.objects],
            "functors": [{"arrow": I.name(u), "functor": self.functors[u].to_json()}
                         for u in I.morphisms if not I.is_identity(u)],
        }

    @classmethod
    def from_json(cls, data):
        from .fincat import _hashable
        I = FinCat.from_json(data["base"])
        fibers = {_hashable(i): FinCat.from_json(c) for i, c in data["fibers"]}
        funcs = {}
        for entry in data["functors"]:
            u = I.mor(_hashable(entry["arrow"]))
            funcs[u] = FinFunctor.from_json(fibers[I.src(u)], fibers[I.tgt(u)], entry["functor"])
        return cls.build(I, fibers, funcs)


def check_diagram(F: CatDiagram) -> list[str]:
    I = F.base
    report = []
    for i in I.objects:
        if i not in F.fibers:
            report.append(f"no fiber over {i!r}")
    for u in I.morphisms:
        if u not in F.functors:
            report.append(f"no functor for arrow {I.name(u)!r}")
    if report:
        return report
    for u in I.morphisms:
        Fu = F.functors[u]
        if Fu.source is not F.fibers[I.src(u)] and Fu.source != F.fibers[I.src(u)]:
            report.append(f"F({I.name(u)!r}) has the wrong source")
        if Fu.target is not F.fibers[I.tgt(u)] and Fu.target != F.fibers[I.tgt(u)]:
            report.append(f"F({I.name(u)!r}) has the wrong target")
        report.extend(f"F({I.name(u)!r}): {msg}" for msg in check_functor(Fu))
    if report:
        return report
    for i in I.objects:
        Fid = F.functors[I.identity(i)]
        C = F.fibers[i]
        if any(Fid.on_obj(x) != x for x in C.objects) or any(Fid(f) != f for f in C.morphisms):
            report.append(f"F(id_{i!r}) is not the identity")
    for v, u in I.composable_pairs():
        Fu, Fv, Fvu = F.functors[u], F.functors[v], F.functors[I.compose(v, u)]
        C = F.fibers[I.src(u)]
        if any(Fv.on_obj(Fu.on_obj(x)) != Fvu.on_obj(x) for x in C.objects) or \
                any(Fv(Fu(f)) != Fvu(f) for f in C.morphisms):
            report.append(f"F({I.name(v)!r} ∘ {I.name(u)!r}) != F({I.name(v)!r}) ∘ F({I.name(u)!r})")
    return report


@dataclass
class FiberedCat:
    total: FinCat
    projection: FinFunctor
    cartesian: frozenset
    components: dict | None = None  # morphism id -> (u, γ) for integrate outputs
    diagram: CatDiagram | None = None

    @property
    def base(self):
        return self.projection.target

    def fiber(self, i) -> FinCat:
        """Objects over ``i`` and morphisms over ``id_i``."""
        cache = self.__dict__.setdefault("_fibers", {})
        if i not in cache:
            cache[i] = self._fiber(i)
        return cache[i]

    def _fiber(self, i) -> FinCat:
        A, p, I = self.total, self.projection, self.base
        objs = [x for x in A.objects if p.on_obj(x) == i]
        idi = I.identity(i)
        mors = [f for f in A.morphisms if p(f) == idi]
        return _subcategory(A, objs, mors)

    def to_json(self):
        out = self.total.to_json()
        out["projection"] = self.projection.to_json()
        out["cartesian"] = [self.total.name(m) for m in sorted(self.cartesian)]
        return out


def _subcategory(A: FinCat, objs, mors) -> FinCat:
    mors = list(mors)
    index = {f: k for k, f in enumerate(mors)}
    comp = {}
    for g in mors:
        for f in mors:
            if A.tgt(f) == A.src(g):
                gf = A.compose(g, f)
                if gf not in index:
                    raise CategoryError([f"{A.name(g)!r} ∘ {A.name(f)!r} leaves the subcategory"])
                comp[(index[g], index[f])] = index[gf]
    # closed under composition and identities of a valid category: valid
    return FinCat(objs, [(A.name(f), A.src(f), A.tgt(f)) for f in mors],
                  {x: index[A.identity(x)] for x in objs}, comp, validate=False)


def integrate(F: CatDiagram, validate=True) -> FiberedCat:
    """The total category ``∫_I F`` with its projection and cartesian morphisms.

    ``validate=False`` skips the diagram and category checks (for diagrams
    already checked by the caller).
    """
    if validate:
        report = check_diagram(F)
        if report:
            raise CategoryError(report)
    I = F.base
    objects = [(i, x) for i in I.objects for x in F.fibers[i].objects]
    mors, comps = [], {}
    for (i, x) in objects:
        for u in I.hom_from(i):
            j = I.tgt(u)
            C = F.fibers[j]
            fx = F.functors[u].on_obj(x)
            for y in C.objects:
                for g in C.hom(fx, y):
                    name = (I.name(u), x, C.name(g))
                    comps[len(mors)] = (u, g)
                    mors.append((name, (i, x), (j, y)))
    pos = {(m[1], comps[k]): k for k, m in enumerate(mors)}
    ids = {}
    for k, (_, (i, x), _) in enumerate(mors):
        u, g = comps[k]
        if u == I.identity(i) and g == F.fibers[i].identity(x):
            ids[(i, x)] = k
    out_of = {}
    for k, (_, s, _) in enumerate(mors):
        out_of.setdefault(s, []).append(k)
    fcomp = {j: F.fibers[j]._comp for j in I.objects}
    fmaps = {v: F.functors[v].mor_map for v in I.morphisms}
    base_comp, base_tgt = I._comp, I._tgt
    compose = {}
    for k1, (_, a, b) in enumerate(mors):
        u, g = comps[k1]
        for k2 in out_of.get(b, ()):
            v, d = comps[k2]
            # (v, δ) ∘ (u, γ) = (v u, δ ∘ F(v)(γ))
            gamma = fcomp[base_tgt[v]][(d, fmaps[v][g])]
            compose[(k2, k1)] = pos[(a, (base_comp[(v, u)], gamma))]
    A = FinCat(objects, mors, ids, compose, validate=validate)
    proj = FinFunctor(A, I, {o: o[0] for o in objects}, {k: comps[k][0] for k in A.morphisms})
    cart = frozenset(k for k in A.morphisms if F.fibers[I.tgt(comps[k][0])].is_iso(comps[k][1]))
    return FiberedCat(A, proj, cart, comps, F)


def is_cartesian(P: FiberedCat, m: int) -> bool:
    """Fiber-component test when available, otherwise the pullback test."""
    if m not in set(P.total.morphisms):
        raise KeyError(f"unknown morphism {m!r}")
    if P.components is not None and P.diagram is not None:
        u, g = P.components[m]
        return P.diagram.fibers[P.base.tgt(u)].is_iso(g)
    return is_cartesian_pullback(P.total, P.projection, m)


def is_cartesian_pullback(A: FinCat, p: FinFunctor, m: int) -> bool:
    """For every ``z``: ``A(y, z) -> A(x, z) ×_{I(πx, πz)} I(πy, πz)``,
    ``g ↦ (g ∘ m, π g)``, is a bijection."""
    I = p.target
    x, y = A.src(m), A.tgt(m)
    pm = p(m)
    for z in A.objects:
        image = set()
        count = 0
        for g in A.hom(y, z):
            image.add((A.compose(g, m), p(g)))
            count += 1
        if len(image) != count:
            return False
        target = 0
        for h in A.hom(x, z):
            for w in I.hom(p.on_obj(y), p.on_obj(z)):
                if I.compose(w, pm) == p(h):
                    target += 1
        if target != count:
            return False
    return True


def is_fibered(P: FiberedCat) -> list[str]:
    """Every ``u: i -> j`` and ``x`` over ``i`` admit a cartesian ``α: x -> y``
    whose image is isomorphic to ``u`` under ``i``.  Returns the failures."""
    A, p, I = P.total, P.projection, P.base
    fails = []
    for x in A.objects:
        i = p.on_obj(x)
        for u in I.hom_from(i):
            ok = False
            for a in A.hom_from(x):
                if a not in P.cartesian:
                    continue
                v = p(a)
                if v == u or any(I.compose(w, v) == u and I.is_iso(w) for w in I.hom(I.tgt(v), I.tgt(u))):
                    ok = True
                    break
            if not ok:
                fails.append(f"no cartesian lift of {I.name(u)!r} at {x!r}")
    return fails


def fiber_recovers(P: FiberedCat, i) -> bool:
    """``x ↦ (i, x)``, ``γ ↦ (id_i, γ)`` is an isomorphism ``F(i) ≅ π^{-1}(i)``."""
    F = P.diagram
    C = F.fibers[i]
    Fib = P.fiber(i)
    I = P.base
    if len(Fib.objects) != len(C.objects) or len(Fib) != len(C):
        return False
    idname = I.name(I.identity(i))
    for g in C.morphisms:
        s = C.src(g)
        try:
            k = Fib.mor((idname, s, C.name(g)))
        except KeyError:
            return False
        if Fib.src(k) != (i, s) or Fib.tgt(k) != (i, C.tgt(g)):
            return False
    for g, f in C.composable_pairs():
        gf = C.compose(g, f)
        kg = Fib.mor((idname, C.src(g), C.name(g)))
        kf = Fib.mor((idname, C.src(f), C.name(f)))
        if Fib.name(Fib.compose(kg, kf)) != (idname, C.src(f), C.name(gf)):
            return False
    return True


# cartesian sections --------------------------------------------------------------

@dataclass
class Sections:
    """Cartesian sections of ``π`` over ``i/I`` and vertical transformations.

    A section is the tuple of total-category morphisms assigned to the
    morphisms of ``i/I`` (in id order); its objects are read off the
    identities.
    """

    i: object
    comma: FinCat
    forget: FinFunctor
    category: FinCat
    candidates: int


_COMMA_CACHE = {}


def _comma(i, I):
    key = (id(I), i)
    hit = _COMMA_CACHE.get(key)
    if hit is None or hit[0] is not I:
        hit = (I, comma_under(i, I))
        _COMMA_CACHE[key] = hit
    return hit[1]


def _sections(P: FiberedCat, i, cap=SECTION_CAP):
    A, p, I = P.total, P.projection, P.base
    C, forget = _comma(i, I)
    over = {j: [x for x in A.objects if p.on_obj(x) == j] for j in I.objects}
    cobjs = list(C.objects)
    nonid = [m for m in C.morphisms if not C.is_identity(m)]
    # composition relations g ∘ h = gh of i/I, indexed by each participant
    relations = {m: [] for m in C.morphisms}
    for (g, h), gh in C._comp.items():
        for m in {g, h, gh}:
            relations[m].append((g, h, gh))
    found = []
    candidates = 0
    for choice in itertools.product(*(over[forget.on_obj(o)] for o in cobjs)):
        om = dict(zip(cobjs, choice))
        mm = {C.identity(o): A.identity(om[o]) for o in cobjs}

        def extend(k):
            nonlocal candidates
            if k == len(nonid):
                yield dict(mm)
                return
            f = nonid[k]
            for a in A.hom(om[C.src(f)], om[C.tgt(f)]):
                candidates += 1
                if candidates > cap:
                    raise CapExceeded(f"section search over {i!r}/I exceeds {cap} candidates")
                if p(a) != forget(f) or a not in P.cartesian:
                    continue
                mm[f] = a
                if all(A.compose(mm[g], mm[h]) == mm[gh]
                       for g, h, gh in relations[f] if g in mm and h in mm and gh in mm):
                    yield from extend(k + 1)
                del mm[f]

        for sec in extend(0):
            found.append(tuple(sec[m] for m in C.morphisms))
    # vertical natural transformations between sections
    mors, comp_rows = [], {}
    for s in found:
        for t in found:
            per_obj = []
            for o in cobjs:
                ido = C.identity(o)
                j = forget.on_obj(o)
                per_obj.append([a for a in A.hom(A.src(s[ido]), A.src(t[ido])) if p(a) == I.identity(j)])
            for comps in itertools.product(*per_obj):
                eta = dict(zip(cobjs, comps))
                if all(A.compose(t[f], eta[C.src(f)]) == A.compose(eta[C.tgt(f)], s[f]) for f in C.morphisms):
                    mors.append(((s, t, comps), s, t))
    index = {m[0]: k for k, m in enumerate(mors)}
    ids = {s: index[(s, s, tuple(A.identity(A.src(s[C.identity(o)])) for o in cobjs))] for s in found}
    by_src = {}
    for k, (name, s, t) in enumerate(mors):
        by_src.setdefault(s, []).append(k)
    compose = {}
    for k1, ((s, t, c1), _, _) in enumerate(mors):
        for k2 in by_src.get(t, []):
            (_, u, c2) = mors[k2][0]
            comps = tuple(A.compose(b, a) for a, b in zip(c1, c2))
            compose[(k2, k1)] = index[(s, u, comps)]
    Se = FinCat(found, mors, ids, compose)
    return Sections(i, C, forget, Se, candidates)


@dataclass
class RoundtripReport:
    ok: bool
    per_object: dict = field(default_factory=dict)  # i -> dict of verdicts
    fibered: list = field(default_factory=list)
    counit_equivalence: bool | None = None
    detail: str = ""


def evaluation_functor(P: FiberedCat, S: Sections) -> FinFunctor:
    """``ev_i``: a section goes to its value at ``id_i``, a transformation to its component there."""
    A, C = P.total, S.comma
    Fib = P.fiber(S.i)
    root = _root(C, P.base, S.i)
    idroot = C.identity(root)
    obj_map = {s: A.src(s[idroot]) for s in S.category.objects}
    pos = list(C.objects).index(root)
    mor_map = {k: Fib.mor(A.name(S.category.name(k)[2][pos])) for k in S.category.morphisms}
    return FinFunctor(S.category, Fib, obj_map, mor_map)


def _root(C: FinCat, I: FinCat, i):
    idi = I.identity(i)
    return idi if idi in set(C.objects) else C.objects[0]


def restriction(P: FiberedCat, Si: Sections, Sj: Sections, u) -> FinFunctor:
    """``u^*: Se(i) -> Se(j)`` for ``u: i -> j``, restricting along ``j/I -> i/I``, ``w ↦ w ∘ u``."""
    I = P.base
    Ci, Cj = Si.comma, Sj.comma
    posi = {m: k for k, m in enumerate(Ci.morphisms)}
    iobjs = list(Ci.objects)
    obj_pos = {o: k for k, o in enumerate(iobjs)}

    def restrict_section(s):
        out = []
        for m in Cj.morphisms:
            w, w2 = Cj.name(m)
            out.append(s[posi[Ci.mor((I.compose(w, u), w2))]])
        return tuple(out)

    obj_map = {s: restrict_section(s) for s in Si.category.objects}
    mor_map = {}
    for k in Si.category.morphisms:
        s, t, comps = Si.category.name(k)
        rc = tuple(comps[obj_pos[I.compose(w, u)]] for w in Cj.objects)
        rs, rt = obj_map[s], obj_map[t]
        mor_map[k] = Sj.category.mor((rs, rt, rc))
    return FinFunctor(Si.category, Sj.category, obj_map, mor_map)


def sections_diagram(P: FiberedCat, cap=SECTION_CAP):
    """``i ↦ Se^cart(i)`` as a strict diagram, together with the section data."""
    I = P.base
    secs = {i: _sections(P, i, cap) for i in I.objects}
    funcs = {u: restriction(P, secs[I.src(u)], secs[I.tgt(u)], u) for u in I.morphisms}
    return CatDiagram(I, {i: secs[i].category for i in I.objects}, funcs), secs


def counit_functor(P: FiberedCat, SeP: FiberedCat, secs) -> FinFunctor:
    """``h: ∫ Se^cart -> A``: ``(i, s) ↦ s(id_i)`` and
    ``(u, γ) ↦ γ_{id_j} ∘ s(id_i -> u)``."""
    A, I = P.total, P.base
    Tot = SeP.total
    obj_map = {}
    for (i, s) in Tot.objects:
        C = secs[i].comma
        obj_map[(i, s)] = A.src(s[list(C.morphisms).index(C.identity(I.identity(i)))])
    mor_map = {}
    for k in Tot.morphisms:
        u, gk = SeP.components[k]
        (i, s) = Tot.src(k)
        j = I.tgt(u)
        Ci, Cj = secs[i].comma, secs[j].comma
        _, _, comps = secs[j].category.name(gk)
        lift = s[list(Ci.morphisms).index(Ci.mor((I.identity(i), u)))]
        gam = comps[list(Cj.objects).index(I.identity(j))]
        mor_map[k] = A.compose(gam, lift)
    return FinFunctor(Tot, A, obj_map, mor_map)


def cartesian_sections_roundtrip(F: CatDiagram, cap=SECTION_CAP) -> RoundtripReport:
    """For each ``i``: evaluation ``Se^cart(i) -> π^{-1}(i)`` is an equivalence
    and ``π^{-1}(i) ≅ F(i)``.  Globally: ``∫F`` is fibered and the counit
    ``∫ Se^cart(∫F) -> ∫F`` is an equivalence."""
    P = integrate(F)
    fibered = is_fibered(P)
    per = {}
    try:
        SeD, secs = sections_diagram(P, cap)
    except CapExceeded as exc:
        return RoundtripReport(False, per, fibered, None, f"cap exceeded: {exc}")
    ok = not fibered
    for i in F.base.objects:
        ev = evaluation_functor(P, secs[i])
        functor_ok = not check_functor(ev)
        eq = is_equivalence(ev) if functor_ok else None
        rec = fiber_recovers(P, i)
        per[i] = {"sections": len(secs[i].category.objects),
                  "evaluation_equivalence": bool(eq),
                  "fiber_recovers": rec}
        ok = ok and bool(eq) and rec
    detail = ""
    counit_ok = None
    diag_report = check_diagram(SeD)
    if diag_report:
        ok = False
        detail = "; ".join(diag_report[:3])
    else:
        SeP = integrate(SeD, validate=False)
        h = counit_functor(P, SeP, secs)
        bad = check_functor(h)
        counit_ok = not bad and bool(is_equivalence(h))
        ok = ok and counit_ok
        if bad:
            detail = "; ".join(bad[:3])
    return RoundtripReport(ok, per, fibered, counit_ok, detail)


# small categories and diagrams, for exhaustive sweeps -------------------------------

def small_categories(max_objects=2, max_morphisms=4):
    """Every category with at most ``max_objects`` objects and
    ``max_morphisms`` morphisms, one per isomorphism class."""
    out = []
    seen = set()
    for nobj in range(1, max_objects + 1):
        objs = list(range(nobj))
        pairs = [(a, b) for a in objs for b in objs]
        for extra in range(0, max_morphisms - nobj + 1):
            for shape in itertools.combinations_with_replacement(pairs, extra):
                for C in _categories_with_shape(objs, list(shape)):
                    key = _canonical(C)
                    if key not in seen:
                        seen.add(key)
                        out.append(C)
    return out


def _categories_with_shape(objs, shape):
    mors = [(f"id{x}", x, x) for x in objs] + [(f"m{k}", s, t) for k, (s, t) in enumerate(shape)]
    n = len(mors)
    ids = {x: k for k, x in enumerate(objs)}
    src = [m[1] for m in mors]
    tgt = [m[2] for m in mors]
    hom = {}
    for k in range(n):
        hom.setdefault((src[k], tgt[k]), []).append(k)
    pairs = [(g, f) for g in range(len(objs), n) for f in range(len(objs), n) if tgt[f] == src[g]]
    options = [hom[(src[f], tgt[g])] for g, f in pairs]
    for vals in itertools.product(*options):
        comp = {}
        for k in range(n):
            comp[(ids[tgt[k]], k)] = k
            comp[(k, ids[src[k]])] = k
        comp.update(zip(pairs, vals))
        ok = True
        for (g, f), gf in zip(pairs, vals):
            for h in range(n):
                if src[h] == tgt[g] and comp[(h, comp[(g, f)])] != comp[(comp[(h, g)], f)]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield FinCat(objs, mors, ids, comp, validate=False)


def _canonical(C: FinCat):
    """Lexicographically least relabelled composition table."""
    objs = list(C.objects)
    best = None
    for operm in itertools.permutations(range(len(objs))):
        om = {objs[k]: operm[k] for k in range(len(objs))}
        nonid = [f for f in C.morphisms if not C.is_identity(f)]
        for mperm in itertools.permutations(range(len(nonid))):
            label = {C.identity(x): ("i", om[x]) for x in objs}
            label.update({f: ("m", mperm[k]) for k, f in enumerate(nonid)})
            table = tuple(sorted((label[f], om[C.src(f)], om[C.tgt(f)]) for f in C.morphisms))
            comp = tuple(sorted((label[g], label[f], label[C.compose(g, f)])
                                for g, f in C.composable_pairs()))
            key = (len(objs), table, comp)
            if best is None or key < best:
                best = key
    return best


def delta1_diagrams(max_objects=2, max_morphisms=4):
    """Every strict diagram ``Δ^1 -> Cat`` with small fibers (fibers up to
    isomorphism, functors between them exhaustively)."""
    from .fincat import all_functors
    I = FinCat.poset(1)
    cats = small_categories(max_objects, max_morphisms)
    arrow = I.mor("01")
    for C0 in cats:
        for C1 in cats:
            for Fu in all_functors(C0, C1):
                yield CatDiagram.build(I, {0: C0, 1: C1}, {arrow: Fu})
