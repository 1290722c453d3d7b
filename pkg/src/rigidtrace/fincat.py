"""Finite categories, functors, natural transformations, truncated nerves.

Morphisms carry dense integer ids.  A :class:`FinCat` is immutable once
built; :meth:`FinCat.build` refuses anything that fails
:func:`check_category`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable


class CategoryError(ValueError):
    def __init__(self, report):
        self.report = list(report)
        super().__init__("; ".join(self.report) if self.report else "invalid category")


class FinCat:
    """A finite category given by an explicit composition table."""

    def __init__(self, objects, morphisms, identities, compose, *, validate=True):
        self.objects = tuple(objects)
        self._obj_index = {x: k for k, x in enumerate(self.objects)}
        names, srcs, tgts = [], [], []
        for name, s, t in morphisms:
            names.append(name)
            srcs.append(s)
            tgts.append(t)
        self.names = tuple(names)
        self._src = tuple(srcs)
        self._tgt = tuple(tgts)
        self._id_of_name = {n: k for k, n in enumerate(self.names)}
        self._identity = dict(identities)
        self._comp = dict(compose)
        self._hom = {}
        self._from = {}
        self._to = {}
        for k in range(len(self.names)):
            self._hom.setdefault((self._src[k], self._tgt[k]), []).append(k)
            self._from.setdefault(self._src[k], []).append(k)
            self._to.setdefault(self._tgt[k], []).append(k)
        if validate:
            report = check_category(self)
            if report:
                raise CategoryError(report)

    # construction -------------------------------------------------------

    @classmethod
    def build(cls, objects, morphisms, identities, compose, *, fill_identities=True, validate=True):
        """Build from named morphisms.

        ``morphisms`` is a list of ``(name, src, tgt)``; ``identities`` maps
        object -> morphism name; ``compose`` is a list of ``(g, f, g∘f)``
        names.  Composites with an identity are filled in when missing.
        """
        morphisms = list(morphisms)
        idx = {}
        for k, (name, _, _) in enumerate(morphisms):
            if name in idx:
                raise CategoryError([f"duplicate morphism name {name!r}"])
            idx[name] = k
        report = []
        ids = {}
        for x, name in identities.items():
            if name not in idx:
                report.append(f"identity of {x!r} names unknown morphism {name!r}")
            else:
                ids[x] = idx[name]
        comp = {}
        for entry in compose:
            g, f, gf = entry
            missing = [n for n in (g, f, gf) if n not in idx]
            if missing:
                report.append(f"composition entry {list(entry)!r} names unknown morphism(s) {missing!r}")
                continue
            comp[(idx[g], idx[f])] = idx[gf]
        if report:
            raise CategoryError(report)
        if fill_identities:
            for k, (_, s, t) in enumerate(morphisms):
                if t in ids:
                    comp.setdefault((ids[t], k), k)
                if s in ids:
                    comp.setdefault((k, ids[s]), k)
        return cls(objects, morphisms, ids, comp, validate=validate)

    @classmethod
    def terminal(cls):
        return cls.build(["*"], [("id*", "*", "*")], {"*": "id*"}, [])

    @classmethod
    def discrete(cls, objects):
        objects = list(objects)
        return cls.build(objects, [(f"id{x}", x, x) for x in objects], {x: f"id{x}" for x in objects}, [])

    @classmethod
    def poset(cls, n):
        """The ordinal ``Δ^n``: objects 0..n, one arrow i->j for i <= j."""
        objs = list(range(n + 1))
        mors = [(f"{i}{j}", i, j) for i in objs for j in objs if i <= j]
        comp = [(f"{j}{k}", f"{i}{j}", f"{i}{k}") for i in objs for j in objs for k in objs if i <= j <= k]
        return cls.build(objs, mors, {i: f"{i}{i}" for i in objs}, comp)

    @classmethod
    def from_monoid(cls, elements, op, unit, obj="*"):
        """One-object category of a finite monoid; ``op[a][b]`` is ``a∘b``."""
        elements = list(elements)
        mors = [(e, obj, obj) for e in elements]
        comp = [(a, b, op[a][b]) for a in elements for b in elements]
        return cls.build([obj], mors, {obj: unit}, comp)

    @classmethod
    def contractible_groupoid(cls, objects):
        """Exactly one morphism between any two objects."""
        objects = list(objects)
        mors = [(f"{a}>{b}", a, b) for a in objects for b in objects]
        comp = [(f"{b}>{c}", f"{a}>{b}", f"{a}>{c}") for a in objects for b in objects for c in objects]
        return cls.build(objects, mors, {a: f"{a}>{a}" for a in objects}, comp)

    @classmethod
    def group_action_groupoid(cls, objects, group_elements, mult, unit):
        """Groupoid whose hom-set between any two objects is a copy of a group.

        The morphism ``(a, g, b)`` composes by group multiplication; with a
        group of order ``k`` every hom-set has ``k`` elements.
        """
        objects = list(objects)
        gs = list(group_elements)
        mors = [((a, g, b), a, b) for a in objects for b in objects for g in gs]
        comp = [((b, h, c), (a, g, b), (a, mult[h][g], c))
                for a in objects for b in objects for c in objects for g in gs for h in gs]
        return cls.build(objects, mors, {a: (a, unit, a) for a in objects}, comp)

    # access -------------------------------------------------------------

    @property
    def morphisms(self):
        return range(len(self.names))

    def __len__(self):
        return len(self.names)

    def src(self, f: int):
        return self._src[f]

    def tgt(self, f: int):
        return self._tgt[f]

    def identity(self, x) -> int:
        return self._identity[x]

    def compose(self, g: int, f: int) -> int:
        """``g ∘ f``."""
        try:
            return self._comp[(g, f)]
        except KeyError:
            raise CategoryError([f"{self.names[g]!r} ∘ {self.names[f]!r} is not defined"]) from None

    def hom(self, x, y):
        return self._hom.get((x, y), [])

    def mor(self, name) -> int:
        return self._id_of_name[name]

    def name(self, f: int):
        return self.names[f]

    def is_identity(self, f: int) -> bool:
        return self._identity.get(self._src[f]) == f

    def inverse(self, f: int):
        """The inverse of ``f`` or ``None``."""
        s, t = self._src[f], self._tgt[f]
        for g in self.hom(t, s):
            if self._comp.get((g, f)) == self._identity[s] and self._comp.get((f, g)) == self._identity[t]:
                return g
        return None

    def is_iso(self, f: int) -> bool:
        return self.inverse(f) is not None

    def iso_classes(self):
        """Map object -> representative, via union-find on invertible arrows."""
        parent = {x: x for x in self.objects}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for f in self.morphisms:
            s, t = self._src[f], self._tgt[f]
            if s != t and self.is_iso(f):
                rs, rt = find(s), find(t)
                if rs != rt:
                    # keep the earliest object as representative
                    if self._obj_index[rs] < self._obj_index[rt]:
                        parent[rt] = rs
                    else:
                        parent[rs] = rt
        return {x: find(x) for x in self.objects}

    def find_iso(self, x, y):
        for f in self.hom(x, y):
            if self.is_iso(f):
                return f
        return None

    def opposite(self) -> "FinCat":
        mors = [(n, t, s) for n, s, t in zip(self.names, self._src, self._tgt)]
        comp = {(f, g): gf for (g, f), gf in self._comp.items()}
        return FinCat(self.objects, mors, self._identity, comp, validate=False)

    def full_subcategory(self, objects) -> "FinCat":
        keep = set(objects)
        kept = [f for f in self.morphisms if self._src[f] in keep and self._tgt[f] in keep]
        return FinCat.build(
            [x for x in self.objects if x in keep],
            [(self.names[f], self._src[f], self._tgt[f]) for f in kept],
            {x: self.names[self._identity[x]] for x in self.objects if x in keep},
            [(self.names[g], self.names[f], self.names[self.compose(g, f)])
             for f in kept for g in kept if self._tgt[f] == self._src[g]],
            fill_identities=False,
        )

    def composable_pairs(self):
        for f in self.morphisms:
            for g in self.hom_from(self._tgt[f]):
                yield g, f

    def hom_from(self, x):
        return self._from.get(x, [])

    def hom_to(self, y):
        return self._to.get(y, [])

    # serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "objects": list(self.objects),
            "morphisms": [{"id": n, "src": s, "tgt": t} for n, s, t in zip(self.names, self._src, self._tgt)],
            "identities": {str(x): self.names[f] for x, f in self._identity.items()},
            "compose": [[self.names[g], self.names[f], self.names[gf]]
                        for (g, f), gf in sorted(self._comp.items())],
        }

    @classmethod
    def from_json(cls, data, *, validate=True) -> "FinCat":
        objects = list(data["objects"])
        by_str = {str(x): x for x in objects}
        mors = [(_hashable(m["id"]), _hashable(m["src"]), _hashable(m["tgt"])) for m in data["morphisms"]]
        ids = {}
        for k, v in data.get("identities", {}).items():
            ids[by_str.get(k, k)] = _hashable(v)
        comp = [tuple(_hashable(x) for x in e) for e in data.get("compose", [])]
        return cls.build([_hashable(x) for x in objects], mors, ids, comp, validate=validate)

    def __repr__(self):
        return f"FinCat({len(self.objects)} objects, {len(self.names)} morphisms)"

    def __eq__(self, other):
        return (isinstance(other, FinCat) and self.objects == other.objects and self.names == other.names
                and self._src == other._src and self._tgt == other._tgt
                and self._identity == other._identity and self._comp == other._comp)

    def __hash__(self):
        return hash((self.objects, self.names))


def _hashable(x):
    if isinstance(x, list):
        return tuple(_hashable(y) for y in x)
    return x


def check_category(C: FinCat) -> list[str]:
    """Every violated axiom, each naming the offending morphisms.  Never raises."""
    report = []
    nm = C.names
    objs = set(C.objects)
    for f in C.morphisms:
        for end, x in (("source", C._src[f]), ("target", C._tgt[f])):
            if x not in objs:
                report.append(f"morphism {nm[f]!r} has unknown {end} {x!r}")
    for x in C.objects:
        if x not in C._identity:
            report.append(f"object {x!r} has no identity")
            continue
        i = C._identity[x]
        if not (0 <= i < len(nm)) or C._src[i] != x or C._tgt[i] != x:
            report.append(f"identity of {x!r} is not an endomorphism of {x!r}")
    for (g, f), gf in C._comp.items():
        if not all(0 <= k < len(nm) for k in (g, f, gf)):
            report.append(f"composition entry {(g, f, gf)!r} out of range")
            continue
        if C._tgt[f] != C._src[g]:
            report.append(f"composition entry ({nm[g]!r}, {nm[f]!r}) is not composable")
        if C._src[gf] != C._src[f] or C._tgt[gf] != C._tgt[g]:
            report.append(f"composition entry ({nm[g]!r}, {nm[f]!r}) -> {nm[gf]!r} has mismatched source/target")
    if report:
        return report
    for f in C.morphisms:
        for g in C.hom_from(C._tgt[f]):
            if (g, f) not in C._comp:
                report.append(f"missing composite {nm[g]!r} ∘ {nm[f]!r}")
    if report:
        return report
    for f in C.morphisms:
        s, t = C._src[f], C._tgt[f]
        if C._comp[(C._identity[t], f)] != f:
            report.append(f"left identity law fails for {nm[f]!r}")
        if C._comp[(f, C._identity[s])] != f:
            report.append(f"right identity law fails for {nm[f]!r}")
    by_src = C._from
    for f in C.morphisms:
        for g in by_src.get(C._tgt[f], []):
            gf = C._comp[(g, f)]
            for h in by_src.get(C._tgt[g], []):
                if C._comp[(C._comp[(h, g)], f)] != C._comp[(h, gf)]:
                    report.append(f"associativity fails for ({nm[h]!r}, {nm[g]!r}, {nm[f]!r})")
    return report


# functors and natural transformations -----------------------------------

@dataclass(frozen=True)
class FinFunctor:
    source: FinCat
    target: FinCat
    obj_map: dict
    mor_map: dict

    def __call__(self, f: int) -> int:
        return self.mor_map[f]

    def on_obj(self, x):
        return self.obj_map[x]

    def then(self, other: "FinFunctor") -> "FinFunctor":
        return FinFunctor(self.source, other.target,
                          {x: other.obj_map[y] for x, y in self.obj_map.items()},
                          {f: other.mor_map[g] for f, g in self.mor_map.items()})

    @classmethod
    def identity(cls, C: FinCat) -> "FinFunctor":
        return cls(C, C, {x: x for x in C.objects}, {f: f for f in C.morphisms})

    def to_json(self):
        return {"objects": [[x, self.obj_map[x]] for x in self.source.objects],
                "morphisms": [[self.source.names[f], self.target.names[self.mor_map[f]]] for f in self.source.morphisms]}

    @classmethod
    def from_json(cls, source, target, data):
        obj_map = {_hashable(a): _hashable(b) for a, b in data["objects"]}
        mor_map = {source.mor(_hashable(a)): target.mor(_hashable(b)) for a, b in data["morphisms"]}
        return cls(source, target, obj_map, mor_map)


def check_functor(F: FinFunctor) -> list[str]:
    S, T = F.source, F.target
    report = []
    for x in S.objects:
        if x not in F.obj_map or F.obj_map[x] not in set(T.objects):
            report.append(f"object {x!r} not mapped to an object of the target")
    for f in S.morphisms:
        if f not in F.mor_map:
            report.append(f"morphism {S.names[f]!r} not mapped")
    if report:
        return report
    for f in S.morphisms:
        g = F.mor_map[f]
        if T.src(g) != F.obj_map[S.src(f)] or T.tgt(g) != F.obj_map[S.tgt(f)]:
            report.append(f"morphism {S.names[f]!r} maps to {T.names[g]!r} with wrong source/target")
    if report:
        return report
    for x in S.objects:
        if F.mor_map[S.identity(x)] != T.identity(F.obj_map[x]):
            report.append(f"identity of {x!r} not preserved")
    mm, tcomp = F.mor_map, T._comp
    for (g, f), gf in S._comp.items():
        if mm[gf] != tcomp.get((mm[g], mm[f])):
            report.append(f"composition {S.names[g]!r} ∘ {S.names[f]!r} not preserved")
    return report


@dataclass(frozen=True)
class NatTransf:
    source: FinFunctor
    target: FinFunctor
    components: dict

    def is_iso(self) -> bool:
        C = self.source.target
        return all(C.is_iso(c) for c in self.components.values())


def check_nat_transf(eta: NatTransf) -> list[str]:
    F, G = eta.source, eta.target
    C, D = F.source, F.target
    report = []
    for x in C.objects:
        c = eta.components.get(x)
        if c is None or D.src(c) != F.obj_map[x] or D.tgt(c) != G.obj_map[x]:
            report.append(f"component at {x!r} missing or mistyped")
    if report:
        return report
    for f in C.morphisms:
        s, t = C.src(f), C.tgt(f)
        if D.compose(eta.components[t], F(f)) != D.compose(G(f), eta.components[s]):
            report.append(f"naturality square fails at {C.names[f]!r}")
    return report


# comma categories --------------------------------------------------------

def comma_under(i, I: FinCat):
    """The under category ``i/I`` and its forgetful functor to ``I``.

    Objects are the morphism ids ``u: i -> j`` of ``I``; a morphism
    ``u -> u'`` is ``(u, w)`` with ``w ∘ u = u'``.
    """
    if i not in set(I.objects):
        raise CategoryError([f"unknown object {i!r}"])
    objs = [u for u in I.morphisms if I.src(u) == i]
    mors = []
    for u in objs:
        for w in I.hom_from(I.tgt(u)):
            mors.append(((u, w), u, I.compose(w, u)))
    ids = {u: (u, I.identity(I.tgt(u))) for u in objs}
    comp = []
    for (u, w), _, v in mors:
        for w2 in I.hom_from(I.tgt(v)):
            comp.append(((v, w2), (u, w), (u, I.compose(w2, w))))
    C = FinCat.build(objs, mors, ids, comp, fill_identities=False)
    forget = FinFunctor(C, I, {u: I.tgt(u) for u in objs},
                        {C.mor(name): name[1] for name in C.names})
    return C, forget


def initial_objects(C: FinCat):
    return [x for x in C.objects if all(len(C.hom(x, y)) == 1 for y in C.objects)]


def terminal_objects(C: FinCat):
    return [x for x in C.objects if all(len(C.hom(y, x)) == 1 for y in C.objects)]


# truncated nerves --------------------------------------------------------

@dataclass
class TruncatedSSet:
    """Simplicial set known up to dimension ``N``.

    ``faces[n][(i, s)]`` is ``d_i(s)`` for ``s`` of dimension ``n``;
    ``degens[n][(i, s)]`` is ``s_i(s)`` for ``s`` of dimension ``n < N``.
    """

    N: int
    simplices: list
    faces: list = field(default_factory=list)
    degens: list = field(default_factory=list)

    def counts(self):
        return [len(s) for s in self.simplices]

    def d(self, n, i, s):
        return self.faces[n][(i, s)]

    def s(self, n, i, x):
        return self.degens[n][(i, x)]


def nerve_truncated(C: FinCat, N: int) -> TruncatedSSet:
    """Nerve up to dimension ``N``: n-simplices are composable chains
    ``(f1, ..., fn)`` (identities included), 0-simplices are objects."""
    if N < 0:
        raise ValueError("N must be >= 0")
    simplices = [list(C.objects)]
    for n in range(1, N + 1):
        if n == 1:
            simplices.append([(f,) for f in C.morphisms])
        else:
            simplices.append([ch + (g,) for ch in simplices[-1] for g in C.hom_from(C.tgt(ch[-1]))])

    def vertex(n, s, k):
        if n == 0:
            return s
        return C.src(s[0]) if k == 0 else C.tgt(s[k - 1])

    faces = [dict()]
    for n in range(1, N + 1):
        table = {}
        for s in simplices[n]:
            for i in range(n + 1):
                if n == 1:
                    table[(i, s)] = C.tgt(s[0]) if i == 0 else C.src(s[0])
                elif i == 0:
                    table[(i, s)] = s[1:]
                elif i == n:
                    table[(i, s)] = s[:-1]
                else:
                    table[(i, s)] = s[:i - 1] + (C.compose(s[i], s[i - 1]),) + s[i + 1:]
        faces.append(table)
    degens = []
    for n in range(N):
        table = {}
        for s in simplices[n]:
            for i in range(n + 1):
                ident = (C.identity(vertex(n, s, i)),)
                table[(i, s)] = ident if n == 0 else s[:i] + ident + s[i:]
        degens.append(table)
    return TruncatedSSet(N, simplices, faces, degens)


def check_simplicial_identities(X: TruncatedSSet) -> list[str]:
    report = []
    N = X.N
    for n in range(2, N + 1):
        for s in X.simplices[n]:
            for j in range(n + 1):
                for i in range(j):
                    if X.d(n - 1, i, X.d(n, j, s)) != X.d(n - 1, j - 1, X.d(n, i, s)):
                        report.append(f"d{i} d{j} != d{j - 1} d{i} on {s!r}")
    for n in range(N):
        for x in X.simplices[n]:
            for j in range(n + 1):
                y = X.s(n, j, x)
                for i in range(n + 2):
                    lhs = X.d(n + 1, i, y)
                    if i < j:
                        rhs = X.s(n - 1, j - 1, X.d(n, i, x))
                    elif i in (j, j + 1):
                        rhs = x
                    else:
                        rhs = X.s(n - 1, j, X.d(n, i - 1, x))
                    if lhs != rhs:
                        report.append(f"d{i} s{j} identity fails on {x!r}")
                if n + 1 < N:
                    for i in range(j + 1):
                        if X.s(n + 1, i, y) != X.s(n + 1, j + 1, X.s(n, i, x)):
                            report.append(f"s{i} s{j} != s{j + 1} s{i} on {x!r}")
    return report


# equivalences ------------------------------------------------------------

@dataclass
class EquivalenceResult:
    ok: bool
    witness: dict | None = None
    counterexample: str | None = None

    def __bool__(self):
        return self.ok


def is_equivalence(F: FinFunctor) -> EquivalenceResult:
    """Fully faithful and essentially surjective.

    On success the witness maps every target object ``b`` to a pair
    ``(a, iso)`` with ``iso: F(a) -> b``.
    """
    S, T = F.source, F.target
    for x in S.objects:
        for y in S.objects:
            image = [F(f) for f in S.hom(x, y)]
            fx, fy = F.on_obj(x), F.on_obj(y)
            if len(set(image)) != len(image):
                return EquivalenceResult(False, counterexample=f"not faithful on Hom({x!r}, {y!r})")
            if len(image) != len(T.hom(fx, fy)):
                return EquivalenceResult(False, counterexample=f"not full on Hom({x!r}, {y!r})")
    witness = {}
    for b in T.objects:
        found = None
        for a in S.objects:
            iso = T.find_iso(F.on_obj(a), b)
            if iso is not None:
                found = (a, iso)
                break
        if found is None:
            return EquivalenceResult(False, counterexample=f"object {b!r} not in the essential image")
        witness[b] = found
    return EquivalenceResult(True, witness=witness)


def all_functors(S: FinCat, T: FinCat, limit=None):
    """Enumerate every functor ``S -> T`` by backtracking over morphisms."""
    order = sorted(S.morphisms, key=lambda f: (S.is_identity(f), f), reverse=True)
    objs = list(S.objects)
    count = 0
    for images in itertools.product(T.objects, repeat=len(objs)):
        om = dict(zip(objs, images))
        mm = {S.identity(x): T.identity(om[x]) for x in objs}
        rest = [f for f in order if f not in mm]

        def extend(k):
            if k == len(rest):
                yield dict(mm)
                return
            f = rest[k]
            for g in T.hom(om[S.src(f)], om[S.tgt(f)]):
                mm[f] = g
                ok = True
                for f2, g2 in list(mm.items()):
                    if S.tgt(f2) == S.src(f) and (f, f2) in S._comp:
                        c = S._comp[(f, f2)]
                        if c in mm and mm[c] != T.compose(g, g2):
                            ok = False
                            break
                    if S.tgt(f) == S.src(f2) and (f2, f) in S._comp:
                        c = S._comp[(f2, f)]
                        if c in mm and mm[c] != T.compose(g2, g):
                            ok = False
                            break
                if ok:
                    yield from extend(k + 1)
                del mm[f]

        for m in extend(0):
            F = FinFunctor(S, T, om, m)
            if not check_functor(F):
                yield F
                count += 1
                if limit is not None and count >= limit:
                    return
