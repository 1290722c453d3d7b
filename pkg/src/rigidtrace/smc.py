"""Strict symmetric monoidal categories, duals, traces and Γ-reconstruction.

A :class:`StrictSMC` is strictly associative and unital; the symmetry is
explicit data.  Hom-sets may be infinite (matrices over Q, bordisms): those
raise :class:`CapExceeded` when enumerated, and anything that needs them
(exhaustive dual search) reports the cap rather than a refutation.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import gamma
from .fincat import FinCat
from .gamma import GammaCategory, GammaMap, fold_map, segal_map
from .linalg import Field, Matrix, PrimeField, field_from_spec

DEFAULT_CAP = 10 ** 6


class CapExceeded(RuntimeError):
    pass


class SMCError(ValueError):
    pass


def search_cap() -> int:
    return int(os.environ.get("RIGIDTRACE_CAP", DEFAULT_CAP))


class StrictSMC:
    """Interface shared by every strict SMC in the package.

    ``objects`` is the enumerable part of the object set (possibly a
    truncation); all operations accept objects outside it.
    """

    name = "smc"
    unit = None
    objects: list = []

    def hom(self, x, y):
        raise NotImplementedError

    def hom_size(self, x, y):
        """Number of morphisms, or ``None`` when infinite."""
        return len(list(self.hom(x, y)))

    def compose(self, g, f):
        raise NotImplementedError

    def identity(self, x):
        raise NotImplementedError

    def src(self, f):
        raise NotImplementedError

    def tgt(self, f):
        raise NotImplementedError

    def tensor_obj(self, x, y):
        raise NotImplementedError

    def tensor(self, f, g):
        raise NotImplementedError

    def symmetry(self, x, y):
        raise NotImplementedError

    def dual_hint(self, x):
        """A candidate duality datum for ``x``; verified before use."""
        return None

    def inverse(self, f):
        s, t = self.src(f), self.tgt(f)
        for g in self.hom(t, s):
            if self.compose(g, f) == self.identity(s) and self.compose(f, g) == self.identity(t):
                return g
        return None

    def find_iso(self, x, y):
        if x == y:
            return self.identity(x)
        for f in self.hom(x, y):
            if self.inverse(f) is not None:
                return f
        return None

    def tensor_objs(self, objs):
        acc = self.unit
        for x in objs:
            acc = self.tensor_obj(acc, x)
        return acc

    def tensor_mors(self, mors):
        acc = self.identity(self.unit)
        for f in mors:
            acc = self.tensor(acc, f)
        return acc

    def compose_all(self, *fs):
        """``fs[0] ∘ fs[1] ∘ ...``."""
        acc = fs[-1]
        for g in reversed(fs[:-1]):
            acc = self.compose(g, acc)
        return acc

    def fmt_mor(self, f):
        return repr(f)


# concrete instances -----------------------------------------------------------

class MatrixCategory(StrictSMC):
    """Objects are dimensions ``0..maxdim`` (all naturals accepted), morphisms
    ``n -> m`` are ``m x n`` matrices, ``⊗`` is the Kronecker product."""

    def __init__(self, fld, maxdim=2):
        self.field: Field = field_from_spec(fld)
        self.maxdim = maxdim
        self.objects = list(range(maxdim + 1))
        self.unit = 1
        self.name = f"Mat({self.field.name}, <= {maxdim})"

    @property
    def finite(self):
        return isinstance(self.field, PrimeField)

    def hom_size(self, x, y):
        if not self.finite:
            return None if x * y else 1
        return self.field.p ** (x * y)

    def hom(self, x, y):
        if x * y == 0:
            return [Matrix.zeros(self.field, y, x)]
        if not self.finite:
            raise CapExceeded(f"Hom({x}, {y}) over {self.field.name} is infinite")
        els = self.field.elements()
        return [Matrix(self.field, y, x, tuple(tuple(vals[r * x:(r + 1) * x]) for r in range(y)))
                for vals in itertools.product(els, repeat=x * y)]

    def compose(self, g, f):
        return g @ f

    def identity(self, x):
        return _identity_matrix(self.field, x)

    def src(self, f):
        return f.cols

    def tgt(self, f):
        return f.rows

    def tensor_obj(self, x, y):
        return x * y

    def tensor(self, f, g):
        return f.kron(g)

    def symmetry(self, x, y):
        perm = [j * x + i for i in range(x) for j in range(y)]
        return Matrix.permutation(self.field, perm)

    def inverse(self, f):
        if f.rows != f.cols or not f.is_invertible():
            return None
        return f.inverse()

    def find_iso(self, x, y):
        return self.identity(x) if x == y else None

    def dual_hint(self, x):
        F = self.field
        t = Matrix(F, 1, x * x, (tuple(F.one if i == j else F.zero for i in range(x) for j in range(x)),))
        return DualityDatum(x, x, t, t.transpose())

    def fmt_mor(self, f):
        return f.to_lists()

    def duality_pairs_fast(self, x, y):
        """All ``(t, u)`` satisfying both triangles, by evaluating the two
        zigzag composites for every pair at once in integer arithmetic mod p."""
        p = self.field.p
        T = _all_matrices_np(p, 1, x * y)
        U = _all_matrices_np(p, y * x, 1)
        Ix, Iy = np.eye(x, dtype=np.int64), np.eye(y, dtype=np.int64)
        tx = np.stack([np.kron(t, Ix) for t in T]) if len(T) else np.zeros((0, x, x * y * x), np.int64)
        xu = np.stack([np.kron(Ix, u) for u in U]) if len(U) else np.zeros((0, x * y * x, x), np.int64)
        yt = np.stack([np.kron(Iy, t) for t in T])
        uy = np.stack([np.kron(u, Iy) for u in U])
        tri_x = np.einsum("aij,bjk->abik", tx, xu) % p
        tri_y = np.einsum("aij,bjk->abik", yt, uy) % p
        ok = (tri_x == Ix).all(axis=(2, 3)) & (tri_y == Iy).all(axis=(2, 3))
        F = self.field
        out = []
        for a, b in zip(*np.nonzero(ok)):
            t = Matrix.from_rows(F, T[a].tolist(), x * y)
            u = Matrix.from_rows(F, U[b].tolist(), 1)
            out.append(DualityDatum(x, y, t, u))
        return out, len(T) * len(U)


@lru_cache(maxsize=None)
def _identity_matrix(F, n):
    return Matrix.identity(F, n)


def _all_matrices_np(p, rows, cols):
    n = rows * cols
    if n == 0:
        return np.zeros((1, rows, cols), dtype=np.int64)
    vals = np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64)
    return vals.reshape(-1, rows, cols)


def matrix_category(spec, maxdim=None) -> MatrixCategory:
    """From ``{"field": "Q"|"Fp", "p": .., "maxdim": ..}`` or a field spec."""
    if isinstance(spec, dict):
        return MatrixCategory(spec, spec.get("maxdim", 2) if maxdim is None else maxdim)
    return MatrixCategory(spec, 2 if maxdim is None else maxdim)


class DiscreteMonoidSMC(StrictSMC):
    """A commutative monoid as a discrete strict SMC (``⊗`` = the operation)."""

    def __init__(self, E: gamma.FinCMonoid):
        self.E = E
        self.objects = list(E.elements)
        self.unit = E.unit
        self.name = f"Disc({len(E.elements)})"

    def hom(self, x, y):
        return [("id", x)] if x == y else []

    def hom_size(self, x, y):
        return 1 if x == y else 0

    def compose(self, g, f):
        if g != f:
            raise SMCError("non-composable")
        return f

    def identity(self, x):
        return ("id", x)

    def src(self, f):
        return f[1]

    tgt = src

    def tensor_obj(self, x, y):
        return self.E.mul(x, y)

    def tensor(self, f, g):
        return ("id", self.E.mul(f[1], g[1]))

    def symmetry(self, x, y):
        return ("id", self.E.mul(x, y))

    def inverse(self, f):
        return f

    def dual_hint(self, x):
        for y in self.E.elements:
            if self.E.mul(x, y) == self.E.unit:
                return DualityDatum(x, y, ("id", self.E.unit), ("id", self.E.unit))
        return None


class FreeSymmetricSMC(StrictSMC):
    """Free strict SMC on one object: objects ``n``, ``Hom(n, n) = S_n``.

    A permutation is the tuple of images; ``σ_{m,n}`` is the block swap.
    """

    def __init__(self, maxn=3):
        self.objects = list(range(maxn + 1))
        self.unit = 0
        self.name = f"FreeSym(<= {maxn})"

    def hom(self, x, y):
        return [tuple(p) for p in itertools.permutations(range(x))] if x == y else []

    def hom_size(self, x, y):
        if x != y:
            return 0
        out = 1
        for k in range(2, x + 1):
            out *= k
        return out

    def compose(self, g, f):
        return tuple(g[i] for i in f)

    def identity(self, x):
        return tuple(range(x))

    def src(self, f):
        return len(f)

    tgt = src

    def tensor_obj(self, x, y):
        return x + y

    def tensor(self, f, g):
        n = len(f)
        return tuple(f) + tuple(n + i for i in g)

    def symmetry(self, x, y):
        return tuple([i + y for i in range(x)] + [i for i in range(y)])

    def inverse(self, f):
        inv = [0] * len(f)
        for i, v in enumerate(f):
            inv[v] = i
        return tuple(inv)


class FinSMC(StrictSMC):
    """A strict SMC on an explicit :class:`FinCat` with finite tensor tables.

    Morphisms are the integer ids of the underlying category.
    """

    def __init__(self, category: FinCat, unit, tensor_obj: dict, tensor_mor: dict, symmetry: dict, name="FinSMC"):
        self.C = category
        self.objects = list(category.objects)
        self.unit = unit
        self._tobj = dict(tensor_obj)
        self._tmor = dict(tensor_mor)
        self._sym = dict(symmetry)
        self.name = name

    def hom(self, x, y):
        return self.C.hom(x, y)

    def hom_size(self, x, y):
        return len(self.C.hom(x, y))

    def compose(self, g, f):
        return self.C.compose(g, f)

    def identity(self, x):
        return self.C.identity(x)

    def src(self, f):
        return self.C.src(f)

    def tgt(self, f):
        return self.C.tgt(f)

    def tensor_obj(self, x, y):
        try:
            return self._tobj[(x, y)]
        except KeyError:
            raise SMCError(f"tensor of objects {x!r}, {y!r} undefined") from None

    def tensor(self, f, g):
        try:
            return self._tmor[(f, g)]
        except KeyError:
            raise SMCError(f"tensor of {self.C.name(f)!r}, {self.C.name(g)!r} undefined") from None

    def symmetry(self, x, y):
        return self._sym[(x, y)]

    def inverse(self, f):
        return self.C.inverse(f)

    def fmt_mor(self, f):
        return self.C.name(f)

    def to_json(self):
        n = self.C.name
        return {
            "category": self.C.to_json(),
            "unit": self.unit,
            "tensor_obj": [[x, y, z] for (x, y), z in self._tobj.items()],
            "tensor_mor": [[n(f), n(g), n(h)] for (f, g), h in self._tmor.items()],
            "symmetry": [[x, y, n(s)] for (x, y), s in self._sym.items()],
        }

    @classmethod
    def from_json(cls, data, name="FinSMC"):
        C = FinCat.from_json(data["category"])
        m = C.mor
        return cls(C, data["unit"],
                   {(x, y): z for x, y, z in data["tensor_obj"]},
                   {(m(f), m(g)): m(h) for f, g, h in data["tensor_mor"]},
                   {(x, y): m(s) for x, y, s in data["symmetry"]}, name=name)


def idempotent_object_smc() -> FinSMC:
    """Objects ``1`` and ``x`` with ``x ⊗ x = x``; ``End(x) = {id, e}`` with
    ``e`` idempotent and no maps between ``1`` and ``x``.  ``x`` is not rigid."""
    C = FinCat.build(["1", "x"], [("id1", "1", "1"), ("idx", "x", "x"), ("e", "x", "x")],
                     {"1": "id1", "x": "idx"}, [("e", "e", "e")])
    m = C.mor
    tobj = {("1", "1"): "1", ("1", "x"): "x", ("x", "1"): "x", ("x", "x"): "x"}
    tmor = {}
    for f in C.morphisms:
        tmor[(m("id1"), f)] = f
        tmor[(f, m("id1"))] = f
    for f in (m("idx"), m("e")):
        for g in (m("idx"), m("e")):
            tmor[(f, g)] = m("e") if m("e") in (f, g) else m("idx")
    sym = {(a, b): C.identity(tobj[(a, b)]) for a in ("1", "x") for b in ("1", "x")}
    return FinSMC(C, "1", tobj, tmor, sym, name="IdemObj")


# validation -------------------------------------------------------------------

def _all_morphisms(A, objects):
    out = []
    for x in objects:
        for y in objects:
            out.extend(A.hom(x, y))
    return out


def validate_smc(A: StrictSMC, objects=None) -> list[str]:
    """Exhaustive check of the strict SMC axioms over ``objects``."""
    objs = list(A.objects if objects is None else objects)
    report = []
    I = A.unit
    mors = _all_morphisms(A, objs)
    for x in objs:
        if A.tensor_obj(I, x) != x or A.tensor_obj(x, I) != x:
            report.append(f"unit law fails on object {x!r}")
    for f in mors:
        if A.tensor(A.identity(I), f) != f or A.tensor(f, A.identity(I)) != f:
            report.append(f"unit law fails on morphism {A.fmt_mor(f)!r}")
    for x in objs:
        for y in objs:
            if A.tensor(A.identity(x), A.identity(y)) != A.identity(A.tensor_obj(x, y)):
                report.append(f"id_{x!r} ⊗ id_{y!r} is not an identity")
            for z in objs:
                if A.tensor_obj(A.tensor_obj(x, y), z) != A.tensor_obj(x, A.tensor_obj(y, z)):
                    report.append(f"tensor not strictly associative on ({x!r}, {y!r}, {z!r})")
    for f in mors:
        for g in mors:
            # interchange law with identities
            fg = A.tensor(f, g)
            if A.compose(A.tensor(A.identity(A.tgt(f)), g), A.tensor(f, A.identity(A.src(g)))) != fg:
                report.append(f"interchange fails for ({A.fmt_mor(f)!r}, {A.fmt_mor(g)!r})")
            if A.compose(A.tensor(f, A.identity(A.tgt(g))), A.tensor(A.identity(A.src(f)), g)) != fg:
                report.append(f"interchange fails for ({A.fmt_mor(f)!r}, {A.fmt_mor(g)!r})")
            if A.src(g) == A.tgt(f):
                gf = A.compose(g, f)
                for c in objs:
                    ic = A.identity(c)
                    if A.compose(A.tensor(g, ic), A.tensor(f, ic)) != A.tensor(gf, ic):
                        report.append(f"(-)⊗id_{c!r} not functorial on ({A.fmt_mor(g)!r}, {A.fmt_mor(f)!r})")
                    if A.compose(A.tensor(ic, g), A.tensor(ic, f)) != A.tensor(ic, gf):
                        report.append(f"id_{c!r}⊗(-) not functorial on ({A.fmt_mor(g)!r}, {A.fmt_mor(f)!r})")
            # naturality of the symmetry
            s1 = A.symmetry(A.src(f), A.src(g))
            s2 = A.symmetry(A.tgt(f), A.tgt(g))
            if A.compose(s2, fg) != A.compose(A.tensor(g, f), s1):
                report.append(f"symmetry not natural at ({A.fmt_mor(f)!r}, {A.fmt_mor(g)!r})")
    for x in objs:
        if A.symmetry(x, I) != A.identity(x) or A.symmetry(I, x) != A.identity(x):
            report.append(f"σ with the unit is not the identity at {x!r}")
        for y in objs:
            if A.compose(A.symmetry(y, x), A.symmetry(x, y)) != A.identity(A.tensor_obj(x, y)):
                report.append(f"σ_{y!r},{x!r} ∘ σ_{x!r},{y!r} != id")
            for z in objs:
                lhs = A.symmetry(x, A.tensor_obj(y, z))
                rhs = A.compose(A.tensor(A.identity(y), A.symmetry(x, z)), A.tensor(A.symmetry(x, y), A.identity(z)))
                if lhs != rhs:
                    report.append(f"hexagon fails at ({x!r}, {y!r}, {z!r})")
    return report


# duals and traces -------------------------------------------------------------

@dataclass(frozen=True)
class DualityDatum:
    """``t: x ⊗ dual -> 1`` and ``u: 1 -> dual ⊗ x`` obeying both zigzags."""

    x: object
    dual: object
    t: object
    u: object


def check_duality(A: StrictSMC, d: DualityDatum) -> list[str]:
    x, y, I = d.x, d.dual, A.unit
    report = []
    if A.src(d.t) != A.tensor_obj(x, y) or A.tgt(d.t) != I:
        report.append("t is not a morphism x ⊗ dual -> 1")
    if A.src(d.u) != I or A.tgt(d.u) != A.tensor_obj(y, x):
        report.append("u is not a morphism 1 -> dual ⊗ x")
    if report:
        return report
    ix, iy = A.identity(x), A.identity(y)
    if A.compose(A.tensor(d.t, ix), A.tensor(ix, d.u)) != ix:
        report.append("zigzag on x is not the identity")
    if A.compose(A.tensor(iy, d.t), A.tensor(d.u, iy)) != iy:
        report.append("zigzag on the dual is not the identity")
    return report


@dataclass
class DualSearch:
    status: str  # "rigid" | "not rigid" | "cap exceeded"
    datum: DualityDatum | None = None
    searched: int = 0
    candidates: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def rigid(self):
        return self.status == "rigid"


def _pair_space(A, x, y):
    I = A.unit
    a = A.hom_size(A.tensor_obj(x, y), I)
    b = A.hom_size(I, A.tensor_obj(y, x))
    if a is None or b is None:
        return None
    return a * b


def _pairs_generic(A, x, y):
    I = A.unit
    ix, iy = A.identity(x), A.identity(y)
    ts = list(A.hom(A.tensor_obj(x, y), I))
    us = list(A.hom(I, A.tensor_obj(y, x)))
    tx = [A.tensor(t, ix) for t in ts]
    yt = [A.tensor(iy, t) for t in ts]
    xu = [A.tensor(ix, u) for u in us]
    uy = [A.tensor(u, iy) for u in us]
    out = []
    for a, t in enumerate(ts):
        for b, u in enumerate(us):
            if A.compose(tx[a], xu[b]) == ix and A.compose(yt[a], uy[b]) == iy:
                out.append(DualityDatum(x, y, t, u))
    return out, len(ts) * len(us)


def _pairs(A, x, y, fast=True):
    if fast and isinstance(A, MatrixCategory) and A.finite:
        return A.duality_pairs_fast(x, y)
    return _pairs_generic(A, x, y)


def find_dual(A: StrictSMC, x, cap=None) -> DualSearch:
    """A verified duality datum for ``x``, or an exhaustive refutation.

    A structure-supplied candidate is accepted once it passes both
    zigzags; otherwise every ``(y, t, u)`` with ``y`` among the enumerated
    objects is tried, lowest ``y`` first.
    """
    cap = search_cap() if cap is None else cap
    hint = A.dual_hint(x)
    if hint is not None and not check_duality(A, hint):
        return DualSearch("rigid", hint, 0, [hint.dual])
    searched, candidates, skipped = 0, [], []
    for y in A.objects:
        size = _pair_space(A, x, y)
        if size is None or size > cap:
            skipped.append(y)
            continue
        candidates.append(y)
        found, n = _pairs(A, x, y)
        searched += n
        if found:
            return DualSearch("rigid", found[0], searched, candidates, skipped)
    status = "cap exceeded" if skipped else "not rigid"
    return DualSearch(status, None, searched, candidates, skipped)


def all_duality_data(A: StrictSMC, x, cap=None, fast=True):
    """Every duality datum for ``x`` with dual among the enumerated objects."""
    cap = search_cap() if cap is None else cap
    out = []
    for y in A.objects:
        size = _pair_space(A, x, y)
        if size is None or size > cap:
            raise CapExceeded(f"duality search space for ({x!r}, {y!r}) exceeds the cap")
        out.extend(_pairs(A, x, y, fast=fast)[0])
    return out


@dataclass
class UniquenessReport:
    ok: bool
    data_count: int
    pairs: int
    failures: list = field(default_factory=list)


def dual_uniqueness(A: StrictSMC, x, data=None) -> UniquenessReport:
    """Between any two duality data for ``x`` there is exactly one morphism
    ``φ: y -> y'`` with ``t' ∘ (x ⊗ φ) = t`` and ``(φ ⊗ x) ∘ u = u'``, and it is
    invertible."""
    data = all_duality_data(A, x) if data is None else data
    ix = A.identity(x)
    by_dual = {}
    for k, d in enumerate(data):
        by_dual.setdefault(d.dual, []).append(k)
    index_by_t = {}
    for k, d in enumerate(data):
        index_by_t.setdefault((d.dual, d.t), []).append(k)
    counts = {}
    invertible = {}
    for y in by_dual:
        for y2, targets in by_dual.items():
            for phi in A.hom(y, y2):
                xphi, phix = A.tensor(ix, phi), A.tensor(phi, ix)
                inv = None
                for k2 in targets:
                    d2 = data[k2]
                    t = A.compose(d2.t, xphi)
                    for k in index_by_t.get((y, t), []):
                        if A.compose(phix, data[k].u) == d2.u:
                            counts[(k, k2)] = counts.get((k, k2), 0) + 1
                            if inv is None:
                                inv = A.inverse(phi) is not None
                            invertible[(k, k2)] = inv
    failures = []
    for k in range(len(data)):
        for k2 in range(len(data)):
            c = counts.get((k, k2), 0)
            if c != 1 or not invertible.get((k, k2), False):
                failures.append((k, k2, c))
    return UniquenessReport(not failures, len(data), len(data) ** 2, failures[:20])


def trace(A: StrictSMC, d: DualityDatum, f):
    """``t ∘ σ_{x∨,x} ∘ (id_{x∨} ⊗ f) ∘ u``, an endomorphism of the unit."""
    x = d.x
    if A.src(f) != x or A.tgt(f) != x:
        raise SMCError("trace needs an endomorphism of the datum's object")
    return A.compose_all(d.t, A.symmetry(d.dual, x), A.tensor(A.identity(d.dual), f), d.u)


def trace_of(A: StrictSMC, f, cap=None):
    """Trace using the datum returned by :func:`find_dual`."""
    res = find_dual(A, A.src(f), cap)
    if not res.rigid:
        raise SMCError(f"object {A.src(f)!r} is not rigid ({res.status})")
    return trace(A, res.datum, f)


class RigidSubcategory(StrictSMC):
    """Full sub-SMC on the objects that admit duals."""

    def __init__(self, A: StrictSMC, objects):
        self.A = A
        self.objects = list(objects)
        self.unit = A.unit
        self.name = f"rig({A.name})"

    def __getattr__(self, attr):
        return getattr(self.A, attr)

    def hom(self, x, y):
        return self.A.hom(x, y)

    def hom_size(self, x, y):
        return self.A.hom_size(x, y)

    def compose(self, g, f):
        return self.A.compose(g, f)

    def identity(self, x):
        return self.A.identity(x)

    def src(self, f):
        return self.A.src(f)

    def tgt(self, f):
        return self.A.tgt(f)

    def tensor_obj(self, x, y):
        return self.A.tensor_obj(x, y)

    def tensor(self, f, g):
        return self.A.tensor(f, g)

    def symmetry(self, x, y):
        return self.A.symmetry(x, y)

    def dual_hint(self, x):
        return self.A.dual_hint(x)

    def inverse(self, f):
        return self.A.inverse(f)


@dataclass
class RigidReport:
    subcategory: RigidSubcategory
    rigid: list
    not_rigid: list
    cap_exceeded: list
    closure: list  # violations of unit / tensor closure


def rigid_subcategory(A: StrictSMC, cap=None) -> RigidReport:
    rigid, nonrigid, capped = [], [], []
    for x in A.objects:
        r = find_dual(A, x, cap)
        {"rigid": rigid, "not rigid": nonrigid, "cap exceeded": capped}[r.status].append(x)
    closure = []
    if A.unit not in rigid:
        closure.append("unit is not rigid")
    known = set(A.objects)
    rset = set(rigid)
    for x in rigid:
        for y in rigid:
            xy = A.tensor_obj(x, y)
            if xy in known and xy not in rset:
                closure.append(f"{x!r} ⊗ {y!r} = {xy!r} is not rigid")
            elif xy not in known and not find_dual(A, xy, cap).rigid:
                closure.append(f"{x!r} ⊗ {y!r} = {xy!r} is not rigid")
    return RigidReport(RigidSubcategory(A, rigid), rigid, nonrigid, capped, closure)


def permutation_iso(A: StrictSMC, objs, perm):
    """The symmetry isomorphism ``⊗ objs -> ⊗ objs'`` where ``objs'[perm[k]] = objs[k]``,
    assembled from adjacent transpositions."""
    arr = list(zip(perm, objs))
    acc = A.identity(A.tensor_objs(objs))
    changed = True
    while changed:
        changed = False
        for k in range(len(arr) - 1):
            if arr[k][0] > arr[k + 1][0]:
                before = A.tensor_objs([o for _, o in arr[:k]])
                after = A.tensor_objs([o for _, o in arr[k + 2:]])
                swap = A.tensor_mors([A.identity(before), A.symmetry(arr[k][1], arr[k + 1][1]), A.identity(after)])
                acc = A.compose(swap, acc)
                arr[k], arr[k + 1] = arr[k + 1], arr[k]
                changed = True
    return acc


# Γ-nerve of a strict SMC --------------------------------------------------------

class ProductLevel:
    """``A^n`` with objects enumerated from a sample of ``A``'s objects."""

    def __init__(self, A: StrictSMC, n: int, sample):
        self.A = A
        self.n = n
        self.objects = list(itertools.product(sample, repeat=n))

    def hom(self, x, y):
        return itertools.product(*(self.A.hom(a, b) for a, b in zip(x, y)))

    def compose(self, g, f):
        return tuple(self.A.compose(a, b) for a, b in zip(g, f))

    def identity(self, x):
        return tuple(self.A.identity(a) for a in x)

    def src(self, f):
        return tuple(self.A.src(a) for a in f)

    def tgt(self, f):
        return tuple(self.A.tgt(a) for a in f)

    def inverse(self, f):
        inv = tuple(self.A.inverse(a) for a in f)
        return None if any(i is None for i in inv) else inv

    def find_iso(self, x, y):
        isos = tuple(self.A.find_iso(a, b) for a, b in zip(x, y))
        return None if any(i is None for i in isos) else isos


class ProductGamma(GammaCategory):
    """Γ-category of tuples: level ``[n]`` is ``A^n`` and ``u_!`` tensors each
    fiber in increasing index order.  Reordering a fiber is mediated by the
    symmetry, which is exactly the coherence ``v_! u_! -> (v∘u)_!``."""

    def __init__(self, A: StrictSMC, bound=4, sample=None):
        self.A = A
        self.bound = bound
        self.sample = list(A.objects if sample is None else sample)
        self._levels = {}

    def level(self, n):
        if n not in self._levels:
            self._levels[n] = ProductLevel(self.A, n, self.sample)
        return self._levels[n]

    def push(self, u: GammaMap, x):
        A = self.A
        out = []
        for j in range(1, u.target + 1):
            fib = u.fiber(j)
            out.append(x[fib[0] - 1] if len(fib) == 1 else A.tensor_objs([x[i - 1] for i in fib]))
        return tuple(out)

    def push_mor(self, u: GammaMap, f):
        A = self.A
        out = []
        for j in range(1, u.target + 1):
            fib = u.fiber(j)
            out.append(f[fib[0] - 1] if len(fib) == 1 else A.tensor_mors([f[i - 1] for i in fib]))
        return tuple(out)

    def coherence(self, v: GammaMap, u: GammaMap, x):
        comps = []
        for j in range(1, v.target + 1):
            nested = [i for jj in v.fiber(j) for i in u.fiber(jj)]
            order = sorted(nested)
            perm = [order.index(i) for i in nested]
            comps.append(permutation_iso(self.A, [x[i - 1] for i in nested], perm))
        return tuple(comps)

    def segal_preimage(self, n, xs):
        return tuple(x[0] for x in xs)

    def lift(self, n, z, z2, fs):
        h = tuple(f[0] for f in fs)
        if self.level(n).src(h) != tuple(z) or self.level(n).tgt(h) != tuple(z2):
            raise gamma.GammaError("lift has the wrong source/target")
        return h


def nerve_smc(A: StrictSMC, bound=4, sample=None) -> ProductGamma:
    return ProductGamma(A, bound, sample)


# reconstruction of the monoidal structure from Segal data -----------------------

_P = fold_map(2)
_TAU = GammaMap(2, 2, (0, 2, 1))
_PI3 = fold_map(3)
# q groups the first two points, r forgets the third (left bracketing);
# q2 groups the last two, r2 forgets the first (right bracketing).
_Q = GammaMap(3, 2, (0, 1, 1, 2))
_R = GammaMap(3, 2, (0, 1, 2, 0))
_Q2 = GammaMap(3, 2, (0, 1, 2, 2))
_R2 = GammaMap(3, 2, (0, 0, 1, 2))


class Reconstruction:
    """Tensor, symmetry and associator on level ``[1]`` of a special
    Γ-category, built from chosen quasi-inverses of the Segal functors at
    levels 2 and 3 and their counits."""

    def __init__(self, G: GammaCategory):
        self.G = G
        self.L1 = G.level(1)
        self._choice = {}
        z0 = G.level(0).objects[0]
        self.unit = G.push(GammaMap(0, 1, (0,)), z0)

    # quasi-inverse choice
    def choose(self, n, xs):
        """``(z, k)`` with ``k_i: s_i(z) -> xs_i`` isomorphisms.

        An on-the-nose preimage (counit = identity) is preferred; otherwise
        the first isomorphic preimage in enumeration order.
        """
        key = (n, tuple(xs))
        if key in self._choice:
            return self._choice[key]
        G, L1 = self.G, self.L1
        xs = tuple(xs)
        hint = G.segal_preimage(n, xs)
        res = None
        if hint is not None and G.segal(n, hint) == xs:
            res = (hint, tuple(L1.identity(x) for x in xs))
        else:
            objs = list(G.level(n).objects)
            for z in objs:
                if G.segal(n, z) == xs:
                    res = (z, tuple(L1.identity(x) for x in xs))
                    break
            if res is None:
                for z in objs:
                    isos = tuple(L1.find_iso(a, b) for a, b in zip(G.segal(n, z), xs))
                    if all(i is not None for i in isos):
                        res = (z, isos)
                        break
        if res is None:
            raise gamma.GammaError(f"level {n}: no preimage of {xs!r} under the Segal functor")
        self._choice[key] = res
        return res

    def _c(self, *fs):
        return self.L1.compose(*fs) if len(fs) == 2 else _compose_all(self.L1, fs)

    def _inv(self, f):
        inv = self.L1.inverse(f)
        if inv is None:
            raise gamma.GammaError("counit component is not invertible")
        return inv

    def tensor_obj(self, x, y):
        z, _ = self.choose(2, (x, y))
        return self.G.push(_P, z)

    def tensor(self, f, g):
        L1, G = self.L1, self.G
        x, y = L1.src(f), L1.src(g)
        x2, y2 = L1.tgt(f), L1.tgt(g)
        z, k = self.choose(2, (x, y))
        z2, k2 = self.choose(2, (x2, y2))
        fs = (_compose_all(L1, [self._inv(k2[0]), f, k[0]]), _compose_all(L1, [self._inv(k2[1]), g, k[1]]))
        return G.push_mor(_P, G.lift(2, z, z2, fs))

    def identity(self, x):
        return self.L1.identity(x)

    def symmetry(self, x, y):
        L1, G = self.L1, self.G
        z, k = self.choose(2, (x, y))
        w, kw = self.choose(2, (y, x))
        tz = G.push(_TAU, z)
        comps = []
        for i in (1, 2):
            s_i = segal_map(2, i)
            j = _TAU(i)
            phi = G.coherence(s_i, _TAU, z)
            comps.append(_compose_all(L1, [self._inv(kw[i - 1]), k[j - 1], phi]))
        eps = G.lift(2, tz, w, comps)
        back = self._inv(G.coherence(_P, _TAU, z))
        return L1.compose(G.push_mor(_P, eps), back)

    def _to_total(self, x, y, z, left=True):
        """Isomorphism ``(x⊗y)⊗z -> T`` (``left``) or ``x⊗(y⊗z) -> T`` where
        ``T`` is the total tensor of the chosen level-3 preimage."""
        L1, G = self.L1, self.G
        v, h = self.choose(3, (x, y, z))
        if left:
            q, r, pair, outer = _Q, _R, (x, y), None
            w = self.tensor_obj(x, y)
            zz, kk = self.choose(2, (w, z))
        else:
            q, r, pair = _Q2, _R2, (y, z)
            w = self.tensor_obj(y, z)
            zz, kk = self.choose(2, (x, w))
        zp, kp = self.choose(2, pair)
        rv = G.push(r, v)
        offset = 0 if left else 1
        rho_comps = []
        for i in (1, 2):
            s_i = segal_map(2, i)
            phi = G.coherence(s_i, r, v)
            rho_comps.append(_compose_all(L1, [self._inv(kp[i - 1]), h[i - 1 + offset], phi]))
        rho = G.lift(2, rv, zp, rho_comps)
        qv = G.push(q, v)
        s1, s2 = segal_map(2, 1), segal_map(2, 2)
        grouped_i = 1 if left else 2
        single_i = 2 if left else 1
        single_h = h[2] if left else h[0]
        grouped = _compose_all(L1, [
            self._inv(kk[grouped_i - 1]),
            G.push_mor(_P, rho),
            self._inv(G.coherence(_P, r, v)),
            G.coherence(segal_map(2, grouped_i), q, v),
        ])
        single = _compose_all(L1, [
            self._inv(kk[single_i - 1]),
            single_h,
            G.coherence(segal_map(2, single_i), q, v),
        ])
        comps = (grouped, single) if left else (single, grouped)
        N = G.lift(2, qv, zz, comps)
        Ninv = G.level(2).inverse(N)
        if Ninv is None:
            raise gamma.GammaError("comparison with the level-3 preimage is not invertible")
        return L1.compose(G.coherence(_P, q, v), G.push_mor(_P, Ninv))

    def associator(self, x, y, z):
        """``(x⊗y)⊗z -> x⊗(y⊗z)``."""
        left = self._to_total(x, y, z, left=True)
        right = self._to_total(x, y, z, left=False)
        return self.L1.compose(self._inv(right), left)


def _compose_all(C, fs):
    acc = fs[-1]
    for g in reversed(fs[:-1]):
        acc = C.compose(g, acc)
    return acc


@dataclass
class CoherenceReport:
    pentagon: bool
    hexagon: bool
    symmetry_involutive: bool
    naturality: bool
    unit: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return self.pentagon and self.hexagon and self.symmetry_involutive and self.naturality and self.unit


def monoidal_from_gamma(G: GammaCategory, sample=None, bound=4, check_special=True):
    """Reconstruct ``⊗``, ``σ`` and ``α`` on level ``[1]`` of ``G`` and verify
    pentagon, both hexagons, ``σσ = id``, naturality and the unit.

    Returns ``(Reconstruction, CoherenceReport)``; raises
    :class:`gamma.GammaError` naming the level when ``G`` is not special.
    """
    if check_special:
        rep = gamma.is_special(G, bound)
        if not rep:
            raise gamma.GammaError(f"not special at level {rep.failed_level}: {rep.levels[-1][2]}")
    R = Reconstruction(G)
    L1 = R.L1
    objs = list(L1.objects if sample is None else sample)
    fails = []
    T, S, a = R.tensor, R.symmetry, R.associator
    to, ident = R.tensor_obj, L1.identity

    pent = True
    for w, x, y, z in itertools.product(objs, repeat=4):
        lhs = L1.compose(a(w, x, to(y, z)), a(to(w, x), y, z))
        rhs = _compose_all(L1, [T(ident(w), a(x, y, z)), a(w, to(x, y), z), T(a(w, x, y), ident(z))])
        if lhs != rhs:
            pent = False
            fails.append(f"pentagon fails at {(w, x, y, z)!r}")
    hexa = True
    for x, y, z in itertools.product(objs, repeat=3):
        lhs = _compose_all(L1, [a(y, z, x), S(x, to(y, z)), a(x, y, z)])
        rhs = _compose_all(L1, [T(ident(y), S(x, z)), a(y, x, z), T(S(x, y), ident(z))])
        if lhs != rhs:
            hexa = False
            fails.append(f"hexagon fails at {(x, y, z)!r}")
        ainv = lambda *o: L1.inverse(a(*o))
        lhs2 = _compose_all(L1, [ainv(z, x, y), S(to(x, y), z), ainv(x, y, z)])
        rhs2 = _compose_all(L1, [T(S(x, z), ident(y)), ainv(x, z, y), T(ident(x), S(y, z))])
        if lhs2 != rhs2:
            hexa = False
            fails.append(f"second hexagon fails at {(x, y, z)!r}")
    invol = True
    for x, y in itertools.product(objs, repeat=2):
        if L1.compose(S(y, x), S(x, y)) != ident(to(x, y)):
            invol = False
            fails.append(f"σσ != id at {(x, y)!r}")
    nat = True
    mors = [f for x in objs for y in objs for f in L1.hom(x, y)]
    for f in mors:
        for g in mors:
            x, y, x2, y2 = L1.src(f), L1.src(g), L1.tgt(f), L1.tgt(g)
            fg = T(f, g)
            if L1.compose(S(x2, y2), fg) != L1.compose(T(g, f), S(x, y)):
                nat = False
                fails.append(f"σ not natural at {(f, g)!r}")
            if L1.src(g) == L1.tgt(f):
                for c in objs:
                    ic = ident(c)
                    if T(L1.compose(g, f), ic) != L1.compose(T(g, ic), T(f, ic)):
                        nat = False
                        fails.append(f"⊗ not functorial at {(g, f)!r}")
    for f in mors:
        for y, z in itertools.product(objs, repeat=2):
            iy, iz = ident(y), ident(z)
            for args in ((f, iy, iz), (iy, f, iz), (iy, iz, f)):
                srcs = [L1.src(m) for m in args]
                tgts = [L1.tgt(m) for m in args]
                lhs = L1.compose(a(*tgts), T(T(args[0], args[1]), args[2]))
                rhs = L1.compose(T(args[0], T(args[1], args[2])), a(*srcs))
                if lhs != rhs:
                    nat = False
                    fails.append(f"α not natural at {args!r}")
    unit_ok = True
    for x in objs:
        for o in (to(R.unit, x), to(x, R.unit)):
            if L1.find_iso(o, x) is None:
                unit_ok = False
                fails.append(f"unit is not neutral at {x!r}")
    return R, CoherenceReport(pent, hexa, invol, nat, unit_ok, fails[:20])


@dataclass
class ComparisonReport:
    natural_iso: bool
    monoidal: bool
    symmetric: bool
    unit: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return self.natural_iso and self.monoidal and self.symmetric and self.unit


def compare_reconstruction(A: StrictSMC, G: ProductGamma, R: Reconstruction, sample=None) -> ComparisonReport:
    """Exhibit ``J_{x,y}: x ⊗_R y -> x ⊗_A y`` and check it is a natural
    isomorphism compatible with associators (``A``'s are identities) and
    symmetries, i.e. a symmetric monoidal structure on the identity functor."""
    L1 = R.L1
    objs = list(L1.objects if sample is None else sample)
    fails = []

    def J(x, y):
        z, k = R.choose(2, (x, y))
        w = (x[0], y[0])
        return G.push_mor(_P, G.lift(2, z, w, k))

    def tA(f, g):
        return (A.tensor(f[0], g[0]),)

    def oA(x, y):
        return (A.tensor_obj(x[0], y[0]),)

    iso = True
    mors = [f for x in objs for y in objs for f in L1.hom(x, y)]
    for x in objs:
        for y in objs:
            j = J(x, y)
            if L1.inverse(j) is None or L1.tgt(j) != oA(x, y):
                iso = False
                fails.append(f"J{(x, y)!r} is not an isomorphism onto x ⊗_A y")
    for f in mors:
        for g in mors:
            x, y, x2, y2 = L1.src(f), L1.src(g), L1.tgt(f), L1.tgt(g)
            if L1.compose(J(x2, y2), R.tensor(f, g)) != L1.compose(tA(f, g), J(x, y)):
                iso = False
                fails.append(f"J not natural at {(f, g)!r}")
    mon = True
    sym = True
    for x, y, z in itertools.product(objs, repeat=3):
        lhs = _compose_all(L1, [J(x, oA(y, z)), R.tensor(L1.identity(x), J(y, z)), R.associator(x, y, z)])
        rhs = L1.compose(J(oA(x, y), z), R.tensor(J(x, y), L1.identity(z)))
        if lhs != rhs:
            mon = False
            fails.append(f"J not monoidal at {(x, y, z)!r}")
    for x, y in itertools.product(objs, repeat=2):
        if L1.compose(J(y, x), R.symmetry(x, y)) != L1.compose((A.symmetry(x[0], y[0]),), J(x, y)):
            sym = False
            fails.append(f"J does not carry σ_R to σ_A at {(x, y)!r}")
    unit_ok = L1.find_iso(R.unit, (A.unit,)) is not None
    if not unit_ok:
        fails.append("reconstructed unit is not isomorphic to A's unit")
    return ComparisonReport(iso, mon, sym, unit_ok, fails[:20])
