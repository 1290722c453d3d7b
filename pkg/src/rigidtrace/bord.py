"""Oriented 1-dimensional bordisms over BG for a finite group G, up to diffeomorphism.

Objects are signed words such as ``"+-+"``.  A bordism ``X -> Y`` is a set of
oriented arcs plus a multiset of circles.  Boundary positions are
``("s", i)`` on the source and ``("t", j)`` on the target; an arc starts at a
``+`` source point or a ``-`` target point and ends at a ``-`` source point or
a ``+`` target point, which forces the through/cup/cap types to be consistent
with the signs.  Each arc carries its holonomy read along its orientation;
circles carry conjugacy classes.  Concatenating a path with holonomy ``g``
and then one with ``h`` gives ``h·g``.

Representations evaluate an arc from ``p`` to ``q`` with label ``g`` to the
entry ``ρ(g)[idx q, idx p]`` and a circle ``[g]`` to ``χ(g)``, so a ``-``
through-strand becomes ``ρ(g)^T`` and identity-labelled cups and caps become
the standard coevaluation and evaluation.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from dataclasses import dataclass
from functools import cached_property

from .linalg import Field, Matrix, ModP, field_from_spec
from .smc import CapExceeded, DualityDatum, StrictSMC, trace


class BordError(ValueError):
    pass


# finite groups ---------------------------------------------------------------------

class FinGroup:
    def __init__(self, elements, table, name="G"):
        self.elements = list(elements)
        self.table = [list(row) for row in table]
        self.name = name
        n = len(self.elements)
        if len(self.table) != n or any(len(r) != n or any(not 0 <= v < n for v in r) for r in self.table):
            raise BordError("Cayley table has the wrong shape")
        units = [e for e in range(n) if all(self.table[e][a] == a == self.table[a][e] for a in range(n))]
        if not units:
            raise BordError("no identity element")
        self.e = units[0]
        for a, b, c in itertools.product(range(n), repeat=3):
            if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                raise BordError(f"not associative at ({a}, {b}, {c})")
        self.inv = []
        for a in range(n):
            inv = [b for b in range(n) if self.table[a][b] == self.e]
            if len(inv) != 1:
                raise BordError(f"element {self.elements[a]!r} has no inverse")
            self.inv.append(inv[0])

    def __len__(self):
        return len(self.elements)

    def mul(self, a, b):
        return self.table[a][b]

    def index(self, label):
        if isinstance(label, int) and not isinstance(label, bool) and 0 <= label < len(self):
            return label
        if label in self.elements:
            return self.elements.index(label)
        if str(label) in map(str, self.elements):
            return list(map(str, self.elements)).index(str(label))
        raise BordError(f"unknown group element {label!r}")

    @cached_property
    def class_of(self):
        """Each element's conjugacy class, named by its smallest member."""
        out = []
        for a in range(len(self)):
            out.append(min(self.mul(self.mul(g, a), self.inv[g]) for g in range(len(self))))
        return out

    @property
    def classes(self):
        return sorted(set(self.class_of))

    def to_json(self):
        return {"name": self.name, "elements": self.elements, "table": self.table}

    @classmethod
    def from_json(cls, data):
        return cls(data["elements"], data["table"], data.get("name", "G"))

    @classmethod
    def cyclic(cls, n):
        return cls(list(range(n)), [[(a + b) % n for b in range(n)] for a in range(n)], f"Z/{n}")

    @classmethod
    def trivial(cls):
        return cls.cyclic(1)

    @classmethod
    def symmetric3(cls):
        perms = list(itertools.permutations(range(3)))
        idx = {p: k for k, p in enumerate(perms)}
        table = [[idx[tuple(p[q[i]] for i in range(3))] for q in perms] for p in perms]
        return cls(["".join(map(str, p)) for p in perms], table, "S3")

    @property
    def cyclic_order(self):
        """``n`` if the group is ``Z/n`` in the standard presentation, else ``None``."""
        n = len(self)
        if self.table == [[(a + b) % n for b in range(n)] for a in range(n)]:
            return n
        return None


# representations --------------------------------------------------------------------

@dataclass
class Representation:
    G: FinGroup
    field: Field
    matrices: list  # one Matrix per element

    @property
    def dim(self):
        return self.matrices[0].rows

    def __call__(self, g):
        return self.matrices[g]

    def character(self, g):
        return self.matrices[g].trace()

    def check(self) -> list[str]:
        G = self.G
        report = []
        d = self.dim
        for g, m in enumerate(self.matrices):
            if m.rows != d or m.cols != d:
                report.append(f"matrix of {G.elements[g]!r} is not {d}x{d}")
        if report:
            return report
        if self.matrices[G.e] != Matrix.identity(self.field, d):
            report.append("identity does not act trivially")
        for a in range(len(G)):
            for b in range(len(G)):
                if self.matrices[a] @ self.matrices[b] != self.matrices[G.mul(a, b)]:
                    report.append(f"ρ({G.elements[a]!r})ρ({G.elements[b]!r}) != ρ(product)")
        return report

    def to_json(self):
        return {"field": self.field.spec(),
                "matrices": {str(self.G.elements[g]): m.to_lists()
                             for g, m in enumerate(self.matrices)}}

    @classmethod
    def from_generators(cls, G: FinGroup, fld, gens: dict):
        """Expand images of generators to the whole group by closure; the
        result is checked against the full Cayley table."""
        F = field_from_spec(fld)
        images = {}
        d = None
        for label, rows in gens.items():
            m = Matrix.from_rows(F, [[F.parse(c) for c in row] for row in rows])
            d = m.rows if d is None else d
            images[G.index(label)] = m
        if d is None:
            raise BordError("a representation needs at least one generator")
        known = {G.e: Matrix.identity(F, d)}
        frontier = [G.e]
        while frontier:
            nxt = []
            for a in frontier:
                for s, m in images.items():
                    b = G.mul(s, a)
                    if b not in known:
                        known[b] = m @ known[a]
                        nxt.append(b)
            frontier = nxt
        if len(known) != len(G):
            raise BordError("generators do not generate the group")
        rep = cls(G, F, [known[g] for g in range(len(G))])
        report = rep.check()
        if report:
            raise BordError("not a representation: " + "; ".join(report[:3]))
        return rep

    @classmethod
    def from_json(cls, G: FinGroup, data):
        gens = data.get("generators", data.get("matrices"))
        if gens is None:
            raise BordError("representation JSON needs 'generators' or 'matrices'")
        return cls.from_generators(G, data.get("field", "Q"), gens)

    @classmethod
    def trivial(cls, G, fld="Q"):
        F = field_from_spec(fld)
        return cls(G, F, [Matrix.identity(F, 1) for _ in range(len(G))])


def _cyclotomic(d):
    """Integer coefficients (lowest degree first) of the d-th cyclotomic polynomial."""
    num = [-1] + [0] * (d - 1) + [1]
    for k in range(1, d):
        if d % k == 0:
            den = _cyclotomic(k)
            # exact division of num by the monic den
            q = [0] * (len(num) - len(den) + 1)
            r = list(num)
            for i in range(len(q) - 1, -1, -1):
                q[i] = r[i + len(den) - 1]
                for j, c in enumerate(den):
                    r[i + j] -= q[i] * c
            num = q
    return num


def rational_irreps(G: FinGroup) -> list[Representation]:
    """Irreducible rational representations of a cyclic group: one for each
    divisor ``d`` of ``n``, the generator acting by the companion matrix of the
    d-th cyclotomic polynomial."""
    n = G.cyclic_order
    if n is None:
        raise BordError("rational irreducibles are only built for Z/n")
    out = []
    for d in range(1, n + 1):
        if n % d:
            continue
        phi = _cyclotomic(d)
        k = len(phi) - 1
        comp = [[0] * k for _ in range(k)]
        for i in range(1, k):
            comp[i][i - 1] = 1
        for i in range(k):
            comp[i][k - 1] = -phi[i]
        out.append(Representation.from_generators(G, "Q", {1 % n: comp} if n > 1 else {0: [[1]]}))
    return out


def sign_rep(fld="Q"):
    F = field_from_spec(fld)
    G = FinGroup.cyclic(2)
    return Representation(G, F, [Matrix.identity(F, 1), Matrix.from_rows(F, [[-1]])])


# bordisms ------------------------------------------------------------------------------

def _check_word(w):
    if not isinstance(w, str) or any(c not in "+-" for c in w):
        raise BordError(f"not a signed word: {w!r}")
    return w


def flip(w):
    return "".join("-" if c == "+" else "+" for c in w)


def dual_word(w):
    return flip(w)[::-1]


def starts(X, Y):
    return [("s", i) for i, c in enumerate(X) if c == "+"] + [("t", j) for j, c in enumerate(Y) if c == "-"]


def ends(X, Y):
    return [("s", i) for i, c in enumerate(X) if c == "-"] + [("t", j) for j, c in enumerate(Y) if c == "+"]


@dataclass(frozen=True)
class Bordism:
    source: str
    target: str
    arcs: tuple  # ((start, end, g), ...) sorted by start
    circles: tuple = ()  # sorted conjugacy-class names

    def arc_type(self, arc):
        (a, _), (b, _), _ = arc
        if a != b:
            return "through"
        return "cap" if a == "s" else "cup"

    def to_json(self, G: FinGroup | None = None):
        name = (lambda g: G.elements[g]) if G is not None else (lambda g: g)
        return {"source": self.source, "target": self.target,
                "arcs": [{"from": list(p), "to": list(q), "label": name(g)} for p, q, g in self.arcs],
                "circles": [name(c) for c in self.circles]}


def make_bordism(G: FinGroup, source, target, arcs, circles=()) -> Bordism:
    """Validate and normalize; ``circles`` may be any elements (their classes are kept)."""
    X, Y = _check_word(source), _check_word(target)
    st, en = set(starts(X, Y)), set(ends(X, Y))
    seen_s, seen_e = set(), set()
    norm = []
    for p, q, g in arcs:
        p, q = tuple(p), tuple(q)
        if p not in st:
            raise BordError(f"arc cannot start at {p!r} (wrong sign or out of range)")
        if q not in en:
            raise BordError(f"arc cannot end at {q!r} (wrong sign or out of range)")
        if p in seen_s or q in seen_e:
            raise BordError("matching is not a perfect matching")
        seen_s.add(p)
        seen_e.add(q)
        norm.append((p, q, G.index(g)))
    if seen_s != st or seen_e != en:
        raise BordError("matching is not a perfect matching")
    cls = tuple(sorted(G.class_of[G.index(c)] for c in circles))
    return Bordism(X, Y, tuple(sorted(norm)), cls)


def bordism_from_json(G: FinGroup, data) -> Bordism:
    arcs = [(a["from"], a["to"], a.get("label", G.e)) for a in data.get("arcs", [])]
    return make_bordism(G, data.get("source", ""), data.get("target", ""), arcs, data.get("circles", []))


def _through(G, X, Y, pairs, labels=None):
    """Through-strands pairing source ``i`` with target ``j`` for ``(i, j)`` in pairs."""
    arcs = []
    for k, (i, j) in enumerate(pairs):
        g = G.e if labels is None else labels[k]
        if X[i] == "+":
            arcs.append((("s", i), ("t", j), g))
        else:
            arcs.append((("t", j), ("s", i), g))
    return Bordism(X, Y, tuple(sorted(arcs)), ())


def compose(G: FinGroup, b2: Bordism, b1: Bordism) -> Bordism:
    """``b2 ∘ b1``: glue the target of ``b1`` to the source of ``b2``."""
    if b1.target != b2.source:
        raise BordError(f"cannot glue {b1.target!r} to {b2.source!r}")
    nxt = {}
    for p, q, g in b1.arcs:
        nxt[(1, p)] = ((1, q), g)
    for p, q, g in b2.arcs:
        nxt[(2, p)] = ((2, q), g)

    def external(node):
        k, (side, _) = node
        return (k == 1 and side == "s") or (k == 2 and side == "t")

    def across(node):
        # a middle end continues as the start at the same point of the other piece
        k, (_, i) = node
        return (2, ("s", i)) if k == 1 else (1, ("t", i))

    used = set()
    arcs = []
    for node in list(nxt):
        if not external(node):
            continue
        acc = G.e
        cur = node
        while True:
            used.add(cur)
            end, g = nxt[cur]
            acc = G.mul(g, acc)
            if external(end):
                break
            cur = across(end)
        arcs.append((node[1], end[1], acc))
    circles = list(b1.circles) + list(b2.circles)
    for node in nxt:
        if node in used:
            continue
        acc = G.e
        cur = node
        while cur not in used:
            used.add(cur)
            end, g = nxt[cur]
            acc = G.mul(g, acc)
            cur = across(end)
        circles.append(G.class_of[acc])
    return Bordism(b1.source, b2.target, tuple(sorted(arcs)), tuple(sorted(circles)))


def tensor(b: Bordism, c: Bordism) -> Bordism:
    ns, nt = len(b.source), len(b.target)

    def shift(p):
        side, i = p
        return (side, i + (ns if side == "s" else nt))

    arcs = list(b.arcs) + [(shift(p), shift(q), g) for p, q, g in c.arcs]
    return Bordism(b.source + c.source, b.target + c.target, tuple(sorted(arcs)),
                   tuple(sorted(b.circles + c.circles)))


def identity(G, X) -> Bordism:
    return _through(G, X, X, [(i, i) for i in range(len(X))])


def strand(G, sign, g) -> Bordism:
    """The endomorphism of a single point with holonomy ``g`` along the orientation."""
    return _through(G, sign, sign, [(0, 0)], [G.index(g)])


def symmetry(G, X, Y) -> Bordism:
    n, m = len(X), len(Y)
    pairs = [(i, m + i) for i in range(n)] + [(n + j, j) for j in range(m)]
    return _through(G, X + Y, Y + X, pairs)


def cap(G, X) -> Bordism:
    """``t: X ⊗ X∨ -> ∅`` by nested caps."""
    W = X + dual_word(X)
    n = len(W)
    arcs = []
    for i in range(len(X)):
        a, b = ("s", i), ("s", n - 1 - i)
        arcs.append((a, b, G.e) if W[i] == "+" else (b, a, G.e))
    return Bordism(W, "", tuple(sorted(arcs)), ())


def cup(G, X) -> Bordism:
    """``u: ∅ -> X∨ ⊗ X`` by nested cups."""
    W = dual_word(X) + X
    n = len(W)
    arcs = []
    for i in range(len(X)):
        a, b = ("t", i), ("t", n - 1 - i)
        arcs.append((a, b, G.e) if W[i] == "-" else (b, a, G.e))
    return Bordism("", W, tuple(sorted(arcs)), ())


def bord_trace(G: FinGroup, g) -> Bordism:
    """The closed bordism with one circle of holonomy ``[g]``, built directly."""
    return Bordism("", "", (), (G.class_of[G.index(g)],))


def conjugacy_class(G, g):
    return G.class_of[G.index(g)]


def words(maxlen):
    return ["".join(w) for n in range(maxlen + 1) for w in itertools.product("+-", repeat=n)]


def enumerate_bordisms(G: FinGroup, X, Y, max_circles=0):
    """Every bordism ``X -> Y`` with at most ``max_circles`` circles."""
    st, en = starts(X, Y), ends(X, Y)
    if len(st) != len(en):
        return []
    circle_sets = [c for k in range(max_circles + 1)
                   for c in itertools.combinations_with_replacement(G.classes, k)]
    out = []
    for perm in itertools.permutations(en):
        for labels in itertools.product(range(len(G)), repeat=len(st)):
            arcs = tuple(sorted(zip(st, perm, labels)))
            for circ in circle_sets:
                out.append(Bordism(X, Y, arcs, tuple(circ)))
    return out


class BordismCategory(StrictSMC):
    """Bordisms over BG as a strict SMC with objects the signed words of
    length ``<= max_points``.  Hom-sets are infinite (any number of circles);
    ``hom`` enumerates those with at most ``max_circles`` circles."""

    def __init__(self, G: FinGroup, max_points=2, max_circles=0):
        self.G = G
        self.max_points = max_points
        self.max_circles = max_circles
        self.objects = words(max_points)
        self.unit = ""
        self.name = f"Bord1(B{G.name})"

    def hom(self, x, y):
        return enumerate_bordisms(self.G, x, y, self.max_circles)

    def hom_size(self, x, y):
        return None

    def compose(self, g, f):
        return compose(self.G, g, f)

    def identity(self, x):
        return identity(self.G, x)

    def src(self, f):
        return f.source

    def tgt(self, f):
        return f.target

    def tensor_obj(self, x, y):
        return x + y

    def tensor(self, f, g):
        return tensor(f, g)

    def symmetry(self, x, y):
        return symmetry(self.G, x, y)

    def dual_hint(self, x):
        return DualityDatum(x, dual_word(x), cap(self.G, x), cup(self.G, x))

    def inverse(self, f):
        # invertible bordisms are the circle-free through-strand ones
        if f.circles or any(p[0] == q[0] for p, q, _ in f.arcs):
            return None
        G = self.G
        arcs = tuple(sorted(((("t" if p[0] == "s" else "s"), p[1]), (("t" if q[0] == "s" else "s"), q[1]), G.inv[g])
                            for p, q, g in f.arcs))
        # reversing the picture swaps starts and ends
        arcs = tuple(sorted((q, p, g) for p, q, g in arcs))
        return Bordism(f.target, f.source, arcs, ())

    def find_iso(self, x, y):
        if sorted(x) != sorted(y):
            return None
        remaining = list(range(len(x)))
        pairs = []
        for j, c in enumerate(y):
            i = next(i for i in remaining if x[i] == c)
            remaining.remove(i)
            pairs.append((i, j))
        return _through(self.G, x, y, pairs)

    def fmt_mor(self, f):
        return f.to_json(self.G)


def bordism_category(G: FinGroup, max_points=2, max_circles=0) -> BordismCategory:
    return BordismCategory(G, max_points, max_circles)


def smc_trace(G: FinGroup, g, sign="+") -> Bordism:
    """The abstract SMC trace of the ``g``-strand on a single point."""
    A = BordismCategory(G, 1)
    f = strand(G, sign, g)
    return trace(A, A.dual_hint(sign), f)


# evaluation ------------------------------------------------------------------------------

def _raw(F, x):
    """An int standing in for ``x`` when arithmetic can be done in Z, else ``x``."""
    if isinstance(x, ModP):
        return x.v
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def evaluate(rho: Representation, b: Bordism) -> Matrix:
    """The linear map ``V^{⊗X} -> V^{⊗Y}`` (first factor most significant).

    The matrix entry at ``(ys, xs)`` is the product over arcs of
    ``ρ(g)[idx q, idx p]``, so only nonzero entries of each arc matrix are
    enumerated.  Integral entries are multiplied as ints and coerced back.
    """
    F = rho.field
    d = rho.dim
    X, Y = b.source, b.target
    scalar = _raw(F, F.one)
    for c in b.circles:
        scalar = scalar * _raw(F, rho.character(c))
    nx, ny = len(X), len(Y)
    nnz = {}
    for _, _, g in b.arcs:
        if g not in nnz:
            nnz[g] = [(i, j, _raw(F, a)) for i, row in enumerate(rho(g).data) for j, a in enumerate(row) if a]
    # weight of each boundary point in the row (target) or column (source) index
    def weight(p):
        side, i = p
        n = nx if side == "s" else ny
        return side, d ** (n - 1 - i)
    arcs = [(weight(p), weight(q), nnz[g]) for p, q, g in b.arcs]
    cells = [[0] * d ** nx for _ in range(d ** ny)]
    for combo in itertools.product(*(a[2] for a in arcs)):
        r = c = 0
        val = scalar
        for ((ps, pw), (qs, qw), _), (i, j, a) in zip(arcs, combo):
            # entry [i, j]: i indexes the end point q, j the start point p
            if qs == "t":
                r += i * qw
            else:
                c += i * qw
            if ps == "t":
                r += j * pw
            else:
                c += j * pw
            val = val * a
        cells[r][c] = val
    return Matrix.from_rows(F, cells, d ** nx)


def evaluate_scalar(rho: Representation, b: Bordism):
    if b.source or b.target:
        raise BordError("only closed bordisms evaluate to scalars")
    return evaluate(rho, b)[0, 0]


@dataclass
class FunctorialityReport:
    pairs: int
    failures: list

    @property
    def ok(self):
        return not self.failures


def check_functoriality(rho: Representation, max_points=3, max_circles=2) -> FunctorialityReport:
    """``evaluate(b2 ∘ b1) = evaluate(b2) evaluate(b1)`` over every composable pair
    whose three boundary words together have at most ``max_points`` points, and
    ``evaluate(b ⊗ c) = evaluate(b) ⊗ evaluate(c)`` over the same bordisms."""
    G = rho.G
    ws = words(max_points)
    homs = {}

    def hom(x, y):
        if (x, y) not in homs:
            homs[(x, y)] = [(b, ev(b)) for b in enumerate_bordisms(G, x, y, max_circles)]
        return homs[(x, y)]

    memo = {}

    def ev(b):
        if b not in memo:
            memo[b] = evaluate(rho, b)
        return memo[b]

    failures = []
    n = 0
    for X in ws:
        for Y in ws:
            for Z in ws:
                if len(X) + len(Y) + len(Z) > max_points:
                    continue
                for b1, m1 in hom(X, Y):
                    for b2, m2 in hom(Y, Z):
                        n += 1
                        if ev(compose(G, b2, b1)) != m2 @ m1:
                            failures.append((b2, b1))
    for X in ws:
        for Y in ws:
            for b, mb in hom(X, Y):
                for X2 in ws:
                    for Y2 in ws:
                        if len(X) + len(Y) + len(X2) + len(Y2) > max_points:
                            continue
                        for c, mc in hom(X2, Y2):
                            n += 1
                            if ev(tensor(b, c)) != mb.kron(mc):
                                failures.append((b, c))
    return FunctorialityReport(n, failures[:10])
