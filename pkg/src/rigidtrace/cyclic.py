"""Cyclic bar construction of a finite-dimensional commutative algebra.

``C_n = A^{⊗(n+1)}`` with the basis of tensors of basis vectors, indexed
lexicographically (first factor major).  ``b`` is the Hochschild boundary,
``t(a0⊗...⊗an) = (-1)^n an⊗a0⊗...⊗a(n-1)`` the signed rotation, ``s`` the
insertion of the unit in front and ``B = (1 - t) s N`` Connes' operator with
``N = Σ t^i``.  On this unnormalized complex ``b² = B² = bB + Bb = 0`` hold
exactly; the normalized complex ``A ⊗ Ā^{⊗n}`` is built as a quotient and
serves as an independent route to Hochschild homology.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .linalg import Field, field_from_spec, in_span, nullspace, rank_of, solve

DIM_CAP = 1 << 14


class AlgebraError(ValueError):
    pass


class TheoryViolation(ArithmeticError):
    """A linear system the theory guarantees to be solvable was not."""


# sparse operators -------------------------------------------------------------

class Op:
    """Sparse linear map given column by column: ``cols[j]`` is ``{row: coeff}``."""

    def __init__(self, F: Field, nrows: int, cols):
        self.F = F
        self.nrows = nrows
        self.cols = [dict(c) for c in cols]

    @property
    def ncols(self):
        return len(self.cols)

    def apply(self, v):
        out = [self.F.zero] * self.nrows
        for j, c in enumerate(v):
            if c:
                for i, a in self.cols[j].items():
                    out[i] = out[i] + a * c
        return out

    def __matmul__(self, other: "Op") -> "Op":
        if other.nrows != self.ncols:
            raise ValueError("shape mismatch")
        cols = []
        for col in other.cols:
            acc = {}
            for k, a in col.items():
                for i, b in self.cols[k].items():
                    acc[i] = acc.get(i, self.F.zero) + b * a
            cols.append({i: c for i, c in acc.items() if c})
        return Op(self.F, self.nrows, cols)

    def __add__(self, other: "Op") -> "Op":
        cols = []
        for c1, c2 in zip(self.cols, other.cols):
            acc = dict(c1)
            for i, a in c2.items():
                acc[i] = acc.get(i, self.F.zero) + a
            cols.append({i: c for i, c in acc.items() if c})
        return Op(self.F, self.nrows, cols)

    def scale(self, c) -> "Op":
        return Op(self.F, self.nrows, [{i: a * c for i, a in col.items() if a * c} for col in self.cols])

    def __neg__(self):
        return self.scale(-self.F.one)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self):
        return all(not col for col in self.cols)

    def rows(self):
        dense = [[self.F.zero] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, a in col.items():
                dense[i][j] = a
        return dense

    def rank(self):
        if not self.nrows or not self.ncols:
            return 0
        # rank of the transpose: one row per column, usually the shorter side
        dense = [[col.get(i, self.F.zero) for i in range(self.nrows)] for col in self.cols]
        return rank_of(self.F, dense, self.nrows)

    @classmethod
    def identity(cls, F, n):
        return cls(F, n, [{j: F.one} for j in range(n)])

    @classmethod
    def zero(cls, F, nrows, ncols):
        return cls(F, nrows, [{} for _ in range(ncols)])


def block(F, rows_dims, cols_dims, blocks: dict) -> Op:
    """Assemble an operator from ``blocks[(r, c)]`` (missing blocks are zero)."""
    roff = list(itertools.accumulate([0] + list(rows_dims)))
    cols = []
    for c, width in enumerate(cols_dims):
        for j in range(width):
            col = {}
            for r in range(len(rows_dims)):
                op = blocks.get((r, c))
                if op is not None:
                    for i, a in op.cols[j].items():
                        col[roff[r] + i] = a
            cols.append(col)
    return Op(F, roff[-1], cols)


# algebras -----------------------------------------------------------------------

@dataclass
class FDAlgebra:
    """``mul[i][j]`` is the coefficient vector of ``e_i e_j``."""

    field: Field
    basis: list
    mul: list
    unit: list

    @property
    def dim(self):
        return len(self.basis)

    def __post_init__(self):
        F = self.field
        self.mul = [[[F(c) for c in v] for v in row] for row in self.mul]
        self.unit = [F(c) for c in self.unit]

    def multiply(self, x, y):
        F = self.field
        out = [F.zero] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                ab = a * b
                for k, c in enumerate(self.mul[i][j]):
                    if c:
                        out[k] = out[k] + ab * c
        return out

    def add(self, x, y):
        return [a + b for a, b in zip(x, y)]

    def scalar(self, c):
        return [self.field(c) * u for u in self.unit]

    def zero(self):
        return [self.field.zero] * self.dim

    def basis_vector(self, i):
        F = self.field
        return [F.one if k == i else F.zero for k in range(self.dim)]

    def fmt(self, x):
        return [self.field.fmt(c) for c in x]

    def to_json(self):
        f = self.field.fmt
        return {"field": self.field.spec(),
                "basis": list(self.basis),
                "mul": [[[f(c) for c in v] for v in row] for row in self.mul],
                "unit": [f(c) for c in self.unit]}

    @classmethod
    def from_json(cls, data):
        F = field_from_spec(data["field"])
        mul = [[[F.parse(c) for c in v] for v in row] for row in data["mul"]]
        return cls(F, list(data["basis"]), mul, [F.parse(c) for c in data["unit"]])

    # standard instances
    @classmethod
    def ground(cls, fld="Q"):
        F = field_from_spec(fld)
        return cls(F, ["1"], [[[1]]], [1])

    @classmethod
    def product(cls, k=2, fld="Q"):
        """``F^k`` with orthogonal idempotent basis."""
        F = field_from_spec(fld)
        mul = [[[1 if (i == j == m) else 0 for m in range(k)] for j in range(k)] for i in range(k)]
        return cls(F, [f"e{i}" for i in range(k)], mul, [1] * k)

    @classmethod
    def dual_numbers(cls, fld="Q"):
        """``F[ε]/(ε²)`` with basis ``1, ε``."""
        F = field_from_spec(fld)
        return cls(F, ["1", "eps"], [[[1, 0], [0, 1]], [[0, 1], [0, 0]]], [1, 0])


def check_algebra(A: FDAlgebra) -> list[str]:
    report = []
    d = A.dim
    if any(len(row) != d or any(len(v) != d for v in row) for row in A.mul) or len(A.mul) != d:
        return ["structure constants have the wrong shape"]
    if len(A.unit) != d:
        return ["unit vector has the wrong length"]
    E = [A.basis_vector(i) for i in range(d)]
    for i in range(d):
        if A.multiply(A.unit, E[i]) != E[i] or A.multiply(E[i], A.unit) != E[i]:
            report.append(f"unit law fails at {A.basis[i]!r}")
        for j in range(d):
            if A.multiply(E[i], E[j]) != A.multiply(E[j], E[i]):
                report.append(f"not commutative at ({A.basis[i]!r}, {A.basis[j]!r})")
            for k in range(d):
                if A.multiply(A.multiply(E[i], E[j]), E[k]) != A.multiply(E[i], A.multiply(E[j], E[k])):
                    report.append(f"not associative at ({A.basis[i]!r}, {A.basis[j]!r}, {A.basis[k]!r})")
    return report


# the mixed complex ----------------------------------------------------------------

class MixedComplex:
    """Unnormalized Hochschild complex with Connes' operator, up to degree ``N``.

    ``b(n)`` maps ``C_n -> C_{n-1}`` (``n >= 1``); ``B(n)`` maps ``C_n -> C_{n+1}``
    and needs ``n + 1 <= N + 1`` (degree ``N + 1`` is built on demand).
    """

    def __init__(self, A: FDAlgebra, N: int, cap: int = DIM_CAP):
        if N < 1:
            raise AlgebraError("degree bound must be >= 1")
        if A.dim ** (N + 2) > cap:
            raise AlgebraError(f"dim(A)^{N + 2} = {A.dim ** (N + 2)} exceeds the cap {cap}")
        self.A = A
        self.F = A.field
        self.N = N
        self._b = {}
        self._B = {}
        self._t = {}

    def dim(self, n):
        return self.A.dim ** (n + 1) if n >= 0 else 0

    def index(self, word):
        d = self.A.dim
        k = 0
        for w in word:
            k = k * d + w
        return k

    def words(self, n):
        return itertools.product(range(self.A.dim), repeat=n + 1)

    def _tensor_vector(self, n, factors):
        """Coefficients of ``f0 ⊗ ... ⊗ fn`` (each a coefficient vector of A)."""
        out = {}
        supports = [[(k, c) for k, c in enumerate(f) if c] for f in factors]
        for combo in itertools.product(*supports):
            coeff = self.F.one
            for _, c in combo:
                coeff = coeff * c
            key = self.index([k for k, _ in combo])
            out[key] = out.get(key, self.F.zero) + coeff
        return {k: c for k, c in out.items() if c}

    def b(self, n) -> Op:
        if n not in self._b:
            F, A = self.F, self.A
            cols = []
            E = [A.basis_vector(i) for i in range(A.dim)]
            for w in self.words(n):
                col = {}
                for i in range(n + 1):
                    if i < n:
                        factors = [E[a] for a in w[:i]] + [A.mul[w[i]][w[i + 1]]] + [E[a] for a in w[i + 2:]]
                        sign = F.one if i % 2 == 0 else -F.one
                    else:
                        factors = [A.mul[w[n]][w[0]]] + [E[a] for a in w[1:n]]
                        sign = F.one if n % 2 == 0 else -F.one
                    for k, c in self._tensor_vector(n - 1, factors).items():
                        col[k] = col.get(k, F.zero) + sign * c
                cols.append({k: c for k, c in col.items() if c})
            self._b[n] = Op(F, self.dim(n - 1), cols)
        return self._b[n]

    def t(self, n) -> Op:
        if n not in self._t:
            F = self.F
            sign = F.one if n % 2 == 0 else -F.one
            cols = [{self.index((w[n],) + tuple(w[:n])): sign} for w in self.words(n)]
            self._t[n] = Op(F, self.dim(n), cols)
        return self._t[n]

    def s(self, n) -> Op:
        """``x ↦ 1 ⊗ x``: ``C_n -> C_{n+1}``."""
        F, A = self.F, self.A
        cols = []
        for w in self.words(n):
            col = {}
            for k, c in enumerate(A.unit):
                if c:
                    col[self.index((k,) + tuple(w))] = c
            cols.append(col)
        return Op(F, self.dim(n + 1), cols)

    def norm(self, n) -> Op:
        acc = Op.identity(self.F, self.dim(n))
        power = Op.identity(self.F, self.dim(n))
        for _ in range(n):
            power = self.t(n) @ power
            acc = acc + power
        return acc

    def B(self, n) -> Op:
        if n not in self._B:
            one = Op.identity(self.F, self.dim(n + 1))
            self._B[n] = (one - self.t(n + 1)) @ self.s(n) @ self.norm(n)
        return self._B[n]

    def identity_report(self) -> dict:
        """Whether ``b²``, ``B²`` and ``bB + Bb`` vanish in every degree up to ``N``."""
        out = {"b^2": True, "B^2": True, "bB+Bb": True}
        for n in range(2, self.N + 1):
            if not (self.b(n - 1) @ self.b(n)).is_zero():
                out["b^2"] = False
        for n in range(0, self.N):
            if not (self.B(n + 1) @ self.B(n)).is_zero():
                out["B^2"] = False
        for n in range(1, self.N + 1):
            if not (self.b(n + 1) @ self.B(n) + self.B(n - 1) @ self.b(n)).is_zero():
                out["bB+Bb"] = False
        if not (self.b(1) @ self.B(0)).is_zero():
            out["bB+Bb"] = False
        return out


def mixed_complex(A: FDAlgebra, N: int, cap: int = DIM_CAP) -> MixedComplex:
    report = check_algebra(A)
    if report:
        raise AlgebraError("; ".join(report))
    return MixedComplex(A, N, cap)


# normalized complex ------------------------------------------------------------------

class NormalizedComplex:
    """``C̄_n = A ⊗ Ā^{⊗n}`` with ``Ā = A / k·1``.

    ``Ā`` gets the classes of all basis vectors but one, ``e_r``, where ``r``
    is the first coordinate of the unit that is nonzero.  ``P_n`` projects
    ``C_n`` onto ``C̄_n`` and ``L_n`` lifts basis tensors; ``b̄ = P b L`` and
    ``B̄ = P s N L``.
    """

    def __init__(self, M: MixedComplex):
        self.M = M
        A, F = M.A, M.F
        self.F = F
        self.r = next(k for k, c in enumerate(A.unit) if c)
        self.bar = [k for k in range(A.dim) if k != self.r]
        # class of e_r in Ā: -Σ (u_j / u_r) ē_j
        ur = A.unit[self.r]
        self.er_class = {pos: -(A.unit[j] / ur) for pos, j in enumerate(self.bar) if A.unit[j]}
        self._P, self._L = {}, {}

    def dim(self, n):
        return self.M.A.dim * len(self.bar) ** n if n >= 0 else 0

    def _index(self, first, rest):
        k = first
        for w in rest:
            k = k * len(self.bar) + w
        return k

    def P(self, n) -> Op:
        if n not in self._P:
            F = self.F
            cols = []
            bpos = {j: pos for pos, j in enumerate(self.bar)}
            for w in self.M.words(n):
                options = []
                for a in w[1:]:
                    if a == self.r:
                        options.append(list(self.er_class.items()))
                    else:
                        options.append([(bpos[a], F.one)])
                col = {}
                for combo in itertools.product(*options):
                    c = F.one
                    for _, x in combo:
                        c = c * x
                    key = self._index(w[0], [p for p, _ in combo])
                    col[key] = col.get(key, F.zero) + c
                cols.append({k: c for k, c in col.items() if c})
            self._P[n] = Op(F, self.dim(n), cols)
        return self._P[n]

    def L(self, n) -> Op:
        if n not in self._L:
            F, M = self.F, self.M
            cols = []
            for first in range(M.A.dim):
                for rest in itertools.product(range(len(self.bar)), repeat=n):
                    cols.append({M.index((first,) + tuple(self.bar[p] for p in rest)): F.one})
            self._L[n] = Op(F, M.dim(n), cols)
        return self._L[n]

    def b(self, n) -> Op:
        return self.P(n - 1) @ self.M.b(n) @ self.L(n)

    def B(self, n) -> Op:
        return self.P(n + 1) @ self.M.s(n) @ self.M.norm(n) @ self.L(n)


# homology ---------------------------------------------------------------------------

@dataclass
class Homology:
    degree: int
    dim: int
    representatives: list = field(default_factory=list)


def _homology(F, d_in: Op | None, d_out: Op | None, dim_n, degree, with_reps=True):
    r_out = d_out.rank() if d_out is not None and d_out.nrows else 0
    r_in = d_in.rank() if d_in is not None and d_in.ncols else 0
    h = dim_n - r_out - r_in
    reps = []
    if with_reps and h:
        ker = nullspace(F, d_out.rows(), dim_n) if d_out is not None and d_out.nrows else \
            [[F.one if k == j else F.zero for k in range(dim_n)] for j in range(dim_n)]
        span = [list(c) for c in zip(*d_in.rows())] if d_in is not None and d_in.ncols else []
        span = [v for v in span if any(v)]
        for v in ker:
            if len(reps) == h:
                break
            if not in_span(F, span + reps, v):
                reps.append(v)
    return Homology(degree, h, reps)


def hochschild_homology(A: FDAlgebra, n: int, N: int, normalized=False, M=None) -> Homology:
    """``HH_n = ker b_n / im b_{n+1}`` by exact rank computation."""
    if n >= N:
        raise AlgebraError(f"degree {n} needs a bound N > {n}")
    M = M or mixed_complex(A, N)
    if normalized:
        C = NormalizedComplex(M)
        d_out = C.b(n) if n >= 1 else None
        return _homology(M.F, C.b(n + 1), d_out, C.dim(n), n)
    d_out = M.b(n) if n >= 1 else None
    return _homology(M.F, M.b(n + 1), d_out, M.dim(n), n)


@dataclass
class NegCyclicReport:
    degree: int
    uorder: int
    dims: list  # dimension at u-orders 0..K
    stable: bool  # last two values agree

    @property
    def dim(self):
        return self.dims[-1]


def _total_differential(M: MixedComplex, n: int, K: int) -> Op:
    """``b + uB`` from total degree ``n`` to ``n - 1``, truncated mod ``u^{K+1}``."""
    F = M.F
    src = [M.dim(n + 2 * j) for j in range(K + 1)]
    tgt = [M.dim(n - 1 + 2 * j) for j in range(K + 1)]
    blocks = {}
    for j in range(K + 1):
        if n + 2 * j >= 1:
            blocks[(j, j)] = M.b(n + 2 * j)
        if j + 1 <= K and n + 2 * j >= 0:
            blocks[(j + 1, j)] = M.B(n + 2 * j)
    return block(F, tgt, src, blocks)


def negative_cyclic(A: FDAlgebra, n: int, N: int, K: int, M=None) -> NegCyclicReport:
    """Dimension of ``HC⁻_n`` computed mod ``u^{k+1}`` for ``k = 0..K``."""
    if n + 2 * K >= N:
        raise AlgebraError(f"need n + 2K < N (got n={n}, K={K}, N={N})")
    M = M or mixed_complex(A, N)
    dims = []
    for k in range(K + 1):
        d_out = _total_differential(M, n, k)
        d_in = _total_differential(M, n + 1, k)
        total = sum(M.dim(n + 2 * j) for j in range(k + 1))
        dims.append(_homology(M.F, d_in, d_out, total, n, with_reps=False).dim)
    return NegCyclicReport(n, K, dims, len(dims) >= 2 and dims[-1] == dims[-2])


# idempotents and the Chern character --------------------------------------------------

@dataclass
class IdempotentMatrix:
    A: FDAlgebra
    entries: list  # r x r of coefficient vectors

    @property
    def size(self):
        return len(self.entries)

    def __post_init__(self):
        F = self.A.field
        self.entries = [[[F(c) for c in v] for v in row] for row in self.entries]

    def product(self, other):
        A, r = self.A, self.size
        out = []
        for i in range(r):
            row = []
            for j in range(r):
                acc = A.zero()
                for k in range(r):
                    acc = A.add(acc, A.multiply(self.entries[i][k], other.entries[k][j]))
                row.append(acc)
            out.append(row)
        return IdempotentMatrix(A, out)

    def is_idempotent(self):
        return self.product(self).entries == self.entries

    def trace(self):
        acc = self.A.zero()
        for i in range(self.size):
            acc = self.A.add(acc, self.entries[i][i])
        return acc

    def direct_sum(self, other):
        A = self.A
        r, s = self.size, other.size
        z = A.zero()
        rows = [row + [z] * s for row in self.entries] + [[z] * r + row for row in other.entries]
        return IdempotentMatrix(A, rows)

    def kron(self, other):
        A = self.A
        rows = []
        for i in range(self.size):
            for k in range(other.size):
                rows.append([A.multiply(self.entries[i][j], other.entries[k][l])
                             for j in range(self.size) for l in range(other.size)])
        return IdempotentMatrix(A, rows)

    def conjugate(self, g, g_inv):
        """``g e g⁻¹``; ``g`` and ``g_inv`` are IdempotentMatrix-shaped matrices."""
        return g.product(self).product(g_inv)

    def to_json(self):
        f = self.A.field.fmt
        return [[[f(c) for c in v] for v in row] for row in self.entries]

    @classmethod
    def from_json(cls, A: FDAlgebra, data):
        return cls(A, [[[A.field.parse(c) for c in v] for v in row] for row in data])

    @classmethod
    def scalar_diagonal(cls, A, diag):
        z = A.zero()
        return cls(A, [[A.scalar(diag[i]) if i == j else z for j in range(len(diag))] for i in range(len(diag))])


@dataclass
class NegCyclicCycle:
    uorder: int
    components: list  # c_0, c_2, ..., c_{2K} in the normalized complex

    def check(self, M) -> list[str]:
        """Lift equations, in the normalized complex of ``M`` when ``M`` is a MixedComplex."""
        if isinstance(M, MixedComplex):
            M = NormalizedComplex(M)
        report = []
        for j in range(self.uorder):
            lhs = M.B(2 * j).apply(self.components[j])
            rhs = M.b(2 * j + 2).apply(self.components[j + 1])
            if any(a + b for a, b in zip(lhs, rhs)):
                report.append(f"B(c_{2 * j}) + b(c_{2 * j + 2}) != 0")
        return report


def chern_character(e: IdempotentMatrix, K: int, N: int | None = None, M=None) -> NegCyclicCycle:
    """``c_0 = tr(e)`` and ``c_2, ..., c_{2K}`` with ``b(c_{2j+2}) = -B(c_{2j})``.

    The lift is solved in the normalized complex, where ``B(1) = 0``, so the
    unit idempotent lifts with zero higher components.  The higher
    components are solved as one block-triangular system; free variables
    are set to zero, which picks the reduced-echelon solution.
    """
    if not e.is_idempotent():
        raise AlgebraError("matrix is not idempotent")
    N = 2 * K + 2 if N is None else N
    if N < 2 * K + 2:
        raise AlgebraError("need N >= 2K + 2")
    M = M or mixed_complex(e.A, N)
    C = NormalizedComplex(M)
    F = M.F
    c0 = e.trace()
    if K == 0:
        return NegCyclicCycle(0, [c0])
    # unknowns c_2, ..., c_{2K}; equations in C_1, C_3, ..., C_{2K-1}
    udims = [C.dim(2 * j) for j in range(1, K + 1)]
    edims = [C.dim(2 * j - 1) for j in range(1, K + 1)]
    blocks = {}
    for j in range(K):
        blocks[(j, j)] = C.b(2 * j + 2)
        if j >= 1:
            blocks[(j, j - 1)] = C.B(2 * j)
    system = block(F, edims, udims, blocks)
    rhs = [-c for c in C.B(0).apply(c0)] + [F.zero] * (sum(edims) - edims[0])
    sol = solve(F, system.rows(), system.ncols, rhs)
    if sol is None:
        raise TheoryViolation("no lift of the trace to the requested u-order")
    comps = [c0]
    off = 0
    for d in udims:
        comps.append(sol[off:off + d])
        off += d
    cyc = NegCyclicCycle(K, comps)
    bad = cyc.check(C)
    if bad:
        raise TheoryViolation("; ".join(bad))
    return cyc


def is_b_boundary(M: MixedComplex, n: int, v) -> bool:
    """Whether ``v ∈ C_n`` lies in the image of ``b_{n+1}``."""
    b = M.b(n + 1)
    cols = [[col.get(i, M.F.zero) for i in range(b.nrows)] for col in b.cols]
    return in_span(M.F, cols, v)
