"""Exact fields and dense matrices over them.

Two kinds of field are supported: the rationals (elements are
:class:`fractions.Fraction`) and prime fields ``F_p`` (elements are
:class:`ModP`).  Everything here is exact; no floating point is used.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering


class FieldError(ValueError):
    pass


@total_ordering
class ModP:
    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, ModP):
            if other.p != self.p:
                raise FieldError(f"mixing F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __pos__(self):
        return self

    def inverse(self):
        if self.v == 0:
            raise ZeroDivisionError("inverse of 0 in F_%d" % self.p)
        return ModP(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * ModP(o, self.p).inverse()

    def __rtruediv__(self, other):
        return ModP(other, self.p) / self

    def __eq__(self, other):
        if isinstance(other, ModP):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, ModP):
            return (self.p, self.v) < (other.p, other.v)
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v}"


class Field:
    """Common interface: ``F(x)`` coerces, ``F.zero``/``F.one``, ``F.fmt``."""

    name = "field"
    characteristic = 0

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def fmt(self, x) -> str:
        raise NotImplementedError

    def parse(self, s):
        """Parse an int, a ``"p/q"`` string, or an already-coerced element."""
        if isinstance(s, str):
            s = s.strip()
            if "/" in s:
                num, den = s.split("/")
                return self(int(num)) / self(int(den))
            return self(int(s))
        if isinstance(s, (int, Fraction, ModP)):
            return self(s)
        raise FieldError(f"cannot parse field element {s!r}")

    def elements(self):
        raise FieldError(f"{self.name} is infinite")

    def spec(self) -> dict:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Field) and self.spec() == other.spec()

    def __hash__(self):
        return hash(tuple(sorted(self.spec().items())))

    def __repr__(self):
        return self.name


class Rationals(Field):
    name = "Q"
    characteristic = 0

    def __call__(self, x):
        if isinstance(x, ModP):
            raise FieldError("cannot coerce F_p element into Q")
        return Fraction(x)

    def fmt(self, x) -> str:
        x = Fraction(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def spec(self):
        return {"field": "Q"}


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"
        self.characteristic = p

    def __call__(self, x):
        if isinstance(x, ModP):
            if x.p != self.p:
                raise FieldError(f"mixing F_{x.p} into F_{self.p}")
            return x
        if isinstance(x, Fraction):
            return ModP(x.numerator, self.p) / ModP(x.denominator, self.p)
        return ModP(int(x), self.p)

    def fmt(self, x) -> str:
        return str(self(x).v)

    def elements(self):
        return [ModP(v, self.p) for v in range(self.p)]

    def spec(self):
        return {"field": "Fp", "p": self.p}


QQ = Rationals()


def field_from_spec(spec) -> Field:
    """Accepts ``"Q"``, ``"F2"``, ``{"field": "Fp", "p": 3}`` and similar."""
    if isinstance(spec, Field):
        return spec
    if isinstance(spec, str):
        s = spec.strip()
        if s in ("Q", "QQ", "rationals"):
            return QQ
        if s.upper().startswith("F") and s[1:].isdigit():
            return PrimeField(int(s[1:]))
        raise FieldError(f"unsupported field spec {spec!r}")
    if isinstance(spec, dict):
        kind = spec.get("field")
        if kind in ("Q", "QQ", "rationals"):
            return QQ
        if kind in ("Fp", "F_p", "prime"):
            if "p" not in spec:
                raise FieldError("prime field spec needs 'p'")
            return PrimeField(int(spec["p"]))
        if isinstance(kind, str):
            return field_from_spec(kind)
    raise FieldError(f"unsupported field spec {spec!r}")


@dataclass(frozen=True)
class Matrix:
    """Dense matrix with explicit shape, so 0-row / 0-column matrices keep
    their type."""

    field: Field
    rows: int
    cols: int
    data: tuple

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise FieldError(f"bad matrix shape, expected {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, field, rows, cols=None):
        rows = [list(r) for r in rows]
        n = len(rows)
        m = cols if cols is not None else (len(rows[0]) if rows else 0)
        return cls(field, n, m, tuple(tuple(field(x) for x in r) for r in rows))

    @classmethod
    def zeros(cls, field, rows, cols):
        z = field.zero
        return cls(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def permutation(cls, field, perm):
        """Matrix sending basis vector ``j`` to basis vector ``perm[j]``."""
        n = len(perm)
        z, o = field.zero, field.one
        data = [[z] * n for _ in range(n)]
        for j, i in enumerate(perm):
            data[i][j] = o
        return cls(field, n, n, tuple(tuple(r) for r in data))

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise FieldError(f"shape mismatch {self.shape} @ {other.shape}")
        z = self.field.zero
        cols = list(zip(*other.data)) if other.rows else [()] * other.cols
        out = []
        for r in self.data:
            row = []
            for c in cols:
                s = z
                for a, b in zip(r, c):
                    if a and b:
                        s = s + a * b
                row.append(s)
            out.append(tuple(row))
        return Matrix(self.field, self.rows, other.cols, tuple(out))

    def __add__(self, other):
        if self.shape != other.shape:
            raise FieldError("shape mismatch in +")
        return Matrix(self.field, self.rows, self.cols,
                      tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = self.field(c)
        return Matrix(self.field, self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self.data))

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product, first factor major."""
        rows = []
        for r in self.data:
            for s in other.data:
                rows.append(tuple(a * b for a in r for b in s))
        return Matrix(self.field, self.rows * other.rows, self.cols * other.cols, tuple(rows))

    def transpose(self) -> "Matrix":
        if self.rows == 0:
            return Matrix(self.field, self.cols, 0, tuple(() for _ in range(self.cols)))
        return Matrix(self.field, self.cols, self.rows, tuple(zip(*self.data)))

    @property
    def T(self):
        return self.transpose()

    def trace(self):
        if self.rows != self.cols:
            raise FieldError("trace of a non-square matrix")
        s = self.field.zero
        for i in range(self.rows):
            s = s + self.data[i][i]
        return s

    def is_zero(self) -> bool:
        return all(not a for r in self.data for a in r)

    def rank(self) -> int:
        return len(rref(self.field, [list(r) for r in self.data], self.cols)[1])

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise FieldError("inverse of a non-square matrix")
        n = self.rows
        aug = [list(r) + [self.field.one if i == j else self.field.zero for j in range(n)]
               for i, r in enumerate(self.data)]
        red, piv = rref(self.field, aug, 2 * n)
        if piv[:n] != list(range(n)):
            raise FieldError("matrix is singular")
        return Matrix(self.field, n, n, tuple(tuple(r[n:]) for r in red[:n]))

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def column(self, j):
        return [r[j] for r in self.data]

    def to_lists(self):
        return [[self.field.fmt(a) for a in r] for r in self.data]

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {self.to_lists()})"


def rref(field, rows, ncols):
    """Reduced row echelon form of a list of rows (copied).

    Returns ``(reduced_rows, pivot_columns)``.
    """
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r >= nrows:
            break
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.one / m[r][c]
        if inv != 1:
            m[r] = [inv * a for a in m[r]]
        pr = m[r]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                mi = m[i]
                m[i] = [a - f * b if b else a for a, b in zip(mi, pr)]
        pivots.append(c)
        r += 1
    return m, pivots


def rank_of(field, rows, ncols) -> int:
    return len(rref(field, rows, ncols)[1])


def nullspace(field, rows, ncols):
    """Basis of ``{x : rows . x = 0}``, one vector per free column."""
    red, piv = rref(field, rows, ncols)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for i, pc in enumerate(piv):
            v[pc] = -red[i][f]
        basis.append(v)
    return basis


def solve(field, rows, ncols, rhs):
    """One solution of ``rows . x = rhs`` or ``None`` when inconsistent.

    The returned solution sets every free variable to zero, so it is the
    reduced-echelon representative and is reproducible.
    """
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, piv = rref(field, aug, ncols + 1)
    if piv and piv[-1] == ncols:
        return None
    x = [field.zero] * ncols
    for i, pc in enumerate(piv):
        x[pc] = red[i][ncols]
    return x


def in_span(field, vectors, v) -> bool:
    """Whether ``v`` lies in the span of ``vectors`` (all of equal length)."""
    n = len(v)
    base = rank_of(field, vectors, n) if vectors else 0
    return rank_of(field, list(vectors) + [list(v)], n) == base
