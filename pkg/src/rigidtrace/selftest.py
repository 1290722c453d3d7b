"""The invariant suite behind ``rigidtrace selftest`` and the acceptance tests.

Each check returns a :class:`Check` with a verdict, a one-line detail and its
wall-clock time.  Checks are deterministic: no randomness, exact arithmetic.
"""
from __future__ import annotations

import ast
import itertools
import time
from dataclasses import dataclass
from pathlib import Path

from . import bord, cyclic, fibration, gamma, simplices, smc
from .fincat import FinCat


@dataclass
class Check:
    key: int
    name: str
    ok: bool
    detail: str
    seconds: float = 0.0
    limit: float | None = None

    @property
    def passed(self):
        return self.ok and (self.limit is None or self.seconds < self.limit)

    def line(self):
        verdict = "PASS" if self.passed else "FAIL"
        budget = f" (limit {self.limit:g}s)" if self.limit is not None else ""
        return f"[{verdict}] {self.key:2d}. {self.name}: {self.detail} [{self.seconds:.2f}s{budget}]"

    def to_json(self):
        return {"key": self.key, "name": self.name, "ok": self.passed, "detail": self.detail,
                "seconds": f"{self.seconds:.2f}", "limit": self.limit}


# shared fixtures ----------------------------------------------------------------------

def algebra_suite():
    return {
        "Q": cyclic.FDAlgebra.ground("Q"),
        "QxQ": cyclic.FDAlgebra.product(2, "Q"),
        "Q[e]/e^2": cyclic.FDAlgebra.dual_numbers("Q"),
        "F3[e]/e^2": cyclic.FDAlgebra.dual_numbers("F3"),
    }


def idempotent_suite(A: cyclic.FDAlgebra):
    """Unit, diagonal projectors, the coordinate idempotents of a product and a
    non-diagonal conjugate ``g diag(1, 0) g⁻¹`` with ``g = [[1, a], [0, 1]]``."""
    I = cyclic.IdempotentMatrix
    out = {"1": I.scalar_diagonal(A, [1]), "diag(1,0)": I.scalar_diagonal(A, [1, 0]),
           "diag(1,1)": I.scalar_diagonal(A, [1, 1])}
    if A.dim == 2 and A.mul[0][0] == [A.field.one, A.field.zero] and A.mul[1][1][1] == A.field.one:
        # product algebra: e0 = (1, 0)
        out["(1,0)"] = I(A, [[A.basis_vector(0)]])
        out["(0,1)"] = I(A, [[A.basis_vector(1)]])
    a = A.basis_vector(A.dim - 1) if A.dim > 1 else A.scalar(1)
    g, g_inv = _unipotent(A, a)
    out["conj"] = out["diag(1,0)"].conjugate(g, g_inv)
    return out


def _unipotent(A, a):
    one, z = A.scalar(1), A.zero()
    neg = [-c for c in a]
    I = cyclic.IdempotentMatrix
    return I(A, [[one, a], [z, one]]), I(A, [[one, neg], [z, one]])


def simplex_bases():
    return {"pt": FinCat.terminal(), "Delta1": FinCat.poset(1), "Delta2": FinCat.poset(2),
            "groupoid2": FinCat.contractible_groupoid(["a", "b"])}


# criteria ------------------------------------------------------------------------------

def _datum_cache(A):
    cache = {}

    def datum(x):
        if x not in cache:
            res = smc.find_dual(A, x)
            if not res.rigid:
                raise smc.SMCError(f"{x!r} is not rigid")
            cache[x] = res.datum
        return cache[x]
    return datum


def check_trace_cyclicity():
    A = smc.matrix_category("F2", 2)
    datum = _datum_cache(A)
    pairs = fails = 0
    for x in A.objects:
        for y in A.objects:
            for f in A.hom(x, y):
                for g in A.hom(y, x):
                    pairs += 1
                    if smc.trace(A, datum(x), A.compose(g, f)) != smc.trace(A, datum(y), A.compose(f, g)):
                        fails += 1
    return fails == 0, f"{pairs} composable pairs over Mat(F2, <= 2), {fails} failures"


def check_trace_multiplicative():
    A = smc.matrix_category("F2", 2)
    datum = _datum_cache(A)
    n = fails = 0
    for x in A.objects:
        for y in A.objects:
            for f in A.hom(x, x):
                tf = smc.trace(A, datum(x), f)
                for g in A.hom(y, y):
                    n += 1
                    tg = smc.trace(A, datum(y), g)
                    if smc.trace(A, datum(x * y), A.tensor(f, g)) != A.compose(tf, tg):
                        fails += 1
                    if x == y and smc.trace(A, datum(x), f + g) != tf + tg:
                        fails += 1
    c0_checks = c0_fails = 0
    for name, Alg in algebra_suite().items():
        es = list(idempotent_suite(Alg).values())
        for e, f in itertools.product(es, repeat=2):
            c0_checks += 2
            if e.direct_sum(f).trace() != Alg.add(e.trace(), f.trace()):
                c0_fails += 1
            if e.kron(f).trace() != Alg.multiply(e.trace(), f.trace()):
                c0_fails += 1
    ok = fails == 0 and c0_fails == 0
    return ok, (f"{n} endomorphism pairs, {fails} failures; "
                f"{c0_checks} c_0 sum/product checks, {c0_fails} failures")


def check_dual_uniqueness():
    A = smc.matrix_category("F2", 3)
    parts = []
    ok = True
    for x in A.objects:
        r = smc.dual_uniqueness(A, x)
        ok = ok and r.ok
        parts.append(f"x={x}: {r.data_count} data")
    return ok, ", ".join(parts)


def corrupted_gamma_set():
    """``nerve_monoid(Z/2)`` with one element of level 3 removed."""
    X = gamma.nerve_monoid(gamma.FinCMonoid.cyclic(2), 4)
    sets = [list(s) for s in X.sets]
    sets[3] = sets[3][1:]
    return gamma.GammaSet(X.bound, sets, X.act), 3


def check_gamma_special():
    monoids = {"trivial": gamma.FinCMonoid.trivial(), "Z/2": gamma.FinCMonoid.cyclic(2),
               "Z/3": gamma.FinCMonoid.cyclic(3), "N<=2": gamma.FinCMonoid.truncated_naturals(2)}
    bad = [k for k, E in monoids.items() if not gamma.is_special(gamma.nerve_monoid(E, 4), 4)]
    X, level = corrupted_gamma_set()
    rep = gamma.is_special(X, 4)
    named = (not rep.ok) and rep.failed_level == level
    ok = not bad and named
    detail = f"{len(monoids) - len(bad)}/{len(monoids)} nerves special to level 4; corrupted set fails at level {rep.failed_level}"
    return ok, detail


def check_reconstruction():
    cases = [("Mat(F2) on {1, 2}", smc.matrix_category("F2", 2), [1, 2])]
    for name, E in [("trivial", gamma.FinCMonoid.trivial()), ("Z/2", gamma.FinCMonoid.cyclic(2)),
                    ("Z/3", gamma.FinCMonoid.cyclic(3)), ("N<=2", gamma.FinCMonoid.truncated_naturals(2))]:
        cases.append((f"Disc({name})", smc.DiscreteMonoidSMC(E), None))
    bad = []
    for name, A, sample in cases:
        G = smc.nerve_smc(A, bound=3, sample=sample)
        s1 = None if sample is None else [(x,) for x in sample]
        R, coh = smc.monoidal_from_gamma(G, sample=s1, bound=3)
        cmp = smc.compare_reconstruction(A, G, R, sample=s1)
        if not (coh.ok and cmp.ok):
            bad.append(name)
    return not bad, f"{len(cases) - len(bad)}/{len(cases)} SMCs reconstructed" + (f"; failing: {bad}" if bad else "")


def check_grothendieck_roundtrip():
    n = 0
    bad = []
    for F in fibration.delta1_diagrams(2, 4):
        n += 1
        rep = fibration.cartesian_sections_roundtrip(F)
        if not rep.ok:
            bad.append(rep.detail)
    return not bad, f"{n} diagrams over Delta1, {len(bad)} failures"


def check_mixed_identities():
    bad = []
    for name, A in algebra_suite().items():
        rep = cyclic.mixed_complex(A, 5).identity_report()
        if not all(rep.values()):
            bad.append(f"{name}: {rep}")
    return not bad, "b^2 = B^2 = bB + Bb = 0 up to degree 5 for 4 algebras" if not bad else "; ".join(bad)


def check_two_route_hh():
    parts = []
    ok = True
    for name, A in algebra_suite().items():
        M = cyclic.mixed_complex(A, 4)
        full = [cyclic.hochschild_homology(A, n, 4, M=M).dim for n in range(4)]
        norm = [cyclic.hochschild_homology(A, n, 4, normalized=True, M=M).dim for n in range(4)]
        ok = ok and full == norm
        parts.append(f"{name} {tuple(full)}" + ("" if full == norm else f" != {tuple(norm)}"))
    return ok, "; ".join(parts)


def check_chern_lift():
    n = 0
    bad = []
    for name, A in algebra_suite().items():
        M = cyclic.mixed_complex(A, 6)
        es = idempotent_suite(A)
        for ename, e in es.items():
            n += 1
            try:
                c = cyclic.chern_character(e, 2, M=M)
            except cyclic.TheoryViolation as exc:
                bad.append(f"{name}/{ename}: {exc}")
                continue
            if c.components[0] != e.trace() or c.check(M):
                bad.append(f"{name}/{ename}: bad cycle")
        # conjugation moves c_0 by a b-boundary
        g, g_inv = _unipotent(A, A.basis_vector(A.dim - 1) if A.dim > 1 else A.scalar(1))
        for ename, e in es.items():
            if e.size != 2:
                continue
            n += 1
            diff = [a - b for a, b in zip(e.conjugate(g, g_inv).trace(), e.trace())]
            if not cyclic.is_b_boundary(M, 0, diff):
                bad.append(f"{name}/{ename}: conjugation not a boundary")
    return not bad, f"{n} lifts/conjugations to u-order 2, {len(bad)} failures" + (f": {bad[:2]}" if bad else "")


def check_bordism_characters():
    n = 0
    bad = []
    for G in (bord.FinGroup.cyclic(2), bord.FinGroup.cyclic(3)):
        reps = bord.rational_irreps(G)
        if G.cyclic_order == 2:
            reps.append(bord.sign_rep())
        for g in range(len(G)):
            b = bord.bord_trace(G, g)
            if bord.smc_trace(G, g) != b:
                bad.append(f"{G.name}: abstract trace of {g} differs")
            for rho in reps:
                n += 1
                if bord.evaluate_scalar(rho, b) != rho.character(g):
                    bad.append(f"{G.name}: chi({g}) in dim {rho.dim}")
    return not bad, f"{n} (rep, g) evaluations, {len(bad)} failures"


def check_simplices():
    parts = []
    ok = True
    for name, I in simplex_bases().items():
        S = simplices.category_of_simplices(I, 3)
        reports = [simplices.fiber_report(S, i) for i in I.objects]
        good = all(r.ok for r in reports)
        ok = ok and good
        parts.append(f"{name} {'ok' if good else 'FAILS'}")
    return ok, "terminal ([0], i) and cofibered at N=3: " + ", ".join(parts)


def float_free() -> list[str]:
    """Float literals or ``float(...)`` calls in the package source."""
    hits = []
    for path in sorted(Path(__file__).parent.glob("*.py")):
        if path.name in ("selftest.py", "cli.py"):
            continue  # timing only
        tree = ast.parse(path.read_text())
        for node in ast.walk(tree):
            if isinstance(node, ast.Constant) and isinstance(node.value, float):
                hits.append(f"{path.name}:{node.lineno} float literal")
            if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "float":
                hits.append(f"{path.name}:{node.lineno} float()")
    return hits


CRITERIA = [
    (1, "trace cyclicity", check_trace_cyclicity, 5.0),
    (2, "trace multiplicativity and additivity", check_trace_multiplicative, None),
    (3, "dual uniqueness", check_dual_uniqueness, 30.0),
    (4, "special Gamma-sets", check_gamma_special, None),
    (5, "constraint reconstruction", check_reconstruction, None),
    (6, "Grothendieck roundtrip", check_grothendieck_roundtrip, 60.0),
    (7, "mixed-complex identities", check_mixed_identities, None),
    (8, "two-route Hochschild agreement", check_two_route_hh, None),
    (9, "Chern lift", check_chern_lift, None),
    (10, "bordism/character agreement", check_bordism_characters, None),
    (11, "simplices witnesses", check_simplices, None),
]


def run_check(key, name, fn, limit) -> Check:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed check, reported as such
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return Check(key, name, ok, detail, time.perf_counter() - t0, limit)


def run_all(progress=None) -> list[Check]:
    """Run criteria 1-11, then 12 (total time and the float scan)."""
    t0 = time.perf_counter()
    out = []
    for key, name, fn, limit in CRITERIA:
        c = run_check(key, name, fn, limit)
        out.append(c)
        if progress:
            progress(c)
    hits = float_free()
    total = time.perf_counter() - t0
    detail = f"suite total; {'no floating point in the core' if not hits else hits[:3]}"
    c = Check(12, "selftest wall-clock and exactness", not hits, detail, total, 120.0)
    out.append(c)
    if progress:
        progress(c)
    return out
