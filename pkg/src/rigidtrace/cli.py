"""Command-line front end.

Exit codes: 0 success, 1 the input (or the checked property) is invalid,
2 usage errors and unreadable or ill-formed files.  All numbers are printed
exactly; rationals as ``p/q``.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__, bord, cyclic, fibration, gamma, selftest, simplices, smc
from .fincat import FinCat, check_category
from .linalg import Matrix, ModP


class UsageError(Exception):
    pass


class Invalid(Exception):
    """Validation failure; ``args[0]`` is the list of violations."""


# input ------------------------------------------------------------------------------------

def load_json(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def parse_with(path, build):
    data = load_json(path)
    try:
        return build(data)
    except (KeyError, TypeError, IndexError, ValueError, ArithmeticError) as exc:
        raise UsageError(f"{path}: ill-formed input ({type(exc).__name__}: {exc})") from None


def load_category(path, validate=False):
    return parse_with(path, lambda d: FinCat.from_json(d, validate=validate))


def load_smc(path):
    def build(d):
        if "category" in d:
            return smc.FinSMC.from_json(d)
        if "monoid" in d:
            return smc.DiscreteMonoidSMC(gamma.FinCMonoid.from_json(d["monoid"]))
        if "field" in d:
            return smc.matrix_category(d)
        raise KeyError("expected 'category', 'monoid' or 'field'")
    return parse_with(path, build)


def load_monoid(path):
    return parse_with(path, gamma.FinCMonoid.from_json)


def load_algebra(path):
    return parse_with(path, cyclic.FDAlgebra.from_json)


def load_diagram(path):
    return parse_with(path, fibration.CatDiagram.from_json)


def load_group(path):
    return parse_with(path, bord.FinGroup.from_json)


def parse_object(A, text):
    if text is None:
        raise UsageError("--object is required")
    try:
        val = json.loads(text)
    except json.JSONDecodeError:
        val = text
    if isinstance(val, list):
        val = tuple(val)
    return val


def load_endo(A, path, x):
    data = load_json(path)
    try:
        if isinstance(A, smc.MatrixCategory):
            F = A.field
            rows = [[F.parse(c) for c in row] for row in data]
            return Matrix.from_rows(F, rows, x)
        if isinstance(A, smc.FinSMC):
            return A.C.mor(data if not isinstance(data, list) else tuple(data))
        if isinstance(A, smc.DiscreteMonoidSMC):
            return A.identity(x)
    except (KeyError, TypeError, ValueError, ArithmeticError) as exc:
        raise UsageError(f"{path}: ill-formed endomorphism ({exc})") from None
    raise UsageError(f"{path}: endomorphisms not supported for {A.name}")


# output -----------------------------------------------------------------------------------

def jsonable(x):
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, ModP):
        return str(x.v)
    if isinstance(x, Matrix):
        return x.to_lists()
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(jsonable(v) for v in x)
    return x


def emit(report: dict, fmt: str, out=None):
    out = out or sys.stdout
    report = jsonable(report)
    if fmt == "json":
        out.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
        return
    for key, val in report.items():
        if isinstance(val, (dict, list)) and val and any(isinstance(v, (dict, list)) for v in
                                                         (val.values() if isinstance(val, dict) else val)):
            out.write(f"{key}:\n")
            items = val.items() if isinstance(val, dict) else enumerate(val)
            for k, v in items:
                out.write(f"  {k}: {json.dumps(v) if not isinstance(v, str) else v}\n")
        else:
            out.write(f"{key}: {json.dumps(val) if not isinstance(val, str) else val}\n")


def require(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise UsageError(f"{args.command} needs " + ", ".join("--" + n for n in missing))


# commands ---------------------------------------------------------------------------------

def cmd_check(args):
    if args.category:
        C = load_category(args.category)
        report = check_category(C)
        kind = "category"
    elif args.smc:
        A = load_smc(args.smc)
        report = smc.validate_smc(A)
        kind = "symmetric monoidal category"
    elif args.algebra:
        report = cyclic.check_algebra(load_algebra(args.algebra))
        kind = "algebra"
    elif args.diagram:
        report = fibration.check_diagram(load_diagram(args.diagram))
        kind = "diagram"
    elif args.monoid:
        report = gamma.check_monoid(load_monoid(args.monoid))
        kind = "monoid"
    elif args.group and args.rep:
        G = load_group(args.group)
        data = load_json(args.rep)
        try:
            bord.Representation.from_json(G, data)
            report = []
        except bord.BordError as exc:
            report = [str(exc)]
        kind = "representation"
    elif args.group:
        report = []
        kind = "group"  # the constructor validates
        load_group(args.group)
    else:
        raise UsageError("check needs one of --category, --smc, --algebra, --diagram, --monoid, --group")
    if report:
        raise Invalid(report)
    return {"result": "valid", "kind": kind}


def _gamma_input(args):
    if args.monoid:
        E = load_monoid(args.monoid)
        bad = gamma.check_monoid(E)
        if bad:
            raise Invalid(bad)
        return gamma.nerve_monoid(E, args.bound), f"nerve of a {len(E.elements)}-element monoid"
    if args.smc:
        A = load_smc(args.smc)
        return smc.nerve_smc(A, args.bound), f"nerve of {A.name}"
    raise UsageError(f"{args.command} needs --monoid or --smc")


def cmd_nerve(args):
    args.bound = 3 if args.bound is None else args.bound
    X, what = _gamma_input(args)
    if isinstance(X, gamma.GammaSet):
        bad = gamma.check_gamma_functoriality(X, min(args.bound, 3))
        if bad:
            raise Invalid(bad)
        out = {"nerve": what, "levels": X.level_sizes(), "functorial": True}
        if args.dump:
            index = [{x: k for k, x in enumerate(s)} for s in X.sets]
            out["maps"] = {f"{u.source}->{u.target} {list(u.table)}": [index[u.target][X.push(u, x)] for x in X.sets[u.source]]
                           for n in range(args.bound + 1) for m in range(args.bound + 1)
                           for u in gamma.gamma_maps(n, m)}
        return out
    sizes = [len(X.sample) ** n for n in range(args.bound + 1)]
    return {"nerve": what, "levels": sizes, "functorial": "up to the symmetry coherence isomorphisms"}


def cmd_special(args):
    args.bound = 4 if args.bound is None else args.bound
    X, what = _gamma_input(args)
    rep = gamma.is_special(X, args.bound)
    out = {"nerve": what, "special": rep.ok, "failed_level": rep.failed_level,
           "levels": [{"level": n, "ok": ok, "detail": d} for n, ok, d in rep.levels]}
    if not rep.ok:
        raise Invalid([f"not special at level {rep.failed_level}: {rep.levels[-1][2]}"], out)
    return out


def _valid_diagram(args):
    require(args, "diagram")
    F = load_diagram(args.diagram)
    bad = fibration.check_diagram(F)
    if bad:
        raise Invalid(bad)
    return F


def cmd_integrate(args):
    F = _valid_diagram(args)
    P = fibration.integrate(F)
    fails = fibration.is_fibered(P)
    out = {"total": P.to_json(), "fibered": not fails}
    if fails:
        raise Invalid(fails, out)
    return out


def cmd_sections(args):
    F = _valid_diagram(args)
    rep = fibration.cartesian_sections_roundtrip(F)
    out = {"roundtrip": rep.ok, "fibered": not rep.fibered, "counit_equivalence": rep.counit_equivalence,
           "per_object": rep.per_object, "detail": rep.detail}
    if not rep.ok:
        raise Invalid([rep.detail or "roundtrip failed"], out)
    return out


def cmd_simplices(args):
    require(args, "category")
    I = load_category(args.category)
    bad = check_category(I)
    if bad:
        raise Invalid(bad)
    N = 3 if args.bound is None else args.bound
    S = simplices.category_of_simplices(I, N)
    fibers = []
    for i in I.objects:
        r = simplices.fiber_report(S, i)
        fibers.append({"object": i, "fiber_objects": r.fiber_objects, "terminal": r.terminal,
                       "cofibered": r.cofibered, "lifts_checked": r.lifts_checked,
                       "strongly_cofibered": r.strongly_cofibered,
                       "strong_counterexample": r.strong_counterexample,
                       "terminal_if_vertical_means_projects_to_identity": r.pi_identity_terminal})
    return {"N": N, "objects_by_dimension": S.counts(), "morphisms": len(S.morphisms), "W": len(S.W),
            "W_projects_to_identity": len(S.W_pi), "factorization_failures": len(simplices.factorization_failures(S)),
            "fibers": fibers}


def cmd_dual(args):
    require(args, "smc", "object")
    A = load_smc(args.smc)
    x = parse_object(A, args.object)
    res = smc.find_dual(A, x)
    out = {"object": x, "status": res.status, "searched": res.searched, "skipped_duals": res.skipped}
    if res.rigid:
        d = res.datum
        out.update({"dual": d.dual, "t": A.fmt_mor(d.t), "u": A.fmt_mor(d.u)})
    return out


def cmd_trace(args):
    require(args, "smc", "object", "endo")
    A = load_smc(args.smc)
    x = parse_object(A, args.object)
    f = load_endo(A, args.endo, x)
    if A.src(f) != x or A.tgt(f) != x:
        raise UsageError(f"{args.endo}: not an endomorphism of {x!r}")
    try:
        t = smc.trace_of(A, f)
    except smc.SMCError as exc:
        raise Invalid([str(exc)]) from None
    scalar = t[0, 0] if isinstance(t, Matrix) else A.fmt_mor(t)
    return {"object": x, "trace": scalar}


def cmd_hochschild(args):
    require(args, "algebra", "degree")
    A = _valid_algebra(args)
    N = args.degree + 1 if args.bound is None else args.bound
    try:
        M = cyclic.mixed_complex(A, N)
        full = cyclic.hochschild_homology(A, args.degree, N, M=M)
        norm = cyclic.hochschild_homology(A, args.degree, N, normalized=True, M=M)
    except cyclic.AlgebraError as exc:
        raise UsageError(str(exc)) from None
    out = {"degree": args.degree, "bound": N, "dim": full.dim, "normalized_dim": norm.dim,
           "routes_agree": full.dim == norm.dim, "representatives": full.representatives}
    if full.dim != norm.dim:
        raise Invalid(["full and normalized complexes disagree"], out)
    return out


def _valid_algebra(args):
    A = load_algebra(args.algebra)
    bad = cyclic.check_algebra(A)
    if bad:
        raise Invalid(bad)
    return A


def cmd_negcyclic(args):
    require(args, "algebra", "degree", "uorder")
    A = _valid_algebra(args)
    N = args.degree + 2 * args.uorder + 1 if args.bound is None else args.bound
    try:
        rep = cyclic.negative_cyclic(A, args.degree, N, args.uorder)
    except cyclic.AlgebraError as exc:
        raise UsageError(str(exc)) from None
    return {"degree": args.degree, "uorder": args.uorder, "bound": N, "dim": rep.dim,
            "dims_by_uorder": rep.dims, "stable": rep.stable}


def cmd_chern(args):
    require(args, "algebra", "idempotent", "uorder")
    A = _valid_algebra(args)
    e = parse_with(args.idempotent, lambda d: cyclic.IdempotentMatrix.from_json(A, d))
    if not e.is_idempotent():
        raise Invalid([f"{args.idempotent}: matrix is not idempotent"])
    K = args.uorder
    N = 2 * K + 2 if args.bound is None else args.bound
    try:
        M = cyclic.mixed_complex(A, N)
        c = cyclic.chern_character(e, K, N, M=M)
    except cyclic.AlgebraError as exc:
        raise UsageError(str(exc)) from None
    except cyclic.TheoryViolation as exc:
        raise Invalid([f"theory violation: {exc}"]) from None
    F = A.field
    comps = {f"c_{2 * j}": [F.fmt(v) for v in comp] for j, comp in enumerate(c.components)}
    return {"c_0": [F.fmt(v) for v in c.components[0]], "trace_matches": c.components[0] == e.trace(),
            "uorder": K, "complex": "normalized", "components": comps,
            "certificate": "B(c_2j) + b(c_2j+2) = 0 for all j < K" if not c.check(M) else c.check(M)}


def cmd_bord_eval(args):
    require(args, "group", "rep", "bordism")
    G = load_group(args.group)
    rho = parse_with(args.rep, lambda d: bord.Representation.from_json(G, d))
    b = parse_with(args.bordism, lambda d: bord.bordism_from_json(G, d))
    m = bord.evaluate(rho, b)
    out = {"source": b.source, "target": b.target, "circles": [G.elements[c] for c in b.circles]}
    if not b.source and not b.target:
        out["value"] = m[0, 0]
    else:
        out["matrix"] = m
    return out


def cmd_selftest(args):
    lines = []

    def progress(c):
        if args.format == "text":
            args.out.write(c.line() + "\n")
            args.out.flush()
        lines.append(c)

    checks = selftest.run_all(progress)
    passed = sum(c.passed for c in checks)
    out = {"passed": passed, "failed": len(checks) - passed}
    if args.format == "json":
        out["checks"] = [c.to_json() for c in checks]
    if passed != len(checks):
        raise Invalid([c.line() for c in checks if not c.passed], out)
    return out


COMMANDS = {
    "check": cmd_check, "nerve": cmd_nerve, "special": cmd_special, "integrate": cmd_integrate,
    "sections": cmd_sections, "simplices": cmd_simplices, "dual": cmd_dual, "trace": cmd_trace,
    "hochschild": cmd_hochschild, "negcyclic": cmd_negcyclic, "chern": cmd_chern,
    "bord-eval": cmd_bord_eval, "selftest": cmd_selftest,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="rigidtrace", description="Exact checks for traces, Γ-objects, fibrations and cyclic homology.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("command", choices=sorted(COMMANDS))
    for flag in ("category", "smc", "algebra", "idempotent", "group", "rep", "bordism",
                 "diagram", "monoid", "object", "endo"):
        p.add_argument(f"--{flag}")
    for flag in ("degree", "bound", "uorder"):
        p.add_argument(f"--{flag}", type=int)
    p.add_argument("--dump", action="store_true", help="nerve: include the tables of X(u)")
    p.add_argument("--format", choices=["text", "json"], default="text")
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    args.out = out
    try:
        report = COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except Invalid as exc:
        report = dict(exc.args[1]) if len(exc.args) > 1 else {}
        report["result"] = "invalid"
        report["violations"] = list(exc.args[0])
        emit(report, args.format, out)
        return 1
    emit(report, args.format, out)
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
