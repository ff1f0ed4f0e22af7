"""Command-line interface.

Every subcommand prints one report (JSON by default) with keys command,
inputs, results, exact and version.  ``exact`` is false exactly when a
sampling oracle from :mod:`crgeom.certify` took part.

Exit codes: 0 ok, 2 parse error, 3 precondition failure, 4 inconclusive,
5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .certify import GridSpec, default_resolution, levi_min_eig_oracle, sphere_min_oracle
from .construct import (
    FamilyParams,
    SampleExhausted,
    compactness_check,
    derived_R_threshold,
    make_PR,
    make_rho,
    projective_image,
    projective_swap,
    sample_points_on_M,
    smoothness_check,
    transform_to_infinity,
    w_slice_is_trivial,
)
from .crfields import apply_multi, multi_indices, nondegeneracy_order, values_at
from .gaussian import GaussianRational, format_rational
from .geometry import (
    Hypersurface,
    NotOnHypersurfaceError,
    NotSmoothError,
    is_smooth_at,
    on_hypersurface,
    tangential_signature,
)
from .jets import (
    CodimReport,
    MapGerm,
    back_substitute,
    essential_type,
    is_normal,
    multiplicity_jet,
    proposition_check_at,
    q_based_nondeg_order,
    q_coefficients,
    reality_check,
    solve_graph,
    verify_map_identity,
)
from .linalg import Signature
from .parsing import ParseError, parse
from .polyring import Point, Poly, evaluate

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_INCONCLUSIVE = 4
EXIT_FAILED = 5


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# -- rendering ------------------------------------------------------------------

def to_jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, GaussianRational):
        return str(obj)
    if isinstance(obj, Poly):
        return str(obj)
    if isinstance(obj, Point):
        return [str(c) for c in obj.coords]
    if isinstance(obj, Signature):
        return {"plus": obj.plus, "minus": obj.minus, "zero": obj.zero}
    if isinstance(obj, CodimReport):
        return {
            "per_degree": [[d, c] for d, c in obj.per_degree],
            "stabilized": obj.stabilized,
            "value": obj.value,
            "window": obj.window,
        }
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot render {type(obj).__name__}")


def render(report: dict, fmt: str) -> str:
    data = to_jsonable(report)
    if fmt == "json":
        return json.dumps(data, sort_keys=True, indent=2)
    lines = []

    def walk(prefix, v):
        if isinstance(v, dict):
            for k in sorted(v):
                walk(f"{prefix}.{k}" if prefix else k, v[k])
        elif isinstance(v, list) and v and any(isinstance(x, (dict, list)) for x in v):
            for i, x in enumerate(v):
                walk(f"{prefix}[{i}]", x)
        else:
            lines.append(f"{prefix}: {json.dumps(v) if not isinstance(v, str) else v}")

    walk("", data)
    return "\n".join(lines)


def make_report(command: str, inputs: dict, results: dict, exact: bool) -> dict:
    return {"command": command, "inputs": inputs, "results": results, "exact": exact, "version": __version__}


# -- argument parsing helpers ------------------------------------------------

def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"bad rational {text!r}: {exc}", EXIT_PARSE)


def parse_complex(text: str) -> GaussianRational:
    try:
        p = parse(text, 1)
    except ParseError as exc:
        raise CliError(f"bad complex number {text!r}: {exc}", EXIT_PARSE)
    if not p.is_constant():
        raise CliError(f"bad complex number {text!r}: not a constant", EXIT_PARSE)
    return p.constant_term()


def parse_point(text: str | None, n: int) -> Point:
    if text is None:
        return Point.origin(n)
    parts = [s for s in text.split(",")]
    if len(parts) != n + 1:
        raise CliError(f"point needs {n + 1} coordinates, got {len(parts)}", EXIT_PARSE)
    return Point([parse_complex(s) for s in parts])


def parse_poly(text: str, n: int) -> Poly:
    try:
        return parse(text, n)
    except ParseError as exc:
        raise CliError(str(exc), EXIT_PARSE)


def read_expr(args) -> str:
    if getattr(args, "file", None):
        try:
            with open(args.file) as fh:
                return fh.read().strip()
        except OSError as exc:
            raise CliError(f"cannot read {args.file}: {exc}", EXIT_PARSE)
    if not args.expr:
        raise CliError("no expression given", EXIT_PARSE)
    return args.expr


def make_hypersurface(rho: Poly) -> Hypersurface:
    try:
        return Hypersurface(rho)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PRECONDITION)


def family(args) -> FamilyParams:
    R = parse_rational(args.R)
    try:
        return FamilyParams(args.n, R)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PRECONDITION)


def _codim_results(rep: CodimReport) -> dict:
    return {"codimension": rep, "stabilized": rep.stabilized, "value": rep.value}


# -- subcommands -------------------------------------------------------------------

def cmd_analyze(args):
    n = args.n
    rho = parse_poly(read_expr(args), n)
    p = parse_point(args.point, n)
    M = make_hypersurface(rho)
    kmax = args.kmax if args.kmax is not None else n + 3
    inputs = {"rho": rho, "n": n, "point": p, "kmax": kmax}
    if not on_hypersurface(M, p):
        raise CliError(f"point {p} is not on the hypersurface (rho = {evaluate(rho, p)})", EXIT_PRECONDITION)
    if not is_smooth_at(M, p):
        raise CliError(f"hypersurface is not smooth at {p}", EXIT_PRECONDITION)
    sig = tangential_signature(M, p)
    nd = nondegeneracy_order(M, p, kmax)
    results = {
        "on_hypersurface": True,
        "smooth": True,
        "gradient": M.gradient_at(p),
        "tangential_signature": sig,
        "strictly_pseudoconvex": sig == Signature(n, 0, 0),
        "nondegeneracy": {
            "order": nd.order,
            "description": nd.describe(),
            "ranks": [[k, r] for k, r in nd.ranks],
            "witness": [list(I) for I in nd.witness],
            "kmax": kmax,
        },
    }
    code = EXIT_OK if nd.order is not None else EXIT_INCONCLUSIVE
    return make_report("analyze", inputs, results, True), code


def cmd_construct(args):
    params = family(args)
    n = params.n
    M = make_rho(params)
    cert = derived_R_threshold(n)
    comp = compactness_check(M)
    smooth = smoothness_check(params, samples=100, seed=args.seed)
    try:
        pts = sample_points_on_M(params, args.count, seed=args.seed)
        exhausted = None
    except SampleExhausted as exc:
        pts, exhausted = exc.found, str(exc)
    results = {
        "P_R": make_PR(params),
        "rho": M.rho,
        "threshold": {
            "R0": cert.R0,
            "R_above_threshold": params.R > cert.R0,
            "certificate_valid": cert.valid,
            "steps": [{"name": s.name, "ok": s.ok} for s in cert.steps()],
            "positivity_bound_on_sphere": cert.positivity_bound(params.R),
            "levi_bound_on_sphere": cert.levi_bound(params.R),
        },
        "compactness": {"compact": comp.compact, "witness": comp.witness},
        "smoothness": {
            "smooth": smooth.smooth,
            "verdict": smooth.verdict,
            "samples_checked": smooth.samples_checked,
            "steps": [{"name": s.name, "ok": s.ok} for s in smooth.steps],
        },
        "sample_points": pts,
        "sample_exhausted": exhausted,
    }
    inputs = {"n": n, "R": params.R, "seed": args.seed, "count": args.count}
    code = EXIT_OK if comp.compact and smooth.smooth and not exhausted else EXIT_FAILED
    return make_report("construct", inputs, results, True), code


def cmd_certify(args):
    params = family(args)
    n = params.n
    res = args.grid if args.grid is not None else default_resolution(n)
    cert = derived_R_threshold(n)
    grid = GridSpec(res, n)
    pos_bound = cert.positivity_bound(params.R)
    levi_bound = cert.levi_bound(params.R)
    P = make_PR(params)
    pos = sphere_min_oracle(P, grid, pos_bound)
    levi = levi_min_eig_oracle(P, grid, levi_bound)
    results = {
        "R0": cert.R0,
        "certificate_valid": cert.valid,
        "sphere_min": _oracle_json(pos),
        "levi_min_eig": _oracle_json(levi),
    }
    inputs = {"n": n, "R": params.R, "grid": res}
    ok = cert.valid and pos.consistent and levi.consistent
    return make_report("certify", inputs, results, False), EXIT_OK if ok else EXIT_FAILED


def _oracle_json(rep) -> dict:
    return {
        "minimum": rep.minimum_value,
        "argmin": rep.argmin,
        "samples": rep.samples,
        "bound": rep.bound_checked,
        "consistent": rep.consistent,
        "label": rep.label,
    }


def cmd_esstype(args):
    n = args.n
    rho = parse_poly(read_expr(args), n)
    make_hypersurface(rho)
    D = args.degree
    try:
        rep, Q = essential_type(rho, D)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PRECONDITION)
    results = _codim_results(rep)
    results["normal_coordinates"] = is_normal(Q)
    inputs = {"rho": rho, "n": n, "degree": D}
    return make_report("esstype", inputs, results, True), EXIT_OK if rep.stabilized else EXIT_INCONCLUSIVE


def _parse_map(text: str, n: int) -> list[Poly]:
    return [parse_poly(part, n) for part in _split_top(text)]


def _split_top(text: str) -> list[str]:
    """Split on commas that are not inside parentheses."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [s.strip() for s in out]


def cmd_mult(args):
    n = args.n
    comps = _parse_map(args.map, n)
    try:
        germ = MapGerm(tuple(comps))
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PRECONDITION)
    rep = multiplicity_jet(germ, args.degree)
    inputs = {"map": comps, "n": n, "degree": args.degree}
    return make_report("mult", inputs, _codim_results(rep), True), EXIT_OK if rep.stabilized else EXIT_INCONCLUSIVE


def cmd_mapcheck(args):
    n = args.n
    src = parse_poly(args.source, n)
    comps = _parse_map(args.map, n)
    N = len(comps) - 1
    if N < 1:
        raise CliError("map needs at least two components", EXIT_PARSE)
    tgt = parse_poly(args.target, N)
    make_hypersurface(src)
    make_hypersurface(tgt)
    p = parse_point(args.point, n) if args.point else None
    try:
        rep = verify_map_identity(src, tgt, comps, args.degree, p)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PRECONDITION)
    results = {
        "holds": rep.holds,
        "exact_identity": rep.exact_identity,
        "multiplier_at_base_point": rep.multiplier_constant,
        "base_point": rep.base_point,
    }
    code = EXIT_OK if rep.holds else EXIT_FAILED
    if rep.holds and p is not None:
        prop, extra = proposition_check_at(src, tgt, comps, p, args.degree)
        results["proposition"] = {
            "inclusion_holds": prop.inclusion_holds,
            "inclusion_through_target": prop.inclusion_through_target,
            "multiplicity": prop.mult,
            "esstype": prop.esstype,
            "inequality_holds": prop.inequality_holds,
            "source_normal": extra["source_normal"],
            "target_normal": extra["target_normal"],
            "image_point": extra["image_point"],
        }
        if not prop.conclusive:
            code = EXIT_INCONCLUSIVE
        elif not (prop.inclusion_holds and prop.inequality_holds):
            code = EXIT_FAILED
    inputs = {"source": src, "target": tgt, "map": comps, "n": n, "degree": args.degree, "point": p}
    return make_report("mapcheck", inputs, results, True), code


def cmd_qsolve(args):
    n = args.n
    rho = parse_poly(read_expr(args), n)
    make_hypersurface(rho)
    D = args.degree
    try:
        Q = solve_graph(rho, D)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PRECONDITION)
    normal = is_normal(Q)
    kmax = args.kmax if args.kmax is not None else n + 3
    results = {
        "Q": Q.body,
        "back_substitution_vanishes": back_substitute(rho, Q).is_zero(),
        "reality_condition": reality_check(Q),
        "q_coefficients": {",".join(map(str, I)): f for I, f in q_coefficients(Q).items()},
        "normal_coordinates": normal,
        "q_based_order": q_based_nondeg_order(Q, kmax) if normal else None,
    }
    inputs = {"rho": rho, "n": n, "degree": D, "kmax": kmax}
    ok = results["back_substitution_vanishes"] and results["reality_condition"]
    return make_report("q-solve", inputs, results, True), EXIT_OK if ok else EXIT_FAILED


def cmd_transform(args):
    params = family(args)
    M = make_rho(params)
    try:
        T = transform_to_infinity(M, params)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PRECONDITION)
    Mh = T.hypersurface()
    try:
        pts = sample_points_on_M(params, args.count, seed=args.seed)
    except SampleExhausted as exc:
        pts = exc.found
    rows = []
    for p in pts:
        q = projective_image(p)
        on = on_hypersurface(Mh, q)
        rows.append({
            "point": p,
            "image": q,
            "on_transformed": on,
            "signature": tangential_signature(Mh, q) if on else None,
        })
    strict = all(r["on_transformed"] and r["signature"] == Signature(params.n, 0, 0) for r in rows)
    results = {
        "rho_hat": T.rho_hat,
        "clearing_degree": T.clearing_degree,
        "real": T.rho_hat.is_real(),
        "involution": projective_swap(T.rho_hat, T.d) == M.rho,
        "samples": rows,
        "all_strictly_pseudoconvex": strict,
    }
    inputs = {"n": params.n, "R": params.R, "seed": args.seed, "count": args.count}
    ok = strict and results["real"] and results["involution"] and len(pts) == args.count
    return make_report("transform", inputs, results, True), EXIT_OK if ok else EXIT_FAILED


# -- end-to-end reproduction -----------------------------------------------------

def _step(steps: list, name: str, fn):
    try:
        ok, detail = fn()
    except Exception as exc:  # a crashing step is a failing step
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    steps.append({"name": name, "status": "PASS" if ok else "FAIL", "detail": detail})
    return ok


def _oracle_detail(rep):
    lo, b = format_rational(rep.minimum_value), format_rational(rep.bound_checked)
    if rep.bound_checked <= 0:
        return False, f"certified bound {b} is not positive (grid minimum {lo})"
    rel = ">=" if rep.consistent else "<"
    return rep.consistent, f"min {lo} {rel} {b} over {rep.samples} points"


def cmd_verify_paper(args):
    params = family(args)
    n, R = params.n, params.R
    M = make_rho(params)
    origin = Point.origin(n)
    res = args.grid if args.grid is not None else default_resolution(n)
    steps: list = []
    m = n + 1
    state = {}

    def reality():
        return M.rho.is_real(), "rho == conj(rho)"

    def gradient():
        g = M.gradient_at(origin)
        want = [GaussianRational(0)] * n + [-(GaussianRational(0, 2).inverse())]
        return g == want, [str(x) for x in g]

    def derivs():
        vals = values_at(M, origin, 3)
        state["vals"] = vals
        ok = True
        for level in range(4):
            for I in multi_indices(n, level):
                v = vals[I]
                if level == 3 and max(I) == 3:
                    j = I.index(3)
                    want = [GaussianRational(0)] * m
                    want[j] = GaussianRational(6)
                    ok &= v == want
        return ok, "(L_j^3 rho_Z)(0) = 6 e_j"

    def others_vanish():
        vals = state.get("vals") or values_at(M, origin, 3)
        bad = [I for level in range(1, 4) for I in multi_indices(n, level)
               if not (level == 3 and max(I) == 3) and any(vals[I])]
        return not bad, f"nonzero at {bad}" if bad else "all other |I| <= 3 vanish"

    def rational_route():
        vals = state.get("vals") or values_at(M, origin, 3)
        for level in range(4):
            for I in multi_indices(n, level):
                exact = [f.evaluate(origin) for f in apply_multi(M, I)]
                if exact != vals[I]:
                    return False, f"routes disagree at {I}"
        return True, "rational-function route agrees with the jet route"

    def order():
        rep = nondegeneracy_order(M, origin, max(n + 3, 3))
        return rep.order == 3, f"order {rep.describe()}, witness {[list(I) for I in rep.witness]}"

    def origin_sig():
        sig = tangential_signature(M, origin)
        return sig == Signature(0, 0, n), f"{sig.as_tuple()}"

    def samples_sig():
        pts = sample_points_on_M(params, 20, seed=args.seed)
        state["pts"] = pts
        bad = [str(p) for p in pts if tangential_signature(M, p) != Signature(n, 0, 0)]
        return not bad, f"{len(pts)} points" if not bad else f"not strictly pseudoconvex at {bad[:3]}"

    def compact():
        rep = compactness_check(M)
        return rep.compact, rep.witness

    def smooth():
        rep = smoothness_check(params, samples=100, seed=args.seed)
        return rep.verdict == "certified", f"{rep.verdict}, {rep.samples_checked} sampled gradients"

    def threshold():
        cert = derived_R_threshold(n)
        state["cert"] = cert
        ok = cert.valid and R > cert.R0
        return ok, f"R0 = {format_rational(cert.R0)}, R = {format_rational(R)}, Levi bound 2R-6 = {format_rational(cert.levi_bound(R))}"

    def pos_oracle():
        cert = state.get("cert") or derived_R_threshold(n)
        rep = sphere_min_oracle(make_PR(params), GridSpec(res, n), cert.positivity_bound(R))
        return _oracle_detail(rep)

    def levi_oracle():
        cert = state.get("cert") or derived_R_threshold(n)
        rep = levi_min_eig_oracle(make_PR(params), GridSpec(res, n), cert.levi_bound(R))
        return _oracle_detail(rep)

    def transform():
        if not w_slice_is_trivial(params):
            return False, "cannot certify M meets {w = 0} only at 0"
        T = transform_to_infinity(M, params)
        Mh = T.hypersurface()
        pts = state.get("pts") or sample_points_on_M(params, 20, seed=args.seed)
        imgs = [projective_image(p) for p in pts]
        on = all(on_hypersurface(Mh, q) for q in imgs)
        strict = on and all(tangential_signature(Mh, q) == Signature(n, 0, 0) for q in imgs)
        inv = projective_swap(T.rho_hat, T.d) == M.rho
        ok = T.rho_hat.is_real() and on and strict and inv
        return ok, f"{len(imgs)} images on the transformed surface, strictly pseudoconvex: {strict}"

    def q_reality():
        Q = solve_graph(M.rho, 6)
        ok = back_substitute(M.rho, Q).is_zero() and reality_check(Q, 6)
        return ok, "Q(z, chi, Qbar(chi, z, w)) == w mod degree 7"

    _step(steps, "rho is real", reality)
    _step(steps, "gradient at 0 is (0,...,0,-1/(2i))", gradient)
    _step(steps, "third derivatives along L_j", derivs)
    _step(steps, "other derivatives vanish", others_vanish)
    _step(steps, "exact rational-function route agrees", rational_route)
    _step(steps, "nondegeneracy order is 3", order)
    _step(steps, "Levi form vanishes at 0", origin_sig)
    _step(steps, "strictly pseudoconvex at sample points", samples_sig)
    _step(steps, "compactness", compact)
    _step(steps, "smoothness", smooth)
    _step(steps, "positivity and plurisubharmonicity certificates", threshold)
    _step(steps, "sphere minimum oracle", pos_oracle)
    _step(steps, "Levi eigenvalue oracle", levi_oracle)
    _step(steps, "transform to infinity", transform)
    _step(steps, "reality condition of Q", q_reality)
    failed = [s["name"] for s in steps if s["status"] != "PASS"]
    results = {"steps": steps, "all_pass": not failed, "first_failure": failed[0] if failed else None}
    inputs = {"n": n, "R": R, "grid": res, "seed": args.seed}
    return make_report("verify-paper", inputs, results, False), EXIT_OK if not failed else EXIT_FAILED


# -- entry point ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crgeom", description="Exact CR geometry of real-algebraic hypersurfaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="format", action="store_const", const="json", help="JSON output (default)")
        fmt.add_argument("--text", dest="format", action="store_const", const="text", help="plain text output")
        p.set_defaults(format="json")
        p.add_argument("--n", type=int, default=1, help="number of z variables (default 1)")

    def expr(p):
        p.add_argument("expr", nargs="?", help="defining polynomial, e.g. '-Im(w) + |z1|^2'")
        p.add_argument("--file", help="read the polynomial from a file")

    p = sub.add_parser("analyze", help="signature and nondegeneracy order at a point")
    common(p)
    expr(p)
    p.add_argument("--point", help="comma-separated complex rationals (default: origin)")
    p.add_argument("--kmax", type=int, help="largest level tried (default n+3)")
    p.set_defaults(func=cmd_analyze)

    for name, func, helptext in (
        ("construct", cmd_construct, "build the quartic family and check its properties"),
        ("certify", cmd_certify, "sampled sphere oracles against the certificate bounds"),
        ("transform", cmd_transform, "send {w = 0} to infinity and sample the image"),
        ("verify-paper", cmd_verify_paper, "run every check on the quartic family"),
    ):
        p = sub.add_parser(name, help=helptext)
        common(p)
        p.add_argument("--R", default="10", help="rational R (default 10)")
        p.add_argument("--seed", type=int, default=0)
        if name in ("construct", "transform"):
            p.add_argument("--count", type=int, default=20 if name == "transform" else 5)
        if name in ("certify", "verify-paper"):
            p.add_argument("--grid", type=int, help="grid resolution (default 32 for n=1, 8 otherwise)")
        p.set_defaults(func=func)

    p = sub.add_parser("esstype", help="essential type at the origin")
    common(p)
    expr(p)
    p.add_argument("--degree", type=int, default=8)
    p.set_defaults(func=cmd_esstype)

    p = sub.add_parser("q-solve", help="solve rho = 0 for w as a jet")
    common(p)
    expr(p)
    p.add_argument("--degree", type=int, default=8)
    p.add_argument("--kmax", type=int)
    p.set_defaults(func=cmd_qsolve)

    p = sub.add_parser("mult", help="multiplicity of a holomorphic map germ at 0")
    common(p)
    p.add_argument("map", help="comma-separated components, e.g. 'z^2, w^3'")
    p.add_argument("--degree", type=int, default=8)
    p.set_defaults(func=cmd_mult)

    p = sub.add_parser("mapcheck", help="check that a map sends one hypersurface into another")
    common(p)
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--point", help="base point on the source (default: origin)")
    p.add_argument("--degree", type=int, default=8)
    p.set_defaults(func=cmd_mapcheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report, code = args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (NotSmoothError, NotOnHypersurfaceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    print(render(report, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
