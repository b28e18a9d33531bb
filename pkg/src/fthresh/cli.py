"""Command-line interface.

Exit codes: 0 success, 1 a check suite reported failures, 2 usage or
precondition errors, 3 resource limits.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import properties
from .algebra import Polynomial, check_prime, parse_poly, parse_poly_list, sth_root, weierstrass_prepare
from .classify import classify_minimal
from .errors import FthreshError, NoRoot, ParseError
from .frobenius import (MonomialIdeal, fmt_rational, ft_bracket, ft_lower_sequence, is_power_of,
                        log_p, monomial_member, nu_ideal, nu_sequence)
from .regions import (Exact, HTuple, LambdaBranch, LatticePoint, canonicalize, critical_point_below,
                      enumerate_critical, ft_via_critical_point, in_upper_region, is_critical)


class UsageError(FthreshError):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


# -- argument helpers ----------------------------------------------------------------


def _need(args, name: str):
    value = getattr(args, name.replace("-", "_"))
    if value is None:
        raise UsageError(f"--{name} is required for '{args.command}'")
    return value


def _vars(args) -> tuple:
    return tuple(v.strip() for v in _need(args, "vars").split(",") if v.strip())


def _poly_inputs(args) -> list:
    """Polynomials given by --f (comma list) or --factors "poly:mult,..."."""
    p, vars = args.p, _vars(args)
    if args.f is not None and args.factors is not None:
        raise UsageError("--f and --factors are mutually exclusive")
    if args.factors is not None:
        f = Polynomial.constant(p, vars, 1)
        for item in args.factors.split(","):
            poly, sep, mult = item.rpartition(":")
            if not sep:
                poly, mult = item, "1"
            try:
                k = int(mult)
            except ValueError:
                raise UsageError(f"--factors: bad multiplicity {mult!r}") from None
            f = f * parse_poly(poly, p, vars) ** k
        return [f]
    return parse_poly_list(_need(args, "f"), p, vars)


def _single_poly(args) -> Polynomial:
    polys = _poly_inputs(args)
    if len(polys) != 1:
        raise UsageError(f"'{args.command}' takes a single polynomial")
    return polys[0]


def _ideal(args) -> MonomialIdeal:
    vars = _vars(args)
    if args.b is None:
        return MonomialIdeal.maximal(vars)
    return MonomialIdeal.parse(args.b, args.p, vars)


def _htuple(args) -> HTuple:
    return HTuple.parse(args.p, _need(args, "ell"), _need(args, "gs"))


def _point(args, ht: HTuple) -> LatticePoint:
    pt = LatticePoint.parse(_need(args, "point"), args.p)
    if len(pt.a) != ht.r:
        raise UsageError(f"--point has {len(pt.a)} coordinates but --gs has {ht.r}")
    return pt


def _nat_list(text: str, flag: str) -> tuple:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--{flag}: expected a comma-separated list of naturals") from None


def _level(args, default=None) -> int:
    """The exponent e from --e or --q."""
    if args.e is not None:
        return args.e
    if args.q is not None:
        if not is_power_of(args.q, args.p):
            raise UsageError(f"--q {args.q} is not a power of p={args.p}")
        return log_p(args.q, args.p)
    if default is not None:
        return default
    raise UsageError(f"--e (or --q) is required for '{args.command}'")


def _point_report(ht: HTuple, pt: LatticePoint) -> dict:
    can = canonicalize(pt, ht.p)
    upper = in_upper_region(ht, can)
    out = can.to_json(ht.p)
    out["norm"] = fmt_rational(can.norm(ht.p))
    out["region"] = "U" if upper else "L"
    out["critical"] = is_critical(ht, can) if upper else False
    return out


# -- subcommands -------------------------------------------------------------------------


def cmd_nu(args) -> dict:
    polys = _poly_inputs(args)
    b = _ideal(args)
    e = _level(args)
    nu = nu_sequence(polys[0], b, e)[-1] if len(polys) == 1 else nu_ideal(polys, b, e)
    return {"nu": nu, "q": args.p**e}


def cmd_bracket(args) -> dict:
    polys = _poly_inputs(args)
    b = _ideal(args)
    e = args.e_max if args.e_max is not None else _level(args)
    if len(polys) == 1:
        br = ft_bracket(polys[0], b, e)
        return {"bracket": br.to_json(), "e": e, "nu": br.nu, "q": br.q,
                "history": list(br.history), "certified": True}
    seq = ft_lower_sequence(polys, b, e)
    return {"lower": [fmt_rational(v) for v in seq.values], "nu": list(seq.nus), "e": e,
            "extrapolation": fmt_rational(seq.extrapolation), "certified": False}


def cmd_region(args) -> dict:
    ht = _htuple(args)
    pt = _point(args, ht)
    out = _point_report(ht, pt)
    if out["region"] == "U":
        out["below"] = critical_point_below(ht, pt).to_json(ht.p)
    return out


def cmd_critical(args) -> dict:
    ht = _htuple(args)
    return {"critical": is_critical(ht, canonicalize(_point(args, ht), ht.p))}


def cmd_enumerate(args) -> dict:
    ht = _htuple(args)
    bound = Fraction(args.norm_bound) if args.norm_bound is not None else Fraction(2)
    e_max = _need(args, "e-max")
    points = enumerate_critical(ht, e_max, bound)
    items = []
    for pt in points:
        item = pt.to_json(ht.p)
        item["norm"] = fmt_rational(pt.norm(ht.p))
        item["region"] = "U"
        item["critical"] = True
        items.append(item)
    return {"count": len(items), "points": items, "e_max": e_max, "norm_bound": fmt_rational(bound)}


def cmd_ft_critical(args) -> dict:
    ht = _htuple(args)
    t = _nat_list(_need(args, "t"), "t")
    e_max = args.e_max if args.e_max is not None else 8
    res = ft_via_critical_point(ht, t, e_max)
    out = {"result": res.kind, "lambda": fmt_rational(res.lam)}
    if isinstance(res, Exact):
        out["mu"] = fmt_rational(res.mu)
        out["certificate"] = res.certificate.to_json(ht.p)
    elif isinstance(res, LambdaBranch):
        out["at_e"] = res.e
    out["bracket"] = res.bracket.to_json()
    out["e"] = res.bracket.e
    return out


def cmd_root(args) -> dict:
    f = _single_poly(args)
    s = _need(args, "s")
    precision = args.precision if args.precision is not None else f.degree() // s + 8
    try:
        root = sth_root(f, s, precision)
    except NoRoot as exc:
        return {"root": False, "reason": str(exc)}
    return {"root": True, "c": str(root.c), "g": str(root.g), "s": s, "exact": root.exact,
            "valid_degree": root.valid_degree}


def cmd_weierstrass(args) -> dict:
    f = _single_poly(args)
    if len(f.vars) != 2:
        raise UsageError("--vars must name two variables (x, then the distinguished y)")
    N = args.precision if args.precision is not None else 12
    M = args.y_degree if args.y_degree is not None else 12
    u, P = weierstrass_prepare(f, N, M)
    d = max(e[1] for e in P.terms)
    return {"u": str(u), "P": str(P), "d": d, "N": N, "M": M}


def cmd_classify(args) -> dict:
    f = _single_poly(args)
    e_max = args.e_max if args.e_max is not None else 10
    return classify_minimal(f, e_max).to_json()


# -- reproduction suites ------------------------------------------------------------------


def paper_examples() -> list:
    items = []

    def item(name, ok, detail=""):
        items.append({"name": name, "pass": bool(ok), "detail": detail})

    vars = ("x", "y")
    m = MonomialIdeal.maximal(vars)
    f = parse_poly("y+x", 2, vars) * parse_poly("y+x^2", 2, vars) ** 2 * parse_poly("y+x^4", 2, vars)
    nus = nu_sequence(f, m, 4)
    item("nu(16) = 6 for (y+x)(y+x^2)^2(y+x^4)", nus[4] == 6, f"nu(16) = {nus[4]}")
    item("f^7 in m^[16]", monomial_member(f**7, m.bracket(16)))
    start = time.perf_counter()
    br = ft_bracket(f, m, 14)
    item("bracket at e = 14 contains 3/7", br.contains(Fraction(3, 7)) and br.width == Fraction(1, 2**14),
         f"({br.to_json()[0]}, {br.to_json()[1]}] in {time.perf_counter() - start:.2f}s")
    ht = HTuple.parse(2, 1, "x,x^2,x^4")
    for text in ("8,16,8/16", "6,13,7/16", "4,14,6/16"):
        pt = LatticePoint.parse(text, 2)
        ok = is_critical(ht, pt)
        detail = ""
        if not ok:
            detail = f"a smaller point of U is {critical_point_below(ht, pt).format(2)}"
        item(f"({text}) is critical", ok, detail)
    res = ft_via_critical_point(ht, (1, 2, 1), 8)
    item("t = (1,2,1) takes the lambda branch with lambda = 5/16",
         isinstance(res, LambdaBranch) and res.lam == Fraction(5, 16), f"{res.kind}, lambda = {res.lam}")
    g = parse_poly("x^4+y^5", 2, vars)
    br = ft_bracket(g, m, 2)
    item("x^4 + y^5 at p = 2: nu(4) = 0, bracket (0, 1/4]", br.nu == 0 and br.hi == Fraction(1, 4))
    for p in (2, 3):
        for e in (1, 2, 3):
            q = p**e
            h = parse_poly(f"x^{q}+y^{q + 1}", p, vars)
            v = classify_minimal(h)
            ok = v.d == q and v.minimal and v.ft == Fraction(1, q) and ft_bracket(h, m, e).nu == 0
            item(f"x^{q} + y^{q + 1} over F_{p} has ft = 1/{q}", ok, f"minimal={v.minimal}")
    return items


def cmd_paper_examples(args):
    items = paper_examples()
    failed = sum(not it["pass"] for it in items)
    report = {"items": items, "passed": len(items) - failed, "failed": failed}
    return report, (1 if failed else 0)


def cmd_selftest(args):
    seed = args.seed if args.seed is not None else 0
    suites = []
    for name, suite in properties.SUITES.items():
        start = time.perf_counter()
        res = suite(seed)
        suites.append({"name": name, "pass": res.ok, "cases": res.cases, "failures": len(res.failures),
                       "seconds": round(time.perf_counter() - start, 2)})
    failed = sum(not s["pass"] for s in suites)
    return {"seed": seed, "suites": suites, "failed": failed}, (1 if failed else 0)


COMMANDS = {
    "nu": cmd_nu,
    "bracket": cmd_bracket,
    "region": cmd_region,
    "critical": cmd_critical,
    "enumerate": cmd_enumerate,
    "ft-critical": cmd_ft_critical,
    "root": cmd_root,
    "weierstrass": cmd_weierstrass,
    "classify": cmd_classify,
    "paper-examples": cmd_paper_examples,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fthresh", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--p", type=int, default=2, help="prime characteristic (default 2)")
    parser.add_argument("--vars", default="x,y", help="comma-separated variables (default x,y)")
    parser.add_argument("--f", help="polynomial, or comma-separated generators")
    parser.add_argument("--factors", help='factored input "poly:mult,..."')
    parser.add_argument("--b", help="monomial ideal generators (default: the maximal ideal)")
    parser.add_argument("--ell", type=int)
    parser.add_argument("--gs", help="the g_i as polynomials in x")
    parser.add_argument("--t", help="exponent vector t")
    parser.add_argument("--point", help='lattice point "a1,..,ar/q"')
    parser.add_argument("--e", type=int)
    parser.add_argument("--e-max", type=int)
    parser.add_argument("--q", type=int)
    parser.add_argument("--s", type=int)
    parser.add_argument("--norm-bound")
    parser.add_argument("--precision", type=int, help="root degree bound or Weierstrass x-precision")
    parser.add_argument("--y-degree", type=int, help="Weierstrass y-degree bound")
    parser.add_argument("--json", action="store_true")
    parser.add_argument("--seed", type=int)
    return parser


def _plain(obj, indent="") -> str:
    lines = []
    for key, value in obj.items():
        if isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{indent}{key}:")
            for v in value:
                lines.append(f"{indent}  - " + ", ".join(f"{k}={_scalar(x)}" for k, x in v.items()))
        elif isinstance(value, dict):
            lines.append(f"{indent}{key}: " + ", ".join(f"{k}={_scalar(x)}" for k, x in value.items()))
        else:
            lines.append(f"{indent}{key}: {_scalar(value)}")
    return "\n".join(lines)


def _scalar(value) -> str:
    if isinstance(value, list):
        return "[" + ", ".join(_scalar(v) for v in value) + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _suite_plain(report: dict) -> str:
    rows = report.get("items") or report.get("suites")
    lines = []
    for row in rows:
        status = "PASS" if row["pass"] else "FAIL"
        extra = row.get("detail") or (f"{row['cases']} cases, {row['seconds']}s" if "cases" in row else "")
        lines.append(f"{status}  {row['name']}" + (f"  ({extra})" if extra else ""))
    failed = report["failed"]
    lines.append(f"{len(rows) - failed} passed, {failed} failed")
    return "\n".join(lines)


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        check_prime(args.p)
        result = COMMANDS[args.command](args)
        code = 0
        if isinstance(result, tuple):
            result, code = result
    except FthreshError as exc:
        print(f"fthresh {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.json:
        print(dumps(result), file=out)
    elif args.command in ("paper-examples", "selftest"):
        print(_suite_plain(result), file=out)
    else:
        print(_plain(result), file=out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
