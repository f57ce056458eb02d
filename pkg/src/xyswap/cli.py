"""Command-line front end.

Exit codes: 0 success, 1 verification or computation failure, 2 usage or
parse error, 3 the curve violates an assumption of the engine.
"""
from __future__ import annotations

import argparse
import json
import sys

from .curve import SpectralCurve, catalog, catalog_curve
from .errors import CurveError, IdentificationError, ParseError, XySwapError
from .graphs import enumerate_decorated, enumerate_plain, enumerate_trees
from .parser import parse_curve_function
from .recursion import CorrelatorTable

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CURVE = 0, 1, 2, 3
EULER_CAP = 4

SWAP_METHODS = ("graphs", "operator", "tree", "exp", "hand")
GRAPH_METHODS = ("decorated", "plain", "trees")
FREE_METHODS = ("cumulants", "moments")


class UsageError(Exception):
    pass


def _parser():
    p = argparse.ArgumentParser(prog="xyswap", description="Exact x-y swap computations on rational spectral curves.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, curve=True):
        if curve:
            sp.add_argument("--curve", help="catalog curve name")
            sp.add_argument("--x", help="x(z) expression")
            sp.add_argument("--y", help="y(z) expression")
        sp.add_argument("--out", choices=("text", "structured"), default="text")
        sp.add_argument("--cache", help="cache directory (overrides XYSWAP_CACHE_DIR)")
        sp.add_argument("--max-euler", type=int, default=EULER_CAP, dest="max_euler")
        sp.add_argument("--margin", type=int, default=0, help="extra truncation margin")

    sp = sub.add_parser("correlators", help="W_{g,n} by recursion")
    common(sp)
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)

    sp = sub.add_parser("swap", help="swapped correlators")
    common(sp)
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--method", choices=SWAP_METHODS, default="graphs")
    sp.add_argument("--terms", action="store_true", help="emit the per-graph term report")

    sp = sub.add_parser("graphs", help="enumerate graph sets")
    common(sp, curve=False)
    sp.add_argument("--g", type=int, default=0)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--method", choices=GRAPH_METHODS, default="decorated")

    sp = sub.add_parser("freeprob", help="moments from cumulants, or series from a curve")
    common(sp)
    sp.add_argument("--cumulants", help="cumulant input file (structured list)")
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--order", type=int)
    sp.add_argument("--method", choices=FREE_METHODS, help="with a curve: which series to expand")

    sp = sub.add_parser("verify", help="run the verification suite")
    common(sp, curve=False)
    sp.add_argument("--suite", action="append", choices=("airy", "two-sided", "graphs", "free"))

    sp = sub.add_parser("catalog", help="list catalog curves")
    sp.add_argument("--out", choices=("text", "structured"), default="text")
    return p


def _curve(args):
    if args.curve and (args.x or args.y):
        raise UsageError("give either --curve or --x/--y, not both")
    if args.curve:
        try:
            return catalog_curve(args.curve)
        except KeyError:
            raise UsageError(f"unknown curve {args.curve!r}; see 'catalog'") from None
    if not (args.x and args.y):
        raise UsageError("a curve is required: --curve NAME or --x EXPR --y EXPR")
    return SpectralCurve(parse_curve_function(args.x), parse_curve_function(args.y))


def _check_gn(args, unstable_ok=False):
    g, n = args.g, args.n
    if g < 0 or n < 1:
        raise UsageError("need --g >= 0 and --n >= 1")
    euler = 2 * g - 2 + n
    if euler <= 0 and not unstable_ok:
        raise UsageError("need 2g - 2 + n > 0")
    if args.max_euler < 0:
        raise UsageError("--max-euler must be nonnegative")
    if euler > args.max_euler:
        raise UsageError(f"2g - 2 + n = {euler} exceeds --max-euler {args.max_euler}")
    if args.margin < 0:
        raise UsageError("--margin must be nonnegative")


def _dump(obj):
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True)


def cmd_correlators(args):
    _check_gn(args, unstable_ok=True)
    table = CorrelatorTable(_curve(args), cache_dir=args.cache, margin=args.margin)
    if args.out == "structured":
        return _dump(table.to_structured(args.g, args.n)), EXIT_OK
    return table.get(args.g, args.n).render(), EXIT_OK


def cmd_swap(args):
    from . import swap

    _check_gn(args, unstable_ok=True)
    ctx = swap.SwapContext(CorrelatorTable(_curve(args), cache_dir=args.cache, margin=args.margin))
    g, n, method = args.g, args.n, args.method
    if args.terms and method != "graphs":
        raise UsageError("--terms is only available with --method graphs")
    report = None
    if method == "graphs":
        value, report = swap.swap_correlator(ctx, g, n)
    elif method == "operator":
        value = swap.swap_via_operator_series(ctx, g, n)
    elif method == "tree":
        if g != 0 or n < 3:
            raise UsageError("the tree form needs g = 0 and n >= 3")
        value = swap.swap_genus0_tree(ctx, n)
    elif method == "exp":
        if n != 1:
            raise UsageError("the exponential form needs n = 1")
        value = swap.swap_n1_exponential(ctx, g)
    else:
        if (g, n) not in ((1, 1), (1, 2), (2, 1)):
            raise UsageError("hand-coded formulas exist for (1,1), (1,2), (2,1)")
        value = swap.hand_coded_reference(ctx, (g, n))
    if args.out == "structured":
        data = {"g": g, "n": n, "method": method, "value": value.to_structured()}
        if args.terms and report is not None:
            data["terms"] = report.to_structured()
        return _dump(data), EXIT_OK
    lines = []
    if args.terms and report is not None:
        for e in report.entries:
            lines.append(f"{e.graph.render()} :: {e.contribution.render()}")
        for shadow, sub in report.groups.items():
            lines.append(f"group {shadow.render()} :: {sub.render()}")
        lines.append(f"total :: {report.total.render()}")
    else:
        lines.append(value.render())
    return "\n".join(lines), EXIT_OK


def cmd_graphs(args):
    n, g = args.n, args.g
    if n < 1 or g < 0:
        raise UsageError("need --n >= 1 and --g >= 0")
    if args.method == "decorated":
        if 2 * g - 2 + n <= 0:
            raise UsageError("need 2g - 2 + n > 0")
        if 2 * g - 2 + n > args.max_euler:
            raise UsageError(f"2g - 2 + n exceeds --max-euler {args.max_euler}")
        graphs = enumerate_decorated(n, g)
    elif args.method == "plain":
        if args.max_euler > 8:
            raise UsageError("plain enumeration is limited to --max-euler 8")
        graphs = enumerate_plain(n, args.max_euler)
    else:
        graphs = enumerate_trees(n)
    if args.out == "structured":
        if args.method == "decorated":
            return _dump([gr.to_structured() for gr in graphs]), EXIT_OK
        return _dump([{"n": gr.n, "blacks": [list(b) for b in gr.blacks]} for gr in graphs]), EXIT_OK
    return "\n".join([f"{len(graphs)} graphs"] + [gr.render() for gr in graphs]), EXIT_OK


def cmd_freeprob(args):
    from . import free

    _check_gn(args, unstable_ok=True)
    order = args.order if args.order is not None else free.default_order(args.n)
    if order < 0:
        raise UsageError("--order must be nonnegative")
    if args.cumulants:
        if args.curve or args.x or args.y:
            raise UsageError("give either --cumulants or a curve, not both")
        try:
            C = free.CumulantSeries.load(args.cumulants)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"cannot read cumulant file: {exc}") from None
        if (args.g, args.n) == (0, 1):
            series = free.solve_first_order(C.get(0, 1), order)
        else:
            series = free.moments_from_cumulants(C, args.g, args.n, order)
        label = "M"
    else:
        direction = args.method or "moments"
        table = CorrelatorTable(_curve(args), cache_dir=args.cache)
        result = free.identify_with_swap(table, direction, entries=((args.g, args.n),), order=order)
        series = result.entries[(args.g, args.n)]
        label = "M" if direction == "moments" else "C"
    if args.out == "structured":
        return _dump({"g": args.g, "n": args.n, "series": label, "precision": series.prec,
                      "coefficients": series.to_structured()}), EXIT_OK
    lines = [f"{label}_({args.g},{args.n}) to total degree {series.prec}"]
    for k, c in series.to_structured():
        lines.append(f"{k} {c}")
    return "\n".join(lines), EXIT_OK


def cmd_verify(args):
    from .verify import run_verify

    checks = run_verify(args.suite, cache_dir=args.cache)
    failed = sum(not c.ok for c in checks)
    if args.out == "structured":
        text = _dump({"checks": [c.to_structured() for c in checks], "failed": failed})
    else:
        text = "\n".join([c.line() for c in checks] + [f"{len(checks) - failed}/{len(checks)} checks passed"])
    return text, EXIT_FAIL if failed else EXIT_OK


def cmd_catalog(args):
    entries = catalog()
    if args.out == "structured":
        return _dump({name: {"x": c.x.render(), "y": c.y.render()} for name, c in entries.items()}), EXIT_OK
    return "\n".join(f"{name}: x = {c.x.render()}, y = {c.y.render()}" for name, c in entries.items()), EXIT_OK


COMMANDS = {
    "correlators": cmd_correlators,
    "swap": cmd_swap,
    "graphs": cmd_graphs,
    "freeprob": cmd_freeprob,
    "verify": cmd_verify,
    "catalog": cmd_catalog,
}


def run(argv=None):
    """Returns (stdout text, stderr text, exit code)."""
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return "", "", int(exc.code or 0)
    try:
        out, code = COMMANDS[args.command](args)
        return out + "\n", "", code
    except (UsageError, ParseError) as exc:
        return "", f"error: {exc}\n", EXIT_USAGE
    except (CurveError, IdentificationError) as exc:
        return "", f"curve error: {exc}\n", EXIT_CURVE
    except XySwapError as exc:
        return "", f"computation error: {exc}\n", EXIT_FAIL


def main(argv=None):
    out, err, code = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
