"""Command-line front end.

Every subcommand parses arguments, calls one library function and renders
the resulting mapping with :func:`abelfm.report.render`.  Exit codes:

* 0  success, or a search with a nonempty feasible set
* 2  usage error (bad flags, unparsable expression, empty bounds)
* 3  search infeasible within bounds
* 4  verification failure
"""
from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone
from fractions import Fraction

from . import chern, fm, lattice, search, stability, verify
from .report import FORMATS, render
from .ring import (BUILTIN_NAMES, ModelError, ParseError, builtin_model, dump_model, format_class,
                   format_rational, load_models, model_violations)

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_VERIFY = 0, 2, 3, 4

# options whose value may start with "-" (negative numbers, leading minus in expressions)
_SIGNED_VALUE_FLAGS = {
    "--a-range", "--b-range", "--chi-range", "--twist-range", "--class", "--c1", "--c2t",
    "--a", "--mu", "--l", "--k",
}


class UsageError(Exception):
    pass


def _range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None


def _twist_range(text: str):
    try:
        x, y = text.split(",")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi,lo:hi, got {text!r}") from None
    return _range(x), _range(y)


def _degrees(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(d) for d in text.split(",") if d.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _rational(text: str):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational p or p/q, got {text!r}") from None


# ---------------------------------------------------------------------------
# subcommands; each returns (mapping, exit code)

def cmd_models(args, models):
    out = {}
    for name in BUILTIN_NAMES:
        if name not in models:
            out[name] = _model_mapping(builtin_model(name), "built-in")
    for name, m in models.items():
        out[name] = _model_mapping(m, "file")
    return out, EXIT_OK


def _model_mapping(m, source):
    problems = model_violations(m)
    return {
        "source": source,
        "top_degree": m.top_degree,
        "basis": [f"{b.label} {b.degree}" for b in m.basis],
        "products": [ln[4:] for ln in dump_model(m).splitlines() if ln.startswith("mul ")],
        "status": "valid" if not problems else "invalid",
        "violations": problems,
    }


def cmd_verify(args, models):
    try:
        suites = verify.run(args.suite, models)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    out = {s.name: s.as_mapping() for s in suites}
    failed = [s for s in suites if not s.passed]
    summary = {"suites": len(suites), "failed": len(failed)}
    if failed:
        summary["first_failure"] = f"{failed[0].name}: {failed[0].first_failure.name}"
    out["summary"] = summary
    return out, EXIT_VERIFY if failed else EXIT_OK


def cmd_fm_apply(args, models):
    sp = fm.builtin_sP_inverse() if args.inverse else fm.builtin_sP()
    x = sp.source.parse(args.cls)
    y = sp(x)
    return {
        "transform": "s_P^-1" if args.inverse else "s_P",
        "input": format_class(x),
        "image": format_class(y),
    }, EXIT_OK


def cmd_fm_verify(args, models):
    args.suite = "fm-matrix"
    return cmd_verify(args, models)


def cmd_chern_ci(args, models):
    ci = chern.ci_tangent_chern(args.ambient, args.degrees)
    return {
        "ambient": f"P{args.ambient}",
        "degrees": ",".join(map(str, args.degrees)),
        "dimension": ci.dimension,
        "degree": ci.degree,
        "c1": f"{format_rational(ci.c1)}h",
        "c2": f"{format_rational(ci.c2)}h^2",
        "c3": f"{format_rational(ci.c3)}h^3",
        "integral_c3": format_rational(ci.euler_characteristic),
    }, EXIT_OK


def cmd_chern_table(args, models):
    rows = {}
    for s in chern.basis_sheaves():
        rows[s.name] = {
            "ch": format_class(s.ch),
            "ch_S_Q": format_class(s.sq_image),
            "ch_S_P": format_class(fm.apply_fm(s.ch)),
            "status": "verified" if s.verified else "expected",
        }
    return rows, EXIT_OK


def cmd_search(args, models):
    W = builtin_model("Vdual")
    a_range = args.a_range or (args.rank, args.rank)
    tx, ty = args.twist_range if args.twist_range else (None, None)
    bounds = search.SearchBounds(a_range, args.b_range, args.chi_range, tx, ty)
    k = search.HeteroticConstraints(
        rank=args.rank,
        c1_target=W.parse(args.c1) if args.c1 is not None else None,
        c3_target=args.c3,
        c2_tangent=W.parse(args.c2t) if args.c2t is not None else None,
        anomaly_mode=args.anomaly,
        strict_cone=not args.closed_cone,
    )
    report = search.enumerate_candidates(bounds, k, workers=args.workers)
    return report.as_mapping(), EXIT_INFEASIBLE if report.infeasible else EXIT_OK


def cmd_stability_ample(args, models):
    D = stability.PolarizationChoice(args.l, args.k)
    res = stability.is_ample(D)
    return {
        "divisor": format_class(D.divisor()),
        "ample": "yes" if res.ample else "no",
        "degrees": {f"D.{lab}": format_rational(v) for lab, v in res.values.items()},
        "witness": res.witness or "none",
    }, EXIT_OK


def cmd_stability_threshold(args, models):
    k = stability.stability_threshold(args.a, args.mu, args.rank)
    return {
        "a": format_rational(args.a),
        "mu": format_rational(args.mu),
        "rank": args.rank,
        "k": k,
    }, EXIT_OK


def _triple(u):
    return " ".join(str(v) for v in u)


def cmd_lattice_cone(args, models):
    gens = lattice.cone_generators(args.height)
    return {"height": args.height, "count": len(gens), "generators": [_triple(u) for u in gens]}, EXIT_OK


def cmd_lattice_orbit(args, models):
    r = lattice.orbit_transitivity(args.height)
    return {
        "height": r.height,
        "targets": len(r.targets),
        "reached": len(r.reached),
        "missed": [_triple(u) for u in r.missed],
        "explored": r.explored,
        "status": "transitive" if r.ok else "incomplete",
    }, EXIT_OK if r.ok else EXIT_VERIFY


def cmd_lattice_schwarz(args, models):
    r = lattice.reverse_schwarz_check(args.height)
    return {
        "height": r.height,
        "classes": r.classes,
        "pairs": r.pairs,
        "violations": [f"{_triple(d)} | {_triple(h)}" for d, h in r.violations],
        "status": "holds" if r.ok else "violated",
    }, EXIT_OK if r.ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS,
                        help="output format (default: text)")
    common.add_argument("--model-file", default=argparse.SUPPRESS,
                        help="ring models in the text format; they override built-ins by name")
    common.add_argument("--timestamp", action="store_true", default=argparse.SUPPRESS,
                        help="append a UTC timestamp (off by default so output is reproducible)")
    common.add_argument("--workers", type=int, default=argparse.SUPPRESS,
                        help="worker processes for enumeration (default: 1)")

    p = argparse.ArgumentParser(prog="abelfm", parents=[common],
                                description="Exact cohomology calculus on V, its dual and E x E.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    s = sub.add_parser("models", parents=[common], help="list ring models")
    s.set_defaults(func=cmd_models)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite", help=f"one of: all, {', '.join(verify.SUITES)}")
    s.set_defaults(func=cmd_verify)

    fm_p = sub.add_parser("fm", parents=[common], help="the Fourier-Mukai matrix")
    fm_sub = fm_p.add_subparsers(dest="fm_command", required=True, metavar="ACTION")
    s = fm_sub.add_parser("apply", parents=[common], help="apply s_P (or its inverse) to a class")
    s.add_argument("--inverse", action="store_true")
    s.add_argument("--class", dest="cls", required=True, help='e.g. "[V] + [H] + 8[e]"')
    s.set_defaults(func=cmd_fm_apply)
    s = fm_sub.add_parser("verify", parents=[common], help="reconstruction and inversion checks")
    s.set_defaults(func=cmd_fm_verify)

    ch_p = sub.add_parser("chern", parents=[common], help="Chern class tools")
    ch_sub = ch_p.add_subparsers(dest="chern_command", required=True, metavar="ACTION")
    s = ch_sub.add_parser("ci", parents=[common], help="tangent Chern classes of a complete intersection")
    s.add_argument("--ambient", type=int, required=True)
    s.add_argument("--degrees", type=_degrees, required=True)
    s.set_defaults(func=cmd_chern_ci)
    s = ch_sub.add_parser("table", parents=[common], help="characters of the six basis sheaves")
    s.set_defaults(func=cmd_chern_table)

    s = sub.add_parser("search", parents=[common], help="bounded spectral-data search")
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--c3", type=_rational, required=True)
    s.add_argument("--c1", default=None, help="target c1 on V^ (default 0)")
    s.add_argument("--c2t", default=None, help="c2 of the tangent bundle of V^ (default e^ + 8E^)")
    s.add_argument("--a-range", type=_range, default=None, help="default rank:rank")
    s.add_argument("--b-range", type=_range, default=(0, 64))
    s.add_argument("--chi-range", type=_range, default=(-64, 64))
    s.add_argument("--twist-range", type=_twist_range, default=None, help="lo:hi,lo:hi for x H^ + y A^")
    s.add_argument("--anomaly", choices=search.ANOMALY_MODES, default="require_effective")
    s.add_argument("--closed-cone", action="store_true", help="admit boundary classes in the anomaly check")
    s.set_defaults(func=cmd_search)

    st_p = sub.add_parser("stability", parents=[common], help="ampleness and stability thresholds")
    st_sub = st_p.add_subparsers(dest="stability_command", required=True, metavar="ACTION")
    s = st_sub.add_parser("ample", parents=[common], help="Kleiman test for l H^ + k A^")
    s.add_argument("--l", type=_rational, required=True)
    s.add_argument("--k", type=_rational, required=True)
    s.set_defaults(func=cmd_stability_ample)
    s = st_sub.add_parser("threshold", parents=[common], help="least k making the bound strict")
    s.add_argument("--a", type=_rational, required=True)
    s.add_argument("--mu", type=_rational, required=True)
    s.add_argument("--rank", type=int, required=True)
    s.set_defaults(func=cmd_stability_threshold)

    la_p = sub.add_parser("lattice", parents=[common], help="NS(E x E) tools")
    la_sub = la_p.add_subparsers(dest="lattice_command", required=True, metavar="ACTION")
    for name, fn in (("cone", cmd_lattice_cone), ("orbit", cmd_lattice_orbit),
                     ("schwarz", cmd_lattice_schwarz)):
        s = la_sub.add_parser(name, parents=[common])
        s.add_argument("--height", type=int, required=True)
        s.set_defaults(func=fn)
    return p


def _glue_signed_values(argv: list[str]) -> list[str]:
    """Rewrite ``--flag -3:5`` as ``--flag=-3:5`` so argparse accepts it."""
    out = []
    it = iter(range(len(argv)))
    for i in it:
        tok = argv[i]
        if tok in _SIGNED_VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            next(it, None)
        else:
            out.append(tok)
    return out


def main(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = _glue_signed_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fmt = getattr(args, "format", "text")
    args.workers = getattr(args, "workers", 1)
    models = {}
    try:
        if getattr(args, "model_file", None):
            models = {m.name: m for m in load_models(args.model_file)}
        mapping, code = args.func(args, models)
    except (UsageError, ParseError, ModelError, search.EmptyBoundsError, OSError) as exc:
        print(f"abelfm: error: {exc}", file=stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"abelfm: error: {exc}", file=stderr)
        return EXIT_USAGE
    if getattr(args, "timestamp", False):
        mapping = dict(mapping, timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"))
    stdout.write(render(mapping, fmt))
    if code == EXIT_VERIFY and "summary" in mapping:
        print(f"abelfm: verification failed: {mapping['summary']['first_failure']}", file=stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
