"""``nullflat`` command line: generate, invert, roundtrip, plan, verify.

Exit codes: 0 success, 1 invalid input (or failed check), 2 mathematical
degeneracy. Errors are reported on stderr as a JSON object with at least
``code`` and ``message``; degeneracies also carry ``tau``.
"""

import argparse
import re
import sys

import numpy as np

from .errors import MathDegeneracy, NullFlatError, ValidationError
from .flat import FlatInputR21, FlatInputR22, invert_curve
from .serialization import curve_to_dict, dumps, load_curve, save_curve, write_text

_NEGATIVE_VALUE = re.compile(r"^-[\d.]")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _floats(text, what, count=None):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise ValidationError(f"{what} must be comma-separated numbers, got {text!r}", field=what) from None
    if count is not None and len(vals) != count:
        raise ValidationError(f"{what} needs {count} numbers, got {len(vals)}", field=what)
    return vals


def _add_input_flags(p):
    p.add_argument("--space", required=True, choices=["r21", "r2n", "r22"])
    p.add_argument("--f", required=True, help="flat output f, e.g. 'poly:0,0,0,1'")
    p.add_argument("--g", help="second flat output (r22 only)")
    p.add_argument("--sigma", help="reparametrization tau -> s (optional)")
    p.add_argument("--extra", action="append", default=[],
                   help="extra coordinate x4.. (r2n; repeat once per coordinate)")
    p.add_argument("--n", type=int, help="target R^{2,n}; defaults to 1 + number of --extra")
    p.add_argument("--grid", default="0,1,11", help="t0,t1,count (default 0,1,11)")
    p.add_argument("--order", type=int, help="jet order K (default NULLFLAT_JET_ORDER or 5)")


def build_parser():
    parser = _Parser(prog="nullflat", description="Flat parametrizations of null curves in R^{2,n}.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("generate", help="sample a null curve from flat outputs")
    _add_input_flags(p)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default="-")

    p = sub.add_parser("invert", help="recover flat outputs from a sampled curve (JSON)")
    p.add_argument("--in", dest="inp", required=True, help="SampledCurve JSON file")
    p.add_argument("--eps-den", type=float, help="degeneracy threshold (default NULLFLAT_EPS_DEN or 1e-8)")
    p.add_argument("--orientation", type=float, choices=[1.0, -1.0], default=1.0,
                   help="sign of the length element for r2n curves")
    p.add_argument("--skip-degenerate", action="store_true",
                   help="emit null for degenerate samples instead of failing")
    p.add_argument("--out", default="-")

    p = sub.add_parser("roundtrip", help="generate, invert and compare with the inputs")
    _add_input_flags(p)
    p.add_argument("--eps-den", type=float)
    p.add_argument("--out", default="-")

    p = sub.add_parser("plan", help="connect two points by a null curve")
    p.add_argument("--space", required=True, choices=["r21", "r22"])
    p.add_argument("--from", dest="start", required=True, help="comma-separated start point")
    p.add_argument("--to", dest="end", required=True, help="comma-separated end point")
    p.add_argument("--interval", default="0,1")
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default="-")

    p = sub.add_parser("verify", help="run the built-in property suites")
    p.add_argument("--suite", default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    return parser


def _flat_input(args):
    if args.space == "r22":
        if args.extra:
            raise ValidationError("--extra is not used in r22", field="extra")
        if args.g is None:
            raise ValidationError("r22 needs --g", field="g")
        return FlatInputR22(args.f, args.g, sigma=args.sigma)
    if args.g is not None:
        raise ValidationError("--g is only used in r22", field="g")
    n = args.n
    if args.space == "r21":
        if args.extra or (n not in (None, 1)):
            raise ValidationError("r21 takes no --extra and n = 1", field="n")
        n = 1
    elif (n or len(args.extra) + 1) < 2:
        raise ValidationError("r2n needs n >= 2 (give --extra)", field="n")
    return FlatInputR21(args.f, sigma=args.sigma, delta_extras=tuple(args.extra), n=n)


def _cmd_generate(args):
    from .flat import generate
    curve = generate(_flat_input(args), args.grid, order=args.order)
    save_curve(curve, args.out, args.format)
    return 0


def _cmd_invert(args):
    curve = load_curve(args.inp)
    mode = "nan" if args.skip_degenerate else "raise"
    res = invert_curve(curve, eps_den=args.eps_den, orientation=args.orientation, on_degenerate=mode)

    def val(a, i):
        if a is None:
            return None
        v = float(np.atleast_1d(a)[i])
        return v if np.isfinite(v) else None

    rows = [{"tau": float(t), "tau_hat": val(res.tau_hat, i), "f_hat": val(res.f_hat, i),
             "g_hat": val(res.g_hat, i)} for i, t in enumerate(curve.tau)]
    write_text(dumps({"space": curve.space, "n": curve.n, "samples": rows}) + "\n", args.out)
    return 0


def _cmd_roundtrip(args):
    from .verification import roundtrip_report
    from .flat import parse_grid
    inp = _flat_input(args)
    parse_grid(args.grid)
    rep = roundtrip_report(inp, args.grid, eps_den=args.eps_den, order=args.order)
    write_text(dumps(rep.to_dict()) + "\n", args.out)
    return 0 if rep.passed else 1


def _cmd_plan(args):
    from .planner import BoundaryProblem, plan
    m = 3 if args.space == "r21" else 4
    problem = BoundaryProblem(
        args.space,
        _floats(args.start, "from", m),
        _floats(args.end, "to", m),
        tuple(_floats(args.interval, "interval", 2)),
    )
    if args.samples < 2:
        raise ValidationError("--samples must be >= 2", field="samples")
    result = plan(problem, samples=args.samples)
    if args.format == "csv":
        save_curve(result.curve, args.out, "csv")
        return 0
    doc = {
        "space": args.space,
        "interval": list(problem.interval),
        "from": list(problem.A),
        "to": list(problem.B),
        "f": result.f.text(),
        "g": None if result.g is None else result.g.text(),
        "shift": [float(c) for c in result.shift],
        "endpoint_errors": list(result.endpoint_errors),
        "curve": curve_to_dict(result.curve),
    }
    write_text(dumps(doc) + "\n", args.out)
    return 0


def _cmd_verify(args):
    from .verification import SUITES, run_suite
    if args.suite != "all" and args.suite not in SUITES:
        raise ValidationError(f"unknown suite {args.suite!r}; choose all or {', '.join(SUITES)}", field="suite")
    report = run_suite(args.suite, args.seed)
    write_text(dumps(report) + "\n", args.out)
    return 0 if report["failed"] == 0 else 1


_COMMANDS = {
    "generate": _cmd_generate,
    "invert": _cmd_invert,
    "roundtrip": _cmd_roundtrip,
    "plan": _cmd_plan,
    "verify": _cmd_verify,
}


def _join_negative_values(argv):
    # argparse reads "--to -2,0,2" as two options; glue such values to their flag
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and _NEGATIVE_VALUE.match(argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _report(err):
    sys.stderr.write(dumps(err) + "\n")


def run(argv=None):
    """Run the CLI and return its exit code."""
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except _UsageError as exc:
        _report({"code": "UsageError", "message": str(exc)})
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except MathDegeneracy as exc:
        _report(exc.to_dict())
        return 2
    except NullFlatError as exc:
        _report(exc.to_dict())
        return 1
    except (OSError, ValueError) as exc:
        _report({"code": "ValidationError", "message": str(exc)})
        return 1


def main():
    sys.exit(run())
