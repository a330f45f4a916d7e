"""Command-line front end.

    ellaybe eval    --n 2 --d 1 --tau 0,0.8 --v 0.13,0.07 --x1 0.1,0 --x2 0.32,0
    ellaybe verify  --all --n 3 --d 1 --tau 0,1 --samples 200 --seed 7
    ellaybe expand  --n 3 --d 1 --tau 0.3,1 --x1 0.1,0 --x2 0.32,0 --format csv
    ellaybe golden  [--fixtures PATH]
    ellaybe acceptance [--criteria 1,3,5]

Complex values are given as ``re,im``.  Output is JSON (one record per line)
or CSV.  Exit codes: 0 pass, 1 tolerance failure, 2 parameter error, 3 pole.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import sys

from . import closed_form as cf
from . import serialization as ser
from . import verifier as vf
from .errors import EllAYBEError, ParameterError, PoleError

EXIT_PASS, EXIT_FAIL, EXIT_PARAM, EXIT_POLE = 0, 1, 2, 3
IDENTITIES = ("aybe", "skew", "cybe", "qybe", "theorem-main")


def parse_complex(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")


_COMPLEX_FLAGS = ("--tau", "--v", "--x1", "--x2", "--u0")


def _attach_negative_values(argv):
    """``--v -0.5,-0.4`` -> ``--v=-0.5,-0.4`` so argparse does not take it for a flag."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if tok in _COMPLEX_FLAGS and nxt[:1] == "-" and nxt[1:2] in "0123456789." and nxt[1:2]:
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def _positive_float(text):
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return x


def _common(p, point=False):
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--tau", type=parse_complex, required=True, help="re,im with im > 0")
    p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field")
    if point:
        p.add_argument("--x1", type=parse_complex, required=True)
        p.add_argument("--x2", type=parse_complex, required=True)
        p.add_argument("--normalization", choices=cf.NORMALIZATIONS, default="raw",
                       help="unit-residue divides by the measured residue constant c")
        p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ellaybe", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate r(v; x1, x2)")
    _common(p, point=True)
    p.add_argument("--v", type=parse_complex, required=True)
    p.add_argument("--route", choices=("closed", "construction"), default="closed")

    p = sub.add_parser("verify", help="run residual checks, one JSON record per identity")
    _common(p)
    p.add_argument("--which", choices=IDENTITIES + ("all",), default="all")
    p.add_argument("--all", dest="which", action="store_const", const="all")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=_positive_float, help="override every tolerance")
    p.add_argument("--u0", type=parse_complex, default=vf.QYBE_BASE_POINT,
                   help="QYBE base point")

    p = sub.add_parser("expand", help="Laurent coefficients of r at v = 0")
    _common(p, point=True)
    p.add_argument("--radius", type=float, help="sampling circle radius")
    p.add_argument("--samples", type=int, default=32)

    p = sub.add_parser("golden", help="compare against the golden-value file")
    p.add_argument("--fixtures", help="path to golden.txt (default: packaged copy)")
    p.add_argument("--tol", type=_positive_float, default=1e-12)

    p = sub.add_parser("acceptance", help="run the acceptance table")
    p.add_argument("--criteria", help="comma-separated criterion numbers (default: all)")
    return parser


def _emit(record, args, out):
    if not getattr(args, "no_timestamp", True):
        record["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
    out.write(ser.dumps(record) + "\n")


def _params(args):
    return cf.SolutionParams(args.n, args.d, args.tau)


def _header(args):
    return {"n": args.n, "d": args.d, "tau": [args.tau.real, args.tau.imag]}


def _pair(z):
    return [z.real, z.imag]


def _evaluator(params, route):
    if route == "construction":
        from .geometric import construction_evaluator

        return construction_evaluator(params)
    return cf.closed_form_evaluator(params)


def _residue_scale(params, args, evaluator):
    """1 for raw output, 1/c for unit-residue with c measured at (x1, x2)."""
    if args.normalization == "raw":
        return 1.0, None
    c = cf.laurent_expand(params, args.x1, args.x2, evaluator=evaluator).residue_constant()
    return 1 / c, c


def cmd_eval(args, out):
    params = _params(args)
    cf.check_poles(params, args.v, args.x2 - args.x1)
    evaluator = _evaluator(params, args.route)
    t = evaluator(args.v, args.x1, args.x2)
    scale, c = _residue_scale(params, args, evaluator)
    t = scale * t
    if args.format == "csv":
        out.write(ser.tensor_to_csv(t))
        return EXIT_PASS
    rec = {"command": "eval", **_header(args), "v": _pair(args.v), "x1": _pair(args.x1),
           "x2": _pair(args.x2), "route": args.route, "normalization": args.normalization}
    if c is not None:
        rec["residue_constant"] = _pair(c)
    rec["tensor"] = ser.tensor_to_json(t)
    _emit(rec, args, out)
    return EXIT_PASS


def _verify_one(which, params, scheme, args):
    tol = {"tol": args.tol} if args.tol else {}
    if which == "aybe":
        return vf.run_aybe(params, scheme, **tol)
    if which == "skew":
        return vf.run_skew(params, scheme, **tol)
    if which == "qybe":
        return vf.run_qybe(params, scheme, u0=args.u0, **tol)
    if which == "cybe":
        return vf.run_cybe(params, scheme, **tol)
    return vf.theorem_main_check(params, scheme, **tol)


def cmd_verify(args, out):
    params = _params(args)
    if args.samples < 1:
        raise ParameterError("--samples must be >= 1")
    scheme = vf.SampleScheme(seed=args.seed, count=args.samples)
    names = IDENTITIES if args.which == "all" else (args.which,)
    ok = True
    for name in names:
        report = _verify_one(name, params, scheme, args)
        ok = ok and report.verdict
        _emit({"command": "verify", **report.as_record()}, args, out)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_expand(args, out, err):
    params = _params(args)
    raw = cf.closed_form_evaluator(params)
    scale, _ = _residue_scale(params, args, raw)

    def evaluator(v, x1, x2):
        return scale * raw(v, x1, x2)

    e = cf.laurent_expand(params, args.x1, args.x2, radius=args.radius, samples=args.samples,
                          evaluator=evaluator)
    c = e.residue_constant()
    candidates = {"1": abs(c - 1), "1/n": abs(c - 1 / params.n)}
    match = min(candidates, key=candidates.get)
    diag = {"residue_constant": _pair(c), "off_identity_mass": e.off_identity_mass(),
            "normalization_match": match, "normalization_distance": candidates[match],
            "circle_radius": e.circle_radius, "sample_count": e.sample_count,
            "est_error": e.est_error}
    if args.format == "csv":
        out.write(ser.tensors_to_csv(e.coefficients))
        err.write(ser.dumps({"command": "expand", **diag}) + "\n")
        return EXIT_PASS
    rec = {"command": "expand", **_header(args), "normalization": args.normalization,
           **e.as_record(), **diag}
    _emit(rec, args, out)
    return EXIT_PASS


def cmd_golden(args, out):
    from .fixtures import golden_deviations

    devs = golden_deviations(args.fixtures)
    ok = all(d < args.tol for d in devs.values())
    out.write(ser.dumps({"command": "golden", "tolerance": args.tol, "deviations": devs,
                         "verdict": "pass" if ok else "fail"}) + "\n")
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_acceptance(args, out):
    from . import acceptance

    numbers = None
    if args.criteria:
        try:
            numbers = [int(x) for x in args.criteria.split(",")]
        except ValueError as exc:
            raise ParameterError(f"bad --criteria {args.criteria!r}") from exc
        bad = [i for i in numbers if i not in acceptance.CRITERIA]
        if bad:
            raise ParameterError(f"no such criteria: {bad}")
    ok = True
    for result in acceptance.run_all(numbers):
        ok = ok and result.passed
        out.write(result.line() + "\n")
        out.flush()
    return EXIT_PASS if ok else EXIT_FAIL


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        argv = sys.argv[1:] if argv is None else list(argv)
        args = parser.parse_args(_attach_negative_values(argv))
    except SystemExit as exc:
        # argparse exits 0 for --help and 2 for usage errors
        return EXIT_PASS if not exc.code else EXIT_PARAM
    try:
        if args.command == "eval":
            return cmd_eval(args, out)
        if args.command == "verify":
            return cmd_verify(args, out)
        if args.command == "expand":
            return cmd_expand(args, out, err)
        if args.command == "golden":
            return cmd_golden(args, out)
        return cmd_acceptance(args, out)
    except PoleError as exc:
        rec = {"error": "pole", "message": str(exc)}
        if exc.lattice_point is not None:
            rec["lattice_point"] = _pair(complex(exc.lattice_point))
        if exc.index is not None:
            rec["index"] = list(exc.index)
        if exc.distance is not None:
            rec["distance"] = exc.distance
        err.write(ser.dumps(rec) + "\n")
        return EXIT_POLE
    except (ParameterError, ValueError) as exc:
        err.write(ser.dumps({"error": "parameter", "message": str(exc)}) + "\n")
        return EXIT_PARAM
    except EllAYBEError as exc:
        err.write(ser.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
