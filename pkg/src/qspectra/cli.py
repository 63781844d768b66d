"""Command line front end.

Subcommands: ``sspectrum``, ``funcalc``, ``decompose``, ``verify``, ``cex``,
``resolvent``.  Matrices and vectors travel as JSON files (a quaternion is a
``[w, x, y, z]`` array); results are printed as JSON with 17-significant-digit
numbers, so identical invocations produce identical bytes.  ``--out`` writes
the payload to a file; for the report commands (``verify``, ``cex``) it
writes a delimited table instead and renders a figure next to it.

Exit codes: 0 success, 1 failed verification, 2 parse/usage error,
3 numerical error, 4 inadmissible function, 5 conditioning error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .calculus import funcalc
from .config import ENV_TOL, Tolerances
from .errors import (
    ConditioningError,
    ConsistencyError,
    DivergenceError,
    DomainError,
    FunctionSpecError,
    NumericalError,
    QSpectraError,
    SingularityError,
)
from .qlinalg import QMatrix, QVector, s_spectrum
from .quaternion import Quaternion
from .resolvents import right_resolvent_field
from .slicefun import parse_function_spec
from .spectral import cex_truncation, spectral_decomposition, taylor_funcalc
from .properties import run_properties

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_NUMERIC = 3
EXIT_INADMISSIBLE = 4
EXIT_CONDITIONING = 5


# --- deterministic JSON with 17 significant digits ------------------------------------


def _fmt(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if math.isnan(x) or math.isinf(x):
            return json.dumps(str(x))
        return format(x, ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        inner = ",".join(f"{json.dumps(str(k))}:{_fmt(v)}" for k, v in value.items())
        return "{" + inner + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_fmt(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value)!r}")


def dumps(payload) -> str:
    return _fmt(payload)


def _pretty(payload, indent=0) -> str:
    pad = "  " * indent
    if isinstance(payload, dict):
        lines = []
        for k, v in payload.items():
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_fmt(v)}")
        return "\n".join(lines)
    if isinstance(payload, list):
        return "\n".join(_pretty(v, indent) if isinstance(v, (dict, list))
                         else f"{pad}- {_fmt(v)}" for v in payload)
    return f"{pad}{_fmt(payload)}"


# --- input loading ----------------------------------------------------------------------


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FunctionSpecError(f"cannot read JSON from {path}: {exc}")


def _load_matrix(path: str) -> QMatrix:
    return QMatrix.from_json(_load_json(path))


def _load_vector(path: str) -> QVector:
    return QVector.from_json(_load_json(path))


def _parse_quaternion(text: str) -> Quaternion:
    parts = text.split(",")
    if len(parts) != 4:
        raise FunctionSpecError(f"quaternion flag needs w,x,y,z, got {text!r}")
    try:
        return Quaternion(*(float(p) for p in parts))
    except ValueError as exc:
        raise FunctionSpecError(f"bad quaternion {text!r}: {exc}")


def _tolerances(args) -> Tolerances:
    if getattr(args, "tol", None) is not None:
        return Tolerances(base=args.tol)
    raw = os.environ.get(ENV_TOL)
    if raw is not None:
        return Tolerances(base=float(raw))
    return Tolerances()


# --- commands ---------------------------------------------------------------------------


def _cmd_sspectrum(args):
    t = _load_matrix(args.matrix)
    tol = _tolerances(args)
    return s_spectrum(t, tol).to_json()


def _cmd_funcalc(args):
    t = _load_matrix(args.matrix)
    tol = _tolerances(args)
    f = parse_function_spec(args.fn)
    if args.taylor:
        dec = spectral_decomposition(t, tol)
        result = taylor_funcalc(dec, f)
        contour_result = funcalc(t, f, tol=tol)
        return {
            "result": result.to_json(),
            "route": "taylor",
            "cross_residual": (result - contour_result).norm(),
        }
    return {"result": funcalc(t, f, tol=tol).to_json(), "route": "contour"}


def _cmd_decompose(args):
    t = _load_matrix(args.matrix)
    tol = _tolerances(args)
    return spectral_decomposition(t, tol).to_json()


def _cmd_resolvent(args):
    t = _load_matrix(args.matrix)
    v = _load_vector(args.vec)
    s = _parse_quaternion(args.s)
    tol = _tolerances(args)
    return {"result": right_resolvent_field(t, s, v, tol).to_json()}


def _cmd_cex(args):
    report = cex_truncation(args.m, _tolerances(args))
    if args.out:
        out = Path(args.out)
        lines = ["m\tj_norm\tlower_bound\tratio\tsigma_error\teigvec_residual"]
        for r in report["rows"]:
            lines.append("\t".join(_fmt(r[k]) for k in (
                "m", "j_norm", "lower_bound", "ratio", "sigma_error",
                "eigvec_residual")))
        out.write_text("\n".join(lines) + "\n", encoding="utf-8")
        from .plotting import render_cex_figure

        render_cex_figure(report, str(out.with_suffix(".png")))
    return report


def _cmd_verify(args):
    if args.trials < 1 or args.dim < 1:
        raise FunctionSpecError("verify needs --trials >= 1 and --dim >= 1")
    tol = _tolerances(args)
    results = run_properties(seed=args.seed, dim=args.dim, trials=args.trials,
                             tol=tol)
    if args.out:
        out = Path(args.out)
        lines = ["property\tpassed\tworst\tbound\tdetail"]
        for r in results:
            lines.append(
                f"{r.name}\t{str(r.passed).lower()}\t{_fmt(r.worst)}"
                f"\t{_fmt(r.bound)}\t{r.detail}"
            )
        out.write_text("\n".join(lines) + "\n", encoding="utf-8")
        from .plotting import render_verify_figure

        render_verify_figure(results, str(out.with_suffix(".png")))
    payload = {
        "properties": [r.to_json() for r in results],
        "all_passed": all(r.passed for r in results),
        "seed": args.seed,
        "dim": args.dim,
        "trials": args.trials,
    }
    return payload


# --- dispatch ---------------------------------------------------------------------------


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="qspectra",
        description="S-spectra, S-functional calculus and spectral systems "
                    "of quaternionic matrices",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=None,
                       help="base tolerance (default 1e-10; env QSPECTRA_TOL)")
        p.add_argument("--format", choices=("json", "pretty"), default="json")
        p.add_argument("--out", default=None, help="write output to this path")

    p = sub.add_parser("sspectrum", help="spectral spheres with multiplicities")
    p.add_argument("matrix")
    common(p)

    p = sub.add_parser("funcalc", help="f(T) via the S-functional calculus")
    p.add_argument("matrix")
    p.add_argument("--fn", required=True,
                   help="poly:c0,c1,... | exp | exp:scale | rat:num/den")
    p.add_argument("--taylor", action="store_true",
                   help="use the spectral (Taylor) route and report the "
                        "cross-residual against the contour route")
    common(p)

    p = sub.add_parser("decompose", help="spectral system and canonical S+N split")
    p.add_argument("matrix")
    common(p)

    p = sub.add_parser("resolvent", help="evaluate the resolvent field R_s(T; v)")
    p.add_argument("matrix")
    p.add_argument("--s", required=True, help="quaternion w,x,y,z")
    p.add_argument("--vec", required=True, help="JSON vector file")
    common(p)

    p = sub.add_parser("verify", help="run the module invariant suites")
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--seed", type=int, default=1)
    common(p)

    p = sub.add_parser("cex", help="counterexample truncation report")
    p.add_argument("--m", type=int, required=True, help="largest block index")
    common(p)

    return parser


_ERROR_CODES = (
    (FunctionSpecError, EXIT_PARSE),
    (ConditioningError, EXIT_CONDITIONING),
    (SingularityError, EXIT_NUMERIC),
    (NumericalError, EXIT_NUMERIC),
    (ConsistencyError, EXIT_NUMERIC),
    (DivergenceError, EXIT_NUMERIC),
)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "sspectrum": _cmd_sspectrum,
        "funcalc": _cmd_funcalc,
        "decompose": _cmd_decompose,
        "resolvent": _cmd_resolvent,
        "verify": _cmd_verify,
        "cex": _cmd_cex,
    }
    try:
        payload = handlers[args.command](args)
    except QSpectraError as exc:
        for klass, code in _ERROR_CODES:
            if isinstance(exc, klass):
                print(f"error: {exc}", file=sys.stderr)
                return code
        if isinstance(exc, DomainError):
            # inadmissible data for the calculus is its own contract
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INADMISSIBLE if args.command == "funcalc" else EXIT_PARSE
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    text = dumps(payload) if args.format == "json" else _pretty(payload)
    print(text)
    if args.out and args.command not in ("verify", "cex"):
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    if args.command == "verify" and not payload["all_passed"]:
        return EXIT_VERIFY_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
