"""Command-line entry point.

    hyperdensity periods --a -0.5,0.5
    hyperdensity degenerate --b 0.5
    hyperdensity jacobian --a -0.5,-0.5,0.5,0.5
    hyperdensity torsion-find --a -0.11,0.13 --qmax 20
    hyperdensity scan --g 1 --grid 9 --qmax 50
    hyperdensity verify --a -0.5,0.5

Results go to stdout as JSON (or flattened CSV).  Module errors exit with 1
and a JSON object {code, message}; bad flags exit with 2.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .config import DegenerateConfig, embed_degenerate, validate
from .contour import DEFAULT_TOL
from .degenerate import closed_form, partial_fraction_periods
from .errors import HyperError
from .oracle import three_way
from .periods import Basis, reduced_vector
from .torsion import density_scan, find_torsion_near, jacobian_u, rank, singular_values

AGREEMENT = 1e-10


def _csv_floats(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _number(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    if x == int(x) and abs(x) < 2**53:
        return repr(float(x))
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}"{k}": {dumps(v, indent, _level + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in seq) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _number(float(obj))
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def _flatten(obj, prefix: str = ""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, (list, tuple, np.ndarray)):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        if isinstance(obj, (bool, np.bool_)):
            obj = "true" if obj else "false"
        elif isinstance(obj, (float, np.floating)):
            obj = _number(float(obj))
        yield prefix, obj


def to_csv(obj) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for k, v in _flatten(obj):
        w.writerow([k, v])
    return buf.getvalue()


def cmd_periods(args) -> dict:
    return reduced_vector(validate(args.a), args.tol, v_method=args.v_method).to_dict()


def cmd_degenerate(args) -> dict:
    b = DegenerateConfig(tuple(args.b))
    cf = closed_form(b)
    pd = reduced_vector(embed_degenerate(b), args.tol)
    out = cf.to_dict()
    # M and v are basis dependent; compare them in the partial-fraction basis
    pf = partial_fraction_periods(b, args.tol)
    v_pf = reduced_vector(embed_degenerate(b), args.tol, basis=Basis.partial_fraction(b.b)).v
    out["max_deviation"] = {
        "u": float(np.max(np.abs(pd.u - cf.u))),
        "M": float(np.max(np.abs(pf - cf.M))),
        "v": float(np.max(np.abs(v_pf - cf.v))),
    }
    return out


def cmd_jacobian(args) -> dict:
    a = validate(args.a)
    J = jacobian_u(a, args.h, args.tol, richardson=args.richardson)
    return {
        "g": a.g,
        "a": list(a.a),
        "J": J.tolist(),
        "singular_values": singular_values(J).tolist(),
        "rank": rank(J),
    }


def cmd_torsion_find(args) -> dict:
    cert = find_torsion_near(validate(args.a), args.qmax, tol=args.res_tol, max_iter=args.max_iter, quad_tol=args.tol)
    return cert.to_dict()


def cmd_scan(args) -> dict:
    return density_scan(
        args.g,
        args.grid,
        args.qmax,
        tol=args.res_tol,
        max_iter=args.max_iter,
        quad_tol=args.tol,
        degenerate=args.degenerate,
        workers=args.workers,
    )


def cmd_verify(args) -> dict:
    a = validate(args.a)
    out = three_way(a, args.tol)
    rng = np.random.default_rng(args.seed)
    u_std = reduced_vector(a, args.tol).u
    while True:
        C = rng.normal(size=(a.g, a.g))
        if np.linalg.cond(C) < 1e3:
            break
    u_rand = reduced_vector(a, args.tol, basis=Basis(C)).u
    out["max_dev_basis"] = float(np.max(np.abs(u_std - u_rand)))
    devs = [v for k, v in out.items() if k.startswith("max_dev")]
    out["agreement_tol"] = AGREEMENT
    out["pass"] = bool(all(d < AGREEMENT for d in devs))
    return out


COMMANDS = {
    "periods": cmd_periods,
    "degenerate": cmd_degenerate,
    "jacobian": cmd_jacobian,
    "torsion-find": cmd_torsion_find,
    "scan": cmd_scan,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="quadrature tolerance (default 1e-12)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--out", help="write the result to this file instead of stdout")

    p = argparse.ArgumentParser(prog="hyperdensity", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("periods", parents=[common], help="M, v, u for a tuple")
    s.add_argument("--a", type=_csv_floats, required=True)
    s.add_argument("--v-method", choices=("interval", "contour"), default="interval")

    s = sub.add_parser("degenerate", parents=[common], help="closed forms on the degenerate locus")
    s.add_argument("--b", type=_csv_floats, required=True)

    s = sub.add_parser("jacobian", parents=[common], help="du/da, singular values, rank")
    s.add_argument("--a", type=_csv_floats, required=True)
    s.add_argument("--h", type=float, default=None, help="finite-difference step")
    s.add_argument("--richardson", action="store_true")

    for name in ("torsion-find", "scan"):
        s = sub.add_parser(name, parents=[common])
        if name == "torsion-find":
            s.add_argument("--a", type=_csv_floats, required=True)
        else:
            s.add_argument("--g", type=int, required=True)
            s.add_argument("--grid", type=int, required=True)
            s.add_argument("--degenerate", action="store_true", help="scan the degenerate locus")
            s.add_argument("--workers", type=int, default=1)
        s.add_argument("--qmax", type=int, required=True)
        s.add_argument("--res-tol", type=float, default=1e-10, help="target residual (default 1e-10)")
        s.add_argument("--max-iter", type=int, default=50)

    s = sub.add_parser("verify", parents=[common], help="contour / tanh-sinh / AGM agreement")
    s.add_argument("--a", type=_csv_floats, required=True)
    return p


def _join_negative_lists(argv: list[str]) -> list[str]:
    # "--a -0.5,0.5" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("--a", "--b"):
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and not nxt.startswith("--"):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
        else:
            out.append(tok)
    return out


def run(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_negative_lists(argv))
    try:
        result = COMMANDS[args.command](args)
        code = 0
    except HyperError as exc:
        result = exc.to_dict()
        code = 1
    text = to_csv(result) if args.format == "csv" and code == 0 else dumps(result) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
