"""Command-line front end.

Usage:
    cxangle angle --norm l2 --x 1,0 --y 0,1
    cxangle table --norm linf --x 1,i --y 1,0 --format text
    cxangle oval --norm lp:4 --x 1,0 --y 1,1 --m 360 --csv
    cxangle csb --r 10
    cxangle linf-demo

Vectors are comma-separated complex literals such as ``1``, ``-2.5i`` or
``0.3-1e-2i``.  Gram and generator files are JSON arrays of rows of such
literals (numbers are accepted too).  Exit codes: 0 success, 2 usage error,
3 numeric or domain error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import angle_core as ac
from . import hilbert
from .claims import paper_claim_report
from .errors import CxAngleError
from .gauge import DEFAULT_TOL, GeneratorSet, atomic_gauge

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

_BARE_UNIT = re.compile(r"(?<![0-9.])j")


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# parsing


def parse_complex(text: str) -> complex:
    s = text.strip().replace(" ", "").replace("i", "j")
    if not s:
        raise UsageError("empty complex literal")
    s = _BARE_UNIT.sub("1j", s)
    try:
        return complex(s)
    except ValueError:
        raise UsageError(f"not a complex literal: {text!r}") from None


def parse_vector(text: str) -> np.ndarray:
    return np.array([parse_complex(part) for part in text.split(",")], dtype=complex)


def _entry(v) -> complex:
    if isinstance(v, str):
        return parse_complex(v)
    if isinstance(v, (int, float)):
        return complex(v)
    raise UsageError(f"matrix entries must be numbers or complex literals, got {v!r}")


def load_matrix(path: str) -> np.ndarray:
    data = json.loads(Path(path).read_text())
    if not isinstance(data, list) or not data or not all(isinstance(row, list) for row in data):
        raise UsageError(f"{path}: expected a JSON array of rows")
    widths = {len(row) for row in data}
    if len(widths) != 1:
        raise UsageError(f"{path}: rows have different lengths")
    return np.array([[_entry(v) for v in row] for row in data], dtype=complex)


def make_space(spec: str, dim: int, tol: float) -> ac.NormedSpace:
    kind, _, arg = spec.partition(":")
    if kind == "l2":
        return ac.l2_space(dim)
    if kind == "linf":
        return ac.linf_space(dim)
    if kind == "lp":
        try:
            p = float(arg)
        except ValueError:
            raise UsageError(f"bad exponent in {spec!r}") from None
        return ac.lp_space(dim, p)
    if kind == "gram":
        return ac.gram_space(load_matrix(arg))
    if kind == "gauge":
        return ac.gauge_space(GeneratorSet(load_matrix(arg), tol=tol))
    raise UsageError(f"unknown norm {spec!r}; use l2, lp:P, linf, gram:FILE or gauge:FILE")


def _cx(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _pair(args):
    if args.x is None or args.y is None:
        raise UsageError("--x and --y are required")
    x, y = parse_vector(args.x), parse_vector(args.y)
    if x.shape != y.shape:
        raise UsageError("--x and --y have different lengths")
    return x, y


def _random_pairs(rng, n, dim):
    shape = (n, dim)
    x = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    y = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return x, y


# --------------------------------------------------------------------------
# subcommands; each returns a report dict


def cmd_angle(args):
    x, y = _pair(args)
    space = make_space(args.norm, x.size, args.tol)
    c = complex(ac.cosine(space, x, y))
    t = complex(ac.angle_from_cosine(c, space.accuracy))
    d = ac.decompose_angle(t)
    return {
        "norm": space.label,
        "product": _cx(ac.gproduct(space, x, y)),
        "cosine": _cx(c),
        "angle": _cx(t),
        "a": float(d.a),
        "b": float(d.b),
    }


def cmd_table(args):
    x, y = _pair(args)
    space = make_space(args.norm, x.size, args.tol)
    rows = ac.angle_table(space, x, y)
    res = ac.table_residuals(rows)
    return {
        "kind": "table",
        "norm": space.label,
        "columns": ["pair", "angle_re", "angle_im", "cos_re", "cos_im"],
        "rows": [
            {"pair": r.label, "angle_re": r.angle.real, "angle_im": r.angle.imag,
             "cos_re": r.cosine.real, "cos_im": r.cosine.imag}
            for r in rows
        ],
        "max_residual": max(res.values()),
    }


def cmd_oval(args):
    x, y = _pair(args)
    space = make_space(args.norm, x.size, args.tol)
    s = ac.oval_sample(space, x, y, args.m)
    rows = [
        {"phi": p, "angle_re": t.real, "angle_im": t.imag, "cos_re": c.real, "cos_im": c.imag}
        for p, t, c in zip(s.phi, s.angle, s.cosine)
    ]
    return {"kind": "oval", "columns": ["phi", "angle_re", "angle_im", "cos_re", "cos_im"], "rows": rows}


def cmd_theta(args):
    x, y = _pair(args)
    space = make_space(args.norm, x.size, args.tol)
    grid = None
    if args.grid:
        try:
            grid = [float(v) for v in args.grid.split(",")]
        except ValueError:
            raise UsageError(f"bad --grid {args.grid!r}") from None
    prof = ac.theta_profile(space, x, y, grid)
    rows = [
        {"t": t, "angle_re": a.real, "angle_im": a.imag, "re_cos": rc}
        for t, a, rc in zip(prof.t, prof.angle, prof.re_cos)
    ]
    increasing = bool(np.all(np.diff(prof.re_cos) > 0))
    return {"kind": "theta", "columns": ["t", "angle_re", "angle_im", "re_cos"], "rows": rows,
            "re_cos_increasing": increasing}


def cmd_ix_check(args):
    if args.x is not None or args.y is not None:
        x, y = _pair(args)
        x, y = x[None], y[None]
    else:
        x, y = _random_pairs(np.random.default_rng(args.seed), args.pairs, args.dim)
    space = make_space(args.norm, x.shape[-1], args.tol)
    theta = ac.angle(space, x, y)
    direct = ac.angle(space, 1j * x, y)
    predicted = ac.angle_ix_predicted(ac.decompose_angle(theta))
    err = np.abs(np.atleast_1d(direct - predicted))
    return {"norm": space.label, "pairs": int(err.size), "max_abs_diff": float(err.max()),
            "example": {"angle": _cx(np.atleast_1d(theta)[0]), "direct": _cx(np.atleast_1d(direct)[0]),
                        "predicted": _cx(np.atleast_1d(predicted)[0])}}


def cmd_csb(args):
    return paper_claim_report(args.r, tol=args.tol).to_dict()


def cmd_linf_demo(args):
    e = ac.linf_counterexample()
    mod_rot, mod_tw = e.moduli
    return {
        "x": [_cx(v) for v in e.x],
        "y": [_cx(v) for v in e.y],
        "phase": _cx(e.phase),
        "product": _cx(e.product),
        "product_exact": _cx(e.product_exact),
        "twisted": _cx(e.twisted),
        "twisted_exact": _cx(e.twisted_exact),
        "phase_times_product": _cx(e.rotated_product),
        "modulus_phase_times_product": mod_rot,
        "modulus_twisted": mod_tw,
    }


def cmd_deformation(args):
    space = make_space(args.norm, args.dim, args.tol)
    est = ac.deformation_estimate(space, n_samples=args.samples, seed=args.seed)
    return {"norm": space.label, "dim": space.dim, "estimate": est.value,
            "witness_a": [_cx(v) for v in est.a], "witness_b": [_cx(v) for v in est.b]}


def cmd_gauge_eval(args):
    if args.x is None:
        raise UsageError("--x is required")
    G = GeneratorSet(load_matrix(args.gens), tol=args.tol)
    value, cert = atomic_gauge(G, parse_vector(args.x))
    return {"value": value, "lower": cert.lower, "gap": cert.gap,
            "primal": [_cx(c) for c in cert.primal], "dual": [_cx(f) for f in cert.dual]}


def cmd_real_span(args):
    rng = np.random.default_rng(args.seed)
    space = hilbert.HermitianSpace.identity(args.dim)
    if args.n > args.dim:
        raise UsageError("--n cannot exceed --dim")
    Q, _ = np.linalg.qr(rng.normal(size=(args.dim, args.dim)) + 1j * rng.normal(size=(args.dim, args.dim)))
    T = hilbert.gram_schmidt(space, Q.T[: args.n])
    audit = hilbert.real_span_angle_audit(space, T, trials=args.trials, seed=args.seed)
    return {"n": args.n, "dim": args.dim, "trials": args.trials,
            "max_imag_angle": audit.imag_residual, "max_cosine_residual": audit.cosine_residual}


def cmd_geometry(args):
    space = hilbert.HermitianSpace.identity(2)
    rng = np.random.default_rng(args.seed)
    x = rng.normal(size=2) + 1j * rng.normal(size=2)
    y = rng.normal(size=2) + 1j * rng.normal(size=2)
    cases = {"real pair (2,0),(1,1)": (np.array([2, 0]), np.array([1, 1])), "random complex pair": (x, y)}
    out = []
    for name, (u, v) in cases.items():
        out.append({
            "case": name,
            "triangle_sum": _cx(hilbert.triangle_angle_sum(space, u, v)),
            "law_of_cosines_residual": _cx(hilbert.law_of_cosines_residual(space, u, v)),
            "symmetrized_residual": _cx(hilbert.law_of_cosines_residual(space, u, v, symmetrized=True)),
        })
    return {"pi": math.pi, "cases": out}


# --------------------------------------------------------------------------
# output


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def _to_jsonable(obj):
    if isinstance(obj, dict):
        return {k: _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _text_table(report) -> str:
    lines = [f"{'pair':<8} {'angle':>34}   {'cosine':>34}"]
    for row in report["rows"]:
        ang = complex(row["angle_re"], row["angle_im"])
        cos = complex(row["cos_re"], row["cos_im"])
        lines.append(f"{row['pair']:<8} {_fmt_cx(ang):>34}   {_fmt_cx(cos):>34}")
    lines.append(f"max relation residual: {_fmt(float(report['max_residual']))}")
    return "\n".join(lines) + "\n"


def _fmt_cx(z: complex) -> str:
    sign = "-" if z.imag < 0 else "+"
    return f"{_fmt(z.real)} {sign} {_fmt(abs(z.imag))}i"


def _text_generic(obj, indent=0) -> str:
    pad = "  " * indent
    lines = []
    for k, v in obj.items():
        if isinstance(v, dict) and set(v) == {"re", "im"}:
            lines.append(f"{pad}{k}: {_fmt_cx(complex(v['re'], v['im']))}")
        elif isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_text_generic(v, indent + 1).rstrip("\n"))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}:")
            for item in v:
                if set(item) == {"re", "im"}:
                    lines.append(f"{pad}  {_fmt_cx(complex(item['re'], item['im']))}")
                else:
                    lines.append(_text_generic(item, indent + 1).rstrip("\n"))
                    lines.append("")
        else:
            lines.append(f"{pad}{k}: {_fmt(v)}")
    return "\n".join(lines) + "\n"


def emit(report: dict, fmt: str) -> str:
    """Serialize a report as json, csv or text."""
    report = _to_jsonable(report)
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    if fmt == "csv":
        if "rows" not in report:
            raise UsageError("csv output is only available for tabular commands (oval, table, theta)")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        columns = report["columns"]
        writer.writerow(columns)
        for row in report["rows"]:
            writer.writerow([_fmt(row[c]) for c in columns])
        return buf.getvalue()
    if fmt == "text":
        if report.get("kind") == "table":
            return _text_table(report)
        if "rows" in report:
            return emit(report, "csv")
        return _text_generic(report)
    raise UsageError(f"unknown format {fmt!r}")


# --------------------------------------------------------------------------
# argument parser


def _common(p, norm=False, pair=False):
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="solver / search tolerance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["json", "csv", "text"], default="json")
    p.add_argument("--out", help="write to this file instead of stdout")
    if norm:
        p.add_argument("--norm", default="l2", help="l2 | lp:P | linf | gram:FILE | gauge:FILE")
    if pair:
        p.add_argument("--x", help="first vector, e.g. 1,0.5-2i")
        p.add_argument("--y", help="second vector")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cxangle", description="Complex angles in normed spaces.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("angle", help="product, cosine and angle of a pair")
    _common(p, norm=True, pair=True)
    p.set_defaults(func=cmd_angle)

    p = sub.add_parser("table", help="the eight-row angle table of a pair")
    _common(p, norm=True, pair=True)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("oval", help="angles of (exp(i phi) x, y) around the circle")
    _common(p, norm=True, pair=True)
    p.add_argument("--m", type=int, default=360, help="number of phases")
    p.add_argument("--csv", action="store_true", help="shorthand for --format csv")
    p.set_defaults(func=cmd_oval)

    p = sub.add_parser("theta", help="angles of (x, y + t x) over real t")
    _common(p, norm=True, pair=True)
    p.add_argument("--grid", help="comma-separated t values (default: symmetric log grid)")
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("ix-check", help="direct angle of (ix, y) against the closed form")
    _common(p, norm=True, pair=True)
    p.add_argument("--pairs", type=int, default=1000)
    p.add_argument("--dim", type=int, default=2)
    p.set_defaults(func=cmd_ix_check)

    p = sub.add_parser("csb", help="audit of the asserted S_r norm values")
    _common(p)
    p.add_argument("--r", type=float, required=True)
    p.set_defaults(func=cmd_csb)

    p = sub.add_parser("linf-demo", help="max-norm pair where the phase does not factor out")
    _common(p)
    p.set_defaults(func=cmd_linf_demo)

    p = sub.add_parser("deformation", help="estimate sup |<a|b>| over unit vectors")
    _common(p, norm=True)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--samples", type=int, default=2000)
    p.set_defaults(func=cmd_deformation)

    p = sub.add_parser("gauge-eval", help="gauge of a vector with its certificate")
    _common(p)
    p.add_argument("--gens", required=True, help="JSON file with generator rows")
    p.add_argument("--x")
    p.set_defaults(func=cmd_gauge_eval)

    p = sub.add_parser("real-span", help="audit angles on the real span of an orthonormal system")
    _common(p)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--dim", type=int, default=6)
    p.add_argument("--trials", type=int, default=1000)
    p.set_defaults(func=cmd_real_span)

    p = sub.add_parser("geometry", help="triangle angle sum and law of cosines demos")
    _common(p)
    p.set_defaults(func=cmd_geometry)
    return ap


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    fmt = "csv" if getattr(args, "csv", False) else args.format
    try:
        text = emit(args.func(args), fmt)
    except UsageError as exc:
        print(f"cxangle {args.command}: {exc}", file=stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"cxangle {args.command}: {exc}", file=stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"cxangle {args.command}: invalid JSON: {exc}", file=stderr)
        return EXIT_USAGE
    except (CxAngleError, ValueError, ArithmeticError) as exc:
        print(f"cxangle {args.command}: {exc}", file=stderr)
        return EXIT_NUMERIC
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            print(f"cxangle: cannot write {args.out}: {exc}", file=stderr)
            return EXIT_IO
    else:
        stdout.write(text)
    return EXIT_OK


def main() -> None:
    raise SystemExit(run())

