"""Command-line front end.

Exit codes: 0 success (or "is a face"), 1 negative verdict, 2 usage error,
3 a proven inequality failed numerically.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass, asdict
from typing import Any

import numpy as np

from . import __version__
from .bounds import GapProfile, thm12_bound
from .curve import CurveSpec, deriv, eval_curve
from .ellipsoid import inradius_bounds, inradius_estimate
from .exceptions import BracketFailure, DegeneratePattern, InvalidPattern, OrbitopeError, SearchInconclusive
from .faces import verify_support
from .neighborliness import estimate_phi
from .tangent import TangencyPattern, construct_hyperplane
from .trigpoly import TrigPoly, circle_roots

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_FALSIFIED = 0, 1, 2, 3
SANDWICH_SLACK = 1e-3
_VALUE_FLAGS = ("--points", "--t", "--terms", "--c0")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    k: int = 1
    tolerance: float = 1e-9
    seed: int = 42
    starts: int = 64
    output_format: str = "json"
    output_path: str | None = None

    def __post_init__(self):
        if self.k < 1:
            raise UsageError("--k must be >= 1")
        if not self.tolerance > 0:
            raise UsageError("--tol must be positive")
        if self.starts < 1:
            raise UsageError("--starts must be >= 1")


def _round(obj: Any) -> Any:
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return float(f"{obj:.12g}")
    if isinstance(obj, (np.floating,)):
        return _round(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_round(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(x) for x in obj]
    return obj


def _csv_cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, (list, tuple)):
        return ";".join(_csv_cell(x) for x in v)
    return str(v)


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse number list {text!r}") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse integer list {text!r}") from exc


def _parse_terms(text: str) -> list[tuple[int, float, float]]:
    terms = []
    for item in text.split(","):
        if not item.strip():
            continue
        parts = item.split(":")
        if len(parts) not in (2, 3):
            raise UsageError(f"term {item!r} must be freq:cos[:sin]")
        try:
            f = int(parts[0])
            a = float(parts[1])
            b = float(parts[2]) if len(parts) == 3 else 0.0
        except ValueError as exc:
            raise UsageError(f"cannot parse term {item!r}") from exc
        if f <= 0:
            raise UsageError("frequencies must be positive")
        terms.append((f, a, b))
    return terms


# each command returns (result, csv rows, exit code)

def cmd_eval(cfg: RunConfig, args) -> tuple[dict, list[dict], int]:
    spec = CurveSpec(cfg.k)
    orders = [args.deriv] if args.deriv is not None else [0, 1]
    if any(n < 0 for n in orders):
        raise UsageError("--deriv must be >= 0")
    result = {"k": cfg.k, "t": args.t, "points": []}
    rows = []
    for n in orders:
        v = eval_curve(spec, args.t) if n == 0 else deriv(spec, args.t, n)
        result["points"].append({"order": n, "coords": v.tolist()})
        rows.append({"order": n, **{f"x{i + 1}": c for i, c in enumerate(v.tolist())}})
    return result, rows, EXIT_OK


def cmd_face_check(cfg: RunConfig, args) -> tuple[dict, list[dict], int]:
    spec = CurveSpec(cfg.k)
    points = _float_list(args.points)
    mults = _int_list(args.mults)
    try:
        pattern = TangencyPattern.from_points(points, mults)
        pattern.check_for(spec)
        h = construct_hyperplane(spec, pattern)
    except (InvalidPattern, DegeneratePattern) as exc:
        raise UsageError(str(exc)) from exc
    cert = verify_support(spec, h, pattern, tol=cfg.tolerance)
    result = {"pattern": pattern.as_dict(), "hyperplane": h.as_dict(), **cert.as_dict(), "is_face": cert.is_face}
    row = {k: v for k, v in cert.as_dict().items() if k != "contacts"}
    row["contacts"] = [f"{t:.12g}:{m}" for t, m in cert.contact_set]
    return result, [row], EXIT_OK if cert.is_face else EXIT_NEGATIVE


def cmd_phi(cfg: RunConfig, args) -> tuple[dict, list[dict], int]:
    bound = thm12_bound(cfg.k)
    if args.bound_only:
        row = {"k": cfg.k, "paper_bound": bound, "phi_lower_numeric": None, "phi_upper_numeric": None}
        return row, [row], EXIT_OK
    if cfg.k > 4:
        raise UsageError("full estimation is limited to k <= 4; use --bound-only")
    tol = args.tol if args.tol is not None else 1e-2
    est = estimate_phi(cfg.k, tol=tol, starts=cfg.starts, seed=cfg.seed)
    result = est.as_dict()
    result["safe_at_paper_bound"] = True
    row = {key: result[key] for key in ("k", "paper_bound", "phi_lower_numeric", "phi_upper_numeric")}
    return result, [row], EXIT_OK


def cmd_bounds(cfg: RunConfig, args) -> tuple[dict, list[dict], int]:
    if not 1 <= args.k_max <= 200:
        raise UsageError("--k-max must lie in [1, 200]")
    tol = args.tol if args.tol is not None else 1e-13
    rows = [GapProfile.compute(k, tol).row() for k in range(1, args.k_max + 1)]
    code = EXIT_OK if all(r["margin"] > 0 for r in rows) else EXIT_FALSIFIED
    return {"rows": rows}, rows, code


def cmd_inradius(cfg: RunConfig, args) -> tuple[dict, list[dict], int]:
    if cfg.k > 8:
        raise UsageError("inradius estimation is limited to k <= 8")
    est = inradius_estimate(cfg.k, seed=cfg.seed, starts=cfg.starts)
    lower, upper = inradius_bounds(cfg.k)
    row = {"k": cfg.k, "estimate": est, "lower": lower, "upper": upper}
    ok = lower - SANDWICH_SLACK <= est <= upper + SANDWICH_SLACK
    return row, [row], EXIT_OK if ok else EXIT_FALSIFIED


def cmd_roots(cfg: RunConfig, args) -> tuple[dict, list[dict], int]:
    p = TrigPoly.from_terms(args.c0, _parse_terms(args.terms or ""))
    roots = circle_roots(p, cfg.tolerance)
    rows = [{"t": t, "multiplicity": m} for t, m in roots]
    return {"poly": {"c0": p.c0, "terms": p.terms}, "roots": rows, "residual": roots.residual}, rows, EXIT_OK


COMMANDS = {
    "eval": cmd_eval,
    "face-check": cmd_face_check,
    "phi": cmd_phi,
    "bounds": cmd_bounds,
    "inradius": cmd_inradius,
    "roots": cmd_roots,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, default=1, help="curve parameter (dimension 2k)")
    common.add_argument("--tol", type=float, default=None, help="tolerance (default 1e-9; phi: bracket width 1e-2)")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--starts", type=int, default=64, help="multi-start budget")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, metavar="PATH", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="orbitope-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="curve point and derivatives")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--deriv", type=int, default=None, metavar="N")

    p = sub.add_parser("face-check", parents=[common], help="certify the tangent hyperplane of a pattern")
    p.add_argument("--points", required=True, help="comma-separated radians")
    p.add_argument("--mults", required=True, help="comma-separated multiplicities")

    p = sub.add_parser("phi", parents=[common], help="bracket the local neighborliness arc length")
    p.add_argument("--bound-only", action="store_true")

    p = sub.add_parser("bounds", parents=[common], help="contact-separation table")
    p.add_argument("--k-max", type=int, default=10)

    sub.add_parser("inradius", parents=[common], help="numeric inradius against its sandwich")

    p = sub.add_parser("roots", parents=[common], help="circle roots of a trigonometric polynomial")
    p.add_argument("--c0", type=float, default=0.0)
    p.add_argument("--terms", default="", help="freq:cos[:sin] items, comma-separated")
    return parser


def render(command: str, cfg: RunConfig, result: dict, rows: list[dict]) -> str:
    if cfg.output_format == "json":
        doc = {"command": command, "config": asdict(cfg), "result": _round(result), "version": __version__}
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    header: list[str] = []
    for r in rows:
        header.extend(key for key in r if key not in header)
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([_csv_cell(r.get(key)) for key in header])
    return buf.getvalue()


def _glue_negative_values(argv: list[str]) -> list[str]:
    # argparse reads "-1.2,1.2" as an option; turn "--points -1.2,1.2" into "--points=-1.2,1.2"
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and re.match(r"^-[\d.]", argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    try:
        tol = args.tol if args.tol is not None else 1e-9
        cfg = RunConfig(args.k, tol, args.seed, args.starts, args.format, args.out)
        result, rows, code = COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        print(f"orbitope-lab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SearchInconclusive, BracketFailure) as exc:
        print(f"orbitope-lab {args.command}: FALSIFIED: {exc}", file=sys.stderr)
        return EXIT_FALSIFIED
    except OrbitopeError as exc:
        print(f"orbitope-lab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(args.command, cfg, result, rows)
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
