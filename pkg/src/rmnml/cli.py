"""Command-line interface.

Subcommands: ``pc``, ``codelength``, ``sample``, ``select-dim``,
``validate``, ``coding-demo``.  Exit codes: 0 on success, 1 when a
validation suite fails, 2 on usage or input errors.  Datasets are JSON
files ``{"chart": "lorentz", "dim": D, "points": [[x0, ..., xD], ...]}``;
``"chart": "poincare"`` with D-component points is accepted on input and
converted.  The environment variable ``RM_NML_THREADS`` caps the number of
threads used by the numerical backends.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

USAGE_ERROR = 2
VALIDATION_ERROR = 1


def _cap_threads():
    cap = os.environ.get("RM_NML_THREADS")
    if not cap:
        return
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                "NUMEXPR_NUM_THREADS"):
        os.environ.setdefault(var, cap)


_cap_threads()

import numpy as np  # noqa: E402  (after the thread cap on purpose)

from . import coding, hyperbolic as hy, validation  # noqa: E402
from .complexity import (ParamDomain, chart_gap, pc_hgd,  # noqa: E402
                         rm_nml_codelength)
from .gaussian import Dataset, RgdParams, sample, xi  # noqa: E402
from .quadrature import QuadSpec  # noqa: E402


class InputError(Exception):
    """Bad configuration or malformed input file (exit code 2)."""


def parse_sigma_range(text: str) -> tuple[float, float]:
    """Parse the ``a:b`` form of the --sigma flag."""
    parts = text.split(":")
    if len(parts) != 2:
        raise InputError(f"--sigma expects the form MIN:MAX, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise InputError(f"--sigma expects numbers, got {text!r}") from exc
    if not 0 < lo < hi:
        raise InputError(f"--sigma needs 0 < MIN < MAX, got {text!r}")
    return lo, hi


def load_dataset(path: str) -> Dataset:
    """Read a dataset file, converting Poincare input to Lorentz storage."""
    try:
        with open(path) as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, "
                         f"column {exc.colno}: {exc.msg}") from exc
    for field in ("chart", "dim", "points"):
        if field not in raw:
            raise InputError(f"{path}: missing field {field!r}")
    chart, dim, points = raw["chart"], raw["dim"], raw["points"]
    if chart not in ("lorentz", "poincare"):
        raise InputError(f"{path}: field 'chart' must be 'lorentz' or "
                         f"'poincare', got {chart!r}")
    if not isinstance(dim, int) or dim < 1:
        raise InputError(f"{path}: field 'dim' must be a positive integer")
    if not isinstance(points, list) or not points:
        raise InputError(f"{path}: field 'points' must be a non-empty list")
    expected = dim + 1 if chart == "lorentz" else dim
    rows = []
    for i, row in enumerate(points):
        if not isinstance(row, list) or len(row) != expected:
            raise InputError(f"{path}: point {i} must have {expected} "
                             f"components for chart {chart!r}")
        try:
            vec = np.asarray(row, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InputError(f"{path}: point {i} has a non-numeric field") from exc
        try:
            if chart == "poincare":
                vec = hy.poincare_to_lorentz(hy.PoincarePoint(vec)).coords
            else:
                hy.LorentzPoint(vec)
        except hy.GeometryError as exc:
            raise InputError(f"{path}: point {i} is invalid: {exc}") from exc
        rows.append(vec)
    return Dataset(np.stack(rows))


def write_dataset(path: str, data: Dataset):
    payload = {
        "chart": "lorentz",
        "dim": data.dim,
        "points": [[float(v) for v in row] for row in data.coords],
    }
    with open(path, "w") as handle:
        json.dump(payload, handle)
        handle.write("\n")


def _emit(payload: dict, out: str | None, csv_out: str | None = None):
    text = json.dumps(payload, indent=2)
    if out:
        with open(out, "w") as handle:
            handle.write(text + "\n")
    else:
        print(text)
    if csv_out:
        flat = {k: v for k, v in payload.items() if not isinstance(v, (dict, list))}
        with open(csv_out, "w", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=list(flat))
            writer.writeheader()
            writer.writerow(flat)


def _domain_from(args) -> ParamDomain:
    lo, hi = parse_sigma_range(args.sigma)
    return ParamDomain(args.radius, lo, hi)


def cmd_pc(args) -> int:
    domain = _domain_from(args)
    result = pc_hgd(args.dim, args.n, domain, QuadSpec(rel_tol=args.rel_tol))
    _emit({
        "k": result.k,
        "n": result.n,
        "term_kn": result.term_kn,
        "term_volume": result.term_volume,
        "term_fisher": result.term_fisher,
        "total_log_pc": result.total_log_pc,
    }, args.out, args.csv)
    return 0


def cmd_codelength(args) -> int:
    data = load_dataset(args.data)
    if data.n < 2:
        raise InputError(f"{args.data}: the code-length needs at least 2 "
                         f"points, got {data.n}")
    domain = _domain_from(args)
    report = rm_nml_codelength(data, domain, QuadSpec(rel_tol=args.rel_tol))
    _emit({
        "n": data.n,
        "dim": data.dim,
        "neg_max_loglik": report.neg_max_loglik,
        "log_pc": report.log_pc,
        "total": report.total,
        "boundary_flag": report.boundary_flag,
        "chart_gap_lorentz_graph": chart_gap(data, hy.CHART_LORENTZ_GRAPH),
        "chart_gap_poincare": chart_gap(data, hy.CHART_POINCARE),
    }, args.out, args.csv)
    return 0


def cmd_sample(args) -> int:
    if not args.sigma_value > 0:
        raise InputError(f"--sigma must be positive, got {args.sigma_value}")
    if args.mu is None:
        mu = hy.origin(args.dim)
    else:
        try:
            coords = np.asarray([float(v) for v in args.mu.split(",")])
            if coords.size != args.dim + 1:
                raise InputError(f"--mu needs {args.dim + 1} comma-separated "
                                 f"Lorentz components")
            mu = hy.LorentzPoint(coords)
        except hy.GeometryError as exc:
            raise InputError(f"--mu is not on the manifold: {exc}") from exc
    data = sample(args.n, RgdParams(mu, args.sigma_value), args.seed)
    write_dataset(args.out, data)
    return 0


def cmd_select_dim(args) -> int:
    candidates = []
    for spec_text in args.candidate:
        head, sep, path = spec_text.partition("=")
        if not sep:
            raise InputError(f"--candidate expects DIM=PATH, got {spec_text!r}")
        try:
            dim = int(head)
        except ValueError as exc:
            raise InputError(f"--candidate dimension must be an integer, "
                             f"got {head!r}") from exc
        candidates.append((dim, path))
    if len(candidates) < 2:
        raise InputError("select-dim needs at least 2 --candidate entries")
    lo, hi = parse_sigma_range(args.sigma)

    scores = []
    for dim, path in sorted(candidates):
        entry = {"dim": dim, "path": path, "total": None, "error": None}
        try:
            data = load_dataset(path)
            if data.dim != dim:
                raise InputError(f"{path}: declared candidate dimension {dim} "
                                 f"but the file holds dimension {data.dim}")
            if data.n < 2:
                raise InputError(f"{path}: needs at least 2 points")
            report = rm_nml_codelength(data, ParamDomain(args.radius, lo, hi))
            entry.update({
                "total": report.total,
                "neg_max_loglik": report.neg_max_loglik,
                "log_pc": report.log_pc,
                "boundary_flag": report.boundary_flag,
            })
        except (InputError, ValueError) as exc:
            entry["error"] = str(exc)
        scores.append(entry)

    best = select_best(scores)
    _emit({"selected_dim": best["dim"], "scores": scores}, args.out, None)
    return 0


def select_best(scores: list[dict]) -> dict:
    """Entry with the smallest total; ties break toward the smaller dimension."""
    survivors = [e for e in scores if e.get("error") is None]
    if not survivors:
        raise InputError("every candidate failed")
    return min(survivors, key=lambda e: (e["total"], e["dim"]))


def cmd_validate(args) -> int:
    results = validation.run_all(quick=args.quick)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.name:<{width}}  {status}  {r.detail}")
    return 0 if all(r.passed for r in results) else VALIDATION_ERROR


def cmd_coding_demo(args) -> int:
    partition = coding.partition_ball(args.radius, args.grid, args.grid)
    norm = xi(2, args.sigma_value)

    def pdf(points):
        d = np.arccosh(np.maximum(points[..., 0], 1.0))
        return np.exp(-d * d / (2.0 * args.sigma_value ** 2)) / norm

    lengths = coding.cell_codelengths(partition, pdf)
    payload = {
        "radius": args.radius,
        "grid": args.grid,
        "sigma": args.sigma_value,
        "cells": len(partition),
        "kraft_sum": coding.kraft_sum(lengths),
        "average_length_bits": coding.average_codelength(partition, pdf, lengths),
        "expected_lower_bound_bits": coding.expected_lower_bound(partition, pdf),
    }
    _emit(payload, args.out, None)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rmnml",
        description="Coordinate-invariant NML code-lengths on hyperbolic space.")
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("pc", help="asymptotic log parametric complexity")
    pc.add_argument("--dim", type=int, required=True)
    pc.add_argument("--n", type=int, required=True)
    pc.add_argument("--radius", type=float, default=3.0)
    pc.add_argument("--sigma", default="0.1:3", help="sigma range MIN:MAX")
    pc.add_argument("--rel-tol", type=float, default=1e-10)
    pc.add_argument("--out", default=None)
    pc.add_argument("--csv", default=None)
    pc.set_defaults(func=cmd_pc)

    cl = sub.add_parser("codelength", help="NML code-length of a dataset")
    cl.add_argument("--data", required=True)
    cl.add_argument("--radius", type=float, default=3.0)
    cl.add_argument("--sigma", default="0.1:3")
    cl.add_argument("--rel-tol", type=float, default=1e-10)
    cl.add_argument("--out", default=None)
    cl.add_argument("--csv", default=None)
    cl.set_defaults(func=cmd_codelength)

    sm = sub.add_parser("sample", help="draw a dataset from the model")
    sm.add_argument("--dim", type=int, required=True)
    sm.add_argument("--n", type=int, required=True)
    sm.add_argument("--sigma", dest="sigma_value", type=float, required=True)
    sm.add_argument("--mu", default=None,
                    help="Lorentz components of the mean, comma separated")
    sm.add_argument("--seed", type=int, default=0)
    sm.add_argument("--out", required=True)
    sm.set_defaults(func=cmd_sample)

    sd = sub.add_parser("select-dim", help="pick the dimension with the "
                        "smallest code-length")
    sd.add_argument("--candidate", action="append", required=True,
                    metavar="DIM=PATH")
    sd.add_argument("--radius", type=float, default=3.0)
    sd.add_argument("--sigma", default="0.1:3")
    sd.add_argument("--out", default=None)
    sd.set_defaults(func=cmd_select_dim)

    va = sub.add_parser("validate", help="run the oracle self-checks")
    va.add_argument("--quick", action="store_true",
                    help="reduced Monte Carlo budgets")
    va.set_defaults(func=cmd_validate)

    cd = sub.add_parser("coding-demo", help="prefix-code lengths on a polar grid")
    cd.add_argument("--radius", type=float, default=3.0)
    cd.add_argument("--grid", type=int, default=32)
    cd.add_argument("--sigma", dest="sigma_value", type=float, default=1.0)
    cd.add_argument("--out", default=None)
    cd.set_defaults(func=cmd_coding_demo)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
