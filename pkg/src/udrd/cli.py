"""Command-line front end.

Subcommands: point (one curve point), sweep (distortion sweep to CSV or
JSON), converge (finite-order vs spectral rate table), validate (oracle
report). Exit codes: 0 success, 2 input error, 3 domain or solver error,
4 validation failure.
"""

import argparse
import json
import sys

import numpy as np

from . import process, validation, vector
from .errors import UdrdError

CURVE_HEADER = "D,alpha,R_perp,R_shannon,rate_loss,units"
SOURCE_KEYS = ("covariance", "eigenvalues", "autocorrelation", "ar", "spectrum_samples")


class InputError(Exception):
    """Source document failed to parse (exit code 2)."""


def fmt(x: float) -> str:
    return f"{float(x):.12g}"


def load_source(path: str):
    """Parse a source document into ("vector"|"process", model)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("source document must be a JSON object")
    present = [k for k in SOURCE_KEYS if k in doc]
    if len(present) != 1:
        raise InputError(
            f"source document must contain exactly one of {', '.join(SOURCE_KEYS)}; "
            f"found {present or 'none'}"
        )
    key = present[0]
    body = doc[key]
    try:
        if key == "covariance":
            return "vector", vector.SourceCovariance.from_matrix(body)
        if key == "eigenvalues":
            return "vector", vector.SourceCovariance.from_eigenvalues(body)
        if key == "autocorrelation":
            return "process", process.AutocorrelationSpectrum(lags=np.asarray(body, dtype=float))
        if key == "spectrum_samples":
            return "process", process.TabulatedSpectrum(samples=np.asarray(body, dtype=float))
        if not isinstance(body, dict) or "coeffs" not in body:
            raise InputError("ar source must be an object with 'coeffs' and 'noise_var'")
        return "process", process.ArSpectrum(
            coeffs=tuple(body["coeffs"]), noise_var=float(body.get("noise_var", 1.0))
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, UdrdError):
            raise
        raise InputError(f"invalid {key} payload: {exc}") from exc


def _point_row(kind, model, args) -> vector.RdPoint:
    if args.distortion is not None:
        if kind == "vector":
            return vector.rd_point(model, args.distortion, units=args.units)
        return process.spectral_rd_point(model, args.distortion, units=args.units)
    if kind == "vector":
        return vector.distortion_of_rate(model, args.rate, units=args.units)
    return process.spectral_distortion_of_rate(model, args.rate, units=args.units)


def _row_csv(p: vector.RdPoint) -> str:
    return ",".join(
        [fmt(p.distortion), fmt(p.alpha), fmt(p.rate_perp), fmt(p.rate_shannon),
         fmt(p.rate_loss), p.units]
    )


def _row_dict(p: vector.RdPoint) -> dict:
    return {
        "D": float(fmt(p.distortion)),
        "alpha": float(fmt(p.alpha)),
        "R_perp": float(fmt(p.rate_perp)),
        "R_shannon": float(fmt(p.rate_shannon)),
        "rate_loss": float(fmt(p.rate_loss)),
        "units": p.units,
    }


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_point(args) -> int:
    kind, model = load_source(args.input)
    row = _point_row(kind, model, args)
    if args.format == "json":
        _emit(json.dumps(_row_dict(row), sort_keys=True) + "\n", None)
    else:
        _emit(CURVE_HEADER + "\n" + _row_csv(row) + "\n", None)
    return 0


def cmd_sweep(args) -> int:
    if not (0.0 < args.d_min < args.d_max):
        raise InputError("require 0 < --d-min < --d-max")
    if args.points < 2:
        raise InputError("--points must be at least 2")
    kind, model = load_source(args.input)
    if args.log_spaced:
        grid = np.geomspace(args.d_min, args.d_max, args.points)
    else:
        grid = np.linspace(args.d_min, args.d_max, args.points)
    rows = []
    for d in grid:
        if kind == "vector":
            rows.append(vector.rd_point(model, float(d), units=args.units))
        else:
            rows.append(process.spectral_rd_point(model, float(d), units=args.units))
    if args.format == "json":
        text = json.dumps([_row_dict(r) for r in rows], sort_keys=True) + "\n"
    else:
        text = CURVE_HEADER + "\n" + "\n".join(_row_csv(r) for r in rows) + "\n"
    _emit(text, args.out)
    return 0


def cmd_converge(args) -> int:
    kind, model = load_source(args.input)
    if kind != "process":
        raise UdrdError("converge requires a process source (ar, autocorrelation, or spectrum)")
    try:
        orders = [int(tok) for tok in args.orders.split(",") if tok.strip()]
    except ValueError as exc:
        raise InputError(f"--orders must be a comma list of integers: {exc}") from exc
    if not orders:
        raise InputError("--orders must name at least one order")
    sol = process.solve_alpha_spectral(model, args.distortion)
    reference = process.spectral_rate_perp(model, sol.alpha)
    rows = process.convergence_experiment(model, args.distortion, orders)
    lines = ["N,R_perp_N,R_perp_spectral,abs_gap"]
    for row in rows:
        lines.append(f"{row.order},{fmt(row.rate)},{fmt(reference)},{fmt(row.gap)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_validate(args) -> int:
    kind, model = load_source(args.input)
    if kind != "vector":
        raise UdrdError("validate requires a vector source (covariance or eigenvalues)")
    src = model
    sol = vector.solve_alpha(src, args.distortion)
    law = vector.optimal_distortion_law(src, sol.alpha)
    rate = vector.rate_perp(src, sol.alpha)

    checks = {}

    mi = validation.gaussian_mi(src, law.covariance)
    checks["mi_identity"] = {
        "pass": bool(abs(mi - rate) <= 1e-10),
        "mi": float(fmt(mi)),
        "rate_perp": float(fmt(rate)),
        "abs_error": float(fmt(abs(mi - rate))),
        "tolerance": 1e-10,
    }

    if src.n == 2:
        budget = 2.0 * sol.achieved_distortion
        cell = budget / (args.grid_steps + 1)
        alloc, best_mi = validation.brute_force_optimum(
            src, sol.achieved_distortion, args.grid_steps
        )
        dev = float(np.max(np.abs(alloc - law.band_variances)))
        checks["grid_search"] = {
            "pass": bool(dev <= cell and -1e-12 <= best_mi - rate <= 1e-4),
            "allocation": [float(fmt(v)) for v in alloc],
            "band_variances": [float(fmt(v)) for v in law.band_variances],
            "max_deviation": float(fmt(dev)),
            "grid_cell": float(fmt(cell)),
            "mi_excess": float(fmt(best_mi - rate)),
        }

    if src.n >= 2:
        excess = validation.offdiagonal_suboptimality(src, sol.alpha, seed=args.seed)
        checks["perturbation"] = {
            "pass": bool(excess > -1e-12),
            "min_mi_excess": float(fmt(excess)),
        }

    report_mc = validation.monte_carlo_feasibility(src, law, args.samples, args.seed)
    bound = validation.cross_cov_tolerance(src, law, args.samples)
    checks["cross_covariance"] = {
        "pass": bool(report_mc.empirical_cross_cov_max <= bound),
        "max_entry": float(fmt(report_mc.empirical_cross_cov_max)),
        "bound": float(fmt(bound)),
    }
    rel = abs(report_mc.empirical_distortion - report_mc.target_distortion)
    rel /= report_mc.target_distortion
    checks["distortion_budget"] = {
        "pass": bool(rel <= 0.02),
        "empirical": float(fmt(report_mc.empirical_distortion)),
        "target": float(fmt(report_mc.target_distortion)),
        "rel_error": float(fmt(rel)),
        "tolerance": 0.02,
    }

    all_pass = all(c["pass"] for c in checks.values())
    report = {
        "input": {"n": src.n, "distortion": float(fmt(args.distortion)),
                  "samples": int(args.samples), "seed": int(args.seed)},
        "alpha": float(fmt(sol.alpha)),
        "checks": checks,
        "all_pass": all_pass,
    }
    sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return 0 if all_pass else 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="udrd",
        description="Rate-distortion curves for Gaussian sources whose "
        "reconstruction error must stay uncorrelated with the source.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", help="evaluate one curve point")
    p.add_argument("--input", required=True, help="source document (JSON)")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--distortion", type=float)
    group.add_argument("--rate", type=float)
    p.add_argument("--units", choices=("nats", "bits"), default="nats")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_point)

    s = sub.add_parser("sweep", help="sweep distortion and emit the curve")
    s.add_argument("--input", required=True)
    s.add_argument("--d-min", dest="d_min", type=float, required=True)
    s.add_argument("--d-max", dest="d_max", type=float, required=True)
    s.add_argument("--points", type=int, required=True)
    s.add_argument("--log-spaced", dest="log_spaced", action="store_true")
    s.add_argument("--units", choices=("nats", "bits"), default="nats")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("converge", help="finite-order rates vs the spectral limit")
    c.add_argument("--input", required=True)
    c.add_argument("--distortion", type=float, required=True)
    c.add_argument("--orders", required=True, help="comma list, e.g. 16,64,256")
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_converge)

    v = sub.add_parser("validate", help="run the oracle suite and report")
    v.add_argument("--input", required=True)
    v.add_argument("--distortion", type=float, required=True)
    v.add_argument("--samples", type=int, default=100_000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--grid-steps", dest="grid_steps", type=int, default=400)
    v.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UdrdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
