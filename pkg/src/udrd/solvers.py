"""Bracketed bisection for strictly monotone scalar maps.

Every root search in the package (distortion over alpha, rate over alpha,
water level over distortion) goes through these helpers: geometric
bracket expansion followed by bisection run to bracket collapse, which
leaves the residual at the conditioning limit of the map rather than at
the acceptance tolerance.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, SolverError

MAX_BISECTIONS = 200
MAX_EXPANSIONS = 2100  # enough doublings/halvings to cross the float64 range
REL_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class RootResult:
    x: float
    achieved: float
    iterations: int
    residual: float


def _bisect_increasing(
    f: Callable[[float], float],
    target: float,
    lo: float,
    hi: float,
    rel_tol: float,
) -> RootResult:
    f_hi = f(hi)
    n_expand = 0
    while f_hi < target:
        lo, hi = hi, hi * 2.0
        f_hi = f(hi)
        n_expand += 1
        if n_expand > MAX_EXPANSIONS or not np.isfinite(hi):
            raise SolverError(f"target {target} not reachable by bracket expansion")
    f_lo = f(lo)
    n_expand = 0
    while f_lo > target:
        hi, lo = lo, lo * 0.5
        f_lo = f(lo)
        n_expand += 1
        if n_expand > MAX_EXPANSIONS or lo == 0.0:
            raise SolverError(f"target {target} below the reachable range")

    best_x, best_val = (lo, f_lo) if abs(f_lo - target) <= abs(f_hi - target) else (hi, f_hi)
    iterations = 0
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # bracket collapsed to adjacent floats
            break
        val = f(mid)
        iterations += 1
        if abs(val - target) <= abs(best_val - target):
            best_x, best_val = mid, val
        if val == target:
            break
        if val < target:
            lo = mid
        else:
            hi = mid

    residual = abs(best_val - target)
    if residual > rel_tol * max(abs(target), np.finfo(float).tiny):
        raise SolverError(
            f"bisection stalled: residual {residual:.3e} exceeds "
            f"{rel_tol:.1e} relative at target {target}"
        )
    return RootResult(x=best_x, achieved=best_val, iterations=iterations, residual=residual)


def _require_positive_target(target: float) -> float:
    t = float(target)
    if not np.isfinite(t) or t <= 0.0:
        raise DomainError(f"target must be positive and finite, got {target}")
    return t


def solve_increasing(
    f: Callable[[float], float],
    target: float,
    lo: float = 1e-12,
    hi: float = 1.0,
    rel_tol: float = REL_RESIDUAL_TOL,
) -> RootResult:
    """Solve f(x) = target for a strictly increasing f on (0, inf)."""
    return _bisect_increasing(f, _require_positive_target(target), lo, hi, rel_tol)


def solve_decreasing(
    f: Callable[[float], float],
    target: float,
    lo: float = 1e-12,
    hi: float = 1.0,
    rel_tol: float = REL_RESIDUAL_TOL,
) -> RootResult:
    """Solve f(x) = target for a strictly decreasing f on (0, inf)."""
    t = _require_positive_target(target)
    res = _bisect_increasing(lambda x: -f(x), -t, lo, hi, rel_tol)
    return RootResult(
        x=res.x, achieved=-res.achieved, iterations=res.iterations, residual=res.residual
    )
