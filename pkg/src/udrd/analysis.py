"""Comparative quantities: classical reverse water-filling, the rate-loss
closed form, the Wiener-estimator distortion ratio, and the slope identity
dR/dD = -2/alpha."""

import math
from dataclasses import dataclass

import numpy as np

from . import vector
from .errors import DomainError
from .solvers import solve_increasing


@dataclass(frozen=True)
class WaterfillSolution:
    theta: float
    rate: float
    distortion: float
    active_bands: int


@dataclass(frozen=True)
class RateLoss:
    """Gap between the constrained and classical rates at one alpha.

    ``exact`` marks the regime D(alpha) <= min eigenvalue, where the
    closed form equals the gap identically; outside it the closed form is
    only an upper bound and ``value`` falls back to the direct difference.
    """

    value: float
    exact: bool


@dataclass(frozen=True)
class WienerBound:
    d_perp: float
    d_prime: float
    ratio: float


def shannon_rd(src: vector.SourceCovariance, target_d: float) -> WaterfillSolution:
    """Classical rate-distortion point by reverse water-filling.

    Bands above the water level theta are coded down to theta, the rest
    are dropped; for target distortion at or above the mean source
    variance the rate is zero with theta at the top eigenvalue.
    """
    d = float(target_d)
    if not np.isfinite(d) or d <= 0.0:
        raise DomainError(f"target distortion must be positive, got {target_d}")
    lams = src.eigenvalues
    n = src.n
    mean_power = float(lams.mean())

    if d >= mean_power:
        theta = float(lams[-1])
    elif d <= src.min_eigenvalue:
        theta = d  # every band active; the water-level map is the identity here
    else:
        res = solve_increasing(
            lambda t: float(np.minimum(t, lams).mean()),
            d,
            lo=src.min_eigenvalue,
            hi=float(lams[-1]),
        )
        theta = res.x

    achieved = float(np.minimum(theta, lams).mean())
    logs = np.log(lams / theta)
    rate = 0.5 * float(logs[logs > 0.0].sum()) / n
    active = int(np.count_nonzero(lams > theta))
    return WaterfillSolution(theta=theta, rate=rate, distortion=achieved, active_bands=active)


def rate_loss(src: vector.SourceCovariance, alpha: float) -> RateLoss:
    """Rate gap over the classical curve at a given alpha.

    In the all-bands-active regime the closed form
    (1/N) sum log((sqrt(v+a) + sqrt(v))/sqrt(v)) + (1/2) log(D(a)/a)
    is exact; otherwise the direct difference is reported and flagged.
    """
    a = vector._require_positive_alpha(alpha)
    d = vector.distortion_of_alpha(src, a)
    if d <= src.min_eigenvalue:
        lams = src.eigenvalues
        first = float(np.log((np.sqrt(lams + a) + np.sqrt(lams)) / np.sqrt(lams)).mean())
        return RateLoss(value=first + 0.5 * math.log(d / a), exact=True)
    gap = vector.rate_perp(src, a) - shannon_rd(src, d).rate
    return RateLoss(value=gap, exact=False)


def wiener_ratio(src: vector.SourceCovariance, alpha: float) -> WienerBound:
    """Distortion ratio between the constrained-optimal error and the
    Wiener-filtered reconstruction of the same channel output.

    Per band the Wiener distortion is (s - v)^2 / alpha with
    s = sqrt(v^2 + v*alpha), which keeps the ratio strictly above 1.
    """
    a = vector._require_positive_alpha(alpha)
    lams = src.eigenvalues
    gaps = 2.0 * vector.band_noise_variances(lams, a)  # s - v per band
    d_perp = 0.5 * float(gaps.mean())
    d_prime = float((gaps**2).mean()) / a
    return WienerBound(d_perp=d_perp, d_prime=d_prime, ratio=d_perp / d_prime)


def derivative_check(
    src: vector.SourceCovariance, alpha: float, h: float | None = None
) -> tuple[float, float]:
    """Compare the analytic slope -2/alpha with a central finite
    difference of the rate over distortion.

    Uses a relative step of 1e-6 by default and Richardson-extrapolates
    when the half-step estimate disagrees, which flags cancellation
    without referencing the analytic value.
    """
    a = vector._require_positive_alpha(alpha)
    d0 = vector.distortion_of_alpha(src, a)
    step = float(h) if h is not None else 1e-6 * d0
    if step <= 0.0 or step >= d0:
        raise DomainError(f"finite-difference step {step} invalid for distortion {d0}")

    def rate_at(d: float) -> float:
        return vector.rate_perp(src, vector.solve_alpha(src, d).alpha)

    def central(s: float) -> float:
        return (rate_at(d0 + s) - rate_at(d0 - s)) / (2.0 * s)

    d_full = central(step)
    d_half = central(0.5 * step)
    if abs(d_full - d_half) > 1e-7 * max(abs(d_half), 1e-300):
        numeric = (4.0 * d_half - d_full) / 3.0
    else:
        numeric = d_half
    return (-2.0 / a, numeric)
