"""Rate-distortion quantities for Gaussian stationary processes, plus the
finite-order Toeplitz truncations that approach them.

Spectra are evaluated on [0, pi] (real processes are even in frequency);
integrals over [-pi, pi] are folded onto that half-line. One composite
Simpson engine serves every integral, including the inverse cosine
transform that recovers autocorrelations from non-AR(1) models.
"""

import math
import os
from dataclasses import dataclass
from typing import Union

import numpy as np

from ._kernels import distortion_sum, rate_sum
from .analysis import WaterfillSolution
from .errors import AdmissibilityError, DegenerateToeplitz, DomainError
from .solvers import solve_decreasing, solve_increasing
from .vector import (
    LN2,
    AlphaSolution,
    RdPoint,
    SourceCovariance,
    _require_positive_alpha,
    _require_units,
)

DEFAULT_SUBINTERVALS = 4096
QUAD_ENV_VAR = "UDRD_QUAD_POINTS"

# Sampled spectra whose minimum falls below this fraction of the maximum
# are rejected: near-zeros make the sqrt terms ill-conditioned.
ADMISSIBILITY_FLOOR = 1e-9


@dataclass(frozen=True)
class ArSpectrum:
    """Autoregressive spectrum noise_var / |1 - sum a_m e^{-jmw}|^2."""

    coeffs: tuple
    noise_var: float = 1.0
    floor: float = ADMISSIBILITY_FLOOR

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if not np.isfinite(self.noise_var) or self.noise_var <= 0.0:
            raise DomainError(f"innovation variance must be positive, got {self.noise_var}")
        if coeffs:
            # roots of z^p - a_1 z^{p-1} - ... - a_p must stay inside the unit circle
            poly = np.concatenate(([1.0], -np.asarray(coeffs)))
            roots = np.roots(poly)
            if roots.size and np.max(np.abs(roots)) >= 1.0:
                raise DomainError("autoregressive coefficients are not stable")


@dataclass(frozen=True)
class TabulatedSpectrum:
    """Spectrum sampled on a uniform grid over [0, pi], endpoints included;
    evaluation interpolates linearly."""

    samples: np.ndarray
    floor: float = ADMISSIBILITY_FLOOR

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.float64).ravel()
        if s.size < 2 or not np.all(np.isfinite(s)):
            raise DomainError("tabulated spectrum needs at least two finite samples")
        object.__setattr__(self, "samples", s)


@dataclass(frozen=True)
class AutocorrelationSpectrum:
    """Spectrum r_0 + 2 sum r_k cos(k w) from lags r_0..r_L."""

    lags: np.ndarray
    floor: float = ADMISSIBILITY_FLOOR

    def __post_init__(self):
        r = np.asarray(self.lags, dtype=np.float64).ravel()
        if r.size < 1 or not np.all(np.isfinite(r)):
            raise DomainError("autocorrelation lags must be a non-empty finite array")
        object.__setattr__(self, "lags", r)


SpectrumModel = Union[ArSpectrum, TabulatedSpectrum, AutocorrelationSpectrum]


@dataclass(frozen=True)
class QuadratureGrid:
    """Composite Simpson nodes and weights on [0, pi]; weights sum to pi."""

    nodes: np.ndarray
    weights: np.ndarray

    @classmethod
    def simpson(cls, subintervals: int) -> "QuadratureGrid":
        m = int(subintervals)
        if m < 2:
            raise DomainError(f"quadrature needs at least 2 subintervals, got {subintervals}")
        if m % 2:
            m += 1  # Simpson needs an even subinterval count
        nodes = np.linspace(0.0, math.pi, m + 1)
        w = np.full(m + 1, 2.0)
        w[1::2] = 4.0
        w[0] = w[-1] = 1.0
        return cls(nodes=nodes, weights=w * (math.pi / m) / 3.0)


def default_grid() -> QuadratureGrid:
    """Grid at the default resolution, honoring UDRD_QUAD_POINTS."""
    raw = os.environ.get(QUAD_ENV_VAR, "").strip()
    if not raw:
        return QuadratureGrid.simpson(DEFAULT_SUBINTERVALS)
    try:
        m = int(raw)
    except ValueError as exc:
        raise DomainError(f"{QUAD_ENV_VAR} must be a positive integer, got {raw!r}") from exc
    if m <= 0:
        raise DomainError(f"{QUAD_ENV_VAR} must be a positive integer, got {raw!r}")
    return QuadratureGrid.simpson(m)


@dataclass(frozen=True)
class SpectralDistortionLaw:
    """Optimal error spectrum sampled on a quadrature grid."""

    grid: QuadratureGrid
    samples: np.ndarray
    alpha: float

    @property
    def distortion(self) -> float:
        return float(self.grid.weights @ self.samples) / math.pi


@dataclass(frozen=True)
class ConvergenceRow:
    order: int
    rate: float
    gap: float


def eval_spectrum(model: SpectrumModel, omega):
    """Evaluate the spectrum at omega (scalar or array) in [0, pi]."""
    w = np.asarray(omega, dtype=np.float64)
    if np.any(w < -1e-12) or np.any(w > math.pi + 1e-12):
        raise DomainError("omega must lie in [0, pi]")
    if isinstance(model, ArSpectrum):
        acc = np.ones_like(w, dtype=np.complex128)
        for m, a_m in enumerate(model.coeffs, start=1):
            acc = acc - a_m * np.exp(-1j * m * w)
        out = model.noise_var / np.abs(acc) ** 2
    elif isinstance(model, AutocorrelationSpectrum):
        r = model.lags
        out = np.full_like(w, r[0])
        for k in range(1, r.size):
            out = out + 2.0 * r[k] * np.cos(k * w)
    elif isinstance(model, TabulatedSpectrum):
        grid = np.linspace(0.0, math.pi, model.samples.size)
        out = np.interp(w, grid, model.samples)
    else:
        raise DomainError(f"unknown spectrum model {type(model).__name__}")
    if np.any(out <= 0.0) or not np.all(np.isfinite(out)):
        raise AdmissibilityError("spectrum is not strictly positive at the requested frequency")
    return float(out) if np.isscalar(omega) else out


def sample_spectrum(model: SpectrumModel, grid: QuadratureGrid) -> np.ndarray:
    """Spectrum on the grid nodes, checked against the admissibility floor."""
    s = eval_spectrum(model, grid.nodes)
    if s.min() <= model.floor * s.max():
        raise AdmissibilityError(
            f"sampled spectrum minimum {s.min():.3e} falls below "
            f"{model.floor:.1e} of its maximum {s.max():.3e}"
        )
    return s


def spectral_distortion_of_alpha(
    model: SpectrumModel, alpha: float, grid: QuadratureGrid | None = None
) -> float:
    """Distortion (1/4pi) integral of (sqrt(S+a) - sqrt(S)) sqrt(S) over [-pi, pi]."""
    a = _require_positive_alpha(alpha)
    g = grid or default_grid()
    s = sample_spectrum(model, g)
    return 0.5 * distortion_sum(s, a, weights=g.weights) / math.pi


def spectral_rate_perp(
    model: SpectrumModel, alpha: float, grid: QuadratureGrid | None = None
) -> float:
    """Rate (1/2pi) integral of log((sqrt(S+a) + sqrt(S))/sqrt(a)) in nats."""
    a = _require_positive_alpha(alpha)
    g = grid or default_grid()
    s = sample_spectrum(model, g)
    return rate_sum(s, a, weights=g.weights) / math.pi


def solve_alpha_spectral(
    model: SpectrumModel, target_d: float, grid: QuadratureGrid | None = None
) -> AlphaSolution:
    """Unique alpha matching the target distortion on the spectral map."""
    g = grid or default_grid()
    res = solve_increasing(lambda a: spectral_distortion_of_alpha(model, a, g), target_d)
    return AlphaSolution(
        alpha=res.x,
        target_distortion=float(target_d),
        achieved_distortion=res.achieved,
        iterations=res.iterations,
        residual=res.residual,
    )


def optimal_spectrum(
    model: SpectrumModel, alpha: float, grid: QuadratureGrid | None = None
) -> SpectralDistortionLaw:
    """Optimal error spectrum (1/2)(sqrt(S+a) - sqrt(S)) sqrt(S) on the grid."""
    a = _require_positive_alpha(alpha)
    g = grid or default_grid()
    s = sample_spectrum(model, g)
    samples = 0.5 * s * a / (np.sqrt(s * (s + a)) + s)
    return SpectralDistortionLaw(grid=g, samples=samples, alpha=a)


def autocorrelation(
    model: SpectrumModel, max_lag: int, grid: QuadratureGrid | None = None
) -> np.ndarray:
    """Lags r_0..r_max_lag of the process.

    First-order AR models use the closed form noise_var * a^k / (1 - a^2);
    explicit lag models are returned as stored (zero-padded); everything
    else goes through the inverse cosine transform on the quadrature grid.
    """
    if max_lag < 0:
        raise DomainError("max_lag must be nonnegative")
    if isinstance(model, ArSpectrum) and len(model.coeffs) == 1:
        a = model.coeffs[0]
        k = np.arange(max_lag + 1)
        return model.noise_var * a**k / (1.0 - a * a)
    if isinstance(model, ArSpectrum) and not model.coeffs:
        r = np.zeros(max_lag + 1)
        r[0] = model.noise_var
        return r
    if isinstance(model, AutocorrelationSpectrum):
        r = np.zeros(max_lag + 1)
        upto = min(max_lag + 1, model.lags.size)
        r[:upto] = model.lags[:upto]
        return r
    g = grid or default_grid()
    s = sample_spectrum(model, g)
    k = np.arange(max_lag + 1)
    cosines = np.cos(np.outer(k, g.nodes))
    return (cosines * g.weights) @ s / math.pi


def toeplitz_truncation(
    model: SpectrumModel, order: int, grid: QuadratureGrid | None = None
) -> SourceCovariance:
    """Order-N Toeplitz covariance with entries r_|i-j| from the model."""
    n = int(order)
    if n < 1:
        raise DomainError(f"order must be at least 1, got {order}")
    r = autocorrelation(model, n - 1, grid)
    idx = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    try:
        return SourceCovariance.from_matrix(r[idx])
    except DomainError as exc:
        raise DegenerateToeplitz(f"order-{n} truncation is numerically singular") from exc


def convergence_experiment(
    model: SpectrumModel,
    target_d: float,
    orders,
    grid: QuadratureGrid | None = None,
) -> list[ConvergenceRow]:
    """Finite-order rates against the spectral limit.

    For each order N the Toeplitz truncation is solved as a vector source
    at the same target distortion; the gap column records the absolute
    difference from the spectral rate.
    """
    from .vector import rate_perp as vector_rate_perp
    from .vector import solve_alpha as vector_solve_alpha

    order_list = [int(n) for n in orders]
    if order_list != sorted(order_list):
        raise DomainError("orders must be ascending")
    g = grid or default_grid()
    reference = spectral_rate_perp(model, solve_alpha_spectral(model, target_d, g).alpha, g)
    rows = []
    for n in order_list:
        src = toeplitz_truncation(model, n, g)
        sol = vector_solve_alpha(src, target_d)
        rate_n = vector_rate_perp(src, sol.alpha)
        rows.append(ConvergenceRow(order=n, rate=rate_n, gap=abs(rate_n - reference)))
    return rows


def spectral_waterfill(
    model: SpectrumModel, target_d: float, grid: QuadratureGrid | None = None
) -> WaterfillSolution:
    """Classical water-filling on the spectrum (CLI support for process
    sources; mirrors the vector construction band-for-band)."""
    d = float(target_d)
    if not np.isfinite(d) or d <= 0.0:
        raise DomainError(f"target distortion must be positive, got {target_d}")
    g = grid or default_grid()
    s = sample_spectrum(model, g)
    mean_power = float(g.weights @ s) / math.pi

    def dist_at(theta: float) -> float:
        return float(g.weights @ np.minimum(theta, s)) / math.pi

    s_min, s_max = float(s.min()), float(s.max())
    if d >= mean_power:
        theta = s_max
    elif d <= s_min:
        theta = d
    else:
        theta = solve_increasing(dist_at, d, lo=s_min, hi=s_max).x

    logs = np.log(s / theta)
    rate = 0.5 * float(g.weights @ np.maximum(logs, 0.0)) / math.pi
    active = int(np.count_nonzero(s > theta))
    return WaterfillSolution(theta=theta, rate=rate, distortion=dist_at(theta), active_bands=active)


def spectral_rd_point(
    model: SpectrumModel,
    target_d: float,
    units: str = "nats",
    grid: QuadratureGrid | None = None,
) -> RdPoint:
    """One curve point for a process source at a target distortion."""
    _require_units(units)
    g = grid or default_grid()
    sol = solve_alpha_spectral(model, target_d, g)
    return _assemble_spectral_point(model, sol.alpha, sol.achieved_distortion, units, g)


def spectral_distortion_of_rate(
    model: SpectrumModel,
    target_rate: float,
    units: str = "nats",
    grid: QuadratureGrid | None = None,
) -> RdPoint:
    """One curve point for a process source at a target rate."""
    _require_units(units)
    g = grid or default_grid()
    rate_nats = float(target_rate)
    if units == "bits":
        rate_nats *= LN2
    res = solve_decreasing(lambda a: spectral_rate_perp(model, a, g), rate_nats)
    return _assemble_spectral_point(
        model, res.x, spectral_distortion_of_alpha(model, res.x, g), units, g
    )


def _assemble_spectral_point(
    model: SpectrumModel, alpha: float, distortion: float, units: str, grid: QuadratureGrid
) -> RdPoint:
    r_perp = spectral_rate_perp(model, alpha, grid)
    r_sh = spectral_waterfill(model, distortion, grid).rate
    scale = 1.0 / LN2 if units == "bits" else 1.0
    return RdPoint(
        distortion=distortion,
        alpha=alpha,
        rate_perp=r_perp * scale,
        rate_shannon=r_sh * scale,
        rate_loss=(r_perp - r_sh) * scale,
        units=units,
    )
