"""Rate-distortion quantities for Gaussian random vectors whose
reconstruction error must stay uncorrelated with the source.

All rates are natural-log (nats per dimension) internally; bit output is
a presentation-layer division by ln 2.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from ._kernels import distortion_sum, rate_sum
from .errors import DomainError
from .solvers import solve_decreasing, solve_increasing

LN2 = math.log(2.0)

# Eigenvalues at or below this fraction of the largest one make the
# per-band formulas ill-conditioned; such sources are rejected.
DEGENERACY_RTOL = 1e-12


def _require_positive_alpha(alpha: float) -> float:
    a = float(alpha)
    if not np.isfinite(a) or a <= 0.0:
        raise DomainError(f"alpha must be positive and finite, got {alpha}")
    return a


def _require_units(units: str) -> str:
    if units not in ("nats", "bits"):
        raise DomainError(f"units must be 'nats' or 'bits', got {units!r}")
    return units


@dataclass(frozen=True)
class SourceCovariance:
    """Positive-definite source covariance with its cached eigensystem."""

    matrix: np.ndarray
    eig: linalg.EigenDecomposition
    min_eigenvalue: float

    @classmethod
    def from_matrix(cls, matrix) -> "SourceCovariance":
        m = linalg.as_symmetric(matrix)
        eig = linalg.eigh(m)
        w = eig.eigenvalues
        if w[0] <= DEGENERACY_RTOL * w[-1] or w[0] <= 0.0:
            raise DomainError(
                "source covariance must be positive definite "
                f"(eigenvalue range [{w[0]:.3e}, {w[-1]:.3e}])"
            )
        return cls(matrix=m, eig=eig, min_eigenvalue=float(w[0]))

    @classmethod
    def from_eigenvalues(cls, values) -> "SourceCovariance":
        w = np.asarray(values, dtype=np.float64).ravel()
        if w.size == 0 or not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise DomainError("eigenvalues must be a non-empty positive array")
        if w.min() <= DEGENERACY_RTOL * w.max():
            raise DomainError("eigenvalue spread exceeds the positive-definiteness cap")
        order = np.argsort(w, kind="stable")
        eig = linalg.EigenDecomposition(
            eigenvalues=w[order], eigenvectors=np.eye(w.size)[:, order]
        )
        return cls(matrix=np.diag(w), eig=eig, min_eigenvalue=float(w[order][0]))

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.eig.eigenvalues


@dataclass(frozen=True)
class AlphaSolution:
    """Solved trade-off parameter with solver diagnostics."""

    alpha: float
    target_distortion: float
    achieved_distortion: float
    iterations: int
    residual: float


@dataclass(frozen=True)
class DistortionLaw:
    """Optimal error statistics: full covariance plus per-band variances
    in the eigenbasis of the source."""

    covariance: np.ndarray
    band_variances: np.ndarray
    klt: linalg.EigenDecomposition


@dataclass(frozen=True)
class RdPoint:
    distortion: float
    alpha: float
    rate_perp: float
    rate_shannon: float
    rate_loss: float
    units: str


@dataclass(frozen=True)
class KltCoder:
    """Transform-coder realization: orthogonal analysis/synthesis pair and
    the per-band Gaussian noise variances that reproduce the optimal error
    covariance end to end."""

    analysis_transform: np.ndarray
    synthesis_transform: np.ndarray
    band_variances: np.ndarray


def band_noise_variances(eigenvalues: np.ndarray, alpha: float) -> np.ndarray:
    """Per-band optimal noise variances (1/2)(sqrt(v^2 + v*alpha) - v)."""
    v = np.asarray(eigenvalues, dtype=np.float64)
    return 0.5 * v * alpha / (np.sqrt(v * (v + alpha)) + v)


def distortion_of_alpha(src: SourceCovariance, alpha: float) -> float:
    """Mean per-dimension distortion reached at a given alpha."""
    a = _require_positive_alpha(alpha)
    return 0.5 * distortion_sum(src.eigenvalues, a) / src.n


def rate_perp(src: SourceCovariance, alpha: float) -> float:
    """Minimum rate (nats/dimension) under the uncorrelated-error
    constraint, parameterized by alpha."""
    a = _require_positive_alpha(alpha)
    return rate_sum(src.eigenvalues, a) / src.n


def solve_alpha(src: SourceCovariance, target_d: float) -> AlphaSolution:
    """Invert the distortion map: unique alpha with D(alpha) = target_d."""
    res = solve_increasing(lambda a: distortion_of_alpha(src, a), target_d)
    return AlphaSolution(
        alpha=res.x,
        target_distortion=float(target_d),
        achieved_distortion=res.achieved,
        iterations=res.iterations,
        residual=res.residual,
    )


def optimal_distortion_law(src: SourceCovariance, alpha: float) -> DistortionLaw:
    """Covariance of the optimal reconstruction error at a given alpha.

    The covariance is the spectral image of the per-band variance map, so
    it commutes with the source covariance and its trace over N equals
    distortion_of_alpha.
    """
    a = _require_positive_alpha(alpha)
    bands = band_noise_variances(src.eigenvalues, a)
    q = src.eig.eigenvectors
    cov = (q * bands) @ q.T
    return DistortionLaw(
        covariance=0.5 * (cov + cov.T),
        band_variances=bands,
        klt=src.eig,
    )


def klt_coder_realization(src: SourceCovariance, alpha: float) -> KltCoder:
    """Orthogonal transform pair and band noise variances realizing the
    optimal error covariance.

    The analysis matrix T holds the eigenvectors of the source covariance
    (T diag(w) T^T reproduces it); the synthesis matrix is its transpose,
    so the pair reconstructs perfectly, and injecting independent Gaussian
    noise with the returned band variances between them yields an
    end-to-end error covariance of T diag(bands) T^T.
    """
    law = optimal_distortion_law(src, alpha)
    t = src.eig.eigenvectors
    return KltCoder(
        analysis_transform=t,
        synthesis_transform=t.T,
        band_variances=law.band_variances,
    )


def rd_point(src: SourceCovariance, target_d: float, units: str = "nats") -> RdPoint:
    """Evaluate one point of the curve at a target distortion."""
    _require_units(units)
    sol = solve_alpha(src, target_d)
    return _assemble_point(src, sol.alpha, sol.achieved_distortion, units)


def distortion_of_rate(src: SourceCovariance, target_rate: float, units: str = "nats") -> RdPoint:
    """Evaluate one point of the curve at a target rate (inverse sweep)."""
    _require_units(units)
    rate_nats = float(target_rate)
    if units == "bits":
        rate_nats *= LN2
    res = solve_decreasing(lambda a: rate_perp(src, a), rate_nats)
    return _assemble_point(src, res.x, distortion_of_alpha(src, res.x), units)


def _assemble_point(src: SourceCovariance, alpha: float, distortion: float, units: str) -> RdPoint:
    from . import analysis  # deferred: analysis builds on this module

    r_perp = rate_perp(src, alpha)
    r_sh = analysis.shannon_rd(src, distortion).rate
    scale = 1.0 / LN2 if units == "bits" else 1.0
    return RdPoint(
        distortion=distortion,
        alpha=alpha,
        rate_perp=r_perp * scale,
        rate_shannon=r_sh * scale,
        rate_loss=(r_perp - r_sh) * scale,
        units=units,
    )
